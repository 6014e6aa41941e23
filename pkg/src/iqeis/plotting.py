"""Bode figures rendered to files next to the CSV outputs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .afe import RandlesModel  # noqa: E402


def bode_figure(result, channels=None, calibrated=False, path=None):
    """Magnitude and phase vs frequency, one marker series per channel.

    Channels with a Randles model get their closed-form response drawn as a
    solid line in the same colour. Returns the figure; saves it if ``path``.
    """
    duts = {c.channel_id: c.dut for c in (channels or ())}
    fig, (ax_m, ax_p) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ids = sorted({p.channel_id for p in result.points})
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]

    for i, cid in enumerate(ids):
        pts = sorted(result.channel(cid), key=lambda p: p.f_q)
        f = np.array([p.f_q for p in pts])
        mag = np.array([p.z_mag_cal if calibrated else p.z_mag_raw for p in pts])
        ph = np.array([p.z_phase for p in pts])
        col = colors[i % len(colors)]
        ax_m.loglog(f, mag, "o", ms=3, color=col, label=f"ch{cid}")
        ax_p.semilogx(f, ph, "o", ms=3, color=col)

        dut = duts.get(cid)
        if isinstance(dut, RandlesModel):
            ff = np.geomspace(f.min(), f.max(), 400)
            z = dut.impedance(2 * math.pi * ff)
            scale = result.metadata["cal"]["alpha"] if calibrated else 1.0
            ax_m.loglog(ff, scale * np.abs(z), "-", lw=1, color=col)
            ax_p.semilogx(ff, np.degrees(np.angle(z)), "-", lw=1, color=col)

    ax_m.set_ylabel("|Z| (ohm, calibrated)" if calibrated else "|Z| (ohm)")
    ax_p.set_ylabel("phase (deg)")
    ax_p.set_xlabel("frequency (Hz)")
    ax_m.legend(fontsize=8, frameon=False)
    for ax in (ax_m, ax_p):
        ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    if path is not None:
        fig.savefig(path, dpi=120)
        plt.close(fig)
    return fig
