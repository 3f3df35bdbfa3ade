"""Stream report: delimited per-frame stats plus rendered figures.

Writes into an output directory:

    report.csv      per-frame spike counts and coverage (t,spikes,coverage)
    coverage.png    coverage per frame over time
    recon.png       TFI and TFP reconstructions at the final step
    isi.png         pooled inter-spike-interval histogram

Figures are rendered with the Agg backend and scrubbed metadata so
repeated runs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np

from .reconstruct import tfi, tfp
from .spike_model import SimulatorConfig, SpikeStream

_PNG_META = {"Software": None}


def _frame_stats(stream: SpikeStream) -> tuple[np.ndarray, np.ndarray]:
    bits = stream.to_bool()
    counts = bits.sum(axis=(1, 2), dtype=np.int64)
    return counts, counts / (stream.width * stream.height)


def _isi_values(stream: SpikeStream) -> np.ndarray:
    bits = stream.to_bool().reshape(stream.t_count, -1)
    gaps = []
    for px in range(bits.shape[1]):
        times = np.nonzero(bits[:, px])[0]
        if times.size >= 2:
            gaps.append(np.diff(times))
    if not gaps:
        return np.array([], dtype=np.int64)
    return np.concatenate(gaps)


def write_report(
    stream: SpikeStream,
    out_dir: Path,
    v_th: Optional[float] = None,
    window: Optional[int] = None,
    scale: float = 255.0,
) -> list[Path]:
    """Render the report; returns the written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    counts, cov = _frame_stats(stream)
    csv_path = out_dir / "report.csv"
    lines = ["t,spikes,coverage"]
    lines += [f"{t},{int(counts[t])},{float(cov[t])!r}" for t in range(stream.t_count)]
    csv_path.write_text("\n".join(lines) + "\n")
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.plot(np.arange(stream.t_count), cov, lw=1.2)
    ax.set_xlabel("frame")
    ax.set_ylabel("coverage")
    ax.set_title("spike coverage per frame")
    fig.tight_layout()
    cov_path = out_dir / "coverage.png"
    fig.savefig(cov_path, metadata=_PNG_META)
    plt.close(fig)
    written.append(cov_path)

    t_last = stream.t_count - 1
    w = int(window) if window else stream.t_count
    cfg = SimulatorConfig(v_th if v_th is not None else 1.0)
    tfi_img = tfi(stream, t_last, cfg).values
    tfp_img = tfp(stream, t_last, w, scale).values
    fig, axes = plt.subplots(1, 2, figsize=(8, 4))
    axes[0].imshow(tfi_img, cmap="gray", vmin=0.0, vmax=cfg.v_th)
    axes[0].set_title(f"TFI (t={t_last})")
    axes[1].imshow(tfp_img, cmap="gray", vmin=0.0, vmax=scale)
    axes[1].set_title(f"TFP (w={w})")
    for ax in axes:
        ax.set_axis_off()
    fig.tight_layout()
    recon_path = out_dir / "recon.png"
    fig.savefig(recon_path, metadata=_PNG_META)
    plt.close(fig)
    written.append(recon_path)

    isi = _isi_values(stream)
    fig, ax = plt.subplots(figsize=(6, 3.2))
    if isi.size:
        ax.hist(isi, bins=np.arange(1, isi.max() + 2) - 0.5, color="tab:blue")
    ax.set_xlabel("inter-spike interval (steps)")
    ax.set_ylabel("count")
    ax.set_title("inter-spike intervals")
    fig.tight_layout()
    isi_path = out_dir / "isi.png"
    fig.savefig(isi_path, metadata=_PNG_META)
    plt.close(fig)
    written.append(isi_path)

    return written
