"""Command-line interface.

One verb per pipeline operation so dataset recipes stay scriptable:

    simulate        integrate-and-fire over a directory of intensity frames
    simulate-image  coverage-calibrated stream from one static image
    tfi / tfp       dense reconstruction from a stream
    blur-avg        average a directory of frames into one blurry image
    blur-kernel     emit motion-blur kernel(s)
    convolve        apply a kernel with replicate padding
    fade            fade an RGB image toward grayscale by a mixing ratio
    gamma-sample    draw clamped-Gaussian mixing ratios
    probmap         predicted image -> firing-probability map
    sample-spikes   Bernoulli stream from a probability map
    align-loss      score a probability map against a ground-truth stream
    metrics         MSE / PSNR / SSIM line for an image pair
    pack / unpack   binary frames <-> SPKS container
    info            one-line stream summary
    report          delimited per-frame stats plus rendered figures

Exit codes: 0 success, 1 usage error, 2 I/O or format error.  Every
sampling verb takes --seed, and identical invocations with the same seed
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import alignment, formats, metrics, reconstruct, spike_model, synthesis
from .errors import SpikeKitError
from .rng import CounterRng
from .runtime import parallel_map

_FRAME_SUFFIXES = (".pgm", ".ppm", ".spkf")


class _UsageExit(Exception):
    """Raised instead of SystemExit on argparse errors."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageExit(f"{self.prog}: {message}")


def _positive_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive real, got {text!r}")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text!r}")
    return value


def _open_interval01(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text!r}")
    return value


def _noise_amp(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or not 0 <= value <= 0.5:
        raise argparse.ArgumentTypeError(f"must lie in [0, 0.5], got {text!r}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must fit in u64, got {text!r}")
    return value


def _frame_paths(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise SpikeKitError(f"not a directory: {directory}")
    paths = sorted(p for p in directory.iterdir() if p.suffix.lower() in _FRAME_SUFFIXES)
    if not paths:
        raise SpikeKitError(f"no frame files (*.pgm, *.ppm, *.spkf) in {directory}")
    return paths


def _load_gray_frames(directory: Path) -> list[np.ndarray]:
    def load(path: Path) -> np.ndarray:
        img = formats.load_image(path)
        if img.channels != 1:
            raise SpikeKitError(f"{path}: expected a grayscale frame, got RGB")
        return img.values

    return parallel_map(load, _frame_paths(directory))


def _write_recon(values_255: np.ndarray, out: Path) -> None:
    """Write a reconstruction given in the [0, 255] domain.

    PGM quantizes those values directly; SPKF stores them normalized to
    [0, 1] (value / 255) at full float precision.
    """
    if out.suffix.lower() == ".pgm":
        u8 = np.floor(np.clip(values_255, 0.0, 255.0) + 0.5).astype(np.uint8)
        formats.save_image(synthesis.Image.from_u8(u8), out)
    else:
        formats.save_image(synthesis.Image(np.clip(values_255 / 255.0, 0.0, 1.0)), out)


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return repr(float(value))


# ---------------------------------------------------------------- commands


def _cmd_simulate(args) -> None:
    frames = _load_gray_frames(Path(args.in_path))
    seq = spike_model.IntensitySequence(np.stack(frames))
    stream, _ = spike_model.simulate(seq, spike_model.SimulatorConfig(args.vth))
    formats.write_spks(Path(args.out), stream, v_th=args.vth)


def _cmd_simulate_image(args) -> None:
    img = formats.load_image(Path(args.in_path))
    if img.channels != 1:
        img = synthesis.grayscale(img)
    cfg = spike_model.SimulatorConfig(args.vth)
    seq = spike_model.calibrate_coverage(
        spike_model.IntensityFrame(img.values), args.frames, args.coverage, cfg
    )
    stream, _ = spike_model.simulate(seq, cfg)
    formats.write_spks(Path(args.out), stream, v_th=args.vth)


def _stream_vth(args, stored: Optional[float]) -> float:
    if args.vth is not None:
        return args.vth
    if stored is not None:
        return stored
    raise SpikeKitError("stream carries no v_th; pass --vth")


def _cmd_tfi(args) -> None:
    stream, stored = formats.read_spks(Path(args.in_path))
    v_th = _stream_vth(args, stored)
    frame = reconstruct.tfi(stream, args.t, spike_model.SimulatorConfig(v_th))
    _write_recon(frame.values * (255.0 / v_th), Path(args.out))


def _cmd_tfp(args) -> None:
    stream, _ = formats.read_spks(Path(args.in_path))
    frame = reconstruct.tfp(stream, args.t, args.window, args.scale)
    _write_recon(frame.values * (255.0 / args.scale), Path(args.out))


def _cmd_blur_avg(args) -> None:
    def load(path: Path) -> synthesis.Image:
        return formats.load_image(path)

    images = parallel_map(load, _frame_paths(Path(args.in_path)))
    formats.save_image(synthesis.average_blur(images), Path(args.out))


def _cmd_blur_kernel(args) -> None:
    out = Path(args.out)
    if args.length is not None or args.angle is not None:
        if args.length is None or args.angle is None:
            raise _UsageExit("blur-kernel: --length and --angle must be given together")
        kernels = [synthesis.motion_blur_kernel(args.length, args.angle, args.kernel_size)]
    else:
        if args.seed is None:
            raise _UsageExit("blur-kernel: pass --seed, or --length with --angle")
        kernels = synthesis.sample_blur_kernels(
            CounterRng(args.seed), args.kernel_count, args.kernel_size
        )
    if len(kernels) == 1 and out.suffix.lower() == ".spkf":
        formats.save_image(synthesis.Image(kernels[0].weights), out)
        return
    out.mkdir(parents=True, exist_ok=True)
    for i, kernel in enumerate(kernels):
        formats.save_image(synthesis.Image(kernel.weights), out / f"kernel_{i:02d}.spkf")


def _cmd_convolve(args) -> None:
    img = formats.load_image(Path(args.in_path))
    weights = formats.load_image(Path(args.kernel)).values
    # f32 storage dusts the normalization; renormalize before validating.
    kernel = synthesis.BlurKernel(weights / weights.sum())
    formats.save_image(synthesis.convolve(img, kernel), Path(args.out))


def _cmd_fade(args) -> None:
    img = formats.load_image(Path(args.in_path))
    if args.gamma is not None:
        gamma = args.gamma
    elif args.seed is not None:
        gamma = synthesis.sample_gamma(CounterRng(args.seed)).gamma
    else:
        raise _UsageExit("fade: pass --gamma or --seed")
    formats.save_image(synthesis.color_fade(img, gamma), Path(args.out))


def _cmd_gamma_sample(args) -> None:
    values = synthesis.sample_gamma(CounterRng(args.seed), count=args.count)
    for v in values:
        print(_fmt(v))


def _cmd_probmap(args) -> None:
    img = formats.load_image(Path(args.in_path))
    cfg = alignment.AlignConfig(sigma_s=args.sigma_s, gamma_c=args.gamma_c, noise_amp=args.noise)
    rng = CounterRng(args.seed) if args.seed is not None else None
    if cfg.noise_amp > 0 and rng is None:
        raise _UsageExit("probmap: --noise > 0 requires --seed")
    pmap = alignment.probability_map(img, cfg, rng)
    formats.save_image(synthesis.Image(pmap.p), Path(args.out))


def _cmd_sample_spikes(args) -> None:
    img = formats.load_image(Path(args.in_path))
    if img.channels != 1:
        raise SpikeKitError("probability maps must be single-channel")
    pmap = alignment.ProbabilityMap(img.values)
    stream = alignment.sample_spikes(pmap, args.frames, CounterRng(args.seed))
    formats.write_spks(Path(args.out), stream)


def _cmd_align_loss(args) -> None:
    img = formats.load_image(Path(args.in_path))
    if img.channels != 1:
        raise SpikeKitError("probability maps must be single-channel")
    pmap = alignment.ProbabilityMap(img.values)
    gt, _ = formats.read_spks(Path(args.ref))
    bce = alignment.alignment_loss(pmap, gt, eps=args.eps)
    rmse = alignment.rate_loss(pmap, gt)
    print(f"bce={_fmt(bce)} rate_mse={_fmt(rmse)}")


def _cmd_metrics(args) -> None:
    a = formats.load_image(Path(args.in_path))
    b = formats.load_image(Path(args.ref))
    rep = metrics.metric_report(a, b, max_i=args.max_i)
    print(f"mse={_fmt(rep.mse)} psnr={_fmt(rep.psnr_db)} ssim={_fmt(rep.ssim)}")


def _cmd_pack(args) -> None:
    frames = _load_gray_frames(Path(args.in_path))
    stack = np.stack(frames)
    if not np.isin(stack, (0.0, 1.0)).all():
        raise SpikeKitError("pack expects binary frames (pixel bytes 0 or 255)")
    stream = spike_model.SpikeStream.from_bool(stack.astype(bool))
    formats.write_spks(Path(args.out), stream, v_th=args.vth)


def _cmd_unpack(args) -> None:
    stream, _ = formats.read_spks(Path(args.in_path), strict=not args.lenient)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for t in range(stream.t_count):
        u8 = np.where(stream.frame(t), 255, 0).astype(np.uint8)
        formats.save_image(synthesis.Image.from_u8(u8), out / f"frame_{t:05d}.pgm")


def _cmd_info(args) -> None:
    stream, v_th = formats.read_spks(Path(args.in_path), strict=not args.lenient)
    line = (
        f"width={stream.width} height={stream.height} t_count={stream.t_count} "
        f"coverage={_fmt(spike_model.coverage(stream))}"
    )
    if v_th is not None:
        line += f" vth={_fmt(v_th)}"
    print(line)


def _cmd_report(args) -> None:
    from .report import write_report

    stream, v_th = formats.read_spks(Path(args.in_path))
    if args.vth is not None:
        v_th = args.vth
    written = write_report(stream, Path(args.out), v_th=v_th, window=args.window, scale=args.scale)
    for path in written:
        print(path)


# ---------------------------------------------------------------- parser


def _build_parser() -> _Parser:
    from . import __version__

    parser = _Parser(prog="spikekit", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"spikekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, handler, help_text: str) -> _Parser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("simulate", _cmd_simulate, "simulate a stream from a directory of intensity frames")
    p.add_argument("--in", dest="in_path", required=True, help="directory of grayscale frames")
    p.add_argument("--vth", type=_positive_float, default=1.0)
    p.add_argument("--out", required=True, help="output .spks path")

    p = add("simulate-image", _cmd_simulate_image, "coverage-calibrated stream from one image")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--coverage", type=_open_interval01, default=0.1)
    p.add_argument("--frames", type=_positive_int, default=8)
    p.add_argument("--vth", type=_positive_float, default=1.0)
    p.add_argument("--out", required=True)

    p = add("tfi", _cmd_tfi, "texture-from-interval reconstruction")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--t", type=_nonneg_int, required=True)
    p.add_argument("--vth", type=_positive_float, default=None, help="override stored v_th")
    p.add_argument("--out", required=True, help=".pgm (8-bit) or .spkf (value / v_th)")

    p = add("tfp", _cmd_tfp, "texture-from-playback reconstruction")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--t", type=_nonneg_int, required=True)
    p.add_argument("--window", type=_positive_int, required=True)
    p.add_argument("--scale", type=_positive_float, default=255.0)
    p.add_argument("--out", required=True, help=".pgm (8-bit) or .spkf (value / scale)")

    p = add("blur-avg", _cmd_blur_avg, "average a directory of frames")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)

    p = add("blur-kernel", _cmd_blur_kernel, "emit motion-blur kernel(s) as .spkf")
    p.add_argument("--kernel-size", type=_positive_int, default=40)
    p.add_argument("--kernel-count", type=_positive_int, default=8)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--length", type=_positive_int, default=None, help="explicit segment length")
    p.add_argument("--angle", type=float, default=None, help="explicit angle (radians)")
    p.add_argument("--out", required=True, help="single .spkf, or a directory for a bank")

    p = add("convolve", _cmd_convolve, "apply a kernel with replicate padding")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--kernel", required=True, help="kernel .spkf")
    p.add_argument("--out", required=True)

    p = add("fade", _cmd_fade, "fade an RGB image toward grayscale")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--gamma", type=_unit_interval, default=None)
    p.add_argument("--seed", type=_seed, default=None, help="sample gamma instead")
    p.add_argument("--out", required=True)

    p = add("gamma-sample", _cmd_gamma_sample, "draw clamped-Gaussian mixing ratios")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--count", type=_positive_int, default=1)

    p = add("probmap", _cmd_probmap, "predicted image -> firing-probability map")
    p.add_argument("--in", dest="in_path", required=True, help="grayscale prediction")
    p.add_argument("--sigma-s", type=_nonneg_float, default=1.0)
    p.add_argument("--gamma-c", type=_positive_float, default=1.0)
    p.add_argument("--noise", type=_noise_amp, default=0.01)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--out", required=True, help=".spkf keeps full precision")

    p = add("sample-spikes", _cmd_sample_spikes, "Bernoulli stream from a probability map")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--frames", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out", required=True)

    p = add("align-loss", _cmd_align_loss, "score a probability map against a stream")
    p.add_argument("--in", dest="in_path", required=True, help="probability map image")
    p.add_argument("--ref", required=True, help="ground-truth .spks")
    p.add_argument("--eps", type=_open_interval01, default=1e-7)

    p = add("metrics", _cmd_metrics, "MSE / PSNR / SSIM for an image pair")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--max-i", type=_positive_float, default=1.0)

    p = add("pack", _cmd_pack, "pack binary frames into a .spks container")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--vth", type=_positive_float, default=None)
    p.add_argument("--out", required=True)

    p = add("unpack", _cmd_unpack, "unpack a .spks container into PGM frames")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--lenient", action="store_true", help="tolerate nonzero padding bits")
    p.add_argument("--out", required=True, help="output directory")

    p = add("info", _cmd_info, "one-line stream summary")
    p.add_argument("in_path", metavar="stream.spks")
    p.add_argument("--lenient", action="store_true", help="tolerate nonzero padding bits")

    p = add("report", _cmd_report, "per-frame stats CSV plus rendered figures")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--window", type=_positive_int, default=None, help="TFP window (default: t_count)")
    p.add_argument("--scale", type=_positive_float, default=255.0)
    p.add_argument("--vth", type=_positive_float, default=None, help="override stored v_th")
    p.add_argument("--out", required=True, help="output directory")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args.handler(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except _UsageExit as exc:
        print(f"spikekit: usage error: {exc}", file=sys.stderr)
        return 1
    except (SpikeKitError, OSError) as exc:
        print(f"spikekit: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
