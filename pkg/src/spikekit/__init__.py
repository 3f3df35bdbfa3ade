"""spikekit: spike-camera simulation and spike-stream processing.

Core pieces: an integrate-and-fire camera simulator with bit-packed spike
streams, TFI/TFP dense reconstruction, synthetic blur / color-fade /
latent-mixing dataset construction, spike-alignment probability maps and
losses, full-reference image metrics, a bit-exact stream container, and a
CLI that composes them.
"""

from .alignment import (
    AlignConfig,
    ProbabilityMap,
    alignment_loss,
    probability_map,
    rate_loss,
    sample_spikes,
)
from .errors import (
    BadMagicError,
    DimensionError,
    DirtyPaddingError,
    DomainError,
    FormatError,
    SpikeKitError,
    TruncatedError,
    UnsupportedVersionError,
)
from .metrics import MetricReport, metric_report, mse, psnr, ssim
from .reconstruct import LatencyMap, ReconstructedFrame, latency_at, tfi, tfp
from .rng import CounterRng
from .spike_model import (
    AccumulatorState,
    ClampWarning,
    IntensityFrame,
    IntensitySequence,
    SimulatorConfig,
    SpikeStream,
    calibrate_coverage,
    coverage,
    simulate,
    simulate_step,
)
from .formats import (
    load_image,
    load_spks,
    read_spks,
    save_image,
    save_spks,
    write_spks,
)
from .synthesis import (
    BlurKernel,
    Image,
    LatentVector,
    MixRatio,
    average_blur,
    color_fade,
    convolve,
    grayscale,
    mix_latents,
    motion_blur_kernel,
    sample_blur_kernels,
    sample_gamma,
)

__version__ = "0.1.0"
