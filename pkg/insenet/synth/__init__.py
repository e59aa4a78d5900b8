from .filters import highpass, lowpass, scale_to_level
from .noise import NOISE_COLORS, NoiseSpec, generate_noise
from .pairs import SYNTHETIC_LABEL, make_synthetic_pairs
from .toy import TOY_SNR_LEVELS, make_toy_manifest

__all__ = [
    "highpass",
    "lowpass",
    "scale_to_level",
    "NOISE_COLORS",
    "NoiseSpec",
    "generate_noise",
    "SYNTHETIC_LABEL",
    "make_synthetic_pairs",
    "TOY_SNR_LEVELS",
    "make_toy_manifest",
]
