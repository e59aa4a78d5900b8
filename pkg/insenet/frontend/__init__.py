from .audio import SAMPLE_RATE, AudioBuffer, downmix_mid, read_wav, rms_dbfs, to_mono, write_wav
from .featurizer import PairFeaturizer
from .gammatone import GammatoneConfig, Spectrogram, erb_center_frequencies, gammatone_spectrogram
from .pairing import PAIR_FRAMES, PairedInput, normalize_pair, pair_spectrograms, window_pairs
from .spectrogram_file import load_spectrogram, save_spectrogram

__all__ = [
    "SAMPLE_RATE",
    "AudioBuffer",
    "downmix_mid",
    "read_wav",
    "rms_dbfs",
    "to_mono",
    "write_wav",
    "PairFeaturizer",
    "GammatoneConfig",
    "Spectrogram",
    "erb_center_frequencies",
    "gammatone_spectrogram",
    "PAIR_FRAMES",
    "PairedInput",
    "normalize_pair",
    "pair_spectrograms",
    "window_pairs",
    "load_spectrogram",
    "save_spectrogram",
]
