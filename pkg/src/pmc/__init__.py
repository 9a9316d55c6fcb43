"""One-shot gesture recognition with principal motion components."""
from .config import Config
from .frameio import BatchManifest, Video, load_manifest, load_video
from .model import PcaModel, Vocabulary, classify, fit_pca, reconstruction_error, train_vocabulary
from .motion import BagOfFrames, bag_of_frames

__all__ = [
    "BagOfFrames",
    "BatchManifest",
    "Config",
    "PcaModel",
    "Video",
    "Vocabulary",
    "bag_of_frames",
    "classify",
    "fit_pca",
    "load_manifest",
    "load_video",
    "reconstruction_error",
    "train_vocabulary",
]
