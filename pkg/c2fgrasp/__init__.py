from c2fgrasp.config import *
from c2fgrasp.data_type import *
from c2fgrasp.errors import *

# modules
from c2fgrasp import geometry
from c2fgrasp import data
from c2fgrasp import codec
from c2fgrasp import losses
from c2fgrasp import sampler
from c2fgrasp import metrics
from c2fgrasp import utils
from c2fgrasp.get_transform import Compose, get as get_transform

from .version import __version__

__all__ = [
    'geometry', 'data', 'codec', 'losses', 'sampler', 'metrics', 'utils',
    'Compose', 'get_transform', '__version__'
]
