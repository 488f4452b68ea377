from .sampler_config import *
from .normals import *
from .candidates import *
from .antipodal import *
from .dataset import *
