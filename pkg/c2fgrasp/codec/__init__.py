from .quantize import *
from .target_set import *
from .encode import *
from .decode import *
