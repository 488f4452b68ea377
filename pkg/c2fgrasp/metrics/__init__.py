from .thresholds import *
from .matching import *
from .average_precision import *
from .perturb import *
from .metric import *
