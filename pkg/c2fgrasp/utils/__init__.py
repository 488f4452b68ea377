from .progress import *
from .table import *
