from .point_cloud import *
from .label_set import *
from .volume import *
from .io import *
