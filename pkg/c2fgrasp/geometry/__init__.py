from .euler import *
from .distance import *
from .pose import *
from .gripper import *
