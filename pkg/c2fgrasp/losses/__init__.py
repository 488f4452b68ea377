from .loss_config import *
from .focal import *
from .rotation import *
from .translation import *
from .total import *
from .gradcheck import *
