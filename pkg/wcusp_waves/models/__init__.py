from .params import *
from .schemas import *
