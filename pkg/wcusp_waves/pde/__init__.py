from .solver import *
from .patterns import *
from .record import *
