from .fronts import *
from .reduced import *
from .lemmas import *
from .orbit import *
from .bursts import *
