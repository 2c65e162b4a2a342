from .unfolding import *
