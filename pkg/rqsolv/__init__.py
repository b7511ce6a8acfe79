from .common import *
from .words import *
from .intlin import *
from .magnus import *
from .groupring import *
from .cayley import *
from .decide import *

__version__ = '0.1.0'
