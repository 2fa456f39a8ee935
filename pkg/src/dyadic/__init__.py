from .cube import Cube, CubeAddress
from .grid import DyadicGrid, children, cube_at, lerner_cover, parent
