"""Polynomial tensor calculus on R^m and the desk-scale computations built on it."""

from .polynomials import *  # noqa: F401,F403
from .fields import *  # noqa: F401,F403
from .fields import __all__ as _fa
from .projective import *  # noqa: F401,F403
from .projective import __all__ as _pa
from .desk import *  # noqa: F401,F403
from .desk import __all__ as _da

__all__ = list(_fa) + list(_pa) + list(_da)
