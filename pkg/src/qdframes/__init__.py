"""Injective frames for quantum detection: tilde embeddings, injectivity
certificates, constructions and state estimation."""

from .construct import *  # noqa: F401,F403
from .core import *  # noqa: F401,F403
from .estimate import *  # noqa: F401,F403
from .frame_ops import *  # noqa: F401,F403
from .injectivity import *  # noqa: F401,F403
from .separation import *  # noqa: F401,F403
from .serialize import *  # noqa: F401,F403
from .tilde import *  # noqa: F401,F403
from . import construct, core, estimate, experiments, frame_ops, injectivity, separation, serialize, tilde

__version__ = "0.1.0"
