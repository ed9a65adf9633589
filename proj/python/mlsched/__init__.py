"""Learning-based heuristics for 1|r_j|sum C_j scheduling."""

import os as _os
from pathlib import Path as _Path

# An installed package ships its own copy of the reference model.
_packaged = _Path(__file__).with_name("reference_model.txt")
if _packaged.exists():
    _os.environ.setdefault("MLSCHED_REFERENCE_MODEL", str(_packaged))

from ._core import *  # noqa: E402,F401,F403
from ._core import __doc__  # noqa: E402,F401
