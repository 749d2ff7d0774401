"""Word metrics, geodesics and rigidity checks for Cayley graphs of finitely generated Abelian groups."""

from ._backend import BACKEND
from .errors import GeodesicLimitExceeded, NotQuasiAlgebraic, ResourceLimitExceeded, SearchLimitExceeded
from .geodesics import *  # noqa: F401,F403
from .geodesics import __all__ as _geo_all
from .groups import *  # noqa: F401,F403
from .groups import __all__ as _groups_all
from .metric import *  # noqa: F401,F403
from .metric import __all__ as _metric_all
from .rigidity import *  # noqa: F401,F403
from .rigidity import __all__ as _rig_all

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GeodesicLimitExceeded",
    "NotQuasiAlgebraic",
    "ResourceLimitExceeded",
    "SearchLimitExceeded",
    *_groups_all,
    *_metric_all,
    *_geo_all,
    *_rig_all,
]
