"""
Graphstein - kernel Stein goodness-of-fit tests for random graph models.
"""

__version__ = "0.4.0"

version_info = tuple(map(int, __version__.split(".")))


import logging

from ._config import config  # noqa
from . import _errors as errors  # noqa
from . import graphs  # noqa - graph values, ergm, generators
from . import kernels  # noqa - graph kernels and inverse updates
from . import stein  # noqa - stein statistics and the monte carlo test
from . import experiments  # noqa - experiment commands


logger = logging.getLogger("graphstein")
logger.setLevel(config.log_level.upper())
