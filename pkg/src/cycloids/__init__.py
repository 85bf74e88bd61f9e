"""Cycloid Petri nets: coordinate algebra, net synthesis, foldings and checks."""

from .algebra import *  # noqa: F401,F403
from .errors import CycloidError, NotEnabledError, ParameterError, ParseError, ResourceError
from .isomorphism import isomorphic, validate_mapping
from .nets import *  # noqa: F401,F403
from .scenarios import reference_after_stop, stop_and_cascade, stop_processes, stop_scenario
from .semantics import *  # noqa: F401,F403
from .serialize import export, import_json, net_title

__version__ = "0.1.0"
