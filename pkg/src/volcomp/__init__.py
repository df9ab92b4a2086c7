"""Volume comparison toolkit for convex and star bodies."""
from . import bodies, config, constants, functionals, quadrature, spectral, verify
from .exceptions import (CapabilityError, DomainError, HypothesisUnmet, InputError,
                         NumericalFailure, SchemaError, ScopeError, VolcompError)

__version__ = "0.1.0"
