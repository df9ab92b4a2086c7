"""Dimensional constants and the constants of the comparison inequalities.

``math.gamma``/``math.lgamma`` (C library, ~1e-15 relative) are used for the
Gamma function; every value here is far more accurate than any quadrature
that consumes it.
"""
import math
from functools import lru_cache

from .exceptions import DomainError

__all__ = [
    "ball_volume",
    "sphere_area",
    "cn_constant",
    "named_constant",
    "constant_window",
    "NAMED_CONSTANTS",
    "DimConstants",
    "dim_constants",
]


def _check_dim(n, lo):
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"dimension must be an integer, got {n!r}")
    if n < lo:
        raise DomainError(f"dimension must be >= {lo}, got {n}")
    return int(n)


@lru_cache(maxsize=None)
def ball_volume(n):
    """Volume of the unit Euclidean ball in R^n, pi^(n/2) / Gamma(n/2 + 1)."""
    n = _check_dim(n, 1)
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


@lru_cache(maxsize=None)
def sphere_area(n):
    """Surface area of the unit sphere S^(n-1) in R^n, 2 pi^(n/2) / Gamma(n/2)."""
    n = _check_dim(n, 2)
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n))


def _sphere_area_any(n):
    # |S^0| = 2 (two points) is needed for sections of planar bodies.
    return 2.0 if n == 1 else sphere_area(n)


@lru_cache(maxsize=None)
def cn_constant(n):
    """c_n = |B_2^n|^((n-1)/n) / |B_2^(n-1)|, which lies in (1/sqrt(e), 1)."""
    n = _check_dim(n, 2)
    return ball_volume(n) ** ((n - 1) / n) / ball_volume(n - 1)


class DimConstants:
    """The dimensional constants of R^n bundled together."""

    __slots__ = ("n", "ball_volume", "sphere_area", "c_n")

    def __init__(self, n):
        self.n = _check_dim(n, 2)
        self.ball_volume = ball_volume(self.n)
        self.sphere_area = sphere_area(self.n)
        self.c_n = cn_constant(self.n)

    def __repr__(self):
        return (f"DimConstants(n={self.n}, ball_volume={self.ball_volume!r}, "
                f"sphere_area={self.sphere_area!r}, c_n={self.c_n!r})")


def dim_constants(n):
    return DimConstants(n)


# name -> (needs alpha, minimal dimension, window(n) -> (lo, hi) half-open or None)
NAMED_CONSTANTS = {
    "cn": (False, 2, None),
    "thm2-factor": (False, 2, None),
    "thm3": (True, 4, lambda n: (n - 4.0, n - 1.0)),
    "thm4-factor": (True, 4, lambda n: (n - 4.0, n - 1.0)),
    "thm6-factor": (False, 2, None),
    "thm7-factor": (True, 3, lambda n: (float(n), n + 1.0)),
    "thm7-rev-factor": (True, 3, lambda n: (float(n), n + 1.0)),
    "cor2": (False, 3, None),
    "meas-factor": (False, 2, None),
}


def constant_window(name, n):
    """The half-open alpha window [lo, hi) of a named constant, or None."""
    try:
        needs_alpha, _, window = NAMED_CONSTANTS[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; known: {sorted(NAMED_CONSTANTS)}") from None
    return window(n) if needs_alpha else None


def named_constant(name, n, alpha=None):
    """Evaluate a named inequality constant.

    Body dependent multipliers (inradius r(K), circumradius R(L)) are not
    included; the verification layer composes them.

    Raises DomainError for unknown names, missing alpha, or alpha outside the
    validity window ``[lo, hi)`` of the named constant.
    """
    if name not in NAMED_CONSTANTS:
        raise DomainError(f"unknown constant {name!r}; known: {sorted(NAMED_CONSTANTS)}")
    needs_alpha, nmin, window = NAMED_CONSTANTS[name]
    n = _check_dim(n, nmin)
    if needs_alpha:
        if alpha is None:
            raise DomainError(f"constant {name!r} requires alpha")
        alpha = float(alpha)
        lo, hi = window(n)
        if not (lo <= alpha < hi):
            raise DomainError(
                f"alpha={alpha} outside the validity window [{lo:g}, {hi:g}) of {name!r} for n={n}")
    else:
        alpha = None
    return _named_constant(name, n, alpha)


@lru_cache(maxsize=4096)
def _named_constant(name, n, alpha):
    lg = math.lgamma
    if name == "cn":
        return cn_constant(n)
    if name == "thm2-factor":
        return math.sqrt(2.0 * math.pi / (n + 1))
    if name == "thm6-factor":
        return math.sqrt(2.0 * math.pi / n)
    if name == "meas-factor":
        return n / (n - 1) * cn_constant(n)
    if name == "cor2":
        return ball_volume(n - 1) / (ball_volume(n - 2) * ball_volume(n) ** (1.0 / n))
    if name == "thm3":
        a = alpha
        log_c = (0.5 * math.log(math.pi) + math.log(n - 1) + lg((n - a - 1) / 2)
                 - (a + 1.0 / n) * math.log(2.0) - (n - 1) / n * math.log(n)
                 - lg((a + 1) / 2) - (n - 1) / n * lg(n / 2))
        return math.exp(log_c)
    if name == "thm4-factor":
        a = alpha
        log_c = (math.log(math.pi) + math.log(n - 1) + lg((n - a - 1) / 2)
                 - math.log(n) - a * math.log(2.0) - lg((a + 1) / 2) - lg(n / 2))
        return math.exp(log_c)
    if name == "thm7-factor":
        a = alpha
        log_c = (lg((n - a + 1) / 2) + math.log(sphere_area(n))
                 - (a + 1) * math.log(2.0) - 0.5 * n * math.log(math.pi)
                 - lg((a + 1) / 2) - math.log(n))
        return math.exp(log_c)
    if name == "thm7-rev-factor":
        # ball-sharp constant for the reversed hypothesis, without R(L)
        a = alpha
        log_c = (math.log(math.pi) + math.log(sphere_area(n)) + lg((n + 1 - a) / 2)
                 - math.log(n) - (a - 1) * math.log(2.0) - 0.5 * n * math.log(math.pi)
                 - lg((a - 1) / 2))
        return math.exp(log_c)
    raise AssertionError(name)
