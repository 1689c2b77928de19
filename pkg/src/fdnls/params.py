"""Model parameters for the damped fractional NLS and their validity region."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the damped fractional Schrodinger model.

    Attributes:
        d: spatial dimension (1 or 2)
        alpha: dispersion order of the fractional Laplacian
        s: dissipation order
        a: friction coefficient; a = 0 selects the undamped equation
        p: nonlinearity exponent, fixed by the mass-critical coupling
        theta: critical space-time exponent, equal to p + 1
        theorems_apply: True iff alpha lies in the open interval
            (d/(2d-1), 1) where the global-existence theory holds;
            parameter points outside it still run, flagged as exploratory.
    """

    d: int
    alpha: float
    s: float
    a: float
    p: float
    theta: float
    theorems_apply: bool

    @property
    def damped(self) -> bool:
        return self.a > 0.0

    @property
    def dissipation_regime(self) -> str:
        """'s>=alpha' (global for any mass) or 's<alpha' (small-mass regime)."""
        return "s>=alpha" if self.s >= self.alpha else "s<alpha"


def alpha_validity_interval(d: int) -> tuple[float, float]:
    """Open interval of dispersion orders covered by the global theory."""
    return (d / (2.0 * d - 1.0), 1.0)


def make_params(d: int, alpha: float, s: float, a: float) -> ModelParams:
    """Build ModelParams with the derived mass-critical exponents.

    p = 1 + 4*alpha/d and theta = p + 1 exactly.  Raises ValueError for
    unsupported dimension or non-positive alpha; negative s or a are
    rejected as unphysical.
    """
    if d not in (1, 2):
        raise ValueError(f"unsupported dimension d={d}; expected 1 or 2")
    if not alpha > 0.0:
        raise ValueError(f"dispersion order alpha must be positive, got {alpha}")
    if s < 0.0:
        raise ValueError(f"dissipation order s must be >= 0, got {s}")
    if a < 0.0:
        raise ValueError(f"friction coefficient a must be >= 0, got {a}")
    p = 1.0 + 4.0 * alpha / d
    theta = p + 1.0
    lo, hi = alpha_validity_interval(d)
    return ModelParams(
        d=d,
        alpha=float(alpha),
        s=float(s),
        a=float(a),
        p=p,
        theta=theta,
        theorems_apply=lo < alpha < hi,
    )
