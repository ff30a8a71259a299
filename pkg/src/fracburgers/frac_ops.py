"""Discrete fractional operators on uniform time grids.

Implements the piecewise-linear (L1) discretization of the left Caputo
derivative, the product-trapezoidal Riemann-Liouville fractional integral,
and closed-form evaluation of the right Riemann-Liouville derivative of the
power test function (1 - t/T)^lam together with its two integrals.

Both quadratures are exact on piecewise-linear data, which is what makes the
exactness contracts in the tests sharp. The memory convolutions are the
reference O(N^2) kind: no history compression, no windowing. All reductions
run in a fixed order on fixed-shape arrays, so repeated runs are
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .specfun import gamma

__all__ = [
    "FractionalOrder",
    "TimeGrid",
    "SampledFunction",
    "PowerTestFunction",
    "caputo_left",
    "classical_derivative",
    "rl_fractional_integral",
    "phi_value",
    "rl_right_derivative_phi",
    "phi_test_integrals",
    "phi_test_integrals_quadrature",
]


@dataclass(frozen=True)
class FractionalOrder:
    """Order alpha of the time-fractional derivative, 0 < alpha <= 1.

    alpha = 1 is the sanctioned classical-limit value; the Caputo operator
    itself rejects it (use :func:`classical_derivative`), but solvers and
    bounds accept it as the documented closure of their formulas.
    """

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not np.isfinite(a) or not 0.0 < a <= 1.0:
            raise ValueError(f"fractional order must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t_j = j * step for j = 0..count."""

    step: float
    count: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.step) or self.step <= 0.0:
            raise ValueError(f"step must be > 0, got {self.step!r}")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "count", int(self.count))

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.count + 1, dtype=float) * self.step

    @property
    def horizon(self) -> float:
        return self.count * self.step


@dataclass(frozen=True)
class SampledFunction:
    """Real values attached to the nodes of a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size != self.grid.count + 1:
            raise ValueError(
                f"expected {self.grid.count + 1} values for the grid, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("sampled values must all be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid: TimeGrid, fn) -> "SampledFunction":
        return cls(grid, np.array([fn(t) for t in grid.times], dtype=float))

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def value_at(self, t: float) -> float:
        """Linear interpolation between nodes; t must lie in [0, horizon]."""
        t = float(t)
        if t < 0.0 or t > self.grid.horizon * (1.0 + 1e-12):
            raise ValueError(f"t={t} outside the sampled domain [0, {self.grid.horizon}]")
        return float(np.interp(t, self.times, self.values))


@lru_cache(maxsize=128)
def _l1_weights(alpha: float, count: int) -> np.ndarray:
    """b_k = (k+1)^(1-alpha) - k^(1-alpha) for k = 0..count-1 (read-only)."""
    k = np.arange(count, dtype=float)
    b = (k + 1.0) ** (1.0 - alpha) - k ** (1.0 - alpha)
    b.flags.writeable = False
    return b


@lru_cache(maxsize=128)
def _pt_interior_weights(alpha: float, count: int) -> np.ndarray:
    """Product-trapezoid interior weights d_k = (k+1)^(a+1) + (k-1)^(a+1) - 2k^(a+1), k >= 1."""
    k = np.arange(1, count + 1, dtype=float)
    d = (k + 1.0) ** (alpha + 1.0) + (k - 1.0) ** (alpha + 1.0) - 2.0 * k ** (alpha + 1.0)
    d.flags.writeable = False
    return d


@lru_cache(maxsize=128)
def _pt_left_boundary_weights(alpha: float, count: int) -> np.ndarray:
    """Weight of g(t_0) in the product-trapezoid rule targeted at t_n, n = 1..count."""
    n = np.arange(1, count + 1, dtype=float)
    a0 = (n - 1.0) ** (alpha + 1.0) - n ** alpha * (n - alpha - 1.0)
    a0.flags.writeable = False
    return a0


def caputo_left(f: SampledFunction, order: FractionalOrder) -> SampledFunction:
    """L1 discretization of the left Caputo derivative of order alpha in (0, 1).

    Returns the exact Caputo derivative of the piecewise-linear interpolant of
    f at the nodes t_1..t_N; node t_0 carries 0 by convention.
    """
    if order.is_classical:
        raise ValueError("alpha = 1 is not a Caputo order here; use classical_derivative")
    n = f.grid.count
    h = f.grid.step
    df = np.diff(f.values)
    b = _l1_weights(order.alpha, n)
    out = np.zeros(n + 1)
    out[1:] = np.convolve(df, b)[:n]
    out[1:] *= h ** (-order.alpha) / gamma(2.0 - order.alpha)
    return SampledFunction(f.grid, out)


def classical_derivative(f: SampledFunction) -> SampledFunction:
    """One-sided backward differences at t_1..t_N; 0 at t_0 by convention."""
    out = np.zeros(f.grid.count + 1)
    out[1:] = np.diff(f.values) / f.grid.step
    return SampledFunction(f.grid, out)


def rl_fractional_integral(g: SampledFunction, order: FractionalOrder) -> SampledFunction:
    """Riemann-Liouville fractional integral of order alpha in (0, 1].

    Product-trapezoidal rule: exact (up to roundoff) for piecewise-linear g.
    At alpha = 1 the weights reduce to the ordinary trapezoid rule.
    """
    alpha = order.alpha
    n = g.grid.count
    h = g.grid.step
    vals = g.values
    scale = h ** alpha / gamma(alpha + 2.0)
    out = np.zeros(n + 1)
    inner = np.zeros(n)
    if n >= 2:
        d = _pt_interior_weights(alpha, n)
        inner[1:] = np.convolve(vals[1:n], d[: n - 1])[: n - 1]
    a0 = _pt_left_boundary_weights(alpha, n)
    out[1:] = scale * (a0 * vals[0] + inner + vals[1:])
    return SampledFunction(g.grid, out)


@dataclass(frozen=True)
class PowerTestFunction:
    """The compactly supported power profile (1 - t/T)^lam, zero past t = T."""

    exponent: float
    horizon: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.exponent) or self.exponent < 2.0:
            raise ValueError(f"exponent must be >= 2, got {self.exponent!r}")
        if not np.isfinite(self.horizon) or self.horizon <= 0.0:
            raise ValueError(f"horizon must be > 0, got {self.horizon!r}")
        object.__setattr__(self, "exponent", float(self.exponent))
        object.__setattr__(self, "horizon", float(self.horizon))


def phi_value(phi: PowerTestFunction, t: float) -> float:
    """Evaluate the power test function, including its zero extension past T."""
    t = float(t)
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t > phi.horizon:
        return 0.0
    return (1.0 - t / phi.horizon) ** phi.exponent


def rl_right_derivative_phi(phi: PowerTestFunction, order: FractionalOrder, t: float) -> float:
    """Right Riemann-Liouville derivative of the power test function at t < T.

    Closed form Gamma(lam+1)/Gamma(lam+1-alpha) * T^(-alpha) * (1-t/T)^(lam-alpha),
    validated against high-order quadrature of the defining integral followed
    by numerical differentiation (see the tests).
    """
    if order.is_classical:
        raise ValueError("right-RL derivative requires alpha in (0, 1)")
    t = float(t)
    lam, T = phi.exponent, phi.horizon
    if t < 0.0 or t >= T:
        raise ValueError(f"t must lie in [0, T), got t={t} with T={T}")
    a = order.alpha
    return gamma(lam + 1.0) / gamma(lam + 1.0 - a) * T ** (-a) * (1.0 - t / T) ** (lam - a)


def _check_phi_gamma_args(phi: PowerTestFunction, order: FractionalOrder) -> tuple[float, float, float]:
    lam, T, a = phi.exponent, phi.horizon, order.alpha
    if order.is_classical:
        raise ValueError("test-function integrals require alpha in (0, 1)")
    if lam <= 2.0 * a - 1.0:
        raise ValueError(f"need exponent > 2*alpha - 1, got exponent={lam}, alpha={a}")
    for arg in (lam - a, lam - 2.0 * a + 1.0, lam + 1.0 - 2.0 * a):
        if arg <= 0.0:
            raise ValueError(f"Gamma argument {arg} is not positive for exponent={lam}, alpha={a}")
    return lam, T, a


def phi_test_integrals(phi: PowerTestFunction, order: FractionalOrder) -> tuple[float, float]:
    """Closed-form values of the two test-function integrals.

    First: integral over [0, T] of the right-RL derivative of phi.
    Second: integral over [0, T] of |right-RL derivative|^2 / phi.
    Returned exactly as the stated closed forms; see
    :func:`phi_test_integrals_quadrature` for the independent numeric route,
    which is known to disagree with these values by an O(1) factor (the
    T-scaling T^(1-alpha), T^(1-2alpha) agrees). The tests report the
    discrepancy rather than resolving it.
    """
    lam, T, a = _check_phi_gamma_args(phi, order)
    i1 = lam * gamma(lam - a) / ((lam - a + 1.0) * gamma(lam - 2.0 * a + 1.0)) * T ** (1.0 - a)
    i2 = (
        lam ** 2
        / (lam + 1.0 - 2.0 * a)
        * (gamma(lam - a) / gamma(lam + 1.0 - 2.0 * a)) ** 2
        * T ** (1.0 - 2.0 * a)
    )
    return i1, i2


def phi_test_integrals_quadrature(
    phi: PowerTestFunction, order: FractionalOrder
) -> tuple[float, float]:
    """Adaptive quadrature of the same two integrals via rl_right_derivative_phi."""
    lam, T, _ = _check_phi_gamma_args(phi, order)

    def dphi(t: float) -> float:
        return rl_right_derivative_phi(phi, order, t)

    i1, _ = quad(dphi, 0.0, T, limit=200)
    i2, _ = quad(lambda t: dphi(t) ** 2 / phi_value(phi, t), 0.0, T, limit=200)
    return i1, i2
