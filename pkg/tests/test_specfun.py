"""Accuracy contracts of the special-function primitives, checked against an
independent high-precision implementation (mpmath)."""

import math

import mpmath as mp
import numpy as np
import pytest

from fracburgers import specfun

mp.mp.dps = 30

# frozen before the build: half-integer identity Gamma(3/2) = sqrt(pi)/2
GAMMA_1_5 = 0.8862269254527580
# frozen: central finite differences of high-precision log-Gamma at x = 1
# give -0.5772156649015329 for digamma(1)
EULER_GAMMA = 0.5772156649015329
EXP_ONE_MINUS_GAMMA = 1.5262051115958639


def test_gamma_integers():
    assert specfun.gamma(1.0) == pytest.approx(1.0, abs=1e-15)
    assert specfun.gamma(2.0) == pytest.approx(1.0, abs=1e-15)


def test_gamma_half_integer():
    assert specfun.gamma(1.5) == pytest.approx(GAMMA_1_5, rel=1e-13)
    assert specfun.gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


def test_gamma_accuracy_contract():
    # relative error <= 1e-13 on (0.5, 3]
    rng = np.random.default_rng(42)
    xs = rng.uniform(0.5 + 1e-6, 3.0, size=300)
    for x in xs:
        exact = float(mp.gamma(mp.mpf(x)))
        assert abs(specfun.gamma(x) - exact) <= 1e-13 * abs(exact)


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, float("nan")])
def test_gamma_domain_error(bad):
    with pytest.raises(ValueError):
        specfun.gamma(bad)
    with pytest.raises(ValueError):
        specfun.digamma(bad)
    with pytest.raises(ValueError):
        specfun.log_gamma(bad)


def test_gamma_recurrence():
    rng = np.random.default_rng(7)
    for x in rng.uniform(0.5, 2.0, size=1000):
        lhs = specfun.gamma(x + 1.0)
        assert abs(lhs - x * specfun.gamma(x)) <= 1e-12 * lhs


def test_gamma_interior_minimum():
    # decreasing before the minimum, increasing after, minimum in (1.46, 1.47)
    xs = np.arange(1.0, 2.0 + 1e-9, 1e-3)
    vals = np.array([specfun.gamma(x) for x in xs])
    imin = int(np.argmin(vals))
    assert 1.46 < xs[imin] < 1.47
    assert np.all(np.diff(vals[: imin + 1]) < 0.0)
    assert np.all(np.diff(vals[imin:]) > 0.0)


def test_digamma_values():
    assert specfun.digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, abs=1e-12)
    assert specfun.digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-12)
    assert specfun.digamma(2.0) - specfun.digamma(1.0) == pytest.approx(1.0, abs=1e-12)


def test_digamma_accuracy_contract():
    rng = np.random.default_rng(3)
    for x in rng.uniform(1.0, 2.0, size=300):
        exact = float(mp.digamma(mp.mpf(x)))
        assert abs(specfun.digamma(x) - exact) <= 1e-12


def test_digamma_increasing():
    xs = np.linspace(1.0, 2.0, 200)
    vals = np.array([specfun.digamma(x) for x in xs])
    assert np.all(np.diff(vals) > 0.0)


def test_euler_mascheroni():
    g = specfun.euler_mascheroni()
    assert abs(g - float(mp.euler)) <= 1e-14
    assert 0.5 < g < 0.6
    assert math.exp(1.0 - g) == pytest.approx(EXP_ONE_MINUS_GAMMA, rel=1e-12)
    # digit string reported for the small-order limit of the blow-up bound
    assert math.exp(1.0 - g) == pytest.approx(1.52620511, abs=5e-9)


def test_log_gamma_consistency():
    for x in np.linspace(0.6, 3.0, 25):
        assert specfun.log_gamma(x) == pytest.approx(math.log(specfun.gamma(x)), abs=1e-12)
