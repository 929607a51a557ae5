import random

import pytest
import sympy as sp

from ddsolve.closedform import (UnsupportedCase, hyperexp_solutions,
                                petkovsek, system_hypergeometric)
from ddsolve.fields import (TRIVIAL_TOWER, delta, mat_reduce, mat_shift,
                            shift, t, teq, theta, treduce, x)


def _recurrence_from_ratio(r, m=1):
    """Coefficients (p0, p1) of p1(x) y(x+m) + p0(x) y(x) = 0 whose
    hypergeometric solutions have sigma^m-ratio r."""
    num, den = sp.fraction(sp.cancel(r))
    return [-num, den]


def _ratio_matches(r1, r2):
    return sp.cancel(sp.cancel(r1) - sp.cancel(r2)) == 0


# ---------------------------------------------------------------------------
# Petkovsek against constructed recurrences (30 cases)

def test_petkovsek_30_constructed_recurrences():
    rng = random.Random(31)
    cases = 0
    while cases < 30:
        a = x + rng.randint(0, 3)
        b = x + rng.randint(1, 4)
        z = sp.Rational(rng.choice([1, 2, 3, -1, -2]))
        r = sp.cancel(z * a / b)
        ps = _recurrence_from_ratio(r)
        found = petkovsek(ps)
        assert any(_ratio_matches(f, r) for f in found), (r, found)
        # every returned ratio must satisfy the recurrence product check:
        # p1(x) r(x) + p0(x) = 0 for first-order recurrences
        for f in found:
            assert sp.cancel(ps[1] * f + ps[0]) == 0
        cases += 1


def test_petkovsek_second_order_fibonacci_style():
    # y(x+2) = y(x+1) + y(x): ratios are the quadratic units (1±sqrt5)/2;
    # no rational hypergeometric solution exists
    ratios = petkovsek([-1, -1, 1])
    for r in ratios:
        # any returned ratio must satisfy r(x+1) r(x) = r(x) + 1
        assert sp.simplify(shift(r) * r - r - 1) == 0


def test_petkovsek_second_order_with_rational_solutions():
    # (x+2) y(x+2) - (2x+3) y(x+1) + (x+1) y(x) = 0 has y = 1 (ratio 1)
    ps = [x + 1, -(2 * x + 3), x + 2]
    found = petkovsek(ps)
    assert any(_ratio_matches(f, 1) for f in found)


def test_petkovsek_quadratic_constant():
    # y(x+2) = 2 y(x) forces ratio +-sqrt(2): no ratio in Q(x); the
    # step-2 reading sigma^2(y) = 2y gives the rational ratio 2
    found2 = petkovsek([-2, 1], 2)
    assert any(_ratio_matches(f, 2) for f in found2)


def test_petkovsek_step_three():
    # sigma^3(y) = x(x+1) y, the compressed ratio of the interlaced example
    found = petkovsek([-x * (x + 1), 1], 3)
    assert any(_ratio_matches(f, x * (x + 1)) for f in found)


def test_petkovsek_leading_zero_normalization():
    # p2 = 0 at the leading slot after shifting: (x) y(x+1) - (x+1) y(x)
    # multiplied by a zero-leading pad must not break the search
    found = petkovsek([-(x + 1), x])
    assert any(_ratio_matches(f, (x + 1) / x) for f in found)


# ---------------------------------------------------------------------------
# system-level hypergeometric candidates

def test_system_hypergeometric_diagonal():
    M = sp.diag((x + 1) / x, 2)
    cands = system_hypergeometric(M)
    ratios = [c.ratio for c in cands]
    assert any(_ratio_matches(r, (x + 1) / x) for r in ratios)
    assert any(_ratio_matches(r, 2) for r in ratios)
    for c in cands:
        lhs = mat_reduce(mat_shift(c.W, c.m) * c.ratio - M * c.W)
        assert all(treduce(e) == 0 for e in lhs)


def test_system_hypergeometric_none():
    # sigma(Y) = [[0, x], [1, 0]] Y has ratio^2 = x(x+1)-like growth:
    # no hypergeometric solution with rational ratio of this parity mix
    M = sp.Matrix([[0, 1], [x, 0]])
    for c in system_hypergeometric(M):
        lhs = mat_reduce(mat_shift(c.W, c.m) * c.ratio - M * c.W)
        assert all(treduce(e) == 0 for e in lhs)


# ---------------------------------------------------------------------------
# hyperexponential solutions of delta(Y) = C Y over Q(t)

def test_hyperexp_diagonal():
    C = sp.diag(1 / t, 2)
    cands = hyperexp_solutions(C)
    certs = [c.certificate for c in cands]
    assert any(teq(c, 1 / t) for c in certs)
    assert any(teq(c, 2) for c in certs)


def test_hyperexp_constant_rational_eigenvalues():
    C = sp.Matrix([[0, 1], [2, 1]])  # eigenvalues 2, -1
    cands = hyperexp_solutions(C)
    assert len(cands) >= 2
    for c in cands:
        lhs = mat_reduce(c.V.applyfunc(lambda e: delta(e, c.tower))
                         + c.certificate * c.V - C * c.V, c.tower)
        assert all(treduce(e, c.tower) == 0 for e in lhs)


def test_hyperexp_constant_quadratic_eigenvalues():
    C = sp.Matrix([[0, 2], [1, 0]])  # eigenvalues +-sqrt(2)
    cands = hyperexp_solutions(C)
    assert cands
    for c in cands:
        lhs = mat_reduce(c.V.applyfunc(lambda e: delta(e, c.tower))
                         + c.certificate * c.V - C * c.V, c.tower)
        assert all(treduce(e, c.tower) == 0 for e in lhs)


def test_hyperexp_simple_pole_matrix():
    # delta(Y) = C Y with a simple pole at 0; y = (t, 1)-style solutions
    C = sp.Matrix([[1 / t, 0], [0, 1 / t + 1]])
    cands = hyperexp_solutions(C)
    assert len(cands) >= 2
    for c in cands:
        lhs = mat_reduce(c.V.applyfunc(lambda e: delta(e, c.tower))
                         + c.certificate * c.V - C * c.V, c.tower)
        assert all(treduce(e, c.tower) == 0 for e in lhs)


def test_hyperexp_unsupported_raises():
    C = sp.Matrix([[1 / t**2, 1], [x, 0]])  # x-dependence: out of scope
    with pytest.raises((UnsupportedCase, Exception)):
        hyperexp_solutions(C)
