import random
from fractions import Fraction

import pytest

from feynsec.poly import Poly


def test_basic_arithmetic():
    x = Poly.variable(2, 0)
    y = Poly.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (p - p) == Poly(2, {})
    assert not (p - p)


def test_zero_coefficients_not_stored():
    x = Poly.variable(1, 0)
    p = x - x
    assert p.coeffs == {}
    q = Poly(1, {(1,): Fraction(1, 2), (0,): 0})
    assert (0,) not in q.coeffs


def test_rescale_subset_exponent_map():
    # x0 -> x0, x1 -> x0*x1 on x0^2 + x1^2
    p = Poly(2, {(2, 0): 1, (0, 2): 1})
    q = p.rescale_subset([0, 1], 0)
    assert q == Poly(2, {(2, 0): 1, (2, 2): 1})


def test_rescale_is_injective_no_collisions():
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(2, 4)
        exps = {tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(6)}
        p = Poly(n, {e: rng.randint(1, 5) for e in exps})
        subset = sorted(rng.sample(range(n), rng.randint(2, n)))
        l = rng.choice(subset)
        q = p.rescale_subset(subset, l)
        assert len(q.coeffs) == len(p.coeffs)
        assert sum(q.coeffs.values()) == sum(p.coeffs.values())


def test_content_and_division():
    p = Poly(2, {(2, 1): 2, (3, 2): 5})
    assert p.content_exponents() == (2, 1)
    q = p.divide_monomial((2, 1))
    assert q == Poly(2, {(0, 0): 2, (1, 1): 5})
    with pytest.raises(ValueError):
        q.divide_monomial((1, 0))


def test_set_one_and_drop_merges():
    p = Poly(2, {(1, 0): 1, (2, 0): 1, (0, 1): 3})
    q = p.set_one_and_drop(0)
    assert q == Poly(1, {(0,): 2, (1,): 3})


def test_homogenize_on_simplex():
    p = Poly(2, {(0, 0): 1, (1, 0): 1})  # 1 + x0
    h = p.homogenize_on_simplex()
    assert h == Poly(2, {(1, 0): 2, (0, 1): 1})
    # values agree where x0 + x1 = 1
    for t in (Fraction(1, 3), Fraction(2, 7)):
        assert h.eval_exact([t, 1 - t]) == p.eval_exact([t, 1 - t])


def test_derivative_and_eval():
    p = Poly(2, {(2, 1): Fraction(3, 2)})
    assert p.derivative(0) == Poly(2, {(1, 1): 3})
    assert p.derivative(1) == Poly(2, {(2, 0): Fraction(3, 2)})
    assert p.eval_exact([Fraction(2), Fraction(3)]) == Fraction(3, 2) * 4 * 3


def test_eval_array_matches_exact():
    import numpy as np
    rng = random.Random(1)
    p = Poly(3, {(1, 0, 2): Fraction(1, 3), (0, 2, 0): -2, (0, 0, 0): 5})
    pts = np.array([[rng.random() for _ in range(3)] for _ in range(10)])
    vals = p.eval_array(pts)
    for row, v in zip(pts, vals):
        exact = float(p.eval_exact([Fraction(x).limit_denominator(10 ** 12) for x in row]))
        assert abs(exact - v) < 1e-9
