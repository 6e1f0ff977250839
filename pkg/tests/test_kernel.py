"""Backend parity: the compiled kernel must agree with the pure one."""

import random
from fractions import Fraction

import pytest

from tancat._kernel import _poly_py

try:
    from tancat._kernel import _poly_cy
except ImportError:                                       # pragma: no cover
    _poly_cy = None

needs_ext = pytest.mark.skipif(_poly_cy is None, reason="extension not built")


def random_poly(rng, n_vars, n_terms=5, deg=3):
    out = {}
    for _ in range(n_terms):
        mono = tuple(rng.randint(0, deg) for _ in range(n_vars))
        coeff = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if coeff:
            out[mono] = coeff
    return {m: c for m, c in out.items() if c}


@needs_ext
def test_backends_agree_on_ring_ops():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 4)
        a = random_poly(rng, n)
        b = random_poly(rng, n)
        assert _poly_py.poly_add(a, b) == _poly_cy.poly_add(a, b)
        assert _poly_py.poly_sub(a, b) == _poly_cy.poly_sub(a, b)
        assert _poly_py.poly_mul(a, b) == _poly_cy.poly_mul(a, b)
        assert _poly_py.poly_neg(a) == _poly_cy.poly_neg(a)
        assert _poly_py.poly_scale(a, Fraction(3, 2)) == \
            _poly_cy.poly_scale(a, Fraction(3, 2))


@needs_ext
def test_backends_agree_on_compose_and_eval():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        p = random_poly(rng, n, deg=2)
        args = [random_poly(rng, m, deg=2) for _ in range(n)]
        assert _poly_py.poly_compose(p, args, m) == \
            _poly_cy.poly_compose(p, list(args), m)
        values = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
        assert _poly_py.poly_eval(p, values) == _poly_cy.poly_eval(p, list(values))


def test_pure_kernel_ring_laws():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 3)
        a, b, c = (random_poly(rng, n) for _ in range(3))
        K = _poly_py
        assert K.poly_add(a, b) == K.poly_add(b, a)
        assert K.poly_mul(a, b) == K.poly_mul(b, a)
        assert K.poly_mul(a, K.poly_add(b, c)) == \
            K.poly_add(K.poly_mul(a, b), K.poly_mul(a, c))
        assert K.poly_sub(a, a) == {}
