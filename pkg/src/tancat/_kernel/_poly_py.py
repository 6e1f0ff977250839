"""Pure-Python sparse-polynomial kernel.

A polynomial is a dict mapping exponent tuples (one int per variable) to
nonzero Fraction coefficients; the zero polynomial is the empty dict.  These
functions are the hot loops of the whole package — the Cython twin in
``_poly_cy.pyx`` implements the identical contract.
"""

from fractions import Fraction

BACKEND = "python"

_ZERO = Fraction(0)


def poly_add(a, b):
    """a + b."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for mono, coeff in b.items():
        new = out.get(mono, _ZERO) + coeff
        if new:
            out[mono] = new
        else:
            out.pop(mono, None)
    return out


def poly_sub(a, b):
    """a - b."""
    out = dict(a)
    for mono, coeff in b.items():
        new = out.get(mono, _ZERO) - coeff
        if new:
            out[mono] = new
        else:
            out.pop(mono, None)
    return out


def poly_neg(a):
    """-a."""
    return {mono: -coeff for mono, coeff in a.items()}


def poly_scale(a, c):
    """c * a for a scalar c."""
    if not c:
        return {}
    return {mono: c * coeff for mono, coeff in a.items()}


def poly_mul(a, b):
    """a * b (distributing, combining like monomials)."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            new = out.get(mono, _ZERO) + ca * cb
            if new:
                out[mono] = new
            else:
                out.pop(mono, None)
    return out


def poly_pow(a, k):
    """a ** k for k >= 0 (binary powering)."""
    result = None
    base = a
    if k == 0:
        raise ValueError("caller supplies the unit; poly_pow needs k >= 1")
    while k:
        if k & 1:
            result = base if result is None else poly_mul(result, base)
        k >>= 1
        if k:
            base = poly_mul(base, base)
    return result


def poly_compose(poly, args, out_vars):
    """Substitute args[i] (a polynomial in out_vars variables) for variable i.

    Constant terms survive as the exponent tuple (0,)*out_vars.
    """
    zero_mono = (0,) * out_vars
    out = {}
    # Cache powers of each argument: pow_cache[i][e] = args[i] ** e.
    pow_cache = [{} for _ in args]
    for mono, coeff in poly.items():
        term = {zero_mono: coeff}
        for i, exp in enumerate(mono):
            if exp == 0:
                continue
            cache = pow_cache[i]
            power = cache.get(exp)
            if power is None:
                power = poly_pow(args[i], exp)
                cache[exp] = power
            term = poly_mul(term, power)
            if not term:
                break
        out = poly_add(out, term)
    return out


def poly_eval(poly, values):
    """Evaluate at a point (sequence of Fractions), exactly."""
    total = _ZERO
    for mono, coeff in poly.items():
        term = coeff
        for i, exp in enumerate(mono):
            if exp:
                term *= values[i] ** exp
        total += term
    return total
