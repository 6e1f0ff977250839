# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython sparse-polynomial kernel.

Same contract as ``_poly_py``: dict[tuple[int, ...], Fraction] with no stored
zeros.  Coefficients stay Python objects (exact rationals need arbitrary
precision); the win over the pure kernel is in monomial combination — tuple
arithmetic and dict traffic run as C loops.
"""

from fractions import Fraction

BACKEND = "cython"

_ZERO = Fraction(0)


def poly_add(dict a, dict b):
    """a + b."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    for mono, coeff in b.items():
        cur = out.get(mono)
        if cur is None:
            out[mono] = coeff
        else:
            new = cur + coeff
            if new:
                out[mono] = new
            else:
                del out[mono]
    return out


def poly_sub(dict a, dict b):
    """a - b."""
    cdef dict out = dict(a)
    for mono, coeff in b.items():
        cur = out.get(mono)
        if cur is None:
            out[mono] = -coeff
        else:
            new = cur - coeff
            if new:
                out[mono] = new
            else:
                del out[mono]
    return out


def poly_neg(dict a):
    """-a."""
    cdef dict out = {}
    for mono, coeff in a.items():
        out[mono] = -coeff
    return out


def poly_scale(dict a, c):
    """c * a for a scalar c."""
    cdef dict out = {}
    if not c:
        return out
    for mono, coeff in a.items():
        out[mono] = c * coeff
    return out


cdef tuple _mono_mul(tuple ma, tuple mb):
    cdef Py_ssize_t i, n = len(ma)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <object> ma[i] + <object> mb[i]
    return tuple(out)


def poly_mul(dict a, dict b):
    """a * b (distributing, combining like monomials)."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = _mono_mul(<tuple> ma, <tuple> mb)
            cur = out.get(mono)
            if cur is None:
                out[mono] = ca * cb
            else:
                new = cur + ca * cb
                if new:
                    out[mono] = new
                else:
                    del out[mono]
    return out


def poly_pow(dict a, k):
    """a ** k for k >= 1 (binary powering)."""
    cdef dict result = None
    cdef dict base = a
    cdef long kk = k
    if kk == 0:
        raise ValueError("caller supplies the unit; poly_pow needs k >= 1")
    while kk:
        if kk & 1:
            result = base if result is None else poly_mul(result, base)
        kk >>= 1
        if kk:
            base = poly_mul(base, base)
    return result


def poly_compose(dict poly, list args, out_vars):
    """Substitute args[i] for variable i; results live in out_vars variables."""
    cdef tuple zero_mono = (0,) * <Py_ssize_t> out_vars
    cdef dict out = {}
    cdef list pow_cache = [dict() for _ in args]
    cdef dict term, cache
    cdef Py_ssize_t i
    for mono, coeff in poly.items():
        term = {zero_mono: coeff}
        for i in range(len(<tuple> mono)):
            exp = (<tuple> mono)[i]
            if exp == 0:
                continue
            cache = <dict> pow_cache[i]
            power = cache.get(exp)
            if power is None:
                power = poly_pow(<dict> args[i], exp)
                cache[exp] = power
            term = poly_mul(term, <dict> power)
            if not term:
                break
        out = poly_add(out, term)
    return out


def poly_eval(dict poly, list values):
    """Evaluate at a point (list of Fractions), exactly."""
    total = _ZERO
    cdef Py_ssize_t i
    for mono, coeff in poly.items():
        term = coeff
        for i in range(len(<tuple> mono)):
            exp = (<tuple> mono)[i]
            if exp:
                term = term * values[i] ** exp
        total = total + term
    return total
