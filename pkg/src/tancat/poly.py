"""Exact multivariate polynomials and polynomial maps over the rationals.

This is the concrete base category of the package: objects are affine spaces
Q^n, morphisms are PolyMaps (tuples of polynomials), and `differential`
implements the directional-derivative combinator D[f](x, v) = Jf(x)·v, the
point in the first n variables and the direction in the last n.

Polynomial text syntax (used in spec files and the CLI): `3/2*x1^2*x2 - x3`.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import _kernel as K
from .report import CheckReport


class PolyError(ValueError):
    pass


def _zero_mono(n: int) -> tuple[int, ...]:
    return (0,) * n


class Polynomial:
    """Sparse polynomial in variables x1..xn with Fraction coefficients."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: dict[tuple[int, ...], Fraction]):
        self.n_vars = n_vars
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n_vars: int) -> "Polynomial":
        return Polynomial(n_vars, {})

    @staticmethod
    def const(n_vars: int, value) -> "Polynomial":
        c = Fraction(value)
        return Polynomial(n_vars, {_zero_mono(n_vars): c} if c else {})

    @staticmethod
    def var(n_vars: int, index: int) -> "Polynomial":
        """The variable x_index, 1-based."""
        if not 1 <= index <= n_vars:
            raise PolyError(f"variable x{index} out of range for {n_vars} variables")
        mono = [0] * n_vars
        mono[index - 1] = 1
        return Polynomial(n_vars, {tuple(mono): Fraction(1)})

    # -- ring operations ---------------------------------------------------

    def _require_same(self, other: "Polynomial") -> None:
        if self.n_vars != other.n_vars:
            raise PolyError(f"variable-count mismatch: {self.n_vars} vs {other.n_vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.n_vars, other)
        self._require_same(other)
        return Polynomial(self.n_vars, K.poly_add(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.n_vars, other)
        self._require_same(other)
        return Polynomial(self.n_vars, K.poly_sub(self.terms, other.terms))

    def __neg__(self):
        return Polynomial(self.n_vars, K.poly_neg(self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.n_vars, K.poly_scale(self.terms, Fraction(other)))
        self._require_same(other)
        return Polynomial(self.n_vars, K.poly_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative powers are not polynomials")
        if k == 0:
            return Polynomial.const(self.n_vars, 1)
        if not self.terms:
            return Polynomial.zero(self.n_vars)
        return Polynomial(self.n_vars, K.poly_pow(self.terms, k))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; the zero polynomial gets -1."""
        return max((sum(m) for m in self.terms), default=-1)

    # -- calculus and substitution -----------------------------------------

    def partial(self, index: int) -> "Polynomial":
        """d/dx_index, 1-based."""
        i = index - 1
        out: dict[tuple[int, ...], Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono[i]
            if e:
                new = list(mono)
                new[i] = e - 1
                out[tuple(new)] = coeff * e
        return Polynomial(self.n_vars, out)

    def substitute(self, args: list["Polynomial"],
                   out_vars: int | None = None) -> "Polynomial":
        """Plug args[i] in for x_{i+1}; args live in a common variable count.

        For a polynomial in zero variables (a constant) pass `out_vars` to
        pick the ambient space.
        """
        if len(args) != self.n_vars:
            raise PolyError(f"need {self.n_vars} substitutions, got {len(args)}")
        inferred = args[0].n_vars if args else (out_vars or 0)
        if out_vars is not None and args and inferred != out_vars:
            raise PolyError("out_vars disagrees with the substitution arguments")
        for a in args:
            if a.n_vars != inferred:
                raise PolyError("substitution arguments disagree on variable count")
        if not args:
            zero = (0,) * inferred
            return Polynomial(inferred, {zero: c for mono, c in self.terms.items()})
        terms = K.poly_compose(self.terms, [a.terms for a in args], inferred)
        return Polynomial(inferred, terms)

    def shift_vars(self, offset: int, new_n: int) -> "Polynomial":
        """Reindex x_i -> x_{i+offset} inside a space of new_n variables."""
        out = {}
        for mono, coeff in self.terms.items():
            new = [0] * new_n
            for i, e in enumerate(mono):
                if e:
                    new[i + offset] = e
            out[tuple(new)] = coeff
        return Polynomial(new_n, out)

    def eval(self, values) -> Fraction:
        vals = [Fraction(v) for v in values]
        if len(vals) != self.n_vars:
            raise PolyError(f"need {self.n_vars} values, got {len(vals)}")
        return K.poly_eval(self.terms, vals)

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        # Graded-lex for printing: higher total degree first, then exponents.
        keys = sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m)))
        parts = []
        for mono in keys:
            coeff = self.terms[mono]
            factors = [
                f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(mono)
                if e
            ]
            body = "*".join(factors)
            mag = abs(coeff)
            if not factors:
                chunk = str(mag)
            elif mag == 1:
                chunk = body
            else:
                chunk = f"{mag}*{body}"
            parts.append(("- " if coeff < 0 else "+ ") + chunk)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__


# -- polynomial text parsing ------------------------------------------------


class _PolyParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise PolyError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def number(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        num = int(self.text[start:self.pos])
        if self.peek() == "/":
            self.pos += 1
            self.skip_ws()
            dstart = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if dstart == self.pos:
                self.error("expected a denominator")
            return Fraction(num, int(self.text[dstart:self.pos]))
        return Fraction(num)

    def atom(self, n_vars: int) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.take("(")
            p = self.expr(n_vars)
            self.take(")")
            return p
        if ch == "x":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected a variable index after 'x'")
            return Polynomial.var(n_vars, int(self.text[start:self.pos]))
        if ch.isdigit():
            return Polynomial.const(n_vars, self.number())
        self.error("expected a term")

    def factor(self, n_vars: int) -> Polynomial:
        p = self.atom(n_vars)
        if self.peek() == "^":
            self.take("^")
            self.skip_ws()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected an exponent")
            p = p ** int(self.text[start:self.pos])
        return p

    def term(self, n_vars: int) -> Polynomial:
        p = self.factor(n_vars)
        while self.peek() == "*":
            self.take("*")
            p = p * self.factor(n_vars)
        return p

    def expr(self, n_vars: int) -> Polynomial:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.peek() == "-":
                sign = -sign
            self.pos += 1
        p = self.term(n_vars) * sign
        while self.peek() in ("+", "-"):
            sign = 1
            while self.peek() in ("+", "-"):
                if self.peek() == "-":
                    sign = -sign
                self.pos += 1
            p = p + self.term(n_vars) * sign
        return p


def max_var_index(text: str) -> int:
    """Largest variable index mentioned in a polynomial string (0 if none)."""
    best = 0
    i = 0
    while i < len(text):
        if text[i] == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j > i + 1:
                best = max(best, int(text[i + 1:j]))
            i = j
        else:
            i += 1
    return best


def parse_poly(text: str, n_vars: int | None = None) -> Polynomial:
    """Parse `3/2*x1^2*x2 - x3` style syntax."""
    if n_vars is None:
        n_vars = max_var_index(text)
    parser = _PolyParser(text)
    p = parser.expr(n_vars)
    parser.skip_ws()
    if parser.pos != len(text):
        parser.error("trailing input")
    return p


# -- polynomial maps ---------------------------------------------------------


class PolyMap:
    """A polynomial map Q^src_dim -> Q^tgt_dim, stored componentwise."""

    __slots__ = ("src_dim", "tgt_dim", "components")

    def __init__(self, src_dim: int, tgt_dim: int, components: list[Polynomial]):
        if len(components) != tgt_dim:
            raise PolyError(f"expected {tgt_dim} components, got {len(components)}")
        for c in components:
            if c.n_vars != src_dim:
                raise PolyError(
                    f"component in {c.n_vars} variables inside a map from Q^{src_dim}"
                )
        self.src_dim = src_dim
        self.tgt_dim = tgt_dim
        self.components = tuple(components)

    @staticmethod
    def identity(n: int) -> "PolyMap":
        return PolyMap(n, n, [Polynomial.var(n, i + 1) for i in range(n)])

    @staticmethod
    def zero(src_dim: int, tgt_dim: int) -> "PolyMap":
        return PolyMap(src_dim, tgt_dim, [Polynomial.zero(src_dim)] * tgt_dim)

    @staticmethod
    def constant(src_dim: int, values) -> "PolyMap":
        return PolyMap(src_dim, len(values), [Polynomial.const(src_dim, v) for v in values])

    @staticmethod
    def from_strings(src_dim: int, texts: list[str]) -> "PolyMap":
        return PolyMap(src_dim, len(texts), [parse_poly(t, src_dim) for t in texts])

    @staticmethod
    def projection(src_dim: int, start: int, count: int) -> "PolyMap":
        """Project onto variables start..start+count-1 (0-based start)."""
        return PolyMap(
            src_dim, count,
            [Polynomial.var(src_dim, start + i + 1) for i in range(count)],
        )

    @staticmethod
    def pairing(maps: list["PolyMap"]) -> "PolyMap":
        """Tuple maps with a common source into the product of their targets."""
        if not maps:
            raise PolyError("pairing needs at least one map")
        src = maps[0].src_dim
        comps: list[Polynomial] = []
        for m in maps:
            if m.src_dim != src:
                raise PolyError("pairing requires a common source dimension")
            comps.extend(m.components)
        return PolyMap(src, len(comps), comps)

    def component(self, i: int) -> Polynomial:
        return self.components[i]

    def then(self, g: "PolyMap") -> "PolyMap":
        """Diagrammatic composition: self first, then g."""
        return compose_maps(g, self)

    def __add__(self, other: "PolyMap") -> "PolyMap":
        if (self.src_dim, self.tgt_dim) != (other.src_dim, other.tgt_dim):
            raise PolyError("pointwise + needs equal shapes")
        return PolyMap(self.src_dim, self.tgt_dim,
                       [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        if (self.src_dim, self.tgt_dim) != (other.src_dim, other.tgt_dim):
            raise PolyError("pointwise - needs equal shapes")
        return PolyMap(self.src_dim, self.tgt_dim,
                       [a - b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (self.src_dim, self.tgt_dim, self.components) == \
               (other.src_dim, other.tgt_dim, other.components)

    def __hash__(self):
        return hash((self.src_dim, self.tgt_dim, self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def eval(self, values) -> list[Fraction]:
        vals = [Fraction(v) for v in values]
        return [c.eval(vals) for c in self.components]

    def max_degree(self) -> int:
        return max((c.degree() for c in self.components), default=-1)

    def cross(self, other: "PolyMap") -> "PolyMap":
        """Product map f x g : Q^(s1+s2) -> Q^(t1+t2)."""
        n = self.src_dim + other.src_dim
        comps = [c.shift_vars(0, n) for c in self.components]
        comps += [c.shift_vars(self.src_dim, n) for c in other.components]
        return PolyMap(n, self.tgt_dim + other.tgt_dim, comps)

    def is_affine(self) -> bool:
        return self.max_degree() <= 1

    def linear_part(self):
        """(matrix, offset) for an affine map; raises if degree > 1."""
        if not self.is_affine():
            raise PolyError("map is not affine-linear")
        zero = _zero_mono(self.src_dim)
        matrix = []
        offset = []
        for c in self.components:
            offset.append(c.terms.get(zero, Fraction(0)))
            row = [Fraction(0)] * self.src_dim
            for mono, coeff in c.terms.items():
                if sum(mono) == 1:
                    row[mono.index(1)] = coeff
            matrix.append(row)
        return matrix, offset

    def __str__(self) -> str:
        body = ", ".join(str(c) for c in self.components)
        return f"({body}): Q^{self.src_dim} -> Q^{self.tgt_dim}"

    __repr__ = __str__


def compose_maps(g: PolyMap, f: PolyMap) -> PolyMap:
    """g after f (exact substitution)."""
    if f.tgt_dim != g.src_dim:
        raise PolyError(f"cannot compose: inner target {f.tgt_dim} vs outer source {g.src_dim}")
    args = list(f.components)
    comps = [c.substitute(args) if args else Polynomial(f.src_dim, dict(c.terms))
             for c in g.components]
    return PolyMap(f.src_dim, g.tgt_dim, comps)


# -- the differential combinator ---------------------------------------------


def differential(f: PolyMap) -> PolyMap:
    """D[f] : Q^(2n) -> Q^m, D[f](x, v) = Jacobian of f at x applied to v."""
    n = f.src_dim
    two_n = 2 * n
    xs = [Polynomial.var(two_n, i + 1) for i in range(n)]
    comps = []
    for c in f.components:
        acc = Polynomial.zero(two_n)
        for j in range(n):
            pj = c.partial(j + 1)
            if pj.is_zero():
                continue
            acc = acc + pj.substitute(xs) * Polynomial.var(two_n, n + j + 1)
        comps.append(acc)
    return PolyMap(two_n, f.tgt_dim, comps)


def is_linear(f: PolyMap) -> bool:
    """Linearity in the differential sense: D[f] ∘ (0, id) = f exactly."""
    n = f.src_dim
    zero_then_id = PolyMap.pairing([PolyMap.zero(n, n), PolyMap.identity(n)])
    return compose_maps(differential(f), zero_then_id) == f


# -- random generation and the axiom checker ---------------------------------


def random_polynomial(rng: random.Random, n_vars: int, degree: int,
                      coeff_range: tuple[int, int] = (-3, 3),
                      n_terms: int = 4) -> Polynomial:
    p = Polynomial.zero(n_vars)
    for _ in range(n_terms):
        mono = [0] * n_vars
        for _ in range(rng.randint(0, degree)):
            if n_vars:
                mono[rng.randrange(n_vars)] += 1
        c = rng.randint(*coeff_range)
        if c:
            p = p + Polynomial(n_vars, {tuple(mono): Fraction(c)})
    return p


def random_map(rng: random.Random, src_dim: int, tgt_dim: int, degree: int,
               coeff_range: tuple[int, int] = (-3, 3)) -> PolyMap:
    return PolyMap(src_dim, tgt_dim,
                   [random_polynomial(rng, src_dim, degree, coeff_range)
                    for _ in range(tgt_dim)])


def _pair_with(g: PolyMap, h: PolyMap) -> PolyMap:
    return PolyMap.pairing([g, h])


def check_cdc_axioms(sample: list[PolyMap], seed: int = 0) -> CheckReport:
    """Verify CD.1-CD.7 as exact polynomial identities over a sample.

    Companion maps with composable shapes (the g, h, k of the axioms) are
    generated from `seed`; a failure witness names the offending maps and the
    nonzero difference.
    """
    rng = random.Random(seed)
    report = CheckReport("cartesian differential axioms")

    for idx, f in enumerate(sample):
        n, m = f.src_dim, f.tgt_dim
        tag = f"map#{idx}"
        df = differential(f)
        g = random_map(rng, n, m, 2)
        # CD.1 additivity of D in the map argument.
        report.check(
            f"CD.1 D[f+g]=D[f]+D[g] [{tag}]",
            differential(f + g) - (df + differential(g)),
            f"f={f}, g={g}")
        report.check(
            f"CD.1 D[0]=0 [{tag}]",
            differential(PolyMap.zero(n, m)),
            "zero map")

        # CD.2 additivity in the direction argument.
        a = random_map(rng, n, n, 2)
        h = random_map(rng, n, n, 2)
        k = random_map(rng, n, n, 2)
        lhs = compose_maps(df, _pair_with(a, h + k))
        rhs = compose_maps(df, _pair_with(a, h)) + compose_maps(df, _pair_with(a, k))
        report.check(f"CD.2 additive direction [{tag}]", lhs - rhs, f"f={f}")
        report.check(
            f"CD.2 zero direction [{tag}]",
            compose_maps(df, _pair_with(a, PolyMap.zero(n, n))),
            f"f={f}")

        # CD.3 projections and the identity are linear.
        if idx == 0:
            report.check(
                "CD.3 D[id]=pi1",
                differential(PolyMap.identity(n)) - PolyMap.projection(2 * n, n, n),
                "identity map")
            if n >= 1:
                pi0 = PolyMap.projection(n, 0, 1)
                report.check(
                    "CD.3 D[pi_i]=pi_i.pi1",
                    differential(pi0) - PolyMap.projection(2 * n, n, 1),
                    "first projection")

        # CD.4 pairing.
        g2 = random_map(rng, n, 2, 2)
        report.check(
            f"CD.4 D[(f,g)]=(D[f],D[g]) [{tag}]",
            differential(_pair_with(f, g2)) - _pair_with(df, differential(g2)),
            f"f={f}, g={g2}")

        # CD.5 chain rule: D[g∘f] = D[g]∘(f∘pi0, D[f]).
        g3 = random_map(rng, m, 2, 2)
        pi0 = PolyMap.projection(2 * n, 0, n)
        lhs = differential(compose_maps(g3, f))
        rhs = compose_maps(differential(g3), _pair_with(compose_maps(f, pi0), df))
        report.check(f"CD.5 chain rule [{tag}]", lhs - rhs, f"f={f}, g={g3}")

        # CD.6 D[D[f]] ∘ ((a,0),(0,d)) = D[f] ∘ (a,d), as an identity in (a,d).
        ddf = differential(df)
        two_n = 2 * n
        a_var = PolyMap.projection(two_n, 0, n)
        d_var = PolyMap.projection(two_n, n, n)
        z = PolyMap.zero(two_n, n)
        plug = PolyMap.pairing([a_var, z, z, d_var])
        report.check(f"CD.6 lift of D [{tag}]",
                     compose_maps(ddf, plug) - df, f"f={f}")

        # CD.7 symmetry of mixed partials, as an identity in (a,b,c,d).
        four_n = 4 * n
        va = PolyMap.projection(four_n, 0, n)
        vb = PolyMap.projection(four_n, n, n)
        vc = PolyMap.projection(four_n, 2 * n, n)
        vd = PolyMap.projection(four_n, 3 * n, n)
        lhs = compose_maps(ddf, PolyMap.pairing([va, vb, vc, vd]))
        rhs = compose_maps(ddf, PolyMap.pairing([va, vc, vb, vd]))
        report.check(f"CD.7 symmetry [{tag}]", lhs - rhs, f"f={f}")

    return report
