"""Exact arithmetic in the monoidal category of Weil N-rigs.

Objects are tensor products W_{n1} ⊗ ... ⊗ W_{nk} of the rigs
W_n = N[x_1..x_n]/(x_i x_j, i<=j), encoded by their width lists (the empty
list is N).  A basis monomial picks, per factor, either the unit (0) or one
of that factor's variables (1..n); any product putting two variables in the
same factor vanishes.  Morphisms are determined by the images of the source
generators, which must be nilpotent and kill the source relations.

Basis order: monomial tuples compared lexicographically with the FIRST
factor most significant and 0 (unit) < 1 < ... < n inside a factor.  This is
the order that makes the tensor act strictly, T^{U⊗V} = T^U ∘ T^V, once the
polynomial model flattens coordinates (see module `tangent`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class WeilError(ValueError):
    pass


Monomial = tuple[int, ...]


@dataclass(frozen=True)
class WeilAlgebra:
    """A tensor product of W_n factors; widths == () encodes N."""

    widths: tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.widths):
            raise WeilError("factor widths must be >= 1 (use [] for N)")

    @property
    def n_factors(self) -> int:
        return len(self.widths)

    @property
    def dim(self) -> int:
        d = 1
        for n in self.widths:
            d *= n + 1
        return d

    def basis(self) -> list[Monomial]:
        """All monomials, in the canonical order (unit first)."""
        return [tuple(m) for m in itertools.product(*(range(n + 1) for n in self.widths))]

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.widths)

    def generators(self) -> list[tuple[int, int]]:
        """(factor, variable) pairs, factor 0-based, variable 1-based."""
        return [(i, j) for i, n in enumerate(self.widths) for j in range(1, n + 1)]

    def monomial_index(self, mono: Monomial) -> int:
        index = 0
        for entry, n in zip(mono, self.widths):
            index = index * (n + 1) + entry
        return index

    def is_valid_monomial(self, mono: Monomial) -> bool:
        return len(mono) == len(self.widths) and all(
            0 <= e <= n for e, n in zip(mono, self.widths))

    def tensor(self, other: "WeilAlgebra") -> "WeilAlgebra":
        return WeilAlgebra(self.widths + other.widths)

    def var_name(self, factor: int, j: int) -> str:
        letters = "xyzstuvw"
        if all(n == 1 for n in self.widths) and self.n_factors <= len(letters):
            return letters[factor]
        if self.n_factors == 1:
            return f"x{j}"
        return f"x{factor + 1}_{j}"

    def monomial_str(self, mono: Monomial) -> str:
        names = [self.var_name(i, e) for i, e in enumerate(mono) if e]
        return "".join(names) if names else "1"

    def __str__(self) -> str:
        if not self.widths:
            return "N"
        return "*".join("W" if n == 1 else f"W{n}" for n in self.widths)

    __repr__ = __str__


NAT = WeilAlgebra(())
W = WeilAlgebra((1,))
WW = WeilAlgebra((1, 1))


def make_weil(widths) -> WeilAlgebra:
    """Canonical object from a width list; rejects zero widths."""
    return WeilAlgebra(tuple(widths))


def parse_algebra(text: str) -> WeilAlgebra:
    """Parse `N`, `W`, `W3`, `W2*W`, ..."""
    text = text.strip()
    if text == "N":
        return NAT
    widths = []
    for chunk in text.split("*"):
        chunk = chunk.strip()
        if not chunk.startswith("W"):
            raise WeilError(f"bad algebra syntax: {text!r}")
        tail = chunk[1:]
        if tail == "":
            widths.append(1)
        elif tail.isdigit() and int(tail) >= 1:
            widths.append(int(tail))
        else:
            raise WeilError(f"bad algebra factor: {chunk!r}")
    return WeilAlgebra(tuple(widths))


def mono_mul(algebra: WeilAlgebra, a: Monomial, b: Monomial) -> Monomial | None:
    """Product of basis monomials; None when it dies on a relation."""
    out = []
    for x, y in zip(a, b):
        if x and y:
            return None
        out.append(x or y)
    return tuple(out)


class WeilElement:
    """An element of a Weil algebra: finitely supported N-combination of monomials."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: WeilAlgebra, coeffs: dict[Monomial, int]):
        for mono, c in coeffs.items():
            if not algebra.is_valid_monomial(mono):
                raise WeilError(f"monomial {mono} not in basis of {algebra}")
            if c < 0:
                raise WeilError("coefficients live in N; no negatives in a rig")
        self.algebra = algebra
        self.coeffs = {m: c for m, c in coeffs.items() if c}

    @staticmethod
    def zero(algebra: WeilAlgebra) -> "WeilElement":
        return WeilElement(algebra, {})

    @staticmethod
    def unit(algebra: WeilAlgebra, c: int = 1) -> "WeilElement":
        return WeilElement(algebra, {algebra.unit_monomial: c})

    @staticmethod
    def variable(algebra: WeilAlgebra, factor: int, j: int) -> "WeilElement":
        mono = [0] * algebra.n_factors
        mono[factor] = j
        return WeilElement(algebra, {tuple(mono): 1})

    def unit_coefficient(self) -> int:
        return self.coeffs.get(self.algebra.unit_monomial, 0)

    def is_nilpotent(self) -> bool:
        return self.unit_coefficient() == 0

    def __add__(self, other: "WeilElement") -> "WeilElement":
        self._same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return WeilElement(self.algebra, out)

    def __mul__(self, other: "WeilElement") -> "WeilElement":
        return element_mul(self, other)

    def scale(self, c: int) -> "WeilElement":
        if c < 0:
            raise WeilError("no negatives in a rig")
        return WeilElement(self.algebra, {m: c * v for m, v in self.coeffs.items()})

    def _same(self, other: "WeilElement") -> None:
        if self.algebra != other.algebra:
            raise WeilError(f"algebra mismatch: {self.algebra} vs {other.algebra}")

    def __eq__(self, other):
        if not isinstance(other, WeilElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.algebra, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for mono in sorted(self.coeffs, key=self.algebra.monomial_index):
            c = self.coeffs[mono]
            name = self.algebra.monomial_str(mono)
            if name == "1":
                parts.append(str(c))
            else:
                parts.append(name if c == 1 else f"{c}{name}")
        return " + ".join(parts)

    __repr__ = __str__


def element_mul(a: WeilElement, b: WeilElement) -> WeilElement:
    """Distributive product, reduced by the nilpotency relations."""
    a._same(b)
    out: dict[Monomial, int] = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            mono = mono_mul(a.algebra, ma, mb)
            if mono is not None:
                out[mono] = out.get(mono, 0) + ca * cb
    return WeilElement(a.algebra, out)


class WeilMorphism:
    """A rig morphism, recorded by the images of the source generators."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: WeilAlgebra, target: WeilAlgebra,
                 images: list[WeilElement], check: bool = True):
        gens = source.generators()
        if len(images) != len(gens):
            raise WeilError(f"{source} has {len(gens)} generators, got {len(images)} images")
        for img in images:
            if img.algebra != target:
                raise WeilError("image lies in the wrong algebra")
            if not img.is_nilpotent():
                raise WeilError(f"generator image {img} has a unit part")
        self.source = source
        self.target = target
        self.images = tuple(images)
        if check:
            self._check_relations()

    def _check_relations(self) -> None:
        by_factor: dict[int, list[WeilElement]] = {}
        for (factor, _), img in zip(self.source.generators(), self.images):
            by_factor.setdefault(factor, []).append(img)
        for factor, imgs in by_factor.items():
            for i, a in enumerate(imgs):
                for b in imgs[i:]:
                    if element_mul(a, b).coeffs:
                        raise WeilError(
                            f"images break the factor-{factor} relation: "
                            f"({a})*({b}) != 0")

    def image_of(self, factor: int, j: int) -> WeilElement:
        index = sum(self.source.widths[:factor]) + (j - 1)
        return self.images[index]

    def apply(self, elem: WeilElement) -> WeilElement:
        """Push an element of the source through the morphism."""
        if elem.algebra != self.source:
            raise WeilError("element not in the source algebra")
        out = WeilElement.zero(self.target)
        for mono, c in elem.coeffs.items():
            term = WeilElement.unit(self.target)
            for factor, entry in enumerate(mono):
                if entry:
                    term = element_mul(term, self.image_of(factor, entry))
                    if not term.coeffs:
                        break
            out = out + term.scale(c)
        return out

    def apply_monomial(self, mono: Monomial) -> WeilElement:
        return self.apply(WeilElement(self.source, {mono: 1}))

    def matrix(self) -> list[list[int]]:
        """Natural-number matrix over the bases: column per source monomial."""
        tgt_basis = self.target.basis()
        tgt_index = {m: i for i, m in enumerate(tgt_basis)}
        cols = []
        for mono in self.source.basis():
            img = self.apply_monomial(mono)
            col = [0] * len(tgt_basis)
            for m, c in img.coeffs.items():
                col[tgt_index[m]] = c
            cols.append(col)
        return cols

    def __eq__(self, other):
        if not isinstance(other, WeilMorphism):
            return NotImplemented
        return (self.source, self.target, self.images) == \
               (other.source, other.target, other.images)

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __str__(self) -> str:
        gens = self.source.generators()
        body = ", ".join(
            f"{self.source.var_name(i, j)} -> {img}"
            for (i, j), img in zip(gens, self.images))
        return f"[{self.source} -> {self.target}: {body or 'unit'}]"

    __repr__ = __str__


def identity_morphism(algebra: WeilAlgebra) -> WeilMorphism:
    return WeilMorphism(algebra, algebra,
                        [WeilElement.variable(algebra, i, j)
                         for i, j in algebra.generators()], check=False)


def compose_morphisms(g: WeilMorphism, f: WeilMorphism) -> WeilMorphism:
    """g after f: substitute f's generator images through g."""
    if f.target != g.source:
        raise WeilError(f"cannot compose: {f.target} vs {g.source}")
    return WeilMorphism(f.source, g.target, [g.apply(img) for img in f.images])


def tensor_morphisms(f: WeilMorphism, g: WeilMorphism) -> WeilMorphism:
    """f ⊗ g, reindexing generator images into the tensor blocks."""
    source = f.source.tensor(g.source)
    target = f.target.tensor(g.target)
    offset = f.target.n_factors

    def embed_left(elem: WeilElement) -> WeilElement:
        pad = (0,) * g.target.n_factors
        return WeilElement(target, {m + pad: c for m, c in elem.coeffs.items()})

    def embed_right(elem: WeilElement) -> WeilElement:
        pad = (0,) * f.target.n_factors
        return WeilElement(target, {pad + m: c for m, c in elem.coeffs.items()})

    images = [embed_left(img) for img in f.images]
    images += [embed_right(img) for img in g.images]
    return WeilMorphism(source, target, images, check=False)


def morphisms_equal(f: WeilMorphism, g: WeilMorphism) -> bool:
    """Same boundary and identical generator images (sound and complete)."""
    return f == g


def fibered_pair(f: WeilMorphism, g: WeilMorphism) -> WeilMorphism:
    """Induced map into the fibered sum W_{n+m} = W_n x_N W_m.

    Both inputs must share a source and have single-factor targets W_n, W_m;
    the result concatenates the generator images into disjoint blocks.
    """
    if f.source != g.source:
        raise WeilError("fibered pairing needs a common source")
    if f.target.n_factors > 1 or g.target.n_factors > 1:
        raise WeilError("fibered pairing needs targets of the form W_n")
    n = f.target.widths[0] if f.target.widths else 0
    m = g.target.widths[0] if g.target.widths else 0
    target = WeilAlgebra((n + m,)) if n + m else NAT

    def embed(elem: WeilElement, offset: int) -> WeilElement:
        out: dict[Monomial, int] = {}
        for mono, c in elem.coeffs.items():
            entry = mono[0] if mono else 0
            out[(entry + offset if entry else 0,)] = c
        return WeilElement(target, out)

    images = []
    for img_f, img_g in zip(f.images, g.images):
        images.append(embed(img_f, 0) + embed(img_g, n))
    return WeilMorphism(f.source, target, images)


# -- the generator morphisms --------------------------------------------------


def generator(kind: str, *, algebra: WeilAlgebra | None = None,
              i: int | None = None, n: int | None = None) -> WeilMorphism:
    """The structure morphisms of the free tangent category.

    p: W -> N, x -> 0.           zero: N -> W.
    plus: W2 -> W, x1,x2 -> x.   ell: W -> W⊗W, x -> xy.
    flip: W⊗W -> W⊗W, swap.      bang(V): V -> N.
    id(V).                       proj(i,n): W_n -> W, x_j -> delta_ij x.
    """
    if kind == "p":
        return WeilMorphism(W, NAT, [WeilElement.zero(NAT)])
    if kind == "zero":
        return WeilMorphism(NAT, W, [])
    if kind == "plus":
        x = WeilElement.variable(W, 0, 1)
        return WeilMorphism(WeilAlgebra((2,)), W, [x, x])
    if kind == "ell":
        xy = WeilElement(WW, {(1, 1): 1})
        return WeilMorphism(W, WW, [xy])
    if kind == "flip":
        return WeilMorphism(WW, WW, [WeilElement.variable(WW, 1, 1),
                                     WeilElement.variable(WW, 0, 1)])
    if kind == "bang":
        if algebra is None:
            raise WeilError("bang needs an algebra")
        return WeilMorphism(algebra, NAT,
                            [WeilElement.zero(NAT) for _ in algebra.generators()],
                            check=False)
    if kind == "id":
        if algebra is None:
            raise WeilError("id needs an algebra")
        return identity_morphism(algebra)
    if kind == "proj":
        if i is None or n is None:
            raise WeilError("proj needs i and n")
        if not 1 <= i <= n:
            raise WeilError(f"proj index {i} out of range 1..{n}")
        source = WeilAlgebra((n,))
        images = [WeilElement.variable(W, 0, 1) if j == i else WeilElement.zero(W)
                  for j in range(1, n + 1)]
        return WeilMorphism(source, W, images, check=False)
    raise WeilError(f"unknown generator kind {kind!r}")


def mu_morphism() -> WeilMorphism:
    """The universality comparison mu: W2 -> W⊗W, x1 -> y, x2 -> xy."""
    return WeilMorphism(WeilAlgebra((2,)), WW,
                        [WeilElement(WW, {(0, 1): 1}), WeilElement(WW, {(1, 1): 1})])


# -- transverse squares -------------------------------------------------------


@dataclass(frozen=True)
class TransverseSquare:
    """A commuting square in the ⊗-closure of the three base pullbacks.

    Stored as apex --(left_leg)--> corner_l --(left_base)--> base and
    apex --(right_leg)--> corner_r --(right_base)--> base, with a provenance
    string recording how it was generated.  Commutativity is checked at
    construction; membership in the transverse class is by provenance.
    """

    left_leg: WeilMorphism
    right_leg: WeilMorphism
    left_base: WeilMorphism
    right_base: WeilMorphism
    provenance: str

    def __post_init__(self):
        a = compose_morphisms(self.left_base, self.left_leg)
        b = compose_morphisms(self.right_base, self.right_leg)
        if not morphisms_equal(a, b):
            raise WeilError(f"square does not commute ({self.provenance})")

    @property
    def apex(self) -> WeilAlgebra:
        return self.left_leg.source


def _identity_square(algebra: WeilAlgebra) -> TransverseSquare:
    ident = identity_morphism(algebra)
    return TransverseSquare(ident, ident, ident, ident, f"id[{algebra}]")


def _fibered_sum_square(n: int, m: int) -> TransverseSquare:
    """W_{n+m} as the pullback of W_n --bang--> N <--bang-- W_m."""
    apex = WeilAlgebra((n + m,)) if n + m else NAT
    wn = WeilAlgebra((n,)) if n else NAT
    wm = WeilAlgebra((m,)) if m else NAT
    left = WeilMorphism(apex, wn, [
        WeilElement.variable(wn, 0, j) if j <= n else WeilElement.zero(wn)
        for j in range(1, n + m + 1)], check=False)
    right = WeilMorphism(apex, wm, [
        WeilElement.variable(wm, 0, j - n) if j > n else WeilElement.zero(wm)
        for j in range(1, n + m + 1)], check=False)
    return TransverseSquare(left, right,
                            generator("bang", algebra=wn),
                            generator("bang", algebra=wm),
                            f"fibered-sum[{n},{m}]")


def _vertical_lift_square() -> TransverseSquare:
    """W as the pullback of W2 --mu--> W⊗W <--zero⊗id-- W."""
    into_w2 = WeilMorphism(W, WeilAlgebra((2,)),
                           [WeilElement.variable(WeilAlgebra((2,)), 0, 1)])
    return TransverseSquare(into_w2, identity_morphism(W),
                            mu_morphism(),
                            tensor_morphisms(generator("zero"), identity_morphism(W)),
                            "vertical-lift")


def tensor_squares(a: TransverseSquare, b: TransverseSquare) -> TransverseSquare:
    return TransverseSquare(
        tensor_morphisms(a.left_leg, b.left_leg),
        tensor_morphisms(a.right_leg, b.right_leg),
        tensor_morphisms(a.left_base, b.left_base),
        tensor_morphisms(a.right_base, b.right_base),
        f"({a.provenance})⊗({b.provenance})")


def transverse_square(tag: str, *, n: int = 1, m: int = 1,
                      algebra: WeilAlgebra | None = None,
                      whisker_left: WeilAlgebra | None = None,
                      whisker_right: WeilAlgebra | None = None) -> TransverseSquare:
    """Build a base square and optionally whisker it by identity squares."""
    if tag == "fibered-sum":
        square = _fibered_sum_square(n, m)
    elif tag == "vertical-lift":
        square = _vertical_lift_square()
    elif tag == "identity":
        square = _identity_square(algebra if algebra is not None else W)
    else:
        raise WeilError(f"unknown base square tag {tag!r}")
    if whisker_left is not None:
        square = tensor_squares(_identity_square(whisker_left), square)
    if whisker_right is not None:
        square = tensor_squares(square, _identity_square(whisker_right))
    return square
