"""Flat presentations of anchored-bundle prolongations A.V.

For an anchored bundle on a trivial bundle (base Q^d, fiber Q^r, anchor
matrix ρ(x)), the prolongation by a Weil algebra V = W_{n1} ⊗ V' is the span
composition A_{n1} ×_{ϱ, T_{n1}.π} T_{n1}(A.V'), iterated down the factor
list.  Every fiber-product constraint pins a base-block duplicate (x, or
ρ(x)·u_i), so the space flattens: one d-block of base coordinates plus one
r-block per non-unit basis monomial of V.

Block order is the recursive span order — head-factor fibers first, then the
inner space's blocks, base copy before tangent copies — which for V = W⊗W
gives the (x; u, v, w) layout with embedding (x, u; x, v, ρ(x)u, w).  Each
block carries its monomial label, so reorderings (e.g. against the tangent
model's basis-ordered layout) are explicit permutations, not conventions.

The structural maps of the Weil nerve are built here: whiskered generator
actions (the flip takes the involution σ as an argument), span tensoring of
evaluated maps, and fibered-sum pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import weil
from .poly import PolyMap, Polynomial, compose_maps
from .tangent import structure_nat, weil_prolong
from .weil import WeilAlgebra, WeilMorphism


@dataclass(frozen=True)
class AnchoredShape:
    """Base dimension, rank, and the anchor matrix (entries in the base vars)."""

    base_dim: int
    rank: int
    rho: tuple[tuple[Polynomial, ...], ...]   # d rows, r columns

    def __post_init__(self):
        if len(self.rho) != self.base_dim:
            raise ValueError(f"anchor needs {self.base_dim} rows")
        for row in self.rho:
            if len(row) != self.rank:
                raise ValueError(f"anchor rows need {self.rank} entries")
            for entry in row:
                if entry.n_vars != self.base_dim:
                    raise ValueError("anchor entries are polynomials in the base variables")

    def anchor_fiber(self, x: list[Polynomial], u: list[Polynomial]) -> list[Polynomial]:
        """ρ(x)·u as polynomials in whatever space x, u live in."""
        n = x[0].n_vars if x else (u[0].n_vars if u else 0)
        out = []
        for row in self.rho:
            acc = Polynomial.zero(n)
            for entry, u_a in zip(row, u):
                acc = acc + entry.substitute(x, out_vars=n) * u_a
            out.append(acc)
        return out


Label = tuple[int, ...]


@dataclass(frozen=True)
class Block:
    label: Label
    size: int
    offset: int


class Prolongation:
    """The flat space A.V with labeled coordinate blocks."""

    def __init__(self, shape: AnchoredShape, V: WeilAlgebra):
        self.shape = shape
        self.V = V
        d, r = shape.base_dim, shape.rank
        if V.n_factors == 0:
            self.head_width = 0
            self.inner: Prolongation | None = None
            self.blocks = [Block(V.unit_monomial, d, 0)]
        else:
            n = V.widths[0]
            tail = WeilAlgebra(V.widths[1:])
            self.head_width = n
            self.inner = Prolongation(shape, tail)
            blocks: list[Block] = [Block(V.unit_monomial, d, 0)]
            offset = d
            for i in range(1, n + 1):
                blocks.append(Block((i,) + tail.unit_monomial, r, offset))
                offset += r
            for inner_block in self.inner.fiber_blocks:
                blocks.append(Block((0,) + inner_block.label, r, offset))
                offset += r
            for i in range(1, n + 1):
                for inner_block in self.inner.fiber_blocks:
                    blocks.append(Block((i,) + inner_block.label, r, offset))
                    offset += r
            self.blocks = blocks
        self.dim = sum(b.size for b in self.blocks)
        self._by_label = {b.label: b for b in self.blocks}

    @property
    def fiber_blocks(self) -> list[Block]:
        return [b for b in self.blocks if b.label != self.V.unit_monomial]

    def block(self, label: Label) -> Block:
        return self._by_label[label]

    def __repr__(self) -> str:
        labels = ", ".join(self.V.monomial_str(b.label) for b in self.blocks)
        return f"A.{self.V} (dim {self.dim}; blocks {labels})"

    # -- coordinate helpers --------------------------------------------------

    def vars_of(self, label: Label, n_vars: int | None = None,
                offset_shift: int = 0) -> list[Polynomial]:
        n = self.dim if n_vars is None else n_vars
        b = self.block(label)
        return [Polynomial.var(n, offset_shift + b.offset + i + 1) for i in range(b.size)]

    def base_vars(self, n_vars: int | None = None, offset_shift: int = 0) -> list[Polynomial]:
        return self.vars_of(self.V.unit_monomial, n_vars, offset_shift)

    def select(self, source_dim: int, labels: list[Label],
               offset_shift: int = 0) -> PolyMap:
        """The projection onto the listed blocks (in the given order)."""
        comps: list[Polynomial] = []
        for label in labels:
            comps.extend(self.vars_of(label, source_dim, offset_shift))
        return PolyMap(source_dim, len(comps), comps)

    # -- the two legs of the span and the head decomposition ------------------

    @cached_property
    def pi_leg(self) -> PolyMap:
        """Left leg A.V -> M (base projection)."""
        return PolyMap(self.dim, self.shape.base_dim, self.base_vars())

    @cached_property
    def rho_leg(self) -> PolyMap:
        """Right leg A.V -> T^V(M)."""
        if self.inner is None:
            return PolyMap.identity(self.dim)
        t_inner_rho = weil_prolong(WeilAlgebra((self.head_width,)), self.inner.rho_leg)
        return compose_maps(t_inner_rho, self.proj1)

    @cached_property
    def proj0(self) -> PolyMap:
        """A.V -> A_n flat (x, u_1..u_n) for the head factor."""
        n = self.head_width
        labels = [self.V.unit_monomial]
        labels += [(i,) + self.inner.V.unit_monomial for i in range(1, n + 1)]
        return self.select(self.dim, labels)

    @cached_property
    def proj1(self) -> PolyMap:
        """A.V -> T_n(A.V') with every constrained coordinate reconstructed.

        Copy 0 is the inner point (base x, base-copy fibers); copy i has base
        ρ(x)·u_i and the (x_i, ν) fiber blocks.
        """
        inner = self.inner
        n = self.head_width
        x = self.base_vars()
        comps: list[Polynomial] = []
        comps.extend(x)
        for block in inner.fiber_blocks:
            comps.extend(self.vars_of((0,) + block.label))
        for i in range(1, n + 1):
            u_i = self.vars_of((i,) + inner.V.unit_monomial)
            comps.extend(self.shape.anchor_fiber(x, u_i))
            for block in inner.fiber_blocks:
                comps.extend(self.vars_of((i,) + block.label))
        return PolyMap(self.dim, (n + 1) * inner.dim, comps)

    def pair(self, a_part: PolyMap, t_part: PolyMap) -> PolyMap:
        """Assemble a map into A.V from maps into A_n and T_n(A.V').

        Inverse to (proj0, proj1): the constrained coordinates of `t_part`
        are dropped, everything else is selected into the flat layout.
        """
        inner = self.inner
        n = self.head_width
        d, r = self.shape.base_dim, self.shape.rank
        src = a_part.src_dim
        if t_part.src_dim != src:
            raise ValueError("pair needs a common source")
        comps: list[Polynomial] = list(a_part.components[:d])          # x
        comps += list(a_part.components[d:d + n * r])                  # u_i
        for block in inner.fiber_blocks:                               # base copy
            lo = block.offset
            comps += list(t_part.components[lo:lo + block.size])
        for i in range(1, n + 1):                                      # tangent copies
            copy_off = i * inner.dim
            for block in inner.fiber_blocks:
                lo = copy_off + block.offset
                comps += list(t_part.components[lo:lo + block.size])
        return PolyMap(src, self.dim, comps)

    # -- embeddings and reorderings -------------------------------------------

    @cached_property
    def embedding(self) -> PolyMap:
        """A.V into the iterated tangent spaces: (A_n-part, T_n(embedded inner)).

        For V = W⊗W this is (x, u; x, v, ρ(x)u, w) into A × TA; the fiber
        products A_n themselves are already flat, so the recursion bottoms
        out there.
        """
        if self.inner is None or self.inner.V.n_factors == 0:
            return PolyMap.identity(self.dim)
        inner_emb = weil_prolong(WeilAlgebra((self.head_width,)), self.inner.embedding)
        return PolyMap.pairing([self.proj0, compose_maps(inner_emb, self.proj1)])

    def weil_layout_iso(self) -> PolyMap:
        """Reorder flat blocks into the V-basis monomial order.

        For the tangent algebroid (r = d, ρ = id) the result identifies A.V
        with T^V(Q^d) on the nose, since blocks become the per-monomial
        coordinate blocks of the Weil action.
        """
        order = sorted(self.blocks, key=lambda b: self.V.monomial_index(b.label))
        comps: list[Polynomial] = []
        for block in order:
            comps.extend(self.vars_of(block.label))
        return PolyMap(self.dim, self.dim, comps)


# -- structural maps -----------------------------------------------------------


def _with_head(V: WeilAlgebra, head: WeilAlgebra) -> WeilAlgebra:
    return head.tensor(V)


def whisker_head(src: Prolongation, tgt: Prolongation, inner_map: PolyMap) -> PolyMap:
    """id_{W_n} ⊠ g on flat coordinates, for g between the inner spaces."""
    if src.head_width != tgt.head_width:
        raise ValueError("whisker_head needs equal head widths")
    lifted = weil_prolong(WeilAlgebra((src.head_width,)), inner_map)
    return tgt.pair(src.proj0, compose_maps(lifted, src.proj1))


def _relabel_map(src: Prolongation, tgt: Prolongation,
                 assignment: dict[Label, Label]) -> PolyMap:
    """Target block `label` copies source block assignment[label]; the rest 0."""
    comps: list[Polynomial] = []
    for block in tgt.blocks:
        source_label = assignment.get(block.label)
        if source_label is None:
            comps.extend([Polynomial.zero(src.dim)] * block.size)
        else:
            comps.extend(src.vars_of(source_label))
    return PolyMap(src.dim, tgt.dim, comps)


def head_generator(shape: AnchoredShape, kind: str, tail: WeilAlgebra,
                   sigma: PolyMap | None = None, *, i: int | None = None,
                   n: int | None = None) -> PolyMap:
    """The generator acting on the leading factor(s), whiskered by `tail`.

    p:  A.(W⊗tail)  -> A.tail          (base-copy extraction)
    0:  A.tail      -> A.(W⊗tail)      (zero insertion)
    +:  A.(W2⊗tail) -> A.(W⊗tail)      (fiberwise addition)
    proj(i,n): A.(W_n⊗tail) -> A.(W⊗tail)
    ell: A.(W⊗tail) -> A.(W⊗W⊗tail)    (generalized lift: label push a -> ab)
    c:  A.(W⊗W⊗tail) -> same           (σ on the spine, flip on mixed blocks)
    """
    if kind == "p":
        src = Prolongation(shape, _with_head(tail, weil.W))
        tgt = Prolongation(shape, tail)
        labels = [(0,) + tgt.V.unit_monomial]
        labels += [(0,) + b.label for b in tgt.fiber_blocks]
        return src.select(src.dim, labels)
    if kind == "zero":
        src = Prolongation(shape, tail)
        tgt = Prolongation(shape, _with_head(tail, weil.W))
        assignment = {tgt.V.unit_monomial: src.V.unit_monomial}
        for b in src.fiber_blocks:
            assignment[(0,) + b.label] = b.label
        return _relabel_map(src, tgt, assignment)
    if kind in ("plus", "proj"):
        width = 2 if kind == "plus" else n
        src = Prolongation(shape, _with_head(tail, WeilAlgebra((width,))))
        tgt = Prolongation(shape, _with_head(tail, weil.W))
        comps: list[Polynomial] = []
        for block in tgt.blocks:
            head, rest = block.label[0], block.label[1:]
            if head == 0:
                comps.extend(src.vars_of((0,) + rest))
            elif kind == "proj":
                comps.extend(src.vars_of((i,) + rest))
            else:
                total = None
                for j in range(1, width + 1):
                    vs = src.vars_of((j,) + rest)
                    total = vs if total is None else [a + b for a, b in zip(total, vs)]
                comps.extend(total)
        return PolyMap(src.dim, tgt.dim, comps)
    if kind == "ell":
        src = Prolongation(shape, _with_head(tail, weil.W))
        tgt = Prolongation(shape, _with_head(tail, weil.WW))
        assignment: dict[Label, Label] = {}
        for block in tgt.blocks:
            h1, h2, rest = block.label[0], block.label[1], block.label[2:]
            if (h1, h2) == (0, 0):
                assignment[block.label] = (0,) + rest
            elif (h1, h2) == (1, 1):
                assignment[block.label] = (1,) + rest
        return _relabel_map(src, tgt, assignment)
    if kind == "flip":
        if sigma is None:
            raise ValueError("the flip needs the algebroid involution σ")
        space = Prolongation(shape, _with_head(tail, weil.WW))
        l_space = Prolongation(shape, weil.WW)
        if sigma.src_dim != l_space.dim or sigma.tgt_dim != l_space.dim:
            raise ValueError("σ must act on the flat first prolongation")
        # σ applied to the spine blocks (x; u=(a), v=(b), w=(ab)).
        spine_labels = [space.V.unit_monomial,
                        (1, 0) + tail.unit_monomial,
                        (0, 1) + tail.unit_monomial,
                        (1, 1) + tail.unit_monomial]
        spine_in = space.select(space.dim, spine_labels)
        spine_out = compose_maps(sigma, spine_in)
        comps: list[Polynomial] = []
        d, r = shape.base_dim, shape.rank
        spine_slice = {
            space.V.unit_monomial: (0, d),
            (1, 0) + tail.unit_monomial: (d, r),
            (0, 1) + tail.unit_monomial: (d + r, r),
            (1, 1) + tail.unit_monomial: (d + 2 * r, r),
        }
        for block in space.blocks:
            h1, h2, rest = block.label[0], block.label[1], block.label[2:]
            if rest == tail.unit_monomial and (h1, h2) in ((0, 0), (1, 0), (0, 1), (1, 1)):
                lo, size = spine_slice[block.label]
                comps.extend(spine_out.components[lo:lo + size])
            elif (h1, h2) == (1, 0):
                comps.extend(space.vars_of((0, 1) + rest))
            elif (h1, h2) == (0, 1):
                comps.extend(space.vars_of((1, 0) + rest))
            else:
                comps.extend(space.vars_of(block.label))
        return PolyMap(space.dim, space.dim, comps)
    raise ValueError(f"unknown head generator {kind!r}")


_GENERATOR_WIDTHS = {
    "p": ((1,), ()),
    "zero": ((), (1,)),
    "plus": ((2,), (1,)),
    "ell": ((1,), (1, 1)),
    "flip": ((1, 1), (1, 1)),
}


def whiskered_generator(shape: AnchoredShape, kind: str, left: WeilAlgebra,
                        right: WeilAlgebra, sigma: PolyMap | None = None,
                        *, i: int | None = None, n: int | None = None) -> PolyMap:
    """A.(left ⊗ θ ⊗ right) for a generator θ, by head recursion on `left`."""
    if left.n_factors == 0:
        return head_generator(shape, kind, right, sigma, i=i, n=n)
    src_mid, tgt_mid = _GENERATOR_WIDTHS[kind] if kind != "proj" else ((n,), (1,))
    tail_left = WeilAlgebra(left.widths[1:])
    inner = whiskered_generator(shape, kind, tail_left, right, sigma, i=i, n=n)
    head = (left.widths[0],)
    src = Prolongation(shape, WeilAlgebra(head + tail_left.widths + src_mid + right.widths))
    tgt = Prolongation(shape, WeilAlgebra(head + tail_left.widths + tgt_mid + right.widths))
    return whisker_head(src, tgt, inner)


def split_left(space: Prolongation, k: int) -> tuple[PolyMap, PolyMap, WeilAlgebra, WeilAlgebra]:
    """Decompose A.(S1⊗S2) at factor boundary k into its ⊠ components.

    Returns (to_A_S1, to_T_S1_of_A_S2, S1, S2) where the second map produces
    the full T^{S1}(A.S2) coordinates (constrained entries reconstructed from
    the right leg of A.S1).
    """
    V = space.V
    S1 = WeilAlgebra(V.widths[:k])
    S2 = WeilAlgebra(V.widths[k:])
    shape = space.shape
    left_space = Prolongation(shape, S1)
    right_space = Prolongation(shape, S2)
    unit2 = S2.unit_monomial
    # Map onto A.S1: blocks with trivial S2 part.
    left_labels = [b.label[:k] for b in left_space.blocks]
    comps: list[Polynomial] = []
    for label in left_labels:
        comps.extend(space.vars_of(label + unit2))
    to_left = PolyMap(space.dim, left_space.dim, comps)
    # Map onto T^{S1}(A.S2): per S1-basis monomial, a full copy of A.S2 flat.
    rho_left = compose_maps(left_space.rho_leg, to_left)   # -> T^{S1} M
    basis1 = S1.basis()
    comps = []
    for pos, mu in enumerate(basis1):
        # Base part of this copy: x for the unit, else the mu-component of
        # the right leg of the S1 prolongation.
        d = shape.base_dim
        if mu == S1.unit_monomial:
            comps.extend(space.base_vars())
        else:
            comps.extend(rho_left.components[pos * d:(pos + 1) * d])
        for block in right_space.fiber_blocks:
            comps.extend(space.vars_of(mu + block.label))
    to_right = PolyMap(space.dim, len(basis1) * right_space.dim, comps)
    return to_left, to_right, S1, S2


def join_at(shape: AnchoredShape, S1: WeilAlgebra, S2: WeilAlgebra,
            left_map: PolyMap, right_map: PolyMap) -> PolyMap:
    """Inverse of split_left: assemble a map into A.(S1⊗S2)."""
    space = Prolongation(shape, S1.tensor(S2))
    left_space = Prolongation(shape, S1)
    right_space = Prolongation(shape, S2)
    basis1 = S1.basis()
    pos_of = {mu: i for i, mu in enumerate(basis1)}
    comps: list[Polynomial] = []
    for block in space.blocks:
        mu, nu = block.label[:S1.n_factors], block.label[S1.n_factors:]
        if nu == S2.unit_monomial and mu == S1.unit_monomial:
            comps.extend(left_map.components[:shape.base_dim])
        elif nu == S2.unit_monomial:
            b = left_space.block(mu)
            comps.extend(left_map.components[b.offset:b.offset + b.size])
        else:
            copy = pos_of[mu] * right_space.dim
            b = right_space.block(nu)
            comps.extend(right_map.components[copy + b.offset:copy + b.offset + b.size])
    return PolyMap(left_map.src_dim, space.dim, comps)


def tensor_action(shape: AnchoredShape,
                  left_phi: WeilMorphism, left_map: PolyMap,
                  right_phi: WeilMorphism, right_map: PolyMap) -> PolyMap:
    """(f ⊠ g) on flat coordinates for f over left_phi and g over right_phi."""
    src_space = Prolongation(shape, left_phi.source.tensor(right_phi.source))
    to_left, to_right, S1, S2 = split_left(src_space, left_phi.source.n_factors)
    t_g = weil_prolong(S1, right_map)
    pushed = compose_maps(
        structure_nat(left_phi, Prolongation(shape, right_phi.target).dim),
        compose_maps(t_g, to_right))
    new_left = compose_maps(left_map, to_left)
    return join_at(shape, left_phi.target, right_phi.target, new_left, pushed)


def pair_action(shape: AnchoredShape, left_map: PolyMap, right_map: PolyMap,
                n: int, m: int) -> PolyMap:
    """Tupling into the fibered sum A.W_{n+m} (shared base, stacked fibers)."""
    d = shape.base_dim
    if left_map.components[:d] != right_map.components[:d]:
        raise ValueError("fibered pairing needs equal base components")
    comps = list(left_map.components) + list(right_map.components[d:])
    target = Prolongation(shape, WeilAlgebra((n + m,)) if n + m else WeilAlgebra(()))
    if len(comps) != target.dim:
        raise ValueError("fibered pairing received maps of the wrong shapes")
    return PolyMap(left_map.src_dim, target.dim, comps)
