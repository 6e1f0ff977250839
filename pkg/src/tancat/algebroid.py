"""Involution algebroids on trivial bundles.

An algebroid is data (d, r, ρ, C): base Q^d, fiber Q^r, anchor matrix ρ(x)
(d×r, polynomial entries), bracket tensor C with ⟨e_α, e_β⟩ = Σ_γ
C[α][β][γ](x)·e_γ.  Nothing is assumed at construction; the checkers decide
the structure equations (alternating / Leibniz / Bianchi) and the involution
axioms (i)–(v), and the equivalence between the two viewpoints is exercised
in the test suite.

Flat coordinates: the first prolongation L(A) is (x; u, v, w) with embedding
(x, u; x, v, ρ(x)u, w) into A ×_ϱ,Tπ TA.  Hat coordinates (the A₃
presentation through a connection) are (π₀, p∘π₁, κ∘π₁); with the trivial
connection they coincide with the flat ones, and the canonical involution is
σ̂(x; u, v, w) = (x; v, u, w + C(x)(u, v)).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bundle as bundle_mod
from . import weil
from .flatspace import AnchoredShape, Prolongation, whiskered_generator
from .poly import PolyMap, Polynomial, compose_maps, parse_poly
from .report import CheckReport
from .tangent import structure_nat, weil_prolong
from .weil import NAT, W, WW, WeilAlgebra

L2_ALGEBRA = WeilAlgebra((1, 1, 1))


def _as_poly(entry, n_vars: int) -> Polynomial:
    if isinstance(entry, Polynomial):
        if entry.n_vars != n_vars:
            raise ValueError(f"polynomial in {entry.n_vars} vars, expected {n_vars}")
        return entry
    if isinstance(entry, str):
        return parse_poly(entry, n_vars)
    return Polynomial.const(n_vars, entry)


@dataclass(frozen=True)
class AlgebroidData:
    base_dim: int
    rank: int
    rho: tuple[tuple[Polynomial, ...], ...]       # d rows × r cols
    bracket: tuple[tuple[tuple[Polynomial, ...], ...], ...]  # C[α][β][γ]

    @property
    def shape(self) -> AnchoredShape:
        return AnchoredShape(self.base_dim, self.rank, self.rho)

    @property
    def bundle(self) -> bundle_mod.TrivialBundle:
        return bundle_mod.TrivialBundle(self.base_dim, self.rank)

    def anchor_map(self) -> PolyMap:
        """ϱ: A -> TM, (x, u) -> (x, ρ(x)·u)."""
        d, r = self.base_dim, self.rank
        n = d + r
        x = [Polynomial.var(n, i + 1) for i in range(d)]
        u = [Polynomial.var(n, d + a + 1) for a in range(r)]
        return PolyMap(n, 2 * d, x + self.shape.anchor_fiber(x, u))

    def bracket_fiber(self, x: list[Polynomial], u: list[Polynomial],
                      v: list[Polynomial]) -> list[Polynomial]:
        """C(x)(u, v) as polynomials in the ambient space of x, u, v."""
        n = x[0].n_vars if x else (u[0].n_vars if u else 0)
        out = []
        for gamma in range(self.rank):
            acc = Polynomial.zero(n)
            for a in range(self.rank):
                for b in range(self.rank):
                    entry = self.bracket[a][b][gamma]
                    if not entry.is_zero():
                        acc = acc + entry.substitute(x, out_vars=n) * u[a] * v[b]
            out.append(acc)
        return out

    def bracket_map(self) -> PolyMap:
        """⟨-,-⟩: A₂ -> A on flat (x, u, v)."""
        d, r = self.base_dim, self.rank
        n = d + 2 * r
        x = [Polynomial.var(n, i + 1) for i in range(d)]
        u = [Polynomial.var(n, d + a + 1) for a in range(r)]
        v = [Polynomial.var(n, d + r + a + 1) for a in range(r)]
        return PolyMap(n, d + r, x + self.bracket_fiber(x, u, v))

    def __str__(self) -> str:
        return f"algebroid(d={self.base_dim}, r={self.rank})"


def make_algebroid(d: int, r: int, rho, bracket) -> AlgebroidData:
    """Validate shapes; entries may be Polynomials, strings, or constants."""
    if len(rho) != d or any(len(row) != r for row in rho):
        raise ValueError(f"anchor must be a {d}x{r} matrix")
    if len(bracket) != r or any(len(row) != r for row in bracket) or \
            any(len(cell) != r for row in bracket for cell in row):
        raise ValueError(f"bracket must be an {r}x{r}x{r} tensor")
    rho_p = tuple(tuple(_as_poly(e, d) for e in row) for row in rho)
    c_p = tuple(tuple(tuple(_as_poly(e, d) for e in cell) for cell in row)
                for row in bracket)
    return AlgebroidData(d, r, rho_p, c_p)


def tangent_algebroid(d: int) -> AlgebroidData:
    """The canonical example: ρ = id, C = 0 on Q^d."""
    rho = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    zero = [[[0] * d for _ in range(d)] for _ in range(d)]
    return make_algebroid(d, d, rho, zero)


def prolongation_space(A: AlgebroidData, level: str) -> Prolongation:
    """The flat prolongation: 'L' is A.(W⊗W), 'L2' is A.(W⊗W⊗W)."""
    if level == "L":
        return Prolongation(A.shape, WW)
    if level == "L2":
        return Prolongation(A.shape, L2_ALGEBRA)
    raise ValueError("level must be 'L' or 'L2' (general algebras live in nerve)")


# -- hat/bar transport through a connection ------------------------------------


def hat_map(A: AlgebroidData, conn: bundle_mod.Connection | None = None) -> PolyMap:
    """L(A) -> A₃ in hat coordinates: (π₀, p∘π₁, κ∘π₁) fiberwise."""
    conn = conn or bundle_mod.trivial_connection(A.bundle)
    space = prolongation_space(A, "L")
    d, r = A.base_dim, A.rank
    pi1 = space.proj1                       # -> TA full coordinates
    kappa_fib = PolyMap(2 * (d + r), r, list(conn.kappa.components[d:]))
    x = space.base_vars()
    comps = x + list(space.proj0.components[d:])          # u
    comps += [c for c in pi1.components[d:d + r]]         # v = p∘π₁ fiber
    comps += list(compose_maps(kappa_fib, pi1).components)
    return PolyMap(space.dim, space.dim, comps)


def bar_map(A: AlgebroidData, conn: bundle_mod.Connection | None = None) -> PolyMap:
    """A₃ -> L(A), inverse of hat: ν̂(π₀,π₂) + ∇̂(π₀,π₁) in flat form."""
    conn = conn or bundle_mod.trivial_connection(A.bundle)
    d, r = A.base_dim, A.rank
    n = d + 3 * r
    x = [Polynomial.var(n, i + 1) for i in range(d)]
    u = [Polynomial.var(n, d + a + 1) for a in range(r)]
    v = [Polynomial.var(n, d + r + a + 1) for a in range(r)]
    w = [Polynomial.var(n, d + 2 * r + a + 1) for a in range(r)]
    # Correction: the κ-fiber of (x, v, ρ(x)u, 0).
    kappa_fib = PolyMap(2 * (d + r), r, list(conn.kappa.components[d:]))
    rho_u = A.shape.anchor_fiber(x, u)
    zero = [Polynomial.zero(n)] * r
    correction = compose_maps(kappa_fib, PolyMap(n, 2 * (d + r), x + v + rho_u + zero))
    comps = x + u + v + [wc - corr for wc, corr in zip(w, correction.components)]
    return PolyMap(n, n, comps)


def sigma_hat(A: AlgebroidData) -> PolyMap:
    """σ̂(x; u, v, w) = (x; v, u, w + C(x)(u, v)) on hat coordinates."""
    d, r = A.base_dim, A.rank
    n = d + 3 * r
    x = [Polynomial.var(n, i + 1) for i in range(d)]
    u = [Polynomial.var(n, d + a + 1) for a in range(r)]
    v = [Polynomial.var(n, d + r + a + 1) for a in range(r)]
    w = [Polynomial.var(n, d + 2 * r + a + 1) for a in range(r)]
    cw = A.bracket_fiber(x, u, v)
    return PolyMap(n, n, x + v + u + [a + b for a, b in zip(w, cw)])


def involution_from_bracket(A: AlgebroidData,
                            conn: bundle_mod.Connection | None = None) -> PolyMap:
    """The canonical involution on flat L(A): bar ∘ σ̂ ∘ hat."""
    return compose_maps(bar_map(A, conn),
                        compose_maps(sigma_hat(A), hat_map(A, conn)))


def bracket_from_involution(A: AlgebroidData, sigma: PolyMap,
                            conn: bundle_mod.Connection | None = None):
    """Recover the bracket tensor: ⟨-,-⟩ = κ̂∘σ∘∇̂ −_π κ̂∘∇̂.

    Requires σ to preserve the base coordinate (checked; ValueError with the
    witness otherwise).  Returns the C[α][β][γ] tensor.
    """
    d, r = A.base_dim, A.rank
    space = prolongation_space(A, "L")
    base_out = PolyMap(space.dim, d, list(sigma.components[:d]))
    if base_out != PolyMap.projection(space.dim, 0, d):
        raise ValueError(f"σ is not base-preserving: base image {base_out}")
    bar = bar_map(A, conn)
    hat = hat_map(A, conn)
    n = d + 2 * r
    x = [Polynomial.var(n, i + 1) for i in range(d)]
    u = [Polynomial.var(n, d + a + 1) for a in range(r)]
    v = [Polynomial.var(n, d + r + a + 1) for a in range(r)]
    zero = [Polynomial.zero(n)] * r
    nabla_hat = compose_maps(bar, PolyMap(n, d + 3 * r, x + u + v + zero))
    def kappa_hat_fiber(m: PolyMap) -> list[Polynomial]:
        return list(compose_maps(hat, m).components[d + 2 * r:])
    with_sigma = kappa_hat_fiber(compose_maps(sigma, nabla_hat))
    without = kappa_hat_fiber(nabla_hat)
    c_map = [a - b for a, b in zip(with_sigma, without)]
    # Extract coefficients: substitute unit fiber vectors.
    tensor = []
    for a in range(r):
        row = []
        for b in range(r):
            subst = [Polynomial.var(d, i + 1) for i in range(d)]
            subst += [Polynomial.const(d, 1 if t == a else 0) for t in range(r)]
            subst += [Polynomial.const(d, 1 if t == b else 0) for t in range(r)]
            row.append(tuple(comp.substitute(subst) for comp in c_map))
        tensor.append(tuple(row))
    return tuple(tensor)


# -- structure equations ---------------------------------------------------------


def check_structure_equations(A: AlgebroidData) -> CheckReport:
    """Alternating, Leibniz, and Bianchi, as exact polynomial identities."""
    report = CheckReport(f"structure equations for {A}")
    d, r = A.base_dim, A.rank
    C = A.bracket
    rho = A.rho

    ok, witness = True, None
    for a in range(r):
        for b in range(r):
            for g in range(r):
                diff = C[a][b][g] + C[b][a][g]
                if not diff.is_zero():
                    ok, witness = False, f"C[{a}][{b}][{g}] + C[{b}][{a}][{g}] = {diff}"
                    break
    report.add("alternating", ok, witness)

    ok, witness = True, None
    for i in range(d):
        for a in range(r):
            for b in range(r):
                lhs = Polynomial.zero(d)
                for j in range(d):
                    lhs = lhs + rho[j][a] * rho[i][b].partial(j + 1)
                rhs = Polynomial.zero(d)
                for g in range(r):
                    rhs = rhs + rho[i][g] * C[a][b][g]
                for j in range(d):
                    rhs = rhs + rho[j][b] * rho[i][a].partial(j + 1)
                diff = lhs - rhs
                if not diff.is_zero():
                    ok, witness = False, \
                        f"Leibniz fails at i={i}, α={a}, β={b}: difference {diff}"
                    break
    report.add("Leibniz", ok, witness)

    ok, witness = True, None
    for nu in range(r):
        for a in range(r):
            for b in range(r):
                for g in range(r):
                    total = Polynomial.zero(d)
                    for (p1, p2, p3) in ((a, b, g), (b, g, a), (g, a, b)):
                        for i in range(d):
                            total = total + rho[i][p1] * C[p2][p3][nu].partial(i + 1)
                        for mu in range(r):
                            total = total + C[p2][p3][mu] * C[p1][mu][nu]
                    if not total.is_zero():
                        ok, witness = False, \
                            f"Bianchi fails at ν={nu}, (α,β,γ)=({a},{b},{g}): {total}"
                        break
    report.add("Bianchi", ok, witness)
    return report


# -- involution axioms -----------------------------------------------------------


def lambda_hat(A: AlgebroidData) -> PolyMap:
    """The generalized lift λ̂ = (ξ∘π, λ): A -> L(A), (x, u) -> (x; 0, 0, u)."""
    return whiskered_generator(A.shape, "ell", NAT, NAT)


def lift_pullback_bundle(A: AlgebroidData) -> PolyMap:
    """(0 × c∘T.λ): L(A) -> T.L(A), the lift over π₀."""
    d, r = A.base_dim, A.rank
    n = d + 3 * r
    zero = [Polynomial.zero(n)] * r
    x = [Polynomial.var(n, i + 1) for i in range(d)]
    u = [Polynomial.var(n, d + a + 1) for a in range(r)]
    v = [Polynomial.var(n, d + r + a + 1) for a in range(r)]
    w = [Polynomial.var(n, d + 2 * r + a + 1) for a in range(r)]
    zd = [Polynomial.zero(n)] * d
    return PolyMap(n, 2 * n, x + u + zero + zero + zd + zero + v + w)


def lift_prolongation_bundle(A: AlgebroidData) -> PolyMap:
    """(λ × ℓ): L(A) -> T.L(A), the lift over p∘π₁."""
    d, r = A.base_dim, A.rank
    n = d + 3 * r
    zero = [Polynomial.zero(n)] * r
    x = [Polynomial.var(n, i + 1) for i in range(d)]
    u = [Polynomial.var(n, d + a + 1) for a in range(r)]
    v = [Polynomial.var(n, d + r + a + 1) for a in range(r)]
    w = [Polynomial.var(n, d + 2 * r + a + 1) for a in range(r)]
    zd = [Polynomial.zero(n)] * d
    return PolyMap(n, 2 * n, x + zero + v + zero + zd + u + zero + w)


def check_involution_axioms(A: AlgebroidData, sigma: PolyMap) -> CheckReport:
    """The five involution-algebroid axioms on flat L(A)/L²(A) coordinates."""
    report = CheckReport(f"involution axioms for {A}")
    space = prolongation_space(A, "L")
    n = space.dim

    report.check("(i) involution σ∘σ = id",
                 compose_maps(sigma, sigma) - PolyMap.identity(n))

    t_sigma = weil_prolong(W, sigma)
    report.check("(ii) double linearity T.σ∘(0×c∘T.λ) = (λ×ℓ)∘σ",
                 compose_maps(t_sigma, lift_pullback_bundle(A))
                 - compose_maps(lift_prolongation_bundle(A), sigma))

    lam_hat = lambda_hat(A)
    report.check("(iii) symmetry of lift σ∘λ̂ = λ̂",
                 compose_maps(sigma, lam_hat) - lam_hat)

    t_rho = weil_prolong(W, A.anchor_map())
    pi1 = space.proj1
    flip_m = structure_nat(weil.generator("flip"), A.base_dim)
    report.check("(iv) target T.ϱ∘π₁∘σ = c∘T.ϱ∘π₁",
                 compose_maps(t_rho, compose_maps(pi1, sigma))
                 - compose_maps(flip_m, compose_maps(t_rho, pi1)))

    sigma2 = whiskered_generator(A.shape, "flip", NAT, W, sigma=sigma)   # σ×c
    sigma1 = whiskered_generator(A.shape, "flip", W, NAT, sigma=sigma)   # 1×T.σ
    lhs = compose_maps(sigma2, compose_maps(sigma1, sigma2))
    rhs = compose_maps(sigma1, compose_maps(sigma2, sigma1))
    report.check("(v) Yang-Baxter on L²(A)", lhs - rhs)
    return report


def check_lambda_hat_coassociativity(A: AlgebroidData) -> CheckReport:
    """(λ̂×ℓ)∘λ̂ = (id×T.λ̂)∘λ̂ for the anchored bundle underlying A."""
    report = CheckReport("coassociativity of the generalized lift")
    lam_hat = lambda_hat(A)
    left = whiskered_generator(A.shape, "ell", NAT, W)    # λ̂×ℓ : L -> L²
    right = whiskered_generator(A.shape, "ell", W, NAT)   # id×T.λ̂ : L -> L²
    report.check("(λ̂×ℓ)∘λ̂ = (id×T.λ̂)∘λ̂",
                 compose_maps(left, lam_hat) - compose_maps(right, lam_hat))
    return report


# -- derived brackets ------------------------------------------------------------


def derived_brackets(A: AlgebroidData,
                     conn: bundle_mod.Connection | None = None,
                     conn_base: bundle_mod.Connection | None = None
                     ) -> tuple[PolyMap, PolyMap]:
    """The curly and ternary brackets of the connection calculus.

    {v,x}:   flat (x; v, u) -> TM fiber,   κ'∘T.ϱ∘∇(v, x)
    {v,x,y}: flat (x; v, u1, u2) -> fiber, κ∘T(⟨-,-⟩)∘∇^{A₂}(v, x, y)
    """
    conn = conn or bundle_mod.trivial_connection(A.bundle)
    conn_base = conn_base or bundle_mod.trivial_connection(
        bundle_mod.TrivialBundle(A.base_dim, A.base_dim))
    d, r = A.base_dim, A.rank

    n = d + d + r
    x = [Polynomial.var(n, i + 1) for i in range(d)]
    v = [Polynomial.var(n, d + i + 1) for i in range(d)]
    u = [Polynomial.var(n, 2 * d + a + 1) for a in range(r)]
    nabla_in = PolyMap(n, d + r + d, x + u + v)
    t_rho = weil_prolong(W, A.anchor_map())
    full = compose_maps(t_rho, compose_maps(conn.nabla, nabla_in))
    kappa_base_fib = PolyMap(4 * d, d, list(conn_base.kappa.components[d:]))
    curly = compose_maps(kappa_base_fib, full)

    m = d + d + 2 * r
    x = [Polynomial.var(m, i + 1) for i in range(d)]
    v = [Polynomial.var(m, d + i + 1) for i in range(d)]
    u1 = [Polynomial.var(m, 2 * d + a + 1) for a in range(r)]
    u2 = [Polynomial.var(m, 2 * d + r + a + 1) for a in range(r)]
    lift1 = compose_maps(conn.nabla, PolyMap(m, d + r + d, x + u1 + v))
    lift2 = compose_maps(conn.nabla, PolyMap(m, d + r + d, x + u2 + v))
    if lift1.components[:d] != lift2.components[:d] or \
            lift1.components[d + r:d + r + d] != lift2.components[d + r:d + r + d]:
        raise ValueError("∇^{A₂} is ill-formed: the two lifts disagree on TM")
    # T(A₂) flat coordinates ((x,u1,u2);(xdot,u1dot,u2dot)).
    t_a2 = PolyMap(m, 2 * (d + 2 * r),
                   list(lift1.components[:d])
                   + list(lift1.components[d:d + r])
                   + list(lift2.components[d:d + r])
                   + list(lift1.components[d + r:d + r + d])
                   + list(lift1.components[d + r + d:])
                   + list(lift2.components[d + r + d:]))
    t_bracket = weil_prolong(W, A.bracket_map())
    kappa_fib = PolyMap(2 * (d + r), r, list(conn.kappa.components[d:]))
    ternary = compose_maps(kappa_fib, compose_maps(t_bracket, t_a2))
    return curly, ternary


# -- sections and the section bracket --------------------------------------------


def _section_to_l(A: AlgebroidData, X: PolyMap, Y: PolyMap) -> PolyMap:
    """(id, T.Y∘ϱ)∘X : M -> L(A) in flat coordinates."""
    d, r = A.base_dim, A.rank
    x = [Polynomial.var(d, i + 1) for i in range(d)]
    xf = list(X.components)
    rho_x = A.shape.anchor_fiber(x, xf)
    dy = []
    for comp in Y.components:
        acc = Polynomial.zero(d)
        for j in range(d):
            acc = acc + comp.partial(j + 1) * rho_x[j]
        dy.append(acc)
    return PolyMap(d, d + 3 * r, x + xf + list(Y.components) + dy)


def section_bracket(A: AlgebroidData, X: PolyMap, Y: PolyMap) -> PolyMap:
    """[X, Y] via the involution: the universality equation solved exactly.

    X, Y are fiber parts of sections (PolyMaps Q^d -> Q^r).  The bracket is
    the unique section with λ̂∘[X,Y] = σ∘(id,T.Y∘ϱ)∘X −_{p∘π₁} (id,T.X∘ϱ)∘Y
    (up to the ξ'-translate); exactness of the subtraction is asserted.
    """
    d, r = A.base_dim, A.rank
    if X.src_dim != d or X.tgt_dim != r or Y.src_dim != d or Y.tgt_dim != r:
        raise ValueError("sections are fiber maps Q^d -> Q^r")
    sigma = involution_from_bracket(A)
    lead = compose_maps(sigma, _section_to_l(A, X, Y))
    trail = _section_to_l(A, Y, X)
    # Both lie over the same p∘π₁ leg (x, v); subtract the (u, w) fibers.
    if lead.components[d + r:d + 2 * r] != trail.components[d + r:d + 2 * r]:
        raise ValueError("universality equation is inconsistent in the v slot")
    u_diff = [a - b for a, b in
              zip(lead.components[d:d + r], trail.components[d:d + r])]
    if any(not comp.is_zero() for comp in u_diff):
        raise ValueError("universality equation is inconsistent in the u slot")
    return PolyMap(d, r, [a - b for a, b in
                          zip(lead.components[d + 2 * r:], trail.components[d + 2 * r:])])


def section_bracket_coordinates(A: AlgebroidData, X: PolyMap, Y: PolyMap) -> PolyMap:
    """The coordinate formula ρX·∂Y − ρY·∂X + C(X,Y), used as an oracle."""
    d, r = A.base_dim, A.rank
    x = [Polynomial.var(d, i + 1) for i in range(d)]
    rho_x = A.shape.anchor_fiber(x, list(X.components))
    rho_y = A.shape.anchor_fiber(x, list(Y.components))
    comps = []
    c_term = A.bracket_fiber(x, list(X.components), list(Y.components))
    for g in range(r):
        acc = c_term[g]
        for j in range(d):
            acc = acc + Y.components[g].partial(j + 1) * rho_x[j]
            acc = acc - X.components[g].partial(j + 1) * rho_y[j]
        comps.append(acc)
    return PolyMap(d, r, comps)


def scalar_action_on_section(f: Polynomial, X: PolyMap) -> PolyMap:
    return PolyMap(X.src_dim, X.tgt_dim, [f * c for c in X.components])


def anchor_derivation(A: AlgebroidData, X: PolyMap, f: Polynomial) -> Polynomial:
    """[X, f] = p̂∘T.f∘ϱ∘X = directional derivative of f along ρ·X."""
    d = A.base_dim
    x = [Polynomial.var(d, i + 1) for i in range(d)]
    rho_x = A.shape.anchor_fiber(x, list(X.components))
    acc = Polynomial.zero(d)
    for j in range(d):
        acc = acc + f.partial(j + 1) * rho_x[j]
    return acc


def check_section_laws(A: AlgebroidData, sections: list[PolyMap],
                       scalars: list[Polynomial]) -> CheckReport:
    """Antisymmetry, Jacobi, and the Leibniz law on the given sections."""
    report = CheckReport(f"section bracket laws for {A}")
    for i, X in enumerate(sections):
        for j, Y in enumerate(sections):
            anti = section_bracket(A, X, Y) + section_bracket(A, Y, X)
            report.check(f"antisymmetry [{i},{j}]", anti,
                         f"X={X}, Y={Y}")
    for i, X in enumerate(sections):
        for j, Y in enumerate(sections):
            for k, Z in enumerate(sections):
                jac = section_bracket(A, X, section_bracket(A, Y, Z)) \
                    - section_bracket(A, section_bracket(A, X, Y), Z) \
                    - section_bracket(A, Y, section_bracket(A, X, Z))
                report.check(f"Jacobi [{i},[{j},{k}]]", jac)
    for i, X in enumerate(sections):
        for j, Y in enumerate(sections):
            for s, f in enumerate(scalars):
                lhs = section_bracket(A, X, scalar_action_on_section(f, Y))
                rhs = scalar_action_on_section(f, section_bracket(A, X, Y)) \
                    + scalar_action_on_section(anchor_derivation(A, X, f), Y)
                report.check(f"Leibniz [{i}, f{s}·{j}]", lhs - rhs)
    return report


# -- morphisms -------------------------------------------------------------------


def check_morphism(A: AlgebroidData, B: AlgebroidData, fiber, base_map: PolyMap,
                   conn: bundle_mod.Connection | None = None,
                   conn_b: bundle_mod.Connection | None = None) -> CheckReport:
    """Involution-algebroid morphism criterion through connections.

    `fiber` is the r_B × r_A matrix of the fiberwise-linear map (entries over
    the source base), `base_map` the map Q^{d_A} -> Q^{d_B}.  Checks anchor
    preservation first, then ∇[f](x,y) + ⟨fx, fy⟩ = ∇[f](y,x) + f⟨x,y⟩ with
    ∇[f] = κ^B∘T.f∘∇^A.
    """
    report = CheckReport("algebroid morphism condition")
    dA, rA = A.base_dim, A.rank
    dB, rB = B.base_dim, B.rank
    fiber_p = [[_as_poly(e, dA) for e in row] for row in fiber]
    if len(fiber_p) != rB or any(len(row) != rA for row in fiber_p):
        raise ValueError(f"fiber matrix must be {rB}x{rA}")
    if base_map.src_dim != dA or base_map.tgt_dim != dB:
        raise ValueError(f"base map must be Q^{dA} -> Q^{dB}")
    conn = conn or bundle_mod.trivial_connection(A.bundle)
    conn_b = conn_b or bundle_mod.trivial_connection(B.bundle)

    n = dA + rA
    x = [Polynomial.var(n, i + 1) for i in range(dA)]
    u = [Polynomial.var(n, dA + a + 1) for a in range(rA)]

    def f_fiber(xs, us):
        amb = xs[0].n_vars if xs else us[0].n_vars
        out = []
        for row in fiber_p:
            acc = Polynomial.zero(amb)
            for entry, ua in zip(row, us):
                acc = acc + entry.substitute(xs, out_vars=amb) * ua
            out.append(acc)
        return out

    full_f = PolyMap(n, dB + rB,
                     [c.substitute(x, out_vars=n) for c in base_map.components]
                     + f_fiber(x, u))

    # Anchor preservation: T.φ∘ϱ^A = ϱ^B∘f.
    t_phi = weil_prolong(W, base_map)
    lhs = compose_maps(t_phi, A.anchor_map())
    rhs = compose_maps(B.anchor_map(), full_f)
    report.check("anchor preservation", lhs - rhs)

    # Bracket condition in the two-section space (x; u, v).
    m = dA + 2 * rA
    xs = [Polynomial.var(m, i + 1) for i in range(dA)]
    us = [Polynomial.var(m, dA + a + 1) for a in range(rA)]
    vs = [Polynomial.var(m, dA + rA + a + 1) for a in range(rA)]

    t_f = weil_prolong(W, full_f)
    kappa_b_fib = PolyMap(2 * (dB + rB), rB, list(conn_b.kappa.components[dB:]))

    def nabla_f(y_fib, z_fib):
        """∇[f](ϱ·y, z) = κ^B-fiber of T.f(∇^A(z, ϱ y))."""
        rho_y = A.shape.anchor_fiber(xs, y_fib)
        lifted = compose_maps(conn.nabla, PolyMap(m, dA + rA + dA, xs + z_fib + rho_y))
        return compose_maps(kappa_b_fib, compose_maps(t_f, lifted))

    fx = f_fiber(xs, us)
    fy = f_fiber(xs, vs)
    phi_xs = [c.substitute(xs, out_vars=m) for c in base_map.components]
    bracket_b = B.bracket_fiber(phi_xs, fx, fy)
    bracket_a = A.bracket_fiber(xs, us, vs)
    f_bracket_a = f_fiber(xs, bracket_a)
    lhs_comps = [p + q for p, q in zip(nabla_f(us, vs).components, bracket_b)]
    rhs_comps = [p + q for p, q in zip(nabla_f(vs, us).components, f_bracket_a)]
    report.check("bracket condition ∇[f](x,y) + ⟨fx,fy⟩ = ∇[f](y,x) + f⟨x,y⟩",
                 PolyMap(m, rB, [a - b for a, b in zip(lhs_comps, rhs_comps)]))
    return report
