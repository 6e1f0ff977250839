"""Lifts, trivial differential bundles, Euler vector fields, connections.

Everything lives over the polynomial model: a trivial bundle with base Q^d
and fiber Q^k has total space E = Q^(d+k) with coordinates (m, e), tangent
space TE = Q^(2(d+k)) with coordinates (m, e, mdot, edot), projection q
(drop the fiber), zero section ξ (pad with zeros), and canonical lift
λ(m, e) = (m, 0, 0, e).

Universality statements (non-singularity fork, the μ and ν equalizers) are
certified constructively by exact linear algebra: an explicit retraction is
built and both round trips are verified symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg, weil
from .poly import PolyMap, Polynomial, compose_maps
from .report import CheckReport
from .tangent import certify_linear_pullback, structure_nat, weil_prolong


def _var(n: int, i: int) -> Polynomial:
    return Polynomial.var(n, i + 1)


def tangent_of(f: PolyMap) -> PolyMap:
    """T f on flat coordinates (point block, then tangent block)."""
    return weil_prolong(weil.W, f)


def ell_at(n: int) -> PolyMap:
    return structure_nat(weil.generator("ell"), n)


def flip_at(n: int) -> PolyMap:
    return structure_nat(weil.generator("flip"), n)


def zero_at(n: int) -> PolyMap:
    return structure_nat(weil.generator("zero"), n)


def proj_at(n: int) -> PolyMap:
    return structure_nat(weil.generator("p"), n)


@dataclass(frozen=True)
class Lift:
    """A candidate coalgebra map λ: E -> TE (coassociativity is a check)."""

    total_dim: int
    lam: PolyMap

    def __post_init__(self):
        if self.lam.src_dim != self.total_dim or self.lam.tgt_dim != 2 * self.total_dim:
            raise ValueError("lift must map E -> TE on flat coordinates")

    def idempotent(self) -> PolyMap:
        """e = p∘λ : E -> E."""
        return compose_maps(proj_at(self.total_dim), self.lam)


@dataclass(frozen=True)
class TrivialBundle:
    base_dim: int
    rank: int

    @property
    def total_dim(self) -> int:
        return self.base_dim + self.rank

    @property
    def q(self) -> PolyMap:
        return PolyMap.projection(self.total_dim, 0, self.base_dim)

    @property
    def xi(self) -> PolyMap:
        n = self.base_dim
        comps = [_var(n, i) for i in range(n)]
        comps += [Polynomial.zero(n)] * self.rank
        return PolyMap(n, self.total_dim, comps)

    @property
    def lift(self) -> Lift:
        """Canonical lift (m, e) -> (m, 0, 0, e)."""
        t = self.total_dim
        comps = [_var(t, i) for i in range(self.base_dim)]
        comps += [Polynomial.zero(t)] * (self.rank + self.base_dim)
        comps += [_var(t, self.base_dim + j) for j in range(self.rank)]
        return Lift(t, PolyMap(t, 2 * t, comps))

    @property
    def plus_q(self) -> PolyMap:
        """Fiberwise addition E2 -> E on flat (m, e, e')."""
        d, k = self.base_dim, self.rank
        n = d + 2 * k
        comps = [_var(n, i) for i in range(d)]
        comps += [_var(n, d + j) + _var(n, d + k + j) for j in range(k)]
        return PolyMap(n, d + k, comps)

    def fiber_pair(self, x: PolyMap, y: PolyMap) -> PolyMap:
        """Tuple two maps into E over an identical base into E2."""
        if x.components[:self.base_dim] != y.components[:self.base_dim]:
            raise ValueError("fiber_pair needs equal base components")
        comps = list(x.components) + list(y.components[self.base_dim:])
        return PolyMap(x.src_dim, self.base_dim + 2 * self.rank, comps)


def add_over(block_split: int, u: PolyMap, w: PolyMap) -> PolyMap:
    """Add two maps into a bundle whose first `block_split` components are the
    shared projection; the remaining components add.  The shared part must
    agree exactly."""
    if u.components[:block_split] != w.components[:block_split]:
        raise ValueError("summands live in different fibers")
    comps = list(u.components[:block_split])
    comps += [a + b for a, b in zip(u.components[block_split:], w.components[block_split:])]
    return PolyMap(u.src_dim, u.tgt_dim, comps)


def add_over_p(total: int, u: PolyMap, w: PolyMap) -> PolyMap:
    """u +_p w in TE: shared base point (first total comps), added fibers."""
    return add_over(total, u, w)


def add_over_tq(bundle: TrivialBundle, u: PolyMap, w: PolyMap) -> PolyMap:
    """u +_{T.q} w in TE: shared (m, mdot), added (e, edot)."""
    d, k, t = bundle.base_dim, bundle.rank, bundle.total_dim
    tq = compose_maps(tangent_of(bundle.q), u)
    tq2 = compose_maps(tangent_of(bundle.q), w)
    if tq != tq2:
        raise ValueError("summands live in different T.q fibers")
    comps = []
    for i in range(2 * t):
        in_fiber = (d <= i < t) or (t + d <= i)
        comps.append(u.components[i] + w.components[i] if in_fiber else u.components[i])
    return PolyMap(u.src_dim, 2 * t, comps)


# -- scalar actions and the Euler vector field --------------------------------


@dataclass(frozen=True)
class ScalarAction:
    """A polynomial action a(t, e) of the multiplicative monoid on Q^total."""

    total_dim: int
    action: PolyMap

    def __post_init__(self):
        if self.action.src_dim != 1 + self.total_dim or \
                self.action.tgt_dim != self.total_dim:
            raise ValueError("action must map (t, e) -> e'")


def scaling_action(bundle: TrivialBundle) -> ScalarAction:
    """The standard action: scale the fiber, fix the base."""
    d, k = bundle.base_dim, bundle.rank
    n = 1 + d + k
    comps = [_var(n, 1 + i) for i in range(d)]
    comps += [_var(n, 0) * _var(n, 1 + d + j) for j in range(k)]
    return ScalarAction(d + k, PolyMap(n, d + k, comps))


def check_scalar_action(a: ScalarAction) -> CheckReport:
    """a(1, e) = e and a(s·t, e) = a(s, a(t, e)), exactly."""
    report = CheckReport("multiplicative monoid action laws")
    n = a.total_dim
    at_one = PolyMap.pairing([PolyMap.constant(n, [1]), PolyMap.identity(n)])
    report.check("unit law a(1,e) = e",
                 compose_maps(a.action, at_one) - PolyMap.identity(n))
    # Both sides as maps of (s, t, e).
    big = 2 + n
    s = PolyMap.projection(big, 0, 1)
    t = PolyMap.projection(big, 1, 1)
    e = PolyMap.projection(big, 2, n)
    st = PolyMap(big, 1, [_var(big, 0) * _var(big, 1)])
    lhs = compose_maps(a.action, PolyMap.pairing([st, e]))
    inner = compose_maps(a.action, PolyMap.pairing([t, e]))
    rhs = compose_maps(a.action, PolyMap.pairing([s, inner]))
    report.check("multiplicativity a(st,e) = a(s,a(t,e))", lhs - rhs)
    return report


class ActionLawError(ValueError):
    def __init__(self, report: CheckReport):
        self.report = report
        witnesses = "; ".join(
            f"{v.name} ({v.witness})" if v.witness else v.name
            for v in report.verdicts if not v.passed)
        super().__init__(f"scalar action laws fail: {witnesses}")


def euler_vector_field(a: ScalarAction) -> Lift:
    """λ(e) = (a(0,e), ∂_t a(t,e)|_{t=0}) — the lift extracted from the action.

    Rejects actions that fail the monoid laws, with the witness identity.
    """
    laws = check_scalar_action(a)
    if not laws.passed:
        raise ActionLawError(laws)
    n = a.total_dim
    at_zero = PolyMap.pairing([PolyMap.constant(n, [0]), PolyMap.identity(n)])
    base = compose_maps(a.action, at_zero)
    # ∂_t a(t, e) evaluated at t = 0, as a polynomial in e.
    fiber_comps = []
    for comp in a.action.components:
        dt = comp.partial(1)
        zero_subst = [Polynomial.zero(n)] + [Polynomial.var(n, i + 1) for i in range(n)]
        fiber_comps.append(dt.substitute(zero_subst))
    fiber = PolyMap(n, n, fiber_comps)
    return Lift(n, PolyMap.pairing([base, fiber]))


# -- lift and universality checks ----------------------------------------------


def check_lift(lift: Lift) -> CheckReport:
    """Coassociativity T.λ∘λ = ℓ∘λ and the induced idempotent's laws."""
    report = CheckReport("lift axioms")
    lam = lift.lam
    n = lift.total_dim
    coassoc = compose_maps(tangent_of(lam), lam) - compose_maps(ell_at(n), lam)
    report.check("coassociativity T.λ∘λ = ℓ∘λ", coassoc, f"λ={lam}")
    e = lift.idempotent()
    report.check("e = p∘λ is idempotent", compose_maps(e, e) - e, f"e={e}")
    report.check("λ∘e = T.e∘λ (e is a lift morphism)",
                 compose_maps(lam, e) - compose_maps(tangent_of(e), lam))
    return report


def _certify_fork(comparison: PolyMap, left: PolyMap, right: PolyMap,
                  report: CheckReport, name: str, depths: int = 1) -> None:
    """Certify that `comparison` equalizes (left, right) universally, and
    stays an equalizer after applying T up to `depths` times."""
    for depth in range(depths + 1):
        comp, l, r = comparison, left, right
        for _ in range(depth):
            comp, l, r = tangent_of(comp), tangent_of(l), tangent_of(r)
        label = name if depth == 0 else f"T^{depth} {name}"
        certify_linear_pullback(comp, l - r, report, label)


def check_universality(bundle: TrivialBundle, lift: Lift | None = None,
                       depths: int = 2) -> CheckReport:
    """Non-singularity fork plus the μ and ν equalizers, constructively.

    Each fork is certified as stated and again under T and T² (`depths`);
    linearity of all the data makes higher powers follow, which is recorded
    as assumed rather than tested.  Passing `lift` overrides the canonical
    lift (used to exhibit degenerate lifts failing non-singularity while
    remaining coassociative).
    """
    report = CheckReport("differential bundle universality")
    lam = (lift or bundle.lift).lam
    t = bundle.total_dim
    d, k = bundle.base_dim, bundle.rank

    # Non-singularity: E --λ--> TE equalizes 0∘p and T.e, universally.
    zero_p = compose_maps(zero_at(t), proj_at(t))
    te = tangent_of(compose_maps(proj_at(t), lam))
    _certify_fork(lam, zero_p, te, report, "non-singularity fork", depths)

    # μ(x, y) = 0∘x +_{T.q} λ∘y on E2, equalizing (T.q, 0∘q∘p).
    e2 = d + 2 * k
    x_part = PolyMap.pairing([PolyMap.projection(e2, 0, d),
                              PolyMap.projection(e2, d, k)])
    y_part = PolyMap.pairing([PolyMap.projection(e2, 0, d),
                              PolyMap.projection(e2, d + k, k)])
    try:
        mu = add_over_tq(bundle, compose_maps(zero_at(t), x_part),
                         compose_maps(lam, y_part))
    except ValueError as exc:
        report.add("μ is well-formed", False, str(exc))
        mu = None
    if mu is not None:
        tq = tangent_of(bundle.q)
        zqp = compose_maps(zero_at(d), compose_maps(bundle.q, proj_at(t)))
        _certify_fork(mu, tq, zqp, report, "μ equalizer", depths)

    # ν(v, y) = T.ξ∘v +_p λ∘y on TM x_M E, equalizing (p, ξ∘q∘p).
    dom = 2 * d + k
    v_part = PolyMap.projection(dom, 0, 2 * d)
    y2 = PolyMap.pairing([PolyMap.projection(dom, 0, d),
                          PolyMap.projection(dom, 2 * d, k)])
    try:
        nu = add_over_p(t, compose_maps(tangent_of(bundle.xi), v_part),
                        compose_maps(lam, y2))
    except ValueError as exc:
        report.add("ν is well-formed", False, str(exc))
        nu = None
    if nu is not None:
        p_e = proj_at(t)
        xi_q_p = compose_maps(bundle.xi, compose_maps(bundle.q, p_e))
        _certify_fork(nu, p_e, xi_q_p, report, "ν equalizer", depths)
    return report


def recovered_addition(bundle: TrivialBundle, lift: Lift | None = None) -> PolyMap:
    """The addition forced by non-singularity: solve λ∘(x+y) = λ∘x +_p λ∘y."""
    lam = (lift or bundle.lift).lam
    d, k, t = bundle.base_dim, bundle.rank, bundle.total_dim
    matrix, offset = lam.linear_part()
    if any(offset):
        raise ValueError("recovered addition needs a linear lift")
    left = linalg.left_inverse(matrix)
    if left is None:
        raise ValueError("lift is singular; no addition is recoverable")
    e2 = d + 2 * k
    x_part = PolyMap.pairing([PolyMap.projection(e2, 0, d),
                              PolyMap.projection(e2, d, k)])
    y_part = PolyMap.pairing([PolyMap.projection(e2, 0, d),
                              PolyMap.projection(e2, d + k, k)])
    total = add_over_p(t, compose_maps(lam, x_part), compose_maps(lam, y_part))
    rows = [
        sum((Polynomial.var(2 * t, j + 1) * c for j, c in enumerate(row) if c),
            Polynomial.zero(2 * t))
        for row in left
    ]
    retraction = PolyMap(2 * t, t, rows)
    return compose_maps(retraction, total)


# -- connections ----------------------------------------------------------------


@dataclass(frozen=True)
class Connection:
    bundle: TrivialBundle
    kappa: PolyMap   # TE -> E
    nabla: PolyMap   # E x_M TM -> TE, domain flat (m, e, mdot)

    def __post_init__(self):
        t = self.bundle.total_dim
        d = self.bundle.base_dim
        if (self.kappa.src_dim, self.kappa.tgt_dim) != (2 * t, t):
            raise ValueError("κ must map TE -> E")
        if (self.nabla.src_dim, self.nabla.tgt_dim) != (t + d, 2 * t):
            raise ValueError("∇ must map E x_M TM -> TE")


def trivial_connection(bundle: TrivialBundle) -> Connection:
    d, k, t = bundle.base_dim, bundle.rank, bundle.total_dim
    # κ(m, e, mdot, edot) = (m, edot)
    comps = [_var(2 * t, i) for i in range(d)]
    comps += [_var(2 * t, t + d + j) for j in range(k)]
    kappa = PolyMap(2 * t, t, comps)
    # ∇((m,e), (m,mdot)) = (m, e, mdot, 0)
    n = t + d
    comps = [_var(n, i) for i in range(t)]
    comps += [_var(n, t + i) for i in range(d)]
    comps += [Polynomial.zero(n)] * k
    nabla = PolyMap(n, 2 * t, comps)
    return Connection(bundle, kappa, nabla)


def make_connection(bundle: TrivialBundle, kappa: PolyMap, nabla: PolyMap) -> Connection:
    return Connection(bundle, kappa, nabla)


def _horizontal_lift_maps(bundle: TrivialBundle) -> tuple[PolyMap, PolyMap]:
    """The two lifts on E x_M TM used in the ∇ linearity axioms.

    lift1 = (λ ×_M 0.TM):  (m,e,mdot) -> ((m,0,mdot); (0,e,0))
    lift2 = (0.E ×_M ℓ.M): (m,e,mdot) -> ((m,e,0);  (0,0,mdot))
    both landing in T(E x_M TM) with flat coordinates ((m,e,mdot);(·,·,·)).
    """
    d, k = bundle.base_dim, bundle.rank
    n = d + k + d
    zero = Polynomial.zero(n)
    m = [_var(n, i) for i in range(d)]
    e = [_var(n, d + j) for j in range(k)]
    mdot = [_var(n, d + k + i) for i in range(d)]
    lift1 = PolyMap(n, 2 * n, m + [zero] * k + mdot + [zero] * d + e + [zero] * d)
    lift2 = PolyMap(n, 2 * n, m + e + [zero] * d + [zero] * (d + k) + mdot)
    return lift1, lift2


def check_connection(conn: Connection) -> CheckReport:
    """All the named connection laws, as exact identities."""
    report = CheckReport("connection laws")
    b = conn.bundle
    d, k, t = b.base_dim, b.rank, b.total_dim
    lam = b.lift.lam
    kappa, nabla = conn.kappa, conn.nabla

    report.check("vertical retract κ∘λ = id",
                 compose_maps(kappa, lam) - PolyMap.identity(t))
    p_e = proj_at(t)
    tq = tangent_of(b.q)
    section = PolyMap.pairing([p_e, tq])
    # (p, T.q)∘∇ lands back on (m, e, m, mdot); collapse the duplicate base.
    dom = t + d
    expected = PolyMap.pairing([
        PolyMap.projection(dom, 0, t),
        PolyMap.projection(dom, 0, d),
        PolyMap.projection(dom, t, d),
    ])
    report.check("horizontal section (p,T.q)∘∇ = id",
                 compose_maps(section, nabla) - expected)

    # κ is linear for both differential bundle structures on TE.
    lam_k = compose_maps(lam, kappa)
    report.check("κ linearity over ℓ: λ∘κ = T.κ∘ℓ",
                 lam_k - compose_maps(tangent_of(kappa), ell_at(t)))
    report.check("κ linearity over c∘T.λ: λ∘κ = T.κ∘c∘T.λ",
                 lam_k - compose_maps(tangent_of(kappa),
                                      compose_maps(flip_at(t), tangent_of(lam))))

    # ∇ is linear for both lifts on E x_M TM.
    lift1, lift2 = _horizontal_lift_maps(b)
    report.check("∇ linearity over (λ×0): c∘T.λ∘∇ = T.∇∘(λ×0)",
                 compose_maps(flip_at(t), compose_maps(tangent_of(lam), nabla))
                 - compose_maps(tangent_of(nabla), lift1))
    report.check("∇ linearity over (0×ℓ): ℓ∘∇ = T.∇∘(0×ℓ)",
                 compose_maps(ell_at(t), nabla)
                 - compose_maps(tangent_of(nabla), lift2))

    # Full-connection compatibilities.
    report.check("compatibility κ∘∇ = ξ∘q∘π0",
                 compose_maps(kappa, nabla)
                 - compose_maps(b.xi, PolyMap.projection(t + d, 0, d)))
    # (p, T.q) composed into ∇'s domain (m, e, mdot) with the base collapsed.
    into_dom = PolyMap.pairing([PolyMap.projection(2 * t, 0, t),
                                PolyMap.projection(2 * t, t, d)])
    horizontal = compose_maps(nabla, into_dom)
    mu_of = add_over_tq(b, compose_maps(zero_at(t), p_e),
                        compose_maps(lam, kappa))
    try:
        decomposition = add_over_p(t, horizontal, mu_of)
        report.check("decomposition ∇(p,T.q) +_p μ(p,κ) = id",
                     decomposition - PolyMap.identity(2 * t))
    except ValueError as exc:
        report.add("decomposition ∇(p,T.q) +_p μ(p,κ) = id", False, str(exc))

    report.check("flatness κ∘T.κ∘c = κ∘T.κ",
                 compose_maps(kappa, compose_maps(tangent_of(kappa), flip_at(t)))
                 - compose_maps(kappa, tangent_of(kappa)))
    return report


def covariant_derivative(conn: Connection, section_fiber: PolyMap,
                         field_fiber: PolyMap) -> PolyMap:
    """∇_X A = κ∘T.A∘X for a section A and vector field X (fiber parts)."""
    b = conn.bundle
    d = b.base_dim
    if section_fiber.src_dim != d or section_fiber.tgt_dim != b.rank:
        raise ValueError("section must map M -> fiber")
    if field_fiber.src_dim != d or field_fiber.tgt_dim != d:
        raise ValueError("vector field must map M -> TM fiber")
    section = PolyMap.pairing([PolyMap.identity(d), section_fiber])
    field = PolyMap.pairing([PolyMap.identity(d), field_fiber])
    full = compose_maps(conn.kappa, compose_maps(tangent_of(section), field))
    return PolyMap(d, b.rank, list(full.components[d:]))
