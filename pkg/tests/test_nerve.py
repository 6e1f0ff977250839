"""The Weil nerve: objects, generator maps, functoriality, L'."""

import itertools
import random

import pytest

from tancat import algebroid as AL
from tancat import nerve as NV
from tancat import tangent, weil, wterm
from tancat.flatspace import Prolongation, whiskered_generator
from tancat.poly import PolyMap, Polynomial, compose_maps
from tancat.weil import NAT, W, WW, WeilAlgebra


def so3():
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for p in itertools.permutations(range(3)):
        sign = 1
        q = list(p)
        for i in range(3):
            for j in range(i + 1, 3):
                if q[i] > q[j]:
                    sign = -sign
        eps[p[0]][p[1]][p[2]] = sign
    return AL.make_algebroid(0, 3, [], eps)


def action():
    return AL.make_algebroid(1, 1, [["x1"]], [[["0"]]])


# -- objects -----------------------------------------------------------------------


def test_nerve_objects():
    A = action()
    assert NV.nerve_object(A, NAT).dim == 1
    w2 = WeilAlgebra((2,))
    space = NV.nerve_object(A, w2)
    assert space.dim == 3                      # A ×_M A: (x, u1, u2)
    assert NV.nerve_object(A, WW).dim == 4     # L(A)
    assert NV.nerve_object(A, WeilAlgebra((1, 1, 1))).dim == 8
    # dimension formula d + (dim V - 1) r in general
    B = so3()
    for V in (WW, WeilAlgebra((2, 1)), WeilAlgebra((1, 2))):
        assert NV.nerve_object(B, V).dim == B.base_dim + (V.dim - 1) * B.rank


def test_tangent_algebroid_prolongation_is_second_tangent_bundle():
    TA = AL.tangent_algebroid(1)
    space = NV.nerve_object(TA, WW)
    assert space.dim == 4
    # The labeled reordering identifies L(TM) with T²M: (x;u,v,w) -> (x,v,u,w).
    assert space.weil_layout_iso() == PolyMap.from_strings(
        4, ["x1", "x3", "x2", "x4"])


# -- generator maps -----------------------------------------------------------------


def test_generator_examples_unwhiskered():
    A = action()
    lam_hat = NV.nerve_generator_map(A, "ell", NAT, NAT)
    assert lam_hat == PolyMap.from_strings(2, ["x1", "0", "0", "x2"])
    sigma = AL.involution_from_bracket(A)
    assert NV.nerve_generator_map(A, "flip", NAT, NAT, sigma=sigma) == sigma
    assert NV.nerve_generator_map(A, "p", NAT, NAT) == \
        NV.nerve_object(A, W).pi_leg


def test_whiskered_generators_match_weil_action_on_tangent_algebroid():
    TA = AL.tangent_algebroid(1)
    shape = TA.shape
    sigma = AL.involution_from_bracket(TA)
    cases = [("p", NAT, W), ("zero", W, NAT), ("plus", NAT, W),
             ("ell", W, NAT), ("flip", NAT, W), ("flip", W, NAT)]
    for kind, left, right in cases:
        got = whiskered_generator(shape, kind, left, right, sigma=sigma)
        gen = weil.generator(kind)
        phi = weil.tensor_morphisms(
            weil.tensor_morphisms(weil.identity_morphism(left), gen),
            weil.identity_morphism(right))
        want = tangent.structure_nat(phi, 1)
        src = Prolongation(shape, WeilAlgebra(
            left.widths + gen.source.widths + right.widths))
        tgt = Prolongation(shape, WeilAlgebra(
            left.widths + gen.target.widths + right.widths))
        assert compose_maps(tgt.weil_layout_iso(), got) == \
            compose_maps(want, src.weil_layout_iso()), (kind, left, right)


def test_bang_and_id_maps():
    A = so3()
    ident = NV.nerve_generator_map(A, "id", NAT, NAT, algebra=WW)
    assert ident == PolyMap.identity(NV.nerve_object(A, WW).dim)
    bang = NV.nerve_generator_map(A, "bang", NAT, W, algebra=W)
    # A.(!⊗W): A.(W⊗W) -> A.W drops the first factor's blocks.
    space = NV.nerve_object(A, WW)
    assert bang.src_dim == space.dim and bang.tgt_dim == NV.nerve_object(A, W).dim


# -- evaluation and functoriality -----------------------------------------------------


def test_nerve_eval_lift_symmetry():
    for A in (so3(), action(), AL.tangent_algebroid(2)):
        lhs = NV.nerve_eval(A, wterm.parse_term("c . l"))
        rhs = NV.nerve_eval(A, wterm.parse_term("l"))
        assert lhs == rhs


def test_nerve_eval_identity():
    A = so3()
    t = wterm.parse_term("id{W2*W}")
    assert NV.nerve_eval(A, t) == PolyMap.identity(
        NV.nerve_object(A, WeilAlgebra((2, 1))).dim)


def test_nerve_matches_tangent_model_on_tangent_algebroid():
    TA = AL.tangent_algebroid(1)
    model = NV.NerveModel(TA)
    rng = random.Random(3)
    for _ in range(40):
        t = wterm.random_term(rng, depth=2)
        nerve_map = wterm.eval_model(t, model)
        action_map = tangent.structure_nat(wterm.eval_weil(t), 1)
        src_iso = NV.nerve_object(TA, t.source).weil_layout_iso()
        tgt_iso = NV.nerve_object(TA, t.target).weil_layout_iso()
        assert compose_maps(tgt_iso, nerve_map) == \
            compose_maps(action_map, src_iso), wterm.print_term(t)


def test_functoriality_on_seeded_pairs():
    rng = random.Random(4)
    pairs = [wterm.random_equal_pair(rng, depth=2) for _ in range(25)]
    for A in (so3(), action()):
        report = NV.check_functoriality(A, pairs)
        assert report.passed, [v.witness for v in report.verdicts if not v.passed]


def test_functoriality_yang_baxter_and_coassociativity_pairs():
    yb = (wterm.parse_term("(c * id{W}) . (id{W} * c) . (c * id{W})"),
          wterm.parse_term("(id{W} * c) . (c * id{W}) . (id{W} * c)"))
    coassoc = (wterm.parse_term("(l * id{W}) . l"),
               wterm.parse_term("(id{W} * l) . l"))
    trivial = (wterm.parse_term("p . 0"), wterm.parse_term("id{N}"))
    for A in (so3(), action(), AL.tangent_algebroid(1)):
        report = NV.check_functoriality(A, [yb, coassoc, trivial])
        assert report.passed


def test_compose_functoriality():
    report = NV.check_compose_functoriality(action(), random.Random(5), cases=8)
    assert report.passed


# -- p-cartesianness ----------------------------------------------------------------


def test_cartesian_p_passes():
    for A in (AL.tangent_algebroid(1), so3(), action()):
        report = NV.check_cartesian_p(A)
        assert report.passed, [v.name for v in report.verdicts if not v.passed]


def test_engineered_gluing_breaks_the_comparison():
    """A rank-deficient stand-in for the first prolongation (an extra fiber
    coordinate that the structure maps identify with an existing one) makes
    the canonical comparison non-injective — the failure check_cartesian_p
    certifies against."""
    A = AL.tangent_algebroid(1)
    space = NV.nerve_object(A, WW)
    # Doctored complex: (x; u, v, w, w2) presented through w only.
    collapse = PolyMap.from_strings(5, ["x1", "x2", "x3", "x4"])
    alpha = compose_maps(space.proj1, collapse)
    p_map = compose_maps(whiskered_generator(A.shape, "p", NAT, W), collapse)
    comparison = PolyMap.pairing([p_map, alpha])
    matrix, _ = comparison.linear_part()
    from tancat import linalg
    kernel = linalg.nullspace(matrix)
    assert kernel  # the duplicated coordinate spans the kernel
    assert kernel[0][4] != 0


# -- the prolongation tangent structure ------------------------------------------------


def test_lie_tangent_of_tangent_algebroid():
    for d in (1, 2):
        prime = NV.lie_tangent(AL.tangent_algebroid(d))
        expect = AL.tangent_algebroid(2 * d)
        assert prime.rho == expect.rho
        assert prime.bracket == expect.bracket


def test_lie_tangent_so3():
    prime = NV.lie_tangent(so3())
    assert prime.base_dim == 3 and prime.rank == 6
    assert AL.check_structure_equations(prime).passed
    sigma = AL.involution_from_bracket(prime)
    assert AL.check_involution_axioms(prime, sigma).passed


def test_lie_tangent_rejects_invalid():
    bad = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    bad[0][1][0] = 1
    bad[1][0][0] = -1
    bad[0][2][1] = 1
    bad[2][0][1] = -1
    bad[1][2][0] = 1
    bad[2][1][0] = -1
    A = AL.make_algebroid(0, 3, [], bad)
    with pytest.raises(ValueError, match="Bianchi"):
        NV.lie_tangent(A)


def test_lie_table():
    for A in (so3(), action(), AL.tangent_algebroid(1)):
        report = NV.check_lie_table(A)
        assert report.passed, [v.name for v in report.verdicts if not v.passed]


def test_section_vector_field_bijection():
    """A section X of π gives the involution-algebroid morphism
    ((id, T.X∘ϱ), X): A -> L'(A), and X round-trips from it."""
    A = action()
    prime = NV.lie_tangent(A)
    X = PolyMap.from_strings(1, ["x1^2"])
    d, r = A.base_dim, A.rank
    # Base map A -> base of L'(A) = A: (x, u) stays (x, u) ... the morphism
    # goes from the algebroid A to L'(A): base map M -> A is (id, X).
    base_map = PolyMap.pairing([PolyMap.identity(d), X])
    # Fiber matrix: u -> (u, ∂X[ρ(x)u]) ∈ fiber (u', w') of L'(A).
    x = [Polynomial.var(d, i + 1) for i in range(d)]
    fiber = [[Polynomial.const(d, 1) if a == b else Polynomial.const(d, 0)
              for b in range(r)] for a in range(r)]
    rho_cols = [A.shape.anchor_fiber(x, [Polynomial.const(d, 1 if t == a else 0)
                                         for t in range(r)]) for a in range(r)]
    for comp_idx in range(r):
        row = []
        for a in range(r):
            acc = Polynomial.zero(d)
            for j in range(d):
                acc = acc + X.components[comp_idx].partial(j + 1) * rho_cols[a][j]
            row.append(acc)
        fiber.append(row)
    report = AL.check_morphism(A, prime, fiber, base_map)
    assert report.passed, [v.name for v in report.verdicts if not v.passed]
    # Round trip: the section is the base map's fiber component.
    assert PolyMap(d, r, list(base_map.components[d:])) == X


def test_anchor_naturality_of_the_nerve_on_all_algebroids():
    """The right leg ϱ^V: A.V -> T^V(M) intertwines nerve evaluation with
    the Weil action on the base — the defining square of a span morphism —
    so the tangent module independently cross-checks every nerve map."""
    from tancat.selftest import leibniz_family
    rng = random.Random(6)
    cases = [so3(), action(), AL.tangent_algebroid(2),
             leibniz_family(random.Random(2))]
    for A in cases:
        model = NV.NerveModel(A)
        for _ in range(15):
            t = wterm.random_term(rng, depth=2)
            nerve_map = wterm.eval_model(t, model)
            action_map = tangent.structure_nat(wterm.eval_weil(t), A.base_dim)
            src_leg = NV.nerve_object(A, t.source).rho_leg
            tgt_leg = NV.nerve_object(A, t.target).rho_leg
            assert compose_maps(tgt_leg, nerve_map) == \
                compose_maps(action_map, src_leg), \
                (str(A), wterm.print_term(t))
