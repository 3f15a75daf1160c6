from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from addchow.cycles import (
    AdmissibilityError,
    FormalCycle,
    ImproperIntersectionError,
    MobiusCurve,
    ModulusRing,
    PointCycle,
    SlotSpace,
    UnsupportedProductError,
    act,
    admissible,
    block_permutation,
    boundary,
    concat,
    connes_derivation_check,
    cyclic_shuffle,
    delta,
    extra_degenerate_concat,
    face,
    is_reduced,
    modulus_ring_ops,
    mu_push,
    point,
    shuffle_product,
    totaro_c2,
    wedge,
)
from addchow.field import Mobius, var
from addchow.perm import Permutation, enumerate_shuffles
from addchow.verify import curve_corpus, reduced_corpus, reduced_curve

a, b1, b2 = var("a"), var("b1"), var("b2")
x, y = var("x"), var("y")
t1, t2, t3, s1 = var("t1"), var("t2"), var("t3"), var("s1")
A = ModulusRing((2,))


def pt(a_coord, *box, ring=A) -> FormalCycle:
    return FormalCycle.of(point(a_coord, *box), ring)


def pt2(xy, *box) -> FormalCycle:
    return FormalCycle(SlotSpace(ModulusRing((2, 2)), len(box)), {PointCycle(xy, box): 1}, decomposable=True)


# modulus rings


def test_min_of_rings():
    assert modulus_ring_ops("min", ModulusRing((2,)), ModulusRing((3,))) == ModulusRing((2,))


def test_tensor_of_rings():
    r = modulus_ring_ops("tensor", ModulusRing((2,)), ModulusRing((3,)))
    assert r.e == 2 and r.m == (2, 3)


def test_min_with_itself():
    assert modulus_ring_ops("min", A, A) == A


def test_min_needs_embedding_dimension_one():
    with pytest.raises(ValueError):
        modulus_ring_ops("min", ModulusRing((2, 2)), A)


# admissibility


def test_generic_point_admissible():
    assert admissible(point(x, t1))[0]


def test_box_coordinate_one_rejected():
    ok, why = admissible(point(x, 1))
    assert not ok and "outside box" in why


def test_curve_with_zero_affine_coordinate_rejected():
    ok, why = admissible(MobiusCurve((0,), (Mobius.identity(),)))
    assert not ok and "modulus" in why


def test_formal_cycle_enforces_admissibility():
    with pytest.raises(AdmissibilityError):
        pt(x, 1)
    with pytest.raises(AdmissibilityError):
        pt(x, 0)


def test_like_terms_merge():
    c = pt(x, t1) + pt(x, t1) - 2 * pt(x, t1)
    assert c.is_zero() and c == 0


def test_curve_canonical_parametrization():
    # the same curve written with a different parameter compares equal
    m = Mobius(b1, -b1 * b2, 1, -b1 * b2)
    shift = Mobius(2, 1, 0, 1)
    c1 = MobiusCurve((a,), (Mobius.identity(), m))
    c2 = MobiusCurve((a,), (shift, m.compose(shift)))
    assert c1 == c2


# faces and boundary


def test_face_0_slot1_of_c2_vanishes():
    assert face(totaro_c2(a, b1, b2), 1, "0").is_zero()


def test_face_inf_slot1_of_c2():
    assert face(totaro_c2(a, b1, b2), 1, "inf") == pt(1 / a, b1)


def test_face_of_point_is_zero():
    assert face(pt(x, t1, t2), 2, "0").is_zero()


def test_face_landing_on_deeper_face_raises():
    c = FormalCycle.of(MobiusCurve((a,), (Mobius.identity(), Mobius.identity())), A)
    with pytest.raises(ImproperIntersectionError):
        face(c, 1, "0")


def test_face_index_checked():
    with pytest.raises(ValueError):
        face(pt(x, t1), 2, "0")
    with pytest.raises(ValueError):
        face(pt(x, t1), 1, "1")


def test_boundary_of_c2():
    assert boundary(totaro_c2(a, b1, b2)) == pt(1 / a, b1) + pt(1 / a, b2) - pt(1 / a, b1 * b2)


def test_boundary_of_point():
    assert boundary(pt(x, t1, t2)).is_zero()


def test_reduced_boundary_is_last_zero_face():
    # move the parametrized slots behind a constant one
    c = act(Permutation((2, 3, 1)), totaro_c2(a, b1, b2, (t3,)))
    assert boundary(c, "reduced") == face(c, 3, "0") == pt(1 / a, t3, b2)


@pytest.mark.parametrize("name", [n for n, _ in curve_corpus(4)])
def test_boundary_squared_zero(name):
    c = dict(curve_corpus(4))[name]
    assert boundary(boundary(c)).is_zero()
    if c.n >= 2:
        assert boundary(boundary(c, "reduced"), "reduced").is_zero()


# delta


def test_delta_of_zero_slot_point():
    assert delta(pt(x)) == -pt(x, 1 / x)


def test_delta_of_one_slot_point():
    assert delta(pt(x, t1)) == -pt(x, 1 / x, t1) + pt(x, t1, 1 / x)


def test_delta_squared_example():
    assert delta(delta(pt(x, t1))).is_zero()


def test_delta_needs_embedding_dimension_one():
    with pytest.raises(ValueError):
        delta(pt2((x, y), t1))


def test_delta_k_range():
    with pytest.raises(ValueError):
        delta(pt(x, t1), 3)


def test_delta_as_shuffle_sum():
    for n in range(5):
        c = pt(x, *(var(f"t{i}") for i in range(1, n + 1)))
        alt = sum((tau.sign() * act(tau, delta(c, 1)) for tau in enumerate_shuffles((1, n))),
                  FormalCycle.zero(SlotSpace(A, n + 1)))
        assert delta(c) == -alt


@given(st.integers(0, 4), st.data())
def test_delta_identities(n, data):
    c = pt(x, *(var(f"t{i}") for i in range(1, n + 1)))
    j = data.draw(st.integers(1, n + 1))
    i = data.draw(st.integers(1, n + 2))
    lhs = delta(delta(c, j), i)
    rhs = delta(delta(c, i), j + 1) if i <= j else delta(delta(c, i - 1), j)
    assert lhs == rhs


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_delta_squared_on_combinations(terms):
    n = 3
    c = FormalCycle.zero(SlotSpace(A, n))
    for coeff, k in terms:
        box = [var(f"t{(k + i) % 5}") for i in range(n)]
        c = c + coeff * pt(x + k, *box)
    assert delta(delta(c)).is_zero()


# reduced subcomplex


def test_points_are_reduced():
    assert is_reduced(pt(x, t1, t2))


def test_c2_is_not_reduced():
    assert not is_reduced(totaro_c2(a, b1, b2))


def test_zero_is_reduced():
    assert is_reduced(FormalCycle.zero(SlotSpace(A, 3)))


@pytest.mark.parametrize("name", [n for n, _ in reduced_corpus()])
def test_delta_commutes_with_reduced_boundary(name):
    c = dict(reduced_corpus())[name]
    if c.n == 0:
        assert boundary(delta(c), "reduced").is_zero()
    else:
        assert boundary(delta(c), "reduced") == delta(boundary(c, "reduced"))


def test_delta_k_keeps_reduced_for_k_up_to_n():
    r = reduced_curve()
    assert all(is_reduced(delta(r, k)) for k in range(1, r.n + 1))


def test_last_insertion_leaves_reduced_subcomplex():
    # d_n^0 delta_{n+1} = delta_n d_n^0, so delta_{n+1} r is reduced only if d'r = 0
    r = reduced_curve()
    assert is_reduced(r) and not boundary(r, "reduced").is_zero()
    assert not is_reduced(delta(r, r.n + 1))
    assert face(delta(r, r.n + 1), r.n, "0") == delta(boundary(r, "reduced"), r.n)


# products


def test_concat_example():
    got = concat(pt(x, t1), pt(y, s1))
    assert got == pt2((x, y), t1, s1)
    assert got.ring.e == 2


def test_concat_of_zero_slot_points():
    assert concat(pt(x), pt(y)) == pt2((x, y))


def test_concat_boundary_with_point():
    c = totaro_c2(a, b1, b2)
    assert boundary(concat(c, pt(y, s1))) == concat(boundary(c), pt(y, s1))


def test_concat_of_two_curves_unsupported():
    with pytest.raises(UnsupportedProductError):
        concat(totaro_c2(a, b1, b2), totaro_c2(y, t1, t2))


def test_shuffle_product_example():
    assert shuffle_product(pt(x, t1), pt(y, s1)) == pt2((x, y), t1, s1) - pt2((x, y), s1, t1)


def test_shuffle_with_zero_slots_is_concat():
    assert shuffle_product(pt(x, t1, t2), pt(y)) == concat(pt(x, t1, t2), pt(y))


def test_shuffle_graded_commutative():
    lhs = shuffle_product(pt(y, s1), pt(x, t1))
    # compare after renaming the affine factors into the same order
    assert lhs == -(pt2((y, x), t1, s1) - pt2((y, x), s1, t1))


def test_mu_push_example():
    assert mu_push(pt2((x, y), t1)) == pt(x * y, t1)


def test_mu_push_of_points():
    assert mu_push(concat(pt(x), pt(y))) == pt(x * y)


def test_mu_push_of_curve():
    c = concat(pt(x), totaro_c2(a, b1, b2))
    got = mu_push(c)
    (term, k), = list(got)
    assert term.is_curve and k == 1
    assert term.a == (x / a,)


def test_mu_push_needs_decomposable():
    c = FormalCycle(SlotSpace(ModulusRing((2, 2)), 1), {PointCycle((x, y), (t1,)): 1})
    with pytest.raises(ValueError):
        mu_push(c)


def test_mu_push_lands_in_min_ring():
    c = concat(pt(x, ring=ModulusRing((3,))), pt(y, ring=ModulusRing((2,))))
    assert mu_push(c).ring == ModulusRing((2,))


def test_wedge_examples():
    assert wedge(pt(x), pt(y)) == pt(x * y)
    assert wedge(pt(x, t1), pt(y)) == pt(x * y, t1)
    assert wedge(pt(x, t1), pt(y, s1)) == pt(x * y, t1, s1) - pt(x * y, s1, t1)


# Totaro's cycle and the cyclic shuffle


def test_totaro_zero():
    assert totaro_c2(0, b1, b2).is_zero()


def test_totaro_rejects_zero_b():
    with pytest.raises(ValueError):
        totaro_c2(a, 0, b2)


def test_totaro_extras_faces_vanish():
    c = totaro_c2(a, b1, b2, (t3,))
    assert face(c, 3, "0").is_zero() and face(c, 3, "inf").is_zero()
    assert boundary(c) == concat_box(boundary(totaro_c2(a, b1, b2)), t3)


def concat_box(c: FormalCycle, extra) -> FormalCycle:
    return FormalCycle(SlotSpace(c.ring, c.n + 1), {t.with_box(t.box + (extra,)): k for t, k in c})


def test_extra_degenerate_concat_points():
    got = extra_degenerate_concat(pt(x), pt(y))
    assert got == totaro_c2(1 / (x * y), 1 / x, 1 / y)
    assert got.dimension() == 1


def test_extra_degenerate_concat_with_slot():
    got = extra_degenerate_concat(pt(x, t1), pt(y))
    assert got == totaro_c2(1 / (x * y), 1 / x, 1 / y, (t1,))


def test_extra_degenerate_concat_rejects_curves():
    with pytest.raises(UnsupportedProductError):
        extra_degenerate_concat(totaro_c2(a, b1, b2), pt(y))


def test_cyclic_shuffle_singleton():
    assert cyclic_shuffle(pt(x), pt(y)) == totaro_c2(1 / (x * y), 1 / x, 1 / y)


def test_cyclic_shuffle_term_counts():
    assert len(cyclic_shuffle(pt(x, t1), pt(y))) == 2
    assert len(cyclic_shuffle(pt(x, t1), pt(y, s1))) == 6


def test_block_permutation_moves_block():
    nu = Permutation((2, 1))  # swap the block with slot 3
    assert block_permutation(nu).images == (2, 3, 1)


def test_derivation_base_case():
    rep = connes_derivation_check(pt(x), pt(y))
    want = pt(x * y, 1 / x) + pt(x * y, 1 / y) - pt(x * y, 1 / (x * y))
    assert rep.lhs == want
    assert rep.global_sign == -1
    assert boundary(totaro_c2(1 / (x * y), 1 / x, 1 / y)) == want


@pytest.mark.parametrize("r1,r2", [(1, 0), (0, 1), (1, 1)])
def test_derivation_same_sign(r1, r2):
    xi = pt(x, *(var(f"t{i}") for i in range(1, r1 + 1)))
    eta = pt(y, *(var(f"u{i}") for i in range(1, r2 + 1)))
    assert connes_derivation_check(xi, eta).global_sign == -1


def test_derivation_fails_with_object_sign():
    # the sign of nu itself (not of its slot expansion) breaks the identity
    assert connes_derivation_check(pt(x, t1), pt(y), sign="object").global_sign is None


# Leibniz


@pytest.mark.parametrize("name", [n for n, _ in curve_corpus(3)])
def test_leibniz_concatenation(name):
    c = dict(curve_corpus(3))[name]
    p = pt(y, var("u1"))
    for left, right in ((c, p), (p, c)):
        lhs = boundary(concat(left, right))
        rhs = FormalCycle.zero(lhs.space, True)
        if left.n:
            rhs = rhs + concat(boundary(left), right)
        if right.n:
            rhs = rhs + (-1) ** left.n * concat(left, boundary(right))
        assert lhs == rhs


def test_leibniz_shuffle_fails_at_chain_level():
    # faces of C2 shuffled past a constant slot are counted once per position
    c, p = totaro_c2(a, b1, b2), pt(y, var("u1"))
    lhs = boundary(shuffle_product(c, p))
    rhs = shuffle_product(boundary(c), p)
    u1 = var("u1")
    diff = pt2((1 / a, y), b2, u1) - pt2((1 / a, y), b1 * b2, u1) - pt2((1 / a, y), u1, b1)
    assert lhs - rhs == diff


def test_leibniz_shuffle_holds_for_zero_slot_partner():
    c, p = totaro_c2(a, b1, b2), pt(y)
    assert boundary(shuffle_product(c, p)) == shuffle_product(boundary(c), p)
