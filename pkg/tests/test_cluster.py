import random

import pytest

from tysys.cartan import new_cartan
from tysys.cluster import (
    b_of_c,
    check_b1,
    check_b2,
    check_bb,
    check_tb,
    check_x_parity,
    check_y_parity,
    check_yb,
    correspondence_check,
    exchange_matrix_for_level,
    initial_seed,
    laurent_check,
    mutate_matrix,
    mutate_seed,
    mutate_seed_composed,
    new_exchange_matrix,
    random_parity_exchange,
    run_sequence,
    seven_node_example,
    square_product,
    t_to_y_b,
)
from tysys.errors import ConditionsViolated, NoParity, NotSymmetrizable
from tysys.exactmath import LaurentPoly, RationalFunction, SemifieldElement

A2 = new_cartan([[2, -1], [-1, 2]])
A3 = new_cartan([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
CYCLE3 = new_cartan([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])

BA2 = new_exchange_matrix([[0, 1], [-1, 0]], parity=(1, -1))


def x_gen(i):
    return RationalFunction.gen(f"x{i}")


def y_gen(i):
    return SemifieldElement.gen(f"y{i}")


# --- matrices -----------------------------------------------------------------


def test_matrix_validation():
    with pytest.raises(NotSymmetrizable):
        new_exchange_matrix([[0, 1], [1, 0]])
    with pytest.raises(NotSymmetrizable):
        new_exchange_matrix([[1, 1], [-1, 0]])
    with pytest.raises(NotSymmetrizable):
        new_exchange_matrix([[0, 1], [0, 0]])


def test_mutation_row_col_negation_and_involution():
    rng = random.Random(4)
    for _ in range(20):
        em = random_parity_exchange(rng, rng.randint(2, 5))
        k = rng.randrange(em.n)
        mutated = mutate_matrix(em, k)
        assert all(mutated[k, j] == -em[k, j] for j in range(em.n))
        assert all(mutated[i, k] == -em[i, k] for i in range(em.n))
        assert mutate_matrix(mutated, k).b == em.b
        assert mutated.d == em.d


def test_mutation_index_error():
    with pytest.raises(IndexError):
        mutate_matrix(BA2, 2)


def test_b_of_c_a2():
    em = b_of_c(A2)
    assert em.rows() == [[0, 1], [-1, 0]]
    assert em.parity == (1, -1)


def test_b_of_c_keeps_symmetrizer():
    b2 = new_cartan([[2, -1], [-2, 2]])
    em = b_of_c(b2)
    assert em.d == b2.d


def test_plus_mutation_negates_b_of_c():
    em = b_of_c(A2)
    assert mutate_matrix(em, 0).b == ((0, -1), (1, 0))


def test_parity_conditions_on_b_of_c():
    for cm in (A2, A3, new_cartan([[2, -1], [-2, 2]])):
        em = b_of_c(cm)
        assert check_b1(em) and check_b2(em) and check_bb(em)


def test_no_parity_raises():
    em = new_exchange_matrix([[0, 1], [-1, 0]])
    with pytest.raises(NoParity):
        check_b1(em)


def test_seven_node_example_conditions():
    em = seven_node_example()
    assert em.plus_nodes() == [1, 2]  # the two hub nodes
    assert check_b1(em)
    assert check_b2(em)
    assert check_bb(em)


def test_b2_equivalent_to_bb_on_random_matrices():
    rng = random.Random(99)
    agree = 0
    holds = 0
    for _ in range(100):
        em = random_parity_exchange(rng, rng.randint(2, 6))
        left, right = check_b2(em), check_bb(em)
        assert left == right
        agree += 1
        holds += left
    assert agree == 100
    assert 0 < holds < 100  # the sample contains both kinds


def test_square_product_a2_a2():
    em = square_product(A2, A2)
    assert em.n == 4
    assert check_b1(em) and check_bb(em) and check_b2(em)
    assert em.d == (1, 1, 1, 1)
    # orientation around the unit square alternates
    assert em.labels == ("1.1", "1.2", "2.1", "2.2")


def test_square_product_symmetrizer_multiplies():
    b2 = new_cartan([[2, -1], [-2, 2]])
    em = square_product(b2, A2)
    assert em.d == (2, 2, 1, 1)
    assert check_b1(em) and check_b2(em)


# --- seeds ---------------------------------------------------------------------


def test_seed_mutation_exchange():
    seed = initial_seed(BA2)
    out = mutate_seed(seed, 0)
    assert out.x[0] == (1 + LaurentPoly.gen("x2")) / x_gen(1)
    assert out.x[1] == x_gen(2)
    assert out.y[0] == y_gen(1).inv()
    g1, g2 = LaurentPoly.gen("y1"), LaurentPoly.gen("y2")
    assert out.y[1] == SemifieldElement.from_num_den(g2 * g1, g1 + 1)
    assert out.matrix.b == ((0, -1), (1, 0))


def test_seed_mutation_involution():
    rng = random.Random(6)
    for _ in range(8):
        em = random_parity_exchange(rng, rng.randint(2, 4))
        seed = initial_seed(em)
        k = rng.randrange(em.n)
        back = mutate_seed(mutate_seed(seed, k), k)
        assert back.matrix.b == em.b
        assert all(back.x[i] == seed.x[i] for i in range(em.n))
        assert all(back.y[i] == seed.y[i] for i in range(em.n))


def test_composed_mutation_order_independent():
    em = exchange_matrix_for_level(A3, 2)
    seed = initial_seed(em)
    plus = em.plus_nodes()
    assert len(plus) >= 2
    fwd = mutate_seed_composed(seed, plus)
    rev = mutate_seed_composed(seed, list(reversed(plus)))
    assert fwd.matrix.b == rev.matrix.b
    assert all(fwd.x[i] == rev.x[i] for i in range(em.n))
    assert all(fwd.y[i] == rev.y[i] for i in range(em.n))


# --- sequences -------------------------------------------------------------------


def test_run_sequence_requires_conditions():
    # non-alternating orientation of the rank-3 path: B1 holds, B2 fails
    em = new_exchange_matrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
                             parity=(1, -1, 1))
    assert check_b1(em) and not check_b2(em) and not check_bb(em)
    with pytest.raises(ConditionsViolated):
        run_sequence(em, (0, 2))


@pytest.fixture(scope="module")
def ba2_seq():
    return run_sequence(BA2, (-2, 10), mode="symbolic")


def test_sequence_parity_lemmas(ba2_seq):
    assert check_x_parity(ba2_seq) == []
    assert check_y_parity(ba2_seq) == []


def test_sequence_satisfies_tb(ba2_seq):
    assert check_tb(ba2_seq) == []


def test_sequence_satisfies_yb_both_signs(ba2_seq):
    assert check_yb(ba2_seq, 1) == []
    assert check_yb(ba2_seq, -1) == []


def test_sequence_laurent(ba2_seq):
    assert laurent_check(ba2_seq) == []


def test_perturbed_family_fails(ba2_seq):
    import copy

    broken = copy.copy(ba2_seq)
    broken.x = dict(ba2_seq.x)
    broken.x[(0, 3)] = broken.x[(0, 3)] * 2
    assert check_tb(broken)


def test_t_to_y_b_both_signs(ba2_seq):
    lo, hi = ba2_seq.u_range
    for eps in (1, -1):
        y_values, violations = t_to_y_b(ba2_seq.x, BA2, eps=eps)
        assert violations == []


def test_y_coefficients_stay_subtraction_free(ba2_seq):
    for val in ba2_seq.y.values():
        assert val.num.has_positive_coeffs() and val.den.has_positive_coeffs()


def test_seven_node_sequence_yb():
    # weight-2 arrows make the symbolic family huge; keep the symbolic run
    # short and push further with exact numeric values
    em = seven_node_example()
    seq = run_sequence(em, (0, 2), mode="symbolic")
    assert check_yb(seq, 1) == []
    assert check_yb(seq, -1) == []
    assert check_tb(seq) == []
    numeric = run_sequence(em, (-2, 8), mode="numeric", rng=random.Random(44))
    assert check_yb(numeric, 1) == []
    assert check_yb(numeric, -1) == []
    assert check_tb(numeric) == []


def test_numeric_mode_matches_structure():
    em = exchange_matrix_for_level(A3, 2)
    seq = run_sequence(em, (0, 6), mode="numeric", rng=random.Random(12))
    assert check_tb(seq) == []
    assert check_yb(seq, 1) == []
    assert check_x_parity(seq) == []


def test_auto_mode_switches_to_numeric():
    em = exchange_matrix_for_level(A3, 2)
    with pytest.warns(UserWarning):
        seq = run_sequence(em, (0, 20), mode="auto", rng=random.Random(8))
    assert seq.mode == "numeric"
    assert check_tb(seq) == []


# --- correspondence ----------------------------------------------------------------


def test_correspondence_a3_level2():
    report = correspondence_check(A3, 2, rng=random.Random(1))
    assert report["pass"], report["violations"][:3]
    assert not report["routed_through_double"]


def test_correspondence_a2_level3():
    report = correspondence_check(A2, 3, rng=random.Random(2))
    assert report["pass"], report["violations"][:3]
    assert report["exchange_size"] == 4


def test_correspondence_nonbipartite_via_double():
    report = correspondence_check(CYCLE3, 2, rng=random.Random(3))
    assert report["pass"], report["violations"][:3]
    assert report["routed_through_double"]
    assert report["exchange_size"] == 6


def test_plus_minus_systems_swap_under_inversion(ba2_seq):
    # Y -> 1/Y turns every + relation into the - relation at the same center
    from tysys.cluster import _parity_sign, _yb_sides

    em = ba2_seq.matrix
    lo, hi = ba2_seq.u_range
    inverted = {key: val.inv() for key, val in ba2_seq.y.items()}
    hit = 0
    for i in range(em.n):
        for u in range(lo + 1, hi):
            if _parity_sign(em, i, u) != -1:
                continue  # centers of the + system
            lhs = inverted[(i, u - 1)] * inverted[(i, u + 1)]
            num, den = _yb_sides(em, inverted, i, u, -1)
            assert lhs * den == num
            hit += 1
    assert hit


def test_tb_invariant_under_negation_and_parity_swap(ba2_seq):
    from dataclasses import replace

    negated = replace(BA2, b=tuple(tuple(-v for v in row) for row in BA2.b),
                      parity=tuple(-s for s in BA2.parity))
    assert check_tb(ba2_seq, negated) == []


def test_sequence_json_dump(ba2_seq):
    data = ba2_seq.to_json()
    assert data["u_range"] == [-2, 10]
    assert "(1,0)" in data["x"] and "(2,5)" in data["y"]
