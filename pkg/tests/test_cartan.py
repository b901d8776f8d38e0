import itertools
import math
import random

import pytest

from tysys.cartan import (
    bipartite_double,
    bipartition,
    format_matrix_text,
    is_simply_laced,
    is_tamely_laced,
    new_cartan,
    parse_matrix_text,
)
from tysys.errors import (
    AlreadyBipartite,
    NotGeneralizedCartan,
    NotSimplyLaced,
    NotSymmetrizable,
)

A2 = [[2, -1], [-1, 2]]
B2_LIKE = [[2, -1], [-2, 2]]
G2_LIKE = [[2, -1], [-3, 2]]
CYCLE3 = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
# rank-4 matrix with one triple and two double bonds, D = diag(3,1,2,2)
MIXED44 = [
    [2, -1, 0, 0],
    [-3, 2, -2, -2],
    [0, -1, 2, -1],
    [0, -1, -1, 2],
]


def test_mixed44_symmetrizer():
    cm = new_cartan(MIXED44)
    assert cm.d == (3, 1, 2, 2)
    assert cm.t == 6
    assert cm.t_a == (2, 6, 3, 3)


def test_a2_symmetrizer():
    cm = new_cartan(A2)
    assert cm.d == (1, 1) and cm.t == 1


def test_b2_like_symmetrizer():
    # solve d1*C12 = d2*C21 by hand: 2*(-1) = 1*(-2)
    cm = new_cartan(B2_LIKE)
    assert cm.d == (2, 1) and cm.t == 2


def test_dc_symmetric_for_valid_inputs():
    for rows in (A2, B2_LIKE, G2_LIKE, CYCLE3, MIXED44):
        cm = new_cartan(rows)
        for i in range(cm.r):
            for j in range(cm.r):
                assert cm.d[i] * cm[i, j] == cm.d[j] * cm[j, i]
        g = 0
        for v in cm.d:
            g = math.gcd(g, v)
        assert g == 1


def test_axiom_violations_rejected():
    with pytest.raises(NotGeneralizedCartan):
        new_cartan([[1, -1], [-1, 2]])
    with pytest.raises(NotGeneralizedCartan):
        new_cartan([[2, 1], [-1, 2]])
    with pytest.raises(NotGeneralizedCartan):
        new_cartan([[2, 0], [-1, 2]])
    with pytest.raises(NotGeneralizedCartan):
        new_cartan([[2, -1, 0], [-1, 2, -1]])


def test_not_symmetrizable_cycle():
    # ratios 2, 1, 1 around a triangle cannot close up
    rows = [[2, -2, -1], [-1, 2, -1], [-1, -1, 2]]
    with pytest.raises(NotSymmetrizable):
        new_cartan(rows)


def test_tamely_laced():
    assert is_tamely_laced(new_cartan(MIXED44))
    assert not is_tamely_laced(new_cartan([[2, -2], [-2, 2]]))
    assert is_tamely_laced(new_cartan(A2))
    assert is_tamely_laced(new_cartan(CYCLE3))
    assert is_tamely_laced(new_cartan(B2_LIKE))
    assert is_tamely_laced(new_cartan(G2_LIKE))


def test_simply_laced():
    assert is_simply_laced(new_cartan(A2))
    assert not is_simply_laced(new_cartan(B2_LIKE))
    assert not is_simply_laced(new_cartan(MIXED44))


def test_tamely_laced_permutation_invariant():
    rng = random.Random(3)
    cm = new_cartan(MIXED44)
    for _ in range(10):
        perm = list(range(cm.r))
        rng.shuffle(perm)
        rows = [[cm[perm[i], perm[j]] for j in range(cm.r)] for i in range(cm.r)]
        assert is_tamely_laced(new_cartan(rows))


def test_adjacency_rules_for_tamely_laced():
    # unequal d > 1 never adjacent; d_i > 1 vs d_j = 1 forces (-1, -d_i);
    # equal d forces a single bond
    for rows in (A2, B2_LIKE, G2_LIKE, MIXED44):
        cm = new_cartan(rows)
        assert is_tamely_laced(cm)
        for i in range(cm.r):
            for j in cm.neighbors(i):
                di, dj = cm.d[i], cm.d[j]
                if di > 1 and dj > 1:
                    assert di == dj
                if di == dj:
                    assert cm[i, j] == cm[j, i] == -1
                if di > 1 and dj == 1:
                    assert cm[i, j] == -1 and cm[j, i] == -di


def test_bipartition():
    assert bipartition(new_cartan(A2)) == (1, -1)
    assert bipartition(new_cartan(CYCLE3)) is None
    # nodes 2, 3, 4 form a triangle
    assert bipartition(new_cartan(MIXED44)) is None
    a3 = new_cartan([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    assert bipartition(a3) == (1, -1, 1)


def test_bipartite_double_of_3_cycle():
    cm = new_cartan(CYCLE3)
    doubled, index_map = bipartite_double(cm)
    assert doubled.r == 6
    assert index_map == ((0, 3), (1, 4), (2, 5))
    # expected entries straight from the definition
    for alpha, beta in itertools.product(range(6), repeat=2):
        if alpha == beta:
            expect = 2
        else:
            i, si = alpha % 3, alpha // 3
            j, sj = beta % 3, beta // 3
            expect = cm[i, j] if (si != sj and i != j) else 0
        assert doubled[alpha, beta] == expect
    assert is_simply_laced(doubled)
    assert bipartition(doubled) == (1, 1, 1, -1, -1, -1)


def test_bipartite_double_rejections():
    with pytest.raises(AlreadyBipartite):
        bipartite_double(new_cartan(A2))
    with pytest.raises(NotSimplyLaced):
        bipartite_double(new_cartan(B2_LIKE))


def test_disconnected_symmetrized_per_component():
    rows = [
        [2, -1, 0, 0],
        [-2, 2, 0, 0],
        [0, 0, 2, -1],
        [0, 0, -1, 2],
    ]
    cm = new_cartan(rows)
    assert cm.d == (2, 1, 1, 1)
    assert cm.t == 2


def test_text_format_roundtrip():
    text = format_matrix_text(MIXED44)
    rows, parity = parse_matrix_text("# comment\n" + text)
    assert rows == MIXED44 and parity is None
    text2 = format_matrix_text(A2, parity=(1, -1))
    rows2, parity2 = parse_matrix_text(text2)
    assert rows2 == A2 and parity2 == (1, -1)
