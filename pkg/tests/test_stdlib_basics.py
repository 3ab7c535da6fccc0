import pytest

from conftest import real_matrix, run_named
from matfor.evaluator import canonical_vector
from matfor.parser import parse_expr
from matfor.printer import pretty
from matfor.semiring import BOOL, NAT, REAL, TROPICAL
from matfor.typecheck import typecheck


def test_identity(lib):
    out = run_named(lib, "identity", 3)
    assert out.tolists() == [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                             [0.0, 0.0, 1.0]]


def test_ones_vec_every_semiring(lib):
    for sr in (REAL, NAT, BOOL, TROPICAL):
        out = run_named(lib, "ones_vec", 4, sr)
        assert out.entries == (sr.one,) * 4


def test_diag_embed(lib):
    out = run_named(lib, "diag_embed", 3, a=real_matrix([[5], [6], [7]]))
    assert out.tolists() == [[5.0, 0.0, 0.0], [0.0, 6.0, 0.0],
                             [0.0, 0.0, 7.0]]


@pytest.mark.parametrize("i,j,want_le,want_lt", [
    (1, 1, 1.0, 0.0), (2, 2, 1.0, 0.0), (1, 2, 1.0, 1.0),
    (2, 1, 0.0, 0.0), (3, 2, 0.0, 0.0), (2, 3, 1.0, 1.0),
])
def test_index_comparisons_match_the_indices(lib, i, j, want_le, want_lt):
    bi = canonical_vector(i, 3, REAL)
    bj = canonical_vector(j, 3, REAL)
    assert run_named(lib, "index_le", 3, w=bi, v=bj).get(0, 0) == want_le
    assert run_named(lib, "index_lt", 3, y=bi, v=bj).get(0, 0) == want_lt


def test_first_and_last_tests(lib):
    for i in range(1, 5):
        b = canonical_vector(i, 4, REAL)
        assert run_named(lib, "is_first", 4, v=b).get(0, 0) == \
            (1.0 if i == 1 else 0.0)
        assert run_named(lib, "is_last", 4, v=b).get(0, 0) == \
            (1.0 if i == 4 else 0.0)
    assert run_named(lib, "last_basis", 4).tolists() == \
        [[0.0], [0.0], [0.0], [1.0]]


def test_shift_by_index_matrix(lib):
    for k in range(1, 4):
        out = run_named(lib, "shift_by_index", 3,
                        v=canonical_vector(k, 3, REAL))
        for j in range(1, 4):
            col = [out.get(i, j - 1) for i in range(3)]
            want = [0.0] * 3
            if j + k <= 3:
                want[j + k - 1] = 1.0
            assert col == want


def test_shift_vector_oracle(lib):
    a = real_matrix([[1], [2], [3], [4]])
    for k in range(1, 5):
        out = run_named(lib, "shift_vector", 4, a=a,
                        v=canonical_vector(k, 4, REAL))
        want = [0.0] * k + [1.0, 2.0, 3.0, 4.0][:4 - k]
        assert [out.get(i, 0) for i in range(4)] == want


def test_shift_example(lib):
    out = run_named(lib, "shift_vector", 3, a=real_matrix([[1], [2], [3]]),
                    v=canonical_vector(1, 3, REAL))
    assert out.tolists() == [[0.0], [1.0], [2.0]]


def test_repeated_squaring(lib):
    out = run_named(lib, "repeated_squaring", 4, A=real_matrix([[2]]))
    assert out.get(0, 0) == 2.0 ** 16


def test_every_stdlib_expression_typechecks_and_round_trips(lib):
    for name, item in lib.items():
        assert typecheck(item.expr, item.schema) is not None
        assert parse_expr(pretty(item.expr)) == item.expr, name
