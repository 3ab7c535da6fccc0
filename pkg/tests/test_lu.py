import random

import numpy as np
import pytest

import oracles
from conftest import dominant_real, max_abs_diff, real_matrix, run_named
from matfor.errors import DivisionByZero


def test_worked_two_by_two(lib):
    a = real_matrix([[4, 3], [6, 3]])
    u = run_named(lib, "lu_upper", 2, V=a)
    lo = run_named(lib, "lu_lower", 2, V=a)
    assert u.tolists() == [[4.0, 3.0], [0.0, -1.5]]
    assert lo.tolists() == [[1.0, 0.0], [1.5, 1.0]]


def test_identity_needs_no_elimination(lib):
    eye = real_matrix([[1 if i == j else 0 for j in range(4)]
                       for i in range(4)])
    assert run_named(lib, "lu_upper", 4, V=eye).tolists() == eye.tolists()
    assert run_named(lib, "lu_lower", 4, V=eye).tolists() == eye.tolists()


def test_zero_leading_pivot_raises(lib):
    with pytest.raises(DivisionByZero):
        run_named(lib, "lu_upper", 2, V=real_matrix([[0, 1], [1, 0]]))


def test_pivot_column_extraction(lib):
    from matfor.evaluator import canonical_vector
    from matfor.semiring import REAL
    a = real_matrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    out = run_named(lib, "pivot_column", 3, V=a,
                    y=canonical_vector(2, 3, REAL))
    assert out.tolists() == [[0.0], [0.0], [8.0]]


def test_elimination_step_matches_textbook_factor(lib):
    from matfor.evaluator import canonical_vector
    from matfor.semiring import REAL
    a = real_matrix([[4, 3], [6, 3]])
    t1 = run_named(lib, "elimination_step", 2, V=a,
                   y=canonical_vector(1, 2, REAL))
    assert t1.tolists() == [[1.0, 0.0], [-1.5, 1.0]]


@pytest.mark.parametrize("trial", range(20))
def test_factorisation_against_gaussian_oracle(lib, trial):
    rng = random.Random(42 + trial)
    n = rng.randrange(1, 7)
    a = dominant_real(rng, n)
    rows = a.tolists()
    lo = run_named(lib, "lu_lower", n, V=a)
    up = run_named(lib, "lu_upper", n, V=a)
    l_ref, u_ref = oracles.gaussian_lu(rows)
    assert max_abs_diff(lo, l_ref.tolist()) < 1e-9
    assert max_abs_diff(up, u_ref.tolist()) < 1e-9
    prod = np.array(lo.tolists()) @ np.array(up.tolists())
    assert np.max(np.abs(prod - np.array(rows))) < 1e-9


def test_lower_factor_is_unit_lower_triangular(lib):
    rng = random.Random(7)
    a = dominant_real(rng, 5)
    lo = run_named(lib, "lu_lower", 5, V=a)
    for i in range(5):
        assert lo.get(i, i) == 1.0
        for j in range(i + 1, 5):
            assert lo.get(i, j) == 0.0
