import numpy as np
from pytest import raises, approx

from _common import run_tests
from graphstein._errors import SingularUpdate, InvalidArgument
from graphstein.kernels import (
    InverseState,
    rank2_update,
    rank2_update_inplace,
    rank2_chain,
    toggled_grw_sum,
    sherman_morrison,
)


def toggle(B, i, j, mu):
    M = np.array(B, float)
    M[i, j] += mu
    M[j, i] += mu
    return M


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(0, 1, (n, n))
    A = A + A.T
    return A + np.diag(np.abs(A).sum(axis=1) + 1)  # diagonally dominant


def test_two_by_two():
    state = InverseState.from_matrix(np.eye(2))
    new = rank2_update(state, 0, 1, 0.5)
    expected = np.array([[1, -0.5], [-0.5, 1]]) / 0.75
    assert np.allclose(new.C, expected)
    assert new.total == approx(expected.sum())
    assert list(new.col_sums) == approx(list(expected.sum(axis=0)))
    # Input untouched
    assert np.allclose(state.C, np.eye(2))


def test_singular_update_falls_through():
    # M is invertible but 1 + mu c_ij = 0, so the formula does not apply
    B = np.array([[1.0, 1.0], [1.0, 2.0]])
    state = InverseState.from_matrix(B)
    assert np.allclose(state.C, [[2, -1], [-1, 1]])
    with raises(SingularUpdate):
        rank2_update(state, 0, 1, 1.0)
    with raises(SingularUpdate):
        toggled_grw_sum(state, 0, 1, 1.0)
    M = toggle(B, 0, 1, 1.0)
    assert np.allclose(np.linalg.inv(M), [[-1, 1], [1, -0.5]])

    with raises(SingularUpdate):
        InverseState.from_matrix(np.ones((3, 3)))
    with raises(InvalidArgument):
        rank2_update(state, 1, 1, 0.5)
    with raises(InvalidArgument):
        InverseState(np.ones(3))


def test_random_updates():
    for seed in range(10):
        n = 8
        B = random_symmetric(n, seed)
        rng = np.random.default_rng(seed + 100)
        state = InverseState.from_matrix(B)
        for _ in range(5):
            i, j = rng.choice(n, 2, replace=False)
            mu = rng.normal()
            expected_total = np.linalg.inv(toggle(B, i, j, mu)).sum()
            assert toggled_grw_sum(state, i, j, mu) == approx(expected_total, rel=1e-8)
            rank2_update_inplace(state, i, j, mu)
            B = toggle(B, i, j, mu)
            Cref = np.linalg.inv(B)
            assert np.allclose(state.C, Cref, atol=1e-9)
            assert state.total == approx(Cref.sum(), rel=1e-8)
            assert state.is_consistent(1e-8)


def test_many_random_matrices():
    rng = np.random.default_rng(42)
    for seed in range(200):
        n = int(rng.integers(2, 41))
        B = random_symmetric(n, seed)
        i, j = rng.choice(n, 2, replace=False)
        # |mu| < 1 keeps the toggled matrix diagonally dominant
        mu = rng.uniform(-0.95, 0.95)
        state = InverseState.from_matrix(B)
        Cref = np.linalg.inv(toggle(B, i, j, mu))
        new = rank2_update(state, i, j, mu)
        assert np.abs(new.C - Cref).max() <= 1e-8
        assert abs(new.total - Cref.sum()) <= 1e-8
        assert abs(toggled_grw_sum(state, i, j, mu) - Cref.sum()) <= 1e-8


def test_update_and_undo():
    B = random_symmetric(6, 3)
    state = InverseState.from_matrix(B)
    C0 = state.C.copy()
    total0 = state.total
    rank2_update_inplace(state, 1, 4, 0.7)
    rank2_update_inplace(state, 1, 4, -0.7)
    assert np.allclose(state.C, C0, atol=1e-10)
    assert state.total == approx(total0, rel=1e-10)


def test_restricted_chain():
    n = 9
    B = random_symmetric(n, 7)
    full = InverseState.from_matrix(B)
    indices = [1, 3, 4, 8]
    sub = full.restricted(indices)
    assert sub.partial
    assert sub.total == full.total

    # Updates given as positions in the restricted state
    updates = [(0, 2, 0.3), (1, 3, -0.2), (0, 3, 0.1)]
    rank2_chain(sub, updates)
    for a, b, mu in updates:
        B = toggle(B, indices[a], indices[b], mu)
    Cref = np.linalg.inv(B)
    assert np.allclose(sub.C, Cref[np.ix_(indices, indices)], atol=1e-9)
    assert list(sub.col_sums) == approx(list(Cref.sum(axis=0)[indices]), rel=1e-8)
    assert sub.total == approx(Cref.sum(), rel=1e-8)
    assert sub.is_consistent()


def test_toggled_sum_examples():
    assert toggled_grw_sum(InverseState.from_matrix(np.eye(3)), 0, 1, 0.0) == 3
    state = InverseState.from_matrix(np.eye(2))
    assert toggled_grw_sum(state, 0, 1, 0.5) == approx(4 / 3)


def test_sherman_morrison():
    rng = np.random.default_rng(5)
    A = random_symmetric(5, 5)
    u = rng.normal(size=5)
    v = rng.normal(size=5)
    expected = np.linalg.inv(A + np.outer(u, v))
    assert np.allclose(sherman_morrison(np.linalg.inv(A), u, v), expected)

    assert np.allclose(sherman_morrison(np.eye(3), np.zeros(3), np.zeros(3)), np.eye(3))
    e1 = np.array([1.0, 0.0])
    assert np.allclose(sherman_morrison(np.eye(2), e1, e1), np.diag([0.5, 1.0]))

    # 1 + v^T A^-1 u = 0
    with raises(SingularUpdate):
        sherman_morrison(np.eye(2), [1, 0], [-1, 0])


if __name__ == "__main__":
    run_tests(globals())
