"""
Low-rank updates of symmetric matrix inverses.

For a symmetric invertible B with inverse C, and M = B + mu (e_i e_j^T + e_j e_i^T),
write g = 1 + mu c_ij and D = g^2 - mu^2 c_ii c_jj. If g != 0 and D != 0 then

    M^-1 = C - (mu / D) (g (C_i C_j^T + C_j C_i^T) - mu c_jj C_i C_i^T - mu c_ii C_j C_j^T)

where C_i is the i-th column of C. The conditions are sufficient but not
necessary: M can be invertible while g = 0, in which case SingularUpdate
is raised and the caller should invert directly.

The state keeps the column sums and the total sum of C up to date, so
that the sum of all entries of M^-1 (the geometric random walk kernel
value when B = I - lambda A_x) is available in O(1) after a toggle.
"""

import numpy as np
import scipy.linalg

from .._errors import SingularUpdate, InvalidArgument


SINGULAR_TOL = 1e-10
SHERMAN_MORRISON_TOL = 1e-12


class InverseState:
    """The maintained inverse C of a symmetric matrix B, with its column
    sums and total sum.

    A state created with ``restricted()`` keeps only the rows/columns of a
    subset of indices, while its col_sums and total still refer to the full
    matrix. Such a state supports the same updates, as long as all updated
    indices are in the subset.
    """

    __slots__ = ["C", "col_sums", "total", "partial"]

    def __init__(self, C, col_sums=None, total=None, partial=False):
        C = np.array(C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise InvalidArgument("InverseState needs a square matrix")
        self.C = C
        self.col_sums = C.sum(axis=0) if col_sums is None else np.array(col_sums, float)
        self.total = float(self.col_sums.sum()) if total is None else float(total)
        self.partial = bool(partial)

    @classmethod
    def from_matrix(cls, B):
        """Create the state by inverting the symmetric matrix B."""
        try:
            C = scipy.linalg.inv(np.asarray(B, float))
        except (np.linalg.LinAlgError, ValueError) as err:
            raise SingularUpdate(f"Cannot invert the base matrix: {err}")
        return cls(0.5 * (C + C.T))

    def copy(self):
        return InverseState(self.C.copy(), self.col_sums.copy(), self.total, self.partial)

    def restricted(self, indices):
        """Get a state that only holds the given indices. Position k in the
        new state corresponds to indices[k] in this one.
        """
        indices = np.asarray(indices, int)
        return InverseState(
            self.C[np.ix_(indices, indices)],
            self.col_sums[indices],
            self.total,
            partial=True,
        )

    def is_consistent(self, tol=1e-10):
        """Check symmetry of C and consistency of the sums (full states only)."""
        scale = max(1.0, float(np.abs(self.C).max(initial=0.0)))
        if np.abs(self.C - self.C.T).max(initial=0.0) > tol * scale:
            return False
        if self.partial:
            return True
        col_sums = self.C.sum(axis=0)
        ok_cols = np.abs(col_sums - self.col_sums).max(initial=0.0) <= tol * scale * len(col_sums)
        ok_total = abs(col_sums.sum() - self.total) <= tol * scale * self.C.size
        return bool(ok_cols and ok_total)

    def __repr__(self):
        kind = "partial " if self.partial else ""
        return f"<InverseState {kind}size={len(self.C)} total={self.total:g}>"


def _coefficients(state, i, j, mu):
    if i == j:
        raise InvalidArgument(f"Rank-2 update needs i != j, got i=j={i}")
    C = state.C
    cij, cii, cjj = C[i, j], C[i, i], C[j, j]
    g = 1.0 + mu * cij
    D = g * g - mu * mu * cii * cjj
    if abs(g) < SINGULAR_TOL:
        raise SingularUpdate(f"1 + mu c_ij = {g:g} is (close to) zero")
    if abs(D) < SINGULAR_TOL:
        raise SingularUpdate(f"(1 + mu c_ij)^2 - mu^2 c_ii c_jj = {D:g} is (close to) zero")
    return cii, cjj, g, D


def rank2_update_inplace(state, i, j, mu):
    """Update the state in place to the inverse of B + mu (e_i e_j^T + e_j e_i^T)."""
    cii, cjj, g, D = _coefficients(state, i, j, mu)
    C = state.C
    Ci = C[:, i].copy()
    Cj = C[:, j].copy()
    si, sj = state.col_sums[i], state.col_sums[j]
    f = mu / D
    # C -= f * (g (Ci Cj^T + Cj Ci^T) - mu cjj Ci Ci^T - mu cii Cj Cj^T)
    a = g * Cj - mu * cjj * Ci
    b = g * Ci - mu * cii * Cj
    C -= f * (np.outer(Ci, a) + np.outer(Cj, b))
    state.col_sums -= f * (Ci * (g * sj - mu * cjj * si) + Cj * (g * si - mu * cii * sj))
    state.total -= f * (2.0 * g * si * sj - mu * cjj * si * si - mu * cii * sj * sj)
    return state


def rank2_update(state, i, j, mu):
    """Get the state of (B + mu (e_i e_j^T + e_j e_i^T))^-1. The input
    state is not modified. Raises SingularUpdate near the singular cases.
    """
    return rank2_update_inplace(state.copy(), i, j, mu)


def rank2_chain(state, updates):
    """Apply a sequence of (i, j, mu) rank-2 updates in place. Used for
    perturbations that are a sum of symmetric rank-2 terms.
    """
    for i, j, mu in updates:
        rank2_update_inplace(state, i, j, mu)
    return state


def toggled_grw_sum(state, i, j, mu):
    """Get the sum of all entries of (B + mu (e_i e_j^T + e_j e_i^T))^-1
    without forming it, from c_ii, c_jj, c_ij, the column sums i and j and
    the total.
    """
    cii, cjj, g, D = _coefficients(state, i, j, mu)
    si, sj = state.col_sums[i], state.col_sums[j]
    f = mu / D
    return float(
        state.total - f * (2.0 * g * si * sj - mu * cjj * si * si - mu * cii * sj * sj)
    )


def sherman_morrison(Ainv, u, v):
    """Get (A + u v^T)^-1 from A^-1."""
    Ainv = np.asarray(Ainv, float)
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    Au = Ainv @ u
    vA = v @ Ainv
    denom = 1.0 + v @ Au
    if abs(denom) < SHERMAN_MORRISON_TOL:
        raise SingularUpdate(f"1 + v^T A^-1 u = {denom:g} is (close to) zero")
    return Ainv - np.outer(Au, vA) / denom
