"""
Dense two-phase simplex for small linear programs.

Minimize c^T x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.
Bland's rule picks both the entering and the leaving variable, so the pivot
sequence is deterministic and cannot cycle.
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from models import InfeasibleError, UnboundedError


@dataclass(frozen=True)
class LinearProgramResult:
    x: np.ndarray
    objective: float
    iterations: int


class SimplexSolver:
    def __init__(self, tol: float = 1e-11, max_iterations: int = 10_000):
        self.tol = tol
        self.max_iterations = max_iterations

    def minimize(
        self,
        c,
        A_ub=None,
        b_ub=None,
        A_eq=None,
        b_eq=None,
    ) -> LinearProgramResult:
        c = np.asarray(c, dtype=float)
        n = c.size
        A_ub, b_ub = self._block(A_ub, b_ub, n)
        A_eq, b_eq = self._block(A_eq, b_eq, n)
        m_ub, m_eq = b_ub.size, b_eq.size
        m = m_ub + m_eq

        A = np.vstack((A_ub, A_eq))
        b = np.concatenate((b_ub, b_eq))

        # Slack columns for the inequality rows
        slack = np.zeros((m, m_ub))
        slack[np.arange(m_ub), np.arange(m_ub)] = 1.0

        # Keep the right-hand side nonnegative
        flipped = b < 0
        A[flipped] *= -1
        slack[flipped] *= -1
        b = np.abs(b)

        # Rows without a usable slack start from an artificial variable
        needs_artificial = [i for i in range(m) if i >= m_ub or flipped[i]]
        artificial = np.zeros((m, len(needs_artificial)))
        for k, i in enumerate(needs_artificial):
            artificial[i, k] = 1.0

        n_real = n + m_ub
        T = np.zeros((m + 1, n_real + len(needs_artificial) + 1))
        T[:m, :n] = A
        T[:m, n:n_real] = slack
        T[:m, n_real:-1] = artificial
        T[:m, -1] = b

        basis = [n + i for i in range(m_ub)] + [0] * m_eq
        for k, i in enumerate(needs_artificial):
            basis[i] = n_real + k

        iterations = 0
        if needs_artificial:
            # Phase 1: minimize the sum of artificial variables
            T[-1, n_real:-1] = 1.0
            for i in needs_artificial:
                T[-1] -= T[i]
            iterations += self._iterate(T, basis, T.shape[1] - 1)
            if -T[-1, -1] > 1e-9:
                raise InfeasibleError("Linear program has no feasible point")
            T, basis = self._drop_artificials(T, basis, n_real)

        # Phase 2: price the real objective against the current basis
        T[-1] = 0.0
        T[-1, :n] = c
        for i, j in enumerate(basis):
            if T[-1, j] != 0.0:
                T[-1] -= T[-1, j] * T[i]
        iterations += self._iterate(T, basis, n_real)

        x = np.zeros(n_real)
        x[basis] = T[:-1, -1]
        x = np.maximum(x[:n], 0.0)
        return LinearProgramResult(x=x, objective=float(c @ x), iterations=iterations)

    @staticmethod
    def _block(A, b, n: int):
        if A is None:
            return np.zeros((0, n)), np.zeros(0)
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if A.shape != (b.size, n):
            raise ValueError(f"Constraint block has shape {A.shape}, expected ({b.size}, {n})")
        return A.copy(), b.copy()

    @staticmethod
    def _pivot(T: np.ndarray, row: int, col: int) -> None:
        T[row] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row])

    def _iterate(self, T: np.ndarray, basis: List[int], n_candidates: int) -> int:
        """Pivot until no reduced cost among the first n_candidates columns is negative"""
        for iteration in range(self.max_iterations):
            entering = np.flatnonzero(T[-1, :n_candidates] < -self.tol)
            if entering.size == 0:
                return iteration
            col = int(entering[0])

            column = T[:-1, col]
            rows = np.flatnonzero(column > self.tol)
            if rows.size == 0:
                raise UnboundedError("Linear program is unbounded")
            ratios = T[rows, -1] / column[rows]
            tied = rows[ratios <= ratios.min() + self.tol]
            row = int(min(tied, key=lambda r: basis[r]))

            self._pivot(T, row, col)
            basis[row] = col
        raise InfeasibleError(f"Simplex did not converge in {self.max_iterations} pivots")

    def _drop_artificials(self, T: np.ndarray, basis: List[int], n_real: int):
        """Pivot artificial variables out of the basis, dropping redundant rows"""
        keep = []
        for i in range(len(basis)):
            if basis[i] < n_real:
                keep.append(i)
                continue
            candidates = np.flatnonzero(np.abs(T[i, :n_real]) > self.tol)
            if candidates.size == 0:
                continue
            self._pivot(T, i, int(candidates[0]))
            basis[i] = int(candidates[0])
            keep.append(i)

        rows = keep + [T.shape[0] - 1]
        columns = list(range(n_real)) + [T.shape[1] - 1]
        return T[np.ix_(rows, columns)].copy(), [basis[i] for i in keep]


def linprog_min(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
                solver: Optional[SimplexSolver] = None) -> LinearProgramResult:
    return (solver or SimplexSolver()).minimize(c, A_ub, b_ub, A_eq, b_eq)
