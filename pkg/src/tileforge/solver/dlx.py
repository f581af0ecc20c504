"""Algorithm X with dancing links over flat integer arrays.

Column choice is minimum remaining rows, ties going to the leftmost column;
rows within a column are tried in insertion order.  The node count is the
number of rows tried, which makes budgets reproducible across backends.
"""

from __future__ import annotations

from typing import Sequence


class BudgetExhausted(Exception):
    pass


class DancingLinks:
    def __init__(self, n_cols: int, rows: Sequence[Sequence[int]]):
        n = n_cols + 1 + sum(len(r) for r in rows)
        self.L = L = [0] * n
        self.R = R = [0] * n
        self.U = U = list(range(n))
        self.D = D = list(range(n))
        self.C = C = [0] * n
        self.row_of = row_of = [-1] * n
        self.S = S = [0] * (n_cols + 1)
        # root is node 0, column headers are 1..n_cols
        for i in range(n_cols + 1):
            L[i] = i - 1 if i else n_cols
            R[i] = i + 1 if i < n_cols else 0
            C[i] = i
        node = n_cols + 1
        for r, cols in enumerate(rows):
            first = node
            for j, col in enumerate(cols):
                h = col + 1
                C[node] = h
                row_of[node] = r
                U[node] = U[h]
                D[node] = h
                D[U[h]] = node
                U[h] = node
                S[h] += 1
                L[node] = node - 1 if j else node + len(cols) - 1
                R[node] = node + 1 if j < len(cols) - 1 else first
                node += 1
        self.nodes = 0

    def _cover(self, c: int) -> None:
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        L[R[c]] = L[c]
        R[L[c]] = R[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                U[D[j]] = U[j]
                D[U[j]] = D[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def _uncover(self, c: int) -> None:
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                U[D[j]] = j
                D[U[j]] = j
                j = L[j]
            i = U[i]
        L[R[c]] = c
        R[L[c]] = c

    def search(self, budget: int | None = None) -> list[int] | None:
        """Return the row indices of the first exact cover found, or ``None``.

        Raises :class:`BudgetExhausted` once more than ``budget`` rows were tried.
        """
        R, D, C, S = self.R, self.D, self.C, self.S
        solution: list[int] = []

        def recurse() -> bool:
            if R[0] == 0:
                return True
            c = R[0]
            best, size = c, S[c]
            c = R[c]
            while c != 0 and size:
                if S[c] < size:
                    best, size = c, S[c]
                c = R[c]
            if size == 0:
                return False
            self._cover(best)
            r = D[best]
            while r != best:
                self.nodes += 1
                if budget is not None and self.nodes > budget:
                    raise BudgetExhausted
                solution.append(self.row_of[r])
                j = R[r]
                while j != r:
                    self._cover(C[j])
                    j = R[j]
                if recurse():
                    return True
                j = self.L[r]
                while j != r:
                    self._uncover(C[j])
                    j = self.L[j]
                solution.pop()
                r = D[r]
            self._uncover(best)
            return False

        return list(solution) if recurse() else None
