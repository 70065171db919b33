"""Integer linear algebra for membership in finitely generated abelian groups."""

from __future__ import annotations

from typing import Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp


def solve_integer(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Find integers ``c`` with ``sum(c[j] * columns[j]) == target``, or None.

    >>> solve_integer([(2, 0), (0, 3)], (4, -3))
    [2, -1]
    >>> solve_integer([(2, 0)], (1, 0)) is None
    True
    """
    m = len(target)
    target = [int(x) for x in target]
    if not columns:
        return [] if all(x == 0 for x in target) else None
    if m == 0:
        return [0] * len(columns)
    A = Matrix(m, len(columns), lambda i, j: int(columns[j][i]))
    S, U, V = smith_normal_decomp(A)
    rhs = U * Matrix(target)
    y = [0] * len(columns)
    for i in range(m):
        s = S[i, i] if i < len(columns) else 0
        if s == 0:
            if rhs[i] != 0:
                return None
        else:
            if rhs[i] % s:
                return None
            y[i] = rhs[i] // s
    c = V * Matrix(y)
    return [int(x) for x in c]


def in_span(columns: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    return solve_integer(columns, target) is not None
