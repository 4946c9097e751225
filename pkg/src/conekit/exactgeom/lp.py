"""Exact feasibility for small linear systems.

A dense phase-one simplex over :class:`~fractions.Fraction` with Bland's
rule.  Problems handled here are desk-sized (a few dozen rows and columns),
so the tableau is dense but elimination skips zero entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .rational import Vector, dot

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(tab: list[list[Fraction]], obj: list[Fraction], basis: list[int], leave: int, enter: int) -> None:
    prow = tab[leave]
    inv = _ONE / prow[enter]
    if inv != 1:
        prow = [a * inv if a else a for a in prow]
        tab[leave] = prow
    nz = [j for j, a in enumerate(prow) if a]
    for i, t in enumerate(tab):
        if i != leave:
            f = t[enter]
            if f:
                for j in nz:
                    t[j] -= f * prow[j]
    f = obj[enter]
    if f:
        for j in nz:
            obj[j] -= f * prow[j]
    basis[leave] = enter


def _run(tab: list[list[Fraction]], obj: list[Fraction], basis: list[int], ncols: int) -> bool:
    """Bland's rule on columns ``< ncols``; ``False`` when unbounded."""
    width = len(obj) - 1
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return True
        leave = None
        best = None
        for i, t in enumerate(tab):
            a = t[enter]
            if a > 0:
                r = t[width] / a
                if best is None or r < best or (r == best and basis[i] < basis[leave]):
                    best, leave = r, i
        if leave is None:
            return False
        _pivot(tab, obj, basis, leave, enter)


def _phase_one(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], nvars: int) -> list[Fraction] | None:
    """Find ``x >= 0`` with ``rows @ x == rhs`` or return ``None``."""
    found = _phase_one_tableau(rows, rhs, nvars)
    if found is None:
        return None
    tab, basis = found
    return _basic_solution(tab, basis, nvars)


def _basic_solution(tab, basis, nvars) -> list[Fraction]:
    x = [_ZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = tab[i][-1]
    return x


def _phase_one_tableau(rows, rhs, nvars):
    m = len(rows)
    if m == 0:
        return [], []
    width = nvars + m
    tab: list[list[Fraction]] = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        # rows are scaled to a canonical sign so that negating the whole
        # problem leaves the tableau, and hence the basic solution, unchanged
        lead = next((a for a in row if a), _ZERO)
        sign = -1 if b < 0 or (b == 0 and lead < 0) else 1
        t = [sign * a for a in row] + [_ZERO] * m + [sign * b]
        t[nvars + i] = _ONE
        tab.append(t)
    basis = [nvars + i for i in range(m)]
    obj = [_ZERO] * (width + 1)
    for t in tab:
        for j in range(nvars):
            if t[j]:
                obj[j] -= t[j]
        obj[width] -= t[width]

    if not _run(tab, obj, basis, width):  # cannot happen: phase one is bounded
        raise ArithmeticError("unbounded phase-one problem")
    if obj[width] != 0:
        return None
    return tab, basis


def nonnegative_solution(columns: Sequence[Vector], target: Vector, convex: bool = False) -> list[Fraction] | None:
    """Coefficients ``lam >= 0`` with ``sum lam_i columns[i] == target``.

    With ``convex`` the coefficients must also sum to one.  The returned
    solution is basic, so its support is linearly independent.
    """
    n = len(target)
    rows = [[c[i] for c in columns] for i in range(n)]
    rhs = list(target)
    if convex:
        rows.append([_ONE] * len(columns))
        rhs.append(_ONE)
    return _phase_one(rows, rhs, len(columns))


def min_cost_solution(columns: Sequence[Vector], target: Vector,
                      cost: Sequence[Fraction]) -> list[Fraction] | None:
    """Nonnegative ``lam`` with ``sum lam_i columns[i] == target`` minimizing
    ``cost . lam`` (two-phase simplex); ``None`` when infeasible or
    unbounded below."""
    nvars = len(columns)
    rows = [[c[i] for c in columns] for i in range(len(target))]
    found = _phase_one_tableau(rows, list(target), nvars)
    if found is None:
        return None
    tab, basis = found
    width = nvars + len(rows)
    # drive artificial columns out of the basis; rows where that is
    # impossible are redundant
    for i in reversed(range(len(tab))):
        if basis[i] >= nvars:
            j = next((j for j in range(nvars) if tab[i][j]), None)
            if j is None:
                del tab[i], basis[i]
            else:
                _pivot(tab, [_ZERO] * (width + 1), basis, i, j)
    obj = [Fraction(c) for c in cost] + [_ZERO] * (width - nvars + 1)
    for t, b in zip(tab, basis):
        f = obj[b]
        if f:
            obj = [o - f * a for o, a in zip(obj, t)]
    if not _run(tab, obj, basis, nvars):
        return None
    return _basic_solution(tab, basis, nvars)


@dataclass
class LinearSystem:
    """Rows ``a.x = b`` (equalities), ``a.x >= b`` (weak), ``a.x > b`` (strict)."""

    dim: int
    equalities: list[tuple[Vector, Fraction]] = field(default_factory=list)
    weak: list[tuple[Vector, Fraction]] = field(default_factory=list)
    strict: list[tuple[Vector, Fraction]] = field(default_factory=list)

    def __post_init__(self) -> None:
        for a, _ in self.rows():
            if len(a) != self.dim:
                raise ValueError(f"row of length {len(a)} in a system of dimension {self.dim}")

    def rows(self):
        yield from self.equalities
        yield from self.weak
        yield from self.strict

    def is_homogeneous(self) -> bool:
        return all(b == 0 for _, b in self.rows())

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        return (
            all(dot(a, x) == b for a, b in self.equalities)
            and all(dot(a, x) >= b for a, b in self.weak)
            and all(dot(a, x) > b for a, b in self.strict)
        )


def feasible(system: LinearSystem) -> Vector | None:
    """Exact witness for ``system`` or ``None`` when it is infeasible.

    Strict rows are only accepted in homogeneous systems, where ``a.x > 0``
    can be replaced by ``a.x >= 1`` without changing feasibility.
    """
    if system.strict and not system.is_homogeneous():
        raise ValueError("strict rows require a homogeneous system")
    d = system.dim
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = len(system.weak) + len(system.strict)
    k = 0

    def add(a: Vector, b: Fraction, slack: bool) -> None:
        nonlocal k
        row = list(a) + [-x for x in a] + [_ZERO] * nslack
        if slack:
            row[2 * d + k] = -_ONE
            k += 1
        rows.append(row)
        rhs.append(b)

    for a, b in system.equalities:
        add(a, b, False)
    for a, b in system.weak:
        add(a, b, True)
    for a, _ in system.strict:
        add(a, _ONE, True)
    sol = _phase_one(rows, rhs, 2 * d + nslack)
    if sol is None:
        return None
    x = tuple(sol[i] - sol[d + i] for i in range(d))
    if not system.satisfied_by(x):  # pragma: no cover - solver invariant
        raise ArithmeticError("phase-one witness does not satisfy the system")
    return x
