"""Exact rational linear programming that always lands on a vertex.

Problems have the form::

    maximize    c . x
    subject to  A_ub x <= b_ub
                A_eq x == b_eq
                x >= 0

and are solved by a two-phase tableau simplex over :class:`Fraction` with
Bland's rule, so the answer is a basic feasible solution (a corner point)
and the method terminates on degenerate problems.  Every optimum comes with
a dual certificate that is checked before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Row = Tuple[Fraction, ...]
Constraint = Tuple[Row, Fraction]

_ZERO = Fraction(0)


def _row(values, n) -> Row:
    row = tuple(Fraction(v) for v in values)
    if len(row) != n:
        raise ValueError(f"constraint row has length {len(row)}, expected {n}")
    return row


@dataclass(frozen=True)
class LinearProgram:
    objective: Row
    inequalities: Tuple[Constraint, ...] = ()
    equalities: Tuple[Constraint, ...] = ()

    def __post_init__(self):
        objective = tuple(Fraction(v) for v in self.objective)
        n = len(objective)
        object.__setattr__(self, "objective", objective)
        object.__setattr__(
            self, "inequalities", tuple((_row(a, n), Fraction(b)) for a, b in self.inequalities)
        )
        object.__setattr__(
            self, "equalities", tuple((_row(a, n), Fraction(b)) for a, b in self.equalities)
        )

    @property
    def n(self) -> int:
        return len(self.objective)

    def gradient(self, tag) -> Row:
        """Row of the constraint named by a tight-set tag."""
        kind, k = tag
        if kind == "ub":
            return self.inequalities[k][0]
        if kind == "eq":
            return self.equalities[k][0]
        return tuple(Fraction(int(j == k)) for j in range(self.n))


class LPBuilder:
    """Assemble an LP from named variables and sparse rows.

    >>> b = LPBuilder()
    >>> x = b.var("x")
    >>> b.maximize({x: 1})
    >>> b.add_le({x: 1}, 1)
    >>> b.build().n
    1
    """

    def __init__(self):
        self.names: List[object] = []
        self.index = {}
        self._objective = {}
        self._ub: List[Tuple[dict, Fraction]] = []
        self._eq: List[Tuple[dict, Fraction]] = []

    def var(self, name) -> int:
        if name in self.index:
            raise KeyError(f"duplicate variable {name!r}")
        self.index[name] = len(self.names)
        self.names.append(name)
        return self.index[name]

    def maximize(self, terms: dict) -> None:
        self._objective = dict(terms)

    def add_le(self, terms: dict, rhs) -> int:
        self._ub.append((dict(terms), Fraction(rhs)))
        return len(self._ub) - 1

    def add_eq(self, terms: dict, rhs) -> int:
        self._eq.append((dict(terms), Fraction(rhs)))
        return len(self._eq) - 1

    def _dense(self, terms):
        row = [_ZERO] * len(self.names)
        for k, v in terms.items():
            row[k] += Fraction(v)
        return row

    def build(self) -> LinearProgram:
        return LinearProgram(
            self._dense(self._objective),
            [(self._dense(t), b) for t, b in self._ub],
            [(self._dense(t), b) for t, b in self._eq],
        )


@dataclass(frozen=True)
class VertexSolution:
    """Outcome of :func:`solve_lp`.

    When ``status`` is ``"optimal"`` the values are an exact optimal vertex.
    ``tight_set`` holds tags ``("ub", k)``, ``("eq", k)`` and ``("nonneg", k)``
    for every constraint met with equality.  ``dual_ub``/``dual_eq`` certify
    optimality.
    """

    status: str
    values: Tuple[Fraction, ...] = ()
    objective_value: Optional[Fraction] = None
    tight_set: FrozenSet[Tuple[str, int]] = frozenset()
    dual_ub: Tuple[Fraction, ...] = ()
    dual_eq: Tuple[Fraction, ...] = ()
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Fraction-free simplex tableau.

    Entries are integers sharing one positive denominator ``d``: the true
    tableau is ``rows / d``.  Each row carries its right-hand side as the last
    entry, and the objective row ``obj`` holds ``d`` times the reduced costs
    followed by ``-d`` times the objective value.  Pivoting uses the
    Bareiss update, whose divisions are exact, so no gcd work is needed.
    """

    def __init__(self, rows: List[List[int]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.d = 1
        self.obj: List[int] = []
        self.pivots = 0

    def rhs(self, r: int) -> Fraction:
        return Fraction(self.rows[r][-1], self.d)

    def reduced(self, j: int, scale: int = 1) -> Fraction:
        return Fraction(self.obj[j], self.d * scale)

    @property
    def value_numerator(self) -> int:
        return -self.obj[-1]

    def set_cost(self, cost: List[int]):
        d = self.d
        obj = [c * d for c in cost] + [0]
        for row, bv in zip(self.rows, self.basis):
            cb = cost[bv]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        obj[j] -= cb * v
        self.obj = obj

    def pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        d = self.d
        for i, row in enumerate(self.rows):
            if i != r:
                self.rows[i] = _bareiss(row, prow, p, row[c], d)
        self.obj = _bareiss(self.obj, prow, p, self.obj[c], d)
        if p < 0:
            self.rows = [[-v for v in row] for row in self.rows]
            self.obj = [-v for v in self.obj]
            p = -p
        self.d = p
        self.basis[r] = c
        self.pivots += 1

    def entering(self, allowed):
        # Bland: lowest-index improving column
        obj = self.obj
        for j in range(allowed):
            if obj[j] > 0:
                return j
        return None

    def leaving(self, c):
        best = None
        for i, row in enumerate(self.rows):
            a = row[c]
            if a > 0:
                if best is None:
                    best = i
                    continue
                brow = self.rows[best]
                # compare rhs_i / a with rhs_best / a_best; both pivots positive
                lhs, rhs = row[-1] * brow[c], brow[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
        return best

    def run(self, allowed) -> bool:
        """Pivot to optimality; False if the objective is unbounded."""
        while True:
            c = self.entering(allowed)
            if c is None:
                return True
            r = self.leaving(c)
            if r is None:
                return False
            self.pivot(r, c)


def _bareiss(row, prow, p, f, d):
    if f:
        return [(p * v - f * w) // d for v, w in zip(row, prow)]
    if p == d:
        return row
    return [p * v // d for v in row]


def _integer_row(values) -> Tuple[int, List[int]]:
    """Smallest positive multiplier making ``values`` integral, and the result."""
    scale = 1
    for v in values:
        scale = math.lcm(scale, v.denominator)
    return scale, [int(v * scale) for v in values]


def solve_lp(lp: LinearProgram) -> VertexSolution:
    """Solve ``lp`` exactly and return an optimal vertex or a failure status."""
    n = lp.n
    ub, eq = lp.inequalities, lp.equalities
    m_ub, m = len(ub), len(ub) + len(eq)

    # Column layout: x (n) | slacks (m_ub) | artificials (one per row lacking a slack basis)
    signs, needs_art = [], []
    for k, (a, b) in enumerate(list(ub) + list(eq)):
        signs.append(-1 if b < 0 else 1)
        needs_art.append(b < 0 or k >= m_ub)
    n_art = sum(needs_art)
    width = n + m_ub + n_art

    rows, basis, identity_col, row_scale = [], [], [], []
    art = n + m_ub
    for k, (a, b) in enumerate(list(ub) + list(eq)):
        scale, ints = _integer_row(list(a) + [b])
        sign = signs[k]
        row = [sign * v for v in ints[:-1]] + [0] * (m_ub + n_art) + [sign * ints[-1]]
        # slack columns are scaled with their row so the starting basis is the identity
        if k < m_ub:
            row[n + k] = sign
        if needs_art[k]:
            row[art] = 1
            basis.append(art)
            identity_col.append(art)
            art += 1
        else:
            basis.append(n + k)
            identity_col.append(n + k)
        rows.append(row)
        row_scale.append(sign * scale)

    tab = _Tableau(rows, basis)
    first_art = n + m_ub

    if n_art:
        tab.set_cost([0] * first_art + [-1] * n_art)
        tab.run(width)
        if tab.value_numerator < 0:
            return VertexSolution(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis where possible;
        # rows where that fails are redundant and keep their artificial at 0
        for r in range(m):
            if tab.basis[r] >= first_art:
                row = tab.rows[r]
                for j in range(first_art):
                    if row[j]:
                        tab.pivot(r, j)
                        break

    cost_scale, cost = _integer_row(lp.objective)
    tab.set_cost(cost + [0] * (m_ub + n_art))
    if not tab.run(first_art):
        return VertexSolution(UNBOUNDED, pivots=tab.pivots)

    values = [_ZERO] * n
    for r, bv in enumerate(tab.basis):
        if bv < n:
            values[bv] = tab.rhs(r)

    # duals: the reduced cost of row k's identity column is minus its dual,
    # which is then mapped back through the row's sign and scaling
    duals = [-tab.reduced(identity_col[k], cost_scale) * row_scale[k] for k in range(m)]
    dual_ub, dual_eq = tuple(duals[:m_ub]), tuple(duals[m_ub:])

    objective_value = sum((c * v for c, v in zip(lp.objective, values)), _ZERO)
    tight = set()
    for k, (a, b) in enumerate(ub):
        lhs = sum((ai * xi for ai, xi in zip(a, values) if ai), _ZERO)
        if lhs > b:
            raise AssertionError(f"simplex returned a point violating inequality {k}")
        if lhs == b:
            tight.add(("ub", k))
    for k, (a, b) in enumerate(eq):
        lhs = sum((ai * xi for ai, xi in zip(a, values) if ai), _ZERO)
        if lhs != b:
            raise AssertionError(f"simplex returned a point violating equality {k}")
        tight.add(("eq", k))
    for j, v in enumerate(values):
        if v < 0:
            raise AssertionError("simplex returned a negative variable")
        if v == 0:
            tight.add(("nonneg", j))

    solution = VertexSolution(
        OPTIMAL,
        tuple(values),
        objective_value,
        frozenset(tight),
        dual_ub,
        dual_eq,
        tab.pivots,
    )
    if not certificate_holds(lp, solution):
        raise AssertionError("dual certificate failed; solver bug")
    return solution


def certificate_holds(lp: LinearProgram, sol: VertexSolution) -> bool:
    """Check dual feasibility and zero duality gap, exactly."""
    if any(y < 0 for y in sol.dual_ub):
        return False
    for j in range(lp.n):
        col = _ZERO
        for (a, _), y in zip(lp.inequalities, sol.dual_ub):
            if y and a[j]:
                col += a[j] * y
        for (a, _), y in zip(lp.equalities, sol.dual_eq):
            if y and a[j]:
                col += a[j] * y
        if col < lp.objective[j]:
            return False
    dual_value = sum((b * y for (_, b), y in zip(lp.inequalities, sol.dual_ub)), _ZERO)
    dual_value += sum((b * y for (_, b), y in zip(lp.equalities, sol.dual_eq)), _ZERO)
    return dual_value == sol.objective_value


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix by exact Gaussian elimination."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return 0
    width = len(mat[0])
    rk = 0
    for col in range(width):
        pivot = next((i for i in range(rk, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rk], mat[pivot] = mat[pivot], mat[rk]
        prow = mat[rk]
        inv = 1 / prow[col]
        for i in range(rk + 1, len(mat)):
            f = mat[i][col]
            if f:
                f *= inv
                row = mat[i]
                for j in range(col, width):
                    if prow[j]:
                        row[j] -= f * prow[j]
        rk += 1
        if rk == len(mat):
            break
    return rk


def tight_rank(lp: LinearProgram, sol: VertexSolution) -> int:
    """Rank of the tight constraints' gradients at ``sol``.

    Variables sitting at zero contribute unit rows, so they are counted
    directly and only the remaining columns go through elimination.
    """
    zero = {k for kind, k in sol.tight_set if kind == "nonneg"}
    free = [j for j in range(lp.n) if j not in zero]
    rows = []
    for tag in sol.tight_set:
        if tag[0] == "nonneg":
            continue
        grad = lp.gradient(tag)
        rows.append([grad[j] for j in free])
    return len(zero) + (rank(rows) if free else 0)


def is_vertex(lp: LinearProgram, sol: VertexSolution) -> bool:
    return sol.optimal and tight_rank(lp, sol) == lp.n
