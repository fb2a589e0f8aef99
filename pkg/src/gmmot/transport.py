"""Exact linear-programming solvers for discrete mass transport.

Two solvers live here:

* ``solve_transportation`` -- the classical two-marginal transportation
  problem, solved by a network simplex on the bipartite graph with a
  north-west-corner starting basis. Returns a vertex (basic feasible)
  optimal plan together with the dual potentials certifying optimality.
* ``solve_barycenter_lp`` -- the shared-marginal barycenter program: L
  transportation blocks whose row marginals are constrained to agree,
  solved as one dense equality-form LP by a two-phase primal simplex.

Both solvers are dependency-free by design; problem sizes in this package
are small enough that exact simplex pivoting beats any approximate scheme.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleMarginals, SolverError

__all__ = [
    "TransportationProblem",
    "Coupling",
    "solve_transportation",
    "BarycenterLP",
    "BarycenterLPSolution",
    "solve_barycenter_lp",
]

#: |sum(marginal) - 1| larger than this is an error; smaller is renormalized.
_MARGINAL_SUM_TOL = 1e-9

#: Entering-arc threshold on reduced costs.
_ENTER_TOL = 1e-10

#: Final dual-feasibility certificate threshold.
_DUAL_FEAS_TOL = 1e-9

#: Consecutive degenerate pivots tolerated before switching to Bland's rule.
_STALL_LIMIT = 64


def _check_marginal(vec, name: str) -> np.ndarray:
    vec = np.atleast_1d(np.asarray(vec, dtype=float))
    if vec.ndim != 1 or vec.size == 0:
        raise InfeasibleMarginals(f"{name} must be a nonempty vector")
    if not np.all(np.isfinite(vec)) or np.any(vec < 0):
        raise InfeasibleMarginals(f"{name} must be nonnegative and finite")
    total = vec.sum()
    if abs(total - 1.0) > _MARGINAL_SUM_TOL:
        raise InfeasibleMarginals(f"{name} sums to {total!r}, expected 1")
    return vec / total


@dataclass(frozen=True)
class TransportationProblem:
    """Marginals ``p`` (length N0), ``q`` (length N1) and an N0 x N1 cost."""

    p: np.ndarray
    q: np.ndarray
    cost: np.ndarray

    def __post_init__(self):
        p = _check_marginal(self.p, "p")
        q = _check_marginal(self.q, "q")
        cost = np.asarray(self.cost, dtype=float)
        if cost.shape != (p.size, q.size):
            raise DomainError(
                f"cost shape {cost.shape} does not match marginals "
                f"({p.size}, {q.size})"
            )
        if not np.all(np.isfinite(cost)) or np.any(cost < 0):
            raise DomainError("cost entries must be finite and nonnegative")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "cost", cost)


@dataclass(frozen=True)
class Coupling:
    """A transport plan with its cost and the certifying dual potentials."""

    plan: np.ndarray
    cost_value: float
    row_potentials: np.ndarray
    col_potentials: np.ndarray


def _northwest_corner(p: np.ndarray, q: np.ndarray):
    """Initial basic feasible staircase plan with exactly N0+N1-1 cells."""
    n0, n1 = p.size, q.size
    plan = np.zeros((n0, n1))
    basis = []
    a = p.copy()
    b = q.copy()
    i = j = 0
    while True:
        basis.append((i, j))
        x = min(a[i], b[j])
        plan[i, j] = x
        a[i] -= x
        b[j] -= x
        if i == n0 - 1 and j == n1 - 1:
            break
        if a[i] <= b[j] and i < n0 - 1:
            i += 1
        elif j < n1 - 1:
            j += 1
        else:
            i += 1
    return plan, basis


def _tree_potentials(cost, basis_adj, n0, n1):
    """Solve u_i + v_j = c_ij over the spanning tree of basic cells."""
    u = np.zeros(n0)
    v = np.zeros(n1)
    seen = [False] * (n0 + n1)
    seen[0] = True
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nb in basis_adj[node]:
            if seen[nb]:
                continue
            if node < n0:
                v[nb - n0] = cost[node, nb - n0] - u[node]
            else:
                u[nb] = cost[nb, node - n0] - v[node - n0]
            seen[nb] = True
            queue.append(nb)
    if not all(seen):
        raise SolverError("basis does not span the bipartite graph")
    return u, v


def _tree_path(basis_adj, start, goal):
    """Node path from start to goal along the basis tree."""
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nb in basis_adj[node]:
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    path = [goal]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def solve_transportation(prob: TransportationProblem, max_iter=None) -> Coupling:
    """Solve ``min <cost, plan>`` over couplings of ``p`` and ``q``.

    Network simplex with a north-west-corner starting basis. The entering
    arc is the most negative reduced cost; after a run of degenerate pivots
    the pivot choice switches to Bland's rule, which prevents cycling. The
    returned plan is a vertex of the transportation polytope (at most
    N0+N1-1 nonzero entries) and optimality is certified by dual
    feasibility of the potentials before returning.
    """
    p, q, cost = prob.p, prob.q, prob.cost
    n0, n1 = p.size, q.size
    if max_iter is None:
        max_iter = 1000 + 50 * (n0 + n1)

    plan, basis = _northwest_corner(p, q)
    basis_set = set(basis)
    basis_adj = [set() for _ in range(n0 + n1)]
    for i, j in basis:
        basis_adj[i].add(n0 + j)
        basis_adj[n0 + j].add(i)

    bland = False
    stall = 0
    for _ in range(max_iter):
        u, v = _tree_potentials(cost, basis_adj, n0, n1)
        reduced = cost - u[:, None] - v[None, :]
        if bland:
            mask = reduced.ravel() < -_ENTER_TOL
            if not mask.any():
                break
            flat = int(mask.argmax())
        else:
            flat = int(reduced.argmin())
            if reduced.ravel()[flat] >= -_ENTER_TOL:
                break
        ei, ej = divmod(flat, n1)

        path = _tree_path(basis_adj, ei, n0 + ej)
        cycle = []
        for a, b in zip(path, path[1:]):
            cell = (a, b - n0) if a < n0 else (b, a - n0)
            cycle.append(cell)
        minus = cycle[0::2]
        theta = min(plan[c] for c in minus)
        leaving = min(c for c in minus if plan[c] <= theta)
        for k, cell in enumerate(cycle):
            plan[cell] += theta if k % 2 else -theta
        plan[ei, ej] += theta
        plan[leaving] = 0.0

        basis_set.remove(leaving)
        basis_adj[leaving[0]].discard(n0 + leaving[1])
        basis_adj[n0 + leaving[1]].discard(leaving[0])
        basis_set.add((ei, ej))
        basis_adj[ei].add(n0 + ej)
        basis_adj[n0 + ej].add(ei)

        if theta <= 1e-15:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
        else:
            stall = 0
    else:
        raise SolverError(f"transportation simplex exceeded {max_iter} pivots")

    u, v = _tree_potentials(cost, basis_adj, n0, n1)
    worst = float((cost - u[:, None] - v[None, :]).min())
    if worst < -_DUAL_FEAS_TOL:
        raise SolverError(f"dual feasibility violated by {worst:.3e}")
    np.clip(plan, 0.0, None, out=plan)
    return Coupling(
        plan=plan,
        cost_value=float(np.sum(cost * plan)),
        row_potentials=u,
        col_potentials=v,
    )


# ---------------------------------------------------------------------------
# Dense two-phase simplex for the shared-marginal barycenter LP.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BarycenterLP:
    """L transportation blocks against a common support of size N.

    ``costs[k]`` is the N x N_k cost of moving support point i onto
    component j of marginal k; ``marginals[k]`` is that marginal;
    ``weights`` are the barycenter weights. The row-sum vectors of all L
    plans are constrained to coincide; that common vector is the barycenter
    weight vector being optimized.
    """

    costs: tuple
    marginals: tuple
    weights: np.ndarray

    def __post_init__(self):
        costs = tuple(np.asarray(c, dtype=float) for c in self.costs)
        if not costs:
            raise DomainError("barycenter LP needs at least one block")
        n_support = costs[0].shape[0]
        for c in costs:
            if c.ndim != 2 or c.shape[0] != n_support:
                raise DomainError("all cost matrices must share the support axis")
            if not np.all(np.isfinite(c)) or np.any(c < 0):
                raise DomainError("cost entries must be finite and nonnegative")
        marginals = tuple(
            _check_marginal(m, f"marginal {k}") for k, m in enumerate(self.marginals)
        )
        if len(marginals) != len(costs):
            raise DomainError("one marginal per cost block required")
        for c, m in zip(costs, marginals):
            if c.shape[1] != m.size:
                raise DomainError(
                    f"cost block {c.shape} incompatible with marginal {m.size}"
                )
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if weights.size != len(costs) or np.any(weights < 0):
            raise DomainError("weights must be a nonnegative vector, one per block")
        if abs(weights.sum() - 1.0) > _MARGINAL_SUM_TOL:
            raise DomainError(f"weights sum to {weights.sum()!r}, expected 1")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "marginals", marginals)
        object.__setattr__(self, "weights", weights / weights.sum())

    @property
    def support_size(self) -> int:
        return self.costs[0].shape[0]


@dataclass(frozen=True)
class BarycenterLPSolution:
    plans: tuple
    shared_marginal: np.ndarray
    objective: float
    dual_gap: float
    min_reduced_cost: float


def _simplex_pivot(tableau, obj, basis, row, col):
    pivot = tableau[row, col]
    tableau[row] /= pivot
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    obj -= obj[col] * tableau[row]
    basis[row] = col


def _simplex_phase(tableau, obj, basis, ncols, max_iter, tol=1e-10):
    """Run Bland's-rule simplex until no negative reduced cost remains.

    ``obj`` is the reduced-cost row (last entry = negative objective);
    columns at index >= ncols are never chosen to enter.
    """
    for _ in range(max_iter):
        candidates = np.nonzero(obj[:ncols] < -tol)[0]
        if candidates.size == 0:
            return
        col = int(candidates[0])
        column = tableau[:, col]
        rows = np.nonzero(column > tol)[0]
        if rows.size == 0:
            raise SolverError("LP is unbounded; constraints are inconsistent")
        ratios = tableau[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-9 * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _simplex_pivot(tableau, obj, basis, row, col)
    raise SolverError("simplex exceeded its pivot budget")


def _dense_lp(c, a, b, max_iter=None):
    """Two-phase primal simplex for ``min c.x : a x = b, x >= 0``.

    Returns the primal solution, the dual vector of the original rows
    (zeros on redundant rows) and the reduced costs ``c - a^T y``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = a.shape
    if max_iter is None:
        max_iter = 10000 + 50 * (m + n)

    flip = b < 0
    a_work = np.where(flip[:, None], -a, a)
    b_work = np.where(flip, -b, b)

    tableau = np.hstack([a_work, np.eye(m), b_work[:, None]])
    basis = list(range(n, n + m))
    obj = np.concatenate([-a_work.sum(axis=0), np.zeros(m), [-b_work.sum()]])
    _simplex_phase(tableau, obj, basis, n + m, max_iter)
    if -obj[-1] > 1e-9:
        raise InfeasibleMarginals(
            f"LP infeasible; artificial mass {-obj[-1]:.3e} remains"
        )

    keep_rows = []
    for row in range(m):
        if basis[row] < n:
            keep_rows.append(row)
            continue
        pivot_cols = np.nonzero(np.abs(tableau[row, :n]) > 1e-9)[0]
        if pivot_cols.size:
            _simplex_pivot(tableau, obj, basis, row, int(pivot_cols[0]))
            keep_rows.append(row)
        # else: redundant constraint; drop the row below.
    row_index = keep_rows
    tableau = tableau[row_index][:, list(range(n)) + [n + m]]
    basis = [basis[r] for r in row_index]

    obj = np.concatenate([c, [0.0]])
    for row, var in enumerate(basis):
        obj -= obj[var] * tableau[row]
    _simplex_phase(tableau, obj, basis, n, max_iter)

    x = np.zeros(n)
    for row, var in enumerate(basis):
        x[var] = tableau[row, -1]
    np.clip(x, 0.0, None, out=x)

    kept = [r for r in range(m) if r in set(row_index)]
    basis_matrix = a[kept][:, basis]
    duals_kept = np.linalg.solve(basis_matrix.T, c[basis])
    duals = np.zeros(m)
    duals[kept] = duals_kept
    reduced = c - a.T @ duals
    return x, duals, reduced


def solve_barycenter_lp(lp: BarycenterLP, max_iter=None) -> BarycenterLPSolution:
    """Solve the shared-marginal barycenter LP to a certified optimum.

    Stacks the L plan matrices into one variable vector; equality rows pin
    each block's column sums to its marginal and chain all row-sum vectors
    to the first block's. The solution carries the duality gap and the most
    negative reduced cost as the optimality certificate.
    """
    n = lp.support_size
    blocks = len(lp.costs)
    sizes = [m.size for m in lp.marginals]
    offsets = np.concatenate([[0], np.cumsum([n * nk for nk in sizes])])
    nvars = int(offsets[-1])

    rows = []
    rhs = []
    for k, (marg, nk) in enumerate(zip(lp.marginals, sizes)):
        for j in range(nk):
            row = np.zeros(nvars)
            row[offsets[k] + j : offsets[k + 1] : nk] = 1.0
            rows.append(row)
            rhs.append(marg[j])
    for k in range(1, blocks):
        for i in range(n):
            row = np.zeros(nvars)
            row[offsets[k] + i * sizes[k] : offsets[k] + (i + 1) * sizes[k]] = 1.0
            row[offsets[0] + i * sizes[0] : offsets[0] + (i + 1) * sizes[0]] -= 1.0
            rows.append(row)
            rhs.append(0.0)
    a = np.vstack(rows)
    b = np.asarray(rhs)
    c = np.concatenate(
        [lam * cost.ravel() for lam, cost in zip(lp.weights, lp.costs)]
    )

    x, duals, reduced = _dense_lp(c, a, b, max_iter=max_iter)

    objective = float(c @ x)
    dual_value = float(duals @ b)
    gap = abs(objective - dual_value)
    min_reduced = float(reduced.min())
    if min_reduced < -_DUAL_FEAS_TOL or gap > 1e-8:
        raise SolverError(
            f"optimality certificate failed (gap {gap:.3e}, "
            f"reduced cost {min_reduced:.3e})"
        )
    plans = tuple(
        x[offsets[k] : offsets[k + 1]].reshape(n, sizes[k]) for k in range(blocks)
    )
    shared = plans[0].sum(axis=1)
    return BarycenterLPSolution(
        plans=plans,
        shared_marginal=shared,
        objective=objective,
        dual_gap=gap,
        min_reduced_cost=min_reduced,
    )
