# Compiled inner loops shared by ambiguity, lp and ofvf.
import numpy as np
from numba import njit

OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT, SINGULAR = 0, 1, 2, 3, 4


@njit(cache=True)
def l1_response(center, psi, z):
    """Maximise p.z over {p in simplex : |p - center|_1 <= psi}.

    Moves up to psi/2 mass onto the best state, taking it from the worst
    states first.
    """
    S = center.shape[0]
    p = center.copy()
    order = np.argsort(z)
    best = order[S - 1]
    moved = min(0.5 * psi, 1.0 - p[best])
    if moved > 0.0:
        p[best] += moved
        left = moved
        for i in range(S - 1):
            j = order[i]
            if j == best:
                continue
            take = min(p[j], left)
            p[j] -= take
            left -= take
            if left <= 0.0:
                break
    value = 0.0
    for i in range(S):
        value += p[i] * z[i]
    return value, p


@njit(cache=True)
def l1_response_value(center, psi, z):
    S = center.shape[0]
    order = np.argsort(z)
    best = order[S - 1]
    moved = min(0.5 * psi, 1.0 - center[best])
    value = 0.0
    for i in range(S):
        value += center[i] * z[i]
    if moved > 0.0:
        value += moved * z[best]
        left = moved
        for i in range(S - 1):
            j = order[i]
            if j == best:
                continue
            take = min(center[j], left)
            value -= take * z[j]
            left -= take
            if left <= 0.0:
                break
    return value


@njit(cache=True)
def ball_extremes(centers, radii, zs, sign):
    """Extreme value of p.z over each (s, a) ball for a stack of vectors.

    centers (S, A, S), radii (S, A), zs (S, A, K, S) -> (S, A, K)
    """
    S, A, K = zs.shape[0], zs.shape[1], zs.shape[2]
    out = np.empty((S, A, K))
    for s in range(S):
        for a in range(A):
            for k in range(K):
                out[s, a, k] = sign * l1_response_value(centers[s, a], radii[s, a], sign * zs[s, a, k])
    return out


@njit(cache=True)
def sample_projections(batch, zs):
    """p.z for every sample p of batch (S, A, N, S) and z of zs (S, A, K, S) -> (S, A, K, N)."""
    S, A, N, D = batch.shape
    K = zs.shape[2]
    out = np.empty((S, A, K, N))
    for s in range(S):
        for a in range(A):
            proj = np.ascontiguousarray(batch[s, a]) @ np.ascontiguousarray(zs[s, a]).T
            out[s, a] = proj.T
    return out


@njit(cache=True)
def sample_quantiles(batch, zs, rank):
    """rank-th smallest of p.z over the samples, per (s, a, k) -> (S, A, K)."""
    S, A, N, D = batch.shape
    K = zs.shape[2]
    out = np.empty((S, A, K))
    for s in range(S):
        for a in range(A):
            proj = np.ascontiguousarray(np.ascontiguousarray(batch[s, a]) @ np.ascontiguousarray(zs[s, a]).T).T
            for k in range(K):
                out[s, a, k] = select(proj[k], rank)
    return out


@njit(cache=True)
def select(x, rank):
    """rank-th smallest entry of x (0-based)."""
    n = x.shape[0]
    size = min(rank + 1, n - rank)
    if size > 32:
        return np.partition(x, rank)[rank]
    # keep the `size` most extreme values on the side nearer to rank in a sorted buffer
    sgn = 1.0 if rank + 1 <= n - rank else -1.0
    buf = np.empty(size)
    filled = 0
    for i in range(n):
        v = sgn * x[i]
        if filled == size:
            if v >= buf[size - 1]:
                continue
            j = size - 1
        else:
            j = filled
            filled += 1
        while j > 0 and buf[j - 1] > v:
            buf[j] = buf[j - 1]
            j -= 1
        buf[j] = v
    return sgn * buf[size - 1]


@njit(cache=True)
def coverage_fractions(batch, zs, top, sign, tol):
    """Share of samples p with sign * (top - p.z) >= -tol, per (s, a, k)."""
    S, A, N, D = batch.shape
    K = zs.shape[2]
    out = np.empty((S, A, K))
    for s in range(S):
        for a in range(A):
            proj = np.ascontiguousarray(batch[s, a]) @ np.ascontiguousarray(zs[s, a]).T
            for k in range(K):
                hits = 0
                for n in range(N):
                    if sign * (top[s, a, k] - proj[n, k]) >= -tol:
                        hits += 1
                out[s, a, k] = hits / N
    return out


@njit(cache=True)
def robust_value_iteration(rewards, centers, radii, terminal, horizon, discount, sign):
    """Backward induction with an (s, a)-rectangular L1-ball backup.

    sign = +1 maximises over each ball, -1 minimises; actions are always
    chosen greedily with ties going to the lowest index.
    """
    S, A = rewards.shape[0], rewards.shape[1]
    V = np.empty((horizon + 1, S))
    V[horizon] = terminal
    policy = np.empty((horizon, S), dtype=np.int64)
    z = np.empty(S)
    for h in range(horizon - 1, -1, -1):
        for s in range(S):
            best = -np.inf
            best_a = 0
            for a in range(A):
                for j in range(S):
                    z[j] = sign * (rewards[s, a, j] + discount * V[h + 1, j])
                q = sign * l1_response_value(centers[s, a], radii[s, a], z)
                if q > best:
                    best = q
                    best_a = a
            V[h, s] = best
            policy[h, s] = best_a
    return V, policy


@njit(cache=True)
def l1_project(p, z, g):
    """Closest point (in L1) to p on the slice {q in simplex : q.z = g}.

    Returns (q, distance). Assumes min(z) <= g <= max(z).
    """
    S = p.shape[0]
    q = p.copy()
    cur = 0.0
    for i in range(S):
        cur += p[i] * z[i]
    gap = g - cur
    if gap == 0.0:
        return q, 0.0
    # to lower p.z mirror the problem
    sgn = 1.0 if gap > 0.0 else -1.0
    need = sgn * gap
    order = np.argsort(sgn * z)
    top = order[S - 1]
    ztop = sgn * z[top]
    moved = 0.0
    for i in range(S - 1):
        j = order[i]
        gain = ztop - sgn * z[j]
        if gain <= 0.0 or q[j] <= 0.0:
            continue
        take = min(q[j], need / gain)
        q[j] -= take
        moved += take
        need -= take * gain
        if need <= 0.0:
            break
    q[top] += moved
    return q, 2.0 * moved


# --------------------------------------------------------------------------
# dense tableau simplex: min c.x  s.t.  A x = b, x >= 0


@njit(cache=True)
def _pivot(T, row, col):
    piv = T[row, col]
    ncol = T.shape[1]
    for j in range(ncol):
        T[row, j] /= piv
    T[row, col] = 1.0
    for i in range(T.shape[0]):
        if i == row:
            continue
        f = T[i, col]
        if f != 0.0:
            for j in range(ncol):
                T[i, j] -= f * T[row, j]
            T[i, col] = 0.0


@njit(cache=True)
def _refactor(T, basis, aug, cost):
    """Rebuild the tableau from the original system for the current basis."""
    m = T.shape[0] - 1
    ncol = T.shape[1]
    B = np.empty((m, m))
    for i in range(m):
        for k in range(m):
            B[i, k] = aug[i, basis[k]]
    try:
        Binv = np.linalg.inv(B)
    except Exception:
        return False
    for i in range(m):
        for j in range(ncol):
            acc = 0.0
            for k in range(m):
                acc += Binv[i, k] * aug[k, j]
            T[i, j] = acc
    for i in range(m):
        for k in range(m):
            T[k, basis[i]] = 1.0 if k == i else 0.0
        if T[i, ncol - 1] < 0.0:
            T[i, ncol - 1] = 0.0
    _price(T, basis, cost)
    return True


@njit(cache=True)
def _price(T, basis, cost):
    """Objective row of the tableau: reduced costs and minus the objective."""
    m = T.shape[0] - 1
    ncol = T.shape[1]
    for j in range(ncol - 1):
        T[m, j] = cost[j]
    T[m, ncol - 1] = 0.0
    for i in range(m):
        ck = cost[basis[i]]
        if ck != 0.0:
            for j in range(ncol):
                T[m, j] -= ck * T[i, j]
    for i in range(m):
        T[m, basis[i]] = 0.0


@njit(cache=True)
def _verify(T, basis, n_allowed, aug, cost, tol, ftol):
    """Recompute x_B and the reduced costs from the original system.

    If the basis is still optimal and feasible, store them in the RHS column
    and the objective row and return True; the tableau body is left as is.
    """
    m = T.shape[0] - 1
    ncol = T.shape[1]
    rhs = ncol - 1
    B = np.empty((m, m))
    for i in range(m):
        for k in range(m):
            B[i, k] = aug[i, basis[k]]
    try:
        Binv = np.linalg.inv(B)
    except Exception:
        return False
    xb = np.zeros(m)
    y = np.zeros(m)
    for i in range(m):
        for k in range(m):
            xb[i] += Binv[i, k] * aug[k, rhs]
            y[k] += cost[basis[i]] * Binv[i, k]
    for i in range(m):
        if xb[i] < -ftol:
            return False
    red = np.empty(ncol - 1)
    for j in range(ncol - 1):
        r = cost[j]
        for k in range(m):
            r -= y[k] * aug[k, j]
        red[j] = r
        if j < n_allowed and r < -tol:
            return False
    obj = 0.0
    for i in range(m):
        T[i, rhs] = max(xb[i], 0.0)
        obj += cost[basis[i]] * xb[i]
    for j in range(ncol - 1):
        T[m, j] = red[j]
    for i in range(m):
        T[m, basis[i]] = 0.0
    T[m, rhs] = -obj
    return True


@njit(cache=True)
def _iterate(T, basis, n_allowed, aug, cost, tol, max_iter):
    m = T.shape[0] - 1
    rhs = T.shape[1] - 1
    ptol = 1e-7  # smallest admissible pivot element
    ftol = 1e-9  # primal feasibility slack for the Harris ratio test
    stall = 0
    since = 0
    fresh = False
    for _ in range(max_iter):
        if since >= 50:
            if not _refactor(T, basis, aug, cost):
                return SINGULAR
            since = 0
            fresh = True
        col = -1
        bland = stall > m
        if bland:
            # Bland's rule while degenerate pivots pile up
            for j in range(n_allowed):
                if T[m, j] < -tol:
                    col = j
                    break
        else:
            best = -tol
            for j in range(n_allowed):
                if T[m, j] < best:
                    best = T[m, j]
                    col = j
        if col < 0:
            if fresh or _verify(T, basis, n_allowed, aug, cost, tol, ftol):
                return OPTIMAL
            if not _refactor(T, basis, aug, cost):
                return SINGULAR
            since = 0
            fresh = True
            continue
        bound = np.inf
        for i in range(m):
            if T[i, col] > ptol:
                r = (T[i, rhs] + ftol) / T[i, col]
                if r < bound:
                    bound = r
        if bound == np.inf:
            if not fresh:
                if not _refactor(T, basis, aug, cost):
                    return SINGULAR
                since = 0
                fresh = True
                continue
            if T[m, col] > -1e-7:
                # a round-off-negative reduced cost on a zero-cost ray (such as a
                # split free variable) is not a genuine improving direction
                T[m, col] = 0.0
                continue
            return UNBOUNDED
        row = -1
        if bland:
            # textbook minimum ratio with lowest-index ties keeps Bland's guarantee
            best_ratio = np.inf
            for i in range(m):
                d = T[i, col]
                if d > ptol:
                    r = T[i, rhs] / d
                    if r < best_ratio or (r == best_ratio and basis[i] < basis[row]):
                        best_ratio = r
                        row = i
        else:
            # Harris: largest pivot element among rows within the relaxed bound
            big = 0.0
            for i in range(m):
                d = T[i, col]
                if d > ptol and T[i, rhs] / d <= bound:
                    if d > big:
                        big = d
                        row = i
        if T[row, rhs] / T[row, col] <= tol:
            stall += 1
        else:
            stall = 0
        _pivot(T, row, col)
        basis[row] = col
        for i in range(m):
            if T[i, rhs] < 0.0:
                T[i, rhs] = 0.0
        since += 1
        fresh = False
    return ITERATION_LIMIT


@njit(cache=True)
def simplex(c, A, b, tol=1e-10):
    """Two-phase tableau simplex.

    Returns (status, x, objective, duals) where duals are the equality-row
    multipliers y with c - A^T y >= 0 at optimality.
    """
    m, n = A.shape
    aug = np.zeros((m, n + m + 1))
    flip = np.ones(m)
    for i in range(m):
        if b[i] < 0.0:
            flip[i] = -1.0
        for j in range(n):
            aug[i, j] = flip[i] * A[i, j]
        aug[i, n + i] = 1.0
        aug[i, n + m] = flip[i] * b[i]
    T = np.zeros((m + 1, n + m + 1))
    T[:m] = aug
    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        basis[i] = n + i
    # phase 1: minimise the sum of artificials
    cost = np.zeros(n + m)
    cost[n:] = 1.0
    _refactor(T, basis, aug, cost)  # identity basis, cannot fail
    max_iter = 50 * (n + m) + 1000
    status = _iterate(T, basis, n + m, aug, cost, tol, max_iter)
    x = np.zeros(n)
    duals = np.zeros(m)
    if status != OPTIMAL:
        return status, x, np.nan, duals
    scale = 1.0
    for i in range(m):
        scale = max(scale, abs(aug[i, n + m]))
    if -T[m, n + m] > 1e-9 * scale:
        return INFEASIBLE, x, np.nan, duals
    # drive zero-level artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            best = 0.0
            col = -1
            for j in range(n):
                if abs(T[i, j]) > best:
                    best = abs(T[i, j])
                    col = j
            if col >= 0 and best > 1e-7:
                _pivot(T, i, col)
                basis[i] = col
    # phase 2 with artificials barred from entering; their columns stay as B^-1
    cost[:n] = c
    cost[n:] = 0.0
    if not _refactor(T, basis, aug, cost):
        return SINGULAR, x, np.nan, duals
    status = _iterate(T, basis, n, aug, cost, tol, max_iter)
    if status != OPTIMAL:
        return status, x, np.nan, duals
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, n + m]
    obj = 0.0
    for j in range(n):
        obj += c[j] * x[j]
    for i in range(m):
        # reduced cost of artificial i is -y_i in the flipped system
        duals[i] = -T[m, n + i] * flip[i]
    return OPTIMAL, x, obj, duals


@njit(cache=True)
def simplex_from_units(c, A, b, units, tol=1e-8):
    """Single-phase simplex for systems that carry their own starting basis.

    Column units[i] of A must be the unit vector e_i and b must be
    nonnegative, so the unit columns form a feasible basis and no first
    phase is needed. Returns (status, x, objective, duals) like simplex.

    The right-hand side is perturbed by distinct amounts of order 1e-9 to
    break the ties behind degenerate cycling. The duals of the final basis
    stay feasible whatever b is; x and the objective belong to the
    perturbed system.
    """
    m, n = A.shape
    aug = np.zeros((m, n + 1))
    aug[:, :n] = A
    for i in range(m):
        aug[i, n] = b[i] + 1e-9 * (1.0 + (0.6180339887498949 * (i + 1)) % 1.0) * (1.0 + abs(b[i]))
    T = np.zeros((m + 1, n + 1))
    T[:m] = aug  # B is the identity
    basis = units.copy()
    _price(T, basis, c)
    status = _iterate(T, basis, n, aug, c, tol, 50 * n + 1000)
    x = np.zeros(n)
    duals = np.zeros(m)
    if status != OPTIMAL:
        return status, x, np.nan, duals
    for i in range(m):
        x[basis[i]] = T[i, n]
    obj = 0.0
    for j in range(n):
        obj += c[j] * x[j]
    for i in range(m):
        # the reduced cost of the unit column e_i is c - y_i
        duals[i] = c[units[i]] - T[m, units[i]]
    return OPTIMAL, x, obj, duals


# --------------------------------------------------------------------------
# minimax L1 centre of a family of simplex slices


@njit(cache=True)
def distance_cuts(zn, gn, snap):
    """Affine minorants whose maximum is the L1 distance to a slice.

    zn is normalised to span [0, 1] and gn lies in [0, 1]. For p in the
    simplex, dist(p, {q : q.zn = gn}) = max(0, max_j const_j + w_j . p).
    Every w_j is nonnegative with a zero entry, and cuts that are
    nonpositive on the whole simplex are left out.
    """
    S = zn.shape[0]
    W = np.empty((2 * S, S))
    const = np.empty(2 * S)
    levels = np.unique(zn)
    m = 0
    for u in levels:
        if u < 1.0 - snap:
            # mass flows from states at or below u up to the top state
            lam = 2.0 / (1.0 - u)
            for s in range(S):
                W[m, s] = min(-lam * zn[s], 2.0 - lam)
            const[m] = lam * gn
            m += 1
        if u > snap:
            # mass flows from states at or above u down to the bottom state
            lam = 2.0 / u
            for s in range(S):
                W[m, s] = min(lam * zn[s], 2.0)
            const[m] = -lam * gn
            m += 1
    # on the simplex w.p + c = (w - k).p + c + k, so shift each row to minimum 0;
    # rows that are nonpositive on the whole simplex never beat the zero floor
    kept = 0
    for r in range(m):
        k = W[r].min()
        if const[r] + W[r].max() <= 0.0:
            continue
        for s in range(S):
            W[kept, s] = W[r, s] - k
        const[kept] = const[r] + k
        kept += 1
    return W[:kept], const[:kept]


@njit(cache=True)
def plane_cuts(z, g, snap=1e-7):
    """distance_cuts for the raw plane z.p = g (z non-constant)."""
    S = z.shape[0]
    lo = z.min()
    span = z.max() - lo
    zn = np.empty(S)
    for s in range(S):
        v = (z[s] - lo) / span
        if v < snap:
            v = 0.0
        elif v > 1.0 - snap:
            v = 1.0
        zn[s] = v
    gn = min(max((g - lo) / span, 0.0), 1.0)
    return distance_cuts(zn, gn, snap)


@njit(cache=True)
def _stack_cuts(Z, g, snap):
    """Cuts of every plane behind the trivial cut t >= 0 (row 0)."""
    k, S = Z.shape
    W = np.zeros((1 + 2 * S * k, S))
    a = np.zeros(1 + 2 * S * k)
    m = 1
    for i in range(k):
        Wi, ai = plane_cuts(Z[i], g[i], snap)
        for r in range(Wi.shape[0]):
            W[m] = Wi[r]
            a[m] = ai[r]
            m += 1
    return W[:m], a[:m]


@njit(cache=True)
def _stage_one(W, a):
    """min t s.t. t >= a_j + W_j.p over the simplex, through the game dual.

    Row 0 of W must be the trivial cut (zeros, a_0 = 0) and W >= 0, which
    makes the multiplier w of sum(p) = 1 nonnegative at the optimum.
    columns: w, sigma (S), y (m); rows: sum(y) = 1, w - (W^T y)_s + sigma_s = 0
    """
    m, S = W.shape
    yoff = 1 + S
    n1 = yoff + m
    A1 = np.zeros((S + 1, n1))
    b1 = np.zeros(S + 1)
    c1 = np.zeros(n1)
    b1[0] = 1.0
    c1[0] = -1.0
    for s in range(S):
        A1[1 + s, 0] = 1.0
        A1[1 + s, 1 + s] = 1.0
    for j in range(m):
        A1[0, yoff + j] = 1.0
        c1[yoff + j] = -a[j]
        for s in range(S):
            A1[1 + s, yoff + j] = -W[j, s]
    units = np.empty(S + 1, dtype=np.int64)
    units[0] = yoff  # the trivial cut
    for s in range(S):
        units[1 + s] = 1 + s
    status, _, obj, y = simplex_from_units(c1, A1, b1, units)
    p = np.empty(S)
    if status != OPTIMAL:
        p[:] = np.nan
        return status, p, np.nan
    for s in range(S):
        p[s] = max(-y[1 + s], 0.0)
    # distances are nonnegative; drop round-off below zero
    return OPTIMAL, p / p.sum(), max(-obj, 0.0)


@njit(cache=True)
def _stage_two(W, a, t, nominal):
    """min |p - nominal|_1 s.t. a_j + W_j.p <= t + slack over the simplex, through its dual.

    With W >= 0 the multiplier of sum(p) = 1 is at least -1 at the
    optimum; nu is that multiplier plus one.
    columns: alpha (S), beta (S), nu, rho (S), kappa (S), y (m)
    """
    m, S = W.shape
    cap = t + 1e-9 * max(1.0, abs(t))
    nu = 2 * S
    rho = nu + 1
    kap = rho + S
    yoff = kap + S
    n2 = yoff + m
    A2 = np.zeros((2 * S, n2))
    b2 = np.zeros(2 * S)
    c2 = np.zeros(n2)
    for s in range(S):
        A2[s, s] = 1.0
        A2[s, S + s] = 1.0
        A2[s, rho + s] = 1.0
        b2[s] = 1.0
        A2[S + s, s] = -1.0
        A2[S + s, S + s] = 1.0
        A2[S + s, nu] = 1.0
        A2[S + s, kap + s] = 1.0
        b2[S + s] = 1.0
        for j in range(m):
            A2[S + s, yoff + j] = -W[j, s]
        c2[s] = nominal[s]
        c2[S + s] = -nominal[s]
    c2[nu] = -1.0
    for j in range(m):
        c2[yoff + j] = cap - a[j]
    units = np.empty(2 * S, dtype=np.int64)
    for s in range(S):
        units[s] = rho + s
        units[S + s] = kap + s
    status, _, _, y2 = simplex_from_units(c2, A2, b2, units)
    q = np.empty(S)
    if status != OPTIMAL:
        q[:] = np.nan
        return status, q
    for s in range(S):
        q[s] = max(-y2[S + s], 0.0)
    tot = q.sum()
    if tot <= 0.0:
        return SINGULAR, q
    return OPTIMAL, q / tot


@njit(cache=True)
def center_from_cuts(W, a, nominal, use_nominal):
    """Minimax centre from stacked cuts (row 0 the trivial cut). Returns (status, p, t)."""
    status, p, t = _stage_one(W, a)
    if status != OPTIMAL or not use_nominal:
        return status, p, t
    status2, q = _stage_two(W, a, t, nominal)
    if status2 == OPTIMAL:
        p = q
    # otherwise keep the stage-one centre; it attains the optimal radius
    return OPTIMAL, p, t


@njit(cache=True)
def minimax_center(Z, g, nominal, use_nominal, snap=1e-7):
    """Centre p of the smallest L1 ball meeting every slice {q : Z[i].q = g[i]}.

    Every row of Z must be non-constant. When use_nominal is set, ties
    among optimal centres go to the one closest (L1) to nominal.
    Returns (status, p, t).
    """
    W, a = _stack_cuts(Z, g, snap)
    return center_from_cuts(W, a, nominal, use_nominal)


@njit(cache=True)
def max_distance(Z, g, p):
    """Largest exact L1 distance from p to the slices {q : Z[i].q = g[i]}."""
    worst = 0.0
    for i in range(Z.shape[0]):
        d = l1_project(p, Z[i], g[i])[1]
        if d > worst:
            worst = d
    return worst


@njit(cache=True)
def _gather_cuts(W, a, cstart, chosen):
    """Trivial cut followed by the cuts of the chosen planes."""
    m = 1
    for i in range(chosen.shape[0]):
        if chosen[i]:
            m += cstart[i + 1] - cstart[i]
    Ws = np.zeros((m, W.shape[1]))
    As = np.zeros(m)
    r = 1
    for i in range(chosen.shape[0]):
        if chosen[i]:
            for j in range(cstart[i], cstart[i + 1]):
                Ws[r] = W[j]
                As[r] = a[j]
                r += 1
    return Ws, As


@njit(cache=True)
def add_planes(Zstore, gstore, count, Wstore, astore, cstart,
               centers, radii, nominal, newZ, newG, flat_tol, check_tol):
    """Append non-flat planes per (s, a) and refit every ball that misses one.

    Zstore (S, A, cap, S) and gstore (S, A, cap) hold count[s, a] planes;
    Wstore and astore hold their distance cuts, plane i owning rows
    cstart[s, a, i]:cstart[s, a, i + 1]. newZ (S, A, K, S) and newG (S, A, K)
    are the candidates. Returns OPTIMAL unless some centre LP failed.
    """
    S, A, K = newG.shape
    for s in range(S):
        for a in range(A):
            stale = False
            for k in range(K):
                z = newZ[s, a, k]
                lo = z.min()
                hi = z.max()
                if hi - lo <= flat_tol * max(1.0, max(abs(lo), abs(hi))):
                    continue
                gk = min(max(newG[s, a, k], lo), hi)
                c = count[s, a]
                Zstore[s, a, c] = z
                gstore[s, a, c] = gk
                count[s, a] = c + 1
                Wi, ai = plane_cuts(z, gk)
                m = cstart[s, a, c]
                for r in range(Wi.shape[0]):
                    Wstore[s, a, m + r] = Wi[r]
                    astore[s, a, m + r] = ai[r]
                cstart[s, a, c + 1] = m + Wi.shape[0]
                if not stale:
                    # the current ball stays optimal if it already meets the new plane
                    d = l1_project(centers[s, a], z, gk)[1]
                    stale = d > radii[s, a] + check_tol
            if not stale:
                continue
            c = count[s, a]
            if c == 1:
                centers[s, a] = l1_project(nominal[s, a], Zstore[s, a, 0], gstore[s, a, 0])[0]
                radii[s, a] = 0.0
                continue
            Ws, As = _gather_cuts(Wstore[s, a], astore[s, a], cstart[s, a], np.ones(c, dtype=np.bool_))
            status, p, _ = center_from_cuts(Ws, As, nominal[s, a], True)
            radius = max_distance(Zstore[s, a, :c], gstore[s, a, :c], p)
            if status != OPTIMAL:
                return status
            centers[s, a] = p
            radii[s, a] = min(radius, 2.0)
    return OPTIMAL
