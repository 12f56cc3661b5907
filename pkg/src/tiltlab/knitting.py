"""Dimension bookkeeping for the preprojective component.

Preprojective modules are indexed flat: m = x + r*n stands for tau^{-r}P(x).
Every arrow of the translation quiver of the component strictly increases m,
so tables can be filled in one pass of increasing m ("knitting").

Two tables are kept per reference vertex a:

    d_a(m) = dim Ext^1(M_m, P(a))    (ext_table)
    h_a(m) = dim Hom(P(a), M_m)      (hom_table)

where M_m is the m-th preprojective.  Both satisfy the same mesh recurrence

    f(x + r*n) = sum_{arrows x->y} f(y + r*n)
               + sum_{arrows z->x} f(z + (r-1)*n)
               - f(x + (r-1)*n)

coming from additivity on almost-split sequences; they differ only in the
seed (d: single 1 at m = a + n; h: path counts on the projective row).  The
two tables are tied together by the translation identity
d_a(m) = h_a(m - n), which check_consistency verifies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DIM_LIMIT,
    InternalCheckError,
    OverflowLimitError,
    PreconditionError,
)
from .lmetric import LMatrix, ext_vanishes, l_matrix
from .quiver import Quiver, is_normalized, min_degree_failure, vertex_star


def flat_index(n: int, x: int, r: int) -> int:
    return x + r * n

def split_index(n: int, m: int):
    return m % n, m // n


def _gate(q: Quiver):
    if not is_normalized(q):
        raise PreconditionError("quiver must be normalized (every arrow source > target)")
    bad = min_degree_failure(q)
    if bad is not None:
        raise PreconditionError(
            "condition (b) fails at vertex %d: fewer than two arrow ends" % bad
        )


def _check_value(v: int, m: int):
    if v > DIM_LIMIT:
        raise OverflowLimitError(
            "dimension at flat index %d exceeds 2^63-1; quiver grows too fast" % m
        )
    if v < 0:
        raise InternalCheckError(
            "mesh recurrence went negative at flat index %d" % m
        )


@dataclass(frozen=True)
class DimTable:
    vertex: int                  # the reference vertex a
    n: int
    max_shift: int               # table covers shifts 0 .. max_shift + 1
    values: tuple[int, ...]      # indexed by flat m, length (max_shift + 2) * n

    def __getitem__(self, m: int) -> int:
        return self.values[m]

    def at(self, x: int, r: int) -> int:
        return self.values[x + r * self.n]


def _knit(q: Quiver, seed_row, delta_at, R: int):
    """Shared mesh fill.  seed_row seeds shift 0; delta_at adds 1 at one m."""
    n = q.n
    star = vertex_star(q)
    total = (R + 2) * n
    vals = list(seed_row) + [0] * (total - n)
    for m in range(n, total):
        x, r = m % n, m // n
        acc = 0
        for aid in star.out_ids[x]:
            acc += vals[q.arrows[aid][1] + r * n]
        for aid in star.in_ids[x]:
            acc += vals[q.arrows[aid][0] + (r - 1) * n]
        acc -= vals[x + (r - 1) * n]
        if m == delta_at:
            acc += 1
        _check_value(acc, m)
        vals[m] = acc
    return tuple(vals)


def ext_table(q: Quiver, a: int, R: int) -> DimTable:
    """d_a(m) = dim Ext^1(M_m, P(a)) for flat m < (R + 2) * n."""
    _gate(q)
    if not (0 <= a < q.n):
        raise PreconditionError("vertex %d out of range" % a)
    if R < 0:
        raise PreconditionError("shift bound must be >= 0")
    vals = _knit(q, [0] * q.n, a + q.n, R)
    return DimTable(a, q.n, R, vals)


def path_count_matrix(q: Quiver):
    """C[j][i] = number of directed paths i -> j (trivial path included).

    Over a normalized quiver this is upper unitriangular, and column i is the
    dimension vector of the projective P(i).
    """
    if not is_normalized(q):
        raise PreconditionError("quiver must be normalized")
    n = q.n
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 1
        for (a, b) in q.arrows:
            if a == i:
                for j in range(n):
                    C[j][i] += C[j][b]
    return tuple(tuple(row) for row in C)


def hom_table(q: Quiver, a: int, R: int) -> DimTable:
    """h_a(m) = dim Hom(P(a), M_m) for flat m < (R + 2) * n.

    Seed row: h_a(x) = #paths x -> a, since Hom(P(a), P(x)) has the paths
    x -> a as a basis.
    """
    _gate(q)
    if not (0 <= a < q.n):
        raise PreconditionError("vertex %d out of range" % a)
    if R < 0:
        raise PreconditionError("shift bound must be >= 0")
    C = path_count_matrix(q)
    seed = [C[a][x] for x in range(q.n)]
    vals = _knit(q, seed, -1, R)
    return DimTable(a, q.n, R, vals)


def dim_vectors(q: Quiver, R: int):
    """Dimension vectors of M_m for flat m < (R + 2) * n, by the same mesh."""
    _gate(q)
    n = q.n
    star = vertex_star(q)
    C = path_count_matrix(q)
    total = (R + 2) * n
    dims = [tuple(C[j][x] for j in range(n)) for x in range(n)]
    for m in range(n, total):
        x, r = m % n, m // n
        acc = [0] * n
        for aid in star.out_ids[x]:
            for j in range(n):
                acc[j] += dims[q.arrows[aid][1] + r * n][j]
        for aid in star.in_ids[x]:
            for j in range(n):
                acc[j] += dims[q.arrows[aid][0] + (r - 1) * n][j]
        prev = dims[x + (r - 1) * n]
        for j in range(n):
            acc[j] -= prev[j]
            _check_value(acc[j], m)
        dims.append(tuple(acc))
    return dims


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CartanData:
    paths: tuple          # C[j][i] = #paths i -> j
    paths_inv: tuple      # exact integer inverse of C
    coxeter_inv: tuple    # Phi^{-1} = -C * C^{-T}; maps dim M_m to dim M_{m+n}


def cartan(q: Quiver) -> CartanData:
    C = path_count_matrix(q)
    n = q.n
    # C[j][i] != 0 only for j <= i (unitriangular), so C X = I solves by
    # back substitution with exact integers
    X = [[0] * n for _ in range(n)]
    for col in range(n):
        for row in range(n - 1, -1, -1):
            s = 1 if row == col else 0
            for k in range(row + 1, n):
                s -= C[row][k] * X[k][col]
            X[row][col] = s
    Cinv = tuple(tuple(r) for r in X)
    phi_inv = tuple(
        tuple(-sum(C[r][k] * Cinv[c][k] for k in range(n)) for c in range(n))
        for r in range(n)
    )
    return CartanData(C, Cinv, phi_inv)


def apply_matrix(M, v):
    return tuple(sum(M[r][c] * v[c] for c in range(len(v))) for r in range(len(M)))


def euler_form(q: Quiver, d, e) -> int:
    """<d, e> = sum_i d_i e_i - sum_{arrows i->j} d_i e_j."""
    if len(d) != q.n or len(e) != q.n:
        raise PreconditionError("dimension vectors must have length n")
    val = sum(di * ei for di, ei in zip(d, e))
    for a, b in q.arrows:
        val -= d[a] * e[b]
    return val


# ---------------------------------------------------------------------------
# pairwise dimensions and the big cross-check
# ---------------------------------------------------------------------------

def ext_dim(q: Quiver, a, b) -> int:
    """dim Ext^1(tau^{-r}P(i), tau^{-s}P(j)) for a = (i, r), b = (j, s).

    Translation-invariance reduces to the table: d_j(i + (r-s)*n) when
    r >= s; for r < s the first argument shifts back to a projective and the
    group vanishes.
    """
    (i, r), (j, s) = a, b
    if r < 0 or s < 0:
        raise PreconditionError("shifts must be >= 0")
    if r < s:
        _gate(q)
        return 0
    t = ext_table(q, j, r - s)
    return t[i + (r - s) * q.n]


def hom_dim(q: Quiver, a, b) -> int:
    """dim Hom(tau^{-r}P(i), tau^{-s}P(j)) for a = (i, r), b = (j, s).

    For r <= s this is h_i(j + (s-r)*n).  For r > s it vanishes: every
    nonzero map between preprojectives goes weakly up in flat order, and
    i + r*n > j + s*n whenever r > s.
    """
    (i, r), (j, s) = a, b
    if r < 0 or s < 0:
        raise PreconditionError("shifts must be >= 0")
    if r > s:
        _gate(q)
        return 0
    t = hom_table(q, i, s - r)
    return t[j + (s - r) * q.n]


@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    pairs_checked: int
    dims_checked: int
    tables_checked: int
    first_failure: str | None = None


def check_consistency(q: Quiver, R: int) -> ConsistencyReport:
    """Cross-verify every route to the same numbers, for all shifts <= R.

    1. hom - ext equals the Euler form of the dimension vectors, all pairs.
    2. ext == 0 exactly when the walk-metric criterion says so, all pairs.
    3. mesh-computed dimension vectors advance by the inverse Coxeter matrix.
    4. d_a(m) = h_a(m - n), and both tables are monotone along arrows:
       for an arrow x -> y,  f(y + r*n) <= f(x + r*n) <= f(y + (r+1)*n).
    """
    _gate(q)
    if R < 0:
        raise PreconditionError("shift bound must be >= 0")
    n = q.n
    L = l_matrix(q)
    ext_tabs = [ext_table(q, a, R) for a in range(n)]
    hom_tabs = [hom_table(q, a, R) for a in range(n)]
    dims = dim_vectors(q, R)
    cd = cartan(q)

    def fail(msg):
        return ConsistencyReport(False, pairs, dims_checked, tables, msg)

    pairs = 0
    dims_checked = 0
    tables = 0

    idx = [(i, r) for r in range(R + 1) for i in range(n)]
    for (i, r) in idx:
        for (j, s) in idx:
            pairs += 1
            if r >= s:
                ext = ext_tabs[j][i + (r - s) * n]
            else:
                ext = 0
            if r <= s:
                hom = hom_tabs[i][j + (s - r) * n]
            else:
                hom = 0
            eul = euler_form(q, dims[i + r * n], dims[j + s * n])
            if hom - ext != eul:
                return fail(
                    "hom-ext=%d but euler=%d at (%d,%d),(%d,%d)"
                    % (hom - ext, eul, i, r, j, s)
                )
            if (ext == 0) != ext_vanishes(L, (i, r), (j, s)):
                return fail(
                    "criterion disagrees with table at (%d,%d),(%d,%d): ext=%d"
                    % (i, r, j, s, ext)
                )

    phi_inv = cd.coxeter_inv
    for m in range(n, (R + 2) * n):
        dims_checked += 1
        if apply_matrix(phi_inv, dims[m - n]) != dims[m]:
            return fail("dim vector at flat %d is not Phi^{-1} of its translate" % m)

    for a in range(n):
        dt, ht = ext_tabs[a], hom_tabs[a]
        tables += 1
        for m in range(n, (R + 2) * n):
            if dt[m] != ht[m - n]:
                return fail("d_%d(%d) != h_%d(%d)" % (a, m, a, m - n))
        for (x, y) in q.arrows:
            for t in (dt, ht):
                for r in range(R + 1):
                    if not (t[y + r * n] <= t[x + r * n] <= t[y + (r + 1) * n]):
                        return fail(
                            "monotonicity fails for table a=%d along %d->%d at r=%d"
                            % (a, x, y, r)
                        )
    return ConsistencyReport(True, pairs, dims_checked, tables, None)
