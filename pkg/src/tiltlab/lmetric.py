"""Walk metric on a quiver and the shift-vector lattice it cuts out.

For vertices i, j the value l(i, j) is the least number of forward arrows in
any walk from i to j that may traverse arrows backwards for free.  So
l(i, j) = 0 exactly when i = j or there is a directed path j -> i, and the
directed triangle inequality l(i, j) <= l(i, k) + l(k, j) always holds.

A shift vector r in Z_{>=0}^n with r_j <= r_i + l(i, j) for all i, j encodes
the module  T(r) = sum_i tau^{-r_i} P(i); by the vanishing criterion
(ext_vanishes below) these vectors are exactly the basic preprojective
tilting modules, ordered opposite to the componentwise order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .quiver import Quiver, doubled, min_degree_failure


@dataclass(frozen=True)
class LMatrix:
    n: int
    l: tuple[tuple[int, ...], ...]
    # carried so downstream gates can attest the source quiver's shape
    min_degree_ok: bool
    source: int | None  # the unique source, when there is one

    def __getitem__(self, i):
        return self.l[i]


def l_matrix(q: Quiver) -> LMatrix:
    """All-pairs walk metric via one 0/1-BFS per source vertex.

    Requires a normalized connected quiver; unreachable pairs (which can only
    come from a disconnected quiver) are an error.
    """
    n = q.n
    adj = doubled(q)
    rows = []
    for src in range(n):
        dist = [-1] * n
        dist[src] = 0
        dq = deque([src])
        while dq:
            x = dq.popleft()
            dx = dist[x]
            for y, w in adj[x]:
                nd = dx + w
                if dist[y] == -1 or nd < dist[y]:
                    dist[y] = nd
                    if w == 0:
                        dq.appendleft(y)
                    else:
                        dq.append(y)
        if any(d < 0 for d in dist):
            missing = dist.index(-1)
            raise ValidationError(
                "disconnected quiver: no walk from %d to %d" % (src, missing)
            )
        rows.append(tuple(dist))

    for i in range(n):
        assert rows[i][i] == 0

    from .quiver import sources

    srcs = sources(q)
    return LMatrix(
        n,
        tuple(rows),
        min_degree_ok=min_degree_failure(q) is None,
        source=srcs[0] if len(srcs) == 1 else None,
    )


def l_max(L: LMatrix) -> int:
    return max(max(row) for row in L.l)


def _require_min_degree(L: LMatrix):
    if not L.min_degree_ok:
        raise PreconditionError(
            "quiver has a vertex meeting fewer than two arrow ends; "
            "the preprojective component is not infinite there"
        )


def ext_vanishes(L: LMatrix, a, b) -> bool:
    """Whether Ext^1(tau^{-r}P(i), tau^{-s}P(j)) = 0, for a = (i, r), b = (j, s).

    The vanishing criterion is  r <= s + l(j, i).  Only valid over quivers
    where every vertex meets at least two arrow ends (caller gates via
    classify; the matrix carries the attestation).
    """
    (i, r), (j, s) = a, b
    _require_min_degree(L)
    if r < 0 or s < 0:
        raise PreconditionError("shifts must be >= 0 (preprojective range)")
    if not (0 <= i < L.n and 0 <= j < L.n):
        raise PreconditionError("vertex out of range")
    return r <= s + L.l[j][i]


def in_L(L: LMatrix, v) -> bool:
    """Membership of a nonnegative vector in the shift-vector lattice L(Q)."""
    _require_min_degree(L)
    if len(v) != L.n:
        raise PreconditionError("vector length %d != %d" % (len(v), L.n))
    if any(x < 0 for x in v):
        return False
    for i in range(L.n):
        li = L.l[i]
        vi = v[i]
        for j in range(L.n):
            if v[j] > vi + li[j]:
                return False
    return True
