"""The tilting poset through its shift-vector shadow.

Everything here works on vectors in L(Q) (see lmetric.in_L); the module
T(v) = sum_i tau^{-v_i} P(i) is never materialized.  The order is opposite
componentwise: bigger tilting module = smaller vector, so Hasse edges
T -> T' (T > T') step one coordinate up by 1.

lk(v) below always means the poset of vectors with a pinned coordinate,
i.e. tiltings sharing the summand tau^{-r}P(i).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalCheckError, PreconditionError
from .lmetric import LMatrix, in_L, l_matrix
from .quiver import Quiver, is_normalized, normalize


def minimal_lk(L: LMatrix, i: int):
    """Vector of the minimum tilting module having P(i) as a summand.

    That minimum is sum_j tau^{-l(i,j)} P(j); row i of the walk metric.  The
    triangle inequality puts it in L(Q).
    """
    if not L.min_degree_ok:
        raise PreconditionError("min-degree condition fails; lk posets undefined")
    if not 0 <= i < L.n:
        raise PreconditionError("vertex %d out of range" % i)
    return tuple(L.l[i])


def enumerate_lk(L: LMatrix, i: int, r: int):
    """All v in L(Q) with v_i = r, sorted lexicographically.

    Depth-first assignment in decreasing vertex order; each new coordinate x
    is pruned to [max_j(v_j - l(x,j)), min_j(v_j + l(j,x))] over the already
    assigned j, which makes every completed assignment valid with no
    post-filter.
    """
    if not L.min_degree_ok:
        raise PreconditionError("min-degree condition fails; lk posets undefined")
    if not 0 <= i < L.n:
        raise PreconditionError("vertex %d out of range" % i)
    if r < 0:
        raise PreconditionError("shift must be >= 0")
    n = L.n
    order = [i] + [x for x in range(n - 1, -1, -1) if x != i]
    vec = [0] * n
    out = []

    def assign(k):
        if k == n:
            out.append(tuple(vec))
            return
        x = order[k]
        lo, hi = 0, None
        for j in order[:k]:
            vj = vec[j]
            lo = max(lo, vj - L.l[x][j])
            ub = vj + L.l[j][x]
            hi = ub if hi is None else min(hi, ub)
        if hi is None:
            lo = hi = r
        for val in range(lo, hi + 1):
            vec[x] = val
            assign(k + 1)
        vec[x] = 0

    assign(0)
    return sorted(out)


@dataclass(frozen=True)
class HasseGraph:
    nodes: tuple            # ShiftVectors, sorted by (source coordinate, lex)
    edges: tuple            # (u, v) index pairs; node[v] = node[u] + e_i
    component_of: tuple     # per node: its source coordinate
    source: int
    truncated: tuple = ()   # indices of nodes with a cut-off edge up the source axis

    def component(self, r):
        return [i for i, c in enumerate(self.component_of) if c == r]

    def to_json_dict(self):
        return {
            "nodes": [list(v) for v in self.nodes],
            "edges": [list(e) for e in self.edges],
            "component": list(self.component_of),
        }


def _covers_oracle(nodes):
    """Cover relations of (nodes, <=^op) computed straight from the order.

    u is covered by v (edge u -> v) when u < v componentwise-reversed and
    nothing sits strictly between.  Deliberately independent of the
    single-increment rule so the two can be compared.
    """
    ns = list(nodes)
    below = []
    for a in ns:
        for b in ns:
            if a != b and all(x <= y for x, y in zip(a, b)):
                below.append((a, b))
    below_set = set(below)
    covers = []
    for a, b in below:
        if any((a, c) in below_set and (c, b) in below_set for c in ns if c != a and c != b):
            continue
        covers.append((a, b))
    return covers


def hasse_edges(L: LMatrix, nodes, oracle: bool = False) -> HasseGraph:
    """Hasse diagram of a set of lattice vectors under the tilting order.

    Edges connect v to v + e_i whenever both are nodes.  With oracle=True the
    cover relations are recomputed from the bare order and compared; a
    mismatch is a bug in the edge rule (or a node set that is not closed
    enough for covers to be single steps).
    """
    nodes = list(nodes)
    for v in nodes:
        if not in_L(L, v):
            raise PreconditionError("node %r is not in L(Q)" % (v,))
    s = L.source if L.source is not None else L.n - 1
    ordered = sorted(set(nodes), key=lambda v: (v[s], v))
    index = {v: k for k, v in enumerate(ordered)}
    edges = []
    for k, v in enumerate(ordered):
        for i in range(L.n):
            w = v[:i] + (v[i] + 1,) + v[i + 1 :]
            if w in index:
                edges.append((k, index[w]))
    edges.sort()
    if oracle:
        expect = sorted((index[a], index[b]) for a, b in _covers_oracle(ordered))
        if expect != edges:
            raise InternalCheckError(
                "single-increment edges disagree with cover oracle: %r vs %r"
                % (edges, expect)
            )
    return HasseGraph(
        tuple(ordered),
        tuple(edges),
        tuple(v[s] for v in ordered),
        s,
    )


def tp_window(q: Quiver, R: int, oracle: bool = False) -> HasseGraph:
    """Finite window of the tilting poset: all v in L(Q) with v_s <= R.

    Needs a unique source s (which normalization puts at n-1) and the
    min-degree condition.  Nodes whose edge up the source axis leaves the
    window are flagged as truncated.
    """
    if not is_normalized(q):
        raise PreconditionError("quiver must be normalized")
    if R < 0:
        raise PreconditionError("shift bound must be >= 0")
    L = l_matrix(q)
    if L.source is None:
        raise PreconditionError("condition (a) fails: quiver has several sources")
    if not L.min_degree_ok:
        from .quiver import min_degree_failure

        raise PreconditionError(
            "condition (b) fails at vertex %d" % min_degree_failure(q)
        )
    s = L.source
    nodes = []
    for r in range(R + 1):
        nodes.extend(enumerate_lk(L, s, r))
    g = hasse_edges(L, nodes, oracle=oracle)
    truncated = []
    for k, v in enumerate(g.nodes):
        if v[s] == R:
            w = v[:s] + (v[s] + 1,) + v[s + 1 :]
            if in_L(L, w):
                truncated.append(k)
    return HasseGraph(g.nodes, g.edges, g.component_of, s, tuple(truncated))


def window_nodes_bruteforce(L: LMatrix, R: int):
    """Window node set recomputed with no pruning: scan the whole box
    prod_i [0, R + l(s, i) + 1] and keep what lies in L(Q) with v_s <= R."""
    import itertools

    s = L.source
    if s is None:
        raise PreconditionError("condition (a) fails: no unique source")
    ranges = [range(0, R + L.l[s][i] + 2) for i in range(L.n)]
    out = [
        v
        for v in itertools.product(*ranges)
        if v[s] <= R and in_L(L, v)
    ]
    return sorted(out, key=lambda v: (v[s], v))


def verify_window_oracle(q: Quiver, R: int, seed: int = 0, sample: int = 25):
    """Slow, independent re-derivations of a window.  Returns (ok, lines).

    - node set against the unpruned box scan;
    - edges against the order-theoretic cover oracle;
    - per node (sampled when large): the module certificate — all summand
      pairs have vanishing Ext both ways — and decrement probing: dropping
      any coordinate out of L(Q) must break the certificate.
    """
    import random

    from .knitting import ext_table

    g = tp_window(q, R)
    L = l_matrix(q)
    n = q.n
    lines = []
    ok = True

    brute = window_nodes_bruteforce(L, R)
    if tuple(brute) == g.nodes:
        lines.append("nodes==box-scan: PASS (%d nodes)" % len(g.nodes))
    else:
        ok = False
        lines.append("nodes==box-scan: FAIL")

    oracle_g = hasse_edges(L, list(g.nodes), oracle=True)  # raises on mismatch
    lines.append("edges==cover-oracle: PASS (%d edges)" % len(oracle_g.edges))

    max_dr = R + max(max(row) for row in L.l) + 1
    tabs = [ext_table(q, j, max_dr) for j in range(n)]

    def ext(i, r, j, s):
        return tabs[j][i + (r - s) * n] if r >= s else 0

    def certified(v):
        return all(
            ext(i, v[i], j, v[j]) == 0 and ext(j, v[j], i, v[i]) == 0
            for i in range(n)
            for j in range(i, n)
        )

    rng = random.Random(seed)
    nodes = list(g.nodes)
    if len(nodes) > sample:
        nodes = rng.sample(nodes, sample)
        nodes.sort()
    probes = 0
    for v in nodes:
        if not certified(v):
            ok = False
            lines.append("tilting-certificate: FAIL at %r" % (v,))
            break
        for k in range(n):
            if v[k] == 0:
                continue
            w = v[:k] + (v[k] - 1,) + v[k + 1 :]
            if not in_L(L, w):
                probes += 1
                if certified(w):
                    ok = False
                    lines.append("maximality-probe: FAIL at %r" % (w,))
                    break
        if not ok:
            break
    else:
        lines.append(
            "tilting-certificate: PASS (%d nodes, %d decrement probes)"
            % (len(nodes), probes)
        )
    return ok, lines


# ---------------------------------------------------------------------------
# the structure theorem, checked assertion by assertion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremReport:
    assertions: tuple   # (name, ok, detail)
    window: HasseGraph

    @property
    def ok(self):
        return all(a[1] for a in self.assertions)


def _connected(node_count, edge_pairs):
    if node_count == 0:
        return True
    adj = [[] for _ in range(node_count)]
    for u, v in edge_pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * node_count
    stack = [0]
    seen[0] = True
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return all(seen)


def verify_theorem_t(q: Quiver, R: int) -> TheoremReport:
    """Check the six structural assertions about the tilting poset window.

    (1) the window is partitioned by the source coordinate into lk-slices;
    (2) v -> v + (1,...,1) is a graph isomorphism from slice r to slice r+1;
    (3) every slice has at most 2^{n-1} nodes;
    (4) every slice is connected;
    (5) edges never decrease the source coordinate, and cross edges raise
        it by exactly 1;
    (6) the whole window is connected.
    """
    if R < 2:
        raise PreconditionError("shift bound must be >= 2 to see the structure")
    g = tp_window(q, R)
    L = l_matrix(q)
    s = g.source
    n = q.n
    results = []

    comp_nodes = {r: set() for r in range(R + 1)}
    for v in g.nodes:
        comp_nodes[v[s]].add(v)
    ok1 = True
    detail1 = ""
    total = 0
    for r in range(R + 1):
        slice_r = set(enumerate_lk(L, s, r))
        total += len(slice_r)
        if slice_r != comp_nodes.get(r, set()):
            ok1 = False
            detail1 = "slice r=%d mismatch" % r
            break
    if ok1 and total != len(g.nodes):
        ok1, detail1 = False, "slices overlap or miss nodes"
    results.append(("partition", ok1, detail1))

    index = {v: k for k, v in enumerate(g.nodes)}
    edge_set = set(g.edges)
    ok2, detail2 = True, ""
    one = tuple([1] * n)
    for r in range(R):
        shifted = {tuple(x + 1 for x in v) for v in comp_nodes[r]}
        if shifted != comp_nodes[r + 1]:
            ok2, detail2 = False, "node sets of slices %d and %d differ under +1" % (r, r + 1)
            break
        for u, v in g.edges:
            a, b = g.nodes[u], g.nodes[v]
            if a[s] == r and b[s] == r:
                a2 = tuple(x + 1 for x in a)
                b2 = tuple(x + 1 for x in b)
                if (index[a2], index[b2]) not in edge_set:
                    ok2, detail2 = False, "edge %r->%r has no translate" % (a, b)
                    break
        if not ok2:
            break
    results.append(("translation-isomorphism", ok2, detail2))

    bound = 2 ** (n - 1)
    sizes = [len(comp_nodes[r]) for r in range(R + 1)]
    ok3 = all(sz <= bound for sz in sizes)
    results.append(
        ("size-bound", ok3, "sizes %r vs bound %d" % (sizes, bound) if not ok3 else "max %d/%d" % (max(sizes), bound))
    )

    ok4, detail4 = True, ""
    for r in range(R + 1):
        ids = g.component(r)
        remap = {k: t for t, k in enumerate(ids)}
        intra = [(remap[u], remap[v]) for u, v in g.edges if u in remap and v in remap]
        if not _connected(len(ids), intra):
            ok4, detail4 = False, "slice r=%d disconnected" % r
            break
    results.append(("component-connectivity", ok4, detail4))

    ok5, detail5 = True, ""
    for u, v in g.edges:
        d = g.nodes[v][s] - g.nodes[u][s]
        if d not in (0, 1):
            ok5, detail5 = False, "edge %r->%r shifts source by %d" % (g.nodes[u], g.nodes[v], d)
            break
    results.append(("cross-edge-shift", ok5, detail5))

    ok6 = _connected(len(g.nodes), g.edges)
    results.append(("window-connectivity", ok6, "" if ok6 else "window splits"))

    return TheoremReport(tuple(results), g)


# ---------------------------------------------------------------------------
# order ideals of the path order on non-source vertices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PosetIdeal:
    members: frozenset

    def key(self):
        return (len(self.members), tuple(sorted(self.members)))


@dataclass(frozen=True)
class IdealReport:
    ideals: tuple           # PosetIdeal, sorted small-to-large
    vectors: tuple          # r_I per ideal, parallel to ideals
    ok: bool
    detail: str | None


def order_ideals(q: Quiver) -> IdealReport:
    """Downward-closed vertex sets of the path order, against the lk slice.

    The path order lives on the non-source vertices: i <= j iff there is a
    directed path i -> j.  Each ideal I maps to the vector r_I that is 0 on
    I and at the source, 1 elsewhere.  The report checks this is a bijection
    onto enumerate_lk(source, 0) reversing the orders.
    """
    from .structure import is_completion_image

    if not is_completion_image(q):
        raise PreconditionError("quiver is not a completion (no arrows source->sinks)")
    if q.n == 1:
        raise PreconditionError("the one-point quiver has no non-source side")
    if not is_normalized(q):
        q, _ = normalize(q)
    n = q.n
    s = n - 1
    reach = [[False] * n for _ in range(n)]
    for i in range(n):
        reach[i][i] = True
    for a in range(n):  # ascending source works: arrows go down
        for (x, y) in q.arrows:
            if x == a:
                for j in range(n):
                    if reach[y][j]:
                        reach[a][j] = True
    below = {
        j: [i for i in range(n - 1) if reach[i][j]] for j in range(n - 1)
    }

    ideals = []
    for mask in range(1 << (n - 1)):
        mem = {i for i in range(n - 1) if mask >> i & 1}
        if all(set(below[j]) <= mem for j in mem):
            ideals.append(PosetIdeal(frozenset(mem)))
    ideals.sort(key=PosetIdeal.key)

    vectors = tuple(
        tuple(0 if (j == s or j in I.members) else 1 for j in range(n))
        for I in ideals
    )

    L = l_matrix(q)
    lk0 = set(enumerate_lk(L, s, 0))
    ok = True
    detail = None
    if set(vectors) != lk0 or len(set(vectors)) != len(vectors):
        ok, detail = False, "r_I image differs from the lk slice"
    if ok:
        for a, I in enumerate(ideals):
            for b, J in enumerate(ideals):
                sub = I.members <= J.members
                geq = all(x >= y for x, y in zip(vectors[a], vectors[b]))
                if sub != geq:
                    ok = False
                    detail = "ideal inclusion %r vs %r does not reverse vectors" % (
                        sorted(I.members),
                        sorted(J.members),
                    )
                    break
            if not ok:
                break
    return IdealReport(tuple(ideals), vectors, ok, detail)
