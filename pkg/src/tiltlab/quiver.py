"""Core quiver type: parsing, normalization, classification, isomorphism.

A quiver is a finite directed multigraph.  Vertices are the integers
``0 .. n-1``; arrows are ``(source, target)`` pairs kept in a list, and the
position of an arrow in that list is its stable id (parallel arrows are just
repeated pairs).  Loops are rejected everywhere.

A quiver is *normalized* when every arrow points from a larger vertex to a
smaller one.  Normalized quivers are automatically acyclic, vertex 0 is a
sink, and when the quiver has a unique source that source is vertex ``n-1``.
All of the order-theoretic machinery downstream assumes this labelling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[tuple[int, int], ...]
    name: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("empty vertex set (need n >= 1)")
        object.__setattr__(self, "arrows", tuple((int(a), int(b)) for a, b in self.arrows))
        for aid, (a, b) in enumerate(self.arrows):
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValidationError(
                    "arrow %d: endpoint out of range (have %d vertices)" % (aid, self.n)
                )
            if a == b:
                raise ValidationError("arrow %d: loop at vertex %d not allowed" % (aid, a))

    def same_arrows(self, other: "Quiver") -> bool:
        """Equality as labeled quivers: same vertex count, same arrow multiset."""
        return self.n == other.n and sorted(self.arrows) == sorted(other.arrows)

    def multiplicity(self):
        """Arrow multiplicity map {(source, target): count}."""
        mult = {}
        for a in self.arrows:
            mult[a] = mult.get(a, 0) + 1
        return mult


@dataclass(frozen=True)
class VertexStar:
    """Per-vertex arrow incidence: ids of outgoing and incoming arrows."""

    out_ids: tuple[tuple[int, ...], ...]
    in_ids: tuple[tuple[int, ...], ...]


def vertex_star(q: Quiver) -> VertexStar:
    outs = [[] for _ in range(q.n)]
    ins = [[] for _ in range(q.n)]
    for aid, (a, b) in enumerate(q.arrows):
        outs[a].append(aid)
        ins[b].append(aid)
    return VertexStar(tuple(map(tuple, outs)), tuple(map(tuple, ins)))


def sources(q: Quiver):
    """Vertices with no incoming arrow."""
    has_in = [False] * q.n
    for _, b in q.arrows:
        has_in[b] = True
    return [x for x in range(q.n) if not has_in[x]]


def sinks(q: Quiver):
    """Vertices with no outgoing arrow."""
    has_out = [False] * q.n
    for a, _ in q.arrows:
        has_out[a] = True
    return [x for x in range(q.n) if not has_out[x]]


def is_connected(q: Quiver) -> bool:
    """Connectedness of the underlying undirected graph."""
    if q.n == 1:
        return True
    adj = [[] for _ in range(q.n)]
    for a, b in q.arrows:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * q.n
    stack = [0]
    seen[0] = True
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return all(seen)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def parse_quiver(text: str) -> Quiver:
    """Parse the plain-text quiver format (or its JSON mirror).

    Text format, one directive per line, '#' starts a comment::

        quiver c4          # optional, must precede everything else
        vertices 4
        arrow 3 2          # one line per arrow, parallels repeated

    JSON mirror: ``{"name": ..., "n": ..., "arrows": [[s, t], ...]}``.
    Raises ParseError with a line number on malformed input.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_quiver_json(text)

    name = None
    n = None
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "quiver":
            if len(parts) != 2:
                raise ParseError("expected 'quiver <name>'", lineno)
            if name is not None or n is not None or arrows:
                raise ParseError("'quiver' must be the first directive", lineno)
            name = parts[1]
        elif kw == "vertices":
            if n is not None:
                raise ParseError("duplicate 'vertices' directive", lineno)
            if len(parts) != 2:
                raise ParseError("expected 'vertices <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError("vertex count %r is not an integer" % parts[1], lineno)
            if n < 1:
                raise ParseError("empty vertex set (need n >= 1)", lineno)
        elif kw == "arrow":
            if n is None:
                raise ParseError("'arrow' before 'vertices'", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'arrow <src> <tgt>'", lineno)
            try:
                a, b = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("arrow endpoints must be integers", lineno)
            if not (0 <= a < n and 0 <= b < n):
                raise ParseError("arrow endpoint out of range 0..%d" % (n - 1), lineno)
            if a == b:
                raise ParseError("loop at vertex %d not allowed" % a, lineno)
            arrows.append((a, b))
        else:
            raise ParseError("unknown directive %r" % kw, lineno)
    if n is None:
        raise ParseError("missing 'vertices' directive")
    return Quiver(n, tuple(arrows), name)


def _parse_quiver_json(text: str) -> Quiver:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("bad JSON: %s" % e.msg, e.lineno)
    if not isinstance(obj, dict) or "n" not in obj:
        raise ParseError("JSON quiver needs at least {\"n\": ...}")
    try:
        n = int(obj["n"])
        arrows = tuple((int(a), int(b)) for a, b in obj.get("arrows", []))
    except (TypeError, ValueError):
        raise ParseError("JSON quiver: 'n' must be an int, 'arrows' a list of pairs")
    name = obj.get("name")
    try:
        return Quiver(n, arrows, name)
    except ValidationError as e:
        raise ParseError(str(e))


def format_quiver(q: Quiver) -> str:
    """Render in the text file format (inverse of parse_quiver up to comments)."""
    lines = []
    if q.name:
        lines.append("quiver %s" % q.name)
    lines.append("vertices %d" % q.n)
    for a, b in q.arrows:
        lines.append("arrow %d %d" % (a, b))
    return "\n".join(lines) + "\n"


def quiver_to_json(q: Quiver) -> str:
    obj = {"name": q.name, "n": q.n, "arrows": [list(a) for a in q.arrows]}
    return json.dumps(obj, sort_keys=True)


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def find_cycle(q: Quiver):
    """Return one directed cycle as a vertex list [v0, ..., vk, v0], or None."""
    adj = [[] for _ in range(q.n)]
    for a, b in q.arrows:
        adj[a].append(b)
    color = [0] * q.n  # 0 unseen, 1 on stack, 2 done
    parent = {}

    for root in range(q.n):
        if color[root]:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            x, it = stack[-1]
            advanced = False
            for y in it:
                if color[y] == 0:
                    color[y] = 1
                    parent[y] = x
                    stack.append((y, iter(adj[y])))
                    advanced = True
                    break
                if color[y] == 1:
                    # walk back from x to y along parents
                    cyc = [y, x]
                    z = x
                    while z != y:
                        z = parent[z]
                        cyc.append(z)
                    cyc.reverse()  # starts and ends at y
                    return cyc
            if not advanced:
                color[x] = 2
                stack.pop()
    return None


def normalize(q: Quiver):
    """Relabel so every arrow goes from a larger vertex to a smaller one.

    Labels are assigned 0, 1, 2, ... by repeatedly peeling the sink with the
    smallest original index.  The result is the lexicographically smallest
    topological order (ties broken by original index), it is deterministic,
    and quivers that are already normalized get the identity permutation.

    Returns (normalized quiver, perm) with perm[old] = new.
    Raises ValidationError on a directed cycle (reporting one cycle).
    """
    cyc = find_cycle(q)
    if cyc is not None:
        raise ValidationError(
            "directed cycle detected: %s" % " -> ".join(str(v) for v in cyc)
        )
    out_deg = [0] * q.n
    ins = [[] for _ in range(q.n)]
    for a, b in q.arrows:
        out_deg[a] += 1
        ins[b].append(a)
    import heapq

    ready = [x for x in range(q.n) if out_deg[x] == 0]
    heapq.heapify(ready)
    perm = [-1] * q.n
    label = 0
    while ready:
        x = heapq.heappop(ready)
        perm[x] = label
        label += 1
        for a in ins[x]:
            out_deg[a] -= 1
            if out_deg[a] == 0:
                heapq.heappush(ready, a)
    assert label == q.n
    arrows = tuple(sorted((perm[a], perm[b]) for a, b in q.arrows))
    return Quiver(q.n, arrows, q.name), tuple(perm)


def is_normalized(q: Quiver) -> bool:
    return all(a > b for a, b in q.arrows)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassFlags:
    unique_source: bool          # exactly one vertex without incoming arrows
    min_degree_ok: bool          # every vertex meets >= 2 arrow ends
    connected: bool
    l_le_1: bool                 # the walk metric never exceeds 1
    in_A_circ: bool              # lies in the image of the completion map
    in_S: bool                   # in_A_circ and no reduction step applies
    min_degree_witness: int | None = field(default=None, compare=False)

    def as_dict(self):
        return {
            "unique_source": self.unique_source,
            "min_degree_ok": self.min_degree_ok,
            "connected": self.connected,
            "l_le_1": self.l_le_1,
            "in_A_circ": self.in_A_circ,
            "in_S": self.in_S,
        }


def min_degree_failure(q: Quiver):
    """Smallest vertex meeting fewer than two arrow ends, or None."""
    deg = [0] * q.n
    for a, b in q.arrows:
        deg[a] += 1
        deg[b] += 1
    for x in range(q.n):
        if deg[x] < 2:
            return x
    return None


def classify(q: Quiver) -> ClassFlags:
    """Compute all class memberships of an acyclic quiver at once.

    `in_A_circ` is decided structurally: remove one source->y arrow per sink
    y and check the remainder is a connected single-source quiver whose
    completion returns q.  `in_S` additionally requires that no reduction
    step applies (see structure.leadsto_step).
    """
    from .lmetric import l_matrix, l_max
    from .structure import is_completion_image, leadsto_step

    uniq_src = len(sources(q)) == 1
    witness = min_degree_failure(q)
    conn = is_connected(q)
    if conn:
        lm = l_matrix(normalize(q)[0])
        l1 = l_max(lm) <= 1
    else:
        l1 = False
    in_ac = is_completion_image(q)
    in_s = in_ac and leadsto_step(q) is None
    return ClassFlags(uniq_src, witness is None, conn, l1, in_ac, in_s, witness)


def doubled(q: Quiver):
    """Weighted digraph used by the walk metric: every arrow contributes a
    forward arc of weight 1 and a reversed arc of weight 0.

    Returns an adjacency list adj[u] = [(v, w), ...].
    """
    adj = [[] for _ in range(q.n)]
    for a, b in q.arrows:
        adj[a].append((b, 1))
        adj[b].append((a, 0))
    return adj


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

def is_isomorphic(q1: Quiver, q2: Quiver):
    """Multigraph isomorphism test.

    Returns the lexicographically least vertex bijection (perm[v1] = v2) or
    None.  Plain backtracking over vertices in order with degree-signature
    pruning; the quivers here are tiny.
    """
    if q1.n != q2.n or len(q1.arrows) != len(q2.arrows):
        return None
    n = q1.n
    m1 = q1.multiplicity()
    m2 = q2.multiplicity()

    def signature(mult, n):
        outs = [[] for _ in range(n)]
        ins = [[] for _ in range(n)]
        for (a, b), c in mult.items():
            outs[a].append(c)
            ins[b].append(c)
        return [(tuple(sorted(outs[x])), tuple(sorted(ins[x]))) for x in range(n)]

    sig1 = signature(m1, n)
    sig2 = signature(m2, n)
    if sorted(sig1) != sorted(sig2):
        return None

    perm = [-1] * n
    used = [False] * n

    def extend(v):
        if v == n:
            return True
        for w in range(n):
            if used[w] or sig1[v] != sig2[w]:
                continue
            ok = True
            for u in range(v):
                if m1.get((v, u), 0) != m2.get((w, perm[u]), 0):
                    ok = False
                    break
                if m1.get((u, v), 0) != m2.get((perm[u], w), 0):
                    ok = False
                    break
            if ok:
                perm[v] = w
                used[w] = True
                if extend(v + 1):
                    return True
                used[w] = False
                perm[v] = -1
        return False

    if extend(0):
        return tuple(perm)
    return None
