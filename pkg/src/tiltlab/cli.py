"""Command-line interface.

Every subcommand reads quivers from files (plain-text directives or the JSON
mirror; cubes as JSON).  Output is byte-deterministic: iteration happens over
sorted structures and randomized spot checks take an explicit --seed.

Exit codes: 0 success/answered query; 2 unparsable input; 3 precondition
(shape gate) violated; 4 a dimension left the checked 64-bit range; 5 an
internally verified property failed (always a bug or a falsified theorem).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (
    InternalCheckError,
    OverflowLimitError,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .knitting import check_consistency, ext_dim, hom_dim
from .lmetric import ext_vanishes, l_matrix
from .poset import (
    enumerate_lk,
    hasse_edges,
    order_ideals,
    tp_window,
    verify_theorem_t,
    verify_window_oracle,
)
from .quiver import classify, format_quiver, is_normalized, min_degree_failure, normalize, parse_quiver
from .structure import (
    cube_from_json_dict,
    decompose,
    equivalent,
    normal_form,
    psi,
    psi_inverse,
    same_tp,
    verify_commute,
    window_prefix_isomorphic,
)


def _read_quiver(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e.strerror))
    return parse_quiver(text)


def _read_cube(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e.strerror))
    except json.JSONDecodeError as e:
        raise ParseError("bad JSON in %s: %s" % (path, e.msg))
    return cube_from_json_dict(obj)


def _normalized(q, out):
    """Normalize for coordinate-based commands, announcing any relabeling."""
    if is_normalized(q):
        return q
    qn, perm = normalize(q)
    out("normalized: permutation %s" % list(perm))
    return qn


def _color_on():
    mode = os.environ.get("TILTLAB_COLOR", "auto")
    if mode == "never":
        return False
    return sys.stdout.isatty()


def _verdict(ok):
    word = "PASS" if ok else "FAIL"
    if _color_on():
        return "\x1b[32m%s\x1b[0m" % word if ok else "\x1b[31m%s\x1b[0m" % word
    return word


def _vec(v):
    return "(%s)" % ",".join(str(x) for x in v)


def _window_dot(g, title="tilting_window"):
    lines = ["digraph %s {" % title, '  rankdir="BT";', "  node [shape=box];"]
    for r in sorted(set(g.component_of)):
        lines.append("  subgraph cluster_%d {" % r)
        lines.append('    label="source shift %d";' % r)
        for idx in g.component(r):
            style = ", style=dashed" if idx in g.truncated else ""
            lines.append('    n%d [label="%s"%s];' % (idx, _vec(g.nodes[idx]), style))
        lines.append("  }")
    for u, v in g.edges:
        attr = " [style=dashed]" if g.component_of[u] != g.component_of[v] else ""
        lines.append("  n%d -> n%d%s;" % (u, v, attr))
    lines.append("}")
    return "\n".join(lines)


def _print_window_text(g, out):
    comps = sorted(set(g.component_of))
    out(
        "window: %d nodes, %d edges, %d components"
        % (len(g.nodes), len(g.edges), len(comps))
    )
    for r in comps:
        ids = g.component(r)
        out("component %d: %d nodes" % (r, len(ids)))
        for idx in ids:
            out(_vec(g.nodes[idx]))
    out("edges:")
    for u, v in g.edges:
        cross = " [cross]" if g.component_of[u] != g.component_of[v] else ""
        out("%s -> %s%s" % (_vec(g.nodes[u]), _vec(g.nodes[v]), cross))
    if g.truncated:
        out("truncated at: " + " ".join(_vec(g.nodes[i]) for i in g.truncated))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args):
    q = _read_quiver(args.quiver)
    flags = classify(q)
    label = q.name or "unnamed"
    if args.format == "json":
        print(json.dumps({"name": q.name, "n": q.n, "arrows": len(q.arrows), "flags": flags.as_dict()}, sort_keys=True))
    else:
        print("quiver %s: %d vertices, %d arrows" % (label, q.n, len(q.arrows)))
        for key, val in flags.as_dict().items():
            print("%s: %s" % (key, "true" if val else "false"))
    if not flags.min_degree_ok:
        print("condition (b) fails at vertex %d" % flags.min_degree_witness)
        return 3
    return 0


def cmd_l_matrix(args):
    q = _normalized(_read_quiver(args.quiver), print)
    L = l_matrix(q)
    if args.format == "json":
        print(json.dumps({"n": L.n, "l": [list(r) for r in L.l]}, sort_keys=True))
    else:
        for row in L.l:
            print(" ".join(str(x) for x in row))
    return 0


def cmd_ext(args):
    q = _normalized(_read_quiver(args.quiver), print)
    a = (args.i, args.r)
    b = (args.j, args.s)
    e = ext_dim(q, a, b)
    h = hom_dim(q, a, b)
    L = l_matrix(q)
    vanish = ext_vanishes(L, a, b)
    print("Ext^1 dim = %d" % e)
    print("Hom dim = %d" % h)
    print("criterion vanishes: %s" % ("true" if vanish else "false"))
    agree = (e == 0) == vanish
    print("agreement: %s" % _verdict(agree))
    if not agree:
        raise InternalCheckError("vanishing criterion disagrees with the table")
    return 0


def cmd_oracle_check(args):
    q = _normalized(_read_quiver(args.quiver), print)
    rep = check_consistency(q, args.max_shift)
    print("pairs checked: %d" % rep.pairs_checked)
    print("dim vectors checked: %d" % rep.dims_checked)
    print("tables checked: %d" % rep.tables_checked)
    if not rep.ok:
        print("criterion==oracle: %s (%s)" % (_verdict(False), rep.first_failure))
        raise InternalCheckError(rep.first_failure)
    print("criterion==oracle: %s" % _verdict(True))
    return 0


def cmd_enumerate_lk(args):
    q = _normalized(_read_quiver(args.quiver), print)
    L = l_matrix(q)
    vertex = args.vertex if args.vertex is not None else q.n - 1
    vecs = enumerate_lk(L, vertex, args.shift)
    if args.format == "json":
        print(json.dumps({"vectors": [list(v) for v in vecs]}))
    else:
        for v in vecs:
            print(_vec(v))
    return 0


def cmd_hasse(args):
    q = _normalized(_read_quiver(args.quiver), print)
    L = l_matrix(q)
    vertex = args.vertex if args.vertex is not None else q.n - 1
    vecs = enumerate_lk(L, vertex, args.shift)
    g = hasse_edges(L, vecs, oracle=(args.verify == "oracle"))
    if args.format == "json":
        print(json.dumps(g.to_json_dict(), sort_keys=True))
    elif args.format == "dot":
        print(_window_dot(g, title="lk_slice"))
    else:
        out = print
        out("nodes: %d" % len(g.nodes))
        for v in g.nodes:
            out(_vec(v))
        out("edges: %d" % len(g.edges))
        for u, v in g.edges:
            out("%s -> %s" % (_vec(g.nodes[u]), _vec(g.nodes[v])))
        if args.verify == "oracle":
            out("edges==cover-oracle: %s" % _verdict(True))
    return 0


def cmd_tp_window(args):
    q = _normalized(_read_quiver(args.quiver), print)
    g = tp_window(q, args.max_shift)
    if args.format == "json":
        print(json.dumps(g.to_json_dict(), sort_keys=True))
    elif args.format == "dot":
        print(_window_dot(g))
    else:
        _print_window_text(g, print)
        if args.verify == "oracle":
            ok, lines = verify_window_oracle(q, args.max_shift, seed=args.seed)
            for line in lines:
                print(line)
            if not ok:
                raise InternalCheckError("window oracle verification failed")
    return 0


def cmd_verify_theorem(args):
    q = _normalized(_read_quiver(args.quiver), print)
    rep = verify_theorem_t(q, args.max_shift)
    for name, ok, detail in rep.assertions:
        suffix = " (%s)" % detail if detail else ""
        print("%s: %s%s" % (name, _verdict(ok), suffix))
    print("theorem: %s" % _verdict(rep.ok))
    if not rep.ok:
        raise InternalCheckError("structure theorem assertion failed")
    return 0


def cmd_ideals(args):
    q = _read_quiver(args.quiver)
    rep = order_ideals(q)
    print("ideals: %d" % len(rep.ideals))
    for ideal, vec in zip(rep.ideals, rep.vectors):
        members = "{%s}" % ",".join(str(x) for x in sorted(ideal.members))
        print("%s -> %s" % (members, _vec(vec)))
    print("bijection: %s" % _verdict(rep.ok))
    if not rep.ok:
        raise InternalCheckError(rep.detail or "ideal bijection failed")
    return 0


def cmd_psi(args):
    q = _read_quiver(args.quiver)
    K = psi(q)
    if args.format == "json":
        print(json.dumps(K.to_json_dict(), sort_keys=True))
    else:
        print("dim %d" % K.dim)
        for v in sorted(K.nodes):
            print(_vec(v))
    return 0


def cmd_psi_inverse(args):
    K = _read_cube(args.cube)
    q = psi_inverse(K)
    sys.stdout.write(format_quiver(q))
    return 0


def cmd_normal_form(args):
    q = _read_quiver(args.quiver)
    sys.stdout.write(format_quiver(normal_form(q)))
    return 0


def cmd_equivalent(args):
    q1 = _read_quiver(args.quiver)
    q2 = _read_quiver(args.quiver2)
    ans, how = equivalent(q1, q2)
    print("equivalent: %s (%s)" % ("true" if ans else "false", how))
    return 0


def cmd_decompose(args):
    try:
        K = _read_cube(args.input)
    except (ParseError, PreconditionError):
        K = psi(_read_quiver(args.input))
    seq = decompose(K, maximal=not args.first_cut_only)
    print("pieces: %d" % len(seq.pieces))
    for k, piece in enumerate(seq.pieces):
        coords = ",".join(str(c) for c in seq.coords[k])
        nodes = " ".join(_vec(v) for v in sorted(piece.nodes))
        print("piece %d: dim %d, coords (%s), nodes %s" % (k, piece.dim, coords, nodes))
    if seq.glues:
        print("glue coords: %s" % ",".join(str(g) for g in seq.glues))
    return 0


def cmd_commute(args):
    q1 = _read_quiver(args.quiver)
    q2 = _read_quiver(args.quiver2)
    ok = verify_commute(q1, q2, mode=args.mode)
    print("commute: %s" % _verdict(ok))
    if not ok:
        raise InternalCheckError("psi of the composite differs from the cube amalgam")
    return 0


def cmd_same_tp(args):
    q1 = _read_quiver(args.quiver)
    q2 = _read_quiver(args.quiver2)
    ans = same_tp(q1, q2, cross_check=False)
    win = window_prefix_isomorphic(q1, q2, R=args.max_shift)
    print("same_tp: %s" % ("true" if ans else "false"))
    if win is None:
        print("window cross-check (R=%d): skipped" % args.max_shift)
    else:
        print(
            "window cross-check (R=%d): %s"
            % (args.max_shift, "isomorphic" if win else "not isomorphic")
        )
        if ans and not win:
            raise InternalCheckError("equal piece structure but windows differ")
    return 0


def cmd_export_dot(args):
    q = _normalized(_read_quiver(args.quiver), print)
    print(_window_dot(tp_window(q, args.max_shift)))
    return 0


def cmd_report(args):
    from .report import write_report

    q = _normalized(_read_quiver(args.quiver), print)
    g = tp_window(q, args.max_shift)
    for path in write_report(g, args.out_dir):
        print("wrote %s" % path)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

WINDOW_SCHEMA = 'JSON: {"nodes":[[r_0,...]],"edges":[[u,v]],"component":[...]}'


def build_parser():
    p = argparse.ArgumentParser(
        prog="tiltlab",
        description="Preprojective tilting posets of path algebras, combinatorially.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, epilog=None):
        sp = sub.add_parser(name, help=help_, epilog=epilog)
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "parse a quiver and report its class flags")
    sp.add_argument("quiver")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("l-matrix", cmd_l_matrix, "all-pairs walk metric")
    sp.add_argument("quiver")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("ext", cmd_ext, "Ext/Hom dimensions between two shifted projectives")
    sp.add_argument("quiver")
    sp.add_argument("i", type=int, help="vertex of the first module")
    sp.add_argument("r", type=int, help="shift of the first module")
    sp.add_argument("j", type=int, help="vertex of the second module")
    sp.add_argument("s", type=int, help="shift of the second module")

    sp = add("oracle-check", cmd_oracle_check, "cross-verify tables, forms and the criterion")
    sp.add_argument("quiver")
    sp.add_argument("--max-shift", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("enumerate-lk", cmd_enumerate_lk, "all lattice vectors fixing one coordinate")
    sp.add_argument("quiver")
    sp.add_argument("--vertex", type=int, default=None, help="default: the source")
    sp.add_argument("--shift", type=int, default=0)
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("hasse", cmd_hasse, "Hasse diagram of one lk slice", epilog=WINDOW_SCHEMA)
    sp.add_argument("quiver")
    sp.add_argument("--vertex", type=int, default=None)
    sp.add_argument("--shift", type=int, default=0)
    sp.add_argument("--verify", choices=["fast", "oracle"], default="fast")
    sp.add_argument("--format", choices=["text", "json", "dot"], default="text")

    sp = add("tp-window", cmd_tp_window, "tilting poset window up to a source shift", epilog=WINDOW_SCHEMA)
    sp.add_argument("quiver")
    sp.add_argument("--max-shift", type=int, default=3)
    sp.add_argument("--verify", choices=["fast", "oracle"], default="fast")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["text", "json", "dot"], default="text")

    sp = add("verify-theorem", cmd_verify_theorem, "check the six window structure assertions")
    sp.add_argument("quiver")
    sp.add_argument("--max-shift", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("ideals", cmd_ideals, "order ideals of the path order vs the lk slice")
    sp.add_argument("quiver")

    sp = add("psi", cmd_psi, "cube image of a completion", epilog='JSON: {"dim":...,"nodes":[[0/1,...]]}')
    sp.add_argument("quiver")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("psi-inverse", cmd_psi_inverse, "irreducible completion of a cube subquiver")
    sp.add_argument("cube", help="cube JSON file")

    sp = add("normal-form", cmd_normal_form, "reduce a completion to its irreducible form")
    sp.add_argument("quiver")

    sp = add("equivalent", cmd_equivalent, "same irreducible form?")
    sp.add_argument("quiver")
    sp.add_argument("quiver2")

    sp = add("decompose", cmd_decompose, "split a cube (or psi of a quiver) along amalgam seams")
    sp.add_argument("input", help="cube JSON file or quiver file")
    sp.add_argument("--first-cut-only", action="store_true")

    sp = add("commute", cmd_commute, "psi of the composite vs amalgam of psi images")
    sp.add_argument("quiver")
    sp.add_argument("quiver2")
    sp.add_argument("--mode", choices=["corrected", "literal"], default="corrected")

    sp = add("same-tp", cmd_same_tp, "do two quivers share the same infinite tilting quiver?")
    sp.add_argument("quiver")
    sp.add_argument("quiver2")
    sp.add_argument("--max-shift", type=int, default=3)

    sp = add("export-dot", cmd_export_dot, "DOT drawing of the tilting poset window")
    sp.add_argument("quiver")
    sp.add_argument("--max-shift", type=int, default=3)

    sp = add("report", cmd_report, "write TSV tables and a PNG rendering of the window")
    sp.add_argument("quiver")
    sp.add_argument("--max-shift", type=int, default=3)
    sp.add_argument("--out-dir", default="report")

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except ValidationError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except PreconditionError as e:
        print("error: %s" % e, file=sys.stderr)
        return 3
    except OverflowLimitError as e:
        print("error: %s" % e, file=sys.stderr)
        return 4
    except InternalCheckError as e:
        print("internal check failed: %s" % e, file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
