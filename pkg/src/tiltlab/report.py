"""Figure + table report for a tilting poset window.

Writes three files into a directory: nodes.tsv and edges.tsv (delimited,
byte-deterministic) and window.png (matplotlib rendering with components
stacked along the x axis by total shift).
"""

from __future__ import annotations

import os


def _vec(v):
    return "(%s)" % ",".join(str(x) for x in v)


def write_report(g, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    nodes_path = os.path.join(out_dir, "nodes.tsv")
    with open(nodes_path, "w", encoding="utf-8") as fh:
        fh.write("index\tvector\tcomponent\ttruncated\n")
        for k, v in enumerate(g.nodes):
            fh.write(
                "%d\t%s\t%d\t%d\n"
                % (k, _vec(v), g.component_of[k], 1 if k in g.truncated else 0)
            )
    paths.append(nodes_path)

    edges_path = os.path.join(out_dir, "edges.tsv")
    with open(edges_path, "w", encoding="utf-8") as fh:
        fh.write("from\tto\tcross\n")
        for u, v in g.edges:
            fh.write(
                "%d\t%d\t%d\n" % (u, v, 1 if g.component_of[u] != g.component_of[v] else 0)
            )
    paths.append(edges_path)

    png_path = os.path.join(out_dir, "window.png")
    _render_png(g, png_path)
    paths.append(png_path)
    return paths


def _render_png(g, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # x = total shift (Hasse rank), y = position among nodes of equal rank
    ranks = {}
    pos = {}
    for k, v in enumerate(g.nodes):
        r = sum(v)
        pos[k] = (r, len(ranks.setdefault(r, [])))
        ranks[r].append(k)

    width = max(6.0, 1.1 * (len(ranks) + 1))
    height = max(4.0, 0.9 * (max(len(col) for col in ranks.values()) + 1))
    fig, ax = plt.subplots(figsize=(width, height))

    for u, v in g.edges:
        (x1, y1), (x2, y2) = pos[u], pos[v]
        cross = g.component_of[u] != g.component_of[v]
        ax.plot(
            [x1, x2],
            [y1, y2],
            linestyle="--" if cross else "-",
            color="tab:red" if cross else "tab:gray",
            zorder=1,
        )
    comp_colors = {}
    palette = ["tab:blue", "tab:orange", "tab:green", "tab:purple", "tab:brown", "tab:cyan"]
    for k, v in enumerate(g.nodes):
        c = g.component_of[k]
        color = comp_colors.setdefault(c, palette[c % len(palette)])
        x, y = pos[k]
        marker = "s" if k in g.truncated else "o"
        ax.scatter([x], [y], s=160, color=color, marker=marker, zorder=2)
        ax.annotate(
            _vec(v),
            (x, y),
            textcoords="offset points",
            xytext=(0, 12),
            ha="center",
            fontsize=8,
        )

    ax.set_xlabel("total shift")
    ax.set_yticks([])
    ax.set_title(
        "tilting poset window: %d nodes / %d edges, components by color"
        % (len(g.nodes), len(g.edges))
    )
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
