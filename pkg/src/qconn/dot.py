"""DOT (graphviz) renderings of component structure and formal-ball order."""

from __future__ import annotations

from .bitopology import BitopSpace
from .completion import FormalBallPoset
from .connectivity import antisym_components, combined_digraph


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def components_dot(b: BitopSpace) -> str:
    """Antisymmetric components as clusters, combined-digraph arcs as
    edges (self-arcs omitted for readability)."""
    g = combined_digraph(b)
    lines = ["digraph components {", "  rankdir=LR;"]
    for c, block in enumerate(antisym_components(b)):
        lines.append(f"  subgraph cluster_{c} {{")
        lines.append(f"    label={_quote('component ' + str(c))};")
        for p in block:
            lines.append(f"    n{p} [label={_quote(b.points[p])}];")
        lines.append("  }")
    for x, y in g.arcs():
        if x != y:
            lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_dot(poset: FormalBallPoset) -> str:
    """Hasse diagram of the formal-ball preorder quotient."""
    lines = ["digraph formal_balls {", "  rankdir=BT;"]
    for a in range(len(poset.elements)):
        lines.append(f"  b{a} [label={_quote(poset.describe(a))}];")
    for a, b in poset.hasse_edges():
        lines.append(f"  b{a} -> b{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
