"""1-WL color refinement with exact prime-product neighbourhood codes.

Colors are ids in a :class:`PrimeCodebook`. Round 0 interns ``L:<label>``
for every node; round r+1 interns ``R:<old color>:<hex code>`` where the
hex code is the exact code of the node's neighbour-color multiset. New
symbols within a round are interned in sorted signature order, so node
numbering never affects which ids are assigned.

Fingerprints are exact codes of the final color multiset and are only
comparable between graphs refined against the same codebook. Colors from
different rounds never coincide, so graphs that stabilize at different
rounds always get different fingerprints.
"""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .codebook import PrimeCodebook
from .errors import NodeRangeError, ParseError
from .exact import DEFAULT_BIT_CAP, ExactCode, encode_exact
from .multiset import ElementId, Multiset

DEFAULT_LABEL = ""


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[str, ...] | None = None
    _adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> Graph:
        """Normalize to a simple graph; parallel edges collapse, self-loops stay once."""
        norm = set()
        for u, v in edges:
            for w in (u, v):
                if not 0 <= w < node_count:
                    raise NodeRangeError(f"node {w} outside [0, {node_count})")
            norm.add((min(u, v), max(u, v)))
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != node_count:
                raise ValueError("need one label per node")
        return cls(node_count, frozenset(norm), labels)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adjacency[u]

    def degree(self, u: int) -> int:
        return len(self._adjacency[u])

    def label(self, u: int) -> str:
        return self.labels[u] if self.labels is not None else DEFAULT_LABEL

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Isomorphic copy with node ``u`` renamed to ``perm[u]``."""
        edges = ((perm[u], perm[v]) for u, v in self.edges)
        labels = None
        if self.labels is not None:
            inv = [0] * self.node_count
            for u, pu in enumerate(perm):
                inv[pu] = u
            labels = [self.labels[inv[w]] for w in range(self.node_count)]
        return Graph.from_edges(self.node_count, edges, labels)

    def disjoint_union(self, other: Graph) -> Graph:
        off = self.node_count
        edges = list(self.edges) + [(u + off, v + off) for u, v in other.edges]
        labels = None
        if self.labels is not None or other.labels is not None:
            labels = [self.label(u) for u in range(off)] + [other.label(u) for u in range(other.node_count)]
        return Graph.from_edges(off + other.node_count, edges, labels)


@dataclass(frozen=True)
class ColoringState:
    round: int
    colors: tuple[ElementId, ...]
    history: tuple[ExactCode, ...]

    @property
    def class_count(self) -> int:
        return len(set(self.colors))


def _intern_sorted(cb: PrimeCodebook, signatures: Sequence[object], render) -> list[ElementId]:
    ids = {sig: cb.intern(render(sig)) for sig in sorted(set(signatures))}
    return [ids[sig] for sig in signatures]


def initial_state(g: Graph, cb: PrimeCodebook, *, bit_cap: int = DEFAULT_BIT_CAP) -> ColoringState:
    labels = [g.label(u) for u in range(g.node_count)]
    colors = tuple(_intern_sorted(cb, labels, lambda lab: f"L:{lab}"))
    return ColoringState(0, colors, (encode_exact(cb, Multiset(colors), bit_cap=bit_cap),))


def wl_round(g: Graph, state: ColoringState, cb: PrimeCodebook, *,
             bit_cap: int = DEFAULT_BIT_CAP) -> ColoringState:
    """One refinement step. New color = (old color, code of neighbour colors)."""
    if len(state.colors) != g.node_count:
        raise ValueError("coloring does not match the graph")
    old = state.colors
    codes: dict[tuple[ElementId, ...], int] = {}
    signatures = []
    for u in range(g.node_count):
        key = tuple(sorted(old[v] for v in g.neighbors(u)))
        if key not in codes:
            codes[key] = encode_exact(cb, Multiset(Counter(key)), bit_cap=bit_cap).value
        signatures.append((old[u], codes[key]))
    colors = tuple(_intern_sorted(cb, signatures, lambda sig: f"R:{sig[0]}:{sig[1]:x}"))
    fp = encode_exact(cb, Multiset(colors), bit_cap=bit_cap)
    return ColoringState(state.round + 1, colors, state.history + (fp,))


def refine(g: Graph, cb: PrimeCodebook, max_rounds: int | None = None, *,
           bit_cap: int = DEFAULT_BIT_CAP) -> ColoringState:
    """Run rounds until the partition stops changing, or ``max_rounds``."""
    state = initial_state(g, cb, bit_cap=bit_cap)
    limit = g.node_count + 1 if max_rounds is None else max_rounds
    while state.round < limit:
        nxt = wl_round(g, state, cb, bit_cap=bit_cap)
        stable = nxt.class_count == state.class_count
        state = nxt
        if stable:
            break
    return state


def wl_fingerprint(g: Graph, max_rounds: int | None = None, codebook: PrimeCodebook | None = None,
                   *, bit_cap: int = DEFAULT_BIT_CAP) -> ExactCode:
    cb = codebook if codebook is not None else PrimeCodebook()
    return refine(g, cb, max_rounds, bit_cap=bit_cap).history[-1]


def wl_compare(g1: Graph, g2: Graph, codebook: PrimeCodebook | None = None) -> bool:
    """True when 1-WL distinguishes the graphs."""
    cb = codebook if codebook is not None else PrimeCodebook()
    return wl_fingerprint(g1, codebook=cb) != wl_fingerprint(g2, codebook=cb)


# -- edge-list files -----------------------------------------------------------

def _node_index(token: str, lineno: int) -> int:
    try:
        u = int(token)
    except ValueError:
        raise ParseError(f"node index is not an integer: {token!r}", lineno) from None
    if u < 0:
        raise NodeRangeError(f"negative node index {u}", lineno)
    return u


def parse_graph(text: str) -> Graph:
    """Read ``nodes <n>`` / ``label <u> <symbol>`` / ``<u> <v>`` lines."""
    declared: int | None = None
    edges: list[tuple[int, int, int]] = []
    labels: dict[int, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0] == "nodes":
            if len(parts) != 2 or declared is not None:
                raise ParseError("expected a single 'nodes <n>' header", lineno)
            declared = _node_index(parts[1], lineno)
        elif parts[0] == "label":
            if len(parts) != 3:
                raise ParseError("expected 'label <u> <symbol>'", lineno)
            labels[_node_index(parts[1], lineno)] = (parts[2], lineno)
        elif len(parts) == 2:
            edges.append((_node_index(parts[0], lineno), _node_index(parts[1], lineno), lineno))
        else:
            raise ParseError(f"expected '<u> <v>', got {raw!r}", lineno)
    used = [u for e in edges for u in e[:2]] + list(labels)
    n = declared if declared is not None else (max(used) + 1 if used else 0)
    for u, v, lineno in edges:
        if u >= n or v >= n:
            raise NodeRangeError(f"edge ({u}, {v}) outside [0, {n})", lineno)
    for u, (_, lineno) in labels.items():
        if u >= n:
            raise NodeRangeError(f"label for node {u} outside [0, {n})", lineno)
    node_labels = None
    if labels:
        node_labels = [labels[u][0] if u in labels else DEFAULT_LABEL for u in range(n)]
    return Graph.from_edges(n, ((u, v) for u, v, _ in edges), node_labels)


def load_graph(path: str | os.PathLike) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))
