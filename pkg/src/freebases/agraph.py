"""Finite graphs with oriented edges labeled by free-group letters.

An edge is an oriented object with an involution partner carrying the
inverse label, so each topological edge is stored twice.  Vertices are
integers; an optional base vertex marks graphs that present a subgroup.

A graph is *folded* when no vertex has two distinct outgoing edges with the
same label, and *foldable* when every degree-2 vertex has two distinct
outgoing labels and every vertex of degree >= 3 sees at least three distinct
outgoing labels.  Folded graphs immerse into the rose; foldable ones admit
maximal folds that stay foldable.
"""

from typing import NamedTuple

from .errors import ContractibleGraphError, DomainError
from .words import (
    DEFAULT_RANK,
    concat,
    concat_all,
    invert,
    is_reduced,
    letter_key,
    letter_str,
    parse_word,
    word_str,
)


class Edge(NamedTuple):
    id: int
    inv: int
    src: int
    dst: int
    label: int


class AGraph:
    """Letter-labeled graph, optionally based.

    ``edges`` maps edge id -> Edge; the involution and label conventions are
    checked at construction (pass ``check=False`` to skip when building a
    quotient from an already-checked graph).
    """

    __slots__ = ("vertices", "edges", "base", "rank", "_out")

    def __init__(self, vertices, edges, base=None, rank=DEFAULT_RANK, check=True):
        self.vertices = frozenset(vertices)
        if isinstance(edges, dict):
            self.edges = dict(edges)
        else:
            self.edges = {e.id: e for e in edges}
        self.base = base
        self.rank = rank
        out = {v: [] for v in self.vertices}
        for e in self.edges.values():
            out[e.src].append(e)
        self._out = {v: sorted(es, key=lambda e: e.id) for v, es in out.items()}
        if check:
            problems = self.validate()
            if problems:
                raise ValueError("invalid graph: " + "; ".join(problems))

    def validate(self):
        """All invariant violations, as human-readable strings."""
        problems = []
        for e in self.edges.values():
            partner = self.edges.get(e.inv)
            if partner is None:
                problems.append("edge %d: involution partner %d missing" % (e.id, e.inv))
                continue
            if partner.inv != e.id:
                problems.append("edge %d: involution not symmetric" % e.id)
            if e.inv == e.id:
                problems.append("edge %d: involution has a fixed point" % e.id)
            if partner.label != -e.label:
                problems.append("edge %d: partner label is not the inverse" % e.id)
            if partner.src != e.dst or partner.dst != e.src:
                problems.append("edge %d: partner does not reverse it" % e.id)
            if e.src not in self.vertices or e.dst not in self.vertices:
                problems.append("edge %d: endpoint not a vertex" % e.id)
            if e.label == 0 or abs(e.label) > self.rank:
                problems.append("edge %d: label %d out of range" % (e.id, e.label))
        if self.base is not None and self.base not in self.vertices:
            problems.append("base %r is not a vertex" % (self.base,))
        if self.vertices and not problems:
            seen = {min(self.vertices)}
            stack = [min(self.vertices)]
            while stack:
                v = stack.pop()
                for e in self._out[v]:
                    if e.dst not in seen:
                        seen.add(e.dst)
                        stack.append(e.dst)
            if seen != self.vertices:
                problems.append("graph is not connected")
        if not self.vertices:
            problems.append("graph has no vertices")
        return problems

    def out_edges(self, v):
        return self._out[v]

    def degree(self, v):
        return len(self._out[v])

    def edge(self, eid):
        return self.edges[eid]

    def topological_edges(self):
        """One id pair (e, e.inv) per topological edge, e the lower id."""
        return [(e.id, e.inv) for e in self.edges.values() if e.id < e.inv]

    def num_topological_edges(self):
        return len(self.edges) // 2

    def betti(self):
        """First Betti number (the graph is connected by invariant)."""
        return self.num_topological_edges() - len(self.vertices) + 1

    def with_base(self, base):
        return AGraph(self.vertices, self.edges, base=base, rank=self.rank, check=False)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self):
        edges = [
            {"id": e.id, "inv": e.inv, "from": e.src, "to": e.dst,
             "label": letter_str(e.label)}
            for e in sorted(self.edges.values(), key=lambda e: e.id)
        ]
        data = {"vertices": sorted(self.vertices), "edges": edges}
        if self.base is not None:
            data["base"] = self.base
        return data

    @classmethod
    def from_json_dict(cls, data, rank=None):
        edges = {}
        max_index = 1
        for item in data["edges"]:
            label = parse_word(item["label"], rank=None)
            if len(label) != 1:
                raise ValueError("edge label %r is not a single letter" % (item["label"],))
            e = Edge(item["id"], item["inv"], item["from"], item["to"], label[0])
            edges[e.id] = e
            max_index = max(max_index, abs(e.label))
        if rank is None:
            rank = max(max_index, DEFAULT_RANK)
        return cls(data["vertices"], edges, base=data.get("base"), rank=rank)

    def to_dot(self, name="agraph"):
        lines = ["graph %s {" % name]
        for v in sorted(self.vertices):
            shape = ' [shape=doublecircle]' if v == self.base else ""
            lines.append("  %d%s;" % (v, shape))
        for eid, _ in sorted(self.topological_edges()):
            e = self.edges[eid]
            rep = e if e.label > 0 else self.edges[e.inv]
            lines.append('  %d -- %d [label="%s"];' % (rep.src, rep.dst, letter_str(rep.label)))
        lines.append("}")
        return "\n".join(lines)


def rose(rank=DEFAULT_RANK):
    """Wedge of ``rank`` loops at vertex 0, loop i labeled x_i."""
    edges = {}
    for i in range(1, rank + 1):
        a, b = 2 * (i - 1), 2 * (i - 1) + 1
        edges[a] = Edge(a, b, 0, 0, i)
        edges[b] = Edge(b, a, 0, 0, -i)
    return AGraph([0], edges, base=0, rank=rank)


def core(g):
    """Iteratively strip degree-1 vertices; the base is never stripped.

    Raises ContractibleGraphError for an unbased graph whose core would be
    empty (a tree).
    """
    alive_v = set(g.vertices)
    alive_e = dict(g.edges)
    degree = {v: 0 for v in alive_v}
    for e in alive_e.values():
        degree[e.src] += 1
    queue = [v for v in alive_v if degree[v] <= 1 and v != g.base]
    while queue:
        v = queue.pop()
        if v not in alive_v or degree[v] > 1 or v == g.base:
            continue
        alive_v.discard(v)
        incident = [e for e in alive_e.values() if e.src == v or e.dst == v]
        for e in incident:
            alive_e.pop(e.id, None)
            other = e.dst if e.src == v else e.src
            if other in alive_v and other != v:
                degree[other] -= 1
                if degree[other] <= 1 and other != g.base:
                    queue.append(other)
        degree[v] = 0
    if not alive_v:
        raise ContractibleGraphError("core of a contractible graph without base")
    return AGraph(alive_v, alive_e, base=g.base, rank=g.rank)


def natural_vertices(g):
    """Vertices of degree at least 3, ascending."""
    return sorted(v for v in g.vertices if g.degree(v) >= 3)


def _chain_from(g, germ, natural):
    chain = [germ]
    guard = len(g.edges) + 1
    while chain[-1].dst not in natural:
        if len(chain) > guard:
            raise DomainError("edge chain does not reach a natural vertex")
        v = chain[-1].dst
        nxt = [e for e in g.out_edges(v) if e.id != chain[-1].inv]
        if len(nxt) != 1:
            raise DomainError("vertex %d is neither natural nor interior" % v)
        chain.append(nxt[0])
    return chain


def natural_edges(g):
    """Maximal chains through degree-2 vertices between natural vertices.

    Each topological edge belongs to exactly one returned chain; chains are
    lists of oriented edge ids.  Raises DomainError when the graph has no
    natural vertex (a circle or a point).
    """
    natural = set(natural_vertices(g))
    if not natural:
        raise DomainError("graph has no natural vertex")
    chains = []
    used = set()
    for v in sorted(natural):
        for germ in sorted(g.out_edges(v), key=lambda e: (letter_key(e.label), e.id)):
            if min(germ.id, germ.inv) in used:
                continue
            chain = _chain_from(g, germ, natural)
            for e in chain:
                used.add(min(e.id, e.inv))
            chains.append([e.id for e in chain])
    return chains


def is_folded(g):
    """No vertex has two distinct outgoing edges with the same label."""
    for v in g.vertices:
        seen = set()
        for e in g.out_edges(v):
            if e.label in seen:
                return False
            seen.add(e.label)
    return True


def is_foldable(g, report=False):
    """Check the two local foldability conditions.

    Returns a bool, or ``(bool, violations)`` when ``report`` is true.  The
    graph is expected to be a core graph; degree-0 and degree-1 vertices are
    reported as violations since the conditions only make sense without them.
    """
    violations = []
    for v in sorted(g.vertices):
        labels = [e.label for e in g.out_edges(v)]
        distinct = len(set(labels))
        if len(labels) <= 1:
            violations.append("vertex %d has degree %d (not a core graph)" % (v, len(labels)))
        elif len(labels) == 2:
            if distinct < 2:
                violations.append("degree-2 vertex %d has equal outgoing labels" % v)
        else:
            if distinct < 3:
                violations.append(
                    "vertex %d of degree %d has only %d distinct outgoing labels"
                    % (v, len(labels), distinct)
                )
    ok = not violations
    return (ok, violations) if report else ok


def fold_pairs(g):
    """All (vertex, label, edge ids) triples witnessing non-foldedness."""
    found = []
    for v in sorted(g.vertices):
        by_label = {}
        for e in g.out_edges(v):
            by_label.setdefault(e.label, []).append(e.id)
        for label in sorted(by_label, key=letter_key):
            ids = by_label[label]
            if len(ids) > 1:
                found.append((v, label, sorted(ids)))
    return found


def spanning_tree(g, root=None):
    """Deterministic BFS spanning tree, as a frozenset of edge ids.

    The set is closed under the involution.  Exploration is breadth-first
    from ``root`` (default: the base, else the smallest vertex), scanning
    each vertex's edges in (label order, edge id) order.
    """
    if root is None:
        root = g.base if g.base is not None else min(g.vertices)
    seen = {root}
    tree = set()
    queue = [root]
    while queue:
        v = queue.pop(0)
        for e in sorted(g.out_edges(v), key=lambda e: (letter_key(e.label), e.id)):
            if e.dst not in seen:
                seen.add(e.dst)
                tree.add(e.id)
                tree.add(e.inv)
                queue.append(e.dst)
    if seen != g.vertices:
        raise DomainError("graph is not connected")
    return frozenset(tree)


def check_spanning_tree(g, tree):
    problems = []
    for eid in tree:
        e = g.edges.get(eid)
        if e is None:
            problems.append("tree edge %d not in graph" % eid)
        elif e.inv not in tree:
            problems.append("tree not closed under involution at edge %d" % eid)
    if not problems:
        n_top = sum(1 for eid in tree if eid < g.edges[eid].inv)
        if n_top != len(g.vertices) - 1:
            problems.append("tree has %d edges for %d vertices" % (n_top, len(g.vertices)))
    return problems


def tree_words(g, tree, root):
    """Label word of the unique tree path root -> v, for every vertex v."""
    words = {root: ()}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for e in sorted(g.out_edges(v), key=lambda e: (letter_key(e.label), e.id)):
            if e.id in tree and e.dst not in words:
                words[e.dst] = words[v] + (e.label,)
                queue.append(e.dst)
    if len(words) != len(g.vertices):
        raise DomainError("tree does not span the graph")
    return words


def basis_from_tree(g, tree, base):
    """Words read around the non-tree edges, one per topological edge.

    For each non-tree topological edge, take the orientation whose label has
    positive sign and read (tree path base -> origin) edge (tree path
    terminus -> base).  For a core graph whose natural projection to the
    rose is a homotopy equivalence this is a free basis.  Raises DomainError
    when the Betti number differs from the graph's rank.
    """
    if g.betti() != g.rank:
        raise DomainError(
            "Betti number %d differs from rank %d" % (g.betti(), g.rank)
        )
    words = tree_words(g, tree, base)
    out = []
    for eid, inv_id in sorted(g.topological_edges()):
        if eid in tree:
            continue
        e = g.edges[eid]
        rep = e if e.label > 0 else g.edges[inv_id]
        out.append(concat_all(words[rep.src], (rep.label,), invert(words[rep.dst])))
    return out


# -- smoothing ------------------------------------------------------------


class MarkingEdge(NamedTuple):
    id: int
    inv: int
    src: int
    dst: int
    word: tuple


class MarkingGraph:
    """Graph with freely reduced nonempty words on edges and no vertices of
    degree less than 3."""

    __slots__ = ("vertices", "edges", "_out")

    def __init__(self, vertices, edges, check=True):
        self.vertices = frozenset(vertices)
        if isinstance(edges, dict):
            self.edges = dict(edges)
        else:
            self.edges = {e.id: e for e in edges}
        out = {v: [] for v in self.vertices}
        for e in self.edges.values():
            out[e.src].append(e)
        self._out = {v: sorted(es, key=lambda e: e.id) for v, es in out.items()}
        if check:
            problems = self.validate()
            if problems:
                raise ValueError("invalid marking graph: " + "; ".join(problems))

    def validate(self):
        problems = []
        for e in self.edges.values():
            partner = self.edges.get(e.inv)
            if partner is None or partner.inv != e.id or e.inv == e.id:
                problems.append("edge %d: bad involution" % e.id)
                continue
            if partner.word != invert(e.word):
                problems.append("edge %d: partner word is not the inverse" % e.id)
            if partner.src != e.dst or partner.dst != e.src:
                problems.append("edge %d: partner does not reverse it" % e.id)
            if not e.word or not is_reduced(e.word):
                problems.append("edge %d: word %r not nonempty reduced" % (e.id, e.word))
        for v in self.vertices:
            if len(self._out[v]) < 3:
                problems.append("vertex %d has degree %d < 3" % (v, len(self._out[v])))
        return problems

    def out_edges(self, v):
        return self._out[v]

    def topological_edges(self):
        return [(e.id, e.inv) for e in self.edges.values() if e.id < e.inv]

    def betti(self):
        return len(self.edges) // 2 - len(self.vertices) + 1

    def expand(self, rank=None):
        """Subdivide every edge word into single letters, giving an AGraph."""
        if rank is None:
            rank = max(
                [DEFAULT_RANK] + [abs(l) for e in self.edges.values() for l in e.word]
            )
        vmap = {v: i for i, v in enumerate(sorted(self.vertices))}
        next_v = len(vmap)
        edges = {}
        next_e = 0
        for eid, inv_id in sorted(self.topological_edges()):
            e = self.edges[eid]
            stops = [vmap[e.src]]
            for _ in range(len(e.word) - 1):
                stops.append(next_v)
                next_v += 1
            stops.append(vmap[e.dst])
            for k, letter in enumerate(e.word):
                a, b = next_e, next_e + 1
                edges[a] = Edge(a, b, stops[k], stops[k + 1], letter)
                edges[b] = Edge(b, a, stops[k + 1], stops[k], -letter)
                next_e += 2
        return AGraph(range(next_v), edges, base=None, rank=rank)

    def to_json_dict(self):
        return {
            "vertices": sorted(self.vertices),
            "edges": [
                {"id": e.id, "inv": e.inv, "from": e.src, "to": e.dst,
                 "word": word_str(e.word)}
                for e in sorted(self.edges.values(), key=lambda e: e.id)
            ],
        }

    @classmethod
    def from_json_dict(cls, data, rank=None):
        edges = {}
        for item in data["edges"]:
            edges[item["id"]] = MarkingEdge(
                item["id"], item["inv"], item["from"], item["to"],
                parse_word(item["word"], rank=rank),
            )
        return cls(data["vertices"], edges)

    def to_dot(self, name="marking"):
        lines = ["graph %s {" % name]
        for v in sorted(self.vertices):
            lines.append("  %d;" % v)
        for eid, _ in sorted(self.topological_edges()):
            e = self.edges[eid]
            lines.append('  %d -- %d [label="%s"];' % (e.src, e.dst, word_str(e.word)))
        lines.append("}")
        return "\n".join(lines)


def smooth(g):
    """Erase degree-2 vertices, concatenating labels along each chain.

    The result is a MarkingGraph on the natural vertices.  Requires a core
    graph with at least one natural vertex; for foldable graphs the chain
    words are automatically reduced.
    """
    chains = natural_edges(g)
    edges = {}
    for k, chain in enumerate(chains):
        first = g.edges[chain[0]]
        last = g.edges[chain[-1]]
        word = tuple(g.edges[eid].label for eid in chain)
        a, b = 2 * k, 2 * k + 1
        edges[a] = MarkingEdge(a, b, first.src, last.dst, word)
        edges[b] = MarkingEdge(b, a, last.dst, first.src, invert(word))
    return MarkingGraph(natural_vertices(g), edges)


# -- labeled isomorphism --------------------------------------------------


def _vertex_signature(g, v):
    return (g.degree(v), tuple(sorted(letter_key(e.label) for e in g.out_edges(v))))


def _canonical_code(g, base):
    """Minimal BFS code over all label-respecting traversals from base.

    At each vertex the outgoing edges are scanned in label order; edges to
    already-numbered targets come first (by target number), then edges to
    new targets, whose visiting order is branched over when the label alone
    does not determine it.  Folded graphs never branch.
    """
    from itertools import permutations

    best = [None]

    def process(idx, num, order, acc):
        if idx == len(order):
            cand = tuple(acc)
            if best[0] is None or cand < best[0]:
                best[0] = cand
            return
        v = order[idx]
        by_label = {}
        for e in g.out_edges(v):
            by_label.setdefault(e.label, []).append(e)
        labels = sorted(by_label, key=letter_key)

        def do_label(li, num, order, acc):
            if li == len(labels):
                process(idx + 1, num, order, acc)
                return
            label = labels[li]
            lk = letter_key(label)
            group = by_label[label]
            fixed = sorted(num[e.dst] for e in group if e.dst in num)
            entries = [lk + (n,) for n in fixed]
            fresh = {}
            for e in group:
                if e.dst not in num:
                    fresh[e.dst] = fresh.get(e.dst, 0) + 1
            targets = sorted(fresh)
            if not targets:
                do_label(li + 1, num, order, acc + [tuple(entries)])
                return
            for perm in permutations(targets):
                num2 = dict(num)
                order2 = list(order)
                ext = list(entries)
                for t in perm:
                    num2[t] = len(order2)
                    order2.append(t)
                    ext.extend([lk + (num2[t],)] * fresh[t])
                do_label(li + 1, num2, order2, acc + [tuple(ext)])

        do_label(0, num, order, acc)

    process(0, {base: 0}, [base], [])
    return (len(g.vertices), len(g.edges)) + (best[0],)


def canonical_code(g, base=None):
    """Isomorphism-invariant code of a graph (based when ``base`` given).

    Without a base the code is minimized over base candidates with minimal
    local signature, so it is invariant under relabeling of vertex and edge
    ids.
    """
    if base is not None:
        return _canonical_code(g, base)
    sig = min(_vertex_signature(g, v) for v in g.vertices)
    return min(
        _canonical_code(g, v)
        for v in sorted(g.vertices)
        if _vertex_signature(g, v) == sig
    )


def labeled_isomorphic(g1, g2):
    """Label- and base-preserving graph isomorphism.

    Graphs where exactly one side has a base are never isomorphic.  Storage
    orientation of edges is irrelevant since both orientations are encoded.
    """
    if (g1.base is None) != (g2.base is None):
        return False
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    if sorted(map(lambda e: letter_key(e.label), g1.edges.values())) != sorted(
        map(lambda e: letter_key(e.label), g2.edges.values())
    ):
        return False
    if g1.base is not None:
        return _canonical_code(g1, g1.base) == _canonical_code(g2, g2.base)
    return canonical_code(g1) == canonical_code(g2)


def marking_isomorphic(m1, m2):
    """Word-label preserving isomorphism of marking graphs."""
    return labeled_isomorphic(m1.expand(), m2.expand())


def has_loop_labeled(g, v, letter):
    """Is there a loop edge at v labeled by the given letter (or its inverse)?"""
    return any(
        e.dst == v and (e.label == letter or e.label == -letter)
        for e in g.out_edges(v)
    )
