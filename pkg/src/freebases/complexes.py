"""Vertices and certified edges of the free-bases and free-factor graphs.

A free-bases vertex is a basis of F_N up to permuting, inverting and
simultaneously conjugating its elements; two distinct vertices are adjacent
when some element of one is conjugate into an element (or inverse) of the
other.  A free-factor vertex is a proper free factor, always presented here
as a subset of an explicit ambient basis so that adjacency can be certified
by nesting.  Everything this module asserts about distances comes with a
witness object that can be re-validated from scratch.

Rank 3 is the smallest rank where the free-factor graph used here makes
sense (a 2-element subset of a basis must still be a proper factor), so the
witness-path builders require rank >= 3.
"""

from dataclasses import dataclass, field
from itertools import permutations, product

from . import agraph
from .agraph import MarkingGraph, labeled_isomorphic, rose, spanning_tree
from .errors import DomainError, FoldabilityError, TrivialFactorError
from .folding import ensure_foldable, fold_to_rose, is_basis
from .words import (
    concat,
    concat_all,
    conjugate,
    cyclic_normal_form,
    cyclic_reduce,
    find_conjugator,
    invert,
    is_reduced,
    power,
    word_str,
)


def identity_basis(rank):
    return tuple((i,) for i in range(1, rank + 1))


def substitute(w, basis):
    """Image of w under the endomorphism x_i -> basis[i-1]."""
    out = ()
    for letter in w:
        piece = basis[letter - 1] if letter > 0 else invert(basis[-letter - 1])
        out = concat(out, piece)
    return out


@dataclass(frozen=True)
class FBVertex:
    """A free-bases vertex, stored as one explicit representative basis."""

    basis: tuple

    def __post_init__(self):
        if not self.basis:
            raise ValueError("empty basis")
        for w in self.basis:
            if not w or not is_reduced(w):
                raise ValueError("basis words must be nonempty and reduced")

    @property
    def rank(self):
        return len(self.basis)

    def verify(self):
        """Check that the representative really is a free basis."""
        return is_basis(self.basis, self.rank)

    def to_json_dict(self):
        return {"basis": [word_str(w) for w in self.basis]}


@dataclass(frozen=True)
class FFVertex:
    """A proper free factor: the subgroup generated by a subset of an
    ambient basis.  ``subset`` holds 1-based positions into ``ambient``."""

    ambient: tuple
    subset: frozenset

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(self.subset))
        n = len(self.ambient)
        if not self.subset:
            raise ValueError("free factor needs a nonempty generating subset")
        if len(self.subset) >= n:
            raise ValueError("free factor must be proper")
        if not all(1 <= k <= n for k in self.subset):
            raise ValueError("subset positions out of range")

    @property
    def words(self):
        return tuple(self.ambient[k - 1] for k in sorted(self.subset))

    def verify(self):
        return is_basis(self.ambient, len(self.ambient))

    def to_json_dict(self):
        return {
            "ambient": [word_str(w) for w in self.ambient],
            "subset": sorted(self.subset),
        }


def _class_key(w):
    """Conjugacy class of w up to inversion, as a canonical tuple."""
    return min(cyclic_normal_form(w), cyclic_normal_form(invert(w)))


def fb_equivalent(a, b):
    """Are two stored bases the same free-bases vertex?

    Searches all permutations and inversion patterns; for each, conjugators
    taking the first pair to each other form the coset {u^k g0} of the
    centralizer of the (primitive, hence root-free) first element, and |k|
    admits a length bound beyond which conjugates are longer than the
    target.
    """
    if a.rank != b.rank:
        raise ValueError("bases of different rank")
    n = a.rank
    if sorted(map(_class_key, a.basis)) != sorted(map(_class_key, b.basis)):
        return False
    targets = b.basis
    for sigma in permutations(range(n)):
        for eps in product((1, -1), repeat=n):
            u = tuple(
                a.basis[sigma[k]] if eps[k] > 0 else invert(a.basis[sigma[k]])
                for k in range(n)
            )
            g0 = find_conjugator(u[0], targets[0])
            if g0 is None:
                continue
            root_len = len(cyclic_reduce(u[0])[0])
            bound = max(
                (len(u[k]) + len(targets[k]) + 2 * len(g0)) // root_len + 1
                for k in range(n)
            )
            for k in range(-bound, bound + 1):
                g = concat(power(u[0], k), g0)
                if all(conjugate(u[i], g) == targets[i] for i in range(n)):
                    return True
    return False


@dataclass(frozen=True)
class FBAdjacency:
    """Certificate that two free-bases vertices are adjacent: element i of
    the first is conjugate to element j (to the power sign) of the second,
    by the stored conjugator."""

    i: int
    j: int
    sign: int
    conjugator: tuple

    def holds_for(self, a, b):
        target = b.basis[self.j - 1]
        if self.sign < 0:
            target = invert(target)
        return conjugate(a.basis[self.i - 1], self.conjugator) == target

    def to_json_dict(self):
        return {
            "i": self.i,
            "j": self.j,
            "sign": self.sign,
            "conjugator": word_str(self.conjugator),
        }


def fb_adjacent(a, b):
    """First adjacency certificate scanning b's elements outermost, or None.

    The two vertices must be distinct (raises DomainError on equivalent
    inputs, where adjacency is not defined).
    """
    if fb_equivalent(a, b):
        raise DomainError("fb_adjacent called on equivalent vertices")
    for j in range(1, b.rank + 1):
        for i in range(1, a.rank + 1):
            for sign in (1, -1):
                target = b.basis[j - 1] if sign > 0 else invert(b.basis[j - 1])
                g = find_conjugator(a.basis[i - 1], target)
                if g is not None:
                    return FBAdjacency(i, j, sign, g)
    return None


def h_map(v):
    """Free factor spanned by the first element of the stored basis."""
    return FFVertex(v.basis, frozenset({1}))


def q_map(u):
    """Any ambient basis of the factor's presentation; here the stored one,
    so q_map(h_map(v)) == v on the nose."""
    return FBVertex(u.ambient)


@dataclass(frozen=True)
class FFStep:
    """One certified hop in a factor-graph path.

    ``nested``: both endpoints share the ambient basis and one subset
    strictly contains the other (a genuine factor-graph edge, cost 1).
    ``conjugate-cyclic``: both endpoints are cyclic factors generating the
    same conjugacy class, witnessed by a conjugator (the same vertex seen
    in two coordinate systems, cost 0).
    """

    kind: str
    conjugator: tuple = ()
    sign: int = 1

    @property
    def cost(self):
        return 1 if self.kind == "nested" else 0

    def to_json_dict(self):
        data = {"kind": self.kind, "cost": self.cost}
        if self.kind == "conjugate-cyclic":
            data["conjugator"] = word_str(self.conjugator)
            data["sign"] = self.sign
        return data


def ff_step_witness(u, w):
    """Certify adjacency of two factors given with the same ambient basis.

    Returns an FFStep when the ambients agree and one subset strictly
    contains the other (the only certified shape), else None.
    """
    if u.ambient != w.ambient:
        return None
    if u.subset < w.subset or w.subset < u.subset:
        return FFStep("nested")
    return None


WITNESS_BOUNDS = {"h-lipschitz": 4, "hq": 3, "density": 3}


def witness_path_from_json(data):
    """Rebuild a WitnessPath from its JSON form (for re-validation)."""
    from .words import parse_word

    vertices = tuple(
        FFVertex(
            tuple(parse_word(w) for w in v["ambient"]), frozenset(v["subset"])
        )
        for v in data["vertices"]
    )
    steps = tuple(
        FFStep(
            s["kind"],
            conjugator=parse_word(s.get("conjugator", "1")),
            sign=s.get("sign", 1),
        )
        for s in data["steps"]
    )
    return WitnessPath(data["kind"], vertices, steps)


def check_step(u, w, step):
    """Re-validate one hop from scratch."""
    if step.kind == "nested":
        return ff_step_witness(u, w) is not None
    if step.kind == "conjugate-cyclic":
        if len(u.subset) != 1 or len(w.subset) != 1:
            return False
        uw = u.words[0]
        ww = w.words[0] if step.sign > 0 else invert(w.words[0])
        return conjugate(uw, step.conjugator) == ww
    return False


@dataclass(frozen=True)
class WitnessPath:
    """A certified factor-graph path; ``length`` counts genuine edges."""

    kind: str
    vertices: tuple
    steps: tuple

    @property
    def length(self):
        return sum(step.cost for step in self.steps)

    def validate(self):
        problems = []
        if len(self.steps) != len(self.vertices) - 1:
            problems.append("step count does not match vertex count")
            return problems
        for k, step in enumerate(self.steps):
            if not check_step(self.vertices[k], self.vertices[k + 1], step):
                problems.append("step %d (%s) does not certify" % (k, step.kind))
        return problems

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "length": self.length,
            "vertices": [v.to_json_dict() for v in self.vertices],
            "steps": [s.to_json_dict() for s in self.steps],
        }


def _require_rank3(n):
    if n < 3:
        raise DomainError("witness paths need rank >= 3")


def h_lipschitz_path(a, b, cert=None):
    """Factor path from h_map(a) to h_map(b) of length at most 4.

    Requires adjacent free-bases vertices; ``cert`` may carry the adjacency
    certificate (computed otherwise).  The path climbs from the first
    element of a to the shared element, re-anchors it in b's coordinates at
    zero cost, and descends to the first element of b; either side
    degenerates when the shared element already sits in position 1.
    """
    _require_rank3(a.rank)
    _require_rank3(b.rank)
    if cert is None:
        cert = fb_adjacent(a, b)
        if cert is None:
            raise DomainError("vertices are not adjacent")
    if not cert.holds_for(a, b):
        raise DomainError("adjacency certificate does not validate")
    A, B = a.basis, b.basis
    vertices = [FFVertex(A, {1})]
    steps = []
    if cert.i != 1:
        vertices.append(FFVertex(A, {1, cert.i}))
        vertices.append(FFVertex(A, {cert.i}))
        steps.extend([FFStep("nested"), FFStep("nested")])
    vertices.append(FFVertex(B, {cert.j}))
    steps.append(
        FFStep("conjugate-cyclic", conjugator=cert.conjugator, sign=cert.sign)
    )
    if cert.j != 1:
        vertices.append(FFVertex(B, {1, cert.j}))
        vertices.append(FFVertex(B, {1}))
        steps.extend([FFStep("nested"), FFStep("nested")])
    path = WitnessPath("h-lipschitz", tuple(vertices), tuple(steps))
    assert not path.validate()
    return path


def _path_to_first_factor(u, kind):
    """Shared construction: climb down to one generator of the factor, over
    to the first ambient element, for both hq_path and density_path."""
    _require_rank3(len(u.ambient))
    bpos = min(u.subset)
    vertices = [u]
    steps = []
    if u.subset != {bpos}:
        vertices.append(FFVertex(u.ambient, {bpos}))
        steps.append(FFStep("nested"))
    if bpos != 1:
        vertices.append(FFVertex(u.ambient, {bpos, 1}))
        vertices.append(FFVertex(u.ambient, {1}))
        steps.extend([FFStep("nested"), FFStep("nested")])
    path = WitnessPath(kind, tuple(vertices), tuple(steps))
    assert not path.validate()
    return path


def hq_path(u):
    """Path of length <= 3 from a factor to h_map(q_map(factor))."""
    return _path_to_first_factor(u, "hq")


def density_path(u):
    """Path of length <= 3 from a factor to an h-image: h-images are
    3-dense among the factors presented over a basis."""
    return _path_to_first_factor(u, "density")


# -- folding chains in the free-bases graph --------------------------------


def folding_chain(b):
    """Folding path from b to the standard basis, with extracted bases.

    Returns ``(m, path, bases)``: the conjugation exponent from
    ensure_foldable, the FoldingPath of the conjugated words, and one
    FBVertex per path graph.  The first entry is b itself (conjugation does
    not move the vertex), intermediate ones are read off a deterministic
    spanning tree based at the tracked wedge vertex, and the last is the
    standard basis whenever the path really ends at the rose.

    ensure_foldable only handles words wearing a common conjugator; folding
    itself copes with any wedge, so when it fails the words are used as
    given (m = 0).
    """
    n = b.rank
    try:
        m, b2, _ = ensure_foldable(b.basis, n)
    except FoldabilityError:
        m, b2 = 0, b.basis
    path = fold_to_rose(b2, n)
    bases = [b]
    for g in path.graphs[1:]:
        tree = spanning_tree(g, g.base)
        bases.append(FBVertex(tuple(agraph.basis_from_tree(g, tree, g.base))))
    if len(bases) > 1 and labeled_isomorphic(path.graphs[-1], rose(n)):
        bases[-1] = FBVertex(identity_basis(n))
    path.bases = [v.basis for v in bases]
    return m, path, bases


def folding_path_bases(b):
    """The free-bases chain [b, ..., standard basis] along the folding."""
    return folding_chain(b)[2]


@dataclass(frozen=True)
class ChainHop:
    status: str  # "equivalent" | "adjacent" | "uncertified"
    cert: FBAdjacency = None

    def to_json_dict(self):
        data = {"status": self.status}
        if self.cert is not None:
            data["cert"] = self.cert.to_json_dict()
        return data


@dataclass
class ChainReport:
    """Free-bases chain between two vertices with per-hop certificates.

    ``bound`` is a certified upper bound for the graph distance between the
    endpoints (None when some hop failed to certify).  When the chain was
    built from a shared single letter, ``shared`` names it and
    ``target_certs`` show every chain vertex within distance 1 of the
    target.
    """

    vertices: list
    hops: list
    bound: int
    conjugation_exponent: int
    shared: tuple = None
    target_certs: list = field(default_factory=list)

    def to_json_dict(self):
        data = {
            "vertices": [v.to_json_dict() for v in self.vertices],
            "hops": [h.to_json_dict() for h in self.hops],
            "bound": self.bound,
            "conjugation_exponent": self.conjugation_exponent,
        }
        if self.shared is not None:
            data["shared"] = word_str(self.shared)
        if self.target_certs:
            data["target_certs"] = [
                h.to_json_dict() for h in self.target_certs
            ]
        return data


def _hop_between(u, v):
    if fb_equivalent(u, v):
        return ChainHop("equivalent")
    cert = fb_adjacent(u, v)
    if cert is None:
        return ChainHop("uncertified")
    return ChainHop("adjacent", cert)


def fb_chain_report(a, b_rel):
    """Chain in the free-bases graph from b to a, with certificates.

    ``b_rel`` must give b's words in a's coordinates (for the standard a
    they coincide).  The chain is computed by folding b_rel down to the
    standard basis and pushing every vertex through x_i -> a_i, which is an
    isometry of the free-bases graph, so hop statuses are computed on the
    reference chain and re-validated after mapping.
    """
    m, _, ref = folding_chain(b_rel)
    mapped = [
        FBVertex(tuple(substitute(w, a.basis) for w in v.basis)) for v in ref
    ]
    hops = []
    for k in range(len(ref) - 1):
        hop = _hop_between(ref[k], ref[k + 1])
        if hop.cert is not None:
            cert = FBAdjacency(
                hop.cert.i,
                hop.cert.j,
                hop.cert.sign,
                substitute(hop.cert.conjugator, a.basis),
            )
            if not cert.holds_for(mapped[k], mapped[k + 1]):
                raise AssertionError("mapped certificate failed to validate")
            hop = ChainHop(hop.status, cert)
        hops.append(hop)
    certified = all(h.status != "uncertified" for h in hops)
    bound = sum(1 for h in hops if h.status == "adjacent") if certified else None
    shared = None
    target_certs = []
    first = b_rel.basis[0]
    if len(first) == 1:
        shared = substitute(first, a.basis)
        for v, v_ref in zip(mapped, ref):
            hop = _hop_between(v_ref, ref[-1])
            if hop.cert is not None:
                cert = FBAdjacency(
                    hop.cert.i,
                    hop.cert.j,
                    hop.cert.sign,
                    substitute(hop.cert.conjugator, a.basis),
                )
                if not cert.holds_for(v, mapped[-1]):
                    raise AssertionError("mapped target certificate failed")
                hop = ChainHop(hop.status, cert)
            target_certs.append(hop)
    return ChainReport(mapped, hops, bound, m, shared, target_certs)


# -- collapse map from splittings to factors --------------------------------


@dataclass(frozen=True)
class SplittingVertex:
    """A one-edge splitting presented by a marking graph and the single
    natural edge left uncollapsed."""

    marking: MarkingGraph
    edge: int

    def __post_init__(self):
        if self.edge not in self.marking.edges:
            raise ValueError("edge %r not in marking" % (self.edge,))


def tau(s):
    """Vertex group of the origin side of the collapsed splitting.

    Collapsing every natural edge but the chosen one leaves a one-edge
    splitting; the vertex group of the origin's collapse class is free on
    the words read around the non-tree edges of that component.  The result
    is returned as a subset of the full ambient basis obtained by extending
    the component's spanning tree to the whole graph.  Raises
    TrivialFactorError when the factor is trivial or improper.
    """
    m = s.marking
    e = m.edges[s.edge]
    n = m.betti()
    drop = {e.id, e.inv}

    comp = {e.src}
    queue = [e.src]
    while queue:
        v = queue.pop(0)
        for f in m.out_edges(v):
            if f.id not in drop and f.dst not in comp:
                comp.add(f.dst)
                queue.append(f.dst)

    # spanning tree: BFS inside the component first, then let the second
    # pass (same traversal, chosen edge allowed) grow it over the rest
    tree = set()
    words = {e.src: ()}
    order = [e.src]
    for avoid in (drop, set()):
        queue = list(order)
        while queue:
            v = queue.pop(0)
            for f in m.out_edges(v):
                if f.id in avoid or f.dst in words:
                    continue
                tree.update({f.id, f.inv})
                words[f.dst] = concat(words[v], f.word)
                queue.append(f.dst)
                order.append(f.dst)
    if len(words) != len(m.vertices):
        raise DomainError("marking graph is not connected")

    ambient = []
    subset = set()
    for eid, inv_id in sorted(m.topological_edges()):
        if eid in tree:
            continue
        f = m.edges[eid]
        ambient.append(concat_all(words[f.src], f.word, invert(words[f.dst])))
        if eid not in drop and f.src in comp and f.dst in comp:
            subset.add(len(ambient))
    if len(ambient) != n:
        raise DomainError("marking has unexpected rank %d" % len(ambient))
    if not subset:
        raise TrivialFactorError("origin-side vertex group is trivial")
    if len(subset) >= n:
        raise TrivialFactorError("origin-side vertex group is improper")
    if not is_basis(tuple(ambient), n):
        raise DomainError("marking words do not present the free group")
    return FFVertex(tuple(ambient), frozenset(subset))
