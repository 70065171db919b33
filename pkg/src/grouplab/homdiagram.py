"""Hom-diagrams: rooted trees of quotient groups and the maps between them.

Every vertex carries a group ``G_v`` over the shared coefficients ``A``, a
finite generating set ``Q_v`` of automorphisms and, optionally, a decorated
splitting.  Every edge ``v -> w`` carries a map ``pi(v, w)`` defined on the
generators of ``G_v``; coefficient letters pass through unchanged.

A branch ``v_0, ..., v_k`` together with choices ``sigma_0, ..., sigma_{k-1}``
(``sigma_i`` a word in ``Q_{v_i}``) and a terminal map ``phi_0`` on the leaf
generators gives the homomorphism

    sigma_0 pi(v_0, v_1) sigma_1 ... sigma_{k-1} pi(v_{k-1}, v_k) phi_0

with maps composed left to right.  The root usually has ``Q = 1``, in which
case ``sigma_0`` is forced to be the identity.

Only free vertex groups, ``F(gens) * F(A)``, have a word problem here.
Other vertices (the root coordinate group, presented groups and
``Gamma``-tagged leaves) are symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from typing import Sequence

from .equations import EquationSystem
from .errors import ArityMismatch, ChoiceOutOfRange, MissingDecoration, SolutionCheckFailed
from .folding import is_surjective
from .groups import FreeGroup
from .solver import verify_solution
from .verdict import Verdict, combine
from .words import Alphabet, GeneratorMap, Word, apply_map, ball, format_word

GROUP_KINDS = ("free", "presented", "gamma")
TAGS = ("rigid", "abelian", "qh")


@dataclass(frozen=True)
class VertexGroup:
    tag: str
    gens: tuple[Word, ...]

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown vertex group tag {self.tag!r}")


@dataclass(frozen=True)
class EdgeGroup:
    """Edge group between vertex groups ``ends``, given by its image in ``G_v``."""

    ends: tuple[int, int]
    gens: tuple[Word, ...]


@dataclass(frozen=True)
class Decoration:
    vertex_groups: tuple[VertexGroup, ...]
    edge_groups: tuple[EdgeGroup, ...] = ()


@dataclass(frozen=True)
class Auto:
    """A generating automorphism of ``Q_v``, with its inverse when known."""

    map: GeneratorMap
    inverse: GeneratorMap | None = None


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str
    gens: Alphabet
    relators: tuple[Word, ...] = ()
    autos: tuple[Auto, ...] = ()
    decoration: Decoration | None = None

    def __post_init__(self):
        if self.kind not in GROUP_KINDS:
            raise ValueError(f"unknown vertex group kind {self.kind!r}")


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    map: GeneratorMap


@dataclass(frozen=True)
class HomDiagram:
    coeffs: Alphabet
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    system: EquationSystem | None = None

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def edge(self, src: str, dst: str) -> Edge:
        for e in self.edges:
            if e.src == src and e.dst == dst:
                return e
        raise KeyError((src, dst))

    def children(self, vid: str) -> list[str]:
        return [e.dst for e in self.edges if e.src == vid]

    def roots(self) -> list[str]:
        targets = {e.dst for e in self.edges}
        return [v.id for v in self.vertices if v.id not in targets]

    def leaves(self) -> list[str]:
        sources = {e.src for e in self.edges}
        return [v.id for v in self.vertices if v.id not in sources]

    def branches(self) -> list[list[str]]:
        """Root-to-leaf paths in a depth-first order."""
        out: list[list[str]] = []

        def walk(path):
            kids = self.children(path[-1])
            if not kids:
                out.append(path)
            for k in kids:
                walk(path + [k])

        for r in self.roots():
            walk([r])
        return out

    def group(self, vid: str) -> FreeGroup | None:
        """The vertex group when it has a word problem, else None."""
        v = self.vertex(vid)
        if v.kind == "free":
            return FreeGroup(v.gens.union(self.coeffs))
        return None


@dataclass(frozen=True)
class FundamentalSequence:
    branch: tuple[str, ...]
    choices: tuple[tuple[int, ...], ...]
    terminal: GeneratorMap


def validate_diagram(d: HomDiagram, radius: int) -> dict[str, Verdict]:
    """Structural, surjectivity and properness checks.

    Returns verdicts under ``"structure"``, ``"surjective"`` and ``"proper"``.
    Surjectivity is decided by folding when the edge target is free.
    Properness needs a nontrivial kernel element of length at most
    ``radius``; finding none gives Unknown.
    """
    return {
        "structure": _check_structure(d),
        "surjective": _check_surjective(d),
        "proper": _check_proper(d, radius),
    }


def _check_structure(d: HomDiagram) -> Verdict:
    ids = [v.id for v in d.vertices]
    if len(set(ids)) != len(ids):
        return Verdict.refuted("vertices", "duplicate vertex id")
    if not d.vertices:
        return Verdict.verified(None, "empty diagram")
    for v in d.vertices:
        if set(v.gens) & set(d.coeffs):
            return Verdict.refuted(v.id, "vertex generators overlap the coefficients")
    for e in d.edges:
        if e.src not in ids or e.dst not in ids:
            return Verdict.refuted((e.src, e.dst), "edge endpoint is not a vertex")
    incoming: dict[str, int] = {}
    for e in d.edges:
        incoming[e.dst] = incoming.get(e.dst, 0) + 1
    multi = [v for v, k in incoming.items() if k > 1]
    if multi:
        return Verdict.refuted(multi[0], "vertex has two incoming edges")
    roots = d.roots()
    if len(roots) != 1:
        return Verdict.refuted(tuple(roots), "diagram needs exactly one root")
    reached = {roots[0]}
    stack = [roots[0]]
    while stack:
        for k in d.children(stack.pop()):
            if k not in reached:
                reached.add(k)
                stack.append(k)
    if len(reached) != len(ids):
        return Verdict.refuted(sorted(set(ids) - reached)[0], "vertex not reachable from the root")
    if d.system is not None:
        root = d.vertex(roots[0])
        if root.gens != d.system.vars:
            return Verdict.refuted(roots[0], "root generators differ from the system variables")
    for vid in d.leaves():
        if d.vertex(vid).kind == "presented" and len(ids) > 1:
            return Verdict.refuted(vid, "a leaf must be free or Gamma-tagged")
    for e in d.edges:
        src, dst = d.vertex(e.src), d.vertex(e.dst)
        if e.map.domain != src.gens:
            return Verdict.refuted((e.src, e.dst), "edge map is not defined on exactly the source generators")
        allowed = set(dst.gens) | set(d.coeffs)
        for img in e.map.images:
            bad = img.generators() - allowed
            if bad:
                return Verdict.refuted((e.src, e.dst), f"image uses {', '.join(sorted(bad))} outside the target")
    for v in d.vertices:
        allowed = set(v.gens) | set(d.coeffs)
        for j, a in enumerate(v.autos):
            for m in (a.map, a.inverse):
                if m is None:
                    continue
                if m.domain != v.gens or any(img.generators() - allowed for img in m.images):
                    return Verdict.refuted((v.id, j + 1), "automorphism is not a map of the vertex generators")
    return Verdict.verified(None, f"{len(ids)} vertices, {len(d.edges)} edges")


def _check_surjective(d: HomDiagram) -> Verdict:
    parts = []
    for e in d.edges:
        if d.group(e.dst) is None:
            parts.append(Verdict.unknown(None, f"target {e.dst} has no word problem"))
            continue
        target = d.vertex(e.dst).gens.union(d.coeffs)
        images = list(e.map.images) + d.coeffs.gens()
        if not is_surjective(images, target):
            parts.append(Verdict.refuted((e.src, e.dst), "edge images generate a proper subgroup"))
        else:
            parts.append(Verdict.verified(None))
    return combine(parts) if parts else Verdict.verified(None, "no edges")


def _check_proper(d: HomDiagram, radius: int) -> Verdict:
    parts = []
    for e in d.edges:
        src, dst = d.group(e.src), d.group(e.dst)
        if src is None or dst is None:
            parts.append(Verdict.unknown(radius, f"edge {e.src} -> {e.dst}: no word problem at an endpoint"))
            continue
        found = None
        for w in ball(src.alphabet, radius)[1:]:
            if dst.is_identity(apply_map(e.map, w)):
                found = w
                break
        if found is None:
            parts.append(Verdict.unknown(radius, f"edge {e.src} -> {e.dst}: no kernel element up to {radius}"))
        else:
            parts.append(Verdict.verified(radius, f"{found} is in the kernel", witness=found))
    if not parts:
        return Verdict.verified(radius, "no edges")
    v = combine(parts)
    if v.is_verified:
        return Verdict.verified(radius, "every edge map has a kernel", witness=tuple(p.witness for p in parts))
    return v


def _path_check(d: HomDiagram, branch: Sequence[str]) -> None:
    if not branch:
        raise ArityMismatch("empty branch")
    if branch[0] not in d.roots():
        raise ArityMismatch(f"branch starts at {branch[0]}, not at the root")
    for a, b in zip(branch, branch[1:]):
        d.edge(a, b)
    if d.children(branch[-1]):
        raise ArityMismatch(f"branch ends at {branch[-1]}, which is not a leaf")


def choice_map(vertex: Vertex, choice: Sequence[int], coeffs: Alphabet) -> GeneratorMap:
    """The automorphism named by a signed, 1-based word in ``vertex.autos``."""
    result = GeneratorMap.identity(vertex.gens)
    for c in choice:
        if c == 0 or abs(c) > len(vertex.autos):
            raise ChoiceOutOfRange(f"vertex {vertex.id} has {len(vertex.autos)} automorphisms, got {c}")
        auto = vertex.autos[abs(c) - 1]
        step = auto.map if c > 0 else auto.inverse
        if step is None:
            raise ChoiceOutOfRange(f"automorphism {abs(c)} at {vertex.id} has no inverse")
        result = result.then(step)
    return result


def evaluate_fundamental_sequence(d: HomDiagram, fs: FundamentalSequence) -> GeneratorMap:
    """The composite map from the root generators into ``F(A)``.

    When the diagram carries a system, the result must solve it; otherwise
    SolutionCheckFailed is raised.
    """
    branch = list(fs.branch)
    _path_check(d, branch)
    if len(fs.choices) != len(branch) - 1:
        raise ArityMismatch(f"{len(fs.choices)} choices for a branch with {len(branch) - 1} edges")
    leaf = d.vertex(branch[-1])
    if fs.terminal.domain != leaf.gens:
        raise ArityMismatch(f"terminal map must be defined on {leaf.gens}")
    result = GeneratorMap.identity(d.vertex(branch[0]).gens)
    for i, (a, b) in enumerate(zip(branch, branch[1:])):
        result = result.then(choice_map(d.vertex(a), fs.choices[i], d.coeffs)).then(d.edge(a, b).map)
    result = result.then(fs.terminal)
    result = GeneratorMap(result.domain, result.images, d.coeffs)
    if d.system is not None and not verify_solution(d.system, result):
        raise SolutionCheckFailed(f"{result} does not solve the diagram system", witness=result)
    return result


def _push(d: HomDiagram, branch: Sequence[str], i: int, w: Word) -> list[tuple[str, Word]]:
    """Images of ``w`` (a word in ``G_{branch[i]}``) at each later branch vertex."""
    out = []
    for a, b in zip(branch[i:], branch[i + 1 :]):
        w = apply_map(d.edge(a, b).map, w)
        out.append((b, w))
    return out


def _known_nontrivial(d: HomDiagram, branch, i, w: Word) -> bool:
    g = d.group(branch[i])
    if g is not None:
        return not g.is_identity(w)
    # a nontrivial image anywhere below certifies w != 1
    for vid, img in _push(d, branch, i, w):
        g = d.group(vid)
        if g is not None and not g.is_identity(img):
            return True
    return False


def _commute_certainly(d, branch, i, u, v) -> bool | None:
    """True/False when decided in ``G_{branch[i+1]}``, False when refuted further down, else None."""
    pu, pv = _push(d, branch, i, u), _push(d, branch, i, v)
    first = True
    for (vid, a), (_, b) in zip(pu, pv):
        g = d.group(vid)
        if g is not None:
            if not g.commutes(a, b):
                return False
            if first:
                return True
        first = False
    return None


def _kernel_search(d, branch, i, gens: Sequence[Word], radius: int) -> Verdict:
    """Look for a nontrivial word in ``<gens>`` killed by ``pi(v_i, v_{i+1})``."""
    symbols = Alphabet([f"s{j}" for j in range(len(gens))])
    sub = GeneratorMap(symbols, list(gens))
    pi = d.edge(branch[i], branch[i + 1]).map
    dst = d.group(branch[i + 1])
    undecided = False
    seen = set()
    for s in ball(symbols, radius)[1:]:
        w = apply_map(sub, s)
        if w in seen or w.is_identity:
            continue
        seen.add(w)
        img = apply_map(pi, w)
        if dst is not None:
            if not dst.is_identity(img):
                continue
        elif any(d.group(v) is not None and not d.group(v).is_identity(x) for v, x in _push(d, branch, i + 1, img)):
            continue
        else:
            undecided = True
            continue
        if _known_nontrivial(d, branch, i, w):
            return Verdict.refuted(w, f"{w} is killed by the edge map out of {branch[i]}")
        undecided = True
    if undecided:
        return Verdict.unknown(radius, "some candidates could not be decided")
    return Verdict.verified(radius, "no kernel element found")


def check_strictness(d: HomDiagram, branch: Sequence[str], radius: int) -> dict[str, Verdict]:
    """Strictness conditions along ``branch``, keyed ``"1"``, ``"2"``, ``"3"``.

    Condition 1: a non-abelian vertex group keeps a non-commuting pair of
    generator images; when every pair of images commutes the verdict is
    Unknown with ``extra["flagged"]`` set and the commuting pairs recorded.
    Conditions 2 and 3 search the named subgroups for kernel elements of
    length at most ``radius``.
    """
    branch = list(branch)
    _path_check(d, branch)
    cond = {"1": [], "2": [], "3": []}
    for i in range(len(branch) - 1):
        v = d.vertex(branch[i])
        if v.decoration is None:
            raise MissingDecoration(f"vertex {v.id} has no decorated splitting")
        dec = v.decoration
        for j, vg in enumerate(dec.vertex_groups):
            if vg.tag == "abelian":
                continue
            results = [(u, w, _commute_certainly(d, branch, i, u, w)) for u, w in combinations(vg.gens, 2)]
            if any(r is False for _, _, r in results):
                cond["1"].append(Verdict.verified(radius, f"{v.id}[{j}] keeps a non-commuting pair"))
            elif results and all(r is True for _, _, r in results):
                cond["1"].append(Verdict.unknown(radius, f"{v.id}[{j}]: every generator image commutes",
                                                 flagged=True, commuting=[(u, w) for u, w, _ in results], vertex=(v.id, j)))
            elif not results:
                cond["1"].append(Verdict.unknown(radius, f"{v.id}[{j}]: cyclic generating set", flagged=True,
                                                 commuting=[], vertex=(v.id, j)))
            else:
                cond["1"].append(Verdict.unknown(radius, f"{v.id}[{j}]: commutation undecided", vertex=(v.id, j)))
        named = [vg.gens for vg in dec.vertex_groups if vg.tag == "rigid"] + [eg.gens for eg in dec.edge_groups]
        for gens in named:
            cond["2"].append(_kernel_search(d, branch, i, gens, radius))
        for j, vg in enumerate(dec.vertex_groups):
            if vg.tag != "rigid":
                continue
            extra: list[Word] = []
            for eg in dec.edge_groups:
                if j in eg.ends:
                    other = eg.ends[1] if eg.ends[0] == j else eg.ends[0]
                    if dec.vertex_groups[other].tag == "abelian":
                        extra += eg.gens
            cond["3"].append(_kernel_search(d, branch, i, list(vg.gens) + extra, radius))
    out = {}
    for k, parts in cond.items():
        v = combine(parts) if parts else Verdict.verified(radius, "nothing to check")
        if v.is_verified:
            v = Verdict.verified(radius, v.detail)
        out[k] = v
    return out


GAMMA_SUFFIX = "~gamma"


def attach_gamma_leaves(d: HomDiagram) -> HomDiagram:
    """Append a Gamma-tagged leaf below every free leaf.

    The new edge is the identity on the leaf generators; coefficients map
    to their images in Gamma, which stays symbolic.
    """
    new_v, new_e = [], []
    for vid in d.leaves():
        leaf = d.vertex(vid)
        if leaf.kind != "free":
            continue
        gid = vid + GAMMA_SUFFIX
        new_v.append(Vertex(gid, "gamma", leaf.gens))
        new_e.append(Edge(vid, gid, GeneratorMap.identity(leaf.gens)))
    return replace(d, vertices=d.vertices + tuple(new_v), edges=d.edges + tuple(new_e))


def strip_gamma_leaves(d: HomDiagram) -> HomDiagram:
    """Remove the leaves added by :func:`attach_gamma_leaves`."""
    gone = {v.id for v in d.vertices if v.kind == "gamma" and v.id.endswith(GAMMA_SUFFIX) and not d.children(v.id)}
    return replace(
        d,
        vertices=tuple(v for v in d.vertices if v.id not in gone),
        edges=tuple(e for e in d.edges if e.dst not in gone),
    )


@dataclass(frozen=True)
class QuotientRecord:
    """An image ``H = phi(G)`` inside an NTQ group.

    ``tower`` is an NTQTower; the last ``t`` of its variables are the
    conjugating variables.  ``images`` are the words ``upsilon_i`` for the
    generators of ``G``.
    """

    tower: object
    images: tuple[Word, ...]
    t: int = 0

    def __post_init__(self):
        names = self.tower.all_vars().names
        if self.t < 0 or self.t > len(names):
            raise ValueError(f"conjugator count {self.t} out of range")
        allowed = set(names) | set(self.tower.coeffs)
        for img in self.images:
            bad = img.generators() - allowed
            if bad:
                raise ValueError(f"image {img} uses {', '.join(sorted(bad))} outside the tower alphabet")

    @property
    def equations(self) -> list[Word]:
        return [eq for lv in self.tower.levels for eq in lv.equations]


def _rename(record: QuotientRecord, plain: str, conj: str) -> tuple[GeneratorMap, list[str], list[str]]:
    names = record.tower.all_vars().names
    r = len(names) - record.t
    new_plain = [f"{plain}{i + 1}" for i in range(r)]
    new_conj = [f"{conj}{i + 1}" for i in range(record.t)]
    m = GeneratorMap(Alphabet(names), [Word.gen(n) for n in new_plain + new_conj])
    return m, new_plain, new_conj


def _conj(parts: list[str]) -> str:
    return " & ".join(parts) if parts else "true"


def build_omega_sentence(h1: QuotientRecord, h2: QuotientRecord) -> str:
    """The sentence asserting that ``phi_1(l_i) -> phi_2(l_i)`` extends.

    ``h2`` supplies the universally quantified variables ``h_j`` and the
    antecedent, ``h1`` the existential ``g_j``, ``gb_j`` and the consequent.
    The output is plain ASCII and depends only on the inputs.

    >>> from grouplab.ntq import NTQLevel, NTQTower
    >>> n1 = NTQTower([NTQLevel("x1", "IV")], "a")
    >>> n2 = NTQTower([NTQLevel("y1", "IV")], "a")
    >>> print(build_omega_sentence(QuotientRecord(n1, (Word.parse("x1"),)), QuotientRecord(n2, (Word.parse("y1^2"),))))
    forall h1 . exists g1 . (true -> g1 = h1^2)
    """
    if len(h1.images) != len(h2.images):
        raise ArityMismatch(f"{len(h1.images)} images against {len(h2.images)}")
    coeffs = set(h1.tower.coeffs) | set(h2.tower.coeffs)
    m1, g, gb = _rename(h1, "g", "gb")
    m2, h, hb = _rename(h2, "h", "hb")
    clash = coeffs & set(g + gb + h + hb)
    if clash:
        raise ValueError(f"coefficient names {sorted(clash)} clash with bound variables")
    universal = h + hb
    existential = g + gb
    ante = [f"{format_word(apply_map(m2, eq))} = 1" for eq in h2.equations]
    cons = [f"{format_word(apply_map(m1, eq))} = 1" for eq in h1.equations]
    cons += [
        f"{format_word(apply_map(m1, u))} = {format_word(apply_map(m2, v))}"
        for u, v in zip(h1.images, h2.images)
    ]
    head = ""
    if universal:
        head += "forall " + " ".join(universal) + " . "
    if existential:
        head += "exists " + " ".join(existential) + " . "
    body_ante = _conj(ante)
    body_cons = _conj(cons)
    if len(ante) > 1:
        body_ante = f"({body_ante})"
    if len(cons) > 1:
        body_cons = f"({body_cons})"
    return f"{head}({body_ante} -> {body_cons})"
