"""Readers for the plain-text input files.

All formats share one layout.  ``#`` starts a comment.  A top-level line
is ``key: value``.  A block is ``head words { key: value; key: value }``
and may span lines; inside a block fields end at ``;`` or a newline.
Keys may repeat; their values are kept in order.

Word lists are comma separated and maps are written ``x -> a b, y -> b``.
Group references are ``free a b``, ``abelian 2`` (generators ``e1, e2``),
``abelian a b`` or ``tower <file>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .autos import GenericFamilySpec
from .equations import EquationSystem
from .errors import GroupLabError, ParseError
from .groups import FreeAbelianGroup, FreeGroup, Group
from .homdiagram import (
    Auto,
    Decoration,
    Edge,
    EdgeGroup,
    FundamentalSequence,
    HomDiagram,
    QuotientRecord,
    Vertex,
    VertexGroup,
)
from .marked import Marking
from .ntq import NTQLevel, NTQTower
from .splittings import AmalgamSplitting, HNNSplitting
from .tower import CentralizerTower
from .words import Alphabet, GeneratorMap, Word, parse_map, parse_word, split_top_level


@dataclass
class Block:
    head: list[str]
    fields: list[tuple[str, str]] = field(default_factory=list)
    line: int = 0

    def get(self, key: str, default: str | None = None) -> str | None:
        vals = self.all(key)
        if len(vals) > 1:
            raise ParseError(f"line {self.line}: field {key!r} given twice")
        return vals[0] if vals else default

    def all(self, key: str) -> list[str]:
        return [v for k, v in self.fields if k == key]

    def need(self, key: str) -> str:
        v = self.get(key)
        if v is None:
            raise ParseError(f"line {self.line}: missing field {key!r}")
        return v

    def keys(self) -> set[str]:
        return {k for k, _ in self.fields}


@dataclass
class Document:
    """Top-level fields plus the blocks, in file order."""

    top: Block
    blocks: list[Block]
    base: Path = Path(".")

    def blocks_named(self, name: str) -> list[Block]:
        return [b for b in self.blocks if b.head and b.head[0] == name]


def _field(text: str, line: int) -> tuple[str, str]:
    if ":" not in text:
        raise ParseError(f"line {line}: expected 'key: value', got {text.strip()!r}")
    key, value = text.split(":", 1)
    key = key.strip()
    if not key or " " in key:
        raise ParseError(f"line {line}: bad key {key!r}")
    return key, value.strip()


def parse_document(text: str, base: Path | str = ".") -> Document:
    top = Block([], line=1)
    blocks: list[Block] = []
    current: Block | None = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        while line.strip():
            if current is None:
                if "{" in line:
                    head, line = line.split("{", 1)
                    words = head.split()
                    if not words:
                        raise ParseError(f"line {n}: block without a name")
                    current = Block(words, line=n)
                    continue
                if "}" in line:
                    raise ParseError(f"line {n}: unmatched '}}'")
                top.fields.append(_field(line, n))
                break
            if "{" in line:
                raise ParseError(f"line {n}: nested blocks are not allowed")
            body, close, rest = line.partition("}")
            for part in body.split(";"):
                if part.strip():
                    current.fields.append(_field(part, n))
            if close:
                blocks.append(current)
                current = None
                line = rest
            else:
                break
    if current is not None:
        raise ParseError(f"line {current.line}: block {' '.join(current.head)!r} is not closed")
    return Document(top, blocks, Path(base))


def read_document(path: str | Path) -> Document:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text, path.parent)


def _wrap(what: str, fn, *args):
    try:
        return fn(*args)
    except ParseError:
        raise
    except (GroupLabError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from None


def word_list(text: str) -> list[Word]:
    return [parse_word(p) for p in split_top_level(text, ",") if p.strip()]


def group_ref(text: str, base: Path = Path(".")) -> Group:
    parts = text.split()
    if not parts:
        raise ParseError("empty group reference")
    kind, rest = parts[0], parts[1:]
    if kind == "free":
        return FreeGroup(Alphabet(rest))
    if kind == "abelian":
        if len(rest) == 1 and rest[0].isdigit():
            return FreeAbelianGroup(int(rest[0]))
        return FreeAbelianGroup(Alphabet(rest))
    if kind == "tower":
        if len(rest) != 1:
            raise ParseError("'tower' takes one file name")
        return read_tower(base / rest[0])
    raise ParseError(f"unknown group kind {kind!r}; use free, abelian or tower")


# ---------------------------------------------------------------- systems


def system_from(block: Block) -> EquationSystem:
    return _wrap("system", EquationSystem, block.get("vars", ""), block.get("coeffs", ""),
                 [parse_word(e) for e in block.all("eq")])


def read_system(path) -> EquationSystem:
    doc = read_document(path)
    return system_from(doc.top)


# ---------------------------------------------------------------- splittings


def splitting_from(doc: Document):
    if len(doc.blocks) != 1:
        raise ParseError("a splitting file holds exactly one hnn or amalgam block")
    b = doc.blocks[0]
    kind = b.head[0]
    if kind == "hnn":
        vertex = group_ref(b.need("vertex"), doc.base)
        right = b.get("right")
        return _wrap("hnn", HNNSplitting, vertex, b.need("stable"), word_list(b.need("edge")),
                     word_list(right) if right is not None else None)
    if kind == "amalgam":
        return _wrap("amalgam", AmalgamSplitting, group_ref(b.need("left"), doc.base),
                     group_ref(b.need("right"), doc.base),
                     word_list(b.need("left_edge")), word_list(b.need("right_edge")))
    raise ParseError(f"line {b.line}: unknown splitting block {kind!r}")


def read_splitting(path):
    return splitting_from(read_document(path))


# ---------------------------------------------------------------- centralizer towers


def read_tower(path) -> CentralizerTower:
    """``base: a b`` then ``level: t | u1, u2`` lines, bottom level first."""
    doc = read_document(path)
    base = doc.top.get("base")
    if base is None:
        raise ParseError(f"{path}: missing 'base:'")
    tower = CentralizerTower(Alphabet(base.split()))
    for entry in doc.top.all("level"):
        stable, sep, gens = entry.partition("|")
        if not sep:
            raise ParseError(f"level {entry!r}: expected 'stable | words'")
        tower = _wrap("tower level", tower.with_level, word_list(gens), stable.strip())
    return tower


# ---------------------------------------------------------------- NTQ towers


def ntq_from(doc: Document) -> tuple[NTQTower, dict[int, GeneratorMap], list[GeneratorMap]]:
    """The tower, the per-level ``witness:`` maps and the top-level ``hom:`` maps."""
    levels, witnesses = [], {}
    for i, b in enumerate(doc.blocks_named("level")):
        lv = _wrap(f"level {i}", NTQLevel, b.get("vars", ""), b.need("form"), b.all("eq"), word_list(b.get("U", "")))
        levels.append(lv)
        w = b.get("witness")
        if w is not None:
            witnesses[i] = parse_map(w)
    if len(levels) != len(doc.blocks):
        raise ParseError("a tower file only holds level blocks")
    tower = NTQTower(levels, doc.top.get("coeffs", ""))
    homs = [parse_map(h) for h in doc.top.all("hom")]
    return tower, witnesses, homs


def read_ntq(path):
    return ntq_from(read_document(path))


def read_record(path) -> QuotientRecord:
    """A tower file with ``t: <count>`` and ``images: w1, w2, ...``."""
    doc = read_document(path)
    tower, _, _ = ntq_from(doc)
    images = word_list(doc.top.get("images", ""))
    t = doc.top.get("t", "0")
    if not t.isdigit():
        raise ParseError(f"t must be a non-negative integer, got {t!r}")
    return _wrap("record", QuotientRecord, tower, tuple(images), int(t))


# ---------------------------------------------------------------- generic families


def read_genfam(path) -> GenericFamilySpec:
    """``vars``, ``coeffs``, ``eq`` as for systems, then repeated ``beta:``
    and ``delta:`` maps, ``tau:``, optional ``lambda: yes``, repeated
    ``theta: <map> | e1 e2 ...`` and ``sigma: <map>``."""
    doc = read_document(path)
    top = doc.top
    system = system_from(top)
    vars = system.vars
    theta = []
    for entry in top.all("theta"):
        m, sep, sched = entry.partition("|")
        try:
            schedule = tuple(int(x) for x in sched.split())
        except ValueError:
            raise ParseError(f"theta schedule {sched.strip()!r} is not a list of integers") from None
        theta.append((parse_map(m, domain=vars), schedule))
    lam = top.get("lambda", "no").lower()
    if lam not in ("yes", "no"):
        raise ParseError("lambda must be yes or no")
    return _wrap(
        "genfam",
        GenericFamilySpec,
        system,
        tuple(parse_map(m, domain=vars) for m in top.all("beta")),
        tuple(parse_map(m, domain=vars) for m in top.all("delta")),
        parse_map(top.need("tau"), domain=vars),
        lam == "yes",
        tuple(theta),
        tuple(parse_map(m, domain=vars) for m in top.all("sigma")),
    )


# ---------------------------------------------------------------- diagrams


def _vertex(b: Block, coeffs: Alphabet) -> Vertex:
    if len(b.head) != 2:
        raise ParseError(f"line {b.line}: expected 'vertex <id> {{ ... }}'")
    vid = b.head[1]
    spec = b.need("group")
    gens_part, _, rels = spec.partition("|")
    words = gens_part.split()
    if not words:
        raise ParseError(f"line {b.line}: empty group field")
    kind, gens = words[0], Alphabet(words[1:])
    autos = []
    for a in b.all("autos"):
        fwd, sep, inv = a.partition("|")
        autos.append(Auto(parse_map(fwd, domain=gens), parse_map(inv, domain=gens) if sep else None))
    vgroups, egroups = [], []
    for s in b.all("splitting"):
        tag, _, rest = s.partition(" ")
        if tag == "edge":
            bits = rest.split(None, 2)
            if len(bits) < 3 or not bits[0].isdigit() or not bits[1].isdigit():
                raise ParseError(f"line {b.line}: expected 'splitting: edge i j words'")
            egroups.append(EdgeGroup((int(bits[0]), int(bits[1])), tuple(word_list(bits[2]))))
        else:
            vgroups.append(_wrap(f"vertex {vid}", VertexGroup, tag, tuple(word_list(rest))))
    for eg in egroups:
        if max(eg.ends) >= len(vgroups):
            raise ParseError(f"vertex {vid}: edge group refers to a missing vertex group")
    decoration = Decoration(tuple(vgroups), tuple(egroups)) if vgroups else None
    return _wrap(f"vertex {vid}", Vertex, vid, kind, gens, tuple(word_list(rels)), tuple(autos), decoration)


def diagram_from(doc: Document) -> HomDiagram:
    coeffs = Alphabet(doc.top.get("coeffs", "").split())
    system = None
    if doc.top.all("eq") or doc.top.get("vars"):
        system = system_from(doc.top)
    vertices, edges = [], []
    for b in doc.blocks:
        if b.head[0] == "vertex":
            vertices.append(_vertex(b, coeffs))
        elif b.head[0] == "edge":
            if len(b.head) != 3:
                raise ParseError(f"line {b.line}: expected 'edge <src> <dst> {{ ... }}'")
            edges.append((b.head[1], b.head[2], b.need("map")))
        else:
            raise ParseError(f"line {b.line}: unknown block {b.head[0]!r}")
    by_id = {v.id: v for v in vertices}
    out = []
    for src, dst, m in edges:
        if src not in by_id:
            raise ParseError(f"edge from unknown vertex {src!r}")
        out.append(Edge(src, dst, parse_map(m, domain=by_id[src].gens)))
    return HomDiagram(coeffs, tuple(vertices), tuple(out), system)


def read_diagram(path) -> HomDiagram:
    return diagram_from(read_document(path))


def read_choices(path, diagram: HomDiagram) -> FundamentalSequence:
    """``branch: v0 v1 ...``, one ``choice:`` line per edge, ``leaf: <map>``."""
    doc = read_document(path)
    branch = tuple(doc.top.need("branch").split())
    choices = []
    for c in doc.top.all("choice"):
        c = c.strip()
        if c in ("", "id", "1"):
            choices.append(())
            continue
        try:
            choices.append(tuple(int(x) for x in c.split()))
        except ValueError:
            raise ParseError(f"choice {c!r} must be signed automorphism indices") from None
    try:
        leaf = diagram.vertex(branch[-1]) if branch else None
    except KeyError:
        raise ParseError(f"unknown leaf {branch[-1]!r}") from None
    gens = leaf.gens if leaf is not None else Alphabet()
    return FundamentalSequence(branch, tuple(choices), parse_map(doc.top.get("leaf", ""), domain=gens))


# ---------------------------------------------------------------- markings


def read_markings(path) -> list[Marking]:
    """``n``, ``target`` and one or more ``images:`` lines (one marking each)."""
    doc = read_document(path)
    n = doc.top.need("n")
    if not n.isdigit():
        raise ParseError(f"n must be a positive integer, got {n!r}")
    target = group_ref(doc.top.need("target"), doc.base)
    rows = doc.top.all("images")
    if not rows:
        raise ParseError(f"{path}: missing 'images:'")
    return [_wrap("marking", Marking, int(n), target, word_list(r)) for r in rows]
