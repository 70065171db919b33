"""Acceptance criteria, one test each; every test prints a PASS or FAIL line.

Run ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from grouplab import formats  # noqa: E402
from grouplab.autos import BasicSequenceSpec, basic_sequence, generic_family  # noqa: E402
from grouplab.equations import (  # noqa: E402
    CLOSED_NONORIENTABLE,
    CLOSED_ORIENTABLE,
    PUNCTURED_ORIENTABLE,
    EquationSystem,
    QuadraticForm,
    euler_characteristic,
)
from grouplab.groups import FreeGroup  # noqa: E402
from grouplab.homdiagram import build_omega_sentence, check_strictness  # noqa: E402
from grouplab.marked import distance_at_cutoff  # noqa: E402
from grouplab.ntq import check_nondegenerate, check_regular, validate_structure  # noqa: E402
from grouplab.solver import discriminates, find_solutions, verify_solution  # noqa: E402
from grouplab.splittings import (  # noqa: E402
    HNNSplitting,
    check_generalized_double,
    enumerate_bass_serre,
    same_vertex_coset,
)
from grouplab.tower import CentralizerTower  # noqa: E402
from grouplab.words import GeneratorMap, Word, apply_map, ball, ball_size, parse_map  # noqa: E402

FIXTURES = HERE / "fixtures"


def fx(name: str) -> str:
    return str(FIXTURES / name)


def result_line(number: int, title: str, ok: bool, detail: str) -> str:
    return f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({detail})"


def criterion_1():
    start = time.perf_counter()
    beta, delta = parse_map("x -> x, y -> x y"), parse_map("x -> y x, y -> y")
    comm = Word.parse("[x,y]")
    bad = 0
    for n in range(1, 4):
        for steps in itertools.product(itertools.product((1, 2, 3), repeat=2), repeat=n):
            phi = basic_sequence(BasicSequenceSpec([beta], [delta], steps))[-1]
            bad += apply_map(phi, comm) != comm
    spec = formats.read_genfam(fx("example.genfam"))
    members = generic_family(spec, 3, 3)
    bad += sum(not verify_solution(spec.system, mu) for _, mu in members)
    elapsed = time.perf_counter() - start
    return bad == 0 and len(members) == 9 + 81 + 729 and elapsed < 30, f"{len(members)} members, {bad} failures, {elapsed:.2f}s"


def criterion_2():
    start = time.perf_counter()
    spec = formats.read_genfam(fx("example.genfam"))
    family = [mu for _, mu in generic_family(spec, 2, 3)]
    v = discriminates([Word.parse("x a^-1"), Word.parse("y b^-1")], family)
    elapsed = time.perf_counter() - start
    detail = f"member {v.witness[0]}: {v.witness[1]}" if v.is_verified else v.detail
    return v.is_verified and elapsed < 5, f"{detail}, {elapsed:.2f}s"


def _reduced_strings(n: int, radius: int) -> int:
    letters = [(i, e) for i in range(n) for e in (1, -1)]
    count = 0
    for k in range(radius + 1):
        for p in itertools.product(letters, repeat=k):
            if all(not (x[0] == y[0] and x[1] == -y[1]) for x, y in zip(p, p[1:])):
                count += 1
    return count


def criterion_3():
    rows = []
    for n in (1, 2, 3):
        names = " ".join("abc"[:n])
        for r in range(6):
            formula = ball_size(n, r)
            rows.append(formula == _reduced_strings(n, r) == len(ball(FreeGroup(names).alphabet, r)))
    return all(rows) and ball_size(2, 2) == 17, f"{sum(rows)}/{len(rows)} cases, n=2 R=2 gives {ball_size(2, 2)}"


def criterion_4():
    system = EquationSystem("x", "a b", ["[x,a]"])
    got = [s["x"] for s in find_solutions(system, 2)]
    oracle = []
    letters = [Word.gen(g, e) for g in "ab" for e in (1, -1)]
    candidates = {Word()}
    for first in letters:
        candidates.add(first)
        for second in letters:
            candidates.add(first * second)
    for x in candidates:
        if (x.inverse() * Word.parse("a^-1") * x * Word.parse("a")).is_identity:
            oracle.append(x)
    return len(got) == 5 and set(got) == set(oracle) and len(got) == len(set(got)), f"{len(got)} solutions, oracle {len(oracle)}"


def criterion_5():
    start = time.perf_counter()
    split = HNNSplitting(FreeGroup("a b"), "t", ["a"])
    rng = random.Random(2024)
    letters = [Word.gen(x, e) for x in "ab" for e in (1, -1)]
    t = Word.gen("t")
    failures = 0
    for _ in range(1000):
        base = Word()
        for _ in range(rng.randint(0, 8)):
            base = base * rng.choice(letters)
        w = base
        for _ in range(rng.randint(1, 3)):
            cut = rng.randint(0, len(w))
            w = w[:cut] * t.inverse() * Word.gen("a", rng.choice([-2, -1, 1, 2])) * t * w[cut:]
        plain = Word([x for x in w.letters if x[0] != "t"])
        failures += split.reduce(w) != plain
    elapsed = time.perf_counter() - start
    return failures == 0 and elapsed < 10, f"{failures} failures, {elapsed:.2f}s"


def criterion_6():
    table = [
        (QuadraticForm.of(CLOSED_ORIENTABLE, 2), -2),
        (QuadraticForm.of(PUNCTURED_ORIENTABLE, 0, 1), 0),
        (QuadraticForm.of(CLOSED_NONORIENTABLE, 1), 1),
    ]
    got = [euler_characteristic(f) for f, _ in table]
    return got == [chi for _, chi in table], f"got {got}"


def criterion_7():
    target = FreeGroup("a b")
    split = HNNSplitting(target, "t", ["a"])
    phi = GeneratorMap.from_dict({"t": ""}, split.alphabet, target.alphabet)
    ok = all(check_generalized_double(split, phi, target, r).is_verified for r in range(5))
    mutant = HNNSplitting(target, "t", ["a^2"])
    v = check_generalized_double(mutant, GeneratorMap.from_dict({"t": ""}, mutant.alphabet, target.alphabet), target, 4)
    return ok and v.is_refuted and v.witness == Word.parse("a"), f"mutation witness {v.witness}"


def criterion_8():
    ms = {n: formats.read_markings(fx(n + ".mark"))[0] for n in ("trivial", "aa", "ab", "tower")}
    same = all(
        not (d := distance_at_cutoff(ms["ab"], ms["ab"], r)).exact and math.isclose(d.value, math.exp(-r))
        for r in range(7)
    )
    d1 = distance_at_cutoff(ms["trivial"], ms["aa"], 6)
    d2 = distance_at_cutoff(ms["ab"], ms["aa"], 6)
    triples = 0
    ultra = True
    for x, y, z in itertools.permutations(ms.values(), 3):
        ds = [distance_at_cutoff(p, q, 6) for p, q in ((x, y), (y, z), (x, z))]
        if all(d.exact for d in ds):
            triples += 1
            ultra &= ds[2].value <= max(ds[0].value, ds[1].value) + 1e-12
    ok = same and d1.exact and d1.value == 1.0 and d2.exact and math.isclose(d2.value, math.exp(-1)) and ultra
    return ok and triples > 0, f"{triples} resolvable triples"


def criterion_9():
    tower, witnesses, _ = formats.read_ntq(fx("example.ntq"))
    structure = validate_structure(tower)
    nondeg = check_nondegenerate(tower, witnesses, 2)
    regular = check_regular(tower, 2)
    wit = witnesses[0]
    commutative, cw, _ = formats.read_ntq(fx("commutative.ntq"))
    mutant = check_regular(commutative, 2)
    ok = (
        structure.is_verified
        and nondeg.is_verified
        and (wit["x1"], wit["y1"]) == (Word.parse("a"), Word.parse("b"))
        and regular.is_verified
        and "[x,y]d=1" in regular.detail
        and mutant.is_refuted
    )
    return ok, f"regular: {regular.detail}; mutation: {mutant}"


def criterion_10():
    flagged = check_strictness(formats.read_diagram(fx("abelian_image.diag")), ["v", "l"], 2)["1"]
    killed = check_strictness(formats.read_diagram(fx("edge_kill.diag")), ["v", "l"], 2)["2"]
    ok = flagged.extra.get("flagged", False) and killed.is_refuted and killed.witness == Word.parse("x")
    return ok, f"condition 1 {flagged.status.value}, condition 2 witness {killed.witness}"


def criterion_11():
    golden = (FIXTURES / "omega.golden").read_bytes()
    outs = {
        (build_omega_sentence(formats.read_record(fx("rec1.rec")), formats.read_record(fx("rec2.rec"))) + "\n").encode()
        for _ in range(10)
    }
    return outs == {golden}, f"{len(outs)} distinct outputs"


def criterion_12():
    split = HNNSplitting(FreeGroup("a b"), "t", ["a"])
    tree = enumerate_bass_serre(split, 1, 1, 1)
    tower = CentralizerTower("a b", [(["a"], "t")])
    t = Word.gen("t")
    candidates = [Word()] + [g * t**e for g in ball(FreeGroup("a b").alphabet, 1) for e in (1, -1)]
    oracle = []
    for w in candidates:
        if not any(all(n != "t" for n, _ in tower.reduce(v.inverse() * w).letters) for v in oracle):
            oracle.append(w)
    vertices_ok = len(oracle) == len(tree.vertices) and all(
        sum(same_vertex_coset(split, v, o) for o in oracle) == 1 for v in tree.vertices
    )
    edges_ok = all(
        same_vertex_coset(split, e, tree.vertices[s]) and same_vertex_coset(split, e * t, tree.vertices[d])
        for e, s, d in tree.edges
    )
    return vertices_ok and edges_ok, f"{len(tree.vertices)} vertices, {len(tree.edges)} edges"


CRITERIA = [
    (1, "generic family solves [x,y]=[a,b]", criterion_1),
    (2, "family discriminates x a^-1 and y b^-1", criterion_2),
    (3, "ball-count formula", criterion_3),
    (4, "solver completeness for [x,a]=1", criterion_4),
    (5, "Britton round trip", criterion_5),
    (6, "Euler characteristic table", criterion_6),
    (7, "generalized double check", criterion_7),
    (8, "marked-space distances", criterion_8),
    (9, "NTQ structure, non-degeneracy and regularity", criterion_9),
    (10, "strictness checker", criterion_10),
    (11, "sentence golden file", criterion_11),
    (12, "Bass-Serre enumeration", criterion_12),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    line = result_line(number, title, ok, detail)
    with capsys.disabled():
        print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        print(result_line(number, title, ok, detail))
        failed += not ok
    sys.exit(1 if failed else 0)
