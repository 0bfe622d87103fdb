"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import preorder  # noqa: E402
from oracles import (  # noqa: E402
    all_copresheaf_rows,
    all_presheaf_columns,
    final_lift_failures,
    left_adjoint_by_scan,
    sheafify_by_plus,
)
from quantcat.analysis import (  # noqa: E402
    FAIL,
    _Budget,
    _colimit_instances,
    is_absolute,
    is_dense_functor,
    is_fully_faithful,
    verify_cocompletion,
    verify_presheaf_object,
)
from quantcat.builders import (  # noqa: E402
    LUKASIEWICZ,
    ConcreteCategory,
    FiniteCategory,
    SetPresheaf,
    chain_quantale,
    cover_site,
    faithful_to_vcat,
    free_quantaloid,
    idempotent_site,
    parallel_pair_category,
    set_presheaf_isomorphism,
    sheaf_problems,
    sheafify,
    trivial_site,
    two_quantale,
    vcat_to_faithful,
)
from quantcat.completion import (  # noqa: E402
    ALL,
    LEFT_ADJOINTS,
    REPRESENTABLES,
    WeightClass,
    cauchy_completion,
    cocompletion,
    completion,
    presheaf_object,
    representables,
)
from quantcat.enriched import Presheaf, VCategory  # noqa: E402
from quantcat.propcheck import (  # noqa: E402
    RECIPES,
    InstanceSpec,
    default_instances,
    lemma_suite,
    random_quantaloid,
    random_vcategory,
)

RESULTS = {}
# functor enumeration budget; the largest random cocompletion has 18 objects
ACCEPTANCE_CAP = 500_000


def announce(number, title, ok, detail, seconds, budget):
    within = seconds < budget
    verdict = "PASS" if ok and within else "FAIL"
    line = f"criterion {number} ({title}): {verdict} | {detail} | {seconds:.1f}s of {budget}s"
    RESULTS[number] = line
    if _CAPTURE:
        with _CAPTURE[0].disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)
    return ok and within


_CAPTURE = []


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    """Let the one-line verdicts through pytest's output capture."""
    _CAPTURE[:] = [capsys]
    yield
    _CAPTURE.clear()


# -- shared instances ---------------------------------------------------------

def discrete_pair():
    return preorder(["a", "b"], set())


def chain3():
    return preorder(["a", "b", "c"], {("a", "b"), ("b", "c"), ("a", "c")})


def top_weight(a):
    """The constant-top presheaf at the extent of the first object, as a weight class."""
    v = a.extents[a.objects[0]]
    q = a.base
    col = tuple(q.hom(v, a.extents[x]).top for x in a.objects)
    return WeightClass.of([Presheaf(a, v, col).as_weight()], a)


def random_instances(count=12):
    bases = [two_quantale(), chain_quantale(3, LUKASIEWICZ)]
    out = []
    for k in range(count):
        base = bases[k % 2]
        rng = random.Random(f"acceptance:{k}")
        out.append(random_vcategory(base, InstanceSpec(max_objects=3), rng, name=f"{base.name}#{k}"))
    return out


def theorem_instances():
    """(label, category, weight class, expected object count or None) for criteria 4, 5 and 7."""
    cases = []
    for label, a, count in [("discrete pair", discrete_pair(), 4), ("3-chain", chain3(), 4)]:
        cases.append((label + " ALL", a, WeightClass.named(a, ALL), count))
    d = discrete_pair()
    cases.append(("discrete pair top weight", d, top_weight(d), 3))
    c = chain3()
    cases.append(("3-chain representables", c, WeightClass.named(c, REPRESENTABLES), 3))
    for a in random_instances():
        cases.append((a.name + " ALL", a, WeightClass.named(a, ALL), len(all_presheaf_columns_any(a))))
        cases.append((a.name + " top weight", a, top_weight(a), None))
    return cases


def all_presheaf_columns_any(a):
    return [(v, col) for v in a.base.objects for col in all_presheaf_columns(a, v)]


# -- criteria -----------------------------------------------------------------

def test_criterion_1_residuation_soundness():
    start = time.perf_counter()
    bad, bases, cells = [], 0, 0
    for k in range(120):
        q = random_quantaloid(InstanceSpec(seed=k, recipe=RECIPES[k % 3], max_hom=6))
        bases += 1
        assert all(len(lat.elements) <= 6 for lat in q.homs.values())
        for x, y, z in product(q.objects, repeat=3):
            hxy, hyz, hxz = q.hom(x, y), q.hom(y, z), q.hom(x, z)
            for h in hxz.elements:
                for g in hyz.elements:
                    lift = q.right_lift(x, y, z, h, g)
                    for r in hxy.elements:
                        cells += 1
                        if q.leq(x, z, q.compose(x, y, z, g, r), h) != q.leq(x, y, r, lift):
                            bad.append((q.name, "lift", x, y, z, h, g, r))
                for f in hxy.elements:
                    ext = q.right_extension(x, y, z, h, f)
                    for r in hyz.elements:
                        if q.leq(x, z, q.compose(x, y, z, r, f), h) != q.leq(y, z, r, ext):
                            bad.append((q.name, "extension", x, y, z, h, f, r))
    elapsed = time.perf_counter() - start
    ok = not bad and bases >= 100
    assert announce(1, "residuation soundness", ok,
                    f"{bases} quantaloids, {cells} lift triples, {len(bad)} violations", elapsed, 10), bad[:3]


def test_criterion_2_lift_calculus():
    start = time.perf_counter()
    rep = lemma_suite(default_instances(seed=0, cases=50), which="L1,L2,L3,L4", seed=0)
    elapsed = time.perf_counter() - start
    detail = ", ".join(f"{p.name.split()[0]} {p.verdict}" for p in rep.parts)
    assert announce(2, "lift calculus L1-L4", rep.ok, detail, elapsed, 60), rep.to_json()


def _perturbed(res, rng):
    psh = res.psh
    key = rng.choice(sorted(psh.hom))
    x, y = key
    lat = psh.base.hom(psh.extents[y], psh.extents[x])
    hom = dict(psh.hom)
    hom[key] = rng.choice([e for e in lat.elements if e != hom[key]])
    broken = VCategory(psh.base, psh.objects, psh.extents, hom)
    return type(res)(res.carrier, broken, res.pi, res.members, res.yoneda)


def test_criterion_3_presheaf_object_correctness():
    start = time.perf_counter()
    bases = [two_quantale(), chain_quantale(3)]
    failures, caught, runs = [], 0, 0
    for k in range(24):
        rng = random.Random(f"criterion3:{k}")
        a = random_vcategory(bases[k % 2], InstanceSpec(max_objects=3), rng)
        for cls in (ALL, REPRESENTABLES, LEFT_ADJOINTS):
            res = presheaf_object(a, cls)
            runs += 1
            if not verify_presheaf_object(res, cls).ok:
                failures.append((k, cls))
            if verify_presheaf_object(_perturbed(res, rng), cls).verdict == FAIL:
                caught += 1
    elapsed = time.perf_counter() - start
    ok = not failures and caught == runs
    assert announce(3, "presheaf-object correctness", ok,
                    f"{runs} verified, {len(failures)} failed, mutations caught {caught}/{runs}",
                    elapsed, 60), failures


def test_criterion_4_cocompletion_theorem():
    start = time.perf_counter()
    problems = []
    cases = theorem_instances()
    for label, a, phi, count in cases:
        co = cocompletion(a, phi)
        if count is not None and len(co.category) != count:
            problems.append((label, "object count", len(co.category), count))
        rep = verify_cocompletion(co.embedding, phi, cap=ACCEPTANCE_CAP, closure=co.closure)
        if not rep.ok:
            problems.append((label, rep.verdict, rep.witnesses[:2]))
    d = discrete_pair()
    _, full = cocompletion(d, ALL)
    against_full = verify_cocompletion(full, top_weight(d))
    uniqueness = against_full.part("unique exact extension").verdict
    if uniqueness != FAIL:
        problems.append(("full presheaf object vs top weight", "uniqueness clause", uniqueness))
    elapsed = time.perf_counter() - start
    assert announce(4, "cocompletion theorem", not problems,
                    f"{len(cases)} runs, full object vs top weight: uniqueness {uniqueness}, "
                    f"{len(problems)} problems", elapsed, 120), problems


def test_criterion_5_embedding_properties():
    start = time.perf_counter()
    problems, colimits = [], 0
    for label, a, phi, _ in theorem_instances():
        co = cocompletion(a, phi)
        if not is_fully_faithful(co.embedding).ok:
            problems.append((label, "not fully faithful"))
        if not is_dense_functor(co.embedding).ok:
            problems.append((label, "not dense"))
        pi = co.presheaf_object.pi
        for _, w, f, col in _colimit_instances(phi, co.category, _Budget(ACCEPTANCE_CAP)):
            if col.found:
                colimits += 1
                if not is_absolute(pi, w, f, col.as_functor()):
                    problems.append((label, "colimit not absolute", dict(f.objmap)))
    elapsed = time.perf_counter() - start
    assert announce(5, "embedding properties", not problems,
                    f"{colimits} colimits checked for absoluteness, {len(problems)} problems",
                    elapsed, 120), problems[:5]


def test_criterion_6_cauchy_over_two():
    start = time.perf_counter()
    problems = []
    count = 25
    for k in range(count):
        a = random_vcategory(two_quantale(), InstanceSpec(max_objects=4), random.Random(f"criterion6:{k}"))
        res = cauchy_completion(a)
        got = {p.key for p in res.members.values()}
        reps = {p.key for p in representables(a)}
        scanned = {p.key for p in presheaves_with_scanned_adjoint(a)}
        if got != reps or scanned != reps:
            problems.append((k, len(got), len(reps), len(scanned)))
        # essential surjectivity: every object is isomorphic to a representable
        for n in res.psh.objects:
            if not any(res.psh.hom[(n, res.yoneda.objmap[x])] == "1" == res.psh.hom[(res.yoneda.objmap[x], n)]
                       for x in a.objects):
                problems.append((k, "not essentially surjective", n))
    elapsed = time.perf_counter() - start
    assert announce(6, "Cauchy completion over 2", not problems,
                    f"{count} preorders, {len(problems)} mismatches", elapsed, 30), problems


def presheaves_with_scanned_adjoint(a):
    from quantcat.completion import enumerate_presheaves

    return [p for p in enumerate_presheaves(a) if left_adjoint_by_scan(p)]


def test_criterion_7_duality():
    start = time.perf_counter()
    problems, cases = [], theorem_instances()
    for label, a, phi, _ in cases:
        res = completion(a, phi)
        if res.category != cocompletion(a.dual, phi.dual).category.dual:
            problems.append((label, "not the opposite of the dual cocompletion"))
        q = a.base
        ext = a.extents
        # independent hom formula: largest r with r . q2 <= q1 pointwise
        for n1, q1 in res.members.items():
            for n2, q2 in res.members.items():
                v1, v2 = q1.extent, q2.extent
                expect = q.meet(v2, v1, [q.right_extension(ext[x], v2, v1, e1, e2)
                                         for x, e1, e2 in zip(a.objects, q1.row, q2.row)])
                if res.category.hom[(n1, n2)] != expect:
                    problems.append((label, n1, n2))
        if phi.family == ALL:
            rows = {(v, r) for v in q.objects for r in all_copresheaf_rows(a, v)}
            if {(m.extent, m.row) for m in res.members.values()} != rows:
                problems.append((label, "members differ from the copresheaf scan"))
    elapsed = time.perf_counter() - start
    assert announce(7, "completion duality", not problems,
                    f"{len(cases)} instances, {len(problems)} mismatches", elapsed, 120), problems[:5]


def site_cases():
    cover = cover_site()
    cc = cover.category
    idem = idempotent_site()
    pair = trivial_site(parallel_pair_category())
    three = trivial_site(FiniteCategory.from_generators(["0", "1", "2"], [("f", "0", "1"), ("g", "1", "2")]))
    return [
        ("trivial parallel pair", pair, SetPresheaf.from_generators(
            pair.category, {"0": ["u", "v"], "1": ["w"]}, {"f": {"w": "u"}, "g": {"w": "v"}})),
        ("trivial 3-object chain", three, SetPresheaf.from_generators(
            three.category, {"0": ["x"], "1": ["y", "z"], "2": ["t"]}, {"f": {"y": "x", "z": "x"}, "g": {"t": "y"}})),
        ("cover, separated not sheaf", cover, SetPresheaf.from_generators(
            cc, {"0": [], "a": ["p"], "b": ["q"]}, {})),
        ("cover, not separated", cover, SetPresheaf.from_generators(
            cc, {"0": ["s", "t"], "a": ["p"], "b": ["q"]}, {"ia": {"s": "p", "t": "p"}, "ib": {"s": "q", "t": "q"}})),
        ("cover, already a sheaf", cover, SetPresheaf.from_generators(
            cc, {"0": ["s1", "s2"], "a": ["p1", "p2"], "b": ["q"]},
            {"ia": {"s1": "p1", "s2": "p2"}, "ib": {"s1": "q", "s2": "q"}})),
        ("idempotent", idem, SetPresheaf.from_generators(
            idem.category, {"*": ["x", "y", "z"]}, {"e": {"x": "x", "y": "x", "z": "z"}})),
    ]


def test_criterion_8_sheafification():
    start = time.perf_counter()
    problems = []
    cases = site_cases()
    for label, site, f in cases:
        sh = sheafify(site, f)
        if sheaf_problems(site, sh):
            problems.append((label, "sheaf condition"))
        if set_presheaf_isomorphism(sheafify(site, sh), sh) is None:
            problems.append((label, "not idempotent"))
        if set_presheaf_isomorphism(sh, sheafify_by_plus(site, f)) is None:
            problems.append((label, "differs from the plus construction"))
    elapsed = time.perf_counter() - start
    assert announce(8, "sheafification", not problems,
                    f"{len(cases)} presheaves on {len({id(s) for _, s, _ in cases})} sites, {len(problems)} problems",
                    elapsed, 30), problems


def test_criterion_9_topological_functors():
    start = time.perf_counter()
    b = FiniteCategory.from_generators(["0", "1", "2"], [("f", "0", "1"), ("g", "0", "1"), ("h", "1", "2")])
    conc = ConcreteCategory(b, ("x", "y"), {"x": "0", "y": "1"},
                            {("x", "x"): {"1_0"}, ("y", "y"): {"1_1"}, ("x", "y"): {"f"}})
    before = sum(len(final_lift_failures(conc, t, 99)) for t in b.objects)
    co = cocompletion(faithful_to_vcat(conc, free_quantaloid(b)), ALL)
    back = vcat_to_faithful(co.category, b)
    problems = back.validate()
    after = {t: final_lift_failures(back, t, 99) for t in b.objects}
    problems += [(t, s) for t, fails in after.items() for s in fails]
    elapsed = time.perf_counter() - start
    ok = not problems and before > 0
    assert announce(9, "topological functors", ok,
                    f"{len(back.objects)} objects after completion, sinks without final lift: "
                    f"{before} before, {len(problems)} after", elapsed, 60), problems[:5]


@pytest.mark.slow
def test_criterion_10_full_lemma_suite():
    start = time.perf_counter()
    rep = lemma_suite(seed=0)
    elapsed = time.perf_counter() - start
    failed = [p.name.split()[0] for p in rep.parts if not p.ok]
    detail = f"{len(rep.parts) - len(failed)}/{len(rep.parts)} lemmas pass"
    if failed:
        first = rep.part(next(p.name for p in rep.parts if not p.ok)).witnesses[0]
        detail += f"; failing {failed}, first witness {first}"
    assert announce(10, "full lemma suite", rep.ok, detail, elapsed, 300), rep.to_json()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
