"""Decision procedures for structural predicates, returned as check reports.

Every "for all functors" quantifier is discharged by enumeration with a cap;
running out of budget yields an inconclusive verdict, never a pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .completion import (
    PresheafClass,
    PresheafObjectResult,
    as_weight_class,
    colimit_closure,
    enumerate_presheaves,
)
from .enriched import (
    Colimit,
    Presheaf,
    VCategory,
    VDistributor,
    VFunctor,
    Weight,
    as_weight,
    compose_functors,
    compose_with_weight,
    conjoint,
    enumerate_functors,
    identity_distributor,
    identity_functor,
    lift_dist,
    restrict,
    weighted_colimit,
    weighted_limit,
)
from .errors import ResourceCapError

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

DEFAULT_CAP = 20000


@dataclass
class CheckReport:
    name: str
    verdict: str
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    parts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == PASS

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def from_witnesses(cls, name: str, witnesses: Sequence, notes: Iterable[str] = ()) -> "CheckReport":
        return cls(name, FAIL if witnesses else PASS, list(witnesses), list(notes))

    @classmethod
    def combine(cls, name: str, parts: Sequence["CheckReport"], notes: Iterable[str] = ()) -> "CheckReport":
        verdicts = {p.verdict for p in parts}
        if FAIL in verdicts:
            verdict = FAIL
        elif INCONCLUSIVE in verdicts:
            verdict = INCONCLUSIVE
        else:
            verdict = PASS
        wit = [(p.name, w) for p in parts for w in p.witnesses]
        return cls(name, verdict, wit, list(notes), list(parts))

    def part(self, name: str) -> "CheckReport":
        for p in self.parts:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict}
        if self.witnesses:
            out["witnesses"] = [_plain(w) for w in self.witnesses]
        if self.notes:
            out["notes"] = list(self.notes)
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


def _matrix_diff(p: VDistributor, q: VDistributor) -> list[tuple]:
    return [(a, b, e, q.mat[(a, b)]) for (a, b), e in sorted(p.mat.items()) if q.mat[(a, b)] != e]


def is_fully_faithful(f: VFunctor) -> CheckReport:
    wit = []
    for x in f.dom.objects:
        for y in f.dom.objects:
            a, b = f.dom.hom[(x, y)], f.cod.hom[(f.objmap[x], f.objmap[y])]
            if a != b:
                wit.append((x, y, a, b))
    return CheckReport.from_witnesses("fully faithful", wit)


def is_dense(p: VDistributor) -> CheckReport:
    """``p <| p`` equals the identity distributor on the source."""
    self_lift = lift_dist(p, Weight([p]))
    return CheckReport.from_witnesses("dense", _matrix_diff(self_lift, identity_distributor(p.src)))


def is_dense_functor(f: VFunctor) -> CheckReport:
    r = is_dense(conjoint(f))
    r.name = "dense functor"
    return r


def is_monic(p: VDistributor) -> CheckReport:
    """Distinct source objects of one extent have distinct columns."""
    seen: dict = {}
    wit = []
    for b in p.src.objects:
        key = p.column(b).key
        if key in seen:
            wit.append((seen[key], b))
        else:
            seen[key] = b
    return CheckReport.from_witnesses("monic", wit)


def is_absolute(j: VDistributor, w, f: VFunctor, c: VFunctor) -> bool:
    """``j(1, c) = j(1, f) . w`` for a colimit ``c`` of ``f`` in the source of ``j``."""
    return restrict(j, None, c).mat == compose_with_weight(restrict(j, None, f), w).mat


def respects(p: VDistributor, w, f: VFunctor, c: VFunctor) -> bool:
    """``p(c, 1) = p(f, 1) <| w`` for a colimit ``c`` of ``f`` in the target of ``p``."""
    return restrict(p, c, None).mat == lift_dist(restrict(p, f, None), w).mat


def respects_colimit(p: VDistributor, w, f: VFunctor, colim: Colimit | VFunctor) -> CheckReport:
    c = colim.as_functor() if isinstance(colim, Colimit) else colim
    lhs = restrict(p, c, None)
    rhs = lift_dist(restrict(p, f, None), w)
    return CheckReport.from_witnesses("respects colimit", _matrix_diff(lhs, rhs))


def respects_limit(p: VDistributor, w, f: VFunctor, lim: Colimit | VFunctor) -> bool:
    """``p(1, l) = w |> p(1, f)`` for a limit ``l`` of ``f`` in the source of ``p``."""
    from .enriched import ext_dist

    l = lim.as_functor() if isinstance(lim, Colimit) else lim
    return restrict(p, None, l).mat == ext_dist(restrict(p, None, f), w).mat


def preserves_colimit(g: VFunctor, w, f: VFunctor, c: VFunctor) -> bool:
    col = weighted_colimit(w, compose_functors(f, g))
    return all(g.objmap[c.objmap[y]] in col.witnesses[y] for y in c.dom.objects)


def preserves_limit(g: VFunctor, w, f: VFunctor, l: VFunctor) -> bool:
    lim = weighted_limit(w, compose_functors(f, g))
    return all(g.objmap[l.objmap[y]] in lim.witnesses[y] for y in l.dom.objects)


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def take(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.cap:
            raise ResourceCapError(f"enumeration exceeded {self.cap} candidates", cap=self.cap)


def _colimit_instances(phi, target: VCategory, budget: _Budget):
    """Yield ``(index, weight, functor, colimit)`` for every weight and functor into ``target``."""
    for idx, w in enumerate(phi.weights()):
        for f in enumerate_functors(w.anchor, target, cap=budget.cap):
            budget.take()
            yield idx, w, f, weighted_colimit(w, f)


def is_atom(j: VDistributor, phi, cap: int = DEFAULT_CAP) -> CheckReport:
    """Every weighted colimit of functors into the source of ``j`` exists and is ``j``-absolute."""
    phi = as_weight_class(phi, j.dst)
    wit = []
    try:
        for idx, w, f, col in _colimit_instances(phi, j.src, _Budget(cap)):
            if not col.found:
                wit.append(("missing colimit", idx, dict(f.objmap), col.missing()))
            elif not is_absolute(j, w, f, col.as_functor()):
                wit.append(("not absolute", idx, dict(f.objmap), dict(col.as_functor().objmap)))
    except ResourceCapError as exc:
        return CheckReport("atom", INCONCLUSIVE, wit, [str(exc)])
    notes = [] if len(phi) else ["vacuous: empty class of weights"]
    return CheckReport.from_witnesses("atom", wit, notes)


def has_rank(p: VDistributor, j: VFunctor) -> CheckReport:
    """``p = p(j, 1) <| E(j, 1)`` for ``p`` with target ``E = cod j``."""
    rebuilt = lift_dist(restrict(p, j, None), Weight([conjoint(j)]))
    return CheckReport.from_witnesses("rank", _matrix_diff(p, rebuilt))


def functor_has_rank(f: VFunctor, j: VFunctor) -> CheckReport:
    return has_rank(conjoint(f), j)


def is_exact(p: VDistributor, phi, cap: int = DEFAULT_CAP) -> CheckReport:
    """``p`` respects every existing weighted colimit of functors into its target."""
    phi = as_weight_class(phi, p.dst)
    wit = []
    try:
        for idx, w, f, col in _colimit_instances(phi, p.dst, _Budget(cap)):
            if col.found and not respects(p, w, f, col.as_functor()):
                wit.append((idx, dict(f.objmap), dict(col.as_functor().objmap)))
    except ResourceCapError as exc:
        return CheckReport("exact", INCONCLUSIVE, wit, [str(exc)])
    return CheckReport.from_witnesses("exact", wit)


def is_well_behaved(j: VFunctor, cap: int = DEFAULT_CAP) -> CheckReport:
    """Fully faithful, dense, and an atom for the single weight given by its conjoint."""
    e_j = conjoint(j)
    atom = is_atom(e_j, [Weight([e_j])], cap=cap)
    atom.name = "atom for its conjoint"
    return CheckReport.combine("well-behaved", [is_fully_faithful(j), is_dense_functor(j), atom])


def verify_presheaf_object(result: PresheafObjectResult, cls=None) -> CheckReport:
    """Check a presheaf object against its defining properties."""
    a, psh, pi = result.carrier, result.psh, result.pi
    q = a.base
    parts = []
    parts.append(CheckReport.from_witnesses("category axioms", psh.validate()))
    parts.append(CheckReport.from_witnesses("projection is a distributor", pi.validate()))
    parts.append(is_dense(pi))
    parts.append(is_monic(pi))

    # hom as right lift, through its order-theoretic characterisation
    wit = []
    ext = a.extents
    for n1, p in result.members.items():
        for n2, r in result.members.items():
            h = psh.hom[(n1, n2)]
            for cand in q.homs[(r.extent, p.extent)].elements:
                fits = all(q.leq(r.extent, ext[x], q.compose(r.extent, p.extent, ext[x], px, cand), rx)
                           for x, px, rx in zip(a.objects, p.col, r.col))
                if fits != q.leq(r.extent, p.extent, cand, h):
                    wit.append((n1, n2, cand, h))
                    break
    parts.append(CheckReport.from_witnesses("hom is the right lift", wit))

    wit = []
    for name, p in result.members.items():
        got = result.classify(p)
        if got != name or pi.column(name).key != p.key:
            wit.append((name, got))
    parts.append(CheckReport.from_witnesses("classification is a bijection", wit))

    expected = None
    if cls is not None:
        from .completion import as_presheaf_class

        expected = as_presheaf_class(a, cls)
    wit = []
    for name in psh.objects:
        col = pi.column(name)
        if expected is not None and col not in expected:
            wit.append((name, "column outside the class"))
    if expected is not None:
        have = {pi.column(n).key for n in psh.objects}
        wit.extend(("member without object", p.col) for p in expected if p.key not in have)
    parts.append(CheckReport.from_witnesses("projection columns are the class", wit))
    return CheckReport.combine("presheaf object", parts)


def _exact_constraints(colimits):
    """Constraint tuples ``(involved objects, weight, f, c)`` for exactness of presheaves."""
    out = []
    for w, f, c in colimits:
        involved = set(f.objmap.values()) | set(c.objmap.values())
        out.append((frozenset(involved), w, f, c))
    return out



def _exact_extensions(e: VCategory, extent: str, fixed: dict, constraints, budget: _Budget) -> list[Presheaf]:
    """Presheaves on ``e`` with the given pinned values that respect every constraint."""
    q = e.base
    objs = list(fixed) + [x for x in e.objects if x not in fixed]
    pos = {x: i for i, x in enumerate(objs)}
    ext = e.extents
    by_last: dict[int, list] = {}
    for involved, w, f, c in constraints:
        last = max(pos[x] for x in involved)
        by_last.setdefault(last, []).append((w, f, c))
    val: dict[str, str] = {}
    out = []

    def partial_ok(i: int) -> bool:
        x = objs[i]
        e_x = val[x]
        for j in range(i + 1):
            y = objs[j]
            if not q.leq(extent, ext[y], q.compose(extent, ext[x], ext[y], e.hom[(y, x)], e_x), val[y]):
                return False
            if not q.leq(extent, ext[x], q.compose(extent, ext[y], ext[x], e.hom[(x, y)], val[y]), e_x):
                return False
        for w, f, c in by_last.get(i, ()):
            if not _respects_partial(e, extent, val, w, f, c):
                return False
        return True

    def go(i: int) -> None:
        if i == len(objs):
            budget.take()
            out.append(Presheaf(e, extent, [val[x] for x in e.objects]))
            return
        x = objs[i]
        choices = [fixed[x]] if x in fixed else q.homs[(extent, ext[x])].elements
        for el in choices:
            val[x] = el
            if partial_ok(i):
                go(i + 1)
        val.pop(x, None)

    go(0)
    return out


def _respects_partial(e: VCategory, extent: str, val: dict, w, f: VFunctor, c: VFunctor) -> bool:
    """Respect check that only reads the values at ``f``'s and ``c``'s images."""
    from .enriched import star_category

    q = e.base
    star = star_category(q, extent)
    z = f.dom
    lhs_src = VDistributor(star, z, {(x, "*"): val[f.objmap[x]] for x in z.objects}, check=False)
    lifted = lift_dist(lhs_src, w)
    far = c.dom
    return all(lifted.mat[(y, "*")] == val[c.objmap[y]] for y in far.objects)


def verify_cocompletion(j: VFunctor, phi, cap: int = DEFAULT_CAP, closure: PresheafClass | None = None) -> CheckReport:
    """Intrinsic characterisation of free cocompletions, checked on the instance.

    Clauses: weighted colimits exist; the conjoint's columns lie in the colimit
    closure (certified via closure rules only); right lifts through the conjoint
    are exact; the embedding is dense and fully faithful; and each presheaf on
    the domain has exactly one exact extension along the embedding.
    """
    a, e = j.dom, j.cod
    phi = as_weight_class(phi, a)
    budget = _Budget(cap)
    parts = []
    e_j = conjoint(j)

    colimits = []
    wit = []
    try:
        for idx, w, f, col in _colimit_instances(phi, e, budget):
            if not col.found:
                wit.append((idx, dict(f.objmap), col.missing()))
            else:
                colimits.append((w, f, col.as_functor()))
        parts.append(CheckReport.from_witnesses("weighted colimits exist", wit))
    except ResourceCapError as exc:
        parts.append(CheckReport("weighted colimits exist", INCONCLUSIVE, wit, [str(exc)]))
        return CheckReport.combine("cocompletion", parts, ["enumeration budget exhausted"])

    try:
        cl = closure if closure is not None else colimit_closure(a, phi)
        outside = [x for x in e.objects if e_j.column(x) not in cl]
        if outside:
            parts.append(CheckReport("conjoint in colimit closure", INCONCLUSIVE, [],
                                     [f"columns at {outside} are not produced by the closure rules; "
                                      "membership in the saturation is not decided"]))
        else:
            parts.append(CheckReport("conjoint in colimit closure", PASS, [], ["certified via closure rules"]))
    except ResourceCapError as exc:
        parts.append(CheckReport("conjoint in colimit closure", INCONCLUSIVE, [], [str(exc)]))

    presheaves = enumerate_presheaves(a)
    lifts = {}
    wit = []
    for p in presheaves:
        lifted = lift_dist(p.as_distributor(), Weight([e_j]))
        lp = lifted.column("*")
        lifts[p.key] = lp
        for w, f, c in colimits:
            if not respects(lifted, w, f, c):
                wit.append((p.col, dict(f.objmap)))
                break
    parts.append(CheckReport.from_witnesses("lifts through the conjoint are exact", wit))
    parts.append(is_dense_functor(j))
    parts.append(is_fully_faithful(j))

    constraints = _exact_constraints(colimits)
    wit = []
    try:
        for p in presheaves:
            fixed = {}
            clash = False
            for x, v in zip(a.objects, p.col):
                y = j.objmap[x]
                if fixed.get(y, v) != v:
                    clash = True
                fixed[y] = v
            found = [] if clash else _exact_extensions(e, p.extent, fixed, constraints, budget)
            keys = {r.key for r in found}
            if keys != {lifts[p.key].key}:
                wit.append((p.col, sorted(r.col for r in found)))
        parts.append(CheckReport.from_witnesses("unique exact extension", wit))
    except ResourceCapError as exc:
        parts.append(CheckReport("unique exact extension", INCONCLUSIVE, wit, [str(exc)]))
    return CheckReport.combine("cocompletion", parts)


def relative_adjunction_check(left: VFunctor, right: VFunctor, root: VFunctor) -> CheckReport:
    """``C(l, 1) = E(j, r)`` for ``l: A -> C``, ``r: C -> E`` and root ``j: A -> E``."""
    lhs = restrict(identity_distributor(left.cod), left, None)
    rhs = restrict(identity_distributor(root.cod), root, right)
    return CheckReport.from_witnesses("relative adjunction", _matrix_diff(lhs, rhs))


def right_adjoint_via_extension(f: VFunctor) -> VFunctor | None:
    """The colimit of the identity weighted by ``B(f, 1)``, kept when it is a right adjoint."""
    col = weighted_colimit(Weight([conjoint(f)]), identity_functor(f.dom))
    if not col.found:
        return None
    g = col.as_functor()
    a, b = f.dom, f.cod
    for x in a.objects:
        for y in b.objects:
            if b.hom[(f.objmap[x], y)] != a.hom[(x, g.objmap[y])]:
                return None
    return g


def left_adjoint_via_extension(f: VFunctor) -> VFunctor | None:
    """Right adjoint of the opposite functor, read back in the original categories."""
    g = right_adjoint_via_extension(f.dual)
    if g is None:
        return None
    return VFunctor(f.cod, f.dom, g.objmap)
