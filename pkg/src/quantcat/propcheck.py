"""Random instances and a replay suite for the lift calculus and the
presheaf-object theory.

Every lemma is checked in its poset form: a 2-cell is an inequality, a
universal property is a largest or least solution, an isomorphism is an
equality of elements or matrices. Each lemma check returns a list of
witnesses; an empty list means the case passed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

from .analysis import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    CheckReport,
    has_rank,
    is_absolute,
    is_dense,
    is_dense_functor,
    is_fully_faithful,
    left_adjoint_via_extension,
    preserves_limit,
    respects,
    respects_limit,
)
from .builders import FiniteCategory, chain_quantale, free_parallel_pair, free_quantaloid, two_quantale, LUKASIEWICZ, FRAME
from .completion import (
    ALL,
    CAUCHY,
    REPRESENTABLES,
    WeightClass,
    cocompletion,
    enumerate_presheaves,
    presheaf_object,
    representables,
)
from .enriched import (
    Presheaf,
    VCategory,
    VDistributor,
    VFunctor,
    Weight,
    companion,
    compose_chain,
    compose_dist,
    compose_functors,
    compose_with_weight,
    conjoint,
    enumerate_functors,
    ext_dist,
    full_subcategory,
    identity_distributor,
    identity_functor,
    lift_dist,
    lift_presheaf,
    object_functor,
    restrict,
    star_category,
    weighted_colimit,
    weighted_limit,
)
from .errors import InputError, ResourceCapError
from .quantaloid import FiniteLattice, Quantaloid

RELATIONS = "relations"
FREE = "free"
CHAIN = "chain"
RECIPES = (RELATIONS, FREE, CHAIN)

DEFAULT_CASES = 50
DEFAULT_PRESHEAF_SAMPLE = 12
ENUMERATION_CAP = 5000
MAX_WITNESSES = 5


@dataclass(frozen=True)
class InstanceSpec:
    """Knobs for random generation. Every size is an upper bound."""

    seed: int = 0
    recipe: str = CHAIN
    max_hom: int = 6
    max_base_objects: int = 3
    max_set_size: int = 2
    max_objects: int = 3
    max_extents: int = 3
    functors: int = 3
    distributors: int = 3
    bottom_bias: float = 0.5

    def rng(self, *salt) -> random.Random:
        return random.Random(":".join(map(str, (self.seed, *salt))))


def _rng_of(spec_or_rng) -> random.Random:
    if isinstance(spec_or_rng, random.Random):
        return spec_or_rng
    if isinstance(spec_or_rng, InstanceSpec):
        return spec_or_rng.rng()
    return random.Random(spec_or_rng)


# -- bases -------------------------------------------------------------------

def relations_quantaloid(sizes: Sequence[int], name: str | None = None) -> Quantaloid:
    """Objects are finite sets of the given sizes, homs all relations ordered by inclusion."""
    objs = [f"S{i}" for i in range(len(sizes))]
    carrier = dict(zip(objs, sizes))

    def rid(rel) -> str:
        return "{" + ",".join(f"{a}>{b}" for a, b in sorted(rel)) + "}"

    homs, rels = {}, {}
    for x, y in product(objs, repeat=2):
        pairs = [(a, b) for a in range(carrier[x]) for b in range(carrier[y])]
        subsets = [frozenset(p for k, p in enumerate(pairs) if mask >> k & 1) for mask in range(1 << len(pairs))]
        rels[(x, y)] = subsets
        covers = [(rid(s), rid(s | {p})) for s in subsets for p in pairs if p not in s]
        homs[(x, y)] = FiniteLattice([rid(s) for s in subsets], covers)
    comp = {}
    for x, y, z in product(objs, repeat=3):
        table = {}
        for g in rels[(y, z)]:
            for f in rels[(x, y)]:
                table[(rid(g), rid(f))] = rid({(a, c) for a, b in f for b2, c in g if b == b2})
        comp[(x, y, z)] = table
    ids = {x: rid({(a, a) for a in range(carrier[x])}) for x in objs}
    return Quantaloid(objs, homs, comp, ids, name=name or "rel" + "".join(map(str, sizes)))


def random_finite_category(rng: random.Random, max_objects: int = 3, max_hom: int = 2) -> FiniteCategory:
    """A small category from random generators between increasing objects, plus maybe an idempotent."""
    while True:
        n = rng.randint(1, max_objects)
        objs = [str(i) for i in range(n)]
        gens, rels = [], []
        for i, j in product(range(n), repeat=2):
            if i < j:
                for k in range(rng.choice([0, 0, 1, 1, 2])):
                    gens.append((f"g{i}{j}{k}", objs[i], objs[j]))
        if rng.random() < 0.4:
            i = rng.randrange(n)
            e = f"e{i}"
            gens.append((e, objs[i], objs[i]))
            rels.append([[e, e], [e]])
        cat = FiniteCategory.from_generators(objs, gens, rels, name="rand")
        if all(len(cat.hom(x, y)) <= max_hom for x, y in product(objs, repeat=2)):
            return cat


def random_quantaloid(spec: InstanceSpec | None = None, rng: random.Random | None = None) -> Quantaloid:
    """A random base built by one of the recipes; homs stay within ``spec.max_hom`` elements."""
    spec = spec or InstanceSpec()
    rng = rng or spec.rng("quantaloid")
    if spec.recipe == CHAIN:
        n = rng.randint(2, max(2, spec.max_hom))
        return chain_quantale(n, rng.choice([FRAME, LUKASIEWICZ]))
    if spec.recipe == RELATIONS:
        k = rng.randint(1, spec.max_base_objects)
        while True:
            sizes = [rng.randint(0, spec.max_set_size) for _ in range(k)]
            if all(2 ** (a * b) <= spec.max_hom for a in sizes for b in sizes):
                return relations_quantaloid(sizes)
    if spec.recipe == FREE:
        bits = max(spec.max_hom.bit_length() - 1, 0)
        cat = random_finite_category(rng, spec.max_base_objects, max_hom=bits)
        return free_quantaloid(cat, max_hom=bits)
    raise InputError(f"unknown recipe {spec.recipe!r}; expected one of {RECIPES}")


# -- categories, functors, distributors ---------------------------------------

def repair_category(base: Quantaloid, objects: Sequence[str], extents: dict, hom: dict) -> dict:
    """Least homs above ``hom`` satisfying the identity and composition inequalities."""
    hom = dict(hom)
    for x in objects:
        v = extents[x]
        hom[(x, x)] = base.join(v, v, [hom[(x, x)], base.identity(v)])
    changed = True
    while changed:
        changed = False
        for x, y, z in product(objects, repeat=3):
            ex, ey, ez = extents[x], extents[y], extents[z]
            c = base.compose(ez, ey, ex, hom[(x, y)], hom[(y, z)])
            if not base.leq(ez, ex, c, hom[(x, z)]):
                hom[(x, z)] = base.join(ez, ex, [c, hom[(x, z)]])
                changed = True
    return hom


def _pick(rng: random.Random, lat: FiniteLattice, bias: float) -> str:
    return lat.bottom if rng.random() < bias else rng.choice(lat.elements)


def random_vcategory(base: Quantaloid, spec: InstanceSpec | None = None, rng: random.Random | None = None,
                     name: str | None = None) -> VCategory:
    spec = spec or InstanceSpec()
    rng = rng or spec.rng("category")
    n = rng.randint(1, spec.max_objects)
    pool = list(base.objects)
    rng.shuffle(pool)
    pool = pool[:max(1, spec.max_extents)]
    objs = [f"a{i}" for i in range(n)]
    ext = {x: rng.choice(pool) for x in objs}
    hom = {(x, y): _pick(rng, base.hom(ext[y], ext[x]), spec.bottom_bias) for x, y in product(objs, repeat=2)}
    return VCategory(base, objs, ext, repair_category(base, objs, ext, hom), name=name)


def repair_distributor(src: VCategory, dst: VCategory, mat: dict) -> dict:
    """Least matrix above ``mat`` closed under both actions."""
    q = src.base
    ea, eb = dst.extents, src.extents
    mat = dict(mat)
    changed = True
    while changed:
        changed = False
        for a2, a, b in product(dst.objects, dst.objects, src.objects):
            c = q.compose(eb[b], ea[a], ea[a2], dst.hom[(a2, a)], mat[(a, b)])
            if not q.leq(eb[b], ea[a2], c, mat[(a2, b)]):
                mat[(a2, b)] = q.join(eb[b], ea[a2], [c, mat[(a2, b)]])
                changed = True
        for a, b, b2 in product(dst.objects, src.objects, src.objects):
            c = q.compose(eb[b2], eb[b], ea[a], mat[(a, b)], src.hom[(b, b2)])
            if not q.leq(eb[b2], ea[a], c, mat[(a, b2)]):
                mat[(a, b2)] = q.join(eb[b2], ea[a], [c, mat[(a, b2)]])
                changed = True
    return mat


def random_distributor(src: VCategory, dst: VCategory, rng: random.Random, bias: float = 0.6) -> VDistributor:
    q = src.base
    mat = {(a, b): _pick(rng, q.hom(src.extents[b], dst.extents[a]), bias)
           for a in dst.objects for b in src.objects}
    return VDistributor(src, dst, repair_distributor(src, dst, mat), check=False)


def random_presheaf(a: VCategory, rng: random.Random, extent: str | None = None) -> Presheaf:
    v = extent if extent is not None else rng.choice(sorted(set(a.extents.values())))
    return random_distributor(star_category(a.base, v), a, rng).column("*")


def random_functor(dom: VCategory, cod: VCategory, rng: random.Random) -> VFunctor | None:
    """A functor found by randomized backtracking, or ``None`` when there is none."""
    q = dom.base
    objs = dom.objects
    assign: dict[str, str] = {}

    def ok(i: int, y: str) -> bool:
        x = objs[i]
        ex = dom.extents[x]
        if not q.leq(ex, ex, dom.hom[(x, x)], cod.hom[(y, y)]):
            return False
        for x2 in objs[:i]:
            y2, e2 = assign[x2], dom.extents[x2]
            if not (q.leq(ex, e2, dom.hom[(x2, x)], cod.hom[(y2, y)])
                    and q.leq(e2, ex, dom.hom[(x, x2)], cod.hom[(y, y2)])):
                return False
        return True

    def go(i: int) -> bool:
        if i == len(objs):
            return True
        choices = cod.objects_of_extent(dom.extents[objs[i]])
        for y in rng.sample(choices, len(choices)):
            if ok(i, y):
                assign[objs[i]] = y
                if go(i + 1):
                    return True
        assign.pop(objs[i], None)
        return False

    return VFunctor(dom, cod, dict(assign)) if go(0) else None


# -- instance universes ------------------------------------------------------

@dataclass
class Instance:
    """A base with a list of categories over it."""

    base: Quantaloid
    categories: list[VCategory] = field(default_factory=list)
    label: str = ""


def default_bases() -> list[Quantaloid]:
    return [two_quantale(), chain_quantale(3, LUKASIEWICZ), free_parallel_pair()]


def default_instances(seed: int = 0, cases: int = DEFAULT_CASES, bases: Sequence[Quantaloid] | None = None,
                      max_objects: int = 3, max_extents: int = 3) -> list[Instance]:
    out = []
    spec = InstanceSpec(seed=seed, max_objects=max_objects, max_extents=max_extents)
    for base in (bases if bases is not None else default_bases()):
        rng = spec.rng("universe", base.name)
        cats = [random_vcategory(base, spec, rng, name=f"{base.name}#{k}") for k in range(cases)]
        out.append(Instance(base, cats, base.name or "base"))
    return out


# -- lemma checks ---------------------------------------------------------------

class _Case:
    """One lemma run on one category, with access to its universe for helper categories."""

    def __init__(self, cat: VCategory, universe: Sequence[VCategory], rng: random.Random, sample: int):
        self.cat = cat
        self.universe = universe
        self.rng = rng
        self.sample = sample

    def other(self) -> VCategory:
        return self.rng.choice(self.universe)

    def dist(self, src: VCategory, dst: VCategory) -> VDistributor:
        return random_distributor(src, dst, self.rng)

    def functor(self, dom: VCategory, cod: VCategory) -> VFunctor | None:
        return random_functor(dom, cod, self.rng)

    def star_functor(self, cod: VCategory) -> VFunctor:
        x = self.rng.choice(cod.objects)
        return object_functor(cod, x)

    def all_presheaves(self, a: VCategory) -> list[Presheaf]:
        return enumerate_presheaves(a, cap=ENUMERATION_CAP)

    def presheaves(self, a: VCategory, extra: Sequence[Presheaf] = ()) -> list[Presheaf]:
        """Representables, ``extra`` and a sample topping up to the sample size."""
        picked = {p.key: p for p in [*representables(a), *extra]}
        try:
            pool = [p for p in self.all_presheaves(a) if p.key not in picked]
        except ResourceCapError:
            pool = [random_presheaf(a, self.rng) for _ in range(self.sample)]
        room = max(self.sample - len(picked), 0)
        for p in (pool if len(pool) <= room else self.rng.sample(pool, room)):
            picked.setdefault(p.key, p)
        return list(picked.values())

    def psh_all(self, a: VCategory):
        res = a.cache.get("psh_all")
        if res is None:
            res = presheaf_object(a, ALL)
            a.cache["psh_all"] = res
        return res


def _diff(p: VDistributor, q: VDistributor) -> list:
    return [(a, b, e, q.mat[(a, b)]) for (a, b), e in sorted(p.mat.items()) if q.mat[(a, b)] != e]


def _l1(c: _Case) -> list:
    """Iterated lifts equal the lift through the chain; the lift is a distributor,
    satisfies the counit inequality and is largest among solutions."""
    a0, a1, a2, b = c.cat, c.other(), c.other(), c.other()
    p1, p2, q = c.dist(a1, a0), c.dist(a2, a1), c.dist(b, a0)
    wit = []
    one = lift_dist(q, [p1])
    two = lift_dist(q, [p1, p2])
    d = _diff(lift_dist(one, [p2]), two)
    if d:
        wit.append(("iterated lift differs", d[:3]))
    if one.validate():
        wit.append(("lift is not a distributor", one.validate()[:3]))
    if not compose_dist(p1, one).leq(q):
        wit.append(("counit fails", _diff(compose_dist(p1, one), q)[:3]))
    if not compose_chain([p1, p2, two]).leq(q):
        wit.append(("chain counit fails",))
    for _ in range(4):
        r = c.dist(b, a1)
        if compose_dist(p1, r).leq(q) and not r.leq(one):
            wit.append(("solution above the lift", _diff(r, one)[:3]))
    return wit


def _l2(c: _Case) -> list:
    """A lift through a chain equals the lift through its composite, at any bracketing."""
    a0, a1, a2, a3, b = c.cat, c.other(), c.other(), c.other(), c.other()
    p1, p2, p3, q = c.dist(a1, a0), c.dist(a2, a1), c.dist(a3, a2), c.dist(b, a0)
    wit = []
    whole = lift_dist(q, [p1, p2])
    d = _diff(whole, lift_dist(q, [compose_dist(p1, p2)]))
    if d:
        wit.append(("two-step chain vs composite", d[:3]))
    three = lift_dist(q, [p1, p2, p3])
    for label, chain in (("left bracket", [compose_dist(p1, p2), p3]),
                         ("right bracket", [p1, compose_dist(p2, p3)]),
                         ("full composite", [compose_chain([p1, p2, p3])])):
        d = _diff(three, lift_dist(q, chain))
        if d:
            wit.append((label, d[:3]))
    return wit


def _l3(c: _Case) -> list:
    """Restricting a lift along functors equals lifting the restricted data."""
    a0, a1, a2, b = c.cat, c.other(), c.other(), c.other()
    p1, p2, q = c.dist(a1, a0), c.dist(a2, a1), c.dist(b, a0)
    whole = lift_dist(q, [p1, p2])
    wit = []
    pairs = [(c.star_functor(a2), c.star_functor(b))]
    g = c.functor(c.other(), a2)
    h = c.functor(c.other(), b)
    if g is not None and h is not None:
        pairs.append((g, h))
    for g, h in pairs:
        lhs = restrict(whole, g, h)
        rhs = lift_dist(restrict(q, None, h), [p1, restrict(p2, None, g)])
        d = _diff(lhs, rhs)
        if d:
            wit.append(("restriction", dict(g.objmap), dict(h.objmap), d[:3]))
    return wit


def _l4(c: _Case) -> list:
    """Composition of distributors is associative and unital, and a weighted
    composite equals the composite with the chain's composite."""
    a, b, cc, d = c.cat, c.other(), c.other(), c.other()
    p, q, r = c.dist(b, a), c.dist(cc, b), c.dist(d, cc)
    wit = []
    left = compose_dist(compose_dist(p, q), r)
    right = compose_dist(p, compose_dist(q, r))
    if _diff(left, right):
        wit.append(("associativity", _diff(left, right)[:3]))
    if _diff(compose_chain([p, q, r]), left):
        wit.append(("chain composite",))
    if _diff(compose_dist(identity_distributor(a), p), p) or _diff(compose_dist(p, identity_distributor(b)), p):
        wit.append(("unit law",))
    if left.validate():
        wit.append(("composite is not a distributor", left.validate()[:3]))
    s = c.dist(a, c.other())
    if _diff(compose_with_weight(s, Weight([p, q, r])), compose_dist(s, compose_chain([p, q, r]))):
        wit.append(("weighted composite",))
    return wit


def _l5(c: _Case) -> list:
    """Homs of the presheaf object are right lifts: ``r <= P(p, q)`` iff ``p . r <= q``."""
    a = c.cat
    base = a.base
    ps = c.presheaves(a)
    wit = []

    for p in ps:
        for q in ps:
            lift = lift_presheaf(q, p)
            via_dist = lift_dist(q.as_distributor(), [p.as_distributor()]).mat[("*", "*")]
            if via_dist != lift:
                wit.append(("lift of columns", p.col, q.col, lift, via_dist))
            for r in base.hom(q.extent, p.extent).elements:
                below = base.leq(q.extent, p.extent, r, lift)
                fits = all(base.leq(q.extent, a.extents[x], base.compose(q.extent, p.extent, a.extents[x], p(x), r), q(x))
                           for x in a.objects)
                if below != fits:
                    wit.append(("galois", p.col, q.col, r, lift))
    return wit


def _l6(c: _Case) -> list:
    """The classifying functor of a distributor is fully faithful iff the distributor is dense."""
    a = c.cat
    res = c.psh_all(a)
    wit = []
    cands = [identity_distributor(a), c.dist(c.other(), a), c.dist(c.other(), a)]
    f = c.functor(c.other(), a)
    if f is not None:
        cands.append(companion(f))
    for p in cands:
        hat = res.classify_distributor(p)
        if is_fully_faithful(hat).ok != is_dense(p).ok:
            wit.append(("ff vs dense", [x.col for x in p.columns()]))
    return wit


def _l7(c: _Case) -> list:
    """Weighted colimits of classified distributors exist in the presheaf object, are given
    by the composite, and are absolute for the projection."""
    a = c.cat
    res = c.psh_all(a)
    b, cc = c.other(), c.other()
    q = c.dist(b, a)
    weights = [Weight([c.dist(cc, b)]), Weight([c.dist(cc, b), c.dist(c.other(), cc)])]
    wit = []
    hat = res.classify_distributor(q)
    for w in weights:
        col = weighted_colimit(w, hat)
        expected = compose_with_weight(q, w)
        for y in w.far_end.objects:
            name = res.classify(expected.column(y))
            if name not in col.witnesses[y]:
                wit.append(("colimit is not the composite", y, expected.column(y).col, col.witnesses[y]))
        if col.found and not is_absolute(res.pi, w, hat, col.as_functor()):
            wit.append(("not absolute for the projection", y))
    return wit


def _l8(c: _Case) -> list:
    """Right lifts through ``j`` respect ``j``-absolute colimits."""
    wit = []
    # projection of the presheaf object, whose colimits are absolute
    a = c.cat
    res = c.psh_all(a)
    b, cc = c.other(), c.other()
    hat = res.classify_distributor(c.dist(b, a))
    w = Weight([c.dist(cc, b)])
    col = weighted_colimit(w, hat)
    if col.found:
        cf = col.as_functor()
        for r in c.presheaves(a):
            lifted = lift_dist(r.as_distributor(), [res.pi])
            if not respects(lifted, w, hat, cf):
                wit.append(("projection lift does not respect", r.col))
    # a random distributor and whatever absolute colimits exist
    e, target = c.cat, c.other()
    j = c.dist(e, target)
    for w, f, cf in _colimits_into(c, e, tries=4):
        if is_absolute(j, w, f, cf):
            for r in c.presheaves(target):
                if not respects(lift_dist(r.as_distributor(), [j]), w, f, cf):
                    wit.append(("lift does not respect an absolute colimit", r.col, dict(f.objmap)))
    return wit


def _colimits_into(c: _Case, e: VCategory, tries: int = 4, extra_domains: Sequence[VCategory] = ()):
    """Existing colimits into ``e``: object functors and random functors with presheaf weights."""
    out = []
    domains = [star_category(e.base, v) for v in sorted(set(e.extents.values()))]
    domains += [c.other() for _ in range(2)] + list(extra_domains)
    for z in domains:
        fs = []
        if len(z) == 1 and z.objects[0] == "*":
            fs = [object_functor(e, x) for x in e.objects_of_extent(z.extents["*"])]
        else:
            for _ in range(tries):
                f = c.functor(z, e)
                if f is not None:
                    fs.append(f)
        if not fs:
            continue
        ws = c.presheaves(z)
        for f in fs:
            for p in ws[:tries + 2]:
                w = p.as_weight()
                col = weighted_colimit(w, f)
                if col.found:
                    out.append((w, f, col.as_functor()))
    return out


def _l9(c: _Case) -> list:
    """A colimit is ``j``-absolute iff every right lift through ``j`` respects it."""
    e, target = c.cat, c.other()
    wit = []
    for j in (c.dist(e, target), identity_distributor(e)):
        tgt = j.dst
        for w, f, cf in _colimits_into(c, e, tries=3):
            probe = compose_with_weight(restrict(j, None, f), w).columns()
            rs = c.presheaves(tgt, extra=probe)
            all_respect = all(respects(lift_dist(r.as_distributor(), [j]), w, f, cf) for r in rs)
            if all_respect != is_absolute(j, w, f, cf):
                wit.append(("absolute vs respecting lifts", dict(f.objmap), all_respect))
    return wit


def _classes(c: _Case, a: VCategory) -> list[tuple[str, object]]:
    z = c.other()
    phi = WeightClass.of([random_presheaf(z, c.rng).as_weight()], a)
    return [(ALL, ALL), (REPRESENTABLES, REPRESENTABLES), (CAUCHY, CAUCHY), ("closure of one weight", phi)]


def _embeddings(c: _Case):
    a = c.cat
    for label, cls in _classes(c, a):
        if isinstance(cls, WeightClass):
            res = cocompletion(a, cls)
            yield label, res.embedding
        else:
            yield label, presheaf_object(a, cls).yoneda


def _l10(c: _Case) -> list:
    """The embedding into a cocompletion is fully faithful."""
    return [(label, r.witnesses[:3]) for label, j in _embeddings(c) if not (r := is_fully_faithful(j)).ok]


def _l11(c: _Case) -> list:
    """The embedding into a cocompletion is dense."""
    return [(label, r.witnesses[:3]) for label, j in _embeddings(c) if not (r := is_dense_functor(j)).ok]


def _l12(c: _Case) -> list:
    """Rank, being a lift through ``E(j, 1)``, and respecting ``j``-absolute colimits."""
    a = c.cat
    cases = [("yoneda", c.psh_all(a).yoneda)]
    subset = c.rng.sample(a.objects, c.rng.randint(1, len(a.objects)))
    cases.append(("full inclusion", full_subcategory(a, subset)[1]))
    f = c.functor(c.other(), a)
    if f is not None:
        cases.append(("random functor", f))
    wit = []
    for label, j in cases:
        d, e = j.dom, j.cod
        ej = conjoint(j)
        ff = is_fully_faithful(j).ok
        dense = ff and is_dense_functor(j).ok
        from_below = c.presheaves(d)
        lifted = [lift_dist(r.as_distributor(), [ej]).column("*") for r in from_below[:4]]
        candidates = {p.key: p for p in [*representables(e)[:6], *lifted,
                                          *(random_presheaf(e, c.rng) for _ in range(4))]}
        absolute = []
        col = weighted_colimit(Weight([ej]), j)
        if col.found and is_absolute(ej, Weight([ej]), j, col.as_functor()):
            absolute.append((Weight([ej]), j, col.as_functor()))
        for w, g, cg in _colimits_into(c, e, tries=2, extra_domains=[d]):
            if is_absolute(ej, w, g, cg):
                absolute.append((w, g, cg))
        try:
            below_all = {}
            for p in candidates.values():
                below_all.setdefault(p.extent, enumerate_presheaves(d, extent=p.extent, cap=ENUMERATION_CAP))
        except ResourceCapError:
            below_all = None
        for p in candidates.values():
            pd = p.as_distributor()
            rank = has_rank(pd, j).ok
            if below_all is None:
                is_lift = rank
            else:
                is_lift = any(lift_dist(r.as_distributor(), [ej]).column("*") == p for r in below_all[p.extent])
            resp = all(respects(pd, w, g, cg) for w, g, cg in absolute)
            if rank and not is_lift:
                wit.append((label, "rank without lift", p.col))
            if is_lift and not resp:
                wit.append((label, "lift does not respect", p.col))
            if ff and is_lift and not rank:
                wit.append((label, "fully faithful: lift without rank", p.col))
            if dense and resp and not rank:
                wit.append((label, "fully faithful and dense: respects without rank", p.col))
    return wit


def _functor_into_members(c: _Case, res, y: VCategory) -> VFunctor | None:
    return c.functor(y, res.psh)


def _l13(c: _Case) -> list:
    """Limits of classified functors in a presheaf object are the right extensions,
    and exist exactly when the extension's columns are members."""
    a = c.cat
    wit = []
    z = c.other()
    phi = WeightClass.of([random_presheaf(z, c.rng).as_weight()], a)
    for label, res in (("all", c.psh_all(a)), ("closure", cocompletion(a, phi).presheaf_object)):
        y, x = c.other(), c.other()
        g = _functor_into_members(c, res, y)
        if g is None:
            continue
        q = restrict(res.pi, None, g)
        for w in (Weight([c.dist(y, x)]), Weight([c.dist(y, c.other())])):
            lim = weighted_limit(w, g)
            ext = ext_dist(q, w)
            for t in w.anchor.objects:
                name = res.classify(ext.column(t))
                if label == "all" and name is None:
                    wit.append((label, "extension column is not a presheaf", t))
                elif (name is not None) != bool(lim.witnesses[t]):
                    wit.append((label, "existence mismatch", t, name, lim.witnesses[t]))
                elif name is not None and name not in lim.witnesses[t]:
                    wit.append((label, "wrong limit", t, name, lim.witnesses[t]))
    return wit


def _l14(c: _Case) -> list:
    """A classified functor preserves every limit its distributor respects."""
    wit = []
    a = c.other()
    res = c.psh_all(a)
    for y in (c.cat, c.psh_all(c.cat).psh):
        q = c.dist(y, a)
        hat = res.classify_distributor(q)
        for _ in range(3):
            zz, x = c.other(), c.other()
            f = c.functor(zz, y)
            if f is None:
                continue
            w = Weight([c.dist(zz, x)])
            lim = weighted_limit(w, f)
            if lim.found and respects_limit(q, w, f, lim) and not preserves_limit(hat, w, f, lim.as_functor()):
                wit.append(("respected limit not preserved", dict(f.objmap)))
    return wit


def _l15(c: _Case) -> list:
    """A reflective full subcategory inherits the colimits of its ambient category, computed by reflecting."""
    wit = []
    for e in (c.cat, c.psh_all(c.cat).psh):
        for _ in range(3):
            subset = c.rng.sample(e.objects, c.rng.randint(1, len(e.objects)))
            sub, inc = full_subcategory(e, subset)
            left = left_adjoint_via_extension(inc)
            if left is None:
                continue
            for w, f, _ in _colimits_into(c, sub, tries=2):
                amb = weighted_colimit(w, compose_functors(f, inc))
                if not amb.found:
                    continue
                inner = weighted_colimit(w, f)
                for t, found in amb.witnesses.items():
                    if left.objmap[found[0]] not in inner.witnesses[t]:
                        wit.append(("reflected colimit missing", sorted(subset), t))
    return wit


def _l16(c: _Case) -> list:
    """For ``l: B -|-> A`` and ``r: A -|-> B``: unit and counit inequalities hold iff
    ``r . p = p <| l`` for all presheaves ``p`` iff ``r = A <| l`` and ``r . l = l <| l``."""
    a, b = c.cat, c.other()
    pairs = []
    f = c.functor(b, a)
    if f is not None:
        pairs.append(("functor", companion(f), conjoint(f)))
    l1 = c.dist(b, a)
    pairs.append(("lift", l1, lift_dist(identity_distributor(a), [l1])))
    l2 = c.dist(b, a)
    pairs.append(("random", l2, c.dist(a, b)))
    wit = []
    for label, left, right in pairs:
        counit = compose_dist(left, right).leq(identity_distributor(a))
        adj = counit and identity_distributor(b).leq(compose_dist(right, left))
        probes = c.presheaves(a, extra=left.columns())
        by_lifts = counit and all(
            compose_dist(right, p.as_distributor()) == lift_dist(p.as_distributor(), [left]) for p in probes)
        closed = (counit and right == lift_dist(identity_distributor(a), [left])
                  and compose_dist(right, left) == lift_dist(left, [left]))
        if not adj == by_lifts == closed:
            wit.append((label, {"adjunction": adj, "lifts": by_lifts, "closed form": closed}))
    return wit


def _l17(c: _Case) -> list:
    """Among dense weight, fully faithful functor, absolute colimit and fully faithful
    colimit, any three imply the fourth."""
    a = c.cat
    res = c.psh_all(a)
    setups = [(res.yoneda, identity_distributor(a)), (res.yoneda, c.dist(c.other(), a))]
    for _ in range(2):
        z = c.other()
        f = c.functor(z, res.psh)
        if f is not None:
            setups.append((f, c.rng.choice([identity_distributor(z), c.dist(c.other(), z)])))
        g = c.functor(z, a)
        if g is not None:
            setups.append((g, c.dist(c.other(), z)))
    wit = []
    for f, p in setups:
        w = Weight([p])
        col = weighted_colimit(w, f)
        if not col.found:
            continue
        cf = col.as_functor()
        flags = {"dense weight": is_dense(p).ok, "fully faithful functor": is_fully_faithful(f).ok,
                 "absolute colimit": is_absolute(conjoint(f), w, f, cf),
                 "fully faithful colimit": is_fully_faithful(cf).ok}
        if sum(flags.values()) == 3:
            missing = next(k for k, v in flags.items() if not v)
            wit.append(("three hold without " + missing, dict(f.objmap),
                        {f"{y},{z}": e for (y, z), e in sorted(p.mat.items())}))
    return wit


def _l18(c: _Case) -> list:
    """For all presheaf weights: cocomplete, reflective in a cocomplete object, the colimit
    of the identity weighted by ``P(y, 1)``, all colimits of the identity, and a left
    adjoint to Yoneda are equivalent."""
    a = c.cat
    res = c.psh_all(a)
    y = res.yoneda
    weights = [p.as_weight() for p in c.all_presheaves(a)]
    endos = enumerate_functors(a, a, cap=ENUMERATION_CAP)
    cocomplete = all(weighted_colimit(w, g).found for g in endos for w in weights)
    ident = identity_functor(a)
    all_of_identity = all(weighted_colimit(w, ident).found for w in weights)
    yoneda_weighted = weighted_colimit(Weight([conjoint(y)]), ident).found
    yoneda_left = left_adjoint_via_extension(y) is not None
    try:
        embeddings = enumerate_functors(a, res.psh, cap=ENUMERATION_CAP)
    except ResourceCapError:
        embeddings = [y]
    reflective = any(is_fully_faithful(r).ok and left_adjoint_via_extension(r) is not None for r in embeddings)
    flags = {"cocomplete": cocomplete, "reflective": reflective, "yoneda-weighted identity": yoneda_weighted,
             "all identity colimits": all_of_identity, "yoneda left adjoint": yoneda_left}
    if len(set(flags.values())) > 1:
        return [("items disagree", flags)]
    return []


LEMMAS: dict[str, tuple[Callable[[_Case], list], str]] = {
    "L1": (_l1, "iterated lifts reduce to one lift; counit and maximality"),
    "L2": (_l2, "lift through a chain equals lift through its composite"),
    "L3": (_l3, "lifts commute with restriction along functors"),
    "L4": (_l4, "composition of distributors is associative and unital"),
    "L5": (_l5, "presheaf-object homs are right lifts"),
    "L6": (_l6, "classifying functor fully faithful iff distributor dense"),
    "L7": (_l7, "colimits in the presheaf object are composites and absolute"),
    "L8": (_l8, "lifts through j respect j-absolute colimits"),
    "L9": (_l9, "j-absolute iff respected by every lift through j"),
    "L10": (_l10, "cocompletion embedding is fully faithful"),
    "L11": (_l11, "cocompletion embedding is dense"),
    "L12": (_l12, "rank, lifts through E(j,1) and respecting absolute colimits"),
    "L13": (_l13, "limits in presheaf objects are right extensions"),
    "L14": (_l14, "classified functors preserve respected limits"),
    "L15": (_l15, "reflective subcategories inherit colimits"),
    "L16": (_l16, "adjunction of distributors iff lift characterisation"),
    "L17": (_l17, "any three of four density conditions imply the fourth"),
    "L18": (_l18, "five characterisations of total cocompleteness agree"),
}


def lemma_ids(only: str | Sequence[str] | None = None) -> list[str]:
    if only is None:
        return list(LEMMAS)
    if isinstance(only, str):
        only = [s.strip() for s in only.split(",") if s.strip()]
    out = []
    for lid in only:
        key = lid.upper()
        if key not in LEMMAS:
            raise InputError(f"unknown lemma id {lid!r}; expected L1..L{len(LEMMAS)}")
        out.append(key)
    return out


def run_case(lemma: str, instance: Instance, index: int, seed: int = 0,
             sample: int = DEFAULT_PRESHEAF_SAMPLE) -> list:
    """Run one lemma on one category of an instance; the unit a counterexample replays."""
    fn, _ = LEMMAS[lemma]
    rng = random.Random(f"{seed}:{lemma}:{instance.label}:{index}")
    return fn(_Case(instance.categories[index], instance.categories, rng, sample))


def lemma_suite(instances: Sequence[Instance] | None = None, which=None, seed: int = 0,
                cases: int = DEFAULT_CASES, sample: int = DEFAULT_PRESHEAF_SAMPLE) -> CheckReport:
    """Replay the chosen lemmas on every category of every instance.

    ``instances=None`` uses the default universe of three bases with
    ``cases`` random categories each. Witnesses carry the base label and
    category index so that ``run_case`` can replay them.
    """
    ids = lemma_ids(which)
    if instances is None:
        instances = default_instances(seed, cases)
    parts = []
    total = sum(len(inst.categories) for inst in instances)
    for lid in ids:
        _, desc = LEMMAS[lid]
        wit, notes, capped = [], [], False
        for inst in instances:
            for k in range(len(inst.categories)):
                try:
                    found = run_case(lid, inst, k, seed, sample)
                except ResourceCapError as exc:
                    capped = True
                    notes.append(f"{inst.label}#{k}: {exc}")
                    continue
                for w in found:
                    if len(wit) < MAX_WITNESSES:
                        wit.append({"base": inst.label, "category": k, "seed": seed, "witness": w})
                if wit:
                    break
            if wit:
                break
        if total == 0:
            notes.append("vacuous: no instances")
        verdict = FAIL if wit else (INCONCLUSIVE if capped else PASS)
        parts.append(CheckReport(f"{lid} {desc}", verdict, wit, notes))
    report = CheckReport.combine("lemma suite", parts)
    if total == 0:
        report.notes.append("vacuous: no instances")
    return report
