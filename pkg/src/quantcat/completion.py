"""Presheaf objects, colimit closures and free (co)completions.

Objects of a presheaf object are class members stored by value, so two
members are the same object exactly when their columns agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .enriched import (
    Copresheaf,
    Presheaf,
    VCategory,
    VDistributor,
    VFunctor,
    Weight,
    as_weight,
    lift_presheaf,
)
from .errors import InputError, ResourceCapError

ALL = "all"
CAUCHY = "cauchy"
# presheaves with a right adjoint are exactly the Cauchy weights
LEFT_ADJOINTS = CAUCHY
REPRESENTABLES = "representables"
FAMILIES = (ALL, CAUCHY, REPRESENTABLES)

DEFAULT_CLOSURE_CAP = 10000


def representable(a: VCategory, x: str) -> Presheaf:
    """The column ``A(-, x)`` of extent ``ext(x)``."""
    return Presheaf(a, a.extents[x], tuple(a.hom[(y, x)] for y in a.objects))


def representables(a: VCategory) -> list[Presheaf]:
    return [representable(a, x) for x in a.objects]


def is_presheaf(p: Presheaf) -> bool:
    a = p.carrier
    q = a.base
    v = p.extent
    ext = a.extents
    for i, x in enumerate(a.objects):
        for j, y in enumerate(a.objects):
            c = q.compose(v, ext[x], ext[y], a.hom[(y, x)], p.col[i])
            if not q.leq(v, ext[y], c, p.col[j]):
                return False
    return True


def enumerate_presheaves(a: VCategory, extent: str | None = None, fixed: Mapping[str, str] | None = None,
                         cap: int | None = None) -> list[Presheaf]:
    """Every presheaf on ``a`` (of one extent, when given), sorted by extent then column.

    ``fixed`` pins the value at some objects; ``cap`` bounds the result size.
    """
    q = a.base
    extents = [extent] if extent is not None else list(q.objects)
    use_cache = not fixed
    out: list[Presheaf] = []
    for v in extents:
        if v not in q.objects:
            raise InputError(f"{v!r} is not an object of the base")
        key = ("presheaves", v)
        if use_cache and key in a.cache:
            out.extend(a.cache[key])
            if cap is not None and len(out) > cap:
                raise ResourceCapError(f"more than {cap} presheaves", cap=cap)
            continue
        found = _presheaves_of_extent(a, v, fixed or {}, None if cap is None else cap - len(out))
        found.sort(key=lambda p: p.col)
        if use_cache:
            a.cache[key] = found
        out.extend(found)
    return out


def _presheaves_of_extent(a: VCategory, v: str, fixed: Mapping[str, str], cap: int | None) -> list[Presheaf]:
    q = a.base
    objs = a.objects
    ext = a.extents
    n = len(objs)
    col: list[str] = [""] * n
    out: list[Presheaf] = []

    def ok(i: int) -> bool:
        x, e = objs[i], col[i]
        for j in range(i + 1):
            y = objs[j]
            # A(y, x) . p(x) <= p(y) and A(x, y) . p(y) <= p(x)
            if not q.leq(v, ext[y], q.compose(v, ext[x], ext[y], a.hom[(y, x)], e), col[j]):
                return False
            if not q.leq(v, ext[x], q.compose(v, ext[y], ext[x], a.hom[(x, y)], col[j]), e):
                return False
        return True

    def go(i: int) -> None:
        if i == n:
            if cap is not None and len(out) >= cap:
                raise ResourceCapError(f"more than {cap} presheaves", cap=cap)
            out.append(Presheaf(a, v, col))
            return
        x = objs[i]
        choices = [fixed[x]] if x in fixed else q.homs[(v, ext[x])].elements
        for e in choices:
            col[i] = e
            if ok(i):
                go(i + 1)

    go(0)
    return out


def is_left_adjoint_presheaf(p: Presheaf) -> Copresheaf | None:
    """The largest copresheaf right adjoint to ``p``, or ``None``.

    The counit condition ``p(a) . q(a') <= A(a, a')`` has a largest solution
    ``q*(a') = meet_a right_lift(A(a, a'), p(a))``; ``p`` is a left adjoint
    precisely when that solution also satisfies the unit condition.
    """
    a = p.carrier
    q = a.base
    v = p.extent
    ext = a.extents
    row = []
    for y in a.objects:
        vals = [q.right_lift(ext[y], v, ext[x], a.hom[(x, y)], px) for x, px in zip(a.objects, p.col)]
        row.append(q.meet(ext[y], v, vals))
    unit = q.join(v, v, (q.compose(v, ext[x], v, r, px) for x, r, px in zip(a.objects, row, p.col)))
    if not q.leq(v, v, q.identity(v), unit):
        return None
    return Copresheaf(a, v, row)


def left_adjoint_presheaves(a: VCategory) -> list[Presheaf]:
    key = "left-adjoints"
    if key not in a.cache:
        a.cache[key] = [p for p in enumerate_presheaves(a) if is_left_adjoint_presheaf(p) is not None]
    return list(a.cache[key])


def elaborate_family(a: VCategory, family: str) -> list[Presheaf]:
    if family == ALL:
        return enumerate_presheaves(a)
    if family == CAUCHY:
        return left_adjoint_presheaves(a)
    if family == REPRESENTABLES:
        return _dedup(representables(a))
    raise InputError(f"unknown presheaf family {family!r}; expected one of {FAMILIES}")


def _dedup(items: Iterable[Presheaf]) -> list[Presheaf]:
    seen = {}
    for p in items:
        seen.setdefault(p.key, p)
    return list(seen.values())


def _sort_members(a: VCategory, members: Iterable[Presheaf]) -> list[Presheaf]:
    order = {v: i for i, v in enumerate(a.base.objects)}
    return sorted(_dedup(members), key=lambda p: (order[p.extent], p.col))


class WeightClass:
    """A class of weights: either explicit chains or a named family over a carrier.

    Named families are elaborated as unary presheaf weights on the carrier.
    """

    def __init__(self, carrier: VCategory | None = None, weights: Sequence = (), family: str | None = None):
        if family is not None and family not in FAMILIES:
            raise InputError(f"unknown weight family {family!r}")
        if family is not None and carrier is None:
            raise InputError("a named weight family needs a carrier")
        self.carrier = carrier
        self.family = family
        self._explicit = tuple(as_weight(w) for w in weights)

    @classmethod
    def empty(cls, carrier: VCategory | None = None) -> "WeightClass":
        return cls(carrier)

    @classmethod
    def named(cls, carrier: VCategory, family: str) -> "WeightClass":
        return cls(carrier, family=family)

    @classmethod
    def of(cls, weights: Iterable, carrier: VCategory | None = None) -> "WeightClass":
        return cls(carrier, weights=list(weights))

    def weights(self) -> list[Weight]:
        out = list(self._explicit)
        if self.family is not None:
            out.extend(p.as_weight() for p in elaborate_family(self.carrier, self.family))
        return out

    def __iter__(self):
        return iter(self.weights())

    def __len__(self) -> int:
        return len(self.weights())

    def describe(self) -> str:
        if self.family is not None:
            return self.family
        return f"{len(self._explicit)} explicit weight(s)"

    @property
    def dual(self) -> "WeightClass":
        """The same family on the opposite carrier; explicit weights are transposed."""
        carrier = self.carrier.dual if self.carrier is not None else None
        return WeightClass(carrier, [w.dual for w in self._explicit], self.family)


def as_weight_class(phi, carrier: VCategory | None = None) -> WeightClass:
    if isinstance(phi, WeightClass):
        return phi
    if phi is None:
        return WeightClass(carrier)
    if isinstance(phi, str):
        if carrier is None:
            raise InputError("a named family needs a carrier")
        return WeightClass.named(carrier, phi)
    return WeightClass.of(phi, carrier)


class PresheafClass:
    """A finite set of presheaves on ``carrier``, deduplicated by value and sorted."""

    def __init__(self, carrier: VCategory, members: Iterable[Presheaf], family: str | None = None):
        self.carrier = carrier
        mem = list(members)
        for p in mem:
            if p.carrier is not carrier and p.carrier != carrier:
                raise InputError("class member lives on another carrier")
        self.members = _sort_members(carrier, mem)
        self.family = family
        self._keys = {p.key for p in self.members}

    @classmethod
    def named(cls, carrier: VCategory, family: str) -> "PresheafClass":
        return cls(carrier, elaborate_family(carrier, family), family=family)

    def __contains__(self, p: Presheaf) -> bool:
        return p.key in self._keys

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def keys(self) -> frozenset:
        return frozenset(self._keys)


def as_presheaf_class(a: VCategory, cls) -> PresheafClass:
    if isinstance(cls, PresheafClass):
        return cls
    if isinstance(cls, str):
        return PresheafClass.named(a, cls)
    return PresheafClass(a, cls)


@dataclass
class PresheafObjectResult:
    """A presheaf object: the category ``psh``, the projection ``pi: psh -|-> carrier``,
    member lookup by value and the Yoneda embedding when representables are members."""

    carrier: VCategory
    psh: VCategory
    pi: VDistributor
    members: dict
    yoneda: VFunctor | None
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {p.key: name for name, p in self.members.items()}

    def classify(self, p: Presheaf) -> str | None:
        """Name of the object representing ``p``, or ``None`` when ``p`` is not a member."""
        return self._index.get(p.key)

    def classify_distributor(self, p: VDistributor) -> VFunctor:
        """The functor ``src(p) -> psh`` sending ``b`` to its column's object."""
        m = {}
        for b in p.src.objects:
            name = self.classify(p.column(b))
            if name is None:
                raise InputError(f"column at {b!r} is not a class member")
            m[b] = name
        return VFunctor(p.src, self.psh, m)

    def object_functor_of(self, p: Presheaf) -> VFunctor:
        from .enriched import object_functor

        name = self.classify(p)
        if name is None:
            raise InputError(f"{p!r} is not a class member")
        return object_functor(self.psh, name)

    def member(self, name: str) -> Presheaf:
        return self.members[name]

    def dual(self) -> "CopresheafObjectResult":
        return CopresheafObjectResult(self)


class CopresheafObjectResult:
    """The dual of a presheaf object computed over the opposite carrier.

    ``copsh`` is the opposite of the underlying presheaf category, ``pi`` goes
    ``carrier -|-> copsh`` and members are copresheaves on the carrier.
    """

    def __init__(self, source: PresheafObjectResult):
        self.source = source
        self.carrier = source.carrier.dual
        self.copsh = source.psh.dual
        self.pi = source.pi.dual
        self.members = {name: Copresheaf(self.carrier, p.extent, p.col) for name, p in source.members.items()}
        self.embedding = source.yoneda.dual if source.yoneda is not None else None

    def classify(self, q: Copresheaf) -> str | None:
        return self.source._index.get((q.extent, q.row))


def _member_names(a: VCategory, members: Sequence[Presheaf]) -> list[str]:
    rep = {}
    for x in a.objects:
        rep.setdefault(representable(a, x).key, f"y({x})")
    names = []
    k = 0
    for p in members:
        name = rep.get(p.key)
        if name is None:
            name = f"p{k}"
            k += 1
        names.append(name)
    return names


def presheaf_object(a: VCategory, cls=ALL) -> PresheafObjectResult:
    """The category of class members with homs the right lifts ``q <| p``."""
    pc = as_presheaf_class(a, cls)
    for p in pc.members:
        if not is_presheaf(p):
            raise InputError(f"class member {p!r} violates the presheaf inequalities")
    mem = pc.members
    names = _member_names(a, mem)
    hom = {}
    for n1, p in zip(names, mem):
        for n2, q in zip(names, mem):
            hom[(n1, n2)] = lift_presheaf(q, p)
    psh = VCategory(a.base, names, {n: p.extent for n, p in zip(names, mem)}, hom)
    pi = VDistributor(psh, a, {(x, n): p.col[i] for n, p in zip(names, mem) for i, x in enumerate(a.objects)},
                      check=False)
    members = dict(zip(names, mem))
    index = {p.key: n for n, p in members.items()}
    yoneda = None
    ykeys = [representable(a, x).key for x in a.objects]
    if all(k in index for k in ykeys):
        yoneda = VFunctor(a, psh, {x: index[k] for x, k in zip(a.objects, ykeys)})
    return PresheafObjectResult(a, psh, pi, members, yoneda)


def _weight_columns(phi: WeightClass) -> list[tuple[VCategory, list[Presheaf], int]]:
    """Group the far-end composite columns of every weight by anchor."""
    groups: dict[int, tuple[VCategory, dict, int]] = {}
    for idx, w in enumerate(phi.weights()):
        anchor = w.anchor
        slot = groups.setdefault(id(anchor), (anchor, {}, idx))
        for col in w.far_columns():
            slot[1].setdefault(col.key, col)
    return [(anchor, list(cols.values()), idx) for anchor, cols, idx in groups.values()]


def _distributors_with_columns(b: VCategory, a: VCategory, pool: Mapping[str, list[Presheaf]],
                               fresh: set, need_fresh: bool):
    """Yield distributors ``b -|-> a`` whose columns come from ``pool`` (by extent).

    Candidates are pruned by the right-action inequality column by column;
    with ``need_fresh`` only those using at least one column in ``fresh`` are yielded.
    """
    q = a.base
    bo = b.objects
    n = len(bo)
    chosen: list[Presheaf | None] = [None] * n
    eb = b.extents
    ea = a.extents

    def compatible(i: int, col: Presheaf) -> bool:
        x = bo[i]
        for j in range(i):
            y = bo[j]
            other = chosen[j]
            # p(.,x) . B(x, y) <= p(., y) and p(., y) . B(y, x) <= p(., x)
            for k, z in enumerate(a.objects):
                if not q.leq(eb[y], ea[z], q.compose(eb[y], eb[x], ea[z], col.col[k], b.hom[(x, y)]), other.col[k]):
                    return False
                if not q.leq(eb[x], ea[z], q.compose(eb[x], eb[y], ea[z], other.col[k], b.hom[(y, x)]), col.col[k]):
                    return False
        bxx = b.hom[(x, x)]
        for k, z in enumerate(a.objects):
            if not q.leq(eb[x], ea[z], q.compose(eb[x], eb[x], ea[z], col.col[k], bxx), col.col[k]):
                return False
        return True

    def go(i: int, used_fresh: bool):
        if i == n:
            if used_fresh or not need_fresh:
                yield list(chosen)
            return
        for col in pool.get(eb[bo[i]], ()):
            if compatible(i, col):
                chosen[i] = col
                yield from go(i + 1, used_fresh or col.key in fresh)
        chosen[i] = None

    yield from go(0, False)


def _apply_columns(a: VCategory, b: VCategory, cols: Sequence[Presheaf], w: Presheaf) -> Presheaf:
    """Column of ``p . w`` where ``p`` has the given columns and ``w`` is a presheaf on ``b``."""
    q = a.base
    v = w.extent
    out = []
    for k, z in enumerate(a.objects):
        ez = a.extents[z]
        lat = q.homs[(v, ez)]
        acc = lat.bottom
        for i, x in enumerate(b.objects):
            acc = lat.join2(acc, q.compose(v, b.extents[x], ez, cols[i].col[k], w.col[i]))
        out.append(acc)
    return Presheaf(a, v, out)


def colimit_closure(a: VCategory, phi=None, cap: int = DEFAULT_CLOSURE_CAP) -> PresheafClass:
    """Least class containing representables and closed under ``p . w`` for ``w`` in ``phi``.

    Rounds are semi-naive: each round only tries distributors that use a
    column found in the previous round.
    """
    phi = as_weight_class(phi, a)
    groups = _weight_columns(phi)
    total = None
    try:
        total = len(enumerate_presheaves(a, cap=cap + 1))
    except ResourceCapError:
        total = None
    current: dict = {}
    for p in representables(a):
        current.setdefault(p.key, p)
    fresh = set(current)
    first = True
    while fresh:
        if total is not None and len(current) >= total:
            break
        pool: dict[str, list[Presheaf]] = {}
        for p in current.values():
            pool.setdefault(p.extent, []).append(p)
        found: dict = {}
        for anchor, cols, idx in groups:
            for chosen in _distributors_with_columns(anchor, a, pool, fresh, need_fresh=not first):
                for w in cols:
                    r = _apply_columns(a, anchor, chosen, w)
                    if r.key not in current and r.key not in found:
                        found[r.key] = r
                        if len(current) + len(found) > cap:
                            raise ResourceCapError(
                                f"colimit closure exceeded {cap} presheaves while applying weight #{idx}",
                                cap=cap, culprit=idx)
        current.update(found)
        fresh = set(found)
        first = False
    return PresheafClass(a, current.values())


@dataclass
class CocompletionResult:
    presheaf_object: PresheafObjectResult
    embedding: VFunctor
    closure: PresheafClass

    def __iter__(self):
        return iter((self.presheaf_object, self.embedding))

    @property
    def category(self) -> VCategory:
        return self.presheaf_object.psh


def cocompletion(a: VCategory, phi=None, cap: int = DEFAULT_CLOSURE_CAP) -> CocompletionResult:
    """Presheaf object on the colimit closure, with its Yoneda embedding."""
    closure = colimit_closure(a, phi, cap=cap)
    res = presheaf_object(a, closure)
    assert res.yoneda is not None
    return CocompletionResult(res, res.yoneda, closure)


def cauchy_completion(a: VCategory) -> PresheafObjectResult:
    return presheaf_object(a, CAUCHY)


@dataclass
class CompletionResult:
    """Free completion under limits: a category, the embedding ``carrier -> category``
    and the copresheaf members indexed by object name."""

    category: VCategory
    embedding: VFunctor
    pi: VDistributor
    members: dict
    source: CocompletionResult


def completion(a: VCategory, psi=None, cap: int = DEFAULT_CLOSURE_CAP) -> CompletionResult:
    """Computed as the opposite of the cocompletion of the opposite category."""
    psi = as_weight_class(psi, a)
    co = cocompletion(a.dual, psi.dual, cap=cap)
    d = co.presheaf_object.dual()
    return CompletionResult(d.copsh, co.embedding.dual, d.pi, d.members, co)
