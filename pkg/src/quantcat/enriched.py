"""Categories, functors and distributors enriched in a finite quantaloid.

Direction conventions:

* ``C.hom[(x, y)]`` is a 1-cell ``ext(y) -> ext(x)``; the axioms read
  ``id(ext x) <= C(x, x)`` and ``C(x, y) . C(y, z) <= C(x, z)``.
* A distributor ``p`` from ``B`` to ``A`` (written ``B -|-> A``) has entries
  ``p(a, b): ext(b) -> ext(a)`` and satisfies
  ``A(a', a) . p(a, b) <= p(a', b)`` and ``p(a, b) . B(b, b') <= p(a, b')``.
* A presheaf on ``A`` of extent ``V`` is a distributor from the one-object
  category on ``V`` into ``A``: one column ``p(a): V -> ext(a)``.
* A weight is a chain ``p_1, ..., p_m`` with ``p_i: A_i -|-> A_{i-1}``;
  ``A_0`` is its anchor and ``A_m`` its far end.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import InputError, ResourceCapError
from .quantaloid import Quantaloid

STAR = "*"


def _same(a, b) -> bool:
    return a is b or a == b


class VCategory:
    """A finite category enriched in ``base``."""

    def __init__(self, base: Quantaloid, objects: Sequence[str], extents: Mapping[str, str],
                 hom: Mapping[tuple[str, str], str], name: str | None = None):
        self.base = base
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise InputError(f"duplicate object names in {self.objects}")
        self.extents = {x: extents[x] for x in self.objects}
        for x, v in self.extents.items():
            if v not in base.objects:
                raise InputError(f"object {x!r} has extent {v!r} outside the base")
        self.hom = {}
        for x, y in product(self.objects, repeat=2):
            try:
                e = hom[(x, y)]
            except KeyError:
                raise InputError(f"missing hom entry ({x}, {y})") from None
            base.hom(self.extents[y], self.extents[x]).check(e)
            self.hom[(x, y)] = e
        self.name = name
        self._dual: VCategory | None = None
        self._hash: int | None = None
        self.cache: dict = {}

    @classmethod
    def build(cls, base: Quantaloid, objects: Iterable[tuple[str, str]], hom: Mapping, name=None) -> "VCategory":
        objs = list(objects)
        return cls(base, [o for o, _ in objs], dict(objs), hom, name=name)

    def __call__(self, x: str, y: str) -> str:
        return self.hom[(x, y)]

    def ext(self, x: str) -> str:
        return self.extents[x]

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        return f"VCategory({self.name or ''}{list(self.objects)})"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, VCategory):
            return NotImplemented
        return (self.objects == other.objects and self.extents == other.extents
                and self.hom == other.hom and _same(self.base, other.base))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.objects, tuple(self.hom[k] for k in sorted(self.hom))))
        return self._hash

    def validate(self) -> list[tuple]:
        q = self.base
        out = []
        ext = self.extents
        for x in self.objects:
            v = ext[x]
            if not q.leq(v, v, q.identity(v), self.hom[(x, x)]):
                out.append(("identity", x))
        for x, y, z in product(self.objects, repeat=3):
            c = q.compose(ext[z], ext[y], ext[x], self.hom[(x, y)], self.hom[(y, z)])
            if not q.leq(ext[z], ext[x], c, self.hom[(x, z)]):
                out.append(("composition", x, y, z))
        return out

    def objects_of_extent(self, v: str) -> list[str]:
        return [x for x in self.objects if self.extents[x] == v]

    @property
    def dual(self) -> "VCategory":
        """Opposite category over the opposite base; ``C.dual.dual is C``."""
        if self._dual is None:
            d = VCategory(self.base.dual, self.objects, self.extents,
                          {(x, y): self.hom[(y, x)] for x, y in product(self.objects, repeat=2)},
                          name=self.name)
            d._dual = self
            self._dual = d
        return self._dual

    def row_index(self) -> dict:
        """Map (extent, hom-row) to the objects having that row ``C(c, -)``."""
        idx = self.cache.get("rows")
        if idx is None:
            idx = {}
            for c in self.objects:
                key = (self.extents[c], tuple(self.hom[(c, x)] for x in self.objects))
                idx.setdefault(key, []).append(c)
            self.cache["rows"] = idx
        return idx


def validate_category(c: VCategory) -> list[tuple]:
    return c.validate()


def star_category(q: Quantaloid, v: str) -> VCategory:
    """The one-object category with extent ``v`` and hom the identity."""
    stars = q.cache.setdefault("stars", {})
    if v not in stars:
        if v not in q.objects:
            raise InputError(f"{v!r} is not an object of the base")
        stars[v] = VCategory(q, [STAR], {STAR: v}, {(STAR, STAR): q.identity(v)}, name=f"*{v}")
    return stars[v]


class VFunctor:
    """An extent-preserving object map that does not decrease homs."""

    def __init__(self, dom: VCategory, cod: VCategory, objmap: Mapping[str, str]):
        if not _same(dom.base, cod.base):
            raise InputError("functor between categories over different bases")
        self.dom = dom
        self.cod = cod
        self.objmap = {}
        for x in dom.objects:
            try:
                y = objmap[x]
            except KeyError:
                raise InputError(f"functor does not map object {x!r}") from None
            if y not in cod.extents:
                raise InputError(f"functor maps {x!r} to unknown object {y!r}")
            if cod.extents[y] != dom.extents[x]:
                raise InputError(f"functor maps {x!r} to {y!r} of a different extent")
            self.objmap[x] = y

    def __call__(self, x: str) -> str:
        return self.objmap[x]

    def __repr__(self) -> str:
        return f"VFunctor({self.objmap})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VFunctor):
            return NotImplemented
        return self.objmap == other.objmap and _same(self.dom, other.dom) and _same(self.cod, other.cod)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.objmap.items())))

    def validate(self) -> list[tuple]:
        q = self.dom.base
        out = []
        for x, y in product(self.dom.objects, repeat=2):
            a, b = self.dom.hom[(x, y)], self.cod.hom[(self.objmap[x], self.objmap[y])]
            if not q.leq(self.dom.extents[y], self.dom.extents[x], a, b):
                out.append(("hom", x, y))
        return out

    @property
    def dual(self) -> "VFunctor":
        return VFunctor(self.dom.dual, self.cod.dual, self.objmap)


def identity_functor(c: VCategory) -> VFunctor:
    return VFunctor(c, c, {x: x for x in c.objects})


def compose_functors(f: VFunctor, g: VFunctor) -> VFunctor:
    """Apply ``f`` then ``g``."""
    if not _same(f.cod, g.dom):
        raise InputError("functors are not composable")
    return VFunctor(f.dom, g.cod, {x: g.objmap[f.objmap[x]] for x in f.dom.objects})


def object_functor(c: VCategory, x: str) -> VFunctor:
    """The functor from the one-object category picking ``x``."""
    return VFunctor(star_category(c.base, c.extents[x]), c, {STAR: x})


class VDistributor:
    """A distributor ``src -|-> dst`` with entries ``mat[(a, b)]: ext(b) -> ext(a)``."""

    def __init__(self, src: VCategory, dst: VCategory, mat: Mapping[tuple[str, str], str], check: bool = True):
        if not _same(src.base, dst.base):
            raise InputError("distributor between categories over different bases")
        self.src = src
        self.dst = dst
        if check:
            q = src.base
            m = {}
            for a, b in product(dst.objects, src.objects):
                try:
                    e = mat[(a, b)]
                except KeyError:
                    raise InputError(f"missing distributor entry ({a}, {b})") from None
                q.hom(src.extents[b], dst.extents[a]).check(e)
                m[(a, b)] = e
            self.mat = m
        else:
            self.mat = dict(mat)

    @property
    def base(self) -> Quantaloid:
        return self.src.base

    def __call__(self, a: str, b: str) -> str:
        return self.mat[(a, b)]

    def __repr__(self) -> str:
        return f"VDistributor({list(self.src.objects)} -|-> {list(self.dst.objects)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VDistributor):
            return NotImplemented
        return self.mat == other.mat and _same(self.src, other.src) and _same(self.dst, other.dst)

    def __hash__(self) -> int:
        return hash(tuple(self.mat[k] for k in sorted(self.mat)))

    def leq(self, other: "VDistributor") -> bool:
        q = self.base
        return all(q.leq(self.src.extents[b], self.dst.extents[a], e, other.mat[(a, b)])
                   for (a, b), e in self.mat.items())

    def validate(self) -> list[tuple]:
        q = self.base
        A, B = self.dst, self.src
        ea, eb = A.extents, B.extents
        out = []
        for a2, a, b in product(A.objects, A.objects, B.objects):
            c = q.compose(eb[b], ea[a], ea[a2], A.hom[(a2, a)], self.mat[(a, b)])
            if not q.leq(eb[b], ea[a2], c, self.mat[(a2, b)]):
                out.append(("left-action", a2, a, b))
        for a, b, b2 in product(A.objects, B.objects, B.objects):
            c = q.compose(eb[b2], eb[b], ea[a], self.mat[(a, b)], B.hom[(b, b2)])
            if not q.leq(eb[b2], ea[a], c, self.mat[(a, b2)]):
                out.append(("right-action", a, b, b2))
        return out

    def column(self, b: str) -> "Presheaf":
        return Presheaf(self.dst, self.src.extents[b], tuple(self.mat[(a, b)] for a in self.dst.objects))

    def columns(self) -> list["Presheaf"]:
        return [self.column(b) for b in self.src.objects]

    @property
    def dual(self) -> "VDistributor":
        """Transpose into ``dst.dual -|-> src.dual``."""
        return VDistributor(self.dst.dual, self.src.dual,
                            {(b, a): e for (a, b), e in self.mat.items()}, check=False)


def validate_distributor(p: VDistributor) -> list[tuple]:
    return p.validate()


class Presheaf:
    """A presheaf on ``carrier`` of extent ``extent``; ``col`` follows object order."""

    __slots__ = ("carrier", "extent", "col")

    def __init__(self, carrier: VCategory, extent: str, col: Sequence[str]):
        self.carrier = carrier
        self.extent = extent
        self.col = tuple(col)
        if len(self.col) != len(carrier.objects):
            raise InputError("presheaf column has the wrong length")

    @classmethod
    def from_mapping(cls, carrier: VCategory, extent: str, values: Mapping[str, str]) -> "Presheaf":
        q = carrier.base
        col = []
        for a in carrier.objects:
            try:
                e = values[a]
            except KeyError:
                raise InputError(f"presheaf misses object {a!r}") from None
            q.hom(extent, carrier.extents[a]).check(e)
            col.append(e)
        return cls(carrier, extent, col)

    def __call__(self, a: str) -> str:
        return self.col[self.carrier.objects.index(a)]

    def items(self):
        return zip(self.carrier.objects, self.col)

    @property
    def key(self) -> tuple:
        return (self.extent, self.col)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Presheaf):
            return NotImplemented
        return self.extent == other.extent and self.col == other.col and _same(self.carrier, other.carrier)

    def __hash__(self) -> int:
        return hash((self.extent, self.col))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}:{e}" for a, e in self.items())
        return f"Presheaf[{self.extent}]({body})"

    def validate(self) -> list[tuple]:
        return self.as_distributor().validate()

    def as_distributor(self) -> VDistributor:
        star = star_category(self.carrier.base, self.extent)
        return VDistributor(star, self.carrier, {(a, STAR): e for a, e in self.items()}, check=False)

    def as_weight(self) -> "Weight":
        return Weight([self.as_distributor()])


class Copresheaf:
    """A distributor from ``carrier`` into a one-object category: ``row[a]: ext(a) -> extent``."""

    __slots__ = ("carrier", "extent", "row")

    def __init__(self, carrier: VCategory, extent: str, row: Sequence[str]):
        self.carrier = carrier
        self.extent = extent
        self.row = tuple(row)

    def __call__(self, a: str) -> str:
        return self.row[self.carrier.objects.index(a)]

    def items(self):
        return zip(self.carrier.objects, self.row)

    @property
    def key(self) -> tuple:
        return (self.extent, self.row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Copresheaf):
            return NotImplemented
        return self.extent == other.extent and self.row == other.row and _same(self.carrier, other.carrier)

    def __hash__(self) -> int:
        return hash((self.extent, self.row))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}:{e}" for a, e in self.items())
        return f"Copresheaf[{self.extent}]({body})"

    def as_distributor(self) -> VDistributor:
        star = star_category(self.carrier.base, self.extent)
        return VDistributor(self.carrier, star, {(STAR, a): e for a, e in self.items()}, check=False)

    def validate(self) -> list[tuple]:
        return self.as_distributor().validate()


class Weight:
    """A chain of distributors ``p_1, ..., p_m`` with ``p_i: A_i -|-> A_{i-1}``.

    The anchor ``A_0`` is where the weighted functor lives; an empty chain
    carries its anchor explicitly.
    """

    def __init__(self, chain: Sequence[VDistributor], anchor: VCategory | None = None):
        self.chain = tuple(chain)
        if not self.chain and anchor is None:
            raise InputError("an empty weight needs an anchoring category")
        for i in range(len(self.chain) - 1):
            if not _same(self.chain[i].src, self.chain[i + 1].dst):
                raise InputError(f"weight links {i + 1} and {i + 2} do not compose")
        if anchor is not None and self.chain and not _same(anchor, self.chain[0].dst):
            raise InputError("weight anchor differs from the first link's target")
        self._anchor = anchor if anchor is not None else self.chain[0].dst

    @property
    def anchor(self) -> VCategory:
        return self._anchor

    @property
    def far_end(self) -> VCategory:
        return self.chain[-1].src if self.chain else self._anchor

    def __len__(self) -> int:
        return len(self.chain)

    def __repr__(self) -> str:
        return f"Weight(len={len(self.chain)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Weight):
            return NotImplemented
        return self.chain == other.chain and _same(self.anchor, other.anchor)

    def __hash__(self) -> int:
        return hash(self.chain)

    @property
    def dual(self) -> "Weight":
        """Transposed, reversed chain anchored at the far end's dual."""
        return Weight([p.dual for p in reversed(self.chain)], anchor=self.far_end.dual)

    def normalize(self) -> "Weight":
        """Compose the chain into a single link (identity for the empty chain)."""
        if not self.chain:
            return Weight([identity_distributor(self.anchor)])
        return Weight([compose_chain(self.chain)])

    def far_columns(self) -> list[Presheaf]:
        """Columns of the composite chain, one presheaf on the anchor per far-end object."""
        return compose_chain(self.chain).columns() if self.chain else identity_distributor(self.anchor).columns()


def as_weight(w) -> Weight:
    if isinstance(w, Weight):
        return w
    if isinstance(w, VDistributor):
        return Weight([w])
    if isinstance(w, Presheaf):
        return w.as_weight()
    if isinstance(w, (list, tuple)):
        return Weight(list(w))
    raise InputError(f"cannot read {w!r} as a weight")


def identity_distributor(c: VCategory) -> VDistributor:
    return VDistributor(c, c, c.hom, check=False)


def restrict(p: VDistributor, f: VFunctor | None = None, g: VFunctor | None = None) -> VDistributor:
    """``p(f, g)(a, b) = p(f a, g b)``; ``None`` stands for an identity."""
    if f is not None and not _same(f.cod, p.dst):
        raise InputError("restriction: first functor does not land in the distributor's target")
    if g is not None and not _same(g.cod, p.src):
        raise InputError("restriction: second functor does not land in the distributor's source")
    A = f.dom if f is not None else p.dst
    B = g.dom if g is not None else p.src
    fm = f.objmap if f is not None else {a: a for a in A.objects}
    gm = g.objmap if g is not None else {b: b for b in B.objects}
    return VDistributor(B, A, {(a, b): p.mat[(fm[a], gm[b])] for a in A.objects for b in B.objects}, check=False)


def companion(f: VFunctor) -> VDistributor:
    """``B(1, f)``: a distributor ``A -|-> B`` for ``f: A -> B``."""
    return restrict(identity_distributor(f.cod), None, f)


def conjoint(f: VFunctor) -> VDistributor:
    """``B(f, 1)``: a distributor ``B -|-> A`` for ``f: A -> B``."""
    return restrict(identity_distributor(f.cod), f, None)


def compose_dist(p: VDistributor, q: VDistributor) -> VDistributor:
    """``(p . q)(a, c) = join_b p(a, b) . q(b, c)`` for ``q: C -|-> B`` and ``p: B -|-> A``."""
    if not _same(q.dst, p.src):
        raise InputError("distributors are not composable")
    base = p.base
    A, B, C = p.dst, p.src, q.src
    mat = {}
    for a in A.objects:
        va = A.extents[a]
        for c in C.objects:
            vc = C.extents[c]
            lat = base.homs[(vc, va)]
            acc = lat.bottom
            for b in B.objects:
                vb = B.extents[b]
                acc = lat.join2(acc, base.compose(vc, vb, va, p.mat[(a, b)], q.mat[(b, c)]))
            mat[(a, c)] = acc
    return VDistributor(C, A, mat, check=False)


def compose_chain(chain: Sequence[VDistributor]) -> VDistributor:
    """Left-to-right composite ``p_1 . p_2 . ... . p_m`` of a non-empty chain."""
    if not chain:
        raise InputError("cannot compose an empty chain without an anchor")
    acc = chain[-1]
    for p in reversed(chain[:-1]):
        acc = compose_dist(p, acc)
    return acc


def _entry_meet(q: Quantaloid, x: str, y: str, values: Iterable[str]) -> str:
    return q.meet(x, y, values)


def lift_dist(q: VDistributor, w) -> VDistributor:
    """The right lift of ``q: B -|-> A_0`` through a weight; a distributor ``B -|-> A_m``.

    Computed pointwise as a meet over object tuples of quantaloid right lifts
    through the composite of the chain's entries.
    """
    w = as_weight(w)
    if not w.chain:
        if not _same(q.dst, w.anchor):
            raise InputError("lift through an empty weight anchored elsewhere")
        return q
    if not _same(q.dst, w.anchor):
        raise InputError("lift: distributor target differs from the weight's anchor")
    base = q.base
    B = q.src
    far = w.far_end
    paths = _chain_paths(w.chain)
    mat = {}
    for a in far.objects:
        va = far.extents[a]
        for b in B.objects:
            vb = B.extents[b]
            vals = []
            for a0, g in paths[a]:
                v0 = w.anchor.extents[a0]
                vals.append(base.right_lift(vb, va, v0, q.mat[(a0, b)], g))
            mat[(a, b)] = _entry_meet(base, vb, va, vals)
    return VDistributor(B, far, mat, check=False)


def _chain_paths(chain: Sequence[VDistributor]) -> dict[str, list[tuple[str, str]]]:
    """For each far-end object ``a``: pairs ``(a0, g)`` for every object tuple,
    with ``g = p_1(a0, a1) . ... . p_m(a_{m-1}, a)``."""
    base = chain[0].base
    far = chain[-1].src
    out = {}
    for a in far.objects:
        va = far.extents[a]
        current = [(a, chain[-1].src.extents[a], None)]
        for p in reversed(chain):
            nxt = []
            for obj, _, acc in current:
                for a_prev in p.dst.objects:
                    v_prev = p.dst.extents[a_prev]
                    e = p.mat[(a_prev, obj)]
                    val = e if acc is None else base.compose(va, p.src.extents[obj], v_prev, e, acc)
                    nxt.append((a_prev, v_prev, val))
            current = nxt
        out[a] = [(a0, g) for a0, _, g in current]
    return out


def lift_presheaf(q: Presheaf, p: Presheaf) -> str:
    """``q <| p = meet_a right_lift(q(a), p(a))``, a 1-cell ``ext q -> ext p``."""
    if not _same(q.carrier, p.carrier):
        raise InputError("presheaves on different carriers")
    base = q.carrier.base
    ext = q.carrier.extents
    vals = [base.right_lift(q.extent, p.extent, ext[a], qa, pa)
            for a, qa, pa in zip(q.carrier.objects, q.col, p.col)]
    return _entry_meet(base, q.extent, p.extent, vals)


def ext_dist(q: VDistributor, w) -> VDistributor:
    """The right extension of ``q: A_m -|-> C`` along a weight; a distributor ``A_0 -|-> C``.

    Computed as a right lift in the opposite base and transposed back.
    """
    w = as_weight(w)
    if not w.chain:
        return q
    if not _same(q.src, w.far_end):
        raise InputError("extension: distributor source differs from the weight's far end")
    return lift_dist(q.dual, w.dual).dual


def compose_with_weight(p: VDistributor, w) -> VDistributor:
    """``p . p_1 . ... . p_m`` (just ``p`` for the empty chain)."""
    w = as_weight(w)
    if not w.chain:
        return p
    return compose_chain([p, *w.chain])


@dataclass
class Colimit:
    """Witnesses of a weighted (co)limit, one tuple per far-end object.

    ``found`` is false when some far-end object has no witness, which is the
    not-found value.
    """

    witnesses: dict
    domain: VCategory
    codomain: VCategory

    @property
    def found(self) -> bool:
        return all(self.witnesses.values())

    def __bool__(self) -> bool:
        return self.found

    def missing(self) -> list[str]:
        return [a for a, w in self.witnesses.items() if not w]

    def as_functor(self) -> VFunctor:
        if not self.found:
            raise InputError(f"no witness at {self.missing()}")
        return VFunctor(self.domain, self.codomain, {a: w[0] for a, w in self.witnesses.items()})


def weighted_colimit(w, f: VFunctor) -> Colimit:
    """Objects ``c`` with ``X(c, -)`` equal to the lift of ``X(f, 1)`` through the weight."""
    w = as_weight(w)
    if not _same(w.anchor, f.dom):
        raise InputError("weight is not anchored at the functor's domain")
    X = f.cod
    lifted = lift_dist(conjoint(f), w)
    far = w.far_end
    rows = X.row_index()
    wit = {}
    for a in far.objects:
        key = (far.extents[a], tuple(lifted.mat[(a, x)] for x in X.objects))
        wit[a] = tuple(rows.get(key, ()))
    return Colimit(wit, far, X)


def weighted_limit(w, f: VFunctor) -> Colimit:
    """Objects ``c`` with ``X(-, c)`` equal to the extension of ``X(1, f)`` along the weight.

    Here ``f`` is defined on the weight's far end and the limit on its anchor.
    """
    w = as_weight(w)
    if not _same(w.far_end, f.dom):
        raise InputError("weight's far end is not the functor's domain")
    X = f.cod
    extended = ext_dist(companion(f), w)
    anchor = w.anchor
    cols = X.cache.get("cols")
    if cols is None:
        cols = {}
        for c in X.objects:
            key = (X.extents[c], tuple(X.hom[(x, c)] for x in X.objects))
            cols.setdefault(key, []).append(c)
        X.cache["cols"] = cols
    wit = {}
    for a in anchor.objects:
        key = (anchor.extents[a], tuple(extended.mat[(x, a)] for x in X.objects))
        wit[a] = tuple(cols.get(key, ()))
    return Colimit(wit, anchor, X)


def enumerate_functors(dom: VCategory, cod: VCategory, cap: int | None = None) -> list[VFunctor]:
    """All functors ``dom -> cod`` by backtracking on the hom inequalities."""
    q = dom.base
    objs = dom.objects
    by_ext = {v: cod.objects_of_extent(v) for v in set(dom.extents.values())}
    out: list[VFunctor] = []
    assign: dict[str, str] = {}

    def ok(i: int, y: str) -> bool:
        x = objs[i]
        ex = dom.extents[x]
        if not q.leq(ex, ex, dom.hom[(x, x)], cod.hom[(y, y)]):
            return False
        for x2 in objs[:i]:
            y2 = assign[x2]
            e2 = dom.extents[x2]
            if not q.leq(ex, e2, dom.hom[(x2, x)], cod.hom[(y2, y)]):
                return False
            if not q.leq(e2, ex, dom.hom[(x, x2)], cod.hom[(y, y2)]):
                return False
        return True

    def go(i: int) -> None:
        if i == len(objs):
            if cap is not None and len(out) >= cap:
                raise ResourceCapError(f"more than {cap} functors", cap=cap)
            out.append(VFunctor(dom, cod, dict(assign)))
            return
        for y in by_ext[dom.extents[objs[i]]]:
            if ok(i, y):
                assign[objs[i]] = y
                go(i + 1)
        assign.pop(objs[i], None)

    go(0)
    return out


def category_from_json(data: Mapping, base: Quantaloid) -> VCategory:
    try:
        objs = [(str(o["name"]), str(o["extent"])) for o in data["objects"]]
        hom = {}
        for key, e in data["hom"].items():
            x, y = key.split(",")
            hom[(x.strip(), y.strip())] = str(e)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed category document: {exc!r}") from None
    for name, _ in objs:
        if "," in name:
            raise InputError(f"object name {name!r} may not contain a comma")
    return VCategory.build(base, objs, hom, name=data.get("name"))


def category_to_json(c: VCategory, base_ref) -> dict:
    return {
        "base": base_ref,
        "objects": [{"name": x, "extent": c.extents[x]} for x in c.objects],
        "hom": {f"{x},{y}": c.hom[(x, y)] for x, y in product(c.objects, repeat=2)},
    }


def functor_to_json(f: VFunctor, dom_ref, cod_ref) -> dict:
    return {"dom": dom_ref, "cod": cod_ref, "map": dict(f.objmap)}


def distributor_to_json(p: VDistributor, src_ref, dst_ref) -> dict:
    return {"src": src_ref, "dst": dst_ref,
            "mat": {f"{a},{b}": e for (a, b), e in sorted(p.mat.items(), key=lambda kv: (
                p.dst.objects.index(kv[0][0]), p.src.objects.index(kv[0][1])))}}


def distributor_from_json(data: Mapping, src: VCategory, dst: VCategory) -> VDistributor:
    try:
        mat = {}
        for key, e in data["mat"].items():
            a, b = key.split(",")
            mat[(a.strip(), b.strip())] = str(e)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed distributor document: {exc!r}") from None
    return VDistributor(src, dst, mat)


def full_subcategory(c: VCategory, objects: Sequence[str]) -> tuple[VCategory, VFunctor]:
    """The full subcategory on ``objects`` and its inclusion."""
    objs = [x for x in c.objects if x in set(objects)]
    if len(objs) != len(set(objects)):
        raise InputError("full subcategory lists unknown or repeated objects")
    sub = VCategory(c.base, objs, {x: c.extents[x] for x in objs},
                    {(x, y): c.hom[(x, y)] for x in objs for y in objs})
    return sub, VFunctor(sub, c, {x: x for x in objs})
