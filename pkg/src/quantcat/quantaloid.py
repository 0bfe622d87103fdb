"""Finite quantaloids: hom-lattices, composition and residuation.

A quantaloid here is a finite category whose hom-sets are finite lattices and
whose composition preserves joins in each variable.  1-cells are stored in
ordinary arrow direction, so ``compose(X, Y, Z, g, f)`` is ``g . f`` for
``f: X -> Y`` and ``g: Y -> Z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import InputError, LatticeError


class FiniteLattice:
    """A finite poset given by elements and a generating order relation.

    The relation is closed reflexively and transitively on construction.
    Meets and joins are found by scanning bounds and cached per pair.
    """

    def __init__(self, elements: Iterable[str], leq: Iterable[Sequence[str]] = ()):
        self.elements = tuple(str(e) for e in elements)
        if len(set(self.elements)) != len(self.elements):
            raise InputError(f"duplicate lattice elements in {self.elements}")
        self._index = {e: i for i, e in enumerate(self.elements)}
        raw = []
        for pair in leq:
            a, b = (str(x) for x in pair)
            for x in (a, b):
                if x not in self._index:
                    raise InputError(f"order relation mentions unknown element {x!r}")
            raw.append((a, b))
        self.raw_leq = tuple(raw)
        up = {e: {e} for e in self.elements}
        for a, b in raw:
            up[a].add(b)
        changed = True
        while changed:
            changed = False
            for a in self.elements:
                grown = set(up[a])
                for b in up[a]:
                    grown |= up[b]
                if len(grown) != len(up[a]):
                    up[a] = grown
                    changed = True
        self._up = {e: frozenset(s) for e, s in up.items()}
        self._down = {e: frozenset(a for a in self.elements if e in self._up[a]) for e in self.elements}
        self._join2: dict[tuple[str, str], str] = {}
        self._meet2: dict[tuple[str, str], str] = {}
        self._bottom: str | None = None
        self._top: str | None = None

    def __contains__(self, e: object) -> bool:
        return e in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"FiniteLattice({list(self.elements)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self) -> int:
        return hash((self.elements, frozenset(self.order_pairs())))

    def order_pairs(self) -> list[tuple[str, str]]:
        """The full (closed) order relation as a list of pairs."""
        return [(a, b) for a in self.elements for b in self.elements if b in self._up[a]]

    def cover_pairs(self) -> list[tuple[str, str]]:
        """Hasse diagram of the order."""
        out = []
        for a in self.elements:
            for b in self._up[a]:
                if b == a:
                    continue
                if not any(c not in (a, b) and c in self._up[a] and b in self._up[c] for c in self.elements):
                    out.append((a, b))
        return out

    def check(self, e: str) -> str:
        if e not in self._index:
            raise InputError(f"{e!r} is not an element of {self!r}")
        return e

    def leq(self, a: str, b: str) -> bool:
        return b in self._up[a]

    def upset(self, a: str) -> frozenset:
        return self._up[a]

    def downset(self, a: str) -> frozenset:
        return self._down[a]

    def _least(self, candidates: Iterable[str]) -> str | None:
        cand = list(candidates)
        for c in cand:
            if all(d in self._up[c] for d in cand):
                return c
        return None

    def _greatest(self, candidates: Iterable[str]) -> str | None:
        cand = list(candidates)
        for c in cand:
            if all(c in self._up[d] for d in cand):
                return c
        return None

    @property
    def bottom(self) -> str:
        if self._bottom is None:
            b = self._least(self.elements)
            if b is None:
                raise LatticeError(f"{self!r} has no bottom element")
            self._bottom = b
        return self._bottom

    @property
    def top(self) -> str:
        if self._top is None:
            t = self._greatest(self.elements)
            if t is None:
                raise LatticeError(f"{self!r} has no top element")
            self._top = t
        return self._top

    def join2(self, a: str, b: str) -> str:
        key = (a, b)
        hit = self._join2.get(key)
        if hit is None:
            hit = self._least(self._up[a] & self._up[b])
            if hit is None:
                raise LatticeError(f"no join of {a!r} and {b!r} in {self!r}")
            self._join2[key] = hit
        return hit

    def meet2(self, a: str, b: str) -> str:
        key = (a, b)
        hit = self._meet2.get(key)
        if hit is None:
            hit = self._greatest(self._down[a] & self._down[b])
            if hit is None:
                raise LatticeError(f"no meet of {a!r} and {b!r} in {self!r}")
            self._meet2[key] = hit
        return hit

    def join(self, items: Iterable[str]) -> str:
        return reduce(self.join2, items, self.bottom)

    def meet(self, items: Iterable[str]) -> str:
        return reduce(self.meet2, items, self.top)

    def problems(self) -> list[tuple]:
        """Violations of the lattice axioms, each with a witness."""
        out: list[tuple] = []
        for a in self.elements:
            for b in self._up[a]:
                if a != b and a in self._up[b]:
                    if self._index[a] < self._index[b]:
                        out.append(("antisymmetry", a, b))
        if self._least(self.elements) is None:
            out.append(("bottom", None))
        if self._greatest(self.elements) is None:
            out.append(("top", None))
        for i, a in enumerate(self.elements):
            for b in self.elements[i + 1:]:
                if self._least(self._up[a] & self._up[b]) is None:
                    out.append(("join", a, b))
                if self._greatest(self._down[a] & self._down[b]) is None:
                    out.append(("meet", a, b))
        return out


@dataclass(frozen=True)
class OneCell:
    """A 1-cell of a quantaloid, ``elt`` in ``hom(src, dst)``."""

    src: str
    dst: str
    elt: str


class Quantaloid:
    """A finite quantaloid.

    ``homs[(X, Y)]`` is the lattice of 1-cells ``X -> Y``;
    ``composition[(X, Y, Z)][(g, f)]`` is ``g . f``.
    """

    def __init__(
        self,
        objects: Sequence[str],
        homs: Mapping[tuple[str, str], FiniteLattice],
        composition: Mapping[tuple[str, str, str], Mapping[tuple[str, str], str]],
        identities: Mapping[str, str],
        name: str | None = None,
    ):
        self.objects = tuple(objects)
        self.homs = dict(homs)
        self.composition = {k: dict(v) for k, v in composition.items()}
        self.identities = dict(identities)
        self.name = name
        for x, y in product(self.objects, repeat=2):
            if (x, y) not in self.homs:
                raise InputError(f"missing hom {x}->{y}")
        for x in self.objects:
            if x not in self.identities:
                raise InputError(f"missing identity on {x}")
        self._lift: dict = {}
        self._ext: dict = {}
        self._dual: Quantaloid | None = None
        self._hash: int | None = None
        self.cache: dict = {}

    def __repr__(self) -> str:
        return f"Quantaloid({self.name or list(self.objects)})"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Quantaloid):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.homs == other.homs
            and self.identities == other.identities
            and self.composition == other.composition
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.objects, tuple(sorted(self.identities.items()))))
        return self._hash

    def hom(self, x: str, y: str) -> FiniteLattice:
        try:
            return self.homs[(x, y)]
        except KeyError:
            raise InputError(f"no hom {x}->{y} in {self!r}") from None

    def identity(self, x: str) -> str:
        return self.identities[x]

    def compose(self, x: str, y: str, z: str, g: str, f: str) -> str:
        """``g . f`` for ``f: x -> y`` and ``g: y -> z``."""
        try:
            return self.composition[(x, y, z)][(g, f)]
        except KeyError:
            raise InputError(f"composite of {g!r} after {f!r} along {x}->{y}->{z} undefined") from None

    def compose_path(self, path: Sequence[str], cells: Sequence[str]) -> str:
        """Compose ``cells[0] . cells[1] . ...`` along objects ``path`` (last to first).

        ``cells[i]`` is a 1-cell ``path[i+1] -> path[i]``.
        """
        acc = cells[-1]
        for i in range(len(cells) - 2, -1, -1):
            acc = self.compose(path[-1], path[i + 1], path[i], cells[i], acc)
        return acc

    def leq(self, x: str, y: str, a: str, b: str) -> bool:
        return self.homs[(x, y)].leq(a, b)

    def bottom(self, x: str, y: str) -> str:
        return self.homs[(x, y)].bottom

    def top(self, x: str, y: str) -> str:
        return self.homs[(x, y)].top

    def join(self, x: str, y: str, items: Iterable[str]) -> str:
        return self.homs[(x, y)].join(items)

    def meet(self, x: str, y: str, items: Iterable[str]) -> str:
        return self.homs[(x, y)].meet(items)

    def right_lift(self, x: str, y: str, z: str, h: str, g: str) -> str:
        """Largest ``r: x -> y`` with ``g . r <= h`` where ``h: x -> z``, ``g: y -> z``."""
        key = (x, y, z, h, g)
        hit = self._lift.get(key)
        if hit is None:
            hz = self.homs[(x, z)]
            table = self.composition[(x, y, z)]
            hit = self.homs[(x, y)].join(r for r in self.homs[(x, y)].elements if hz.leq(table[(g, r)], h))
            self._lift[key] = hit
        return hit

    def right_extension(self, x: str, y: str, z: str, h: str, f: str) -> str:
        """Largest ``r: y -> z`` with ``r . f <= h`` where ``h: x -> z``, ``f: x -> y``."""
        key = (x, y, z, h, f)
        hit = self._ext.get(key)
        if hit is None:
            hz = self.homs[(x, z)]
            table = self.composition[(x, y, z)]
            hit = self.homs[(y, z)].join(r for r in self.homs[(y, z)].elements if hz.leq(table[(r, f)], h))
            self._ext[key] = hit
        return hit

    @property
    def dual(self) -> "Quantaloid":
        """The opposite quantaloid, cached so that ``Q.dual.dual is Q``."""
        if self._dual is None:
            d = op_quantaloid(self)
            d._dual = self
            self._dual = d
        return self._dual


@dataclass
class ValidationReport:
    """Every violated axiom with a concrete witness; empty means valid."""

    violations: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def axioms(self) -> set[str]:
        return {v[0] for v in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [list(map(_jsonable, v)) for v in self.violations]}


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


def validate_quantaloid(q: Quantaloid) -> ValidationReport:
    rep = ValidationReport()
    lattices_ok = True
    for (x, y), lat in q.homs.items():
        for prob in lat.problems():
            rep.violations.append(("lattice:" + prob[0], (x, y)) + tuple(prob[1:]))
            lattices_ok = False
    for x in q.objects:
        if q.identities[x] not in q.homs[(x, x)]:
            rep.violations.append(("identity-element", x, q.identities[x]))
    objs = q.objects
    total = True
    for x, y, z in product(objs, repeat=3):
        table = q.composition.get((x, y, z), {})
        hz = q.homs[(x, z)]
        for g in q.homs[(y, z)].elements:
            for f in q.homs[(x, y)].elements:
                h = table.get((g, f))
                if h is None or h not in hz:
                    rep.violations.append(("totality", (x, y, z), g, f, h))
                    total = False
    if not total:
        return rep
    for x, y in product(objs, repeat=2):
        ex, ey = q.identities[x], q.identities[y]
        if ex not in q.homs[(x, x)] or ey not in q.homs[(y, y)]:
            continue
        for f in q.homs[(x, y)].elements:
            if q.compose(x, x, y, f, ex) != f:
                rep.violations.append(("unit-right", (x, y), f, q.compose(x, x, y, f, ex)))
            if q.compose(x, y, y, ey, f) != f:
                rep.violations.append(("unit-left", (x, y), f, q.compose(x, y, y, ey, f)))
    for w, x, y, z in product(objs, repeat=4):
        for f in q.homs[(w, x)].elements:
            for g in q.homs[(x, y)].elements:
                gf = q.compose(w, x, y, g, f)
                for h in q.homs[(y, z)].elements:
                    lhs = q.compose(w, y, z, h, gf)
                    rhs = q.compose(w, x, z, q.compose(x, y, z, h, g), f)
                    if lhs != rhs:
                        rep.violations.append(("associativity", (w, x, y, z), h, g, f, lhs, rhs))
    for x, y, z in product(objs, repeat=3):
        hxy, hyz, hxz = q.homs[(x, y)], q.homs[(y, z)], q.homs[(x, z)]
        for g in hyz.elements:
            for f in hxy.elements:
                for f2 in hxy.upset(f):
                    if not hxz.leq(q.compose(x, y, z, g, f), q.compose(x, y, z, g, f2)):
                        rep.violations.append(("monotone-right", (x, y, z), g, f, f2))
        for f in hxy.elements:
            for g in hyz.elements:
                for g2 in hyz.upset(g):
                    if not hxz.leq(q.compose(x, y, z, g, f), q.compose(x, y, z, g2, f)):
                        rep.violations.append(("monotone-left", (x, y, z), g, g2, f))
    if not lattices_ok:
        return rep
    for x, y, z in product(objs, repeat=3):
        hxy, hyz, hxz = q.homs[(x, y)], q.homs[(y, z)], q.homs[(x, z)]
        for g in hyz.elements:
            if q.compose(x, y, z, g, hxy.bottom) != hxz.bottom:
                rep.violations.append(("bottom-right", (x, y, z), g))
            for f1 in hxy.elements:
                for f2 in hxy.elements:
                    lhs = q.compose(x, y, z, g, hxy.join2(f1, f2))
                    rhs = hxz.join2(q.compose(x, y, z, g, f1), q.compose(x, y, z, g, f2))
                    if lhs != rhs:
                        rep.violations.append(("join-right", (x, y, z), g, f1, f2, lhs, rhs))
        for f in hxy.elements:
            if q.compose(x, y, z, hyz.bottom, f) != hxz.bottom:
                rep.violations.append(("bottom-left", (x, y, z), f))
            for g1 in hyz.elements:
                for g2 in hyz.elements:
                    lhs = q.compose(x, y, z, hyz.join2(g1, g2), f)
                    rhs = hxz.join2(q.compose(x, y, z, g1, f), q.compose(x, y, z, g2, f))
                    if lhs != rhs:
                        rep.violations.append(("join-left", (x, y, z), g1, g2, f, lhs, rhs))
    return rep


def _lattice_of(q: Quantaloid, x: str, y: str, items: Iterable[str]) -> tuple[FiniteLattice, list[str]]:
    lat = q.hom(x, y)
    vals = list(items)
    for v in vals:
        lat.check(v)
    return lat, vals


def join(q: Quantaloid, x: str, y: str, items: Iterable[str]) -> str:
    lat, vals = _lattice_of(q, x, y, items)
    return lat.join(vals)


def meet(q: Quantaloid, x: str, y: str, items: Iterable[str]) -> str:
    lat, vals = _lattice_of(q, x, y, items)
    return lat.meet(vals)


def _cell(q: Quantaloid, c: OneCell) -> OneCell:
    if c.src not in q.objects or c.dst not in q.objects:
        raise InputError(f"{c} has endpoints outside {q!r}")
    q.hom(c.src, c.dst).check(c.elt)
    return c


def compose_cells(q: Quantaloid, g: OneCell, f: OneCell) -> OneCell:
    _cell(q, g), _cell(q, f)
    if f.dst != g.src:
        raise InputError(f"cannot compose {g} after {f}")
    return OneCell(f.src, g.dst, q.compose(f.src, f.dst, g.dst, g.elt, f.elt))


def right_lift(q: Quantaloid, h: OneCell, g: OneCell) -> OneCell:
    """Largest ``r`` with ``g . r <= h``; ``h: X -> Z``, ``g: Y -> Z``, result ``X -> Y``."""
    _cell(q, h), _cell(q, g)
    if h.dst != g.dst:
        raise InputError(f"right lift needs a common target, got {h} and {g}")
    return OneCell(h.src, g.src, q.right_lift(h.src, g.src, h.dst, h.elt, g.elt))


def right_extension(q: Quantaloid, h: OneCell, f: OneCell) -> OneCell:
    """Largest ``r`` with ``r . f <= h``; ``h: X -> Z``, ``f: X -> Y``, result ``Y -> Z``."""
    _cell(q, h), _cell(q, f)
    if h.src != f.src:
        raise InputError(f"right extension needs a common source, got {h} and {f}")
    return OneCell(f.dst, h.dst, q.right_extension(h.src, f.dst, h.dst, h.elt, f.elt))


def op_quantaloid(q: Quantaloid) -> Quantaloid:
    """Reverse 1-cells: ``hom'(X, Y) = hom(Y, X)`` with composition swapped."""
    homs = {(x, y): q.homs[(y, x)] for x, y in product(q.objects, repeat=2)}
    comp = {}
    for x, y, z in product(q.objects, repeat=3):
        src = q.composition.get((z, y, x), {})
        comp[(x, y, z)] = {(f, g): h for (g, f), h in src.items()}
    name = None
    if q.name is not None:
        name = q.name[3:] if q.name.startswith("op:") else "op:" + q.name
    return Quantaloid(q.objects, homs, comp, q.identities, name=name)


def quantaloid_from_json(data: Mapping, name: str | None = None) -> Quantaloid:
    try:
        objects = [str(o) for o in data["objects"]]
        homs = {}
        for key, spec in data["homs"].items():
            x, y = key.split("->")
            homs[(x.strip(), y.strip())] = FiniteLattice(spec["elements"], spec.get("leq", []))
        comp: dict = {}
        for key, rows in data["compose"].items():
            x, y, z = (s.strip() for s in key.split("->"))
            table = comp.setdefault((x, y, z), {})
            for g, f, h in rows:
                table[(str(g), str(f))] = str(h)
        ids = {str(k): str(v) for k, v in data["identities"].items()}
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed quantaloid document: {exc!r}") from None
    return Quantaloid(objects, homs, comp, ids, name=name or data.get("name"))


def quantaloid_to_json(q: Quantaloid) -> dict:
    """Serialise; order relations are written as given, sorted for stable output."""
    out: dict = {"objects": list(q.objects), "homs": {}, "compose": {}, "identities": dict(q.identities)}
    if q.name is not None:
        out["name"] = q.name
    for x, y in product(q.objects, repeat=2):
        lat = q.homs[(x, y)]
        pairs = sorted(set(lat.raw_leq)) if lat.raw_leq else sorted(lat.cover_pairs())
        out["homs"][f"{x}->{y}"] = {"elements": list(lat.elements), "leq": [list(p) for p in pairs]}
    for x, y, z in product(q.objects, repeat=3):
        table = q.composition.get((x, y, z), {})
        out["compose"][f"{x}->{y}->{z}"] = sorted([g, f, h] for (g, f), h in table.items())
    return out
