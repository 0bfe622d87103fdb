"""Constructors for standard bases and example instances.

Includes truth-value chains, free quantaloids on finite categories,
faithful functors viewed as enriched categories, and relations on a finite
site with sheafification through Cauchy completion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .completion import cauchy_completion
from .enriched import VCategory
from .errors import InputError
from .quantaloid import FiniteLattice, Quantaloid

FRAME = "frame"
LUKASIEWICZ = "lukasiewicz"
DEFAULT_PATH_CAP = 12


def _grade(k: int, n: int) -> str:
    return str(Fraction(k, n - 1))


def chain_quantale(n: int, law: str = FRAME) -> Quantaloid:
    """One-object quantale on grades ``0, 1/(n-1), ..., 1`` with unit ``1``.

    ``frame`` composes by minimum, ``lukasiewicz`` by ``max(0, x + y - 1)``.
    """
    if n < 2:
        raise InputError("a chain quantale needs at least two grades")
    if law not in (FRAME, LUKASIEWICZ):
        raise InputError(f"unknown composition law {law!r}")
    grades = [Fraction(k, n - 1) for k in range(n)]
    names = [_grade(k, n) for k in range(n)]
    lat = FiniteLattice(names, [(names[k], names[k + 1]) for k in range(n - 1)])
    table = {}
    for (gi, g), (fi, f) in product(enumerate(grades), repeat=2):
        v = min(g, f) if law == FRAME else max(Fraction(0), g + f - 1)
        table[(names[gi], names[fi])] = str(v)
    name = "2" if (n == 2 and law == FRAME) else (f"chain{n}" if law == FRAME else f"luk{n}")
    return Quantaloid(["*"], {("*", "*"): lat}, {("*", "*", "*"): table}, {"*": "1"}, name=name)


def two_quantale() -> Quantaloid:
    return chain_quantale(2, FRAME)


def named_base(name: str) -> Quantaloid:
    """Bases addressable by name: ``2``, ``chainN``, ``lukN``, ``free-parallel`` and ``op:`` prefixes."""
    if name.startswith("op:"):
        return named_base(name[3:]).dual
    if name in ("2", "two"):
        return two_quantale()
    for prefix, law in (("chain", FRAME), ("luk", LUKASIEWICZ)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return chain_quantale(int(name[len(prefix):]), law)
    if name == "free-parallel":
        return free_parallel_pair()
    raise InputError(f"unknown base {name!r}")


class FiniteCategory:
    """A finite category given by objects, morphisms and a composition table.

    Morphism names of composites list generators in composition order,
    e.g. ``g.f`` is ``f`` followed by ``g``; identities are ``1_x``.
    """

    def __init__(self, objects: Sequence[str], morphisms: Mapping[str, tuple[str, str]],
                 composition: Mapping[tuple[str, str], str], identities: Mapping[str, str], name: str | None = None):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.composition = dict(composition)
        self.identities = dict(identities)
        self.name = name
        self._dual: FiniteCategory | None = None

    def src(self, m: str) -> str:
        return self.morphisms[m][0]

    def dst(self, m: str) -> str:
        return self.morphisms[m][1]

    def hom(self, x: str, y: str) -> list[str]:
        return sorted(m for m, (s, t) in self.morphisms.items() if s == x and t == y)

    def into(self, c: str) -> list[str]:
        return sorted(m for m, (_, t) in self.morphisms.items() if t == c)

    def compose(self, g: str, f: str) -> str:
        """``g . f``: first ``f`` then ``g``."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise InputError(f"{g!r} and {f!r} are not composable") from None

    def identity(self, x: str) -> str:
        return self.identities[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and self.composition == other.composition)

    def __hash__(self) -> int:
        return hash((self.objects, tuple(sorted(self.morphisms))))

    def __repr__(self) -> str:
        return f"FiniteCategory({self.name or list(self.objects)}, {len(self.morphisms)} morphisms)"

    @property
    def dual(self) -> "FiniteCategory":
        if self._dual is None:
            d = FiniteCategory(self.objects, {m: (t, s) for m, (s, t) in self.morphisms.items()},
                               {(f, g): h for (g, f), h in self.composition.items()}, self.identities,
                               name=None if self.name is None else f"op:{self.name}")
            d._dual = self
            self._dual = d
        return self._dual

    @classmethod
    def from_generators(cls, objects: Sequence[str], generators: Iterable[Sequence[str]],
                        relations: Iterable[Sequence[Sequence[str]]] = (), path_cap: int = DEFAULT_PATH_CAP,
                        name: str | None = None) -> "FiniteCategory":
        """Enumerate the category presented by generators and relations.

        Paths are lists of generator names in application order; ``[]`` is an
        identity. Morphisms are found by enumerating the right Cayley graph
        and identifying nodes on which the two sides of a relation meet.
        """
        objects = list(objects)
        gens = {}
        for g in generators:
            gname, s, t = (str(v) for v in g)
            if s not in objects or t not in objects:
                raise InputError(f"generator {gname!r} has an unknown endpoint")
            if gname in gens:
                raise InputError(f"duplicate generator {gname!r}")
            gens[gname] = (s, t)
        rels = []
        for rel in relations:
            lhs, rhs = (list(map(str, side)) for side in rel)
            ends = []
            for side in (lhs, rhs):
                for a in side:
                    if a not in gens:
                        raise InputError(f"relation mentions unknown generator {a!r}")
                for a, b in zip(side, side[1:]):
                    if gens[a][1] != gens[b][0]:
                        raise InputError(f"relation path {side} is not composable")
                ends.append((gens[side[0]][0], gens[side[-1]][1]) if side else None)
            (l_end, r_end) = ends
            if l_end is not None and r_end is not None and l_end != r_end:
                raise InputError(f"relation sides {lhs} and {rhs} have different endpoints")
            if l_end is None and r_end is None:
                continue
            if l_end is None or r_end is None:
                s, t = l_end or r_end
                if s != t:
                    raise InputError(f"identity relation on a non-endomorphism {lhs or rhs}")
            rels.append((lhs, rhs, (l_end or r_end)[0]))
        return _enumerate_category(objects, gens, rels, path_cap, name)


def _enumerate_category(objects, gens, rels, path_cap, name) -> FiniteCategory:
    parent: list[int] = []
    edges: list[dict] = []
    start: list[str] = []
    end: list[str] = []
    word: list[tuple] = []

    def new(s: str, t: str, w: tuple) -> int:
        if len(w) > path_cap:
            raise InputError(f"path {'.'.join(reversed(w))} exceeds the path cap {path_cap}; "
                             "the presented category may be infinite")
        parent.append(len(parent))
        edges.append({})
        start.append(s)
        end.append(t)
        word.append(w)
        return len(parent) - 1

    def find(n: int) -> int:
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    def follow(n: int, a: str) -> int:
        n = find(n)
        m = edges[n].get(a)
        if m is None:
            m = new(start[n], gens[a][1], word[n] + (a,))
            edges[n][a] = m
        return find(m)

    def trace(n: int, path: Sequence[str]) -> int:
        for a in path:
            n = follow(n, a)
        return find(n)

    def merge(x: int, y: int) -> None:
        queue = [(x, y)]
        while queue:
            u, v = (find(z) for z in queue.pop())
            if u == v:
                continue
            if v < u:
                u, v = v, u
            parent[v] = u
            for a, t in edges[v].items():
                if a in edges[u]:
                    queue.append((edges[u][a], t))
                else:
                    edges[u][a] = t

    for x in objects:
        new(x, x, ())
    i = 0
    while i < len(parent):
        if find(i) == i:
            for lhs, rhs, s in rels:
                if end[i] == s:
                    merge(trace(i, lhs), trace(i, rhs))
            if find(i) == i:
                for a, (s, _) in gens.items():
                    if s == end[i]:
                        follow(i, a)
        i += 1

    live = [n for n in range(len(parent)) if find(n) == n]

    def label(n: int) -> str:
        return f"1_{start[n]}" if not word[n] else ".".join(reversed(word[n]))

    names = {n: label(n) for n in live}
    morphisms = {names[n]: (start[n], end[n]) for n in live}
    identities = {x: f"1_{x}" for x in objects}
    comp = {}
    for f in live:
        for g in live:
            if start[g] == end[f]:
                comp[(names[g], names[f])] = names[trace(f, word[g])]
    return FiniteCategory(objects, morphisms, comp, identities, name=name)


def terminal_category() -> FiniteCategory:
    return FiniteCategory.from_generators(["*"], [], name="1")


def parallel_pair_category() -> FiniteCategory:
    """Two objects with a parallel pair ``f, g: 0 -> 1``."""
    return FiniteCategory.from_generators(["0", "1"], [("f", "0", "1"), ("g", "0", "1")], name="parallel")


def _subset_id(items: Iterable[str]) -> str:
    return "{" + ",".join(sorted(items)) + "}"


def _powerset(items: Sequence[str]) -> list[tuple[str, ...]]:
    items = sorted(items)
    return [c for k in range(len(items) + 1) for c in combinations(items, k)]


def powerset_lattice(items: Sequence[str]) -> FiniteLattice:
    subsets = _powerset(items)
    ids = [_subset_id(s) for s in subsets]
    covers = []
    for s in subsets:
        for x in items:
            if x not in s:
                covers.append((_subset_id(s), _subset_id(set(s) | {x})))
    return FiniteLattice(ids, covers)


def _parse_subset(e: str) -> frozenset:
    body = e[1:-1]
    return frozenset(body.split(",")) if body else frozenset()


def free_quantaloid(b: FiniteCategory, max_hom: int = 6) -> Quantaloid:
    """Homs are subsets of hom-sets ordered by inclusion, composed elementwise."""
    objs = b.objects
    homs = {}
    subsets = {}
    for x, y in product(objs, repeat=2):
        arrows = b.hom(x, y)
        if len(arrows) > max_hom:
            raise InputError(f"hom-set {x}->{y} has {len(arrows)} arrows; powerset too large")
        homs[(x, y)] = powerset_lattice(arrows)
        subsets[(x, y)] = _powerset(arrows)
    comp = {}
    for x, y, z in product(objs, repeat=3):
        table = {}
        for g in subsets[(y, z)]:
            for f in subsets[(x, y)]:
                table[(_subset_id(g), _subset_id(f))] = _subset_id({b.compose(gg, ff) for gg in g for ff in f})
        comp[(x, y, z)] = table
    ids = {x: _subset_id([b.identity(x)]) for x in objs}
    return Quantaloid(objs, homs, comp, ids, name=f"free:{b.name}" if b.name else None)


def free_parallel_pair() -> Quantaloid:
    q = free_quantaloid(parallel_pair_category())
    q.name = "free-parallel"
    return q


@dataclass
class ConcreteCategory:
    """A faithful functor into ``base`` presented by its fibres and liftable arrows.

    ``lifts[(x, y)]`` is the set of base arrows ``fibre[x] -> fibre[y]`` that
    are images of arrows ``x -> y``.
    """

    base: FiniteCategory
    objects: tuple
    fibre: dict
    lifts: dict = field(default_factory=dict)

    def validate(self) -> list[tuple]:
        out = []
        b = self.base
        for x in self.objects:
            if b.identity(self.fibre[x]) not in self.lifts.get((x, x), set()):
                out.append(("identity", x))
        for (x, y), arrows in self.lifts.items():
            for m in arrows:
                if b.morphisms.get(m) != (self.fibre[x], self.fibre[y]):
                    out.append(("endpoints", x, y, m))
        for x, y, z in product(self.objects, repeat=3):
            for f in self.lifts.get((x, y), ()):
                for g in self.lifts.get((y, z), ()):
                    if b.compose(g, f) not in self.lifts.get((x, z), set()):
                        out.append(("composition", x, y, z, g, f))
        return out

    def lifts_arrow(self, x: str, y: str, m: str) -> bool:
        return m in self.lifts.get((x, y), set())


def faithful_to_vcat(c: ConcreteCategory, base: Quantaloid | None = None) -> VCategory:
    """``hom[x][y]`` is the set of base arrows ``fibre[y] -> fibre[x]`` that lift."""
    problems = c.validate()
    if problems:
        raise InputError(f"not a faithful functor: {problems[:3]}")
    q = base if base is not None else free_quantaloid(c.base)
    hom = {(x, y): _subset_id(c.lifts.get((y, x), set())) for x in c.objects for y in c.objects}
    return VCategory(q, list(c.objects), dict(c.fibre), hom)


def vcat_to_faithful(a: VCategory, b: FiniteCategory) -> ConcreteCategory:
    lifts = {}
    for x, y in product(a.objects, repeat=2):
        s = _parse_subset(a.hom[(y, x)])
        if s:
            lifts[(x, y)] = set(s)
    return ConcreteCategory(b, tuple(a.objects), dict(a.extents), lifts)


# Sites and relations


def _is_sieve(cat: FiniteCategory, c: str, s: frozenset) -> bool:
    return all(cat.compose(f, g) in s for f in s for g in cat.into(cat.src(f)))


def _sieve_closure(cat: FiniteCategory, arrows: Iterable[str]) -> frozenset:
    out = set(arrows)
    for f in list(out):
        for g in cat.into(cat.src(f)):
            out.add(cat.compose(f, g))
    return frozenset(out)


def all_sieves(cat: FiniteCategory, c: str) -> list[frozenset]:
    into = cat.into(c)
    if len(into) > 16:
        raise InputError(f"too many arrows into {c!r} to enumerate sieves")
    out = []
    for k in range(len(into) + 1):
        for sub in combinations(into, k):
            s = frozenset(sub)
            if _is_sieve(cat, c, s):
                out.append(s)
    return out


def pullback_sieve(cat: FiniteCategory, s: frozenset, u: str) -> frozenset:
    """``u* S = {v : u . v in S}`` for ``u: d -> c``."""
    return frozenset(v for v in cat.into(cat.src(u)) if cat.compose(u, v) in s)


class FiniteSite:
    """A finite category with a Grothendieck topology ``covers[c]`` (a set of sieves)."""

    def __init__(self, category: FiniteCategory, covers: Mapping[str, Iterable[Iterable[str]]], name=None):
        self.category = category
        self.name = name
        cv = {}
        for c in category.objects:
            sieves = {_sieve_closure(category, s) for s in covers.get(c, ())}
            sieves.add(frozenset(category.into(c)))
            cv[c] = sieves
        self.covers = cv
        problems = self.problems()
        if problems:
            raise InputError(f"coverage is not a Grothendieck topology: {problems[:3]}")

    @classmethod
    def generated(cls, category: FiniteCategory, coverage: Mapping[str, Iterable[Iterable[str]]], name=None):
        """Smallest topology containing the given sieves."""
        cat = category
        cv = {c: {_sieve_closure(cat, s) for s in coverage.get(c, ())} | {frozenset(cat.into(c))}
              for c in cat.objects}
        sieves = {c: all_sieves(cat, c) for c in cat.objects}
        changed = True
        while changed:
            changed = False
            for c in cat.objects:
                for s in list(cv[c]):
                    for u in cat.morphisms:
                        if cat.dst(u) == c:
                            pb = pullback_sieve(cat, s, u)
                            if pb not in cv[cat.src(u)]:
                                cv[cat.src(u)].add(pb)
                                changed = True
                for r in sieves[c]:
                    if r in cv[c]:
                        continue
                    if any(all(pullback_sieve(cat, r, u) in cv[cat.src(u)] for u in s) for s in cv[c]):
                        cv[c].add(r)
                        changed = True
        return cls(cat, {c: [sorted(s) for s in v] for c, v in cv.items()}, name=name)

    def problems(self) -> list[tuple]:
        cat = self.category
        out = []
        for c in cat.objects:
            for s in self.covers[c]:
                for u in cat.morphisms:
                    if cat.dst(u) == c and pullback_sieve(cat, s, u) not in self.covers[cat.src(u)]:
                        out.append(("stability", c, sorted(s), u))
            for r in all_sieves(cat, c):
                if r in self.covers[c]:
                    continue
                for s in self.covers[c]:
                    if all(pullback_sieve(cat, r, u) in self.covers[cat.src(u)] for u in s):
                        out.append(("transitivity", c, sorted(r), sorted(s)))
                        break
        return out

    def covering(self, c: str) -> list[frozenset]:
        return sorted(self.covers[c], key=lambda s: (len(s), sorted(s)))

    def is_covering(self, c: str, s: Iterable[str]) -> bool:
        return frozenset(s) in self.covers[c]


def trivial_site(cat: FiniteCategory) -> FiniteSite:
    return FiniteSite(cat, {}, name=f"trivial:{cat.name}")


Pair = tuple  # (s, t) arrows with a common domain


def _pairs(cat: FiniteCategory, x: str, y: str) -> list[Pair]:
    return [(s, t) for s in cat.into(x) for t in cat.into(y) if cat.src(s) == cat.src(t)]


def _precompose_closure(cat: FiniteCategory, rel: Iterable[Pair]) -> frozenset:
    out = set(rel)
    for s, t in list(out):
        for w in cat.into(cat.src(s)):
            out.add((cat.compose(s, w), cat.compose(t, w)))
    return frozenset(out)


def _j_closure(site: FiniteSite, rel: frozenset, candidates: Sequence[Pair]) -> frozenset:
    cat = site.category
    cur = set(rel)
    changed = True
    while changed:
        changed = False
        for s, t in candidates:
            if (s, t) in cur:
                continue
            d = cat.src(s)
            sieve = frozenset(w for w in cat.into(d) if (cat.compose(s, w), cat.compose(t, w)) in cur)
            if sieve in site.covers[d]:
                cur.add((s, t))
                changed = True
    return frozenset(cur)


def _rel_id(rel: Iterable[Pair]) -> str:
    return "{" + ",".join(f"{s}|{t}" for s, t in sorted(rel)) + "}"


def _parse_rel(e: str) -> frozenset:
    body = e[1:-1]
    if not body:
        return frozenset()
    return frozenset(tuple(p.split("|")) for p in body.split(","))


def rel_site_quantaloid(site: FiniteSite, max_pairs: int = 14) -> Quantaloid:
    """Closed relations between representables on a finite site.

    ``hom(X, Y)`` consists of sets of pairs ``(s: d -> X, t: d -> Y)`` closed
    under precomposition and under covering sieves; composition is relational
    composition stage by stage, then closed.
    """
    cat = site.category
    objs = cat.objects
    homs, elems = {}, {}
    for x, y in product(objs, repeat=2):
        pairs = _pairs(cat, x, y)
        if len(pairs) > max_pairs:
            raise InputError(f"{len(pairs)} arrow pairs between {x} and {y}; too many to enumerate relations")
        closed = set()
        for k in range(len(pairs) + 1):
            for sub in combinations(pairs, k):
                r = frozenset(sub)
                if _precompose_closure(cat, r) != r:
                    continue
                if _j_closure(site, r, pairs) == r:
                    closed.add(r)
        ordered = sorted(closed, key=lambda r: (len(r), sorted(r)))
        ids = [_rel_id(r) for r in ordered]
        covers = [(_rel_id(a), _rel_id(b)) for a in ordered for b in ordered
                  if a < b and not any(a < c < b for c in ordered)]
        homs[(x, y)] = FiniteLattice(ids, covers)
        elems[(x, y)] = ordered
    comp = {}
    for x, y, z in product(objs, repeat=3):
        pairs_xz = _pairs(cat, x, z)
        table = {}
        for g in elems[(y, z)]:
            by_stage: dict = {}
            for u, v in g:
                by_stage.setdefault((cat.src(u), u), []).append(v)
            for f in elems[(x, y)]:
                raw = set()
                for s, t in f:
                    for v in by_stage.get((cat.src(s), t), ()):
                        raw.add((s, v))
                table[(_rel_id(g), _rel_id(f))] = _rel_id(_j_closure(site, frozenset(raw), pairs_xz))
        comp[(x, y, z)] = table
    ids = {}
    for x in objs:
        diag = _precompose_closure(cat, [(m, m) for m in cat.into(x)])
        ids[x] = _rel_id(_j_closure(site, diag, _pairs(cat, x, x)))
    return Quantaloid(objs, homs, comp, ids, name=f"rel:{site.name}" if site.name else None)


@dataclass
class SetPresheaf:
    """A presheaf of finite sets: ``sections[c]`` and ``restrict[u][x]`` for ``u: d -> c``."""

    category: FiniteCategory
    sections: dict
    restrict: dict

    @classmethod
    def from_generators(cls, cat: FiniteCategory, sections: Mapping[str, Iterable[str]],
                        maps: Mapping[str, Mapping[str, str]]) -> "SetPresheaf":
        """Extend restriction maps given on some morphisms to all of them, checking functoriality."""
        secs = {c: [str(x) for x in sections.get(c, ())] for c in cat.objects}
        known: dict[str, dict] = {cat.identity(c): {x: x for x in secs[c]} for c in cat.objects}
        # maps out of an empty set need no data
        known.update({m: {} for m, (_, t) in cat.morphisms.items() if not secs[t]})
        for m, mp in maps.items():
            if m not in cat.morphisms:
                raise InputError(f"restriction given for unknown morphism {m!r}")
            known[m] = {str(k): str(v) for k, v in mp.items()}
        changed = True
        while changed:
            changed = False
            for (g, f), h in cat.composition.items():
                if g in known and f in known and h not in known:
                    # F(g . f) = F(f) after F(g)
                    known[h] = {x: known[f][known[g][x]] for x in secs[cat.dst(g)]}
                    changed = True
        missing = [m for m in cat.morphisms if m not in known]
        if missing:
            raise InputError(f"no restriction map derivable for {missing}")
        out = cls(cat, secs, known)
        problems = out.problems()
        if problems:
            raise InputError(f"restriction maps are not functorial: {problems[:3]}")
        return out

    def problems(self) -> list[tuple]:
        cat = self.category
        out = []
        for m, (s, t) in cat.morphisms.items():
            mp = self.restrict[m]
            if set(mp) != set(self.sections[t]) or not set(mp.values()) <= set(self.sections[s]):
                out.append(("map", m))
        if out:
            return out
        for (g, f), h in cat.composition.items():
            for x in self.sections[cat.dst(g)]:
                if self.restrict[h][x] != self.restrict[f][self.restrict[g][x]]:
                    out.append(("functor", g, f, x))
        return out

    def res(self, u: str, x: str) -> str:
        return self.restrict[u][x]

    def to_json(self) -> dict:
        return {"sections": {c: list(v) for c, v in self.sections.items()},
                "restrictions": {m: dict(sorted(mp.items())) for m, mp in sorted(self.restrict.items())}}


def set_presheaf_from_json(cat: FiniteCategory, data: Mapping) -> SetPresheaf:
    try:
        return SetPresheaf.from_generators(cat, data["sections"], data.get("restrictions", {}))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed presheaf-of-sets document: {exc!r}") from None


def matching_families(site: FiniteSite, f: SetPresheaf, c: str, sieve: frozenset) -> list[dict]:
    """Families ``x_u`` for ``u`` in the sieve with ``F(v) x_u = x_{u v}``."""
    cat = site.category
    arrows = sorted(sieve)
    out = []
    choice: dict = {}

    def go(i: int) -> None:
        if i == len(arrows):
            out.append(dict(choice))
            return
        u = arrows[i]
        for x in f.sections[cat.src(u)]:
            choice[u] = x
            ok = True
            for v in cat.into(cat.src(u)):
                uv = cat.compose(u, v)
                if uv in choice and f.res(v, x) != choice[uv]:
                    ok = False
                    break
            if ok:
                for w in arrows[:i]:
                    for v in cat.into(cat.src(w)):
                        if cat.compose(w, v) == u and f.res(v, choice[w]) != x:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                go(i + 1)
        choice.pop(u, None)

    go(0)
    return out


def sheaf_problems(site: FiniteSite, f: SetPresheaf) -> list[tuple]:
    """Covers and matching families lacking a unique amalgamation."""
    out = []
    for c in site.category.objects:
        for s in site.covering(c):
            for fam in matching_families(site, f, c, s):
                amalg = [x for x in f.sections[c] if all(f.res(u, x) == y for u, y in fam.items())]
                if len(amalg) != 1:
                    out.append((c, sorted(s), fam, amalg))
    return out


def is_sheaf(site: FiniteSite, f: SetPresheaf) -> bool:
    return not sheaf_problems(site, f)


def _section_name(c: str, x: str) -> str:
    return f"{c}:{x}"


def presheaf_category(site: FiniteSite, f: SetPresheaf, base: Quantaloid | None = None) -> VCategory:
    """The symmetric enriched category of sections: objects ``c:x`` of extent ``c``.

    ``hom[c:x][c':x']`` is the closed relation of pairs ``(s: e -> c', t: e -> c)``
    on which the two sections agree.
    """
    cat = site.category
    q = base if base is not None else rel_site_quantaloid(site)
    objs, ext = [], {}
    for c in cat.objects:
        for x in f.sections[c]:
            n = _section_name(c, x)
            objs.append(n)
            ext[n] = c
    hom = {}
    for c in cat.objects:
        for x in f.sections[c]:
            for c2 in cat.objects:
                pairs = _pairs(cat, c2, c)
                for x2 in f.sections[c2]:
                    rel = frozenset((s, t) for s, t in pairs if f.res(s, x2) == f.res(t, x))
                    hom[(_section_name(c, x), _section_name(c2, x2))] = _rel_id(_j_closure(site, rel, pairs))
    return VCategory(q, objs, ext, hom)


def sheafify(site: FiniteSite, f: SetPresheaf, base: Quantaloid | None = None) -> SetPresheaf:
    """Sheafification read off the Cauchy completion of the category of sections.

    Sections over ``c`` are the completion's objects of extent ``c``;
    restriction along ``u: d -> c`` composes a column with the closed graph of ``u``.
    """
    cat = site.category
    q = base if base is not None else rel_site_quantaloid(site)
    xf = presheaf_category(site, f, q)
    res = cauchy_completion(xf)
    secs = {c: [n for n in res.psh.objects if res.psh.extents[n] == c] for c in cat.objects}
    graphs = {}
    for u in cat.morphisms:
        d, c = cat.src(u), cat.dst(u)
        pairs = _pairs(cat, d, c)
        raw = frozenset((v, cat.compose(u, v)) for v in cat.into(d))
        graphs[u] = _rel_id(_j_closure(site, raw, pairs))
    from .enriched import Presheaf

    restrict = {}
    for u in cat.morphisms:
        d, c = cat.src(u), cat.dst(u)
        mp = {}
        for n in secs[c]:
            p = res.members[n]
            col = [q.compose(d, c, xf.extents[a], pa, graphs[u]) for a, pa in zip(xf.objects, p.col)]
            name = res.classify(Presheaf(xf, d, col))
            if name is None:
                raise InputError(f"restriction of {n} along {u} left the completion")
            mp[n] = name
        restrict[u] = mp
    return SetPresheaf(cat, secs, restrict)


def set_presheaf_isomorphism(f: SetPresheaf, g: SetPresheaf) -> dict | None:
    """A natural bijection ``F -> G`` by backtracking, or ``None``."""
    cat = f.category
    if any(len(f.sections[c]) != len(g.sections[c]) for c in cat.objects):
        return None
    items = [(c, x) for c in cat.objects for x in f.sections[c]]
    assign: dict = {}
    used: dict = {c: set() for c in cat.objects}

    def consistent(c: str, x: str, y: str) -> bool:
        for u in cat.morphisms:
            s, t = cat.src(u), cat.dst(u)
            if t == c and (s, f.res(u, x)) in assign and assign[(s, f.res(u, x))] != g.res(u, y):
                return False
            if s == c:
                for x2 in f.sections[t]:
                    if f.res(u, x2) == x and (t, x2) in assign and g.res(u, assign[(t, x2)]) != y:
                        return False
        return True

    def go(i: int) -> bool:
        if i == len(items):
            return True
        c, x = items[i]
        for y in g.sections[c]:
            if y in used[c] or not consistent(c, x, y):
                continue
            assign[(c, x)] = y
            used[c].add(y)
            if go(i + 1):
                return True
            del assign[(c, x)]
            used[c].discard(y)
        return False

    return dict(assign) if go(0) else None


def site_from_json(data: Mapping, generate: bool = True) -> FiniteSite:
    try:
        cat = FiniteCategory.from_generators(
            data["objects"], [(a["name"], a["src"], a["dst"]) for a in data.get("arrows", [])],
            data.get("relations", []), name=data.get("name"))
        cov = {c: [list(s) for s in v] for c, v in data.get("coverage", {}).items()}
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed site document: {exc!r}") from None
    for c, sieves in cov.items():
        for s in sieves:
            for m in s:
                if m not in cat.morphisms or cat.dst(m) != c:
                    raise InputError(f"covering sieve on {c!r} lists {m!r}, which is not an arrow into it")
    return FiniteSite.generated(cat, cov, name=data.get("name")) if generate else FiniteSite(cat, cov, data.get("name"))


# Example sites


def cover_site() -> FiniteSite:
    """``0`` covered by ``ia: a -> 0`` and ``ib: b -> 0``."""
    cat = FiniteCategory.from_generators(["0", "a", "b"], [("ia", "a", "0"), ("ib", "b", "0")], name="cover")
    return FiniteSite(cat, {"0": [["ia", "ib"]]}, name="cover")


def idempotent_site() -> FiniteSite:
    """One object with an idempotent ``e`` whose sieve covers."""
    cat = FiniteCategory.from_generators(["*"], [("e", "*", "*")], [(["e", "e"], ["e"])], name="idempotent")
    return FiniteSite(cat, {"*": [["e"]]}, name="idempotent")
