"""Independent brute-force oracles used only by the tests."""
from __future__ import annotations

from itertools import combinations, product

from quantcat.builders import SetPresheaf, matching_families


def exhaustive_right_lift(q, x, y, z, h, g):
    """Largest r: x -> y with g . r <= h, found by scanning every element."""
    lat = q.homs[(x, y)]
    sols = [r for r in lat.elements if q.leq(x, z, q.compose(x, y, z, g, r), h)]
    best = [r for r in sols if all(lat.leq(s, r) for s in sols)]
    return best[0] if best else None


def exhaustive_right_extension(q, x, y, z, h, f):
    lat = q.homs[(y, z)]
    sols = [r for r in lat.elements if q.leq(x, z, q.compose(x, y, z, r, f), h)]
    best = [r for r in sols if all(lat.leq(s, r) for s in sols)]
    return best[0] if best else None


def all_presheaf_columns(a, extent):
    """Every column satisfying the left action, by scanning the full product."""
    q = a.base
    doms = [q.homs[(extent, a.extents[x])].elements for x in a.objects]
    out = []
    for col in product(*doms):
        ok = True
        for i, x in enumerate(a.objects):
            for j, y in enumerate(a.objects):
                c = q.compose(extent, a.extents[x], a.extents[y], a.hom[(y, x)], col[i])
                if not q.leq(extent, a.extents[y], c, col[j]):
                    ok = False
        if ok:
            out.append(col)
    return out


def all_copresheaf_rows(a, extent):
    q = a.base
    doms = [q.homs[(a.extents[x], extent)].elements for x in a.objects]
    out = []
    for row in product(*doms):
        ok = True
        for i, x in enumerate(a.objects):
            for j, y in enumerate(a.objects):
                # q(x) . A(x, y) <= q(y)
                c = q.compose(a.extents[y], a.extents[x], extent, row[i], a.hom[(x, y)])
                if not q.leq(a.extents[y], extent, c, row[j]):
                    ok = False
        if ok:
            out.append(row)
    return out


def left_adjoint_by_scan(p):
    """Copresheaves right adjoint to p found by scanning all rows (unit and counit)."""
    a = p.carrier
    q = a.base
    v = p.extent
    ext = a.extents
    found = []
    for row in all_copresheaf_rows(a, v):
        unit = q.join(v, v, [q.compose(v, ext[x], v, r, px) for x, r, px in zip(a.objects, row, p.col)])
        if not q.leq(v, v, q.identity(v), unit):
            continue
        counit = all(
            q.leq(ext[y], ext[x], q.compose(ext[y], v, ext[x], px, row[j]), a.hom[(x, y)])
            for x, px in zip(a.objects, p.col) for j, y in enumerate(a.objects))
        if counit:
            found.append(row)
    return found


def plus_construction(site, f):
    """One plus step: matching families on covering sieves modulo agreement on a cover."""
    cat = site.category
    fams = {}
    for c in cat.objects:
        raw = []
        for s in site.covering(c):
            for fam in matching_families(site, f, c, s):
                raw.append((s, fam))
        fams[c] = raw

    def equivalent(c, a, b):
        (s, x), (t, y) = a, b
        common = s & t
        for r in site.covering(c):
            if r <= common and all(x[u] == y[u] for u in r):
                return True
        return False

    classes = {}
    for c in cat.objects:
        reps = []
        for item in fams[c]:
            if not any(equivalent(c, item, r) for r in reps):
                reps.append(item)
        classes[c] = reps

    def locate(c, item):
        for i, r in enumerate(classes[c]):
            if equivalent(c, item, r):
                return i
        raise AssertionError("family has no class")

    sections = {c: [f"s{i}" for i in range(len(classes[c]))] for c in cat.objects}
    restrict = {}
    for u in cat.morphisms:
        d, c = cat.src(u), cat.dst(u)
        mp = {}
        for i, (s, fam) in enumerate(classes[c]):
            pb = frozenset(v for v in cat.into(d) if cat.compose(u, v) in s)
            sub = {v: fam[cat.compose(u, v)] for v in pb}
            mp[f"s{i}"] = f"s{locate(d, (pb, sub))}"
        restrict[u] = mp
    return SetPresheaf(cat, sections, restrict)


def sheafify_by_plus(site, f):
    return plus_construction(site, plus_construction(site, f))


def final_lift_failures(concrete, target, max_sink=2):
    """Sinks of size <= max_sink into a fibre object with no final lift."""
    b = concrete.base
    objs = concrete.objects
    arms = [(x, m) for x in objs for m in b.hom(concrete.fibre[x], target)]
    candidates = [y for y in objs if concrete.fibre[y] == target]
    fails = []
    for k in range(max_sink + 1):
        for sink in combinations(arms, k):
            ok_any = False
            for y in candidates:
                if not all(concrete.lifts_arrow(x, y, m) for x, m in sink):
                    continue
                good = True
                for z in objs:
                    for g in b.hom(target, concrete.fibre[z]):
                        lifts = concrete.lifts_arrow(y, z, g)
                        through = all(concrete.lifts_arrow(x, z, b.compose(g, m)) for x, m in sink)
                        if lifts != through:
                            good = False
                            break
                    if not good:
                        break
                if good:
                    ok_any = True
                    break
            if not ok_any:
                fails.append(sink)
    return fails
