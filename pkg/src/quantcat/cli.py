"""Command-line entry point.

Exit codes: 0 pass, 1 fail or counterexample, 2 input error, 3 resource cap
or inconclusive verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .analysis import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    CheckReport,
    is_dense_functor,
    is_exact,
    is_fully_faithful,
    is_monic,
    is_well_behaved,
    verify_cocompletion,
    verify_presheaf_object,
)
from .builders import (
    is_sheaf,
    named_base,
    set_presheaf_from_json,
    set_presheaf_isomorphism,
    sheaf_problems,
    sheafify,
    site_from_json,
)
from .completion import (
    ALL,
    FAMILIES,
    WeightClass,
    cauchy_completion,
    cocompletion,
    completion,
    enumerate_presheaves,
    representables,
)
from .enriched import (
    VCategory,
    VFunctor,
    Weight,
    category_from_json,
    category_to_json,
    distributor_from_json,
    distributor_to_json,
    functor_to_json,
)
from .errors import InputError, ResourceCapError
from .propcheck import DEFAULT_CASES, lemma_suite
from .quantaloid import Quantaloid, quantaloid_from_json, validate_quantaloid

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
OP = "op:"


# -- loading ---------------------------------------------------------------------

def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _split_op(ref: str) -> tuple[bool, str]:
    flip = False
    while ref.startswith(OP):
        flip = not flip
        ref = ref[len(OP):]
    return flip, ref


class Loader:
    """Resolves base and category references relative to the referring file."""

    def __init__(self):
        self._bases: dict = {}
        self._cats: dict = {}

    def base(self, ref, here: Path) -> Quantaloid:
        if not isinstance(ref, str):
            raise InputError(f"base reference must be a string, got {ref!r}")
        flip, plain = _split_op(ref)
        path = (here / plain)
        if path.suffix == ".json" or path.exists():
            key = path.resolve()
            if key not in self._bases:
                self._bases[key] = quantaloid_from_json(_read_json(path))
            q = self._bases[key]
        else:
            key = plain
            if key not in self._bases:
                self._bases[key] = named_base(plain)
            q = self._bases[key]
        return q.dual if flip else q

    def category(self, ref, here: Path) -> VCategory:
        flip, plain = _split_op(str(ref))
        path = (here / plain).resolve()
        if path not in self._cats:
            data = _read_json(path)
            self._cats[path] = category_from_json(data, self.base(data.get("base", "2"), path.parent))
        c = self._cats[path]
        return c.dual if flip else c


def _kind(data: Any) -> str:
    if not isinstance(data, dict):
        raise InputError("expected a JSON object")
    if "homs" in data and "compose" in data:
        return "quantaloid"
    if "mat" in data:
        return "distributor"
    if "map" in data:
        return "functor"
    if "arrows" in data or "coverage" in data:
        return "site"
    if "hom" in data and "objects" in data:
        return "category"
    raise InputError("cannot tell what kind of document this is")


# -- reporting -------------------------------------------------------------------

def _exit_for(verdict: str) -> int:
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_CAP}[verdict]


def _print_report(report: CheckReport, as_json: bool, extra: dict | None = None) -> None:
    if as_json:
        doc = dict(extra or {})
        doc["report"] = report.to_json()
        doc["summary"] = [f"{p.name}: {p.verdict}" for p in report.parts] + [f"{report.name}: {report.verdict}"]
        print(json.dumps(doc, indent=2))
        return
    for key, val in (extra or {}).items():
        if isinstance(val, list):
            print(f"{key}:")
            for row in val:
                print(f"  {row}")
        else:
            print(f"{key}: {val}")
    width = max([len(p.name) for p in report.parts] + [len(report.name)])
    for p in report.parts:
        line = f"  {p.name.ljust(width)}  {p.verdict}"
        if p.witnesses:
            line += f"  e.g. {p.witnesses[0]}"
        print(line)
    print(f"{report.name.ljust(width + 2)}  {report.verdict}")


def _write(out: Path | None, name: str, doc: Any) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(json.dumps(doc, indent=2) + "\n")


# -- weight classes ----------------------------------------------------------------

def _weights(spec: str, carrier: VCategory, loader: Loader, here: Path):
    if spec in FAMILIES:
        return spec
    path = Path(spec)
    data = _read_json(path)
    if "family" in data:
        if data["family"] not in FAMILIES:
            raise InputError(f"unknown family {data['family']!r}")
        return data["family"]
    chains = []
    for entry in data.get("weights", []):
        refs = entry if isinstance(entry, list) else [entry]
        chain = []
        for ref in refs:
            dpath = (path.parent / ref).resolve()
            doc = _read_json(dpath)
            src = _category_or_carrier(doc["src"], dpath.parent, carrier, here, loader)
            dst = _category_or_carrier(doc["dst"], dpath.parent, carrier, here, loader)
            chain.append(distributor_from_json(doc, src, dst))
        chains.append(Weight(chain))
    return WeightClass.of(chains, carrier)


def _category_or_carrier(ref, where: Path, carrier: VCategory, here: Path, loader: Loader) -> VCategory:
    if ref == "self":
        return carrier
    return loader.category(ref, where)


def _describe_presheaf(carrier: VCategory, col) -> str:
    return "(" + ", ".join(f"{x}:{v}" for x, v in zip(carrier.objects, col)) + ")"


# -- subcommands -------------------------------------------------------------------

def cmd_validate(args, loader: Loader) -> int:
    path = Path(args.file)
    data = _read_json(path)
    kind = _kind(data)
    if kind == "quantaloid":
        rep = validate_quantaloid(quantaloid_from_json(data))
        report = CheckReport.from_witnesses("quantaloid axioms", rep.violations)
    elif kind == "category":
        c = loader.category(path.name, path.parent)
        report = CheckReport.from_witnesses("category axioms", c.validate())
    elif kind == "distributor":
        p = distributor_from_json(data, loader.category(data["src"], path.parent),
                                  loader.category(data["dst"], path.parent))
        report = CheckReport.from_witnesses("distributor actions", p.validate())
    elif kind == "functor":
        f = VFunctor(loader.category(data["dom"], path.parent), loader.category(data["cod"], path.parent),
                     data["map"])
        report = CheckReport.from_witnesses("functor inequalities", f.validate())
    else:
        try:
            site_from_json(data, generate=False)
            report = CheckReport("topology axioms", PASS)
        except InputError as exc:
            if "not a Grothendieck topology" not in str(exc):
                raise
            report = CheckReport("topology axioms", FAIL, [str(exc)])
    _print_report(report, args.json, {"kind": kind})
    return _exit_for(report.verdict)


def cmd_presheaves(args, loader: Loader) -> int:
    path = Path(args.category)
    a = loader.category(path.name, path.parent)
    ps = enumerate_presheaves(a, extent=args.extent, cap=args.cap)
    rows = [{"extent": p.extent, "values": dict(p.items())} for p in ps]
    if args.json:
        print(json.dumps({"count": len(ps), "presheaves": rows}, indent=2))
    else:
        print(f"{len(ps)} presheaves")
        for p in ps:
            print(f"  [{p.extent}] {_describe_presheaf(a, p.col)}")
    return EXIT_PASS


def _save_presheaf_object(out: Path, res, embedding: VFunctor, cat_path: Path) -> None:
    """Write the presheaf category, the embedding and the projection with absolute references."""
    cat_ref = str(cat_path.resolve())
    base_ref = _read_json(cat_path).get("base", "2")
    flip, plain = _split_op(base_ref)
    if (cat_path.parent / plain).exists():
        base_ref = (OP if flip else "") + str((cat_path.parent / plain).resolve())
    _write(out, "category.json", category_to_json(res.psh, base_ref))
    _write(out, "embedding.json", functor_to_json(embedding, cat_ref, "category.json"))
    _write(out, "projection.json", distributor_to_json(res.pi, "category.json", cat_ref))


def cmd_complete(args, loader: Loader) -> int:
    path = Path(args.category)
    a = loader.category(path.name, path.parent)
    phi = _weights(args.weights, a, loader, Path.cwd())
    out = Path(args.out) if args.out else None
    if args.limits:
        res = completion(a, phi, cap=args.cap)
        co = res.source
        report = verify_cocompletion(co.embedding, phi if isinstance(phi, str) else phi.dual,
                                     cap=args.cap, closure=co.closure)
        report.name = "verify_completion (opposite cocompletion)"
        objects = [f"{n} {_describe_presheaf(a, m.row)}" for n, m in res.members.items()]
        cat = res.category
    else:
        co = cocompletion(a, phi, cap=args.cap)
        report = verify_cocompletion(co.embedding, phi, cap=args.cap, closure=co.closure)
        report.name = "verify_cocompletion"
        objects = [f"{n} {_describe_presheaf(a, m.col)}" for n, m in co.presheaf_object.members.items()]
        cat = co.category
        if out is not None:
            _save_presheaf_object(out, co.presheaf_object, co.embedding, path)
    extra = {"weights": args.weights, "object count": len(cat), "objects": objects}
    if out is not None:
        _write(out, "report.json", {**extra, "report": report.to_json()})
    _print_report(report, args.json, extra)
    return _exit_for(report.verdict)


def cmd_cauchy(args, loader: Loader) -> int:
    path = Path(args.category)
    a = loader.category(path.name, path.parent)
    res = cauchy_completion(a)
    reps = {p.key for p in representables(a)}
    extra = {"object count": len(res.psh),
             "objects": [f"{n} {_describe_presheaf(a, m.col)}" for n, m in res.members.items()],
             "only representables": all(m.key in reps for m in res.members.values())}
    report = verify_presheaf_object(res)
    report.name = "verify_presheaf_object"
    _print_report(report, args.json, extra)
    return _exit_for(report.verdict)


CHECKS = ("dense", "fully-faithful", "monic", "well-behaved", "presheaf-object", "cocompletion", "exact")


def _functor_arg(args, a: VCategory, loader: Loader):
    if args.functor in (None, "yoneda"):
        phi = _weights(args.weights, a, loader, Path.cwd())
        co = cocompletion(a, phi, cap=args.cap)
        return co.embedding, phi
    fpath = Path(args.functor)
    data = _read_json(fpath)
    dom = loader.category(data["dom"], fpath.parent)
    cod = loader.category(data["cod"], fpath.parent)
    f = VFunctor(dom, cod, data["map"])
    return f, _weights(args.weights, dom, loader, Path.cwd())


def cmd_check(args, loader: Loader) -> int:
    path = Path(args.category)
    a = loader.category(path.name, path.parent)
    prop = args.property
    if prop == "presheaf-object":
        from .completion import presheaf_object

        family = args.weights if args.weights in FAMILIES else ALL
        report = verify_presheaf_object(presheaf_object(a, family), family)
    elif prop == "monic":
        f, _ = _functor_arg(args, a, loader)
        from .enriched import conjoint

        report = is_monic(conjoint(f))
    elif prop == "exact":
        from .enriched import identity_distributor

        report = is_exact(identity_distributor(a), _weights(args.weights, a, loader, Path.cwd()), cap=args.cap)
    else:
        f, phi = _functor_arg(args, a, loader)
        if prop == "dense":
            report = is_dense_functor(f)
        elif prop == "fully-faithful":
            report = is_fully_faithful(f)
        elif prop == "well-behaved":
            report = is_well_behaved(f, cap=args.cap)
        else:
            report = verify_cocompletion(f, phi, cap=args.cap)
    report = report if report.parts else CheckReport.combine(prop, [report])
    _print_report(report, args.json, {"property": prop})
    return _exit_for(report.verdict)


def cmd_lemmas(args, loader: Loader) -> int:
    report = lemma_suite(which=args.only, seed=args.seed, cases=args.cases)
    if args.json:
        board = {"seed": args.seed, "cases": args.cases,
                 "lemmas": {p.name.split(" ", 1)[0]: {"property": p.name.split(" ", 1)[1], "verdict": p.verdict,
                                                      "witnesses": p.to_json().get("witnesses", []), "notes": p.notes}
                            for p in report.parts},
                 "verdict": report.verdict}
        print(json.dumps(board, indent=2))
    else:
        _print_report(report, False, {"seed": args.seed, "cases per base": args.cases})
    return _exit_for(report.verdict)


def cmd_sheafify(args, loader: Loader) -> int:
    site = site_from_json(_read_json(Path(args.site)))
    f = set_presheaf_from_json(site.category, _read_json(Path(args.presheaf)))
    sh = sheafify(site, f)
    again = sheafify(site, sh)
    parts = [CheckReport.from_witnesses("matching-family sheaf condition", sheaf_problems(site, sh)),
             CheckReport.from_witnesses("idempotent", [] if set_presheaf_isomorphism(sh, again) is not None
                                        else ["second pass changes the result"])]
    report = CheckReport.combine("sheafify", parts)
    if args.out:
        _write(Path(args.out), "sheaf.json", sh.to_json())
    extra = {"input is a sheaf": is_sheaf(site, f), "sections": {c: len(v) for c, v in sh.sections.items()}}
    if args.json:
        extra["sheaf"] = sh.to_json()
    _print_report(report, args.json, extra)
    return _exit_for(report.verdict)


def _flip_ref(ref):
    if not isinstance(ref, str):
        return ref
    return ref[len(OP):] if ref.startswith(OP) else OP + ref


def _swap_pair(key: str, sep: str) -> str:
    parts = key.split(sep)
    return sep.join(reversed(parts))


def dualize_document(data: dict) -> dict:
    """Opposite of a quantaloid, category, functor or distributor document."""
    kind = _kind(data)
    out = dict(data)
    if kind == "quantaloid":
        out["homs"] = {_swap_pair(k, "->"): v for k, v in data["homs"].items()}
        out["compose"] = {_swap_pair(k, "->"): [[f, g, h] for g, f, h in rows] for k, rows in data["compose"].items()}
        if "name" in data:
            out["name"] = _flip_ref(data["name"])
    elif kind == "category":
        out["base"] = _flip_ref(data.get("base", "2"))
        out["hom"] = {_swap_pair(k, ","): v for k, v in data["hom"].items()}
    elif kind == "functor":
        out["dom"], out["cod"] = _flip_ref(data["dom"]), _flip_ref(data["cod"])
    elif kind == "distributor":
        out["src"], out["dst"] = _flip_ref(data["dst"]), _flip_ref(data["src"])
        out["mat"] = {_swap_pair(k, ","): v for k, v in data["mat"].items()}
    else:
        raise InputError("sites have no opposite here")
    return out


def cmd_dualize(args, loader: Loader) -> int:
    path = Path(args.file)
    data = _read_json(path)
    dual = dualize_document(data)
    if _kind(dual) == "quantaloid":
        quantaloid_from_json(dual)
    text = json.dumps(dual, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quantcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, weights=False, cap=True):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if cap:
            p.add_argument("--cap", type=int, default=10000, help="enumeration cap")
        if weights:
            p.add_argument("--weights", default=ALL, help="all | cauchy | representables | weight-class file")

    p = sub.add_parser("validate", help="check a quantaloid, category, functor, distributor or site file")
    p.add_argument("file")
    common(p, cap=False)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("presheaves", help="enumerate presheaves on a category")
    p.add_argument("category")
    p.add_argument("--extent", default=None)
    common(p)
    p.set_defaults(run=cmd_presheaves)

    p = sub.add_parser("complete", help="free cocompletion (or completion with --limits) and its verification")
    p.add_argument("category")
    p.add_argument("--limits", action="store_true", help="complete under limits instead of colimits")
    p.add_argument("--out", default=None, help="directory for category, embedding and report files")
    common(p, weights=True)
    p.set_defaults(run=cmd_complete)

    p = sub.add_parser("cauchy", help="Cauchy completion")
    p.add_argument("category")
    common(p)
    p.set_defaults(run=cmd_cauchy)

    p = sub.add_parser("check", help="structural checks on the embedding or a given functor")
    p.add_argument("property", choices=CHECKS)
    p.add_argument("category")
    p.add_argument("--functor", default=None, help="functor file, or 'yoneda' for the cocompletion embedding")
    common(p, weights=True)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("lemmas", help="replay the lemma suite on random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=DEFAULT_CASES)
    p.add_argument("--only", default=None, help="comma-separated lemma ids, e.g. L1,L5")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_lemmas)

    p = sub.add_parser("sheafify", help="sheafify a presheaf of sets on a finite site")
    p.add_argument("site")
    p.add_argument("presheaf")
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_sheafify)

    p = sub.add_parser("dualize", help="write the opposite of a document")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(run=cmd_dualize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        return args.run(args, Loader())
    except ResourceCapError as exc:
        print(f"resource cap reached: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
