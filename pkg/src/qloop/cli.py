"""Scenario runner.

    qloop run --scenario t-system.json --out reports/
    qloop describe '{"type": "Vn", "n": 2}'
    qloop scenarios

Exit codes: 0 all checks verified, 1 some check refuted or inconclusive,
2 invalid input, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import tempfile
import traceback
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import boson, commcheck, qrep, relations, tensoralg
from .braidcat import BraidingContext
from .relations import PASSING, REFUTED, VERIFIED, RelationReport
from .scalar import ScalarContext, ScalarError

EXIT_OK, EXIT_REFUTED, EXIT_SCHEMA, EXIT_INTERNAL = 0, 1, 2, 3

_scalar = {"type": ["string", "integer"]}
_int_or_list = {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}, "minItems": 1}]}

REP_SCHEMA: dict = {
    "type": "object",
    "oneOf": [
        {"properties": {"type": {"const": "Vn"}, "n": {"type": "integer", "minimum": 0}}, "required": ["type", "n"], "additionalProperties": False},
        {
            "properties": {
                "type": {"const": "evaluation"},
                "n": {"type": "integer", "minimum": 0},
                "z": _scalar,
                "form": {"enum": ["k", "hbar"]},
            },
            "required": ["type", "n", "z"],
            "additionalProperties": False,
        },
        {
            "properties": {"type": {"const": "cyclic"}, "a": _scalar, "b": _scalar, "lambda": _scalar, "w": _scalar},
            "required": ["type", "a", "b", "lambda"],
            "additionalProperties": False,
        },
        {"properties": {"type": {"const": "Xm"}, "m": {"type": "integer"}}, "required": ["type", "m"], "additionalProperties": False},
        {
            "properties": {"type": {"const": "oscillator"}, "m": {"type": "integer"}, "z": _scalar, "N": {"type": "integer", "minimum": 1}},
            "required": ["type", "m", "z", "N"],
            "additionalProperties": False,
        },
        {
            "properties": {"type": {"const": "tensor"}, "factors": {"type": "array", "items": {"$ref": "#/$defs/rep"}, "minItems": 1}},
            "required": ["type", "factors"],
            "additionalProperties": False,
        },
    ],
}


def _check(kind: str, props: dict, required=()) -> dict:
    return {
        "properties": {"kind": {"const": kind}, **props},
        "required": ["kind", *required],
        "additionalProperties": False,
    }


CHECK_SCHEMA = {
    "type": "object",
    "oneOf": [
        _check("relations", {"rep": {"$ref": "#/$defs/rep"}}, ["rep"]),
        _check("t-system", {"n": _int_or_list, "z": _scalar, "form": {"enum": ["k", "hbar"]}}, ["n"]),
        _check("t-q", {"m": _int_or_list, "z": _scalar, "w": _scalar, "N": {"type": "integer"}, "labels": {"enum": ["inverted", "literal"]}}, ["m", "N"]),
        _check(
            "cyclic-tq",
            {"a": _scalar, "b": _scalar, "lambda": _scalar, "w": _scalar, "w_prime": _scalar, "resonant": {"type": "boolean"}},
            ["a", "lambda", "w", "w_prime"],
        ),
        _check("grothendieck", {"samples": {"type": "integer", "minimum": 1}}),
        _check("commutation", {"rep": {"$ref": "#/$defs/rep"}, "setting": {"enum": ["uncompactified", "compactified"]}}, ["rep"]),
        _check("pairing-axioms", {"degree": {"type": "integer", "minimum": 1, "maximum": 4}}, ["degree"]),
        _check("radical", {"degree": {"type": "integer", "minimum": 1, "maximum": 5}}, ["degree"]),
        _check(
            "cocycle",
            {
                "generators": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                },
                "expect_trivial": {"type": "boolean"},
                "samples": {"type": "integer", "minimum": 0},
            },
            ["generators"],
        ),
        _check("charge-lattice", {"r": _scalar, "bound": {"type": "integer", "minimum": 0}}, ["r"]),
    ],
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "seed": {"type": "integer"},
        "context": {
            "type": "object",
            "properties": {"mode": {"type": "string", "pattern": "^(generic|root:[0-9]+)$"}, "D": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        "params": {
            "type": "object",
            "properties": {"zeta": _scalar, "xi": _scalar, "t": {"type": "integer"}, "r": _scalar},
            "additionalProperties": False,
        },
        "checks": {"type": "array", "items": CHECK_SCHEMA, "minItems": 1},
    },
    "required": ["name", "checks"],
    "additionalProperties": False,
}


class ScenarioError(ValueError):
    pass


INPUT_ERRORS = (ScenarioError, qrep.RepError, commcheck.CommError, boson.BosonError, ScalarError)


def _validator(schema: dict) -> jsonschema.Draft202012Validator:
    return jsonschema.Draft202012Validator({**schema, "$defs": {"rep": REP_SCHEMA}})


def validate_scenario(payload) -> None:
    e = jsonschema.exceptions.best_match(_validator(SCENARIO_SCHEMA).iter_errors(payload))
    if e is not None:
        if e.validator == "oneOf" and isinstance(e.instance, dict) and "kind" in e.instance:
            kinds = [sub["properties"]["kind"]["const"] for sub in CHECK_SCHEMA["oneOf"]]
            if e.instance["kind"] not in kinds:
                raise ScenarioError(f"unknown check kind {e.instance['kind']!r}; expected one of {', '.join(kinds)}")
            for sub in CHECK_SCHEMA["oneOf"]:
                if sub["properties"]["kind"]["const"] == e.instance["kind"]:
                    inner = jsonschema.exceptions.best_match(_validator(sub).iter_errors(e.instance))
                    if inner is not None:
                        where = "/".join(str(p) for p in [*e.path, *inner.path]) or "<root>"
                        raise ScenarioError(f"{where}: {inner.message}")
        where = "/".join(str(p) for p in e.path) or "<root>"
        raise ScenarioError(f"{where}: {e.message}")


def validate_rep(payload) -> None:
    errors = list(_validator({"$ref": "#/$defs/rep"}).iter_errors(payload))
    if errors:
        raise ScenarioError(errors[0].message)


# ---------------------------------------------------------------------------
# building objects


def build_rep(spec: dict, ctx: ScalarContext) -> qrep.QGroupRep:
    kind = spec["type"]
    if kind == "Vn":
        return qrep.make_Vn(spec["n"], ctx)
    if kind == "evaluation":
        return qrep.evaluation_pullback(qrep.make_Vn(spec["n"], ctx), ctx(spec["z"]), spec.get("form", "k"))
    if kind == "cyclic":
        V = qrep.make_cyclic(ctx(spec["a"]), ctx(spec["b"]), ctx(spec["lambda"]), ctx)
        return qrep.evaluation_pullback(V, ctx(spec["w"])) if "w" in spec else V
    if kind == "Xm":
        return qrep.make_Xm(spec["m"], ctx)
    if kind == "oscillator":
        return qrep.make_q_oscillator(spec["m"], ctx(spec["z"]), spec["N"], ctx)
    if kind == "tensor":
        out = build_rep(spec["factors"][0], ctx)
        for f in spec["factors"][1:]:
            out = qrep.tensor(out, build_rep(f, ctx))
        return out
    raise ScenarioError(f"unknown representation type {kind!r}")


def _as_list(x) -> list:
    return x if isinstance(x, list) else [x]


def _scalar_or_sample(ctx, value, rng: random.Random):
    return ctx(value) if value is not None else ctx(relations.sample_rational(rng))


def _cx(text: str) -> boson.CxRational:
    """``"1/2"`` is the angle 1/2 (so -1); ``"3/4@2"`` adds modulus 2."""
    if "@" in text:
        a, m = text.split("@", 1)
        return boson.CxRational(Fraction(a), Fraction(m))
    return boson.CxRational(Fraction(text))


def run_check(check: dict, ctx: ScalarContext, params: dict, seed: int) -> list[RelationReport]:
    rng = random.Random(seed)
    kind = check["kind"]
    if kind == "relations":
        V = build_rep(check["rep"], ctx)
        res = qrep.check_relations(V)
        rep = RelationReport("relations", {"rep": check["rep"], "mode": ctx.mode_string})
        rep.certificates.append({"label": "defining relations", "kind": "relations", "verified": res.passed, "data": res.to_dict()})
        rep.verdict = VERIFIED if res.passed else REFUTED
        return [rep]
    if kind == "t-system":
        z = _scalar_or_sample(ctx, check.get("z"), rng)
        return [relations.t_system(n, z, ctx, seed=seed, form=check.get("form", "hbar")) for n in _as_list(check["n"])]
    if kind == "t-q":
        z = _scalar_or_sample(ctx, check.get("z"), rng)
        w = ctx(check["w"]) if "w" in check else None
        return [
            relations.t_q_relation(m, z, check["N"], ctx, w=w, seed=seed, labels=check.get("labels", "inverted"))
            for m in _as_list(check["m"])
        ]
    if kind == "cyclic-tq":
        a, lam, w, wp = (ctx(check[k]) for k in ("a", "lambda", "w", "w_prime"))
        if check.get("resonant"):
            b = relations.resonant_b(a, lam, w, wp, ctx)
        elif "b" in check:
            b = ctx(check["b"])
        else:
            raise ScenarioError("cyclic-tq needs b unless resonant is true")
        return [relations.cyclic_tq(a, b, lam, w, wp, ctx, seed=seed)]
    if kind == "grothendieck":
        return [relations.grothendieck_reduction_suite(check.get("samples", 20), seed=seed, ctx=ctx)]
    if kind == "commutation":
        V = build_rep(check["rep"], ctx)
        zeta = ctx(params.get("zeta", 1))
        xi = ctx(params.get("xi", 1))
        setting = check.get("setting", "uncompactified")
        if setting == "uncompactified":
            M = commcheck.pullback_uncompactified(V, zeta, xi)
        else:
            M = commcheck.pullback_compactified(V, zeta, xi, params.get("t", -2))
        res = commcheck.check_commutation(M)
        yd = commcheck.check_yd_generators(M)
        rep = RelationReport("commutation", {"rep": check["rep"], "setting": setting, "zeta": str(zeta), "xi": str(xi), "mode": ctx.mode_string})
        rep.certificates.append({"label": "commutation condition", "kind": "identities", "verified": res.passed, "data": res.to_dict()})
        rep.certificates.append({"label": "generator Yetter-Drinfeld identities", "kind": "identities", "verified": yd["passed"], "data": yd})
        rep.verdict = VERIFIED if res.passed and yd["agrees_with_commutation"] else REFUTED
        return [rep]
    if kind == "pairing-axioms":
        bctx = BraidingContext(ctx)
        res = tensoralg.check_pairing_axioms(check["degree"], ctx(params.get("zeta", 1)), ctx(params.get("xi", 1)), bctx)
        res = {**res, "per_degree": {str(k): v for k, v in res["per_degree"].items()}}
        rep = RelationReport("pairing-axioms", {"degree": check["degree"], "mode": ctx.mode_string})
        rep.certificates.append({"label": "Hopf pairing axioms", "kind": "identities", "verified": res["passed"], "data": res})
        rep.verdict = VERIFIED if res["passed"] else REFUTED
        return [rep]
    if kind == "radical":
        bctx = BraidingContext(ctx)
        n = check["degree"]
        gram = tensoralg.hopf_pairing(n, ctx(params.get("zeta", 1)), ctx(params.get("xi", 1)), bctx)
        data = {"radical_dimension": tensoralg.radical_dimension(gram)}
        ok = True
        if n == 4:
            serre = [tensoralg.in_left_radical(v, gram) for v in tensoralg.serre_vectors(ctx)]
            data["serre_in_radical"] = serre
            ok = all(serre)
        rep = RelationReport("radical", {"degree": n, "mode": ctx.mode_string})
        rep.certificates.append({"label": f"radical in degree {n}", "kind": "radical", "verified": ok, "data": data})
        rep.verdict = VERIFIED if ok else REFUTED
        return [rep]
    if kind == "cocycle":
        r = Fraction(params.get("r", 1))
        gens = [(_cx(e), _cx(x)) for e, x in check["generators"]]
        res = boson.coboundary_test(gens, r=r)
        rep = RelationReport("cocycle", {"generators": check["generators"], "r": str(r)})
        expect = check.get("expect_trivial")
        rep.certificates.append(
            {"label": "coboundary test", "kind": "cohomology", "verified": expect is None or expect == res.trivial, "data": res.to_dict()}
        )
        H = res.group
        bad = 0
        samples = check.get("samples", 200)
        for _ in range(samples):
            g = [H[rng.randrange(len(H))] for _ in range(4)]
            if not boson.d_psi(*g, r=r).is_one():
                bad += 1
        rep.certificates.append({"label": "dψ = 1", "kind": "identities", "verified": bad == 0, "data": {"samples": samples, "failures": bad}})
        rep.verdict = VERIFIED if all(c["verified"] for c in rep.certificates) else REFUTED
        return [rep]
    if kind == "charge-lattice":
        r = Fraction(check["r"])
        bound = check.get("bound", 3)
        grid = [Fraction(k, 2) for k in range(-2 * bound, 2 * bound + 1)]
        table = [[str(p), str(q), boson.charge_lattice(p, q, r)] for p in grid for q in grid]
        ok = all(boson.charge_lattice(p, q, r) == boson.charge_lattice_direct(p, q, r) for p in grid for q in grid)
        rep = RelationReport("charge-lattice", {"r": str(r), "bound": bound})
        rep.certificates.append({"label": "fusion against lattice conditions", "kind": "table", "verified": ok, "data": {"sectors": [t for t in table if t[2]]}})
        rep.verdict = VERIFIED if ok else REFUTED
        return [rep]
    raise ScenarioError(f"unknown check kind {kind!r}")


# ---------------------------------------------------------------------------
# running scenarios


def bundled_scenarios() -> list[str]:
    root = resources.files("qloop") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def read_scenario(path: str) -> tuple[bytes, str]:
    p = Path(path)
    if p.exists():
        return p.read_bytes(), str(p)
    name = path if path.endswith(".json") else path + ".json"
    res = resources.files("qloop") / "scenarios" / name
    if res.is_file():
        return res.read_bytes(), f"bundled:{name}"
    raise ScenarioError(f"scenario {path!r} not found")


def execute(payload: dict, raw: bytes, seed: int | None = None, mode: str | None = None, jobs: int = 1) -> dict:
    validate_scenario(payload)
    seed = payload.get("seed", 0) if seed is None else seed
    context = payload.get("context", {})
    mode = mode or context.get("mode", "generic")
    ctx = qrep.context_from_mode(mode, context.get("D", 1))
    params = payload.get("params", {})
    checks = payload["checks"]

    def one(i: int) -> list[dict]:
        return [r.to_dict() for r in run_check(checks[i], ctx, params, seed + i)]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, range(len(checks))))
    else:
        results = [one(i) for i in range(len(checks))]
    reports = [r for group in results for r in group]
    passed = sum(r["verdict"] in PASSING for r in reports)
    return {
        "scenario": payload["name"],
        "scenario_sha256": hashlib.sha256(raw).hexdigest(),
        "seed": seed,
        "mode": mode,
        "reports": reports,
        "summary": {"total": len(reports), "passed": passed, "all_passed": passed == len(reports)},
    }


def summary_csv(result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "name", "verdict", "certificates", "scenario_sha256", "seed"])
    for i, r in enumerate(result["reports"]):
        w.writerow([i, r["name"], r["verdict"], len(r["certificates"]), result["scenario_sha256"], result["seed"]])
    return buf.getvalue()


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_outputs(result: dict, out: Path) -> tuple[Path, Path]:
    out.mkdir(parents=True, exist_ok=True)
    stem = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in result["scenario"])
    jpath, cpath = out / f"{stem}.report.json", out / f"{stem}.summary.csv"
    _atomic_write(jpath, json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    _atomic_write(cpath, summary_csv(result))
    return jpath, cpath


def cmd_run(args) -> int:
    path = args.scenario or args.path
    if not path:
        print("error: no scenario given", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        raw, origin = read_scenario(path)
        payload = json.loads(raw)
        validate_scenario(payload)
    except (ScenarioError, json.JSONDecodeError, UnicodeDecodeError) as e:
        print(f"error: invalid scenario: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        result = execute(payload, raw, seed=args.seed, mode=args.mode, jobs=args.jobs)
    except INPUT_ERRORS as e:
        print(f"error: invalid scenario: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_INTERNAL
    out = Path(os.environ.get("QLOOP_OUT") or args.out)
    jpath, cpath = write_outputs(result, out)
    for r in result["reports"]:
        print(f"{r['verdict']:>18}  {r['name']}")
    s = result["summary"]
    print(f"{s['passed']}/{s['total']} passed; report {jpath}, summary {cpath}")
    return EXIT_OK if s["all_passed"] else EXIT_REFUTED


def cmd_describe(args) -> int:
    text = args.spec
    try:
        if Path(text).exists():
            text = Path(text).read_text()
        spec = json.loads(text)
        validate_rep(spec)
        ctx = qrep.context_from_mode(args.mode or "generic")
        V = build_rep(spec, ctx)
    except (*INPUT_ERRORS, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    print(V.describe())
    if args.check:
        res = qrep.check_relations(V)
        print(f"relations: {'pass' if res.passed else 'FAIL'} ({len(res.checked)} checked, {len(res.skipped)} skipped)")
        return EXIT_OK if res.passed else EXIT_REFUTED
    return EXIT_OK


def cmd_scenarios(args) -> int:
    for name in bundled_scenarios():
        payload = json.loads((resources.files("qloop") / "scenarios" / name).read_bytes())
        print(f"{name:28} {payload.get('description', '')}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qloop", description="Exact checks for loop-group module relations.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("path", nargs="?", help="scenario file or bundled scenario name")
    r.add_argument("--scenario", help="scenario file or bundled scenario name")
    r.add_argument("--out", default="qloop-out", help="output directory (QLOOP_OUT overrides)")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--mode", default=None, help="generic or root:N; overrides the scenario")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_run)
    d = sub.add_parser("describe", help="print a representation")
    d.add_argument("spec", help="JSON object or file describing the representation")
    d.add_argument("--mode", default=None)
    d.add_argument("--check", action="store_true", help="also run the relation check")
    d.set_defaults(func=cmd_describe)
    s = sub.add_parser("scenarios", help="list bundled scenarios")
    s.set_defaults(func=cmd_scenarios)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
