"""Scenario-driven command line: run conjugacy analyses and emit
machine-readable certificate reports, or independently re-verify a report.

Reports are deterministic for a fixed (scenario, seed, bound): scalars are
serialized losslessly ("p/q", "p/q+r/s i", residues), keys are sorted, and
a SHA-256 digest of the canonical payload is embedded so that any
single-field tampering is detected.  ``verify`` additionally re-multiplies
every certificate from scratch, so a forged digest alone is never enough.

Exit codes: 0 = verdicts produced and verified; 1 = verification failure or
theorem violation (a bug, never expected); 2 = usage or parse error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from typing import Optional

from .affine import classify_affine_rational, rationality_certificates_linear
from .errors import ConjcertError, UsageError
from .fields import Field, GF, QQ, QQI
from .groups import (
    Certificate,
    Inverse,
    Power,
    generate_closure,
    is_rational_bruteforce,
    is_real_bruteforce,
)
from .heisenberg import (
    ComplexHeisenbergElement,
    GSpElement,
    HeisenbergElement,
    UnitScalar,
    complex_heisenberg_group,
    complex_heisenberg_reality,
    heisenberg_presentation,
    standard_gsp_example,
)
from .linalg import Matrix, Vector
from .semidirect import AffineElement, real_witness_via_lift
from .sl2 import SL2Element, SL2VElement, classify_rational_sl2v, classify_real

SCHEMA_VERSION = 1
SEED_ENV_VAR = "CONJCERT_SEED"
DEFAULT_BOUND = 10_000
CLOSURE_CAP = 50_000

KINDS = ("finite", "sl2v", "affine", "heisenberg", "solvable")


# ---------------------------------------------------------------------------
# scalar / matrix / element codecs
# ---------------------------------------------------------------------------

def _field_from_descriptor(desc) -> Field:
    if desc == "Q":
        return QQ
    if desc == "Qi":
        return QQI
    if isinstance(desc, dict) and desc.get("type") == "Fp":
        return GF(int(desc["p"]))
    raise UsageError(f"unknown field descriptor {desc!r}")


def _scalar_in(field: Field, token) -> object:
    if isinstance(token, bool) or not isinstance(token, (str, int)):
        raise UsageError(f"scalars must be exact strings or integers, got {token!r}")
    return field.coerce(token if isinstance(token, int) else field.parse(token))


def _scalar_out(field: Field, value) -> str:
    return field.format(value)


def _matrix_in(field: Field, rows) -> Matrix:
    return Matrix.from_rows(field, [[_scalar_in(field, v) for v in row] for row in rows])


def _matrix_out(m: Matrix) -> list:
    return [[_scalar_out(m.field, m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def _vector_in(field: Field, values) -> Vector:
    return Vector(field, tuple(_scalar_in(field, v) for v in values))


def _vector_out(v: Vector) -> list:
    return [_scalar_out(v.field, x) for x in v.entries]


def _relation_out(relation) -> object:
    if isinstance(relation, Inverse):
        return "inverse"
    return {"power": relation.k}


MAX_RELATION_POWER = 10 ** 6


def _relation_in(payload):
    if payload == "inverse":
        return Inverse()
    if isinstance(payload, dict) and "power" in payload:
        k = int(payload["power"])
        if abs(k) > MAX_RELATION_POWER:
            raise UsageError(f"relation power {k} exceeds the sanity cap")
        return Power(k)
    raise UsageError(f"unknown relation {payload!r}")


class GroupCodec:
    """Encode/decode group elements of one scenario's ambient group."""

    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = params
        if kind == "finite":
            self.field = GF(int(params["p"]))
        elif kind == "affine":
            self.field = _field_from_descriptor(params.get("field", "Q"))
        elif kind in ("sl2v", "heisenberg"):
            self.field = QQ
        elif kind == "solvable":
            self.field = QQI
        else:
            raise UsageError(f"unknown scenario kind {kind!r}")

    def encode(self, element) -> dict:
        if self.kind in ("finite", "affine"):
            return {"linear": _matrix_out(element.linear),
                    "translation": _vector_out(element.translation)}
        if self.kind == "sl2v":
            h = element.h
            return {"h": [_scalar_out(QQ, v) for v in (h.a, h.b, h.c, h.d)],
                    "v": _vector_out(element.v)}
        if self.kind == "heisenberg":
            return {"h": _matrix_out(element.h.g),
                    "n": {"v": _vector_out(element.n.v),
                          "t": _scalar_out(QQ, element.n.t)}}
        if self.kind == "solvable":
            return {"h": _scalar_out(QQI, element.h.value),
                    "n": {"a": _scalar_out(QQI, element.n.a),
                          "b": _scalar_out(QQI, element.n.b),
                          "c": _scalar_out(QQI, element.n.c)}}
        raise UsageError(f"unknown scenario kind {self.kind!r}")

    def decode(self, payload: dict):
        if self.kind in ("finite", "affine"):
            return AffineElement.of(_matrix_in(self.field, payload["linear"]),
                                    _vector_in(self.field, payload["translation"]))
        if self.kind == "sl2v":
            a, b, c, d = (_scalar_in(QQ, v) for v in payload["h"])
            return SL2VElement(SL2Element.of(a, b, c, d),
                               _vector_in(QQ, payload["v"]))
        if self.kind == "heisenberg":
            g = GSpElement.of(_matrix_in(QQ, payload["h"]))
            n = HeisenbergElement.of(QQ, _vector_in(QQ, payload["n"]["v"]),
                                     _scalar_in(QQ, payload["n"]["t"]))
            group = heisenberg_presentation().semidirect(g.identity())
            return group.element(g, n)
        if self.kind == "solvable":
            lam = UnitScalar.of(_scalar_in(QQI, payload["h"]))
            n = ComplexHeisenbergElement.of(_scalar_in(QQI, payload["n"]["a"]),
                                            _scalar_in(QQI, payload["n"]["b"]),
                                            _scalar_in(QQI, payload["n"]["c"]))
            return complex_heisenberg_group().element(lam, n)
        raise UsageError(f"unknown scenario kind {self.kind!r}")

    def certificate_payload(self, cert: Certificate) -> dict:
        return {"relation": _relation_out(cert.relation),
                "witness": self.encode(cert.witness),
                "verified": bool(cert.verified)}


# ---------------------------------------------------------------------------
# scenario runners
# ---------------------------------------------------------------------------

def _run_finite(codec: GroupCodec, params: dict, elements, bound: int) -> list:
    field = codec.field
    n = None
    gens = []
    for rows in params["linear_generators"]:
        m = _matrix_in(field, rows)
        n = m.rows
        gens.append(AffineElement.of(m, Vector.zero(field, n)))
    if n is None:
        raise UsageError("finite scenario needs at least one linear generator")
    ident = Matrix.identity_of(field, n)
    for i in range(n):
        gens.append(AffineElement.of(ident, Vector.unit(field, n, i)))
    G = generate_closure(gens, cap=min(CLOSURE_CAP, bound * 10))

    if elements == "all":
        subjects = list(G)
    else:
        subjects = [codec.decode(p) for p in elements]
        for s in subjects:
            if s not in G:
                raise UsageError(f"element {s!r} is not in the generated group")

    results = []
    for s in subjects:
        real_cert = is_real_bruteforce(G, s)
        rational_certs = is_rational_bruteforce(G, s)
        certs = []
        if real_cert is not None:
            certs.append(codec.certificate_payload(real_cert))
        if rational_certs is not None:
            certs.extend(codec.certificate_payload(rational_certs[k])
                         for k in sorted(rational_certs))
        results.append({
            "element": codec.encode(s),
            "verdicts": {
                "real": "real" if real_cert is not None else "not_real",
                "rational": "rational" if rational_certs is not None else "not_rational",
            },
            "certificates": certs,
        })
    return results


def _run_sl2v(codec: GroupCodec, params: dict, elements, bound: int) -> list:
    t = _scalar_in(QQ, params.get("t", "1"))
    results = []
    for payload in elements:
        if len(payload["x"]) != 4:
            raise UsageError("sl2v element x must have exactly 4 entries")
        a, b, c, d = (_scalar_in(QQ, v) for v in payload["x"])
        x = SL2Element.of(a, b, c, d)
        v = _vector_in(QQ, payload["v"])
        if "n" in params and v.dim != int(params["n"]) + 1:
            raise UsageError(f"v has dimension {v.dim}, expected n + 1 = "
                             f"{int(params['n']) + 1}")
        reality = classify_real(x, v, t=t)
        rationality = classify_rational_sl2v(x, v, bound=bound, t=t)
        certs = []
        if reality.certificate is not None:
            certs.append(codec.certificate_payload(reality.certificate))
        for k in sorted(rationality.certificates):
            if isinstance(rationality.certificates[k].relation, Power):
                certs.append(codec.certificate_payload(rationality.certificates[k]))
        result = {
            "element": codec.encode(SL2VElement(x, v)),
            "verdicts": {"real": reality.verdict, "rational": rationality.verdict},
            "certificates": certs,
        }
        notes = [m for m in (reality.reason, rationality.reason) if m]
        if notes:
            result["notes"] = notes
        results.append(result)
    return results


def _run_affine(codec: GroupCodec, params: dict, elements, bound: int, seed: int) -> list:
    field = codec.field
    x = _matrix_in(field, params["x"])
    m = int(params["order"])
    linear = rationality_certificates_linear(x, m, seed=seed)
    results = []
    for payload in elements:
        v = _vector_in(field, payload["v"])
        subject = AffineElement.of(x, v)
        if not linear.complete:
            results.append({
                "element": codec.encode(subject),
                "verdicts": {"rational": "refused"},
                "certificates": [],
                "notes": [f"linear part lacks conjugators: not rational for "
                          f"k in {list(linear.not_rational)}, inconclusive for "
                          f"k in {list(linear.inconclusive)}"],
            })
            continue
        outcome = classify_affine_rational(x, v, m, linear.certificates, seed=seed)
        certs = [codec.certificate_payload(outcome.certificates[k])
                 for k in sorted(outcome.certificates)]
        if outcome.reality is not None:
            certs.append(codec.certificate_payload(outcome.reality))
        result = {
            "element": codec.encode(subject),
            "verdicts": {"rational": outcome.verdict},
            "certificates": certs,
        }
        if outcome.note:
            result["notes"] = [outcome.note]
        results.append(result)
    return results


def _run_heisenberg(codec: GroupCodec, params: dict, elements, bound: int) -> list:
    if "x" in params:
        x = GSpElement.of(_matrix_in(QQ, params["x"]))
        y = GSpElement.of(_matrix_in(QQ, params["witness"]))
    else:
        x, y = standard_gsp_example()
    pres = heisenberg_presentation()
    group = pres.semidirect(x.identity())
    results = []
    for payload in elements:
        n = HeisenbergElement.of(QQ, _vector_in(QQ, payload["v"]),
                                 _scalar_in(QQ, payload["t"]))
        cert = real_witness_via_lift(x, n, pres, y)
        results.append({
            "element": codec.encode(group.element(x, n)),
            "verdicts": {"real": "real"},
            "certificates": [codec.certificate_payload(cert)],
        })
    return results


def _run_solvable(codec: GroupCodec, params: dict, elements, bound: int) -> list:
    group = complex_heisenberg_group()
    results = []
    for payload in elements:
        n = ComplexHeisenbergElement.of(_scalar_in(QQI, payload["a"]),
                                        _scalar_in(QQI, payload["b"]),
                                        _scalar_in(QQI, payload["c"]))
        x_sign = int(payload.get("x", -1))
        verdict = complex_heisenberg_reality(n, x_sign)
        subject = group.element(UnitScalar.of(QQI.coerce(x_sign)), n)
        result = {
            "element": codec.encode(subject),
            "verdicts": {"real": "real" if verdict.real else "not_real"},
            "certificates": [codec.certificate_payload(c) for c in verdict.certificates],
        }
        if verdict.reason:
            result["notes"] = [verdict.reason]
        results.append(result)
    return results


_RUNNERS = {
    "finite": lambda codec, params, elements, bound, seed: _run_finite(codec, params, elements, bound),
    "sl2v": lambda codec, params, elements, bound, seed: _run_sl2v(codec, params, elements, bound),
    "affine": _run_affine,
    "heisenberg": lambda codec, params, elements, bound, seed: _run_heisenberg(codec, params, elements, bound),
    "solvable": lambda codec, params, elements, bound, seed: _run_solvable(codec, params, elements, bound),
}


# ---------------------------------------------------------------------------
# report assembly and verification
# ---------------------------------------------------------------------------

def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _digest(payload: dict) -> str:
    return "sha256:" + hashlib.sha256(_canonical(payload).encode()).hexdigest()


def build_report(scenario: dict, seed: int, bound: int, timing: bool = False) -> dict:
    if scenario.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"unsupported scenario schema_version "
                         f"{scenario.get('schema_version')!r}")
    kind = scenario.get("kind")
    if kind not in KINDS:
        raise UsageError(f"unknown scenario kind {kind!r}")
    params = scenario.get("params", {})
    elements = scenario.get("elements", [])
    codec = GroupCodec(kind, params)
    started = time.monotonic()
    results = _RUNNERS[kind](codec, params, elements, bound, seed)
    elapsed = time.monotonic() - started
    payload = {
        "schema_version": SCHEMA_VERSION,
        "tool": "conjcert",
        "scenario": scenario,
        "seed": seed,
        "bound": bound,
        "results": results,
    }
    if timing:
        payload["timing_seconds"] = round(elapsed, 6)
    return {**payload, "integrity": _digest(payload)}


def verify_report(report: dict) -> list[str]:
    """Re-check a report from scratch.  Returns a list of failure messages
    (empty = accepted): digest mismatch, undecodable entries, or any
    certificate whose relation fails exact re-multiplication."""
    failures = []
    payload = {k: v for k, v in report.items() if k != "integrity"}
    if report.get("integrity") != _digest(payload):
        failures.append("integrity digest mismatch")
    try:
        scenario = report["scenario"]
        codec = GroupCodec(scenario["kind"], scenario.get("params", {}))
    except (KeyError, UsageError, TypeError) as exc:
        failures.append(f"cannot reconstruct scenario group: {exc}")
        return failures
    for i, result in enumerate(report.get("results", [])):
        try:
            subject = codec.decode(result["element"])
        except (ConjcertError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            failures.append(f"result {i}: undecodable element ({exc})")
            continue
        for j, cert in enumerate(result.get("certificates", [])):
            try:
                witness = codec.decode(cert["witness"])
                relation = _relation_in(cert["relation"])
                Certificate.make(subject, witness, relation)
            except (ConjcertError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                failures.append(f"result {i} certificate {j}: {exc}")
    return failures


def _render_text(report: dict) -> str:
    lines = [f"conjcert report (kind={report['scenario']['kind']}, "
             f"seed={report['seed']}, bound={report['bound']})"]
    for i, result in enumerate(report["results"]):
        verdicts = ", ".join(f"{k}={v}" for k, v in sorted(result["verdicts"].items()))
        lines.append(f"  element {i}: {verdicts}; "
                     f"certificates={len(result['certificates'])}")
        for note in result.get("notes", []):
            lines.append(f"    note: {note}")
    lines.append(f"integrity: {report['integrity']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _resolve_seed(cli_seed: Optional[int], scenario: dict) -> int:
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return int(scenario.get("seed", 0))


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}: top level must be an object")
    return data


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conjcert",
        description="real/rational conjugacy certificates for semidirect products")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file and emit a report")
    run_p.add_argument("scenario", help="path to a scenario JSON file")
    run_p.add_argument("--seed", type=int, default=None,
                       help=f"override the RNG seed (also {SEED_ENV_VAR})")
    run_p.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                       help="order-detection bound")
    fmt = run_p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True, dest="as_json")
    fmt.add_argument("--text", action="store_false", dest="as_json")
    run_p.add_argument("--verify-only", action="store_true",
                       help="suppress the report; emit only the verification summary")
    run_p.add_argument("--timing", action="store_true",
                       help="include wall-clock timing (makes reports nondeterministic)")

    verify_p = sub.add_parser("verify", help="re-verify every certificate in a report")
    verify_p.add_argument("report", help="path to a report JSON file")

    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            scenario = _load_json(args.scenario)
            seed = _resolve_seed(args.seed, scenario)
            report = build_report(scenario, seed, args.bound, timing=args.timing)
            failures = verify_report(report)
            if failures:
                for f in failures:
                    print(f"verification failure: {f}", file=sys.stderr)
                return 1
            if args.verify_only:
                print(json.dumps({"verified_results": len(report["results"]),
                                  "failures": 0}, sort_keys=True))
            elif args.as_json:
                print(json.dumps(report, sort_keys=True, indent=2))
            else:
                print(_render_text(report))
            return 0
        if args.command == "verify":
            report = _load_json(args.report)
            failures = verify_report(report)
            if failures:
                for f in failures:
                    print(f"verification failure: {f}", file=sys.stderr)
                return 1
            print(json.dumps({"verified_results": len(report.get("results", [])),
                              "failures": 0}, sort_keys=True))
            return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: malformed input ({exc!r})", file=sys.stderr)
        return 2
    except ConjcertError as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
