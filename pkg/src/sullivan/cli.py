"""Command-line front end.

Every command prints one JSON document (or a TSV table) on stdout.  Domain
errors print ``{"error": kind, "message": ...}`` on stderr and exit 1; usage
errors exit 2.  Checks that fail (validate, apl-check, lemma31) print their
report and exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import apl
from .cdga import CdgaPresentation, parse_lines, parse_target, validate
from .cohomology import cohomology
from .errors import SullivanError
from .holonomy import RelativeSullivan, holonomy_matrices, lemma31_check, validate_relative
from .lie import abelianization_dim, fundamental_lie, homotopy_dims, lcs_quotients
from .models import degree1_stages, finite_type_report, minimal_model_sc, verify_build

COMMANDS = ("validate", "cohomology", "model", "homotopy", "lie", "holonomy", "apl-check", "lemma31")


class CheckFailed(Exception):
    """Report was produced but the check it describes failed."""

    def __init__(self, payload):
        super().__init__("check failed")
        self.payload = payload


def load_input(path: str):
    """Return ("target" | "cdga" | "relative", object)."""
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".target":
        return "target", parse_target(text)
    table, diff, max_degree, fiber = parse_lines(text, allow_fiber=True)
    pres = CdgaPresentation(table, diff, max_degree)
    if fiber:
        return "relative", RelativeSullivan(pres, len(table) - len(fiber))
    return "cdga", pres


def _ensure_cap(alg, n: int):
    if isinstance(alg, CdgaPresentation) and alg.max_degree < n:
        return alg.with_max_degree(n)
    return alg


def _require(kind, allowed, what):
    if kind not in allowed:
        raise SullivanError(f"{what} expects a {' or '.join(allowed)} file, got a {kind} file")


# ---------- commands ----------

def cmd_validate(args):
    kind, obj = load_input(args.inputs[0])
    if kind == "target":
        dims = {str(n): d for n, d in sorted(obj.dims().items())}
        return {"kind": "target", "ok": True, "dims": dims}
    if kind == "relative":
        rep = validate_relative(obj)
        out = {"kind": "relative", "ok": rep["d_squared_zero"] and rep["minimal_relative"], **rep}
    else:
        rep = validate(obj)
        out = {"kind": "cdga", "ok": rep.ok, **rep.to_dict()}
    if not out["ok"]:
        raise CheckFailed(out)
    return out


def cmd_cohomology(args):
    kind, alg = load_input(args.inputs[0])
    if kind == "relative":
        alg = alg.fiber
    top = args.max_degree if args.max_degree is not None else min(alg.max_degree - 1, 6) \
        if alg.max_degree is not None else 4
    alg = _ensure_cap(alg, top + 1)
    degrees = [cohomology(alg, n).to_dict() for n in range(top + 1)]
    return {"dims": [d["dim"] for d in degrees], "degrees": degrees}


def _build_model(args, target):
    if cohomology(target, 1).dim:
        return degree1_stages(target, args.max_stage if args.max_stage is not None else 3)
    return minimal_model_sc(target, args.max_degree if args.max_degree is not None else 6)


def cmd_model(args):
    kind, target = load_input(args.inputs[0])
    if kind == "relative":
        raise SullivanError("model expects a target or an absolute presentation")
    build = _build_model(args, target)
    return {
        "kind": build.kind,
        "cap": build.cap,
        "stabilized": build.stabilized,
        "stage_log": build.stage_log_json(),
        "finite_type": finite_type_report(build),
        "checks": verify_build(build),
        "model": build.model.render(),
    }


def _minimal_presentation(args, kind, obj) -> CdgaPresentation:
    if kind == "target":
        return _build_model(args, obj).model
    _require(kind, ("cdga", "target"), "this command")
    return obj


def _lie_payload(L, depth):
    lcs = lcs_quotients(L, depth)
    return {
        "names": L.names,
        "brackets": L.brackets_json(),
        "lcs": lcs.to_json(),
        "nilpotency_index": lcs.nilpotency_index,
    }


def cmd_homotopy(args):
    kind, obj = load_input(args.inputs[0])
    p = _minimal_presentation(args, kind, obj)
    top = args.max_degree if args.max_degree is not None else p.table.max_generator_degree()
    out = homotopy_dims(p, max(top, 2)).to_dict()
    out.update(_lie_payload(fundamental_lie(p), args.depth))
    return out


def cmd_lie(args):
    kind, obj = load_input(args.inputs[0])
    p = _minimal_presentation(args, kind, obj)
    L = fundamental_lie(p)
    out = _lie_payload(L, args.depth)
    out["abelianization_dim"] = abelianization_dim(L)
    return out


def cmd_holonomy(args):
    kind, rs = load_input(args.inputs[0])
    _require(kind, ("relative",), "holonomy")
    top = args.max_degree if args.max_degree is not None else rs.max_degree - 1
    if top + 1 > rs.max_degree:
        rs = RelativeSullivan(rs.total.with_max_degree(top + 1), rs.n_base)
    matrices, bases, nil = {}, {}, {}
    nilpotent = True
    for n in range(1, top + 1):
        rep = holonomy_matrices(rs, n)
        if not rep.basis:
            continue
        d = rep.to_dict()
        matrices[str(n)] = d["matrices"]
        bases[str(n)] = d["basis"]
        nil[str(n)] = d["nilpotency"]
        nilpotent = nilpotent and rep.nilpotent
    lem = lemma31_check(rs, args.trials, args.seed)
    return {
        "filtration": rs.filtration.to_dict(),
        "bases": bases,
        "matrices": matrices,
        "nilpotency": nil,
        "nilpotent": nilpotent,
        "lemma31": {"trials": lem.trials, "passed": lem.passed},
    }


def cmd_lemma31(args):
    kind, rs = load_input(args.inputs[0])
    _require(kind, ("relative",), "lemma31")
    rep = lemma31_check(rs, args.trials, args.seed)
    out = rep.to_dict()
    if not rep.ok:
        raise CheckFailed(out)
    return out


def cmd_apl_check(args):
    first = Path(args.inputs[0])
    if first.suffix == ".cdga":
        if len(args.inputs) != 2:
            raise SullivanError("apl-check on a presentation needs a simplex JSON as second input")
        kind, p = load_input(str(first))
        _require(kind, ("cdga",), "apl-check")
        data = json.loads(Path(args.inputs[1]).read_text())
        n = int(data["n"])
        sigma = {k: apl.parse_form(v, n) for k, v in data["sigma"].items()}
        rep = apl.check_simplex(p, sigma, n)
        out = {"mode": "simplex", **rep.to_dict()}
        if not rep.valid:
            raise CheckFailed(out)
        return out
    data = json.loads(first.read_text())
    if len(args.inputs) == 2:
        K = apl.FiniteSimplicialSet.from_json(data)
        K, fam = apl.load_family(json.loads(Path(args.inputs[1]).read_text()), K)
    else:
        K, fam = apl.load_family(data)
    rep = apl.apl_cochain_compare(K, fam, strict=False)
    out = {"mode": "cochain", "ok": rep.ok, **rep.to_dict()}
    if not rep.ok:
        raise CheckFailed(out)
    return out


HANDLERS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "model": cmd_model,
    "homotopy": cmd_homotopy,
    "lie": cmd_lie,
    "holonomy": cmd_holonomy,
    "apl-check": cmd_apl_check,
    "lemma31": cmd_lemma31,
}


# ---------- output ----------

def _tsv_rows(command: str, out: dict) -> list[list]:
    if command == "cohomology":
        return [["degree", "dim", "representatives"]] + [
            [d["degree"], d["dim"], "; ".join(d["representatives"])] for d in out["degrees"]]
    if command == "model":
        return [["stage", "added", "cumulative_dim"]] + [
            [e["stage"], e["added"], e["cumulative_dim"]] for e in out["stage_log"]]
    if command in ("lie", "homotopy"):
        rows = [["n", "lcs_dim"]] + [[n, d] for n, d in out["lcs"]]
        if command == "homotopy":
            rows += [["degree", "pi_dim"]] + [[n, d] for n, d in out["pi"].items()]
        return rows
    if command == "holonomy":
        rows = [["degree", "element", "nilpotency"]]
        for n, per in out["nilpotency"].items():
            rows += [[n, x, k] for x, k in per.items()]
        return rows
    return [["key", "value"]] + [[k, json.dumps(v, sort_keys=True)] for k, v in out.items()]


def emit(command: str, out: dict, fmt: str, stream) -> None:
    if fmt == "tsv":
        for row in _tsv_rows(command, out):
            stream.write("\t".join(str(c) for c in row) + "\n")
    else:
        stream.write(json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sullivan", description="Exact rational homotopy computations.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="+", help="input files (.cdga, .target, .json)")
    ap.add_argument("--max-degree", type=int)
    ap.add_argument("--max-stage", type=int)
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "tsv"), default="json")
    return ap


def _positive(ap, args):
    for name in ("max_degree", "max_stage", "depth", "trials"):
        v = getattr(args, name)
        if v is not None and v < (0 if name == "max_stage" else 1):
            ap.error(f"--{name.replace('_', '-')} must be positive")
    if len(args.inputs) > (2 if args.command == "apl-check" else 1):
        ap.error(f"too many inputs for {args.command}")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _positive(ap, args)
    try:
        out = HANDLERS[args.command](args)
    except CheckFailed as e:
        emit(args.command, e.payload, args.format, sys.stdout)
        return 1
    except SullivanError as e:
        sys.stderr.write(json.dumps(e.to_dict(), sort_keys=True) + "\n")
        return 1
    except FileNotFoundError as e:
        sys.stderr.write(json.dumps({"error": "FileNotFound", "message": str(e)}) + "\n")
        return 1
    except (KeyError, ValueError, json.JSONDecodeError) as e:
        sys.stderr.write(json.dumps({"error": "InvalidInput", "message": str(e)}) + "\n")
        return 1
    emit(args.command, out, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
