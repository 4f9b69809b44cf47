"""branchtor command line: JSON in, JSON out.

Exit codes: 0 success, 1 domain error (JSON error object on stdout),
2 malformed input.  Integers are printed as decimal strings.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from . import abelian, complexes, deqs, stallings, surfaces
from .errors import DomainError
from .words import CyclicWord, format_word, parse


class InputError(Exception):
    pass


def _ints(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return "inf" if obj == float("inf") else repr(obj)
    if isinstance(obj, dict):
        return {str(k): _ints(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_ints(v) for v in obj]
    return obj


def _dump(obj: Any) -> str:
    return json.dumps(_ints(obj), sort_keys=True, separators=(",", ":"))


def _read_json(source: str) -> Any:
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as e:
        raise InputError(f"cannot read {source}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source} is not valid JSON: {e}") from e


def _inline_or_file(args: argparse.Namespace) -> Any:
    if getattr(args, "json", None) is not None:
        try:
            return json.loads(args.json)
        except json.JSONDecodeError as e:
            raise InputError(f"--json is not valid JSON: {e}") from e
    if getattr(args, "input", None) is not None:
        return _read_json(args.input)
    raise InputError("give the input with --json or --input")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise InputError(f"expected comma-separated integers, got {text!r}") from e


def _subgroup(rank: int, text: str) -> stallings.SubgroupGraph:
    gens = [parse(w.strip(), rank) for w in text.split(",") if w.strip()]
    return stallings.from_generators(rank, gens)


def _group(g: abelian.AbelianGroup) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.invariant_factors), "text": str(g)}


def _graph(h: stallings.SubgroupGraph) -> dict:
    idx = stallings.index(h)
    return {
        "graph": h.to_json(),
        "rank": stallings.rank(h),
        "index": "infinite" if idx == stallings.INFINITE else idx,
        "basis": [format_word(w) for w in h.basis()],
    }


def _record(r: stallings.ElevationRecord) -> dict:
    return {
        "class_index": r.base_class_index,
        "degree": r.degree,
        "anchor": r.anchor,
        "conjugator": format_word(r.conjugator),
        "elevated_class": format_word(r.elevated_class.word),
    }


def _complex_input(data: Any) -> complexes.PsiComplex:
    if isinstance(data, dict) and "equations" in data:
        return complexes.build_from_system(deqs.DeltaSystem.from_json(data))
    return complexes.PsiComplex.from_json(data)


def _write(path: str | None, obj: Any) -> None:
    if path:
        Path(path).write_text(_dump(obj) + "\n")


def _digest(args: argparse.Namespace, inputs: Any = None) -> str:
    payload = {"command": args.command, "seed": args.seed, "args": _echo(args), "inputs": inputs}
    return hashlib.sha256(_dump(payload).encode()).hexdigest()


def _echo(args: argparse.Namespace) -> dict:
    skip = {"handler", "emit", "emit_data", "emit_precover", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- subcommands -------------------------------------------------------------------


def cmd_snf(args):
    m = _inline_or_file(args)
    if not isinstance(m, list) or any(not isinstance(r, list) for r in m):
        raise InputError("matrix must be a JSON list of rows")
    _, s, _ = abelian.smith_normal_form(m)
    d = abelian.diagonal(s) if m and m[0] else []
    return {"diagonal": d, "rank": sum(1 for x in d if x)}


def cmd_h1(args):
    return _group(complexes.h1(_complex_input(_inline_or_file(args))))


def cmd_quotient(args):
    return _group(deqs.quotient(deqs.DeltaSystem.from_json(_inline_or_file(args))))


def cmd_table1(args):
    plan = deqs.table1_system(_int_list(args.factors))
    out = plan.system.to_json()
    out["rows"] = [{"name": r.name, "family": r.family} for r in plan.rows]
    out["quotient"] = _group(deqs.quotient(plan.system))
    return out


def cmd_elevations(args):
    h = _subgroup(args.rank, args.subgroup)
    w = CyclicWord(parse(args.word, args.rank))
    recs = stallings.elevations(h, w)
    return {"degrees": [r.degree for r in recs], "elevations": [_record(r) for r in recs]}


def cmd_pullback(args):
    h = _subgroup(args.rank, args.subgroup)
    classes = [parse(w.strip(), args.rank) for w in args.classes.split(",") if w.strip()]
    recs = stallings.pullback_records(h, stallings.PeripheralStructure(classes))
    return {"classes": [format_word(r.element) for r in recs], "elevations": [_record(r) for r in recs]}


def cmd_intersect(args):
    return _graph(stallings.intersect(_subgroup(args.rank, args.subgroup), _subgroup(args.rank, args.other)))


def cmd_complete(args):
    return _graph(stallings.complete_to_cover(_subgroup(args.rank, args.subgroup)))


def cmd_cover_surface(args):
    labels = [f"x{k}" for k in range(1, args.boundary + 1)]
    signs = _int_list(args.signs) if args.signs else None
    base = surfaces.SurfaceSpec.orientable_with(args.genus, labels, signs)
    parts = [_int_list(p) for p in args.partition.split(";")]
    cover, witness = surfaces.build_cover(base, args.degree, parts, args.seed)
    return {
        "surface": cover.to_json(),
        "euler_characteristic": surfaces.euler_char(cover),
        "witness": witness.to_json(),
    }


def _certify(cover, base, data, expected_torsion=None) -> list[str]:
    transcript = []
    report = complexes.verify_cover(cover, base, data)
    if not report.ok:
        raise DomainError(f"verify_cover failed: {report.problems}")
    transcript.append(f"verify_cover: ok, degree {report.degree}")
    if not complexes.is_connected(cover):
        raise DomainError("cover is disconnected")
    transcript.append("connected: ok")
    g = complexes.h1(cover)
    if expected_torsion is not None and g.invariant_factors != expected_torsion:
        raise DomainError(f"h1 torsion {list(g.invariant_factors)} != expected {list(expected_torsion)}")
    transcript.append(f"h1: {g}")
    return transcript


def cmd_torsion_cover(args):
    factors = _int_list(args.factors)
    if not factors or any(r < 2 for r in factors):
        raise DomainError("factors must all be at least 2")
    std = complexes.standard_branched_surface(args.genus)
    cover, data = complexes.torsion_cover(std, factors, args.seed)
    g = complexes.h1(cover)
    out = {
        "degree": sum(d for b, d in data.circles.values() if b == std.circles[0]),
        "torsion": list(g.invariant_factors),
        "free_rank": g.free_rank,
        "circles": len(cover.circles),
        "surfaces": len(cover.surfaces),
    }
    _write(args.emit, cover.to_json())
    _write(args.emit_data, data.to_json())
    if args.certify:
        expected = abelian.AbelianGroup.from_orders(0, factors).invariant_factors
        out["certificate"] = {
            "command": ["torsion-cover"] + sys_argv_echo(args),
            "inputs_digest": _digest(args),
            "result": {"degree": out["degree"], "torsion": out["torsion"]},
            "transcript": _certify(cover, std, data, expected),
        }
    return out


def sys_argv_echo(args) -> list[str]:
    out = []
    for k, v in _echo(args).items():
        if k in ("command", "certify") or v is None:
            continue
        out += [f"--{k.replace('_', '-')}", str(v)]
    return out


def cmd_standardize(args):
    raw = _inline_or_file(args)
    b = _complex_input(raw)
    std, pre = complexes.standardize(b, args.seed)
    report = complexes.verify_cover(pre.expanded, b, pre.data, precover=True)
    if not report.ok:
        raise DomainError(f"precover check failed: {report.problems}")
    _write(args.emit, std.to_json())
    _write(args.emit_precover, pre.expanded.to_json())
    _write(args.emit_data, pre.data.to_json())
    return {
        "standard": std.to_json(),
        "precover": {
            "surfaces": len(pre.expanded.surfaces),
            "circles": len(pre.expanded.circles),
            "hanging": len(report.hanging),
        },
        "inputs_digest": _digest(args, raw),
    }


def _verify_job(job: dict) -> dict:
    cover = _complex_input(_read_json(job["cover"]))
    base = _complex_input(_read_json(job["base"]))
    data = complexes.CoverData.from_json(_read_json(job["data"]))
    return complexes.verify_cover(cover, base, data, bool(job.get("precover", False))).to_json()


def cmd_verify(args):
    if args.batch:
        jobs = _read_json(args.batch)
        if not isinstance(jobs, list):
            raise InputError("batch file must be a JSON list of jobs")
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_verify_job, jobs))
        else:
            results = [_verify_job(j) for j in jobs]
        return {"ok": all(r["ok"] for r in results), "reports": results}
    if not (args.cover and args.base and args.data):
        raise InputError("verify needs --cover, --base and --data, or --batch")
    job = {"cover": args.cover, "base": args.base, "data": args.data, "precover": args.precover}
    return _verify_job(job)


def cmd_match(args):
    counts = _int_list(args.counts)
    pairs = complexes.match_elevations(counts)
    return {"pairs": [[list(a), list(b)] for a, b in pairs]}


# -- parser ------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="branchtor", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches (env BRANCHTOR_SEED wins)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, handler, inline=False, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(handler=handler)
        if inline:
            sp.add_argument("--json", help="input as an inline JSON string")
            sp.add_argument("--input", help="input JSON file, '-' for stdin")
        return sp

    add("snf", cmd_snf, True, help="Smith normal form of an integer matrix")
    add("h1", cmd_h1, True, help="first homology of a complex or system")
    add("quotient", cmd_quotient, True, help="abelian group presented by a system")
    sp = add("table1", cmd_table1, help="gluing plan for prescribed torsion")
    sp.add_argument("--factors", required=True)

    for name, handler in (("elevations", cmd_elevations), ("pullback", cmd_pullback),
                          ("intersect", cmd_intersect), ("complete", cmd_complete)):
        sp = add(name, handler)
        sp.add_argument("--rank", type=int, required=True)
        sp.add_argument("--subgroup", required=True, help="comma-separated generators, e.g. aaa,abAB")
    sub.choices["elevations"].add_argument("--word", required=True)
    sub.choices["pullback"].add_argument("--classes", required=True)
    sub.choices["intersect"].add_argument("--other", required=True)

    sp = add("cover-surface", cmd_cover_surface, help="finite cover with prescribed boundary degrees")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--boundary", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--partition", required=True, help="degrees per boundary, boundaries separated by ';'")
    sp.add_argument("--signs", help="comma-separated boundary signs")

    sp = add("torsion-cover", cmd_torsion_cover, help="cover of the standard branched surface with given torsion")
    sp.add_argument("--factors", required=True)
    sp.add_argument("--genus", type=int, default=1)
    sp.add_argument("--emit", help="write the cover complex here")
    sp.add_argument("--emit-data", help="write the covering data here")
    sp.add_argument("--certify", action="store_true")

    sp = add("standardize", cmd_standardize, True, help="standard precover of a branched surface")
    sp.add_argument("--emit")
    sp.add_argument("--emit-precover")
    sp.add_argument("--emit-data")

    sp = add("verify", cmd_verify, help="check cover or precover data")
    sp.add_argument("--cover")
    sp.add_argument("--base")
    sp.add_argument("--data")
    sp.add_argument("--precover", action="store_true")
    sp.add_argument("--batch", help="JSON list of {cover, base, data, precover} jobs")
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("match", cmd_match, help="pair hanging elevations at a circle")
    sp.add_argument("--counts", required=True)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    env_seed = os.environ.get("BRANCHTOR_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(_dump({"error": "malformed", "message": "BRANCHTOR_SEED must be an integer"}), file=out)
            return 2
    try:
        result = args.handler(args)
    except DomainError as e:
        print(_dump({"error": type(e).__name__, "message": str(e)}), file=out)
        return 1
    except (InputError, ValueError, KeyError, TypeError) as e:
        print(_dump({"error": "malformed", "message": str(e)}), file=out)
        return 2
    print(_dump(result), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
