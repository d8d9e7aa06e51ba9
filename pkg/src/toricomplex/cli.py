"""Command-line frontend: read JSON documents, run checks, report verdicts.

Documents
---------
A *pair document* is a JSON object with the fields understood by
:func:`toricomplex.pairmodel.pair_from_dict` (``rank``, ``rays``,
``max_cones``, ``boundary``, optional ``mode``/``cone``/``nef_part``),
optionally extended by

``"decomposition"``
    a list of parts ``{"b": "p/q", "support": {"<ray index>": "p/q"}}``;
``"orbifold"``
    a map ``{"<ray index>": n}`` of multiplicities (entries default to 1).

When ``decomposition`` is absent the boundary's prime decomposition is
used: one part per ray of positive coefficient, net of the orbifold tax
``1 - 1/n``.

A *germ document* (``cone``, ``hilbert``) carries ``rank``, ``rays``,
``max_cones`` for a single full-dimensional cone plus the interior
primitive vector ``"v"``.  Surgery documents for ``check`` wrap a pair
document under ``"pair"`` next to the surgery data (``target`` fan and
``ray`` for contractions, ``target`` for small modifications,
``vectors`` for extractions).

Exit codes
----------
0   success, every claimed inequality or identity verified;
1   invalid input (malformed document, bad fan/pair/decomposition, bad
    flags or usage);
2   a checked claim failed or a theorem hypothesis was violated;
3   I/O or JSON parse failure.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .adjunction import (HypothesisViolationError, LcViolationError,
                         NotDivisorialCenterError, check_adjunction)
from .birational import (CrepancyError, NotLcPlaceError, SurgeryMismatchError,
                         SurgeryPreconditionError, check_contraction,
                         check_extraction, check_small, contraction,
                         extraction, small_modification)
from .complexity import (IncompatibleOrbifoldError, InputTooLargeError,
                         InvalidDecompositionError, NotFullDimensionalError,
                         NotLogCanonicalError, complexity, fine_complexity,
                         local_complexity_cloc, make_decomposition, minimize,
                         orbifold_complexity, validate_decomposition)
from .conecox import (NotAmpleError, NotInteriorError,
                      TorsionObstructionError, cox_degrees,
                      degree_zero_monoid, verify_cone_iso)
from .divisor import NotQCartierError, class_group
from .fan import InvalidFanError, make_fan
from .lattice import ToricomplexError
from .pairmodel import (InvalidPairError, build_pair, format_rational,
                        is_log_canonical, is_log_cy, pair_from_dict,
                        parse_rational)

class InvalidDocumentError(ToricomplexError):
    """The JSON document does not have the shape the command expects."""


EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CLAIM = 2
EXIT_IO = 3

# Malformed or inconsistent input: the job never got off the ground.
_VALIDATION_ERRORS = (InvalidFanError, InvalidPairError,
                      InvalidDocumentError,
                      InvalidDecompositionError, IncompatibleOrbifoldError,
                      NotFullDimensionalError, InputTooLargeError,
                      NotQCartierError, NotInteriorError,
                      NotDivisorialCenterError, SurgeryMismatchError,
                      ValueError, TypeError, KeyError)
# Well-formed input on which the checked statement (or one of its
# hypotheses) fails.
_CLAIM_ERRORS = (NotLcPlaceError, CrepancyError, SurgeryPreconditionError,
                 HypothesisViolationError, LcViolationError,
                 NotLogCanonicalError, TorsionObstructionError, NotAmpleError)

# Complete fans bundled for `check suite` (mirrors the test fixtures).
_SUITE_DATA = (
    ("P1", 1, [(1,), (-1,)], [(0,), (1,)]),
    ("P2", 2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)]),
    ("P3", 3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
     [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]),
    ("P1xP1", 2, [(1, 0), (0, 1), (-1, 0), (0, -1)],
     [(0, 1), (1, 2), (2, 3), (0, 3)]),
    ("BlP2", 2, [(1, 0), (0, 1), (-1, -1), (1, 1)],
     [(0, 2), (0, 3), (1, 2), (1, 3)]),
    ("F1", 2, [(1, 0), (0, 1), (-1, 1), (0, -1)],
     [(0, 1), (1, 2), (2, 3), (0, 3)]),
    ("F2", 2, [(1, 0), (0, 1), (-1, 2), (0, -1)],
     [(0, 1), (1, 2), (2, 3), (0, 3)]),
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argparse that reports usage problems instead of exiting itself.

    The default parser exits with status 2, which this tool reserves
    for failed claims; usage problems must map to 1.
    """

    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class JobSpec:
    """One resolved invocation: what to run, on what, reported how."""

    command: str
    input_path: str
    fmt: str
    options: dict


# ---------------------------------------------------------------------------
# document I/O


def _load_doc(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise InvalidDocumentError("top-level document must be a JSON object")
    return doc


def _load_fan(doc):
    for key in ("rank", "rays", "max_cones"):
        if key not in doc:
            raise InvalidDocumentError(f"missing field {key!r}")
    return make_fan(doc["rank"], doc["rays"], doc["max_cones"])


def _ray_index(key, nrays):
    i = int(key)
    if not 0 <= i < nrays:
        raise InvalidDecompositionError(f"ray index {i} out of range")
    return i


def _parse_orbifold(doc, nrays):
    orb = [1] * nrays
    if doc is None:
        return orb
    if not isinstance(doc, dict):
        raise IncompatibleOrbifoldError("orbifold must map ray index to n")
    for key, val in doc.items():
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise IncompatibleOrbifoldError(
                f"orbifold multiplicity for ray {key} must be a"
                " positive integer")
        orb[_ray_index(key, nrays)] = val
    return orb


def _parse_parts(doc, nrays):
    if not isinstance(doc, list):
        raise InvalidDecompositionError("decomposition must be a list")
    parts = []
    for entry in doc:
        if not isinstance(entry, dict) or "b" not in entry:
            raise InvalidDecompositionError(
                'each part needs {"b": ..., "support": {...}}')
        coeffs = [Fraction(0)] * nrays
        support = entry.get("support", {})
        if not isinstance(support, dict):
            raise InvalidDecompositionError("support must map ray to value")
        for key, val in support.items():
            coeffs[_ray_index(key, nrays)] = parse_rational(val)
        parts.append((parse_rational(entry["b"]), coeffs))
    return parts


def _prime_parts(pair, orb):
    """One coefficient-one prime per ray, net of the orbifold tax."""
    parts = []
    for i in pair.local_rays():
        tax = Fraction(1) - Fraction(1, orb[i])
        weight = pair.boundary[i] - tax
        if weight < 0:
            raise InvalidDecompositionError(
                f"orbifold tax at ray {i} exceeds the boundary coefficient")
        if weight:
            unit = [Fraction(0)] * len(pair.fan.rays)
            unit[i] = Fraction(1)
            parts.append((weight, unit))
    return parts


def _decomposition_from_doc(doc, pair):
    nrays = len(pair.fan.rays)
    orb = _parse_orbifold(doc.get("orbifold"), nrays)
    if "decomposition" in doc:
        parts = _parse_parts(doc["decomposition"], nrays)
    else:
        parts = _prime_parts(pair, orb)
    dec = make_decomposition(nrays, parts, orb)
    validate_decomposition(pair, dec)
    return dec


def _load_pair(doc):
    return pair_from_dict(doc)


def _interior_vector(doc, fan):
    if "v" not in doc:
        raise InvalidDocumentError('germ document needs the interior vector "v"')
    v = doc["v"]
    if (not isinstance(v, list) or len(v) != fan.rank
            or not all(isinstance(c, int) for c in v)):
        raise InvalidDocumentError('"v" must list one integer per coordinate')
    return tuple(v)


# ---------------------------------------------------------------------------
# serialization


def _rat(x):
    return format_rational(Fraction(x))


def _opt_rat(x):
    return None if x is None else _rat(x)


def _fan_doc(fan):
    return {
        "rank": fan.rank,
        "rays": [list(u) for u in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }


def _dec_doc(dec):
    parts = [{
        "b": _rat(p.weight),
        "support": {str(i): _rat(c) for i, c in enumerate(p.coeffs) if c},
    } for p in dec.parts]
    orbifold = {str(i): n for i, n in enumerate(dec.orbifold) if n != 1}
    return {"parts": parts, "orbifold": orbifold, "norm": _rat(dec.norm)}


def _values_doc(values):
    c, c_fine, c_orb = values
    return {"c": _opt_rat(c), "c_fine": _opt_rat(c_fine),
            "c_orb": _opt_rat(c_orb)}


def _class_doc(pres, v):
    free, tors = pres.class_of(v)
    return {"free": list(free), "torsion": list(tors)}


# ---------------------------------------------------------------------------
# commands


def _cmd_validate(job):
    doc = _load_doc(job.input_path)
    pair = _load_pair(doc)
    checked = "decomposition" in doc or "orbifold" in doc
    dec = _decomposition_from_doc(doc, pair)
    return {
        "claim": "document-is-well-formed",
        "ok": True,
        "mode": pair.mode,
        "rank": pair.fan.rank,
        "rays": len(pair.fan.rays),
        "log_cy": is_log_cy(pair),
        "log_canonical": is_log_canonical(pair),
        "decomposition_checked": checked,
        "decomposition_norm": _rat(dec.norm),
    }


def _cmd_classgroup(job):
    doc = _load_doc(job.input_path)
    fan = _load_fan(doc)
    pres = class_group(fan)
    nrays = len(fan.rays)
    units = [[1 if j == i else 0 for j in range(nrays)] for i in range(nrays)]
    return {
        "claim": "class-group-presentation",
        "ok": True,
        "free_rank": pres.free_rank,
        "torsion": list(pres.torsion),
        "ray_classes": [_class_doc(pres, u) for u in units],
    }


def _cmd_complexity(job):
    doc = _load_doc(job.input_path)
    mode = job.options.get("mode")
    if mode is not None:
        doc = dict(doc, mode=mode)
        if job.options.get("cone") is not None:
            doc["cone"] = list(job.options["cone"])
    pair = _load_pair(doc)
    dec = _decomposition_from_doc(doc, pair)
    trivial = all(n == 1 for n in dec.orbifold)
    return {
        "claim": "complexity-values",
        "ok": True,
        "mode": pair.mode,
        "c": _rat(complexity(pair, dec)) if trivial else None,
        "c_fine": _rat(fine_complexity(pair, dec)) if trivial else None,
        "c_orb": _rat(orbifold_complexity(pair, dec)),
        "norm": _rat(dec.norm),
    }


def _cmd_minimize(job):
    doc = _load_doc(job.input_path)
    pair = _load_pair(doc)
    rep = minimize(pair, orbifold_cap=job.options["orbifold_cap"],
                   partition_limit=job.options["partition_limit"])
    return {
        "claim": "minimal-complexity-values",
        "ok": True,
        "c": _rat(rep.c),
        "c_fine": _rat(rep.c_fine),
        "c_orb": _rat(rep.c_orb),
        "nonnegative": rep.c_orb >= 0,
        "cl_rank": rep.cl_rank,
        "span_fine": rep.span_fine,
        "span_orb": rep.span_orb,
        "dec_c": _dec_doc(rep.dec_c),
        "dec_fine": _dec_doc(rep.dec_fine),
        "dec_orb": _dec_doc(rep.dec_orb),
    }


def _cmd_adjoin(job):
    doc = _load_doc(job.input_path)
    pair = _load_pair(doc)
    dec = _decomposition_from_doc(doc, pair)
    ray = job.options["ray"]
    if not 0 <= ray < len(pair.fan.rays):
        raise InvalidDocumentError(f"--ray {ray} out of range")
    chk = check_adjunction(pair, dec, ray)
    res = chk.result
    return {
        "claim": "adjunction-does-not-increase-complexity",
        "ok": chk.monotone,
        "value_x": _rat(chk.value_x),
        "value_e": _rat(chk.value_e),
        "equality": chk.equality,
        "span_full": chk.span_full,
        "s_empty": chk.s_empty,
        "sigma_is_boundary": chk.sigma_is_boundary,
        "boundary_is_lower_bound": res.boundary_is_lower_bound,
        "e_fan": _fan_doc(res.e_pair.fan),
        "e_mode": res.e_pair.mode,
        "e_boundary": [_rat(b) for b in res.boundary],
        "e_orbifold": list(res.orbifold),
        "sigma": _dec_doc(res.sigma),
        "s_rays": list(res.s_rays),
    }


def _cmd_cone(job):
    doc = _load_doc(job.input_path)
    fan = _load_fan(doc)
    v = _interior_vector(doc, fan)
    rep = verify_cone_iso(fan, v)
    return {
        "claim": "germ-is-cone-over-its-exceptional-divisor",
        "ok": rep.ok,
        "witness": [list(row) for row in rep.witness],
        "e_fan": _fan_doc(rep.e_fan),
        "polarization": [_rat(a) for a in rep.polarization],
        "target": _fan_doc(rep.target),
        "ray_map": list(rep.ray_map),
    }


def _cmd_hilbert(job):
    doc = _load_doc(job.input_path)
    fan = _load_fan(doc)
    v = _interior_vector(doc, fan)
    degrees = cox_degrees(fan, v)
    try:
        monoid = degree_zero_monoid(
            degrees, torsion_cover=job.options["torsion_cover"])
    except TorsionObstructionError as exc:
        raise TorsionObstructionError(
            f"{exc} (command line: --torsion-cover)") from exc
    return {
        "claim": "degree-zero-part-is-finitely-generated",
        "ok": True,
        "class_free_rank": degrees.cl_y.free_rank,
        "class_torsion": list(degrees.cl_y.torsion),
        "generators": [list(g) for g in monoid.generators],
        "tau": list(monoid.tau),
        "cover_steps": [{
            "divisor": list(step.divisor),
            "order": step.order,
            "character": list(step.character),
        } for step in monoid.cover_steps],
    }


def _surgery_doc(job):
    doc = _load_doc(job.input_path)
    if "pair" not in doc:
        raise InvalidDocumentError('surgery document needs a "pair" object')
    pair = _load_pair(doc["pair"])
    dec = _decomposition_from_doc(doc["pair"], pair)
    return doc, pair, dec


def _target_fan(doc, rank):
    target = doc.get("target")
    if not isinstance(target, dict):
        raise InvalidDocumentError('surgery document needs a "target" fan')
    return make_fan(rank, target["rays"], target["max_cones"])


def _cmd_check_contract(job):
    doc, pair, dec = _surgery_doc(job)
    target = _target_fan(doc, pair.fan.rank)
    if "ray" not in doc or not isinstance(doc["ray"], int):
        raise InvalidDocumentError('contraction document needs the integer "ray"')
    surgery = contraction(pair.fan, target, doc["ray"])
    rep = check_contraction(pair, surgery, dec)
    return {
        "claim": "contraction-drops-complexity-by-at-most-one",
        "ok": rep.ok,
        "values_source": _values_doc(rep.values_source),
        "values_target": _values_doc(rep.values_target),
        "dropped_norm": _rat(rep.dropped_norm),
        "e_total_coefficient": _rat(rep.e_total_coefficient),
        "equality_plain": rep.equality_plain,
        "criterion": rep.criterion,
        "e_is_glc_place": rep.e_is_glc_place,
        "pushed": _dec_doc(rep.pushed),
    }


def _cmd_check_small(job):
    doc, pair, dec = _surgery_doc(job)
    target = _target_fan(doc, pair.fan.rank)
    surgery = small_modification(pair.fan, target)
    rep = check_small(pair, surgery, dec)
    return {
        "claim": "small-modification-preserves-complexity",
        "ok": rep.ok,
        "values_source": _values_doc(rep.values_source),
        "values_target": _values_doc(rep.values_target),
        "pushed": _dec_doc(rep.pushed),
    }


def _cmd_check_extract(job):
    doc, pair, dec = _surgery_doc(job)
    vectors = doc.get("vectors")
    if not isinstance(vectors, list) or not vectors:
        raise InvalidDocumentError('extraction document needs "vectors"')
    surgery = extraction(pair.fan, [tuple(v) for v in vectors])
    rep = check_extraction(pair, surgery, dec)
    return {
        "claim": "crepant-extraction-does-not-increase-complexity",
        "ok": rep.ok,
        "values_source": _values_doc(rep.values_source),
        "values_target": _values_doc(rep.values_target),
        "discrepancies": [_rat(d) for d in rep.discrepancies],
        "lifted": _dec_doc(rep.lifted),
    }


def _suite_row(item):
    name, rank, rays, cones = item
    fan = make_fan(rank, rays, cones)
    pair = build_pair(fan, [1] * len(fan.rays))
    rep = minimize(pair)
    local = [local_complexity_cloc(fan, cone).value for cone in fan.max_cones]
    ok = (rep.c, rep.c_fine, rep.c_orb) == (0, 0, 0) and not any(local)
    return {
        "fan": name,
        "ok": ok,
        "c": _rat(rep.c),
        "c_fine": _rat(rep.c_fine),
        "c_orb": _rat(rep.c_orb),
        "local": [_rat(x) for x in local],
    }


def _thread_count():
    raw = os.environ.get("TORICOMPLEX_THREADS", "").strip()
    if raw:
        n = int(raw)
        if n < 1:
            raise ValueError("TORICOMPLEX_THREADS must be a positive integer")
        return n
    return min(len(_SUITE_DATA), os.cpu_count() or 1)


def _cmd_check_suite(job):
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        rows = list(pool.map(_suite_row, _SUITE_DATA))
    return {
        "claim": "bundled-fans-have-zero-complexity",
        "ok": all(row["ok"] for row in rows),
        "fans": rows,
    }


_HANDLERS = {
    "validate": _cmd_validate,
    "classgroup": _cmd_classgroup,
    "complexity": _cmd_complexity,
    "minimize": _cmd_minimize,
    "adjoin": _cmd_adjoin,
    "cone": _cmd_cone,
    "hilbert": _cmd_hilbert,
    "check:contract": _cmd_check_contract,
    "check:small": _cmd_check_small,
    "check:extract": _cmd_check_extract,
    "check:suite": _cmd_check_suite,
}


# ---------------------------------------------------------------------------
# rendering


def _scalar(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    return str(value)


def _text_lines(value, prefix=""):
    if isinstance(value, dict):
        if not value:
            yield f"{prefix}: (none)"
            return
        for key in sorted(value):
            sub = f"{prefix}.{key}" if prefix else str(key)
            yield from _text_lines(value[key], sub)
    elif isinstance(value, list):
        if all(not isinstance(x, (dict, list)) for x in value):
            yield f"{prefix}: [{', '.join(_scalar(x) for x in value)}]"
        else:
            for i, item in enumerate(value):
                yield from _text_lines(item, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {_scalar(value)}"


def _emit(job, payload):
    if job.fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        for line in _text_lines(payload):
            sys.stdout.write(line + "\n")


# ---------------------------------------------------------------------------
# entry points


def _cap(value):
    n = int(value)
    if not 1 <= n <= 64:
        raise argparse.ArgumentTypeError("must be between 1 and 64")
    return n


def _add_io_flags(parser):
    parser.add_argument("--input", default="-", metavar="PATH",
                        help="input document; '-' reads stdin (default)")
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        dest="fmt", help="output rendering (default text)")


def _build_parser():
    parser = _Parser(prog="toricomplex",
                     description="exact complexity invariants of toric pairs")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser,
                                required=True, metavar="command")

    p = sub.add_parser("validate", help="check a pair document")
    _add_io_flags(p)

    p = sub.add_parser("classgroup", help="divisor class group of the fan")
    _add_io_flags(p)

    p = sub.add_parser("complexity",
                       help="values of one decomposition")
    _add_io_flags(p)
    p.add_argument("--mode", choices=("projective", "local", "birational"),
                   help="override the document's pair mode")
    p.add_argument("--cone", metavar="I,J,...",
                   help="cone ray indices for --mode local")

    p = sub.add_parser("minimize", help="minimal values over decompositions")
    _add_io_flags(p)
    p.add_argument("--orbifold-cap", type=_cap, default=12, metavar="N",
                   help="largest orbifold multiplicity tried (1..64)")
    p.add_argument("--partition-limit", type=_cap, default=12, metavar="N",
                   help="largest grouping size enumerated (1..64)")

    p = sub.add_parser("adjoin", help="adjunction onto a boundary divisor")
    _add_io_flags(p)
    p.add_argument("--ray", type=int, required=True, metavar="I",
                   help="ray index of the center")

    p = sub.add_parser("cone", help="identify a germ as a cone")
    _add_io_flags(p)

    p = sub.add_parser("hilbert", help="degree-zero monoid generators")
    _add_io_flags(p)
    p.add_argument("--torsion-cover", action="store_true",
                   help="descend to a finite cover when the class group"
                        " has torsion")

    p = sub.add_parser("check", help="verify one surgery or the suite")
    kind = p.add_subparsers(dest="kind", parser_class=_Parser, required=True,
                            metavar="kind")
    for name, blurb in (("contract", "divisorial contraction"),
                        ("small", "isomorphism in codimension one"),
                        ("extract", "crepant divisorial extraction")):
        q = kind.add_parser(name, help=blurb)
        _add_io_flags(q)
    q = kind.add_parser("suite", help="bundled fans, all values zero")
    q.add_argument("--format", choices=("text", "json"), default="text",
                   dest="fmt")
    return parser


def _parse_cone_flag(raw):
    if raw is None:
        return None
    try:
        return tuple(int(part) for part in raw.split(","))
    except ValueError as exc:
        raise _UsageError(
            f"--cone expects comma-separated integers: {raw!r}") from exc


def _job_from_args(args):
    command = args.command
    if command == "check":
        command = f"check:{args.kind}"
    options = {}
    for key in ("mode", "orbifold_cap", "partition_limit", "ray",
                "torsion_cover"):
        if hasattr(args, key):
            options[key] = getattr(args, key)
    if hasattr(args, "cone"):
        options["cone"] = _parse_cone_flag(args.cone)
    return JobSpec(command=command,
                   input_path=getattr(args, "input", "-"),
                   fmt=args.fmt, options=options)


def run(argv):
    """Execute one invocation; returns the exit code without exiting."""
    try:
        args = _build_parser().parse_args(argv)
        job = _job_from_args(args)
    except _UsageError as exc:
        print(f"toricomplex: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        payload = _HANDLERS[job.command](job)
    except _CLAIM_ERRORS as exc:
        print(f"toricomplex: claim failed: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    # JSONDecodeError subclasses ValueError: classify I/O first.
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"toricomplex: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _VALIDATION_ERRORS as exc:
        print(f"toricomplex: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(job, payload)
    return EXIT_OK if payload.get("ok", True) else EXIT_CLAIM


def main(argv=None):
    return run(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
