"""Command-line front end: ``dimkit <command> ...``.

Exit status is 0 on success, 1 for domain errors (a witness or certificate
that fails, malformed input), 2 for usage errors and invalid parameters and
3 when a resource limit is hit.  Every command that writes a file also
writes ``<file>.manifest.json`` beside it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .classes import (GENERATORS, FunctionClassTable, ReferenceFunction, _decode_value,
                      load_class, serialize_class)
from .combodim import canonical_measure, dim_comb, dim_sup_over_refs, ldim, vcdim
from .errors import DimkitError, InvalidParameter, ParseError, SearchFailure
from .manifest import RunManifest, manifest_path
from .ramsey import (EdgeColoring, color_from_witness, equivalence_audit, extract_subsequence,
                     find_mono_clique, largest_mono_clique)
from .randcon import (RandomConstructionConfig, count_valid_sequences, forster_after_repair,
                      plus_count, repair_e5_light, sample_e_matrix, sample_f_matrix,
                      search_separation_e)
from .rank import (ActivationSpec, EmbeddingCertificate, bound_claim_b2, bound_claim_b3,
                   embedding_search, forster_report, lemma_b1_check, verify_embedding)
from .repro import SUITES, run_suite
from .scaledim import EXACT, SUP, ScaleSearchConfig, dim_scale
from .witness import WitnessSequence, verify_witness

FORMATS = ("table", "csv", "json")


# ----------------------------------------------------------------- output

def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return "" if v is None else str(v)


def emit(rows, fmt: str, out=None) -> None:
    """Print one record or a list of records as an aligned table, CSV or JSON."""
    out = out or sys.stdout
    if isinstance(rows, dict):
        rows = [rows]
    if fmt == "json":
        out.write(json.dumps(rows[0] if len(rows) == 1 else rows, default=str) + "\n")
        return
    cols = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in cols})
        return
    if len(rows) == 1:
        width = max(len(k) for k in cols)
        for k in cols:
            out.write(f"{k.ljust(width)}  {_cell(rows[0].get(k))}\n")
        return
    cells = [[_cell(r.get(k)) for k in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None


def _write(path: str, data: bytes | str, manifest: RunManifest) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as handle:
        handle.write(data)
    manifest.add_output(path)


def _finish(manifest: RunManifest) -> None:
    if manifest.outputs:
        manifest.write(manifest_path(manifest.outputs[0]))


def _class_bytes(table: FunctionClassTable, path: str) -> bytes:
    return serialize_class(table, "csv" if path.lower().endswith(".csv") else "json")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidParameter(f"not a number: {text!r}") from None


def parse_ref(spec: str | None, table: FunctionClassTable) -> ReferenceFunction | None:
    """``col:K`` (0-based), ``ones``, ``minus-ones``, ``zeros`` or a JSON file."""
    if spec is None:
        return None
    n = table.n_points
    if spec.startswith("col:"):
        try:
            return ReferenceFunction.col(int(spec[4:]))
        except ValueError:
            raise InvalidParameter(f"bad column reference {spec!r}") from None
    if spec == "ones":
        return ReferenceFunction.constant(n, 1)
    if spec == "minus-ones":
        return ReferenceFunction.constant(n, -1)
    if spec == "zeros":
        return ReferenceFunction.constant(n, 0)
    path = spec[5:] if spec.startswith("file:") else spec
    if not os.path.isfile(path):
        raise InvalidParameter(f"unknown reference {spec!r}")
    doc = _read_json(path)
    if isinstance(doc, list):
        return ReferenceFunction.of(_decode_value(v) for v in doc)
    return ReferenceFunction.from_json(doc)


# ----------------------------------------------------------------- commands

def cmd_gen(args, manifest):
    fam = args.family
    if fam in ("thresholds", "singletons"):
        table = GENERATORS[fam](args.n)
    elif fam == "parities":
        table = GENERATORS[fam](args.d)
    elif fam == "scale-counterexample":
        if args.eps is None:
            raise InvalidParameter("scale-counterexample needs --eps")
        margin = _fraction(args.diag_margin)
        table = GENERATORS[fam](args.n, _fraction(args.eps), margin)
    else:
        table = GENERATORS[fam](args.n, args.m if args.m is not None else args.n)
    if args.out:
        _write(args.out, _class_bytes(table, args.out), manifest)
        emit({"family": fam, "points": table.n_points, "functions": table.n_functions,
              "out": args.out}, args.format)
    else:
        sys.stdout.write(serialize_class(table, "csv" if args.format == "csv" else "json").decode())
        sys.stdout.write("\n")
    return 0


def cmd_dim(args, manifest):
    table = load_class(args.class_path)
    manifest.inputs.append(args.class_path)
    measure = args.measure.lower()
    if measure in ("vc", "ldim"):
        value = vcdim(table) if measure == "vc" else ldim(table)
        _emit_dim(args, {"measure": measure, "value": value})
        return 0
    kind = canonical_measure(measure)
    ref = parse_ref(args.ref, table)
    if args.eps is not None:
        if ref is None:
            raise InvalidParameter("scale-sensitive measures need --ref")
        cfg = ScaleSearchConfig(_fraction(args.eps), args.cap, sup_mode=SUP if args.sup else EXACT)
        rep = dim_scale(table, ref, kind, cfg)
    elif ref is None:
        rep = dim_sup_over_refs(table, kind)
    else:
        rep = dim_comb(table, ref, kind)
    if args.witness_out:
        _write(args.witness_out, rep.witness.dumps() + "\n", manifest)
    _emit_dim(args, rep.to_json())
    return 0


def _emit_dim(args, doc):
    if args.format == "table":
        sys.stdout.write(f"{doc['value']}\n")
    elif args.format == "json":
        emit(doc, "json")
    else:
        flat = {k: v for k, v in doc.items() if k not in ("witness", "extra")}
        if "reference" in flat:
            flat["reference"] = json.dumps(flat["reference"])
        if "witness" in doc:
            flat["witness"] = json.dumps(doc["witness"]["entries"])
        emit(flat, "csv")


def cmd_witness_verify(args, manifest):
    table = load_class(args.class_path)
    witness = WitnessSequence.from_json(_read_json(args.witness))
    v = verify_witness(table, witness)
    emit({"valid": v.ok, "kind": witness.kind, "length": len(witness),
          "scale": str(witness.scale), "violation": v.violation}, args.format)
    return 0 if v.ok else 1


def cmd_rank(args, manifest):
    sub = args.rank_cmd
    if sub == "bound-b2":
        emit({"bound": bound_claim_b2(args.d, args.r_phi, args.r_w, _fraction(args.eps))},
             args.format)
        return 0
    if sub == "bound-b3":
        emit({"bound": bound_claim_b3(args.d, args.r_phi, args.r_w, _fraction(args.mu),
                                      _fraction(args.L), _fraction(args.eps))}, args.format)
        return 0
    if sub == "lemma-b1":
        emit({"outcome": lemma_b1_check(_fraction(args.alpha), _fraction(args.beta), args.k)},
             args.format)
        return 0
    table = load_class(args.class_path)
    manifest.inputs.append(args.class_path)
    if sub == "verify":
        cert = EmbeddingCertificate.from_json(_read_json(args.cert))
        v = verify_embedding(table, cert)
        emit({"valid": v.ok, "d": cert.d, "activation": cert.activation.form,
              "worst_residual": v.worst_residual, "violation": v.violation}, args.format)
        return 0 if v.ok else 1
    if sub == "forster":
        emit(forster_report(table).to_json(), args.format)
        return 0
    act = {"identity": ActivationSpec.identity, "sign": ActivationSpec.sign,
           "relu": ActivationSpec.relu}[args.activation]()
    cert = embedding_search(table, args.d, act, args.budget, args.seed)
    manifest.seeds.append(args.seed)
    if cert is None:
        raise SearchFailure(f"no {args.activation} certificate of dimension {args.d} found "
                            f"within budget {args.budget}")
    if args.out:
        _write(args.out, cert.dumps() + "\n", manifest)
    emit({"found": True, "d": cert.d, "R_phi": cert.R_phi, "R_w": cert.R_w,
          "out": args.out}, args.format)
    return 0


def cmd_ramsey(args, manifest):
    sub = args.ramsey_cmd
    if sub == "clique":
        coloring = EdgeColoring.from_json(_read_json(args.coloring))
        hit = find_mono_clique(coloring, args.k) if args.k else largest_mono_clique(coloring)
        emit({"found": hit is not None, "vertices": list(hit[0]) if hit else [],
              "color": hit[1] if hit else None}, args.format)
        return 0
    table = load_class(args.class_path)
    manifest.inputs.append(args.class_path)
    if sub == "audit":
        ref = parse_ref(args.ref, table) or ReferenceFunction.col(table.n_functions - 1)
        rep = equivalence_audit(table, ref)
        emit(rep.to_json(), args.format)
        return 0 if rep.ok else 1
    witness = WitnessSequence.from_json(_read_json(args.witness))
    if sub == "color":
        coloring = color_from_witness(table, witness)
        doc = coloring.to_json()
        if args.out:
            _write(args.out, json.dumps(doc) + "\n", manifest)
        emit({"m": coloring.m, "blue_bits": doc["blue_bits"], "out": args.out}, args.format)
        return 0
    try:
        vertices = [int(v) for v in args.vertices.split(",") if v.strip()]
    except ValueError:
        raise InvalidParameter(f"bad vertex list {args.vertices!r}") from None
    sub_w = extract_subsequence(table, witness, vertices, args.color)
    if args.out:
        _write(args.out, sub_w.dumps() + "\n", manifest)
    emit({"kind": sub_w.kind, "length": len(sub_w), "entries": sub_w.to_json()["entries"],
          "out": args.out}, args.format)
    return 0


def _config(args) -> RandomConstructionConfig:
    return RandomConstructionConfig(args.n, args.seed, args.trials, args.c)


def _report(args, rows, manifest):
    if args.report:
        buf = io.StringIO()
        emit(rows, "csv", buf)
        _write(args.report, buf.getvalue(), manifest)
    emit(rows, args.format)


def cmd_randcon(args, manifest):
    sub = args.randcon_cmd
    manifest.seeds.append(getattr(args, "seed", None))
    if sub in ("e-sample", "f-sample"):
        cfg = _config(args)
        table = sample_e_matrix(cfg) if sub == "e-sample" else sample_f_matrix(cfg)
        if args.out:
            _write(args.out, _class_bytes(table, args.out), manifest)
            emit({"N": cfg.N, "seed": cfg.seed, "plus_entries": plus_count(table),
                  "out": args.out}, args.format)
        else:
            sys.stdout.write(serialize_class(table).decode() + "\n")
        return 0
    if sub == "e-search":
        cfg = _config(args)
        try:
            table, rep, _ = search_separation_e(cfg, args.certified)
        except SearchFailure as exc:
            if exc.best is not None:
                emit(exc.best.to_json(), args.format, sys.stderr)
            raise
        if args.out:
            _write(args.out, _class_bytes(table, args.out), manifest)
        _report(args, rep.to_json(), manifest)
        return 0
    if sub == "count":
        if args.class_path:
            table = load_class(args.class_path)
            manifest.inputs.append(args.class_path)
        else:
            table = sample_e_matrix(_config(args))
        rep = count_valid_sequences(table, args.k, args.monte_carlo, args.samples, args.seed)
        _report(args, {"seed": args.seed, **rep.to_json()}, manifest)
        return 0
    if sub == "repair":
        if args.class_path:
            table = load_class(args.class_path)
            manifest.inputs.append(args.class_path)
        else:
            table = sample_f_matrix(_config(args))
        before = plus_count(table)
        repaired, flips = repair_e5_light(table)
        if args.out:
            _write(args.out, _class_bytes(repaired, args.out), manifest)
        _report(args, {"plus_before": before, "plus_after": plus_count(repaired),
                       "flips": flips, "out": args.out}, manifest)
        return 0
    table, rep = forster_after_repair(_config(args))
    if args.out:
        _write(args.out, _class_bytes(table, args.out), manifest)
    _report(args, rep.to_json(), manifest)
    return 0


def cmd_repro(args, manifest):
    names = SUITES if args.suite == "all" else (args.suite,)
    failed = None
    for name in names:
        rep = run_suite(name, args.out, args.seed, args.threads, ["dimkit", *args.argv])
        for label, ok, detail in rep.checks:
            line = f"{'PASS' if ok else 'FAIL'}  {name}: {label}"
            sys.stdout.write(line + (f"  [{detail}]" if detail else "") + "\n")
        if not rep.ok and failed is None:
            failed = (name, rep.first_failure[0])
        sys.stdout.flush()
    if failed:
        sys.stderr.write(f"dimkit: repro {failed[0]} failed: {failed[1]}\n")
        return 1
    return 0


# ----------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                   help="output format (default: table)")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker cap (default: $DIMKIT_THREADS or 1); results do not depend on it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="dimkit", parents=[common],
                                     description="Exact complexity measures for finite function classes.")
    parser.add_argument("--version", action="version", version=f"dimkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a class file")
    g.add_argument("family", choices=sorted(GENERATORS))
    g.add_argument("--n", type=int, default=4, help="size (points; N for scale-counterexample)")
    g.add_argument("--m", type=int, help="number of functions for the exp family")
    g.add_argument("--d", type=int, default=2, help="dimension for parities")
    g.add_argument("--eps", help="scale for scale-counterexample")
    g.add_argument("--diag-margin", default="101/100")
    g.add_argument("--out", help="output path (.json or .csv)")

    d = sub.add_parser("dim", parents=[common], help="compute a dimension")
    d.add_argument("--measure", required=True,
                   choices=["edim", "sdim", "tdim", "vc", "ldim", "eluder", "star", "threshold"])
    d.add_argument("--class", dest="class_path", required=True)
    d.add_argument("--ref", help="col:K | ones | minus-ones | zeros | file:PATH "
                                 "(default: sup over member columns)")
    d.add_argument("--eps", help="scale for the scale-sensitive measures")
    d.add_argument("--cap", type=int, help="length cap for scale-sensitive searches")
    d.add_argument("--sup", action="store_true", help="supremum over scales >= eps")
    d.add_argument("--witness-out")

    w = sub.add_parser("witness", parents=[common], help="witness tools")
    wsub = w.add_subparsers(dest="witness_cmd", required=True)
    wv = wsub.add_parser("verify", parents=[common])
    wv.add_argument("--class", dest="class_path", required=True)
    wv.add_argument("--witness", required=True)

    r = sub.add_parser("rank", parents=[common], help="generalized-rank tools")
    rsub = r.add_subparsers(dest="rank_cmd", required=True)
    rv = rsub.add_parser("verify", parents=[common])
    rv.add_argument("--class", dest="class_path", required=True)
    rv.add_argument("--cert", required=True)
    rf = rsub.add_parser("forster", parents=[common])
    rf.add_argument("--class", dest="class_path", required=True)
    rs = rsub.add_parser("search", parents=[common])
    rs.add_argument("--class", dest="class_path", required=True)
    rs.add_argument("--d", type=int, required=True)
    rs.add_argument("--activation", choices=["identity", "sign", "relu"], default="sign")
    rs.add_argument("--budget", type=int, default=200)
    rs.add_argument("--seed", type=int, default=0)
    rs.add_argument("--out")
    for name, extra in (("bound-b2", False), ("bound-b3", True)):
        b = rsub.add_parser(name, parents=[common])
        b.add_argument("--d", type=int, required=True)
        b.add_argument("--r-phi", type=float, required=True)
        b.add_argument("--r-w", type=float, required=True)
        b.add_argument("--eps", required=True)
        if extra:
            b.add_argument("--mu", required=True)
            b.add_argument("--L", required=True)
    lb = rsub.add_parser("lemma-b1", parents=[common])
    lb.add_argument("--alpha", required=True)
    lb.add_argument("--beta", required=True)
    lb.add_argument("--k", type=int, required=True)

    ra = sub.add_parser("ramsey", parents=[common], help="colorings and clique extraction")
    rasub = ra.add_subparsers(dest="ramsey_cmd", required=True)
    rc = rasub.add_parser("color", parents=[common])
    rc.add_argument("--class", dest="class_path", required=True)
    rc.add_argument("--witness", required=True)
    rc.add_argument("--out")
    rq = rasub.add_parser("clique", parents=[common])
    rq.add_argument("--coloring", required=True)
    rq.add_argument("--k", type=int, help="clique size (default: largest)")
    rx = rasub.add_parser("extract", parents=[common])
    rx.add_argument("--class", dest="class_path", required=True)
    rx.add_argument("--witness", required=True)
    rx.add_argument("--vertices", required=True, help="comma-separated 0-based witness positions")
    rx.add_argument("--color", choices=["red", "blue"], required=True)
    rx.add_argument("--out")
    rd = rasub.add_parser("audit", parents=[common])
    rd.add_argument("--class", dest="class_path", required=True)
    rd.add_argument("--ref")

    rn = sub.add_parser("randcon", parents=[common], help="seeded random constructions")
    rnsub = rn.add_subparsers(dest="randcon_cmd", required=True)
    for name in ("e-sample", "e-search", "count", "f-sample", "repair", "pipeline"):
        p = rnsub.add_parser(name, parents=[common])
        p.add_argument("--n", type=int, default=16)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--c", type=float, default=3.0)
        p.add_argument("--out", help="class file for the produced table")
        p.add_argument("--report", help="CSV report path")
        if name == "e-search":
            p.add_argument("--certified", action="store_true",
                           help="also require the certified class-wide bounds")
        if name in ("count", "repair"):
            p.add_argument("--class", dest="class_path")
        if name == "count":
            p.add_argument("--k", type=int, default=2)
            p.add_argument("--monte-carlo", action="store_true")
            p.add_argument("--samples", type=int, default=20000)

    rp = sub.add_parser("repro", parents=[common], help="run reproduction suites")
    rp.add_argument("suite", choices=[*SUITES, "all"])
    rp.add_argument("--out", help="directory for CSV reports and manifests")
    rp.add_argument("--seed", type=int, default=0)
    return parser


_COMMANDS = {"gen": cmd_gen, "dim": cmd_dim, "witness": cmd_witness_verify, "rank": cmd_rank,
             "ramsey": cmd_ramsey, "randcon": cmd_randcon, "repro": cmd_repro}


def _threads(args) -> int:
    t = getattr(args, "threads", None)
    if t is None:
        env = os.environ.get("DIMKIT_THREADS", "1")
        try:
            t = int(env)
        except ValueError:
            raise InvalidParameter(f"DIMKIT_THREADS must be an integer, got {env!r}") from None
    if t < 1:
        raise InvalidParameter("threads must be at least 1")
    return t


def dispatch(argv) -> int:
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format = getattr(args, "format", "table")
    args.argv = argv
    try:
        args.threads = _threads(args)
        manifest = RunManifest.start(["dimkit", *argv], threads=args.threads)
        status = _COMMANDS[args.command](args, manifest)
        _finish(manifest)
        return status
    except DimkitError as exc:
        sys.stderr.write(f"dimkit: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"dimkit: {exc.strerror or exc}: {exc.filename or ''}\n")
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
