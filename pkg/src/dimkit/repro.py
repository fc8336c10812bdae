"""Reproduction suites: each one runs a batch of exact checks and reports them as CSV.

A suite returns a :class:`SuiteReport` holding one row per instance and a
list of named checks.  ``run_suite`` optionally writes ``<name>.csv`` and its
manifest into an output directory.  Per-instance work can be spread over
worker processes; every instance draws from its own seeded generator, so
results do not depend on the worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .classes import (FunctionClassTable, ReferenceFunction, REAL, gen_parities,
                      gen_scale_counterexample, gen_singletons, gen_thresholds)
from .combodim import dim_comb, dim_sup_over_refs, edim_upper_bound, ldim, vcdim
from .errors import InvalidParameter
from .manifest import RunManifest, manifest_path
from .oracles import (naive_dimension, naive_ldim, naive_mono_clique, naive_vcdim,
                      svd_spectral_norm)
from .ramsey import (EdgeColoring, RED, color_from_witness, equivalence_audit,
                     extract_subsequence, fig3_fixture, find_mono_clique)
from .randcon import (RandomConstructionConfig, count_valid_sequences, forster_after_repair,
                      lemma_e3_bound, sample_e_matrix, search_separation_e)
from .rank import (ActivationSpec, EmbeddingCertificate, HOLDS, VIOLATED, bound_claim_b2,
                   bound_claim_b3, forster_report, lemma_b1_check, relu_certificate,
                   spectral_norm, verify_embedding)
from .scaledim import (ScaleSearchConfig, dim_scale, gen_linear_eluder_witness,
                       relu_star_instance, relu_target)
from .witness import ELUDER, KINDS, STAR, THRESHOLD, verify_witness

# wall-clock budgets in seconds, one per suite
LIMITS = {
    "prop23": 60, "thresholds": 5, "parity": 30, "relu": 10, "linear-lb": 5, "bounds": 60,
    "equivalence": 120, "counterexample": 10, "thm53": 300, "thm55": 300, "oracles": 600,
}
SUITES = tuple(LIMITS)


@dataclass
class SuiteReport:
    name: str
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    wall_time: float = 0.0

    def check(self, label: str, ok: bool, detail: str = "") -> None:
        self.checks.append((label, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def first_failure(self):
        return next(((label, detail) for label, ok, detail in self.checks if not ok), None)

    def columns(self) -> list:
        cols = []
        for row in self.rows:
            for k in row:
                if k not in cols:
                    cols.append(k)
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()

    def checks_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "passed", "detail"])
        for label, ok, detail in self.checks:
            writer.writerow([label, int(ok), detail])
        return buf.getvalue()


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _random_binary(rng, max_n: int, max_m: int, min_n: int = 1, min_m: int = 1):
    n = int(rng.integers(min_n, max_n + 1))
    m = int(rng.integers(min_m, max_m + 1))
    B = 2 * rng.integers(0, 2, size=(n, m)) - 1
    return FunctionClassTable.from_matrix(B.tolist(), kind="binary")


def _member_and_ones(table):
    refs = [ReferenceFunction.col(j) for j in range(table.n_functions)]
    return refs + [ReferenceFunction.constant(table.n_points, 1)]


def _ref_label(ref: ReferenceFunction) -> str:
    return f"col:{ref.column}" if ref.is_member else "ones"


# ----------------------------------------------------------------- suites

def _prop23_item(args):
    seed, idx = args
    table = _random_binary(_rng(seed, idx), 8, 8)
    bad = []
    emax = 0
    for ref in _member_and_ones(table):
        e = dim_comb(table, ref, ELUDER).value
        s = dim_comb(table, ref, STAR).value
        t = dim_comb(table, ref, THRESHOLD).value
        emax = max(emax, e)
        if not (s <= e and t <= e and e <= edim_upper_bound(table, ref)):
            bad.append(_ref_label(ref))
    return {"table": idx, "points": table.n_points, "functions": table.n_functions,
            "max_edim": emax, "violations": ";".join(bad)}


def suite_prop23(rep: SuiteReport, seed: int, threads: int) -> None:
    """Eluder value at most min(|X|, |F|-1), and star and threshold values at most it."""
    rep.rows = _pmap(_prop23_item, [(seed, i) for i in range(300)], threads)
    bad = [r for r in rep.rows if r["violations"]]
    rep.check("sdim, tdim <= edim <= min(|X|, |F|-1) on 300 random tables", not bad,
              f"{len(bad)} tables violate")


def suite_thresholds(rep: SuiteReport, seed: int, threads: int) -> None:
    ok_e = ok_s = ok_t = ok_w = True
    for n in range(2, 13):
        table = gen_thresholds(n)
        ref = ReferenceFunction.col(n)
        reps = {k: dim_comb(table, ref, k) for k in KINDS}
        s_sup = dim_sup_over_refs(table, STAR).value
        verified = all(verify_witness(table, r.witness).ok for r in reps.values())
        e, s, t = reps[ELUDER].value, reps[STAR].value, reps[THRESHOLD].value
        rep.rows.append({"n": n, "edim": e, "sdim": s, "tdim": t, "sdim_sup_over_refs": s_sup,
                         "witnesses_verified": int(verified)})
        ok_e &= e == n
        ok_s &= s == 2
        ok_t &= t == n
        ok_w &= verified
    rep.check("edim = n for n = 2..12", ok_e)
    rep.check("sdim = 2 for n = 2..12", ok_s,
              "sdim values " + ",".join(str(r["sdim"]) for r in rep.rows))
    rep.check("tdim = n for n = 2..12", ok_t)
    rep.check("every reported witness verifies", ok_w)


def suite_parity(rep: SuiteReport, seed: int, threads: int) -> None:
    ok_e = ok_t = ok_f = True
    for d in range(1, 5):
        table = gen_parities(d)
        e = dim_sup_over_refs(table, ELUDER).value
        t = dim_sup_over_refs(table, THRESHOLD).value
        fr = forster_report(table)
        rep.rows.append({"d": d, "edim": e, "tdim": t, "forster": repr(fr.value),
                         "forster_tolerance": fr.tolerance, "expected_forster": 2 ** (d / 2)})
        ok_e &= e == d
        ok_t &= t == d
        ok_f &= abs(fr.value - 2 ** (d / 2)) <= 1e-6
    rep.check("edim (sup over references) = d for d = 1..4", ok_e)
    rep.check("forster bound = 2^(d/2) within 1e-6", ok_f)
    rep.check("tdim = d for d = 1..4", ok_t)


def suite_relu(rep: SuiteReport, seed: int, threads: int) -> None:
    d, R, eps = 2, Fraction(2), Fraction(1, 20)
    table, witness, U = relu_star_instance(d, eps, R, seed=seed)
    cert = relu_certificate(U, eps, R)
    cv = verify_embedding(table, cert)
    wv = verify_witness(table, witness)
    target = relu_target(d, eps, R)
    rep.rows.append({"d": d, "R": str(R), "eps": str(eps), "packing": len(U), "target": target,
                     "cert_dim": cert.d, "cert_ok": int(cv.ok), "cert_residual": cv.worst_residual,
                     "witness_length": len(witness), "witness_ok": int(wv.ok)})
    rep.check("relu certificate of dimension d+1 verifies", cv.ok and cert.d == d + 1,
              cv.violation or "")
    rep.check(f"star witness verifies with length >= {target}", wv.ok and len(witness) >= target,
              f"length {len(witness)}")


def _ladder_length(d: int, eps: Fraction) -> int:
    alpha = Fraction(6, 5) * eps
    k = 0
    while alpha * 2 ** (k + 1) <= 1:
        k += 1
    return d * (k + 1)


def suite_linear_lb(rep: SuiteReport, seed: int, threads: int) -> None:
    ok = True
    for d in (1, 2):
        for eps in (Fraction(1, 10), Fraction(1, 100)):
            table, witness = gen_linear_eluder_witness(d, eps)
            v = verify_witness(table, witness)
            want = _ladder_length(d, eps)
            rep.rows.append({"d": d, "eps": str(eps), "length": len(witness), "expected": want,
                             "verified": int(v.ok)})
            ok &= v.ok and len(witness) == want and witness.scale == eps
    rep.check("ladder witnesses verify exactly at the requested scale with length d(k+1)", ok)


def _small_rational(rng, lo: int = -4, hi: int = 4, den: int = 4) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), den)


def _random_embedding(rng):
    while True:
        d = int(rng.integers(1, 4))
        n = int(rng.integers(1, 7))
        m = int(rng.integers(2, 7))
        phi = [[_small_rational(rng) for _ in range(d)] for _ in range(n)]
        w = [[_small_rational(rng) for _ in range(d)] for _ in range(m)]
        rp = max(math.sqrt(sum(float(v) ** 2 for v in r)) for r in phi)
        rw = max(math.sqrt(sum(float(v) ** 2 for v in r)) for r in w)
        if rp > 0 and rw > 0:
            return d, phi, w, rp, rw


def _inner(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _random_eps(rng, top: float) -> Fraction:
    eps = Fraction(float(rng.uniform(0.02, 0.98)) * top).limit_denominator(1000)
    return eps if 0 < eps < top else Fraction(top / 2).limit_denominator(1000)


def _sup_edim(table, eps) -> int:
    cfg = ScaleSearchConfig(eps)
    return max(dim_scale(table, ReferenceFunction.col(j), ELUDER, cfg).value
               for j in range(table.n_functions))


def _bounds_identity_item(args):
    seed, idx = args
    rng = _rng(seed, idx)
    d, phi, w, rp, rw = _random_embedding(rng)
    values = [[_inner(p, q) for q in w] for p in phi]
    table = FunctionClassTable.from_matrix(values, kind=REAL)
    cert = EmbeddingCertificate(d, [[float(v) for v in r] for r in phi],
                                [[float(v) for v in r] for r in w],
                                ActivationSpec.identity(), rp, rw, 1e-9)
    eps = _random_eps(rng, rp * rw)
    value = _sup_edim(table, eps)
    bound = bound_claim_b2(d, rp, rw, eps)
    return {"family": "identity", "instance": idx, "d": d, "points": table.n_points,
            "functions": table.n_functions, "eps": str(eps), "edim": value, "bound": bound,
            "cert_ok": int(verify_embedding(table, cert).ok), "ok": int(value <= bound)}


def _random_activation(rng) -> ActivationSpec:
    mu = Fraction(int(rng.integers(1, 5)), 4)
    L = mu + Fraction(int(rng.integers(0, 9)), 4)
    k = int(rng.integers(1, 4))
    zs = sorted({Fraction(int(v), 4) for v in rng.integers(-8, 9, size=k)})
    slopes = [mu + (L - mu) * Fraction(int(rng.integers(0, 5)), 4) for _ in range(len(zs) + 1)]
    pts = [(zs[0], Fraction(int(rng.integers(-4, 5)), 4))]
    for z, s in zip(zs[1:], slopes[1:-1]):
        pts.append((z, pts[-1][1] + s * (z - pts[-1][0])))
    return ActivationSpec.piecewise(pts, slopes[0], slopes[-1], mu, L)


def _bounds_glm_item(args):
    seed, idx = args
    rng = _rng(seed, 10_000 + idx)
    d, phi, w, rp, rw = _random_embedding(rng)
    act = _random_activation(rng)
    values = [[act.exact(_inner(p, q)) for q in w] for p in phi]
    table = FunctionClassTable.from_matrix(values, kind=REAL)
    cert = EmbeddingCertificate(d, [[float(v) for v in r] for r in phi],
                                [[float(v) for v in r] for r in w], act, rp, rw, 1e-9)
    eps = _random_eps(rng, rp * rw * float(act.L))
    value = _sup_edim(table, eps)
    bound = bound_claim_b3(d, rp, rw, act.mu, act.L, eps)
    slopes_ok = all(act.mu <= s <= act.L for s in act.slopes())
    return {"family": "piecewise", "instance": idx, "d": d, "points": table.n_points,
            "functions": table.n_functions, "eps": str(eps), "edim": value, "bound": bound,
            "cert_ok": int(verify_embedding(table, cert).ok and slopes_ok),
            "ok": int(value <= bound)}


def suite_bounds(rep: SuiteReport, seed: int, threads: int) -> None:
    ident = _pmap(_bounds_identity_item, [(seed, i) for i in range(200)], threads)
    glm = _pmap(_bounds_glm_item, [(seed, i) for i in range(200)], threads)
    rep.rows = ident + glm
    rep.check("all 400 certificates verify", all(r["cert_ok"] for r in rep.rows))
    rep.check("identity classes: eluder value <= linear bound",
              all(r["ok"] for r in ident), f"{sum(1 - r['ok'] for r in ident)} violations")
    rep.check("slope-bounded classes: eluder value <= activation bound",
              all(r["ok"] for r in glm), f"{sum(1 - r['ok'] for r in glm)} violations")
    rng = _rng(seed, 99_999)
    outcomes = {HOLDS: 0, "vacuous": 0, VIOLATED: 0}
    for _ in range(10_000):
        alpha = Fraction(float(rng.uniform(0, 10))).limit_denominator(10 ** 6) or Fraction(1, 10 ** 6)
        beta = alpha + Fraction(float(rng.uniform(0, 100 - float(alpha)))).limit_denominator(10 ** 6)
        if beta <= alpha:
            beta = alpha + Fraction(1, 10 ** 6)
        k = int(rng.integers(1, 51))
        outcomes[lemma_b1_check(alpha, beta, k)] += 1
    rep.rows.append({"family": "lemma-b1", "instance": "10000 samples",
                     "edim": outcomes[HOLDS], "bound": outcomes["vacuous"],
                     "ok": int(outcomes[VIOLATED] == 0)})
    rep.check("logarithmic inequality never violated in 10^4 samples",
              outcomes[VIOLATED] == 0, f"{outcomes}")


def _audit_row(label, table, ref):
    a = equivalence_audit(table, ref)
    return {"instance": label, "points": table.n_points, "functions": table.n_functions,
            "reference": _ref_label(ref),
            "edim": a.edim, "sdim": a.sdim, "tdim": a.tdim, "sandwich_ok": int(a.sandwich_ok),
            "clique": " ".join(map(str, a.clique)), "color": a.color or "",
            "extracted": a.extracted_length, "guaranteed": a.guaranteed,
            "extraction_ok": int(a.extraction_ok)}


def _equivalence_item(args):
    seed, idx = args
    table = _random_binary(_rng(seed, idx), 8, 8)
    return [_audit_row(f"random-{idx}", table, ref) for ref in _member_and_ones(table)]


def _fixtures():
    out = []
    for n in range(1, 9):
        out.append((f"thresholds-{n}", gen_thresholds(n)))
        out.append((f"singletons-{n}", gen_singletons(n)))
    for d in range(1, 4):
        out.append((f"parities-{d}", gen_parities(d)))
    return out


def suite_equivalence(rep: SuiteReport, seed: int, threads: int) -> None:
    rows = []
    for chunk in _pmap(_equivalence_item, [(seed, i) for i in range(1000)], threads):
        rows.extend(chunk)
    for label, table in _fixtures():
        for ref in _member_and_ones(table):
            rows.append(_audit_row(label, table, ref))
    table, witness = fig3_fixture()
    coloring = color_from_witness(table, witness)
    hit = find_mono_clique(coloring, 3)
    sub = extract_subsequence(table, witness, hit[0], hit[1]) if hit else None
    rows.append({"instance": "fig3", "points": 6, "functions": 6, "reference": "explicit",
                 "clique": " ".join(str(v + 1) for v in hit[0]) if hit else "",
                 "color": hit[1] if hit else "", "extracted": len(sub) if sub else 0,
                 "guaranteed": 2, "sandwich_ok": 1,
                 "extraction_ok": int(bool(sub) and verify_witness(table, sub).ok)})
    rep.rows = rows
    rep.check("max(sdim, tdim) <= edim <= 4^max on every table and reference",
              all(r["sandwich_ok"] for r in rows),
              f"{sum(1 - r['sandwich_ok'] for r in rows)} failures")
    rep.check("extraction from every maximum eluder witness verifies at the guaranteed size",
              all(r["extraction_ok"] for r in rows),
              f"{sum(1 - r['extraction_ok'] for r in rows)} failures")
    rep.check("six-step fixture extracts the red triangle {1, 5, 6} as a star sequence",
              hit is not None and hit[0] == (0, 4, 5) and hit[1] == RED
              and sub is not None and sub.kind == STAR, f"{hit}")


def suite_counterexample(rep: SuiteReport, seed: int, threads: int) -> None:
    ok = True
    eps = Fraction(1, 2)
    for N in (3, 8):
        table = gen_scale_counterexample(N, eps)
        ref = ReferenceFunction.constant(N, 0)
        cfg = ScaleSearchConfig(eps)
        reps = {k: dim_scale(table, ref, k, cfg) for k in KINDS}
        vals = tuple(reps[k].value for k in KINDS)
        verified = all(verify_witness(table, r.witness).ok for r in reps.values())
        rep.rows.append({"N": N, "eps": str(eps), "edim": vals[0], "sdim": vals[1],
                         "tdim": vals[2], "witnesses_verified": int(verified)})
        ok &= vals == (N, 2, 1) and verified
    rep.check("(edim, sdim, tdim) = (N, 2, 1) at eps = 1/2 for N = 3, 8", ok)


def _e3_item(args):
    seed, N, k = args
    table = sample_e_matrix(RandomConstructionConfig(N, seed))
    return count_valid_sequences(table, k).total


def suite_thm53(rep: SuiteReport, seed: int, threads: int) -> None:
    cfg = RandomConstructionConfig(16, seed, trials=100, target_c=3.0)
    try:
        table, sep, _ = search_separation_e(cfg, require_certified=True)
        found = True
    except Exception as exc:  # SearchFailure carries the closest sample
        sep, found = getattr(exc, "best", None), False
    if sep is not None:
        rep.rows.append({"part": "separation", **sep.to_json()})
    rep.check("N=16 sample with edim = 16 against +1 and certified max(sdim, tdim) <= 12 "
              "within 100 trials", found and sep.edim_ones == 16
              and max(sep.certified_sdim, sep.certified_tdim) <= 12,
              "" if sep is None else f"seed {sep.seed}")
    ok = True
    for k in (2, 3):
        totals = _pmap(_e3_item, [(seed + s, 8, k) for s in range(200)], threads)
        mean = float(np.mean(totals))
        _, bound = lemma_e3_bound(8, k)
        rep.rows.append({"part": "expectation", "N": 8, "k": k, "mean_count": mean,
                         "bound": bound, "seeds": 200})
        ok &= mean <= bound
    rep.check("mean sequence count <= 3 * 2^(-k(k-1)/2) N^k (N+1)^k at (8,2), (8,3)", ok)


def suite_thm55(rep: SuiteReport, seed: int, threads: int) -> None:
    table, pr = forster_after_repair(RandomConstructionConfig(64, seed))
    rep.rows.append(pr.to_json())
    rep.check("repaired N=64 table has eluder value <= 4 against +1 (exact search)",
              pr.edim_ones_after <= 4, f"value {pr.edim_ones_after}")
    rep.check("flip count below the pre-repair +1 count", pr.flips < pr.plus_before,
              f"{pr.flips} flips, {pr.plus_before} plus entries")


# ----------------------------------------------------------------- oracles

EXHAUSTIVE_ENTRIES = 10


def _comb_compare(table):
    """Mismatch labels between fast and naive searches on one binary table."""
    bad = []
    refs = _member_and_ones(table)
    for ref in refs:
        rv = ref.resolve(table)
        for kind in KINDS:
            fast = dim_comb(table, ref, kind).value
            if fast != naive_dimension(table, rv, kind):
                bad.append(f"{kind}@{_ref_label(ref)}")
            if kernels.BACKEND != "python":
                if fast != dim_comb(table, ref, kind, backend="python").value:
                    bad.append(f"{kind}@{_ref_label(ref)}:backend")
    if vcdim(table) != naive_vcdim(table):
        bad.append("vc")
    if ldim(table) != naive_ldim(table):
        bad.append("ldim")
    return bad


def _exhaustive_item(args):
    n, m, code = args
    vals = [[1 if (code >> (i * m + j)) & 1 else -1 for j in range(m)] for i in range(n)]
    return _comb_compare(FunctionClassTable.from_matrix(vals, kind="binary"))


def _sampled_item(args):
    seed, idx, n, m = args
    B = 2 * _rng(seed, idx).integers(0, 2, size=(n, m)) - 1
    return _comb_compare(FunctionClassTable.from_matrix(B.tolist(), kind="binary"))


SCALE_VALUES = tuple(Fraction(v, 4) for v in range(-6, 7))
SCALE_EPS = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def _scale_item(args):
    seed, idx = args
    rng = _rng(seed, 50_000 + idx)
    n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    vals = [[SCALE_VALUES[int(rng.integers(len(SCALE_VALUES)))] for _ in range(m)] for _ in range(n)]
    table = FunctionClassTable.from_matrix(vals, kind=REAL)
    eps = SCALE_EPS[int(rng.integers(len(SCALE_EPS)))]
    cfg = ScaleSearchConfig(eps, length_cap=6)
    refs = [ReferenceFunction.col(j) for j in range(m)] + [ReferenceFunction.constant(n, 0)]
    bad = 0
    for ref in refs:
        for kind in KINDS:
            if dim_scale(table, ref, kind, cfg).value != naive_dimension(
                    table, ref.resolve(table), kind, eps, cap=6):
                bad += 1
    return bad


def suite_oracles(rep: SuiteReport, seed: int, threads: int) -> None:
    comb_bad = 0
    comb_tables = 0
    for n in range(1, 6):
        for m in range(1, 7):
            if n * m <= EXHAUSTIVE_ENTRIES:
                items = [(n, m, c) for c in range(2 ** (n * m))]
                mode = "exhaustive"
                results = _pmap(_exhaustive_item, items, threads)
            else:
                items = [(seed, 1000 * n + 100 * m + t, n, m) for t in range(60)]
                mode = "sampled"
                results = _pmap(_sampled_item, items, threads)
            bad = sum(1 for r in results if r)
            comb_bad += bad
            comb_tables += len(items)
            rep.rows.append({"check": "combinatorial", "shape": f"{n}x{m}", "mode": mode,
                             "instances": len(items), "mismatches": bad})
    rep.check(f"combinatorial searches equal naive enumeration on {comb_tables} tables up to 5x6",
              comb_bad == 0, f"{comb_bad} mismatching tables")

    scale_bad = sum(_pmap(_scale_item, [(seed, i) for i in range(400)], threads))
    rep.rows.append({"check": "scale-sensitive", "shape": "<=4x4", "mode": "sampled",
                     "instances": 400, "mismatches": scale_bad})
    rep.check("scale-sensitive searches equal naive enumeration with cap 6 on tables up to 4x4",
              scale_bad == 0, f"{scale_bad} mismatches")

    rng = _rng(seed, 77_777)
    worst = 0.0
    count = 0
    for n in range(1, 9):
        for m in range(1, 9):
            for t in range(10):
                if t % 2:
                    A = rng.standard_normal((n, m))
                else:
                    A = 2.0 * rng.integers(0, 2, size=(n, m)) - 1
                worst = max(worst, abs(spectral_norm(A).value - svd_spectral_norm(A)))
                count += 1
    rep.rows.append({"check": "spectral", "shape": "<=8x8", "mode": "sampled",
                     "instances": count, "mismatches": int(worst > 1e-8), "max_error": worst})
    rep.check("power-iteration spectral norm within 1e-8 of the SVD on matrices up to 8x8",
              worst <= 1e-8, f"max error {worst:.3g}")

    clique_bad = 0
    rng = _rng(seed, 88_888)
    for t in range(300):
        m = int(rng.integers(1, 11))
        pairs = list(itertools.combinations(range(m), 2))
        bits = rng.integers(0, 2, size=len(pairs))
        colors = {p: ("blue" if b else "red") for p, b in zip(pairs, bits)}
        col = EdgeColoring(m, colors)
        for k in range(1, min(m, 5) + 1):
            if find_mono_clique(col, k) != naive_mono_clique(colors, m, k):
                clique_bad += 1
    rep.rows.append({"check": "clique", "shape": "m<=10", "mode": "sampled",
                     "instances": 300, "mismatches": clique_bad})
    rep.check("monochromatic clique search equals unpruned enumeration for m <= 10",
              clique_bad == 0, f"{clique_bad} mismatches")


_RUNNERS = {
    "prop23": suite_prop23, "thresholds": suite_thresholds, "parity": suite_parity,
    "relu": suite_relu, "linear-lb": suite_linear_lb, "bounds": suite_bounds,
    "equivalence": suite_equivalence, "counterexample": suite_counterexample,
    "thm53": suite_thm53, "thm55": suite_thm55, "oracles": suite_oracles,
}


def run_suite(name: str, out_dir: str | None = None, seed: int = 0, threads: int = 1,
              command=None) -> SuiteReport:
    """Run one suite, add the time-budget check, and write CSV plus manifest when asked."""
    if name not in _RUNNERS:
        raise InvalidParameter(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    manifest = RunManifest.start(command or ["repro", name], [seed], threads=threads)
    rep = SuiteReport(name, seeds=[seed])
    t0 = time.perf_counter()
    _RUNNERS[name](rep, seed, threads)
    rep.wall_time = time.perf_counter() - t0
    rep.check(f"finished within {LIMITS[name]} s", rep.wall_time < LIMITS[name],
              f"{rep.wall_time:.2f} s")
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        data = os.path.join(out_dir, f"{name}.csv")
        checks = os.path.join(out_dir, f"{name}.checks.csv")
        with open(data, "w", encoding="utf-8") as handle:
            handle.write(rep.to_csv())
        with open(checks, "w", encoding="utf-8") as handle:
            handle.write(rep.checks_csv())
        manifest.add_output(data)
        manifest.add_output(checks)
        manifest.write(manifest_path(data))
    return rep
