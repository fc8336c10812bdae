"""Generalized-rank certificates, spectral sign-rank lower bounds and eluder upper bounds.

A certificate realises every table entry as ``sigma(<w(f), phi(x)>)`` with
row norms of ``phi`` and ``w`` bounded by ``R_phi`` and ``R_w``.  Verifying a
certificate gives an upper bound on the rank for that activation; the
spectral bound ``sqrt(mn) / ||A||`` gives a lower bound on the sign rank.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares, linprog

from .classes import REAL, FunctionClassTable, _as_fraction
from .errors import InvalidCertificate, InvalidParameter, ParseError, WrongKind

IDENTITY = "identity"
SIGN = "sign"
RELU = "relu"
PIECEWISE = "piecewise-linear"
FORMS = (IDENTITY, SIGN, RELU, PIECEWISE)

NORM_SLACK = 1e-12
E = math.e


# ---------------------------------------------------------------- activations

@dataclass(frozen=True)
class ActivationSpec:
    """An activation and the slope bounds it is claimed to satisfy.

    Piecewise-linear activations interpolate ``breakpoints`` (strictly
    increasing ``z``) and continue linearly with ``left_slope`` and
    ``right_slope`` outside them.  Breakpoints are stored as exact fractions so
    tables generated from them stay exact.
    """

    form: str
    breakpoints: tuple = ()
    left_slope: Fraction = Fraction(0)
    right_slope: Fraction = Fraction(0)
    mu: Fraction = Fraction(0)
    L: Fraction = Fraction(1)

    def __post_init__(self):
        if self.form not in FORMS:
            raise InvalidParameter(f"unknown activation form {self.form!r}")
        bps = tuple((_as_fraction(z), _as_fraction(s)) for z, s in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        for name in ("left_slope", "right_slope", "mu", "L"):
            object.__setattr__(self, name, _as_fraction(getattr(self, name)))
        if self.form == PIECEWISE:
            if not bps:
                raise InvalidParameter("piecewise-linear activation needs at least one breakpoint")
            if any(b[0] >= a[0] for a, b in zip(bps[1:], bps)):
                raise InvalidParameter("breakpoints must be strictly increasing")
        if self.mu < 0 or self.L <= 0:
            raise InvalidParameter("slope bounds need mu >= 0 and L > 0")

    @classmethod
    def identity(cls) -> "ActivationSpec":
        return cls(IDENTITY, mu=1, L=1)

    @classmethod
    def sign(cls) -> "ActivationSpec":
        return cls(SIGN, mu=0, L=1)

    @classmethod
    def relu(cls, mu=0, L=1) -> "ActivationSpec":
        return cls(RELU, mu=mu, L=L)

    @classmethod
    def piecewise(cls, breakpoints, left_slope, right_slope, mu, L) -> "ActivationSpec":
        return cls(PIECEWISE, tuple(breakpoints), left_slope, right_slope, mu, L)

    def slopes(self) -> list[Fraction] | None:
        """Every chord slope between breakpoints plus the terminal slopes; None if unbounded."""
        if self.form == IDENTITY:
            return [Fraction(1)]
        if self.form == RELU:
            return [Fraction(0), Fraction(1)]
        if self.form == SIGN:
            return None
        bps = self.breakpoints
        chords = [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(bps, bps[1:])]
        return [self.left_slope, *chords, self.right_slope]

    @property
    def strictly_monotone(self) -> bool:
        s = self.slopes()
        return s is not None and all(v > 0 for v in s)

    def exact(self, z: Fraction) -> Fraction:
        """Exact value at a rational argument."""
        z = _as_fraction(z)
        if self.form == IDENTITY:
            return z
        if self.form == RELU:
            return max(z, Fraction(0))
        if self.form == SIGN:
            return Fraction((z > 0) - (z < 0))
        bps = self.breakpoints
        if z <= bps[0][0]:
            return bps[0][1] + self.left_slope * (z - bps[0][0])
        if z >= bps[-1][0]:
            return bps[-1][1] + self.right_slope * (z - bps[-1][0])
        for (z0, s0), (z1, s1) in zip(bps, bps[1:]):
            if z0 <= z <= z1:
                return s0 + (s1 - s0) * (z - z0) / (z1 - z0)
        raise AssertionError("unreachable")  # pragma: no cover

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.form == IDENTITY:
            return z
        if self.form == RELU:
            return np.maximum(z, 0.0)
        if self.form == SIGN:
            return np.sign(z)
        zs = np.array([float(b[0]) for b in self.breakpoints])
        ss = np.array([float(b[1]) for b in self.breakpoints])
        out = np.interp(z, zs, ss)
        lo, hi = z < zs[0], z > zs[-1]
        out = np.where(lo, ss[0] + float(self.left_slope) * (z - zs[0]), out)
        return np.where(hi, ss[-1] + float(self.right_slope) * (z - zs[-1]), out)

    def inverse(self, y: float, iterations: int = 200) -> float:
        """Preimage of ``y`` by bisection; only defined for strictly increasing activations."""
        if not self.strictly_monotone:
            raise InvalidParameter(f"{self.form} activation is not invertible")
        lo, hi = -1.0, 1.0
        while float(self(lo)) > y:
            lo *= 2
        while float(self(hi)) < y:
            hi *= 2
        for _ in range(iterations):
            mid = (lo + hi) / 2
            if float(self(mid)) < y:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2

    def to_json(self) -> dict:
        doc = {"form": self.form, "mu": _num(self.mu), "L": _num(self.L)}
        if self.form == PIECEWISE:
            doc["breakpoints"] = [[_num(z), _num(s)] for z, s in self.breakpoints]
            doc["left_slope"] = _num(self.left_slope)
            doc["right_slope"] = _num(self.right_slope)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "ActivationSpec":
        try:
            return cls(
                doc["form"],
                tuple(tuple(_parse_num(v) for v in bp) for bp in doc.get("breakpoints", ())),
                _parse_num(doc.get("left_slope", 0)),
                _parse_num(doc.get("right_slope", 0)),
                _parse_num(doc.get("mu", 0)),
                _parse_num(doc.get("L", 1)),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad activation document: {exc}") from None


def _num(q: Fraction):
    """JSON number when its decimal form reads back exactly, otherwise a "p/q" string."""
    if q.denominator == 1:
        return int(q)
    f = float(q)
    return f if Fraction(repr(f)) == q else f"{q.numerator}/{q.denominator}"


def _parse_num(v) -> Fraction:
    return Fraction(v) if isinstance(v, str) else _as_fraction(v)


def slope_check(spec: ActivationSpec) -> bool:
    """True iff every chord slope lies in ``[mu, L]``.

    For a piecewise-linear function the extreme chord slopes are attained on
    single pieces, so checking consecutive breakpoints and the two terminal
    slopes covers every pair ``z < z'``.
    """
    slopes = spec.slopes()
    if slopes is None:
        return False
    return all(spec.mu <= s <= spec.L for s in slopes)


def clamped_exp_activation(grid_bits: int = 10) -> ActivationSpec:
    """``exp`` on ``[0, 1]`` sampled on a dyadic grid, extended with slope 1 below and ``e`` above."""
    n = 1 << grid_bits
    bps = [(Fraction(i, n), Fraction(math.exp(i / n))) for i in range(n + 1)]
    e = Fraction(E)
    bps[-1] = (Fraction(1), e)
    return ActivationSpec.piecewise(bps, 1, e, 1, e)


# --------------------------------------------------------------- certificates

@dataclass
class EmbeddingCertificate:
    d: int
    phi: np.ndarray
    w: np.ndarray
    activation: ActivationSpec
    R_phi: float
    R_w: float
    tol: float = 0.0

    def __post_init__(self):
        self.phi = np.atleast_2d(np.asarray(self.phi, dtype=float))
        self.w = np.atleast_2d(np.asarray(self.w, dtype=float))
        if self.d < 1 or self.phi.shape[1] != self.d or self.w.shape[1] != self.d:
            raise InvalidCertificate(
                f"feature and weight maps must have {self.d} columns, got "
                f"{self.phi.shape[1]} and {self.w.shape[1]}")
        if self.R_phi <= 0 or self.R_w <= 0 or self.tol < 0:
            raise InvalidCertificate("norm budgets must be positive and tolerance nonnegative")

    def inner(self) -> np.ndarray:
        """``inner[x, f] = <w(f), phi(x)>``."""
        return self.phi @ self.w.T

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "phi": self.phi.tolist(),
            "w": self.w.tolist(),
            "activation": self.activation.to_json(),
            "R_phi": float(self.R_phi),
            "R_w": float(self.R_w),
            "tol": float(self.tol),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EmbeddingCertificate":
        try:
            return cls(int(doc["d"]), doc["phi"], doc["w"],
                       ActivationSpec.from_json(doc["activation"]),
                       float(doc["R_phi"]), float(doc["R_w"]), float(doc.get("tol", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad certificate document: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class EmbeddingVerdict:
    ok: bool
    worst_residual: float
    location: tuple[int, int] | None = None
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_embedding(table: FunctionClassTable, cert: EmbeddingCertificate) -> EmbeddingVerdict:
    """Check norms and every entry; sign certificates must get every sign strictly right."""
    if cert.phi.shape[0] != table.n_points or cert.w.shape[0] != table.n_functions:
        raise InvalidCertificate(
            f"certificate covers {cert.phi.shape[0]}x{cert.w.shape[0]}, table is "
            f"{table.n_points}x{table.n_functions}")
    A = table.to_numpy()
    Z = cert.inner()
    if cert.activation.form == SIGN:
        resid = np.where(np.sign(Z) == A, 0.0, np.abs(A - np.sign(Z)) + (Z == 0))
        ok_entries = bool(np.all(resid == 0))
    else:
        resid = np.abs(A - cert.activation(Z))
        ok_entries = bool(np.all(resid <= cert.tol))
    loc = np.unravel_index(int(np.argmax(resid)), resid.shape)
    worst = float(resid[loc])
    location = (int(loc[0]), int(loc[1]))
    if not ok_entries:
        return EmbeddingVerdict(False, worst, location, f"entry {location} off by {worst:.3g}")
    pn = np.linalg.norm(cert.phi, axis=1)
    wn = np.linalg.norm(cert.w, axis=1)
    if pn.max() > cert.R_phi * (1 + NORM_SLACK):
        i = int(np.argmax(pn))
        return EmbeddingVerdict(False, worst, None, f"phi row {i} has norm {pn[i]:.6g} > R_phi")
    if wn.max() > cert.R_w * (1 + NORM_SLACK):
        j = int(np.argmax(wn))
        return EmbeddingVerdict(False, worst, None, f"w row {j} has norm {wn[j]:.6g} > R_w")
    return EmbeddingVerdict(True, worst, location)


def certificate_monotonicity_check(cert: EmbeddingCertificate, R_phi_new: float, R_w_new: float,
                                   table: FunctionClassTable | None = None) -> bool:
    """The same maps stay a certificate when both norm budgets grow."""
    if R_phi_new < cert.R_phi or R_w_new < cert.R_w:
        raise InvalidParameter("budgets may only be enlarged")
    bigger = EmbeddingCertificate(cert.d, cert.phi, cert.w, cert.activation,
                                  R_phi_new, R_w_new, cert.tol)
    if table is not None:
        return verify_embedding(table, bigger).ok
    pn = np.linalg.norm(bigger.phi, axis=1).max()
    wn = np.linalg.norm(bigger.w, axis=1).max()
    return bool(pn <= R_phi_new * (1 + NORM_SLACK) and wn <= R_w_new * (1 + NORM_SLACK))


def sign_certificate_from_monotone(table: FunctionClassTable,
                                   cert: EmbeddingCertificate) -> EmbeddingCertificate:
    """Turn a strictly monotone certificate of a binary table into a sign certificate.

    With ``t`` the zero of the activation, ``f(x) = sign(<w, phi> - t)``; the
    offset becomes one extra coordinate.
    """
    if not table.is_binary:
        raise WrongKind("sign certificates need a binary table")
    t = cert.activation.inverse(0.0)
    phi = np.hstack([cert.phi, np.ones((cert.phi.shape[0], 1))])
    w = np.hstack([cert.w, -t * np.ones((cert.w.shape[0], 1))])
    return EmbeddingCertificate(
        cert.d + 1, phi, w, ActivationSpec.sign(),
        math.hypot(cert.R_phi, 1.0), math.hypot(cert.R_w, t), 0.0)


def threshold_sign_certificate(n: int) -> EmbeddingCertificate:
    """Two-dimensional sign certificate for the threshold table on ``1..n``."""
    xs = np.arange(1, n + 1, dtype=float)
    ts = np.arange(1, n + 2, dtype=float)
    phi = np.column_stack([xs, np.ones(n)]) / math.hypot(n, 1)
    w = np.column_stack([np.ones(n + 1), 0.5 - ts])
    w /= np.linalg.norm(w, axis=1).max()
    return EmbeddingCertificate(2, phi, w, ActivationSpec.sign(), 1.0, 1.0, 0.0)


def relu_certificate(U, eps, R=2) -> EmbeddingCertificate:
    """ReLU certificate of dimension ``d + 1`` for the ridge functions on packed unit vectors.

    ``phi(x) = (x, 1) / sqrt(2)`` and ``w(f_u) = sqrt(2) * (R/2) * (u, -c)``, so
    ``<w, phi> = (R/2)(<u, x> - c)``.
    """
    eps, R = float(eps), float(R)
    c = 1 - 2 * eps / R
    X = np.array([[float(v) for v in u] for u in U])
    n, d = X.shape
    phi = np.hstack([X, np.ones((n, 1))]) / math.sqrt(2)
    w = math.sqrt(2) * (R / 2) * np.hstack([X, -c * np.ones((n, 1))])
    return EmbeddingCertificate(d + 1, phi, w, ActivationSpec.relu(), 1.0, R, 1e-9)


# ----------------------------------------------------------- spectral bounds

@dataclass(frozen=True)
class SpectralNorm:
    value: float
    tolerance: float
    iterations: int


def spectral_norm(A, max_iter: int = 200, rtol: float = 1e-12, squarings: int = 8) -> SpectralNorm:
    """Largest singular value by power iteration on the smaller Gram matrix.

    The Gram matrix is first squared a few times and the iteration starts
    from the heaviest column of that power.  Some column of ``G^(2^s)`` always
    has a component of at least ``1/sqrt(n)`` along the top eigenvector, so
    the start cannot be orthogonal to it, which a fixed vector such as
    all-ones can be for sign matrices.  ``tolerance`` comes from the final
    eigen-residual.
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0 or not np.any(A):
        return SpectralNorm(0.0, 0.0, 0)
    G = A.T @ A if A.shape[1] <= A.shape[0] else A @ A.T
    H = G / np.linalg.norm(G)
    for _ in range(squarings):
        H = H @ H
        H /= np.linalg.norm(H)
    v = H[:, int(np.argmax(np.linalg.norm(H, axis=0)))].copy()
    v /= np.linalg.norm(v)
    rho = float(v @ G @ v)
    it = 0
    for it in range(1, max_iter + 1):
        u = G @ v
        v = u / np.linalg.norm(u)
        new = float(v @ G @ v)
        done = abs(new - rho) <= rtol * abs(new)
        rho = new
        if done:
            break
    resid = float(np.linalg.norm(G @ v - rho * v))
    sigma = math.sqrt(max(rho, 0.0))
    tol = resid / sigma if sigma > 0 else 0.0
    return SpectralNorm(sigma, tol, it)


@dataclass(frozen=True)
class ForsterReport:
    value: float
    spectral_norm: float
    tolerance: float

    def to_json(self) -> dict:
        return {"forster_bound": self.value, "spectral_norm": self.spectral_norm,
                "tolerance": self.tolerance}


def forster_report(table: FunctionClassTable) -> ForsterReport:
    """``sqrt(mn) / ||A||``, a lower bound on the sign rank, with its numerical tolerance."""
    if not table.is_binary:
        raise WrongKind("the spectral sign-rank bound needs a binary table")
    m, n = table.shape
    s = spectral_norm(table.to_numpy())
    value = math.sqrt(m * n) / s.value
    # first-order propagation of the spectral tolerance
    tol = value * s.tolerance / s.value
    return ForsterReport(value, s.value, tol)


def forster_bound(table: FunctionClassTable) -> float:
    return forster_report(table).value


def numeric_rank(table_or_matrix, tol: float = 1e-9) -> int:
    """Number of singular values above ``tol`` times the largest."""
    if isinstance(table_or_matrix, FunctionClassTable):
        A = table_or_matrix.to_numpy()
    else:
        A = np.asarray(table_or_matrix, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


# ------------------------------------------------- one-dimensional relu check

def relu_1d_family(n: int) -> FunctionClassTable:
    """``f_i(x) = relu(x - x_{i-1})`` on points ``x_j = j / (n + 1)`` with ``x_0 = 0``."""
    if n < 1:
        raise InvalidParameter("n must be positive")
    xs = [Fraction(j, n + 1) for j in range(n + 1)]
    rows = [[max(xs[j] - xs[i - 1], Fraction(0)) for i in range(1, n + 1)] for j in range(1, n + 1)]
    return FunctionClassTable(
        tuple(f"x{j}" for j in range(1, n + 1)), tuple(f"f{i}" for i in range(1, n + 1)),
        tuple(tuple(r) for r in rows), REAL)


@dataclass(frozen=True)
class TriangularReport:
    zero_preimage: float
    upper_triangular: bool
    nonzero_diagonal: bool
    rank_inner: int
    rank_shifted: int

    @property
    def ok(self) -> bool:
        return self.upper_triangular and self.nonzero_diagonal


def triangular_rank_check(table: FunctionClassTable, activation: ActivationSpec,
                          tol: float = 1e-9) -> TriangularReport:
    """Rank forced on any certificate of ``table`` with a strictly monotone activation.

    A certificate must have ``<w(f), phi(x)> = sigma^{-1}(f(x))``.  For the
    one-dimensional relu family this inner-product matrix minus
    ``sigma^{-1}(0)`` is upper triangular with nonzero diagonal, so its rank,
    and hence the certificate dimension, is at least ``n - 1``.
    """
    if not activation.strictly_monotone:
        raise InvalidParameter("the check needs a strictly monotone activation")
    vals = table.to_numpy()
    inv = np.vectorize(activation.inverse)
    # rows indexed by function, columns by point
    A = inv(vals).T
    t = activation.inverse(0.0)
    B = A - t
    scale = max(1.0, float(np.abs(B).max()))
    lower = np.tril(B, -1)
    upper_tri = bool(np.all(np.abs(lower) <= tol * scale))
    diag = bool(np.all(np.abs(np.diag(B)) > tol * scale))
    return TriangularReport(t, upper_tri, diag, numeric_rank(A, tol), numeric_rank(B, tol))


# ------------------------------------------------------------ bound formulas

def bound_claim_b2(d, R_phi, R_w, eps) -> float:
    """Eluder upper bound for classes with a linear certificate: ``3e/(e-1) d ln(24 R^2 / eps^2)``."""
    _positive(d=d, R_phi=R_phi, R_w=R_w, eps=eps)
    R = float(R_phi) * float(R_w)
    if float(eps) >= R:
        raise InvalidParameter("the bound needs eps < R_phi * R_w")
    return 3 * E / (E - 1) * float(d) * math.log(24 * R * R / float(eps) ** 2)


def bound_claim_b3(d, R_phi, R_w, mu, L, eps) -> float:
    """Eluder upper bound for activations with slopes in ``[mu, L]``."""
    _positive(d=d, R_phi=R_phi, R_w=R_w, mu=mu, L=L, eps=eps)
    if float(mu) > float(L):
        raise InvalidParameter("need mu <= L")
    RL = float(R_phi) * float(R_w) * float(L)
    if float(eps) >= RL:
        raise InvalidParameter("the bound needs eps < R_phi * R_w * L")
    ratio = (float(L) / float(mu)) ** 2
    return 3 * E / (E - 1) * float(d) * ratio * math.log(24 * RL * RL / float(eps) ** 2)


def _positive(**kw):
    for k, v in kw.items():
        if not float(v) > 0:
            raise InvalidParameter(f"{k} must be positive")


VACUOUS = "vacuous"
HOLDS = "holds"
VIOLATED = "violated"


def lemma_b1_bound(alpha, beta) -> float:
    a, b = float(alpha), float(beta)
    return E / (E - 1) * (1 + a) / a * math.log(2 * b * (1 + a) / a)


def lemma_b1_check(alpha, beta, k) -> str:
    """If ``(1+alpha)^k <= 1 + beta k`` then ``k`` must respect the logarithmic bound."""
    a, b = _as_fraction(alpha), _as_fraction(beta)
    if k < 1 or a <= 0 or b <= 0:
        raise InvalidParameter("need k >= 1 and alpha, beta > 0")
    if (1 + a) ** int(k) > 1 + b * int(k):
        return VACUOUS
    return HOLDS if k <= lemma_b1_bound(a, b) else VIOLATED


# ----------------------------------------------------------- certificate search

def _identity_factorization(A: np.ndarray, d: int):
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    r = min(d, len(s))
    root = np.sqrt(s[:r])
    phi = np.zeros((A.shape[0], d))
    w = np.zeros((A.shape[1], d))
    phi[:, :r] = U[:, :r] * root
    w[:, :r] = Vt[:r].T * root
    return phi, w


def _max_margin_rows(fixed: np.ndarray, S: np.ndarray):
    """For each row of ``S`` find a vector with sign(<v, fixed_k>) = S[row, k] at max margin.

    Solved as one small LP per row over the box ``[-1, 1]^d``.
    """
    d = fixed.shape[1]
    out = np.zeros((S.shape[0], d))
    margins = np.zeros(S.shape[0])
    c = np.zeros(d + 1)
    c[-1] = -1.0
    bounds = [(-1.0, 1.0)] * d + [(None, 1.0)]
    for r in range(S.shape[0]):
        # margin - s_k <v, fixed_k> <= 0
        A_ub = np.hstack([-S[r][:, None] * fixed, np.ones((fixed.shape[0], 1))])
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(fixed.shape[0]), bounds=bounds, method="highs")
        if res.status == 0:
            out[r] = res.x[:d]
            margins[r] = res.x[-1]
    return out, margins


def _normalised(phi: np.ndarray, w: np.ndarray):
    pn = np.linalg.norm(phi, axis=1).max() or 1.0
    wn = np.linalg.norm(w, axis=1).max() or 1.0
    return phi / pn, w / wn


def embedding_search(table: FunctionClassTable, d: int, activation: ActivationSpec,
                     budget: int = 200, seed: int = 0) -> EmbeddingCertificate | None:
    """Look for a certificate of dimension ``d``; ``None`` is not a proof of nonexistence.

    The identity activation uses a truncated SVD.  Sign certificates come from
    alternating max-margin linear programs, real activations from
    least-squares fits, both with seeded random restarts.  ``budget`` counts
    candidate evaluations: LP rounds or residual evaluations.
    """
    if budget <= 0:
        raise InvalidParameter("budget must be positive")
    if d < 1:
        raise InvalidParameter("d must be positive")
    A = table.to_numpy()
    m, n = A.shape
    rng = np.random.Generator(np.random.Philox(seed))

    if activation.form == IDENTITY:
        phi, w = _identity_factorization(A, d)
        cert = EmbeddingCertificate(d, phi, w, activation,
                                    float(np.linalg.norm(phi, axis=1).max()) or 1.0,
                                    float(np.linalg.norm(w, axis=1).max()) or 1.0, 1e-6)
        return cert if verify_embedding(table, cert) else None

    if activation.form == SIGN:
        if not table.is_binary:
            raise WrongKind("sign certificates need a binary table")
        used = 0
        start = _identity_factorization(A, d)[0]
        while used < budget:
            # the first round starts from the top singular vectors, later ones at random
            phi = start if used == 0 else rng.standard_normal((m, d))
            for _ in range(20):
                w, mw = _max_margin_rows(phi, A.T)
                phi, mp = _max_margin_rows(w, A)
                used += 1
                phi_n, w_n = _normalised(phi, w)
                cert = EmbeddingCertificate(d, phi_n, w_n, activation, 1.0, 1.0, 0.0)
                if verify_embedding(table, cert):
                    return cert
                if used >= budget:
                    break
        return None

    used = 0
    target = 1e-6
    while used < budget:
        x0 = rng.standard_normal((m + n) * d)

        def resid(v):
            P = v[: m * d].reshape(m, d)
            W = v[m * d:].reshape(n, d)
            return (activation(P @ W.T) - A).ravel()

        nfev = max(1, min(budget - used, 500))
        res = least_squares(resid, x0, max_nfev=nfev, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        used += res.nfev
        P = res.x[: m * d].reshape(m, d)
        W = res.x[m * d:].reshape(n, d)
        cert = EmbeddingCertificate(d, P, W, activation,
                                    float(np.linalg.norm(P, axis=1).max()) or 1.0,
                                    float(np.linalg.norm(W, axis=1).max()) or 1.0, target)
        if verify_embedding(table, cert):
            return cert
    return None
