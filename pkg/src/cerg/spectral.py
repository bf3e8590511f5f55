"""Exact spectrum certification and the related identity checks.

A claimed spectrum is accepted only when (a) the product of the
nontrivial factors (A - theta_i I) equals ell*J entrywise, (b) no
drop-one sub-product already lands on a multiple of J, and (c) the
moment equations sum m_i theta_i^j = tr A^j hold for j = 0..d.  All of
it runs in integer arithmetic; rational claims are cleared by scaling.

The characteristic polynomial oracle is exact as well: it reduces the
matrix mod a fixed sequence of 26-bit primes, takes the Hessenberg char
poly of each image, and CRT-lifts the coefficients under a proven
Hadamard-style bound, so no float ever appears.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import Graph
from .regularity import NotEdgeRegular, NotRegular, matmul_chunked, profile


class Disconnected(ValueError):
    pass


class AnnihilationFailed(ValueError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class MomentMismatch(ValueError):
    def __init__(self, j, expected, got):
        super().__init__(f"moment j={j}: claimed {got}, trace gives {expected}")
        self.j = j


class MinimalityFailed(ValueError):
    def __init__(self, dropped):
        super().__init__(
            f"dropping eigenvalue {dropped} still annihilates onto a multiple of J"
        )
        self.dropped = dropped


class WrongEigenvalueCount(ValueError):
    pass


class ClaimInvalid(ValueError):
    """Claimed spectrum is structurally impossible for the graph."""


class NotAnEigenvalue(ValueError):
    pass


class TooLarge(ValueError):
    pass


CHAR_POLY_MAX_N = 512
_INT64_SAFE = 2**62


def _as_fraction_pairs(claimed):
    pairs = sorted(((Fraction(t), int(m)) for t, m in claimed), reverse=True)
    if len({t for t, _ in pairs}) != len(pairs):
        raise ValueError("claimed eigenvalues must be distinct")
    if any(m < 1 for _, m in pairs):
        raise ValueError("multiplicities must be positive")
    return pairs


def _exact_matmul(x, y):
    """Integer matrix product, escaping to Python ints if int64 could wrap."""
    n = x.shape[0]
    if x.dtype == np.int64 and y.dtype == np.int64:
        bx = int(np.abs(x).max(initial=0))
        by = int(np.abs(y).max(initial=0))
        if n * bx * by < _INT64_SAFE:
            return x @ y
    return x.astype(object) @ y.astype(object)


def _scaled_factor(a, theta: Fraction):
    """den*A - num*I as an exact integer matrix."""
    n = a.shape[0]
    m = a * theta.denominator
    idx = np.arange(n)
    m = m.copy()
    m[idx, idx] -= theta.numerator
    return m


@dataclass
class SpectrumCertificate:
    n: int
    k: Fraction
    eigenvalues: tuple[Fraction, ...]  # descending, theta_0 = k first
    multiplicities: tuple[int, ...]
    ell: Fraction
    checks: dict

    @property
    def distinct_count(self) -> int:
        return len(self.eigenvalues)

    def to_json_dict(self) -> dict:
        return {
            "eigs": [[t.numerator, t.denominator] for t in self.eigenvalues],
            "mults": list(self.multiplicities),
            "ell": [self.ell.numerator, self.ell.denominator],
            "checks": dict(self.checks),
        }

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh)


def claim_from_json(obj) -> list[tuple[Fraction, int]]:
    eigs = []
    for e in obj["eigs"]:
        if isinstance(e, (list, tuple)):
            eigs.append(Fraction(int(e[0]), int(e[1])))
        else:
            eigs.append(Fraction(int(e)))
    return list(zip(eigs, (int(m) for m in obj["mults"])))


def _traces(g: Graph, up_to: int, threads=None) -> list[int]:
    """[tr A^0, ..., tr A^up_to] exactly (up_to <= 4)."""
    a = g.adjacency_matrix()
    out = [g.n, 0]
    if up_to >= 2:
        out.append(int(a.sum()))
    if up_to >= 3:
        a2 = matmul_chunked(a, a, threads)
        out.append(int((a2 * a).sum()))
    if up_to >= 4:
        out.append(int((a2 * a2).sum()))
    return out[: up_to + 1]


def certify(g: Graph, claimed, threads: int | None = None) -> SpectrumCertificate:
    """Accept a claimed spectrum or raise with an exact witness."""
    regular, k = g.is_regular()
    if not regular:
        raise NotRegular("certify needs a regular graph")
    if not g.is_connected():
        raise Disconnected("certify needs a connected graph")
    pairs = _as_fraction_pairs(claimed)
    if sum(m for _, m in pairs) != g.n:
        raise MomentMismatch(0, g.n, sum(m for _, m in pairs))
    theta0, m0 = pairs[0]
    if theta0 != k or m0 != 1:
        raise ClaimInvalid(
            f"claim must lead with the valency {k} at multiplicity 1, got {theta0}^{m0}"
        )
    nontrivial = pairs[1:]
    d = len(nontrivial)
    if d > 4:
        raise WrongEigenvalueCount("more than 5 distinct eigenvalues is out of scope")

    # moments j = 0..d determine the multiplicities via a Vandermonde system
    traces = _traces(g, min(d, 4), threads)
    for j, tr in enumerate(traces):
        claimed_moment = sum(Fraction(m) * t**j for t, m in pairs)
        if claimed_moment != tr:
            raise MomentMismatch(j, tr, claimed_moment)

    if not nontrivial:  # only K_1 has a one-value spectrum
        return SpectrumCertificate(
            n=g.n,
            k=Fraction(k),
            eigenvalues=(Fraction(k),),
            multiplicities=(1,),
            ell=Fraction(0),
            checks={"annihilation": True, "moments": True, "minimality": True},
        )
    a = g.adjacency_matrix()
    ell = Fraction(1)
    for t, _ in nontrivial:
        ell *= k - t
    ell /= g.n
    scale = 1
    for t, _ in nontrivial:
        scale *= t.denominator
    rhs = ell * scale
    if rhs.denominator != 1:
        raise AnnihilationFailed(
            "scaled ell is not an integer, claim cannot annihilate",
            {"ell": [ell.numerator, ell.denominator]},
        )
    rhs = rhs.numerator

    prod = None
    for t, _ in nontrivial:
        f = _scaled_factor(a, t)
        prod = f if prod is None else _exact_matmul(prod, f)
    mismatch = prod != rhs
    if bool(np.asarray(mismatch).any()):
        pos = np.argwhere(np.asarray(mismatch))[0]
        i, j = int(pos[0]), int(pos[1])
        raise AnnihilationFailed(
            f"entry ({i}, {j}) of the annihilating product is {prod[i, j]}, expected {rhs}",
            {"entry": (i, j), "got": int(prod[i, j]), "expected": int(rhs)},
        )

    for drop in range(d):
        sub = None
        for idx, (t, _) in enumerate(nontrivial):
            if idx == drop:
                continue
            f = _scaled_factor(a, t)
            sub = f if sub is None else _exact_matmul(sub, f)
        if sub is None:  # single nontrivial factor: subproduct is I
            if g.n == 1:
                raise MinimalityFailed(str(nontrivial[drop][0]))
            continue
        flat = np.asarray(sub)
        if (flat == flat.flat[0]).all():
            raise MinimalityFailed(str(nontrivial[drop][0]))

    cert = SpectrumCertificate(
        n=g.n,
        k=Fraction(k),
        eigenvalues=tuple(t for t, _ in pairs),
        multiplicities=tuple(m for _, m in pairs),
        ell=ell,
        checks={"annihilation": True, "moments": True, "minimality": True},
    )
    return cert


# -- exact characteristic polynomial (modular Hessenberg + CRT)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_stream(start: int):
    p = start
    while True:
        if _is_probable_prime(p):
            yield p
        p -= 1


def _hessenberg_charpoly_mod(a: np.ndarray, p: int) -> np.ndarray:
    """char poly coefficients of a mod p, ascending, via Hessenberg form."""
    n = a.shape[0]
    h = np.mod(a, p).astype(np.int64)
    for c in range(n - 2):
        col = h[c + 1 :, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = c + 1 + int(nz[0])
        if piv != c + 1:
            h[[c + 1, piv], :] = h[[piv, c + 1], :]
            h[:, [c + 1, piv]] = h[:, [piv, c + 1]]
        inv = pow(int(h[c + 1, c]), p - 2, p)
        factors = (h[c + 2 :, c] * inv) % p
        h[c + 2 :, :] = (h[c + 2 :, :] - factors[:, None] * h[c + 1, :][None, :]) % p
        h[:, c + 1] = (h[:, c + 1] + h[:, c + 2 :] @ factors) % p
    # p_m(x) = (x - h[m,m]) p_{m-1} - sum_i h[i,m] (prod subdiag) p_{i-1}
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        hmm = int(h[m - 1, m - 1])
        prev = polys[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1 : m + 1] = prev[:m]
        cur[: m + 1] = (cur[: m + 1] - hmm * prev[: m + 1]) % p
        if m >= 2:
            weights = np.zeros(m - 1, dtype=np.int64)
            run = 1
            for i in range(m - 1, 0, -1):
                run = run * int(h[i, i - 1]) % p
                weights[i - 1] = int(h[i - 1, m - 1]) * run % p
            if weights.any():
                acc = weights @ polys[: m - 1, : m + 1]
                cur[: m + 1] = (cur[: m + 1] - acc) % p
        polys[m] = cur
    return polys[n]


def _crt_signed(residues: list[int], primes: list[int]) -> int:
    x = 0
    mod = 1
    for r, p in zip(residues, primes):
        diff = (r - x) % p
        t = diff * pow(mod % p, p - 2, p) % p
        x += mod * t
        mod *= p
    if x > mod // 2:
        x -= mod
    return x


def char_poly(g: Graph, threads: int | None = None) -> tuple[int, ...]:
    """Exact characteristic polynomial of A, coefficients ascending."""
    n = g.n
    if n > CHAR_POLY_MAX_N:
        raise TooLarge(f"n={n} exceeds the char_poly ceiling {CHAR_POLY_MAX_N}")
    if n == 0:
        return (1,)
    a = g.adjacency_matrix()
    k_max = max(1, max(g.degrees()))
    # |c_j| <= C(n, j) * k_max^(j/2) by Hadamard on principal minors
    bound_bits = n + math.ceil(n / 2 * math.log2(k_max)) + 2
    primes = []
    bits = 0
    stream = _prime_stream((1 << 26) - 1)
    while bits <= bound_bits:
        p = next(stream)
        primes.append(p)
        bits += math.log2(p)

    def work(p):
        return _hessenberg_charpoly_mod(a, p)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            images = list(pool.map(work, primes))
    else:
        images = [work(p) for p in primes]
    coeffs = []
    for j in range(n + 1):
        coeffs.append(_crt_signed([int(img[j]) for img in images], primes))
    assert coeffs[-1] == 1
    return tuple(coeffs)


def poly_from_spectrum(pairs) -> tuple[int, ...]:
    """prod (x - theta)^m as integer coefficients, ascending; thetas must
    be integers."""
    coeffs = [1]
    for theta, mult in pairs:
        t = int(theta)
        if t != theta:
            raise ValueError("only integer eigenvalues give an integer polynomial")
        for _ in range(int(mult)):
            nxt = [0] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= c * t
            coeffs = nxt
    return tuple(coeffs)


@dataclass
class CospectralReport:
    cospectral: bool
    method: str
    witness_power: int | None = None
    certificate: SpectrumCertificate | None = None

    def __bool__(self):
        return self.cospectral

    def to_json_dict(self):
        return {
            "cospectral": self.cospectral,
            "method": self.method,
            "witness_power": self.witness_power,
        }


def cospectral(g1: Graph, g2: Graph, claim=None, threads=None) -> CospectralReport:
    """Same spectrum, via characteristic polynomials (n <= 512) or via a
    shared certified claim (any size)."""
    if claim is not None:
        c1 = certify(g1, claim, threads)
        certify(g2, claim, threads)
        return CospectralReport(True, "shared-certificate", certificate=c1)
    if g1.n != g2.n:
        return CospectralReport(False, "order", witness_power=None)
    p1 = char_poly(g1, threads)
    p2 = char_poly(g2, threads)
    if p1 == p2:
        return CospectralReport(True, "char-poly")
    power = max(j for j in range(len(p1)) if p1[j] != p2[j])
    return CospectralReport(False, "char-poly", witness_power=power)


@dataclass
class IdentityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    equal: bool

    def to_json_dict(self):
        return {
            "name": self.name,
            "lhs": [self.lhs.numerator, self.lhs.denominator],
            "rhs": [self.rhs.numerator, self.rhs.denominator],
            "equal": self.equal,
        }


@dataclass
class TheoremIdentityReport:
    alpha: Fraction
    beta: Fraction
    gamma: int
    mu: int
    k: int
    n: int
    f1: Fraction
    f2: Fraction
    f3: Fraction
    f4: Fraction
    identities: list[IdentityCheck]
    sign_flipped: bool  # second identity holds with the opposite sign
    gamma_recomputed: Fraction
    alpha_recomputed: Fraction

    @property
    def ok(self) -> bool:
        first, second, third = self.identities
        return (
            first.equal
            and third.equal
            and (second.equal or self.sign_flipped)
            and self.gamma_recomputed == self.gamma
            and self.alpha_recomputed == self.alpha
        )

    def to_json_dict(self):
        return {
            "constants": {
                "alpha": [self.alpha.numerator, self.alpha.denominator],
                "beta": [self.beta.numerator, self.beta.denominator],
                "gamma": self.gamma,
                "mu": self.mu,
                "k": self.k,
                "n": self.n,
            },
            "f": [
                [f.numerator, f.denominator]
                for f in (self.f1, self.f2, self.f3, self.f4)
            ],
            "identities": [c.to_json_dict() for c in self.identities],
            "sign_flipped": self.sign_flipped,
            "pass": self.ok,
        }


def theorem33_identities(
    g: Graph, cert: SpectrumCertificate, alpha, beta, mu, gamma
) -> TheoremIdentityReport:
    """Evaluate the three four-eigenvalue identities exactly.

    The middle identity is usually written with the plain pairwise
    product sum on the right, but expanding the cubic shows the A-
    coefficient is its negation; both sides are reported verbatim and
    ``sign_flipped`` records that |lhs| = |rhs| with lhs = -rhs.
    """
    if cert.distinct_count != 4:
        raise WrongEigenvalueCount(
            f"need exactly 4 distinct eigenvalues, certificate has {cert.distinct_count}"
        )
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    k = cert.eigenvalues[0]
    t1, t2, t3 = cert.eigenvalues[1:]
    n = cert.n
    e1 = t1 + t2 + t3
    e2 = t1 * t2 + t1 * t3 + t2 * t3
    ell = cert.ell
    f1 = mu * (alpha - 1) + k - beta - gamma
    f2 = alpha - mu
    f3 = k * (k - 1 - alpha) + mu * alpha - gamma - mu * (n - k - 1)
    f4 = mu * (k - alpha) + gamma
    identities = [
        IdentityCheck("alpha-mu = e1", f2, e1, f2 == e1),
        IdentityCheck("mu(alpha-1)+k-beta-gamma = e2", f1, e2, f1 == e2),
        IdentityCheck("mu(k-alpha)+gamma = ell", f4, ell, f4 == ell),
    ]
    sign_flipped = (f1 == -e2) and (f1 != e2)
    gamma_re = mu * (e1 - k + mu) + ell
    alpha_re = e1 + mu
    return TheoremIdentityReport(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        mu=mu,
        k=int(k),
        n=n,
        f1=f1,
        f2=f2,
        f3=f3,
        f4=f4,
        identities=identities,
        sign_flipped=sign_flipped,
        gamma_recomputed=gamma_re,
        alpha_recomputed=alpha_re,
    )


@dataclass
class GoldbergReport:
    theta: Fraction
    theta2: Fraction
    lam: int
    k: int
    lhs: Fraction
    rhs: Fraction
    violated: bool

    def to_json_dict(self):
        return {
            "theta": [self.theta.numerator, self.theta.denominator],
            "theta2": [self.theta2.numerator, self.theta2.denominator],
            "lambda": self.lam,
            "k": self.k,
            "lhs": [self.lhs.numerator, self.lhs.denominator],
            "rhs": [self.rhs.numerator, self.rhs.denominator],
            "violated": self.violated,
        }


def _poly_eval_fraction(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def goldberg(
    g: Graph, theta, theta2, cert: SpectrumCertificate | None = None, threads=None
) -> GoldbergReport:
    """Evaluate the edge-regular eigenvalue-pair inequality exactly.

    theta and theta2 must be eigenvalues different from the valency;
    they are validated against the certificate when one is supplied and
    against the characteristic polynomial otherwise.
    """
    theta = Fraction(theta)
    theta2 = Fraction(theta2)
    if theta == theta2:
        raise ValueError("the two eigenvalues must be distinct")
    prof = profile(g, threads)
    if not prof.regular:
        raise NotRegular("graph is not regular")
    if len(prof.lambda_multiset) != 1:
        raise NotEdgeRegular("lambda is not constant over edges")
    lam = next(iter(prof.lambda_multiset))
    k = prof.k
    for t in (theta, theta2):
        if t == k:
            raise NotAnEigenvalue(f"{t} is the valency, not an admissible choice")
        if cert is not None:
            if t not in cert.eigenvalues:
                raise NotAnEigenvalue(f"{t} is not in the certificate")
        else:
            if _poly_eval_fraction(char_poly(g, threads), t) != 0:
                raise NotAnEigenvalue(f"{t} is not a root of the characteristic polynomial")
    c = Fraction(k, lam + 1)
    lhs = (theta + c) * (theta2 + c)
    rhs = Fraction(-k * lam * (k - lam - 1), (lam + 1) ** 2)
    return GoldbergReport(theta, theta2, lam, k, lhs, rhs, lhs < rhs)


@dataclass
class Eq1Report:
    residual: Fraction
    position: tuple[int, int] | None

    @property
    def ok(self) -> bool:
        return self.residual == 0

    def to_json_dict(self):
        return {
            "residual": [self.residual.numerator, self.residual.denominator],
            "position": list(self.position) if self.position else None,
            "pass": self.ok,
        }


def eq1_residual(g: Graph, cert: SpectrumCertificate, threads=None) -> Eq1Report:
    """Largest entry of A^3 - e1 A^2 + e2 A - e3 I - ell J, exactly."""
    if cert.distinct_count != 4:
        raise WrongEigenvalueCount(
            f"need exactly 4 distinct eigenvalues, certificate has {cert.distinct_count}"
        )
    t1, t2, t3 = cert.eigenvalues[1:]
    e1 = t1 + t2 + t3
    e2 = t1 * t2 + t1 * t3 + t2 * t3
    e3 = t1 * t2 * t3
    ell = cert.ell
    den = math.lcm(
        e1.denominator, e2.denominator, e3.denominator, ell.denominator
    )
    a = g.adjacency_matrix()
    a2 = matmul_chunked(a, a, threads)
    a3 = matmul_chunked(a2, a, threads)
    n = g.n
    resid = den * a3 - int(e1 * den) * a2 + int(e2 * den) * a
    idx = np.arange(n)
    resid = resid.copy()
    resid[idx, idx] -= int(e3 * den)
    resid -= int(ell * den)
    worst = int(np.abs(resid).max())
    if worst == 0:
        return Eq1Report(Fraction(0), None)
    pos = np.argwhere(np.abs(resid) == worst)[0]
    value = Fraction(int(resid[pos[0], pos[1]]), den)
    return Eq1Report(value, (int(pos[0]), int(pos[1])))
