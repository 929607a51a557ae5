"""Sequence semantics: interlacing, sections, recurrence-generated
sequences, lifting sigma^d-solutions to sigma-solutions, and exact
verification of solution certificates.

Transcendental prefactors (Gamma-products, t^x, exp-integrals) are never
evaluated: a solution is carried as a rational vector part plus a
certificate pair (sigma-ratio, delta-ratio), so every check below is a
rational identity or exact evaluation over Q (possibly extended by the
tower generator with t specialized).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import sympy as sp

from .fields import (TRIVIAL_TOWER, Tower, delta, make_tower, mat_delta,
                     mat_inv, mat_reduce, mat_shift, shift,
                     sigma_power_matrix, t, theta, treduce, x)

__all__ = ["Seq", "FuncSeq", "SeqVec", "interlace", "section",
           "seq_from_recurrence", "lift_sigma_d_to_sigma",
           "HypCert", "LiouvilleSolution", "VerifyResult",
           "verify_certificates", "verify_numeric_window",
           "first_safe_index", "PoleError"]


class PoleError(Exception):
    """Evaluation hit a pole; .index carries the offending integer."""

    def __init__(self, message, index):
        super().__init__(f"{message} at index {index}")
        self.index = index


# ---------------------------------------------------------------------------
# sequences

class Seq:
    """A sequence j -> value; subclasses implement value(j)."""

    def value(self, j: int):
        raise NotImplementedError


class FuncSeq(Seq):
    def __init__(self, fn: Callable[[int], object]):
        self.fn = fn

    def value(self, j: int):
        return self.fn(j)


class SeqVec(Seq):
    """Vector sequence generated by W(j+1) = A(j) W(j) from W(N) = base.

    Values below the start index are zero (the lift construction only
    constrains a sequence from some index on).  Values are cached; a
    single SeqVec is not safe for concurrent mutation.
    """

    def __init__(self, A: sp.Matrix, N: int, base: sp.Matrix,
                 t0: Optional[sp.Rational] = None,
                 tower: Tower = TRIVIAL_TOWER):
        self.A = A
        self.N = N
        self.t0 = t0
        self.tower = tower if t0 is None else _evaluate_tower(tower, t0)
        self._cache = [self._prep(base)]

    def _prep(self, v):
        if self.t0 is not None:
            v = v.applyfunc(lambda e: e.subs(t, self.t0))
        return mat_reduce(v, self.tower)

    def _matrix_at(self, j: int) -> sp.Matrix:
        out = sp.zeros(*self.A.shape)
        for i in range(self.A.shape[0]):
            for k in range(self.A.shape[1]):
                e = sp.cancel(self.A[i, k])
                if self.t0 is not None:
                    num, den = sp.fraction(sp.together(e))
                    dv = den.subs({x: j, t: self.t0})
                    if sp.simplify(dv) == 0:
                        raise PoleError("pole of the recurrence matrix", j)
                    e = sp.cancel(num.subs({x: j, t: self.t0}) / dv)
                else:
                    num, den = sp.fraction(sp.together(e))
                    dv = sp.cancel(den.subs(x, j))
                    if treduce(dv, self.tower) == 0:
                        raise PoleError("pole of the recurrence matrix", j)
                    e = sp.cancel(num.subs(x, j) / dv)
                out[i, k] = treduce(e, self.tower)
        return out

    def value(self, j: int) -> sp.Matrix:
        if j < self.N:
            return sp.zeros(self._cache[0].shape[0], 1)
        k = j - self.N
        while len(self._cache) <= k:
            jj = self.N + len(self._cache) - 1
            Aj = self._matrix_at(jj)
            self._cache.append(mat_reduce(Aj * self._cache[-1], self.tower))
        return self._cache[k]


def _evaluate_tower(tower: Tower, t0) -> Tower:
    if tower.trivial:
        return tower
    mp = sp.expand(tower.minpoly.subs(t, t0))
    return make_tower(mp)


def interlace(seqs: list) -> Seq:
    """b with b(d*n + i) = seqs[i](n)."""
    d = len(seqs)
    if d < 1:
        raise ValueError("need at least one sequence")

    def fn(j):
        n, i = divmod(j, d)
        return seqs[i].value(n)

    return FuncSeq(fn)


def section(seq: Seq, d: int, i: int) -> Seq:
    """Keep the residue class j = i mod d, zero elsewhere."""
    if not 0 <= i < d:
        raise ValueError("0 <= i < d required")

    def fn(j):
        v = seq.value(j)
        return v if j % d == i else v * 0

    return FuncSeq(fn)


def first_safe_index(A: sp.Matrix, B: sp.Matrix, V: sp.Matrix,
                     tower: Tower = TRIVIAL_TOWER) -> int:
    """Least N >= 1 with A(j), B(j) defined, det A(j) != 0 for all j >= N,
    V defined at N and V(N) != 0.

    Found by scanning the integer roots (in x) of every denominator and of
    the determinant numerator; t and theta stay symbolic, so a root must be
    a genuine rational-integer root of a coefficient-wise zero polynomial.
    """
    bad = 0
    polys = []
    for e in list(A) + list(B) + list(V):
        polys.append(sp.fraction(sp.together(sp.cancel(e)))[1])
    dA = treduce(A.det(method="berkowitz"), tower)
    num, den = sp.fraction(sp.together(dA))
    polys.extend([num, den])
    for p in polys:
        p = sp.expand(p)
        if x not in p.free_symbols:
            continue
        for r in _integer_x_roots(p):
            bad = max(bad, r)
    N = max(1, bad + 1)
    while all(treduce(v.subs(x, N), tower) == 0 for v in V):
        N += 1
    return N


def _integer_x_roots(p):
    """Integer roots in x of a polynomial whose coefficients may contain t
    or theta: x0 counts only if every (t, theta)-coefficient slice of p
    vanishes at x0; candidates come from one nonzero slice."""
    gens = tuple(sorted((s for s in p.free_symbols if s != x), key=str))
    if not gens:
        return sorted(int(r) for r in sp.Poly(p, x).ground_roots()
                      if sp.sympify(r).is_Integer)
    Pall = sp.Poly(sp.expand(p), x, *gens)
    groups: dict = {}
    for mono, coeff in zip(Pall.monoms(), Pall.coeffs()):
        key = mono[1:]
        groups[key] = groups.get(key, sp.Integer(0)) + coeff * x ** mono[0]
    first = next(g for g in groups.values() if g != 0)
    cand = set()
    if x not in first.free_symbols:
        return []
    for r in sp.Poly(first, x).ground_roots():
        if sp.sympify(r).is_Integer and all(
                sp.expand(g.subs(x, r)) == 0 for g in groups.values()):
            cand.add(int(r))
    return sorted(cand)


def seq_from_recurrence(A: sp.Matrix, N: int, V_N: sp.Matrix,
                        t0=None, tower: Tower = TRIVIAL_TOWER) -> SeqVec:
    """SeqVec with W(N) = V_N and W(j+1) = A(j) W(j)."""
    return SeqVec(A, N, V_N, t0=t0, tower=tower)


def lift_sigma_d_to_sigma(V: sp.Matrix, ratio, d: int, A: sp.Matrix,
                          B: sp.Matrix, N: Optional[int] = None,
                          tower: Tower = TRIVIAL_TOWER,
                          check_terms: int = 30) -> SeqVec:
    """Lift a hypergeometric solution V*h (sigma^d(h) = ratio*h) of the
    sigma^d-system to a solution sequence of the sigma-system:
    W(N) = V(N) (prefactor normalized to h(N) = 1), W(j+1) = A(j) W(j).

    Cross-checked against the section-sum construction
    U = V_0 + ... + V_{d-1}, V_i(j) = A(j)^{-1} V_{i-1}(j+1), on a
    check_terms window; disagreement is a hard internal error.
    """
    if N is None:
        N = first_safe_index(A, B, V, tower)
    W = SeqVec(A, N, V.subs(x, N), tower=tower)
    if d == 1:
        return W
    # section-sum construction: V0 lives on the class j = N mod d, with the
    # prefactor h normalized by h(N) = 1 so V0(N + d*s) is rational
    v0_cache: dict = {}

    def v0(j):
        if j < N or (j - N) % d != 0:
            return V * 0
        if j not in v0_cache:
            s = (j - N) // d
            h = sp.Integer(1)
            for u in range(s):
                h = treduce(h * ratio.subs(x, N + d * u), tower)
            v0_cache[j] = mat_reduce(V.subs(x, j) * h, tower)
        return v0_cache[j]

    ainv_cache: dict = {}

    def ainv(j):
        if j not in ainv_cache:
            ainv_cache[j] = mat_inv(mat_reduce(A.subs(x, j), tower), tower)
        return ainv_cache[j]

    V0 = FuncSeq(v0)
    comps = [V0]
    for i in range(1, d):
        prev = comps[-1]
        cache: dict = {}

        def vi(j, prev=prev, cache=cache):
            if j not in cache:
                cache[j] = mat_reduce(ainv(j) * prev.value(j + 1), tower)
            return cache[j]

        comps.append(FuncSeq(vi))
    for j in range(N, N + check_terms):
        U = sum((c.value(j) for c in comps), sp.zeros(V.shape[0], 1))
        if not all(treduce(e, tower) == 0 for e in (U - W.value(j))):
            raise AssertionError(
                f"lift cross-check failed at index {j}: recurrence and "
                "section-sum constructions disagree")
    return W


# ---------------------------------------------------------------------------
# solution certificates

@dataclass
class HypCert:
    sigma_ratio: sp.Expr
    sigma_step: int
    delta_ratio: sp.Expr


@dataclass
class LiouvilleSolution:
    """kind 'Hypergeometric': W, cert describe W*h with sigma^m(h) =
    sigma_ratio*h and delta(h) = delta_ratio*h.  kind 'Interlaced':
    components [(shift class i, W_i, cert_i)] of sigma^d-solutions whose
    lifts interlace to solutions of the sigma-system."""
    kind: str
    W: Optional[sp.Matrix] = None
    cert: Optional[HypCert] = None
    period: int = 1
    components: list = field(default_factory=list)
    tower: Tower = TRIVIAL_TOWER


@dataclass
class VerifyResult:
    ok: bool
    failures: list  # human-readable identity names

    def __bool__(self):
        return self.ok


def _check_pair(A, B, W, cert: HypCert, tower: Tower, label: str):
    failures = []
    m = cert.sigma_step
    Am = sigma_power_matrix(A, m, tower)
    lhs = mat_shift(W, m) * cert.sigma_ratio - Am * W
    if not all(treduce(e, tower) == 0 for e in lhs):
        failures.append(f"{label}: sigma identity sigma^{m}(W)*r = A_{m}*W")
    lhs = mat_delta(W, tower) + cert.delta_ratio * W - B * W
    if not all(treduce(e, tower) == 0 for e in lhs):
        failures.append(f"{label}: delta identity delta(W) + c*W = B*W")
    return failures


def verify_certificates(system, sol: LiouvilleSolution) -> VerifyResult:
    """Exact identity check of a solution against sigma(Y)=AY, delta(Y)=BY.

    `system` needs attributes A and B.  Hypergeometric solutions check the
    two identities directly; Interlaced ones check every component against
    the sigma^period-system."""
    A, B = system.A, system.B
    tower = sol.tower
    failures = []
    if sol.kind == "Hypergeometric":
        failures += _check_pair(A, B, sol.W, sol.cert, tower, "solution")
    elif sol.kind == "Interlaced":
        for i, W, cert in sol.components:
            failures += _check_pair(A, B, W, cert, tower, f"component {i}")
    else:
        failures.append(f"unknown solution kind {sol.kind!r}")
    return VerifyResult(not failures, failures)


def verify_numeric_window(system, sol: LiouvilleSolution, t0, terms: int = 30) -> VerifyResult:
    """Evaluate the sigma-relation at t = t0 for `terms` integer points.

    All arithmetic is exact over Q (extended by the tower generator with t
    specialized when the solution lives in an extension); the delta
    relation is checked symbolically by verify_certificates."""
    A, B = system.A, system.B
    tower = sol.tower
    failures = []
    parts = ([("solution", sol.W, sol.cert)] if sol.kind == "Hypergeometric"
             else [(f"component {i}", W, c) for i, W, c in sol.components])
    for label, W, cert in parts:
        m = cert.sigma_step
        Am = sigma_power_matrix(A, m, tower)
        etower = _evaluate_tower(tower, t0)
        # start past every pole visible after the specialization t = t0
        N = 1
        for e in list(Am) + list(W) + [cert.sigma_ratio]:
            den = sp.fraction(sp.together(sp.cancel(e)))[1]
            den = sp.expand(treduce(den.subs(t, t0), etower))
            if x in den.free_symbols:
                for r in _integer_x_roots(den):
                    N = max(N, r + m + 1)
        try:
            for j in range(N, N + terms):
                def ev(e):
                    num, den = sp.fraction(sp.together(sp.cancel(e)))
                    dv = treduce(den.subs({x: j, t: t0}), etower)
                    if dv == 0:
                        raise PoleError("pole during numeric verification", j)
                    return treduce(num.subs({x: j, t: t0}) / dv, etower)
                Wj = W.subs(x, j).applyfunc(ev)
                Wjm = W.subs(x, j + m).applyfunc(ev)
                Amj = Am.subs(x, j).applyfunc(ev)
                rj = ev(cert.sigma_ratio.subs(x, j))
                resid = Wjm * rj - Amj * Wj
                if not all(treduce(e, etower) == 0 for e in resid):
                    failures.append(
                        f"{label}: sigma relation fails at x={j}, t={t0}")
                    break
        except PoleError as err:
            failures.append(f"{label}: {err}")
    return VerifyResult(not failures, failures)
