"""Pole extraction and series expansion of monomialised sector integrands.

A sector integrand (monomial exponents a_i + b_i*eps per variable, factor
polynomials with positive constant term raised to d_j + f_j*eps) is first
split exactly: for every variable with a_i <= -1 the factor product is
Taylor-subtracted in that variable and the subtracted terms are integrated
with 1/(a+p+1+b*eps).  The result is a list of pieces, each an exact
rational function of eps times a residual integrand plus a record of pending
Taylor subtractions.  Pieces are then expanded order by order in eps into
sums of terms built from integer powers of the variables and factor
polynomials and nonnegative powers of their logarithms - the closure class
of rational functions and logarithms of rational functions with rational
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import log as _mlog

import numpy as np

from .epsilon import EpsExponent, EpsRat
from .errors import DivergenceError, FeynsecError
from .poly import Poly


def _poly_key(q: Poly):
    return tuple(sorted((e, str(c)) for e, c in q.coeffs.items()))


def _merge_factors(factors):
    """Canonical factor list; like polynomials merge, unit exponents drop."""
    acc: dict = {}
    for q, exp in factors:
        key = _poly_key(q)
        if key in acc:
            old_q, old_exp = acc[key]
            acc[key] = (old_q, old_exp + exp)
        else:
            acc[key] = (q, exp)
    out = []
    for key in sorted(acc):
        q, exp = acc[key]
        if exp.a == 0 and exp.b == 0:
            continue
        out.append((q, exp))
    return tuple(out)


@dataclass(frozen=True)
class Piece:
    """Exact eps-rational prefactor times a residual hypercube integrand.

    ``monomials[i]`` is None once variable i has been integrated out.
    ``subtractions`` lists (variable, depth) Taylor subtractions still to be
    applied to the factor product, in application order.
    """

    nvars: int
    pref: EpsRat
    monomials: tuple
    factors: tuple
    subtractions: tuple = ()


# ---------------------------------------------------------------------------
# exact pole extraction
# ---------------------------------------------------------------------------

def _dx_factor_terms(terms, i):
    """d/dx_i of a list of (EpsRat, factors) product terms."""
    out = []
    for pref, factors in terms:
        for k, (q, exp) in enumerate(factors):
            dq = q.derivative(i)
            if not dq:
                continue
            new = list(factors)
            new[k] = (q, exp + EpsExponent(-1, 0))
            new.append((dq, EpsExponent(1, 0)))
            out.append((pref.mul_linear(exp.a, exp.b), _merge_factors(new)))
    return out


def _set_zero_terms(terms, i):
    """Substitute x_i = 0; dead terms vanish, constant factors fold."""
    out = []
    for pref, factors in terms:
        dead = False
        new = []
        for q, exp in factors:
            q0 = q.set_zero(i)
            if not q0:
                dead = True
                break
            if q0.is_constant():
                c = q0.constant_term()
                if c == 1:
                    continue
                if exp.a:
                    pref = pref * (c ** exp.a)
                if exp.b:
                    new.append((Poly.constant(q.nvars, c), EpsExponent(0, exp.b)))
                continue
            new.append((q0, exp))
        if not dead:
            out.append((pref, _merge_factors(new)))
    return out


def extract_poles(sector) -> list[Piece]:
    """Split a monomialised sector into exactly-integrated pole pieces.

    Variables are processed in ascending index order; for a variable with
    monomial exponent a + b*eps and a <= -1 the Taylor terms of order
    p < |a| are integrated via 1/(a+p+1+b*eps) and the remainder keeps a
    subtraction marker of depth |a|.  Terms whose Taylor coefficient
    vanishes are dropped before the ``b = 0`` divergence check fires.
    """
    start = Piece(
        nvars=sector.nvars,
        pref=EpsRat.constant(getattr(sector, "prefactor", 1)),
        monomials=tuple(sector.monomials),
        factors=_merge_factors(sector.factors),
    )
    pieces = [start]
    for i in range(start.nvars):
        nxt: list[Piece] = []
        for piece in pieces:
            exp = piece.monomials[i]
            if exp is None or exp.a >= 0:
                nxt.append(piece)
                continue
            a, b = exp.a, exp.b
            depth = -a
            # Taylor terms integrated exactly
            terms = [(piece.pref, piece.factors)]
            for p in range(depth):
                coeff_terms = _set_zero_terms(terms, i)
                if coeff_terms:
                    if a + p + 1 == 0 and b == 0:
                        raise DivergenceError(
                            f"variable {i} carries x^{a} with no eps regulator")
                    inv_fact = Fraction(1, _factorial(p))
                    for pref, factors in coeff_terms:
                        mono = list(piece.monomials)
                        mono[i] = None
                        nxt.append(replace(
                            piece,
                            pref=pref * inv_fact * EpsRat.linear_inverse(a + p + 1, b),
                            monomials=tuple(mono),
                            factors=factors,
                        ))
                if p + 1 < depth:
                    terms = _dx_factor_terms(terms, i)
                    if not terms:
                        break
            nxt.append(replace(piece, subtractions=piece.subtractions + ((i, depth),)))
        pieces = nxt
    return pieces


def _factorial(p: int) -> int:
    out = 1
    for k in range(2, p + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# expansion terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    """coeff * prod x_i^xpows * prod log(x_i)^xlogs * prod Q^d * prod log(Q)^c."""

    coeff: Fraction
    xpows: tuple
    xlogs: tuple
    fpows: tuple  # ((Poly, int), ...)
    flogs: tuple  # ((Poly, int), ...)

    def key(self):
        return (self.xpows, self.xlogs,
                tuple((_poly_key(q), d) for q, d in self.fpows),
                tuple((_poly_key(q), c) for q, c in self.flogs))

    def scaled(self, c) -> "Term":
        return replace(self, coeff=self.coeff * c)


def _normalize_terms(terms) -> tuple:
    """Fold constants, expand positive factor powers into monomials, merge
    identical terms, drop exact zeros.

    After normalization only inverse factor powers remain, so denominators
    are explicit and cancellations between subtraction terms happen exactly.
    """
    folded = []
    for t in terms:
        coeff = t.coeff
        fpows, flogs = [], []
        numerator = None
        dead = False
        for q, d in t.fpows:
            if d == 0:
                continue
            if q.is_constant():
                coeff *= q.constant_term() ** d
            elif d > 0:
                power = q ** d
                numerator = power if numerator is None else numerator * power
            else:
                fpows.append((q, d))
        for q, c in t.flogs:
            if c == 0:
                continue
            if q.is_constant():
                if q.constant_term() == 1:
                    dead = True  # log 1 = 0 kills the term exactly
                    break
                flogs.append((q, c))
            else:
                flogs.append((q, c))
        if dead or coeff == 0:
            continue
        fpows.sort(key=lambda qd: (_poly_key(qd[0]), qd[1]))
        flogs.sort(key=lambda qc: (_poly_key(qc[0]), qc[1]))
        base = replace(t, coeff=coeff, fpows=tuple(fpows), flogs=tuple(flogs))
        if numerator is None:
            folded.append(base)
        else:
            for exps, c in numerator.coeffs.items():
                xp = tuple(p + e for p, e in zip(base.xpows, exps))
                folded.append(replace(base, coeff=base.coeff * c, xpows=xp))
    acc: dict = {}
    for t in folded:
        k = t.key()
        if k in acc:
            acc[k] = replace(acc[k], coeff=acc[k].coeff + t.coeff)
        else:
            acc[k] = t
    return tuple(sorted((t for t in acc.values() if t.coeff != 0),
                        key=lambda t: t.key()))


def _dx_term(t: Term, i: int) -> list[Term]:
    """d/dx_i of the factor part of a term (x-monomial and x-log parts of
    variable i are wrapper material and must not appear here)."""
    out = []
    for k, (q, d) in enumerate(t.fpows):
        dq = q.derivative(i)
        if not dq:
            continue
        fp = list(t.fpows)
        fp[k] = (q, d - 1)
        fp.append((dq, 1))
        out.append(replace(t, coeff=t.coeff * d, fpows=tuple(fp)))
    for k, (q, c) in enumerate(t.flogs):
        dq = q.derivative(i)
        if not dq:
            continue
        fl = list(t.flogs)
        fl[k] = (q, c - 1)
        fp = list(t.fpows) + [(dq, 1), (q, -1)]
        out.append(replace(t, coeff=t.coeff * c, fpows=tuple(fp), flogs=tuple(fl)))
    return out


def _term_set_zero(t: Term, i: int) -> Term | None:
    fpows, flogs = [], []
    coeff = t.coeff
    for q, d in t.fpows:
        q0 = q.set_zero(i)
        if not q0:
            return None
        fpows.append((q0, d))
    for q, c in t.flogs:
        q0 = q.set_zero(i)
        if not q0:
            return None  # log of zero cannot appear; factors have c > 0
        flogs.append((q0, c))
    return replace(t, coeff=coeff, fpows=tuple(fpows), flogs=tuple(flogs))


def _subtract_taylor(terms, i: int, depth: int) -> list[Term]:
    """Replace each term by (term - its Taylor polynomial in x_i up to depth-1).

    The x_i-monomial power and log(x_i) powers stay attached as a wrapper;
    only the factor product is expanded.
    """
    out = []
    for t in terms:
        out.append(t)
        current = [replace(t, coeff=Fraction(1))]
        base_coeff = t.coeff
        for p in range(depth):
            inv_fact = Fraction(1, _factorial(p))
            for d_term in current:
                at0 = _term_set_zero(d_term, i)
                if at0 is None or at0.coeff == 0:
                    continue
                xp = list(t.xpows)
                xp[i] += p
                out.append(replace(at0,
                                   coeff=-base_coeff * at0.coeff * inv_fact,
                                   xpows=tuple(xp)))
            if p + 1 < depth:
                current = [d for dt in current for d in _dx_term(dt, i)]
                if not current:
                    break
    return out


def expand_piece(piece: Piece, target_order: int) -> dict[int, tuple]:
    """Laurent-expand a piece; returns {order: normalized Term tuple}."""
    if piece.pref.is_zero():
        return {}
    low = piece.pref.lowest_order()
    if low > target_order:
        return {}
    depth = target_order - low

    xpows = tuple((m.a if m is not None else 0) for m in piece.monomials)
    zero = tuple(0 for _ in piece.monomials)
    fpows = tuple((q, exp.a) for q, exp in piece.factors if exp.a != 0)
    base = Term(coeff=Fraction(1), xpows=xpows, xlogs=zero, fpows=fpows, flogs=())
    series: dict[int, list[Term]] = {0: [base]}

    # log sources from x_i^{b*eps} factors
    for i, m in enumerate(piece.monomials):
        if m is None or m.b == 0:
            continue
        series = _convolve_log(series, depth, m.b,
                               lambda t, k, i=i: replace(
                                   t, xlogs=t.xlogs[:i] + (t.xlogs[i] + k,) + t.xlogs[i + 1:]))
    # log sources from Q^{f*eps} factors
    for q, exp in piece.factors:
        if exp.b == 0:
            continue
        series = _convolve_log(series, depth, exp.b,
                               lambda t, k, q=q: replace(t, flogs=t.flogs + ((q, k),)))

    for i, sub_depth in piece.subtractions:
        series = {k: _subtract_taylor(terms, i, sub_depth) for k, terms in series.items()}

    laurent = piece.pref.laurent(target_order)
    out: dict[int, list[Term]] = {}
    for o, c in laurent.items():
        if c == 0:
            continue
        for k, terms in series.items():
            if o + k > target_order:
                continue
            out.setdefault(o + k, []).extend(t.scaled(c) for t in terms)
    return {order: _normalize_terms(terms) for order, terms in sorted(out.items())
            if _normalize_terms(terms)}


def _convolve_log(series, depth, weight, attach):
    """Multiply a truncated series by exp(weight*eps*L), attaching L-powers."""
    out: dict[int, list[Term]] = {}
    for k0, terms in series.items():
        for k in range(0, depth - k0 + 1):
            c = Fraction(weight) ** k / _factorial(k)
            for t in terms:
                nt = attach(t, k) if k else t
                out.setdefault(k0 + k, []).append(nt.scaled(c) if k else nt)
    return out


# ---------------------------------------------------------------------------
# the finite integrand container
# ---------------------------------------------------------------------------

class FiniteIntegrand:
    """Sum of Terms over the closed unit hypercube.

    Structural contract: every inverted or logarithm-taken factor polynomial
    has a strictly positive constant term and nonnegative coefficients, so
    denominators are bounded away from zero and logarithms stay finite in
    the open cube; integrability of the full sum is guaranteed by the
    Taylor-subtraction construction.
    """

    def __init__(self, nvars: int, terms):
        self.nvars = nvars
        self.terms = _normalize_terms(terms)
        self.structural_check()

    def __len__(self):
        return len(self.terms)

    def structural_check(self):
        for t in self.terms:
            for q, d in t.fpows:
                if d < 0:
                    if q.constant_term() <= 0:
                        raise FeynsecError(
                            f"inverted factor without positive constant term: {q.as_string()}")
                    if any(c < 0 for c in q.coeffs.values()):
                        raise FeynsecError(
                            f"inverted factor with mixed-sign coefficients: {q.as_string()}")
            for q, _c in t.flogs:
                if q.is_constant():
                    if q.constant_term() <= 0:
                        raise FeynsecError("logarithm of a nonpositive constant")
                elif q.constant_term() <= 0 or any(c < 0 for c in q.coeffs.values()):
                    raise FeynsecError(
                        f"logarithm factor not bounded inside the cube: {q.as_string()}")

    def exact_value(self) -> Fraction | None:
        """Exact rational value if the integrand is a rational constant."""
        total = Fraction(0)
        for t in self.terms:
            if any(t.xpows) or any(t.xlogs) or t.fpows or t.flogs:
                return None
            total += t.coeff
        return total

    def compile(self):
        """Vectorized evaluator mapping an (n, nvars) array to an (n,) array."""
        polys: dict = {}
        for t in self.terms:
            for q, _d in t.fpows:
                polys.setdefault(_poly_key(q), q)
            for q, _c in t.flogs:
                if not q.is_constant():
                    polys.setdefault(_poly_key(q), q)
        plan = []
        for t in self.terms:
            coeff = float(t.coeff)
            flogs = []
            for q, c in t.flogs:
                if q.is_constant():
                    coeff *= _mlog(float(q.constant_term())) ** c
                else:
                    flogs.append((_poly_key(q), c))
            plan.append((coeff, t.xpows, t.xlogs,
                         tuple((_poly_key(q), d) for q, d in t.fpows), tuple(flogs)))

        def evaluate(x: np.ndarray) -> np.ndarray:
            n = x.shape[0]
            pvals = {key: q.eval_array(x) for key, q in polys.items()}
            need_logx = any(any(xl) for _c, _xp, xl, _fp, _fl in plan)
            logx = np.log(x) if (need_logx and x.shape[1]) else None
            plogs = {}
            total = np.zeros(n)
            for coeff, xp, xl, fp, fl in plan:
                v = np.full(n, coeff)
                for i, p in enumerate(xp):
                    if p:
                        v = v * x[:, i] ** p
                for i, k in enumerate(xl):
                    if k:
                        v = v * logx[:, i] ** k
                for key, d in fp:
                    v = v * pvals[key] ** d
                for key, c in fl:
                    if key not in plogs:
                        plogs[key] = np.log(pvals[key])
                    v = v * plogs[key] ** c
                total += v
            return total

        return evaluate
