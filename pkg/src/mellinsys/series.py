"""Truncated multivariate power series and the solution bases built on them.

A :class:`TruncatedSeries` stores a sparse map from exponent tuples to
coefficients in one of the rings of :mod:`mellinsys.rings`, together with
an inclusive total-degree bound ``order`` below which every coefficient is
reliable.  Arithmetic never reports terms beyond the common reliable
order; multiplication truncates to the minimum of the operand orders and
partial differentiation lowers the reliable order by one.

On top of the arithmetic live the solution-space constructions for the
Mellin system of ``y^m + x_1 y^{m_1} + ... + x_n y^{m_n} - 1 = 0``:

* the principal root's expansion (explicit coefficient formula),
* one series per initial exponent I in B = {0..m-1}^n, supported on
  I + m*N^n, built by solving the coefficient recurrence exactly,
* rotations x_j -> e^{i_j} x_j over the group ring Q[Z/m],
* congruence subseries, the generating test, and exact/numeric
  linear-independence ranks.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import factorial

import numpy as np

from .profiles import ExponentProfile, ProfileError, dot, index_box, var_names
from .rings import (COMPLEX, RATIONAL, CyclotomicRing, cyclotomic_field,
                    get_cyclotomic_ring)

COMPLEX_PRUNE = 1e-12


def _zero_exp(n):
    return (0,) * n


class TruncatedSeries:
    """Sparse series sum_s c_s x^s, reliable for |s| <= order."""

    __slots__ = ("ring", "n_vars", "order", "terms")

    def __init__(self, ring, n_vars, order, terms):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.ring = ring
        self.n_vars = n_vars
        self.order = order
        self.terms = self._prune(ring, order, terms)

    @staticmethod
    def _prune(ring, order, terms):
        kept = {s: c for s, c in terms.items()
                if sum(s) <= order and not ring.is_zero(c)}
        if ring.name == "complex" and kept:
            top = max(abs(c) for c in kept.values())
            thr = COMPLEX_PRUNE * max(1.0, top)
            kept = {s: c for s, c in kept.items() if abs(c) >= thr}
        return kept

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring, n_vars, order):
        return cls(ring, n_vars, order, {})

    @classmethod
    def constant(cls, ring, n_vars, order, value):
        return cls(ring, n_vars, order, {_zero_exp(n_vars): value})

    @classmethod
    def variable(cls, ring, n_vars, order, j):
        exp = tuple(1 if i == j else 0 for i in range(n_vars))
        return cls(ring, n_vars, order, {exp: ring.one})

    # -- bookkeeping ---------------------------------------------------------

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), self.ring.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self) -> float:
        """Largest coefficient magnitude under the complex embedding."""
        if not self.terms:
            return 0.0
        return max(abs(self.ring.to_complex(c)) for c in self.terms.values())

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def _check_compatible(self, other):
        if self.n_vars != other.n_vars:
            raise ValueError("variable-count mismatch")
        if self.ring.name != other.ring.name or (
                isinstance(self.ring, CyclotomicRing)
                and self.ring.m != other.ring.m):
            raise ValueError("ring mismatch")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        order = min(self.order, other.order)
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = self.ring.add(terms.get(s, self.ring.zero), c)
        return TruncatedSeries(self.ring, self.n_vars, order, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries(self.ring, self.n_vars, self.order,
                               {s: self.ring.neg(c) for s, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            order = min(self.order, other.order)
            out: dict = {}
            for s, c in self.terms.items():
                ds = sum(s)
                for t, e in other.terms.items():
                    if ds + sum(t) > order:
                        continue
                    key = tuple(a + b for a, b in zip(s, t))
                    prod = self.ring.mul(c, e)
                    out[key] = self.ring.add(out.get(key, self.ring.zero), prod)
            return TruncatedSeries(self.ring, self.n_vars, order, out)
        if isinstance(other, (int, Fraction)):
            return self.scale_rational(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale_rational(self, q):
        return TruncatedSeries(
            self.ring, self.n_vars, self.order,
            {s: self.ring.scale_rational(c, q) for s, c in self.terms.items()})

    def scale(self, coeff):
        """Multiply by a ring element."""
        return TruncatedSeries(
            self.ring, self.n_vars, self.order,
            {s: self.ring.mul(c, coeff) for s, c in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers: use inverse() first")
        result = TruncatedSeries.constant(self.ring, self.n_vars, self.order,
                                          self.ring.one)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k >>= 1
        return result

    def inverse(self):
        """Reciprocal; requires an invertible constant term (rational/complex)."""
        c0 = self.coefficient(_zero_exp(self.n_vars))
        if self.ring.name == "rational":
            if c0 == 0:
                raise ZeroDivisionError("series has zero constant term")
            inv0 = Fraction(1) / c0
        elif self.ring.name == "complex":
            if c0 == 0:
                raise ZeroDivisionError("series has zero constant term")
            inv0 = 1.0 / c0
        else:
            raise ValueError("inverse is supported over the rational and "
                             "complex rings only")
        ring = self.ring
        rest = {s: c for s, c in self.terms.items() if sum(s) > 0}
        out = {_zero_exp(self.n_vars): inv0}
        # fill by increasing total degree: c0*g_e = -sum f_u g_{e-u}
        by_degree: dict[int, list] = {}
        for s in self._exponents_up_to(self.n_vars, self.order):
            by_degree.setdefault(sum(s), []).append(s)
        for deg in range(1, self.order + 1):
            for e in by_degree.get(deg, []):
                acc = ring.zero
                for u, fu in rest.items():
                    if all(ui <= ei for ui, ei in zip(u, e)) and sum(u) <= deg:
                        g = out.get(tuple(a - b for a, b in zip(e, u)))
                        if g is not None:
                            acc = ring.add(acc, ring.mul(fu, g))
                if not ring.is_zero(acc):
                    out[e] = ring.mul(ring.neg(acc), inv0)
        return TruncatedSeries(ring, self.n_vars, self.order, out)

    def log(self):
        """Series logarithm.

        Over the rationals the constant term must be exactly 1 (the log of
        any other rational is irrational and cannot live in the ring); over
        the complex ring the principal branch of the constant is folded in.
        """
        c0 = self.coefficient(_zero_exp(self.n_vars))
        if self.ring.is_zero(c0):
            raise ZeroDivisionError("logarithm of a series with zero constant term")
        if self.ring.name == "rational":
            if c0 != 1:
                raise ValueError("rational-series logarithm needs constant term 1")
            const = None
            h = self + TruncatedSeries.constant(self.ring, self.n_vars,
                                                self.order, Fraction(-1))
        elif self.ring.name == "complex":
            const = cmath.log(c0)
            h = self.scale(1.0 / c0) + TruncatedSeries.constant(
                self.ring, self.n_vars, self.order, -1.0)
        else:
            raise ValueError("logarithm is supported over the rational and "
                             "complex rings only")
        acc = TruncatedSeries.zero(self.ring, self.n_vars, self.order)
        power = TruncatedSeries.constant(self.ring, self.n_vars, self.order,
                                         self.ring.one)
        sign = 1
        for k in range(1, self.order + 1):
            power = power * h
            if power.is_zero():
                break
            acc = acc + power.scale_rational(Fraction(sign, k))
            sign = -sign
        if const is not None and const != 0:
            acc = acc + TruncatedSeries.constant(self.ring, self.n_vars,
                                                 self.order, const)
        return acc

    def diff(self, j: int):
        """Partial derivative; the reliable order drops by one."""
        out = {}
        for s, c in self.terms.items():
            if s[j] == 0:
                continue
            exp = tuple(v - 1 if i == j else v for i, v in enumerate(s))
            out[exp] = self.ring.scale_rational(c, s[j])
        return TruncatedSeries(self.ring, self.n_vars, max(self.order - 1, 0),
                               out)

    def evaluate(self, point) -> complex:
        """Value at a complex point; terms beyond the order are simply absent."""
        total = 0j
        for s, c in self.terms.items():
            mono = 1 + 0j
            for p, e in zip(point, s):
                mono *= p**e
            total += self.ring.to_complex(c) * mono
        return total

    def truncate(self, order: int):
        if order >= self.order:
            return self
        return TruncatedSeries(self.ring, self.n_vars, order, self.terms)

    def to_complex(self):
        """Embed into the complex-float ring (e -> exp(2*pi*i/m))."""
        return TruncatedSeries(
            COMPLEX, self.n_vars, self.order,
            {s: self.ring.to_complex(c) for s, c in self.terms.items()})

    def to_cyclotomic(self, m: int):
        ring = get_cyclotomic_ring(m)
        if self.ring.name == "cyclotomic":
            if self.ring.m != m:
                raise ValueError("ring mismatch")
            return self
        if self.ring.name != "rational":
            raise ValueError("only rational series embed into the group ring")
        return TruncatedSeries(ring, self.n_vars, self.order,
                               {s: ring.from_rational(c)
                                for s, c in self.terms.items()})

    @staticmethod
    def _exponents_up_to(n_vars, order):
        return exponents_up_to(n_vars, order)

    def __repr__(self):
        return (f"TruncatedSeries(n={self.n_vars}, order={self.order}, "
                f"ring={self.ring.name}, terms={len(self.terms)})")

    def __str__(self):
        return format_series(self)


def exponents_up_to(n_vars: int, order: int):
    """All exponent tuples of total degree <= order, lexicographic."""
    if n_vars == 0:
        yield ()
        return

    def rec(prefix, remaining, slots):
        if slots == 1:
            for v in range(remaining + 1):
                yield prefix + (v,)
            return
        for v in range(remaining + 1):
            yield from rec(prefix + (v,), remaining - v, slots - 1)

    yield from rec((), order, n_vars)


# ---------------------------------------------------------------------------
# Solution-space constructions
# ---------------------------------------------------------------------------

def principal_coefficient(profile: ExponentProfile, nu) -> Fraction:
    """Coefficient of x^nu in the principal root's expansion.

    ((-1)^|nu| / m^|nu|) * prod_{mu=1}^{|nu|-1} (<M,nu> - m*mu + 1) / nu!
    with the empty product equal to 1.
    """
    total = sum(nu)
    s = dot(profile.m_list, nu)
    num = 1
    for mu in range(1, total):
        num *= s - profile.m * mu + 1
    denom = profile.m**total
    for v in nu:
        denom *= factorial(v)
    return Fraction((-1) ** total * num, denom)


def principal_series(profile: ExponentProfile, order: int) -> TruncatedSeries:
    """Expansion of the root taking the value 1 at the origin."""
    if order < 0:
        raise ValueError("order must be non-negative")
    terms = {}
    for nu in exponents_up_to(profile.n, order):
        c = principal_coefficient(profile, nu)
        if c:
            terms[nu] = c
    return TruncatedSeries(RATIONAL, profile.n, order, terms)


def _pj_value(profile: ExponentProfile, j: int, v) -> int:
    """The j-th indicial polynomial evaluated at an integer vector."""
    m = profile.m
    a = dot(profile.m_list, v)
    b = dot(profile.mprime_list, v)
    out = 1
    for k in range(profile.m_list[j]):
        out *= a + m * k + 1
    for k in range(profile.mprime_list[j]):
        out *= b + m * k - 1
    return out


def convenient_basis_series(profile: ExponentProfile, index,
                            order: int) -> TruncatedSeries:
    """The basis solution with initial monomial x^I, I in B.

    Support lies in I + m*N^n and the coefficient at I is normalized to 1.
    Writing the coefficient at I + m*p as psi(p), the annihilation of the
    series by the x^m-cleared operators forces, for s = m*p,

        psi(p + e_j) = psi(p) * P_j(s + I)
                       / ((-1)^{m_j} m^m * prod_{k=0}^{m-1}(s_j + m + i_j - k))

    and the divisor is a product of positive integers, so the recurrence is
    always solvable.  Values are filled along first-nonzero-coordinate
    predecessors; path independence is certified by the annihilation tests.
    """
    index = tuple(index)
    m, n = profile.m, profile.n
    if len(index) != n or any(not (0 <= v < m) for v in index):
        raise ProfileError(f"index {index} lies outside the box B")
    if order < sum(index):
        raise ValueError("order must be at least |I|")
    budget = (order - sum(index)) // m
    psi = {_zero_exp(n): Fraction(1)}
    terms = {index: Fraction(1)}
    for p in exponents_up_to(n, budget):
        if p == _zero_exp(n):
            continue
        exp = tuple(i + m * pi for i, pi in zip(index, p))
        if sum(exp) > order:
            continue
        j = next(i for i, v in enumerate(p) if v > 0)
        q = tuple(v - 1 if i == j else v for i, v in enumerate(p))
        prev = psi.get(q)
        if prev is None:
            continue
        s = tuple(m * v for v in q)
        num = _pj_value(profile, j, tuple(a + b for a, b in zip(s, index)))
        den = (-1) ** profile.m_list[j] * m**m
        for k in range(m):
            den *= s[j] + m + index[j] - k
        val = prev * Fraction(num, den)
        psi[p] = val
        if val:
            terms[exp] = val
    return TruncatedSeries(RATIONAL, n, order, terms)


def rotate(series: TruncatedSeries, index, m: int | None = None) -> TruncatedSeries:
    """Substitute x_j -> e^{i_j} x_j over the group ring Q[Z/m].

    The coefficient at exponent s picks up the factor e^{<I, s> mod m}.
    """
    index = tuple(index)
    if series.ring.name == "cyclotomic":
        ring = series.ring
        if m is not None and m != ring.m:
            raise ValueError("ring mismatch")
        terms = {s: ring.mul_root(c, dot(index, s))
                 for s, c in series.terms.items()}
    elif series.ring.name == "rational":
        if m is None:
            raise ValueError("rotations of rational series need the modulus m")
        ring = get_cyclotomic_ring(m)
        terms = {s: ring.mul_root(ring.from_rational(c), dot(index, s))
                 for s, c in series.terms.items()}
    else:
        raise ValueError("rotation acts on exact coefficient rings only")
    return TruncatedSeries(ring, series.n_vars, series.order, terms)


def scaled_root_series(profile: ExponentProfile, j: int,
                       order: int) -> TruncatedSeries:
    """The j-th root branch e^j * y_pr(e^{j m_1} x_1, ..., e^{j m_n} x_n)."""
    m = profile.m
    if not 0 <= j < m:
        raise ValueError(f"branch index {j} out of range 0..{m - 1}")
    twist = tuple((j * mj) % m for mj in profile.m_list)
    rot = rotate(principal_series(profile, order), twist, m)
    return rot.scale(rot.ring.root(j))


def subseries(series: TruncatedSeries, index, m: int) -> TruncatedSeries:
    """Terms with exponent congruent to the index mod m, componentwise."""
    index = tuple(v % m for v in index)
    terms = {s: c for s, c in series.terms.items()
             if all(v % m == i for v, i in zip(s, index))}
    return TruncatedSeries(series.ring, series.n_vars, series.order, terms)


def is_generating(series: TruncatedSeries, profile: ExponentProfile) -> bool:
    """Whether every initial exponent I in B carries a nonzero coefficient.

    Group-ring coefficients are tested for vanishing of their complex
    embedding exactly, via the cyclotomic field.
    """
    need = profile.n * (profile.m - 1)
    if series.order < need:
        raise ValueError(f"order {series.order} < n(m-1) = {need}: "
                         "the box is not fully visible")
    for idx in index_box(profile):
        c = series.terms.get(idx)
        if c is None:
            return False
        if series.ring.name == "cyclotomic" and series.ring.is_zero_complex(c):
            return False
    return True


# ---------------------------------------------------------------------------
# Linear independence
# ---------------------------------------------------------------------------

def _coefficient_matrix(series_list):
    first = series_list[0]
    for s in series_list[1:]:
        first._check_compatible(s)
        if s.order != first.order:
            raise ValueError("order mismatch")
    cols = sorted({e for s in series_list for e in s.terms},
                  key=lambda e: (sum(e), e))
    return cols, [[s.terms.get(e, s.ring.zero) for e in cols]
                  for s in series_list]


def rank_rational(rows) -> int:
    """Exact row-echelon rank over Q."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    rank, col, ncols = 0, 0, len(rows[0])
    while rank < len(rows) and col < ncols:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0),
                     None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def rank_cyclotomic_exact(rows, m: int) -> int:
    """Exact rank over the field Q[t]/Phi_m(t) of group-ring rows."""
    fld = cyclotomic_field(m)
    rows = [[fld.from_group_ring(c) for c in r] for r in rows]
    if not rows or not rows[0]:
        return 0
    rank, col, ncols = 0, 0, len(rows[0])
    while rank < len(rows) and col < ncols:
        pivot = next((r for r in range(rank, len(rows))
                      if not fld.is_zero(rows[r][col])), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = fld.inv(rows[rank][col])
        rows[rank] = [fld.mul(v, inv) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not fld.is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [fld.sub(a, fld.mul(f, b))
                           for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def rank_complex(rows, rel_tol: float = 1e-10) -> int:
    """Numeric rank via singular values, relative pivot tolerance rel_tol."""
    if not rows or not rows[0]:
        return 0
    a = np.array(rows, dtype=complex)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def independence_rank(series_list, rel_tol: float = 1e-10) -> int:
    """Rank of the coefficient matrix of the given series.

    Rational coefficients: exact Gaussian elimination.  Group-ring
    coefficients: exact rank over the cyclotomic field, cross-checked
    against the numeric complex embedding (mismatch is a hard failure).
    Complex coefficients: numeric rank at the given relative tolerance.
    """
    if not series_list:
        return 0
    _, rows = _coefficient_matrix(series_list)
    ring = series_list[0].ring
    if ring.name == "rational":
        return rank_rational(rows)
    if ring.name == "cyclotomic":
        exact = rank_cyclotomic_exact(rows, ring.m)
        numeric = rank_complex([[ring.to_complex(c) for c in r] for r in rows],
                               rel_tol)
        if exact != numeric:
            raise ArithmeticError(
                f"exact cyclotomic rank {exact} != numeric embedded rank "
                f"{numeric}; numeric tolerance is unsound here")
        return exact
    return rank_complex(rows, rel_tol)


# ---------------------------------------------------------------------------
# Rendering / serialization
# ---------------------------------------------------------------------------

def _fmt_coeff(ring, c) -> str:
    if ring.name == "rational":
        return str(c)
    if ring.name == "cyclotomic":
        return "[" + ", ".join(str(q) for q in c) + "]"
    return f"[{c.real:.12e}, {c.imag:.12e}]"


def format_series(series: TruncatedSeries, letter: str = "x") -> str:
    """Canonical one-term-per-line rendering, sorted by degree then lex."""
    names = var_names(series.n_vars, letter)
    if series.is_zero():
        return "0"
    lines = []
    for exp, c in series.sorted_items():
        mono = " ".join(f"{nm}^{e}" if e > 1 else nm
                        for nm, e in zip(names, exp) if e)
        mono = mono or "1"
        lines.append(f"{_fmt_coeff(series.ring, c)} * {mono}")
    return "\n".join(lines)


def series_to_json(series: TruncatedSeries) -> dict:
    out = {
        "n_vars": series.n_vars,
        "order": series.order,
        "ring": series.ring.name,
    }
    if series.ring.name == "cyclotomic":
        out["m"] = series.ring.m
    terms = []
    for exp, c in series.sorted_items():
        if series.ring.name == "rational":
            coeff = str(c)
        elif series.ring.name == "cyclotomic":
            coeff = [str(q) for q in c]
        else:
            coeff = [c.real, c.imag]
        terms.append({"exp": list(exp), "coeff": coeff})
    out["terms"] = terms
    return out
