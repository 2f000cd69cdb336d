"""Exact arithmetic in the Weyl algebra of differential operators.

Operators are kept in the canonical form sum c_{a,b} x^a D^b (all
polynomial factors to the left of all derivatives) with rational
coefficients, so equality of operators is equality of term maps.
Composition uses the per-variable expansion

    D^p x^q = sum_k C(p,k) * q!/(q-k)! * x^{q-k} D^{p-k}

which reduces to the defining relation D x = x D + 1.

Built on top of the arithmetic:

* the Mellin system of y^m + x_1 y^{m_1} + ... + x_n y^{m_n} - 1 = 0 and
  its x_j^m-cleared form expressible in Euler operators,
* the Horn companions in the torus variables w_j = (-1)^{m'_j} x_j^m and
  their translation back to x, with the exact multiplier that recovers
  the cleared Mellin operators,
* the univariate trinomial operator, its discriminant/leading-coefficient
  coincidence, and the two closed-form factorizations (right factor
  theta - 1 for m_1 = m - 1, left factor d/dx for m_1 = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, perm

from .profiles import ExponentProfile, make_profile, var_names
from .series import TruncatedSeries


def _zeros(n):
    return (0,) * n


class DiffOperator:
    """Canonical-form element sum c_{a,b} x^a D^b of the Weyl algebra."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms=None):
        self.n_vars = n_vars
        clean = {}
        for (a, b), c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[(tuple(a), tuple(b))] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, n_vars):
        return cls(n_vars, {})

    @classmethod
    def identity(cls, n_vars):
        z = _zeros(n_vars)
        return cls(n_vars, {(z, z): Fraction(1)})

    @classmethod
    def constant(cls, n_vars, c):
        z = _zeros(n_vars)
        return cls(n_vars, {(z, z): Fraction(c)})

    @classmethod
    def x_power(cls, n_vars, j, k=1, coeff=1):
        a = tuple(k if i == j else 0 for i in range(n_vars))
        return cls(n_vars, {(a, _zeros(n_vars)): Fraction(coeff)})

    @classmethod
    def partial(cls, n_vars, j, k=1, coeff=1):
        b = tuple(k if i == j else 0 for i in range(n_vars))
        return cls(n_vars, {(_zeros(n_vars), b): Fraction(coeff)})

    @classmethod
    def theta(cls, n_vars, j):
        """The Euler operator x_j D_j."""
        a = tuple(1 if i == j else 0 for i in range(n_vars))
        return cls(n_vars, {(a, a): Fraction(1)})

    @classmethod
    def from_univariate(cls, coeff_polys):
        """Build sum_i p_i(x) D^i from ascending coefficient lists."""
        terms = {}
        for i, poly in enumerate(coeff_polys):
            for deg, c in enumerate(poly):
                if c:
                    terms[((deg,), (i,))] = (
                        terms.get(((deg,), (i,)), Fraction(0)) + Fraction(c))
        return cls(1, terms)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def deriv_order(self) -> int:
        """Maximal total derivative order among the terms."""
        return max((sum(b) for (_, b) in self.terms), default=0)

    def __eq__(self, other):
        return (isinstance(other, DiffOperator)
                and self.n_vars == other.n_vars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------------

    def _require_same(self, other):
        if self.n_vars != other.n_vars:
            raise ValueError("variable-count mismatch")

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._require_same(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return DiffOperator(self.n_vars, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DiffOperator(self.n_vars,
                            {k: -c for k, c in self.terms.items()})

    def scale(self, q):
        q = Fraction(q)
        return DiffOperator(self.n_vars,
                            {k: c * q for k, c in self.terms.items()})

    def __mul__(self, other):
        """Composition self o other."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._require_same(other)
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                base = c1 * c2
                for k, f in _pass_through(b1, a2):
                    key = (tuple(x + y - z for x, y, z in zip(a1, a2, k)),
                           tuple(x + y - z for x, y, z in zip(b1, b2, k)))
                    out[key] = out.get(key, Fraction(0)) + base * f
        return DiffOperator(self.n_vars, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = DiffOperator.identity(self.n_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- action on series ----------------------------------------------------

    def apply(self, series: TruncatedSeries) -> TruncatedSeries:
        """Apply to a truncated series.

        A coefficient of the result at degree D collects input terms of
        degree D - |a| + |b|, so the reliable output order is
        min over terms of (series.order + |a| - |b|).
        """
        if self.n_vars != series.n_vars:
            raise ValueError("variable-count mismatch")
        if not self.terms:
            return TruncatedSeries.zero(series.ring, series.n_vars,
                                        series.order)
        out_order = min(series.order + sum(a) - sum(b)
                        for (a, b) in self.terms)
        if out_order < 0:
            raise ValueError("series order too low for this operator")
        ring = series.ring
        out: dict = {}
        for (a, b), c in self.terms.items():
            for s, coeff in series.terms.items():
                if any(si < bi for si, bi in zip(s, b)):
                    continue
                fall = 1
                for si, bi in zip(s, b):
                    fall *= perm(si, bi)
                exp = tuple(si - bi + ai for si, bi, ai in zip(s, b, a))
                if sum(exp) > out_order:
                    continue
                val = ring.scale_rational(coeff, c * fall)
                out[exp] = ring.add(out.get(exp, ring.zero), val)
        return TruncatedSeries(ring, series.n_vars, out_order, out)

    # -- division helpers ----------------------------------------------------

    def left_divide_x_power(self, j: int, e: int) -> "DiffOperator":
        """Exact quotient with x_j^e on the left; fails if any term lacks it."""
        out = {}
        for (a, b), c in self.terms.items():
            if a[j] < e:
                raise ArithmeticError(
                    f"term x^{a} D^{b} is not left-divisible by x_{j + 1}^{e}")
            out[(tuple(v - e if i == j else v for i, v in enumerate(a)), b)] = c
        return DiffOperator(self.n_vars, out)

    def univariate_coeff_polys(self):
        """Ascending coefficient lists p_i(x) of a univariate operator."""
        if self.n_vars != 1:
            raise ValueError("univariate operators only")
        order = self.deriv_order()
        polys = [[] for _ in range(order + 1)]
        for (a, b), c in self.terms.items():
            poly = polys[b[0]]
            while len(poly) <= a[0]:
                poly.append(Fraction(0))
            poly[a[0]] = c
        return polys

    # -- rendering -----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (-sum(kv[0][1]), kv[0][1], kv[0][0]))

    def render(self, letter: str = "x") -> str:
        if not self.terms:
            return "0"
        names = var_names(self.n_vars, letter)
        dnames = var_names(self.n_vars, "D")
        parts = []
        for (a, b), c in self.sorted_terms():
            factors = [f"{nm}^{e}" if e > 1 else nm
                       for nm, e in zip(names, a) if e]
            factors += [f"{nm}^{e}" if e > 1 else nm
                        for nm, e in zip(dnames, b) if e]
            mono = " ".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def render_ode(self, letter: str = "x") -> str:
        """Univariate display grouped by derivative order, highest first."""
        polys = self.univariate_coeff_polys()
        parts = []
        for i in range(len(polys) - 1, -1, -1):
            poly = polys[i]
            if not any(poly):
                continue
            ptxt = _poly_str(poly, letter)
            nterms = sum(1 for c in poly if c)
            if i == 0:
                parts.append(ptxt)
            else:
                dpart = "D" if i == 1 else f"D^{i}"
                parts.append(f"({ptxt}) {dpart}" if nterms > 1
                             else f"{ptxt} {dpart}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [{"x": list(a), "d": list(b), "coeff": str(c)}
                for (a, b), c in self.sorted_terms()]

    def __repr__(self):
        return f"DiffOperator(n={self.n_vars}, terms={len(self.terms)})"

    def __str__(self):
        return self.render()


def _poly_str(poly, letter):
    parts = []
    for deg in range(len(poly) - 1, -1, -1):
        c = poly[deg]
        if not c:
            continue
        if deg == 0:
            parts.append(str(c))
        else:
            xs = letter if deg == 1 else f"{letter}^{deg}"
            if c == 1:
                parts.append(xs)
            elif c == -1:
                parts.append(f"-{xs}")
            else:
                parts.append(f"{c} {xs}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _pass_through(b, a):
    """Expansion of D^b o x^a as sum_k f_k x^{a-k} D^{b-k}, per variable."""
    options = []
    for bi, ai in zip(b, a):
        var = [(k, comb(bi, k) * perm(ai, k)) for k in range(min(bi, ai) + 1)]
        options.append(var)
    def rec(i, key, f):
        if i == len(options):
            yield tuple(key), f
            return
        for k, fk in options[i]:
            key.append(k)
            yield from rec(i + 1, key, f * fk)
            key.pop()
    yield from rec(0, [], 1)


class ThetaPoly:
    """Commutative polynomial in the Euler operators theta_1..theta_n."""

    __slots__ = ("n_vars", "coeffs")

    def __init__(self, n_vars, coeffs=None):
        self.n_vars = n_vars
        clean = {}
        for k, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(k)] = c
        self.coeffs = clean

    @classmethod
    def one(cls, n_vars):
        return cls(n_vars, {_zeros(n_vars): Fraction(1)})

    @classmethod
    def linear(cls, weights, const) -> "ThetaPoly":
        """The affine form sum w_j theta_j + const."""
        n = len(weights)
        coeffs = {_zeros(n): Fraction(const)}
        for j, w in enumerate(weights):
            if w:
                coeffs[tuple(1 if i == j else 0 for i in range(n))] = Fraction(w)
        return cls(n, coeffs)

    def __mul__(self, other):
        if not isinstance(other, ThetaPoly):
            return NotImplemented
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ThetaPoly(self.n_vars, out)

    def to_operator(self) -> DiffOperator:
        """Expand into canonical x^a D^b form by composing Euler operators."""
        total = DiffOperator.zero(self.n_vars)
        for k, c in sorted(self.coeffs.items()):
            term = DiffOperator.constant(self.n_vars, c)
            for j, e in enumerate(k):
                if e:
                    term = term * DiffOperator.theta(self.n_vars, j) ** e
            total = total + term
        return total

    def evaluate(self, point) -> Fraction:
        out = Fraction(0)
        for k, c in self.coeffs.items():
            v = c
            for pj, e in zip(point, k):
                v *= Fraction(pj) ** e
            out += v
        return out


def theta_product(n_vars, factors) -> ThetaPoly:
    out = ThetaPoly.one(n_vars)
    for f in factors:
        out = out * f
    return out


# ---------------------------------------------------------------------------
# The Mellin system and its companions
# ---------------------------------------------------------------------------

def indicial_theta_poly(profile: ExponentProfile, j: int) -> ThetaPoly:
    """prod_{k<m_j} (<M,theta> + mk + 1) * prod_{k<m'_j} (<M',theta> + mk - 1)."""
    m = profile.m
    factors = [ThetaPoly.linear(profile.m_list, m * k + 1)
               for k in range(profile.m_list[j])]
    factors += [ThetaPoly.linear(profile.mprime_list, m * k - 1)
                for k in range(profile.mprime_list[j])]
    return theta_product(profile.n, factors)


def mellin_system(profile: ExponentProfile) -> list[DiffOperator]:
    """The n operators P_j(theta) - (-1)^{m_j} m^m D_j^m in canonical form."""
    m, n = profile.m, profile.n
    out = []
    for j in range(n):
        op = indicial_theta_poly(profile, j).to_operator()
        sign = (-1) ** profile.m_list[j]
        op = op - DiffOperator.partial(n, j, m, coeff=sign * m**m)
        out.append(op)
    return out


def mellin_system_theta_form(profile: ExponentProfile) -> list[DiffOperator]:
    """The x_j^m-cleared operators x_j^m o M_j.

    Clearing turns the pure derivative term into the Euler product
    x_j^m D_j^m = theta_j (theta_j - 1) ... (theta_j - m + 1), so the whole
    operator is polynomial in theta after multiplication.
    """
    n = profile.n
    return [DiffOperator.x_power(n, j, profile.m) * op
            for j, op in enumerate(mellin_system(profile))]


def euler_product_identity(n_vars: int, j: int, m: int) -> tuple[DiffOperator, DiffOperator]:
    """Both sides of x_j^m D_j^m = prod_{k=0}^{m-1} (theta_j - k)."""
    lhs = DiffOperator.x_power(n_vars, j, m) * DiffOperator.partial(n_vars, j, m)
    theta_j = [Fraction(1) if i == j else Fraction(0) for i in range(n_vars)]
    rhs = theta_product(n_vars, [ThetaPoly.linear(theta_j, -k)
                                 for k in range(m)]).to_operator()
    return lhs, rhs


def horn_system(profile: ExponentProfile):
    """The Horn companions (H_j in the w variables, H'_j in the x variables).

    H_j  = prod_{k<m}(m theta_j - k)
           - w_j prod_{k<m_j}(-<M,theta> - 1/m - k)
                 prod_{k<m'_j}(-<M',theta> + 1/m - k)
    and H'_j is the same after w_j = (-1)^{m'_j} x_j^m, under which the
    Euler operator in w_j becomes theta_j / m.
    """
    m, n = profile.m, profile.n
    horn_w, horn_x = [], []
    M = [Fraction(v) for v in profile.m_list]
    Mp = [Fraction(v) for v in profile.mprime_list]
    for j in range(n):
        theta_j = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        lead_w = theta_product(
            n, [ThetaPoly.linear([m * t for t in theta_j], -k) for k in range(m)])
        tail = theta_product(
            n,
            [ThetaPoly.linear([-v for v in M], Fraction(-1, m) - k)
             for k in range(profile.m_list[j])]
            + [ThetaPoly.linear([-v for v in Mp], Fraction(1, m) - k)
               for k in range(profile.mprime_list[j])])
        horn_w.append(lead_w.to_operator()
                      - DiffOperator.x_power(n, j, 1) * tail.to_operator())

        lead_x = theta_product(
            n, [ThetaPoly.linear(theta_j, -k) for k in range(m)])
        tail_x = theta_product(
            n,
            [ThetaPoly.linear([-v / m for v in M], Fraction(-1, m) - k)
             for k in range(profile.m_list[j])]
            + [ThetaPoly.linear([-v / m for v in Mp], Fraction(1, m) - k)
               for k in range(profile.mprime_list[j])])
        sign = (-1) ** profile.mprime_list[j]
        horn_x.append(lead_x.to_operator()
                      - DiffOperator.x_power(n, j, m, coeff=sign)
                      * tail_x.to_operator())
    return horn_w, horn_x


def horn_mellin_multiplier(profile: ExponentProfile, j: int) -> int:
    """The exact constant c_j with c_j * H'_j = x_j^m o M_j.

    Comparing the D_j^m terms forces c_j = (-1)^{m_j + 1} m^m; the sign
    depends on the parity of m_j, not of m.
    """
    return (-1) ** (profile.m_list[j] + 1) * profile.m ** profile.m


@dataclass(frozen=True)
class LatticeData:
    """The homogeneous companion matrices of the system.

    toric_pairs holds, per column of B, the exponent pair (u, v) of the
    binomial annihilator D^u - D^v in the homogeneous coordinates
    (a_0, ..., a_{n+1}); the pairs are carried as data only.
    """

    A: tuple
    A_prime: tuple
    B: tuple
    c: tuple
    beta: tuple
    beta_prime: tuple
    horn_rank: int
    toric_pairs: tuple


def lattice_matrices(profile: ExponentProfile) -> LatticeData:
    """A, A', the kernel matrix B, and the Horn parameter vector c.

    Columns of B are exponent vectors on (a_0, a_1, ..., a_{n+1}) and lie
    in ker A; this compatibility is asserted.  The rank bookkeeping
    g * vol = (m^{n-1} d) * (m/d) = m^n is recorded as horn_rank.
    """
    m, n, d = profile.m, profile.n, profile.d
    a = (tuple([1] * (n + 2)), tuple([m, *profile.m_list, 0]))
    a_prime = (tuple(Fraction(1) for _ in range(n + 2)),
               tuple(Fraction(v, d) for v in (m, *profile.m_list, 0)))
    rows = [tuple(-mj for mj in profile.m_list)]
    for i in range(n):
        rows.append(tuple(m if k == i else 0 for k in range(n)))
    rows.append(tuple(-mp for mp in profile.mprime_list))
    b = tuple(rows)
    pairs = []
    for col in range(n):
        column = [rows[r][col] for r in range(n + 2)]
        for arow in a:
            if sum(x * y for x, y in zip(arow, column)) != 0:
                raise ArithmeticError("kernel matrix column fails A * u = 0")
        u = tuple(max(v, 0) for v in column)
        v = tuple(max(-v, 0) for v in column)
        pairs.append((u, v))
    c = tuple([Fraction(-1, m)] + [Fraction(0)] * n + [Fraction(1, m)])
    return LatticeData(A=a, A_prime=a_prime, B=b, c=c, beta=(0, -1),
                       beta_prime=(Fraction(0), Fraction(-1, d)),
                       horn_rank=m**n, toric_pairs=tuple(pairs))


# ---------------------------------------------------------------------------
# Univariate trinomial operator
# ---------------------------------------------------------------------------

def mellin_operator_1d(m: int, m1: int) -> DiffOperator:
    """The order-m operator of y^m + x y^{m1} - 1 = 0."""
    return mellin_system(make_profile(m, [m1]))[0]


def discriminant_poly(m: int, m1: int) -> list:
    """x^a b^b (a-b)^{a-b} - (-1)^b a^a with a = m/d, b = m1/d (ascending)."""
    from math import gcd
    d = gcd(m, m1)
    a, b = m // d, m1 // d
    poly = [Fraction(0)] * (a + 1)
    poly[a] = Fraction(b**b * (a - b) ** (a - b))
    poly[0] = Fraction(-((-1) ** b) * a**a)
    return poly


def leading_coefficient(op: DiffOperator) -> list:
    """Polynomial coefficient (ascending) of the highest derivative power."""
    if op.is_zero():
        raise ValueError("zero operator has no leading coefficient")
    polys = op.univariate_coeff_polys()
    return polys[-1]


def poly_scale_ratio(p, q):
    """The constant c with p = c*q, or None."""
    p, q = list(p), list(q)
    while p and not p[-1]:
        p.pop()
    while q and not q[-1]:
        q.pop()
    if len(p) != len(q):
        return None
    ratio = None
    for a, b in zip(p, q):
        if (a == 0) != (b == 0):
            return None
        if b != 0:
            r = Fraction(a) / Fraction(b)
            if ratio is None:
                ratio = r
            elif ratio != r:
                return None
    return ratio


def equals_up_to_rational_scale(opa: DiffOperator, opb: DiffOperator):
    """The constant c with opa = c * opb, or None if not proportional."""
    if opa.is_zero() or opb.is_zero():
        return Fraction(0) if opa.is_zero() and opb.is_zero() else None
    if set(opa.terms) != set(opb.terms):
        return None
    ratio = None
    for key, ca in opa.terms.items():
        r = ca / opb.terms[key]
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


def factorization_check(left: DiffOperator, right: DiffOperator,
                        target: DiffOperator,
                        multiplier: DiffOperator | None = None) -> bool:
    """Whether multiplier o target = left o right in canonical form."""
    lhs = target if multiplier is None else multiplier * target
    return lhs == left * right


def right_divide_theta_minus_one(op: DiffOperator):
    """Exact quotient L with op = L o (theta - 1), or None.

    Writing op = sum t_i(x) D^i and L = sum l_i(x) D^i, composing with
    x D - 1 gives l_{i-1} x = t_i - (i-1) l_i, solved top-down; each step
    must divide exactly by x and the constant terms must close up.
    """
    if op.n_vars != 1:
        raise ValueError("univariate operators only")
    if op.is_zero():
        return DiffOperator.zero(1)
    t = op.univariate_coeff_polys()
    r = len(t) - 1
    l: list = [None] * r
    carry = [Fraction(0)]
    for i in range(r, 0, -1):
        ti = t[i] if i < len(t) else []
        num = _poly_sub_list(ti, _poly_scale(carry, i - 1))
        if num and num[0] != 0:
            return None
        quotient = num[1:] if num else []
        l[i - 1] = quotient
        carry = quotient
    check = _poly_sub_list(t[0], _poly_scale(l[0], -1))
    if any(check):
        return None
    out = {}
    for i, poly in enumerate(l):
        for deg, c in enumerate(poly):
            if c:
                out[((deg,), (i,))] = c
    return DiffOperator(1, out)


def _poly_scale(p, c):
    c = Fraction(c)
    return [v * c for v in p]


def _poly_sub_list(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    while out and not out[-1]:
        out.pop()
    return out


@dataclass(frozen=True)
class ThetaFactorization:
    """x^exponent o M(m, m-1) = left o (theta - 1), with minimal exponent."""

    left: DiffOperator
    right: DiffOperator
    exponent: int
    displayed_left: DiffOperator


def theta_factorization(m: int) -> ThetaFactorization:
    """Split theta - 1 (the annihilator of x) off M(m, m-1).

    The closed form

       x^m M(m, m-1) = ( x^m prod_{k=0}^{m-2}((m-1) theta + mk + 1)
                         + (-m)^m theta prod_{k=2}^{m-1}(theta - k) ) (theta-1)

    is verified exactly; the minimal multiplier exponent is then resolved
    by brute-force right division over e in {0..m} and is expected to be
    m - 1 (the displayed left factor is itself left-divisible by x).
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    mel = mellin_operator_1d(m, m - 1)
    first = theta_product(1, [ThetaPoly.linear([m - 1], m * k + 1)
                              for k in range(m - 1)]).to_operator()
    second = theta_product(1, [ThetaPoly.linear([1], 0)]
                           + [ThetaPoly.linear([1], -k)
                              for k in range(2, m)]).to_operator()
    displayed = (DiffOperator.x_power(1, 0, m) * first
                 + second.scale((-m) ** m))
    right = DiffOperator.theta(1, 0) - DiffOperator.identity(1)
    if displayed * right != DiffOperator.x_power(1, 0, m) * mel:
        raise ArithmeticError(
            f"closed-form split of M({m},{m - 1}) fails at the x^{m} level")
    for e in range(m + 1):
        quotient = right_divide_theta_minus_one(
            DiffOperator.x_power(1, 0, e) * mel)
        if quotient is not None:
            if DiffOperator.x_power(1, 0, m - e) * quotient != displayed:
                raise ArithmeticError("minimal and displayed factors disagree")
            return ThetaFactorization(left=quotient, right=right, exponent=e,
                                      displayed_left=displayed)
    raise ArithmeticError(
        f"no multiplier exponent in 0..{m} makes M({m},{m - 1}) divisible "
        "by theta - 1; transcription problem")


def derivative_factorization(m: int) -> tuple[DiffOperator, DiffOperator]:
    """M(m, 1) = D o ( x prod_{k=0}^{m-2}((m-1) theta + mk - 1) + m^m D^{m-1} ).

    Exact composition is the oracle: a mismatch is a hard failure.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    mel = mellin_operator_1d(m, 1)
    inner = theta_product(1, [ThetaPoly.linear([m - 1], m * k - 1)
                              for k in range(m - 1)]).to_operator()
    right = (DiffOperator.x_power(1, 0, 1) * inner
             + DiffOperator.partial(1, 0, m - 1, coeff=m**m))
    left = DiffOperator.partial(1, 0, 1)
    if left * right != mel:
        raise ArithmeticError(
            f"derivative split of M({m},1) fails; transcription problem")
    return left, right
