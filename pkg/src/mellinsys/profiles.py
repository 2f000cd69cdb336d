"""Exponent bookkeeping for sparse algebraic equations.

An equation ``y^m + x_1 y^{m_1} + ... + x_n y^{m_n} - 1 = 0`` with
``m > m_1 > ... > m_n > 0`` is described by its exponent profile.  This
module owns the exact integer combinatorics attached to such a profile:
the box ``B = {0..m-1}^n`` of initial exponents, its split into surviving
and vanishing indices, dimension counts for the solution space of the
attached Mellin system, coset representatives of the twisted equations,
residue counting, and the integrality condition certifying that the
depressed trinomial factor is irreducible.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product


class ProfileError(ValueError):
    """Exponent data that does not define a valid equation."""


@dataclass(frozen=True)
class ExponentProfile:
    """The integers (m; m_1, ..., m_n) with their gcd and complements."""

    m: int
    m_list: tuple[int, ...]
    n: int
    d: int
    mprime_list: tuple[int, ...]

    def equation_str(self) -> str:
        vars_ = var_names(self.n)
        left = [f"y^{self.m}"]
        for x, mj in zip(vars_, self.m_list):
            left.append(f"{x} y^{mj}" if mj > 1 else f"{x} y")
        return " + ".join(left) + " - 1 = 0"


def var_names(n: int, letter: str = "x") -> list[str]:
    if n == 1:
        return [letter]
    return [f"{letter}{j + 1}" for j in range(n)]


def make_profile(m: int, m_list) -> ExponentProfile:
    """Validate (m; m_1 > ... > m_n > 0), m_1 < m, and fill in d and m'."""
    if not isinstance(m, int) or any(not isinstance(v, int) for v in m_list):
        raise ProfileError("exponents must be integers")
    ms = tuple(m_list)
    if not ms:
        raise ProfileError("at least one inner exponent m_1 is required")
    if ms[-1] <= 0:
        raise ProfileError(f"inner exponents must be positive, got {ms[-1]}")
    if any(a <= b for a, b in zip(ms, ms[1:])):
        raise ProfileError(f"inner exponents must be strictly decreasing: {ms}")
    if m <= ms[0]:
        raise ProfileError(f"leading exponent m={m} must exceed m_1={ms[0]}")
    d = math.gcd(m, *ms)
    return ExponentProfile(m=m, m_list=ms, n=len(ms), d=d,
                           mprime_list=tuple(m - mj for mj in ms))


def index_box(profile: ExponentProfile) -> list[tuple[int, ...]]:
    """All m^n initial exponents, lexicographically ordered."""
    return list(product(range(profile.m), repeat=profile.n))


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def principal_coefficient_vanishes(profile: ExponentProfile, nu) -> bool:
    """Whether the principal-solution coefficient at x^nu is zero.

    The numerator product runs over mu = 1 .. |nu|-1 and vanishes exactly
    when <M, nu> = m*mu - 1 for some mu in that range.
    """
    total = sum(nu)
    s = dot(profile.m_list, nu)
    for mu in range(1, total):
        if s - profile.m * mu + 1 == 0:
            return True
    return False


def algebraic_index_set(profile: ExponentProfile) -> list[tuple[int, ...]]:
    """The indices of B that occur in the principal root's expansion (B')."""
    return [nu for nu in index_box(profile)
            if not principal_coefficient_vanishes(profile, nu)]


def missing_index_set(profile: ExponentProfile) -> list[tuple[int, ...]]:
    """The complement B'' = B \\ B' of vanishing initial exponents."""
    return [nu for nu in index_box(profile)
            if principal_coefficient_vanishes(profile, nu)]


def missing_indices_by_congruence(profile: ExponentProfile) -> list[tuple[int, ...]]:
    """B'' computed from the congruence <M, nu> = -1 (mod m).

    Valid for any d: when d > 1 no index satisfies the congruence.  The one
    correction is nu = e_1 when m_1 = m - 1, whose only candidate mu equals
    |nu| and therefore lies outside the coefficient's product range.
    """
    m = profile.m
    out = []
    e1 = tuple(1 if j == 0 else 0 for j in range(profile.n))
    for nu in index_box(profile):
        if dot(profile.m_list, nu) % m == m - 1:
            if profile.m_list[0] == m - 1 and nu == e1:
                continue
            out.append(nu)
    return out


@dataclass(frozen=True)
class DimensionReport:
    rank: int
    dim_Y: int
    dim_R: int
    dim_S: int
    card_Bprime: int


def dims(profile: ExponentProfile) -> DimensionReport:
    """Rank and algebraic/logarithmic split of the Mellin solution space.

    For d > 1 every solution is algebraic, so dim Y = m^n and R = S = 0.
    For d = 1, dim Y = #B' follows the closed form m^n - m^{n-1} (+1 when
    m_1 = m - 1); the brute-force count of B' must agree, and a mismatch is
    a hard error rather than a tolerance issue.
    """
    m, n = profile.m, profile.n
    rank = m**n
    card = len(algebraic_index_set(profile))
    if profile.d > 1:
        dim_y, dim_r = rank, 0
    else:
        dim_y = rank - m ** (n - 1) + (1 if profile.m_list[0] == m - 1 else 0)
        dim_r = rank - dim_y
    if card != dim_y:
        raise RuntimeError(
            f"index-set count {card} disagrees with dimension formula {dim_y} "
            f"for profile ({m}, {list(profile.m_list)})")
    return DimensionReport(rank=rank, dim_Y=dim_y, dim_R=dim_r, dim_S=dim_r,
                           card_Bprime=card)


def coset_representatives(profile: ExponentProfile) -> list[tuple[int, ...]]:
    """Lexicographically smallest representatives of B modulo j*(m_1..m_n).

    The cyclic subgroup generated by (m_1, ..., m_n) in (Z/m)^n has order
    m/d, so there are d * m^{n-1} cosets.  The zero coset comes first.
    """
    m = profile.m
    step = tuple(mj % m for mj in profile.m_list)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for idx in index_box(profile):
        if idx in seen:
            continue
        reps.append(idx)
        cur = idx
        while True:
            seen.add(cur)
            cur = tuple((a + b) % m for a, b in zip(cur, step))
            if cur == idx:
                break
    return reps


def relation_basis(profile: ExponentProfile) -> list[tuple[Fraction, ...]]:
    """Basis of the root-sum relation space R in coordinates indexed by Gamma.

    For m_1 = m - 1 every representative equation has root sum -x_1 (all
    representatives share first coordinate 0), giving the differences
    e_1 - e_k; otherwise every root sum vanishes and the standard basis
    spans.  Defined only for d = 1.
    """
    if profile.d > 1:
        raise ProfileError("the relation space is defined only for d = 1")
    reps = coset_representatives(profile)
    k = len(reps)
    if profile.m_list[0] == profile.m - 1:
        # lex-smallest representatives necessarily have first coordinate 0
        assert all(rep[0] == 0 for rep in reps)
        basis = []
        for i in range(1, k):
            vec = [Fraction(0)] * k
            vec[0] = Fraction(1)
            vec[i] = Fraction(-1)
            basis.append(tuple(vec))
        return basis
    return [tuple(Fraction(1 if i == j else 0) for i in range(k))
            for j in range(k)]


def modular_count(profile: ExponentProfile, r: int) -> int:
    """#{nu in B : <M, nu> = r (mod m)}; equals m^{n-1} for every r if d = 1."""
    m = profile.m
    r %= m
    return sum(1 for nu in index_box(profile)
               if dot(profile.m_list, nu) % m == r)


def beukers_heckman_reducible(m: int) -> bool:
    """Integrality test for reducibility of the depressed trinomial factor.

    Checks whether (m*i - 1)/(m*(m-1)) + j/m is an integer for some
    i, j in {0, ..., m-2}.  Exact rational arithmetic; provably always
    False, which the test suite asserts exhaustively.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    for i in range(m - 1):
        for j in range(m - 1):
            val = Fraction(m * i - 1, m * (m - 1)) + Fraction(j, m)
            if val.denominator == 1:
                return True
    return False


def profile_suite(max_m: int, max_n: int, d_one_only: bool = True):
    """Enumerate all valid profiles with m <= max_m and n <= max_n."""
    out = []
    for m in range(2, max_m + 1):
        for n in range(1, max_n + 1):
            for combo in combinations(range(1, m), n):
                ms = tuple(sorted(combo, reverse=True))
                p = make_profile(m, ms)
                if d_one_only and p.d != 1:
                    continue
                out.append(p)
    return out
