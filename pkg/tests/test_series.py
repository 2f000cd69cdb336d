"""Truncated series arithmetic and the solution-basis constructions.

The quadratic-equation oracle used throughout: for y^2 + x*y - 1 = 0 the
two roots are (-x +/- sqrt(x^2 + 4))/2, and sqrt(x^2 + 4) expands by the
binomial series with exact rational coefficients.  Expected values below
are frozen from that expansion.
"""

import random
from fractions import Fraction

import pytest

from mellinsys.profiles import index_box, make_profile
from mellinsys.rings import COMPLEX, RATIONAL, get_cyclotomic_ring
from mellinsys.series import (TruncatedSeries, convenient_basis_series,
                              exponents_up_to, format_series,
                              independence_rank, is_generating,
                              principal_coefficient, principal_series, rotate,
                              scaled_root_series, series_to_json, subseries)
from mellinsys.weyl import mellin_system


def binomial_half(k: int) -> Fraction:
    """C(1/2, k) with exact rationals."""
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(1, 2) - i
    for i in range(2, k + 1):
        num /= i
    return num


def sqrt_x2_plus_4(order: int) -> TruncatedSeries:
    """sqrt(x^2 + 4) = 2 * sum_k C(1/2,k) (x^2/4)^k, exact."""
    terms = {}
    for k in range(order // 2 + 1):
        c = 2 * binomial_half(k) * Fraction(1, 4) ** k
        if c:
            terms[(2 * k,)] = c
    return TruncatedSeries(RATIONAL, 1, order, terms)


def quadratic_principal_root(order: int) -> TruncatedSeries:
    minus_x = TruncatedSeries(RATIONAL, 1, order, {(1,): Fraction(-1)})
    return (minus_x + sqrt_x2_plus_4(order)).scale_rational(Fraction(1, 2))


# ---------------------------------------------------------------------------
# principal series
# ---------------------------------------------------------------------------

def test_principal_series_quadratic_against_oracle():
    got = principal_series(make_profile(2, [1]), 10)
    want = quadratic_principal_root(10)
    assert got.terms == want.terms
    # frozen leading values from the oracle
    assert got.coefficient((0,)) == 1
    assert got.coefficient((1,)) == Fraction(-1, 2)
    assert got.coefficient((2,)) == Fraction(1, 8)
    assert got.coefficient((3,)) == 0
    assert got.coefficient((4,)) == Fraction(-1, 128)


def test_principal_constant_term_always_one():
    for (m, ms) in [(2, [1]), (3, [2, 1]), (6, [4, 2]), (5, [3])]:
        p = make_profile(m, ms)
        assert principal_coefficient(p, (0,) * p.n) == 1


def test_principal_linear_coefficients_general_cubic():
    p = make_profile(3, [2, 1])
    assert principal_coefficient(p, (1, 0)) == Fraction(-1, 3)
    assert principal_coefficient(p, (0, 1)) == Fraction(-1, 3)


# ---------------------------------------------------------------------------
# basis by recurrence
# ---------------------------------------------------------------------------

def test_basis_series_quadratic():
    p = make_profile(2, [1])
    f1 = convenient_basis_series(p, (1,), 8)
    assert f1.terms == {(1,): Fraction(1)}  # the rational solution x
    f0 = convenient_basis_series(p, (0,), 8)
    # proportional to sqrt(x^2+4): normalized constant term is 1
    want = sqrt_x2_plus_4(8).scale_rational(Fraction(1, 2))
    assert f0.terms == want.terms


def _binomial_frac(alpha: Fraction, k: int) -> Fraction:
    num = Fraction(1)
    for i in range(k):
        num *= alpha - i
    for i in range(2, k + 1):
        num /= i
    return num


def _rational_power(series: TruncatedSeries, alpha: Fraction) -> TruncatedSeries:
    """(c0 + u)^alpha for exact series with c0 a perfect power base of 1.

    Requires constant term exactly 1; expands by the binomial series."""
    assert series.coefficient((0,) * series.n_vars) == 1
    u = series + TruncatedSeries.constant(RATIONAL, series.n_vars,
                                          series.order, Fraction(-1))
    out = TruncatedSeries.constant(RATIONAL, series.n_vars, series.order,
                                   Fraction(1))
    power = TruncatedSeries.constant(RATIONAL, series.n_vars, series.order,
                                     Fraction(1))
    for k in range(1, series.order + 1):
        power = power * u
        if power.is_zero():
            break
        out = out + power.scale_rational(_binomial_frac(alpha, k))
    return out


def test_basis_series_depressed_cubic_against_radical_oracle():
    """For y^3 + x y - 1 = 0 the two algebraic directions have the closed
    forms z1 = (108 + 12*sqrt(12x^3 + 81))^(1/3) and z2 = x / z1; the
    recurrence-built series must match their exact binomial expansions
    after normalizing the leading coefficient to 1.
    """
    order = 12
    x3 = TruncatedSeries(RATIONAL, 1, order, {(3,): Fraction(12, 81),
                                              (0,): Fraction(1)})
    sqrt_part = _rational_power(x3, Fraction(1, 2)).scale_rational(9)
    inner = (TruncatedSeries.constant(RATIONAL, 1, order, Fraction(108))
             + sqrt_part.scale_rational(12)).scale_rational(Fraction(1, 216))
    z1_over_6 = _rational_power(inner, Fraction(1, 3))
    p = make_profile(3, [1])
    f0 = convenient_basis_series(p, (0,), order)
    assert f0.terms == z1_over_6.terms
    assert f0.coefficient((3,)) == Fraction(1, 81)
    assert f0.coefficient((6,)) == Fraction(-4, 6561)
    # z2 = x / z1, normalized so the x-coefficient is 1
    x_series = TruncatedSeries(RATIONAL, 1, order, {(1,): Fraction(1)})
    z2_norm = x_series * z1_over_6.inverse()
    f1 = convenient_basis_series(p, (1,), order)
    assert f1.terms == z2_norm.terms
    assert f1.coefficient((4,)) == Fraction(-1, 81)


def test_basis_series_initial_monomial_only_at_low_order():
    p = make_profile(3, [2, 1])
    for idx in [(2, 2), (1, 0), (0, 0)]:
        f = convenient_basis_series(p, idx, sum(idx))
        assert f.terms == {idx: Fraction(1)}


def test_basis_series_support_lattice():
    p = make_profile(3, [2, 1])
    for idx in index_box(p):
        f = convenient_basis_series(p, idx, 12)
        assert f.coefficient(idx) == 1
        for s in f.terms:
            assert all((si - ii) % 3 == 0 and si >= ii
                       for si, ii in zip(s, idx))


def test_basis_series_rejects_outside_box():
    p = make_profile(3, [2, 1])
    with pytest.raises(Exception):
        convenient_basis_series(p, (3, 0), 8)


@pytest.mark.parametrize("m,ms", [(2, [1]), (3, [1]), (3, [2]), (4, [2]),
                                  (3, [2, 1])])
def test_basis_series_annihilated_exactly(m, ms):
    p = make_profile(m, ms)
    ops = mellin_system(p)
    for idx in index_box(p):
        f = convenient_basis_series(p, idx, 10)
        for op in ops:
            assert op.apply(f).is_zero()


def test_rotations_annihilated_exactly_in_group_ring():
    # rotated principal roots are solutions; over Q[Z/m] the operators
    # kill them identically, with no numerics anywhere
    p = make_profile(3, [2, 1])
    ops = mellin_system(p)
    y = principal_series(p, 9)
    for idx in [(1, 0), (2, 2), (1, 2)]:
        r = rotate(y, idx, 3)
        for op in ops:
            assert op.apply(r).is_zero()


def test_basis_recurrence_path_independent():
    # fill along the last nonzero coordinate instead and compare
    p = make_profile(3, [2, 1])
    from mellinsys.series import _pj_value
    for idx in [(0, 0), (1, 2)]:
        f = convenient_basis_series(p, idx, 12)
        budget = (12 - sum(idx)) // 3
        psi = {(0, 0): Fraction(1)}
        for q in exponents_up_to(2, budget):
            if q == (0, 0):
                continue
            j = max(i for i, v in enumerate(q) if v > 0)
            prev = tuple(v - 1 if i == j else v for i, v in enumerate(q))
            s = tuple(3 * v for v in prev)
            num = _pj_value(p, j, tuple(a + b for a, b in zip(s, idx)))
            den = (-1) ** p.m_list[j] * 27
            for k in range(3):
                den *= s[j] + 3 + idx[j] - k
            psi[q] = psi[prev] * Fraction(num, den)
        for q, val in psi.items():
            exp = tuple(i + 3 * v for i, v in zip(idx, q))
            assert f.coefficient(exp) == val


# ---------------------------------------------------------------------------
# rotations and scaled roots
# ---------------------------------------------------------------------------

def test_rotate_by_zero_is_identity():
    p = make_profile(3, [2, 1])
    y = principal_series(p, 6)
    r = rotate(y, (0, 0), 3)
    ring = get_cyclotomic_ring(3)
    assert r.terms == {s: ring.from_rational(c) for s, c in y.terms.items()}


def test_rotate_sign_flip():
    # m = 2: rotating 1 - x/2 by (1) flips odd-degree signs
    y = principal_series(make_profile(2, [1]), 1)
    r = rotate(y, (1,), 2)
    ring = get_cyclotomic_ring(2)
    assert r.coefficient((0,)) == ring.from_rational(1)
    # -1/2 * e^1
    assert r.coefficient((1,)) == ring.scale_rational(ring.root(1), Fraction(-1, 2))


def test_rotate_pure_subseries_scales():
    p = make_profile(3, [2, 1])
    y = principal_series(p, 9).to_cyclotomic(3)
    ring = y.ring
    for big_i in [(1, 0), (2, 2), (1, 2)]:
        for j_idx in [(0, 1), (1, 1), (2, 0)]:
            f = subseries(y, j_idx, 3)
            lhs = rotate(f, big_i)
            phase = sum(a * b for a, b in zip(big_i, j_idx))
            rhs = f.scale(ring.root(phase))
            assert lhs.terms == rhs.terms


def test_scaled_root_series_branch_zero_is_principal():
    p = make_profile(3, [2, 1])
    y = scaled_root_series(p, 0, 6)
    ring = y.ring
    want = principal_series(p, 6)
    assert y.terms == {s: ring.from_rational(c) for s, c in want.terms.items()}


def test_scaled_root_series_quadratic_second_branch():
    # (-x - sqrt(x^2+4))/2 = -1 - x/2 - x^2/8 + ...
    y = scaled_root_series(make_profile(2, [1]), 1, 8)
    oracle = (quadratic_principal_root(8)
              - sqrt_x2_plus_4(8)).to_complex()
    diff = y.to_complex() - oracle
    assert diff.max_abs() < 1e-14


@pytest.mark.parametrize("m,ms", [(2, [1]), (3, [2]), (3, [2, 1]), (4, [2]),
                                  (6, [4, 2])])
def test_scaled_roots_satisfy_equation_exactly(m, ms):
    # group-ring arithmetic: substitution vanishes identically
    p = make_profile(m, ms)
    order = 8
    ring = get_cyclotomic_ring(m)
    xs = [TruncatedSeries.variable(RATIONAL, p.n, order, j).to_cyclotomic(m)
          for j in range(p.n)]
    one = TruncatedSeries.constant(ring, p.n, order, ring.one)
    for j in range(m):
        y = scaled_root_series(p, j, order)
        total = y**m - one
        for xj, mj in zip(xs, p.m_list):
            total = total + xj * y**mj
        assert total.is_zero()


# ---------------------------------------------------------------------------
# subseries / generating
# ---------------------------------------------------------------------------

def test_subseries_missing_class_is_zero():
    p = make_profile(3, [2, 1])
    y = principal_series(p, 12)
    assert subseries(y, (2, 1), 3).is_zero()
    assert subseries(y, (0, 2), 3).is_zero()


def test_subseries_of_monomial():
    s = TruncatedSeries(RATIONAL, 2, 6, {(1, 2): Fraction(5)})
    assert subseries(s, (1, 2), 3).terms == s.terms


def test_subseries_partition():
    rng = random.Random(7)
    terms = {e: Fraction(rng.randint(-5, 5)) for e in exponents_up_to(2, 7)}
    y = TruncatedSeries(RATIONAL, 2, 7, terms)
    total = TruncatedSeries.zero(RATIONAL, 2, 7)
    for idx in index_box(make_profile(3, [2, 1])):
        total = total + subseries(y, idx, 3)
    assert total.terms == y.terms


def test_rational_solution_class_collapses_to_monomial():
    # for m_1 = m - 1 the e_1 congruence class of the principal root
    # carries the single term of the rational solution x_1
    p = make_profile(3, [2, 1])
    y = principal_series(p, 12)
    f = subseries(y, (1, 0), 3)
    assert list(f.terms) == [(1, 0)]


def test_is_generating():
    assert is_generating(principal_series(make_profile(6, [4, 2]), 10),
                         make_profile(6, [4, 2]))
    assert not is_generating(principal_series(make_profile(3, [2, 1]), 6),
                             make_profile(3, [2, 1]))


def test_sum_of_basis_is_generating():
    p = make_profile(3, [2, 1])
    total = TruncatedSeries.zero(RATIONAL, 2, 6)
    for idx in index_box(p):
        total = total + convenient_basis_series(p, idx, 6)
    assert is_generating(total, p)


def test_is_generating_rejects_low_order():
    p = make_profile(3, [2, 1])
    with pytest.raises(ValueError):
        is_generating(principal_series(p, 3), p)


# ---------------------------------------------------------------------------
# independence ranks
# ---------------------------------------------------------------------------

def test_rank_of_quadratic_basis():
    p = make_profile(2, [1])
    f0 = convenient_basis_series(p, (0,), 8)
    f1 = convenient_basis_series(p, (1,), 8)
    assert independence_rank([f0, f1]) == 2
    assert independence_rank([f0, f0]) == 1
    assert independence_rank([f0, f0.scale_rational(3)]) == 1


def test_rank_of_rotations_matches_survivor_count():
    p = make_profile(4, [2])
    y = principal_series(p, 12)
    rots = [rotate(y, (j,), 4) for j in range(4)]
    assert independence_rank(rots) == 4
    p = make_profile(3, [2, 1])
    y = principal_series(p, 12)
    rots = [rotate(y, idx, 3) for idx in index_box(p)]
    assert independence_rank(rots) == 7


def test_vandermonde_rotation_rank():
    # rotations of the all-ones box polynomial have full rank m^n: the
    # coefficient matrix is exactly (e^{<I,J>})_{I,J}
    from itertools import product
    for (m, n) in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2)]:
        box = list(product(range(m), repeat=n))
        order = n * (m - 1)
        g = TruncatedSeries(RATIONAL, n, order,
                            {idx: Fraction(1) for idx in box})
        rots = [rotate(g, idx, m) for idx in box]
        assert independence_rank(rots) == m**n


def test_rank_ring_mismatch():
    a = TruncatedSeries(RATIONAL, 1, 4, {(0,): Fraction(1)})
    b = a.to_cyclotomic(3)
    with pytest.raises(ValueError):
        independence_rank([a, b])


def test_rank_cyclotomic_scalar_multiple_collapses():
    # e * s is a complex multiple of s: complex rank 1, even though the
    # group-ring coordinate vectors are linearly independent over Q
    ring = get_cyclotomic_ring(4)
    s = TruncatedSeries(ring, 1, 3,
                        {(0,): ring.root(0), (1,): ring.root(2)})
    t = s.scale(ring.root(1))
    assert independence_rank([s, t]) == 1


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def test_log_mercator():
    one_plus_x = TruncatedSeries(RATIONAL, 1, 3,
                                 {(0,): Fraction(1), (1,): Fraction(1)})
    got = one_plus_x.log()
    assert got.terms == {(1,): Fraction(1), (2,): Fraction(-1, 2),
                         (3,): Fraction(1, 3)}


def test_log_requires_unit_constant():
    s = TruncatedSeries(RATIONAL, 1, 3, {(1,): Fraction(1)})
    with pytest.raises(ZeroDivisionError):
        s.log()
    two = TruncatedSeries(RATIONAL, 1, 3, {(0,): Fraction(2)})
    with pytest.raises(ValueError):
        two.log()


def test_log_complex_constant_folded():
    import cmath
    s = TruncatedSeries(COMPLEX, 1, 4, {(0,): 2.0 + 0j, (1,): 1.0 + 0j})
    got = s.log()
    assert abs(got.coefficient((0,)) - cmath.log(2)) < 1e-14
    assert abs(got.coefficient((1,)) - 0.5) < 1e-14


def test_diff():
    s = TruncatedSeries(RATIONAL, 1, 4, {(2,): Fraction(1)})
    d = s.diff(0)
    assert d.terms == {(1,): Fraction(2)}
    assert d.order == 3


def test_mul_truncates_to_min_order():
    a = TruncatedSeries(RATIONAL, 1, 2, {(0,): Fraction(1), (1,): Fraction(-1, 2)})
    b = TruncatedSeries(RATIONAL, 1, 2, {(0,): Fraction(1), (1,): Fraction(1, 2)})
    prod = a * b
    assert prod.order == 2
    assert prod.terms == {(0,): Fraction(1), (2,): Fraction(-1, 4)}


def test_inverse_geometric():
    s = TruncatedSeries(RATIONAL, 1, 5, {(0,): Fraction(1), (1,): Fraction(-1)})
    inv = s.inverse()
    assert inv.terms == {(k,): Fraction(1) for k in range(6)}
    assert (s * inv).terms == {(0,): Fraction(1)}


def test_pow_binary():
    s = TruncatedSeries(RATIONAL, 1, 4, {(0,): Fraction(1), (1,): Fraction(1)})
    assert (s**4).coefficient((2,)) == 6  # C(4,2)
    assert (s**0).terms == {(0,): Fraction(1)}


def test_evaluate():
    s = TruncatedSeries(RATIONAL, 2, 3, {(1, 0): Fraction(2), (0, 2): Fraction(1)})
    assert abs(s.evaluate((0.5, 2.0)) - (1.0 + 4.0)) < 1e-14


def test_complex_prune_relative():
    s = TruncatedSeries(COMPLEX, 1, 3, {(0,): 1.0, (1,): 1e-14})
    assert (1,) not in s.terms
    t = TruncatedSeries(COMPLEX, 1, 3, {(0,): 1e-13, (1,): 1e-14})
    assert not t.terms  # floor 1 applies when everything is tiny


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_series_json_and_text_are_deterministic():
    p = make_profile(3, [2, 1])
    y = principal_series(p, 4)
    j1, j2 = series_to_json(y), series_to_json(y)
    assert j1 == j2
    assert j1["ring"] == "rational"
    assert j1["terms"][0] == {"exp": [0, 0], "coeff": "1"}
    assert format_series(y) == format_series(principal_series(p, 4))
    cy = series_to_json(y.to_cyclotomic(3))
    assert cy["m"] == 3
    assert cy["terms"][0]["coeff"] == ["1", "0", "0"]
    cz = series_to_json(y.to_complex())
    assert cz["terms"][0]["coeff"] == [1.0, 0.0]
