"""Numeric branches, logarithmic solutions, and rank witnesses."""

import cmath
import random
from fractions import Fraction

import numpy as np
import pytest

from mellinsys.profiles import make_profile
from mellinsys.rings import COMPLEX
from mellinsys.roots import (ANNIHILATION_TOL, RANK_TOL, SUBSTITUTION_TOL,
                             EquationInstance, RootFindingError,
                             coset_equation_jets, elementary_symmetric,
                             invariant_subspace_witness, jet_sum, lift_jets,
                             log_solution, mellin_residual, origin_instance,
                             relation_check, roots_at_point,
                             scaled_root_identity_check,
                             scaled_root_max_deviation)
from mellinsys.series import (TruncatedSeries, exponents_up_to,
                              independence_rank)
from mellinsys.profiles import ProfileError

F = Fraction


# ---------------------------------------------------------------------------
# scalar roots
# ---------------------------------------------------------------------------

def test_roots_at_origin_quadratic():
    vals = roots_at_point(origin_instance(make_profile(2, [1])))
    assert sorted(round(v.real, 9) for v in vals) == [-1.0, 1.0]
    assert all(abs(v.imag) < 1e-12 for v in vals)


def test_roots_at_origin_cube_roots_of_unity():
    vals = roots_at_point(origin_instance(make_profile(3, [2, 1])))
    expect = [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]
    for w in expect:
        assert min(abs(v - w) for v in vals) < 1e-12


def test_roots_depressed_cubic_at_one():
    inst = EquationInstance(make_profile(3, [1]), (0,), (1.0,))
    vals = roots_at_point(inst)
    assert abs(sum(vals)) < 1e-12  # no y^2 term
    for v in vals:
        assert abs(v**3 + v - 1) < 1e-12


def test_roots_detect_discriminant_collision():
    # y^2 + x y - 1 has discriminant x^2 + 4 = 0 at x = 2i
    inst = EquationInstance(make_profile(2, [1]), (0,), (2j,))
    with pytest.raises(RootFindingError):
        roots_at_point(inst)


def test_roots_deterministic_for_fixed_seed():
    inst = EquationInstance(make_profile(4, [2]), (0,), (0.3 + 0.1j,))
    assert roots_at_point(inst, seed=5) == roots_at_point(inst, seed=5)


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------

def test_jet_branch_zero_quadratic():
    jets = lift_jets(origin_instance(make_profile(2, [1])), 8)
    s = jets[0].series
    for exp, want in [((0,), 1), ((1,), -0.5), ((2,), 0.125),
                      ((4,), -1 / 128), ((6,), 1 / 1024)]:
        assert abs(s.coefficient(exp) - want) < 1e-13
    assert abs(jets[1].constant() + 1) < 1e-13


def test_jet_constants_are_roots_of_unity():
    p = make_profile(6, [4, 2])
    jets = lift_jets(origin_instance(p), 4)
    for b, jet in enumerate(jets):
        assert abs(jet.constant() - cmath.exp(2j * cmath.pi * b / 6)) < 1e-12


def test_jets_require_origin():
    inst = EquationInstance(make_profile(2, [1]), (0,), (0.1,))
    with pytest.raises(ProfileError):
        lift_jets(inst, 4)


@pytest.mark.parametrize("m,ms", [(2, [1]), (3, [1]), (3, [2, 1]), (6, [4, 2])])
def test_jet_sum_is_minus_subleading_coefficient(m, ms):
    p = make_profile(m, ms)
    for rep in [(0,) * p.n, (1,) + (0,) * (p.n - 1)]:
        jets = lift_jets(origin_instance(p, rep), 8)
        total = jet_sum(jets)
        if p.m_list[0] == m - 1:
            eps = cmath.exp(2j * cmath.pi / m)
            x1 = TruncatedSeries.variable(COMPLEX, p.n, 8, 0)
            gap = (total + x1.scale(eps ** rep[0])).max_abs()
        else:
            gap = total.max_abs()
        assert gap < SUBSTITUTION_TOL


@pytest.mark.parametrize("m,ms", [(2, [1]), (3, [2]), (4, [2]), (3, [2, 1])])
def test_full_vieta_at_series_level(m, ms):
    p = make_profile(m, ms)
    jets = lift_jets(origin_instance(p), 6)
    elems = elementary_symmetric([j.series for j in jets], 6)
    coeffs = {mj: TruncatedSeries.variable(COMPLEX, p.n, 6, j)
              for j, mj in enumerate(p.m_list)}
    for k in range(1, m + 1):
        want = coeffs.get(m - k, TruncatedSeries.zero(COMPLEX, p.n, 6))
        if k == m:
            want = want - TruncatedSeries.constant(COMPLEX, p.n, 6, 1.0)
        gap = (elems[k - 1] - want.scale_rational((-1) ** k)).max_abs()
        assert gap < SUBSTITUTION_TOL


def test_general_cubic_root_combinations_match_closed_forms():
    """Combinations of the three origin jets reproduce the classical
    Cardano-component expansions of y^3 + x1 y^2 + x2 y - 1 = 0:

        u2 = 6 + 2/3 x1 x2 - 4/27 x1^3 + 2/27 x2^3 - 4/27 x1^2 x2^2 + ...
        u3 = 1/2 x2 - 1/6 x1^2 - 1/18 x1 x2^2 + ...

    The combination coefficients are fixed by the constant and linear
    terms; the higher displayed coefficients are then forced.
    """
    p = make_profile(3, [2, 1])
    jets = lift_jets(origin_instance(p), 6)
    cols = [(0, 0), (1, 0), (0, 1)]
    mat = np.array([[jet.series.coefficient(e) for jet in jets] for e in cols])

    def combine(target_low):
        c = np.linalg.solve(mat, np.array(target_low, dtype=complex))
        total = TruncatedSeries.zero(COMPLEX, 2, 6)
        for ck, jet in zip(c, jets):
            total = total + jet.series.scale(complex(ck))
        return total

    u3 = combine([0.0, 0.0, 0.5])
    assert abs(u3.coefficient((2, 0)) - (-1 / 6)) < 1e-9
    assert abs(u3.coefficient((1, 2)) - (-1 / 18)) < 1e-9

    u2 = combine([6.0, 0.0, 0.0])
    assert abs(u2.coefficient((1, 1)) - 2 / 3) < 1e-9
    assert abs(u2.coefficient((3, 0)) - (-4 / 27)) < 1e-9
    assert abs(u2.coefficient((0, 3)) - 2 / 27) < 1e-9
    assert abs(u2.coefficient((2, 2)) - (-4 / 27)) < 1e-9


@pytest.mark.parametrize("m,ms", [(2, [1]), (3, [1]), (3, [2]), (4, [2]),
                                  (6, [2]), (6, [3]), (3, [2, 1]),
                                  (6, [4, 2])])
def test_scaled_root_identity(m, ms):
    p = make_profile(m, ms)
    assert scaled_root_max_deviation(p, 8) < 1e-10
    assert scaled_root_identity_check(p, 8)


# ---------------------------------------------------------------------------
# relations and logarithmic solutions
# ---------------------------------------------------------------------------

def test_relation_check_general_cubic():
    p = make_profile(3, [2, 1])
    assert relation_check(p, [F(1), F(-1), F(0)], 10) < 1e-10
    assert relation_check(p, [F(1), F(0), F(-1)], 10) < 1e-10
    # root sums equal -x1, so a lone coset is NOT a relation
    assert relation_check(p, [F(1), F(0), F(0)], 10) > 1e-3


def test_relation_check_depressed_cubic():
    assert relation_check(make_profile(3, [1]), [F(1)], 10) < 1e-10


def test_relation_check_errors():
    p = make_profile(3, [2, 1])
    with pytest.raises(ValueError):
        relation_check(p, [F(1)], 8)
    with pytest.raises(ProfileError):
        relation_check(make_profile(4, [2]), [F(1), F(0)], 8)


def test_log_solution_zero_vector():
    p = make_profile(3, [1])
    sol = log_solution(p, [F(0)], 8)
    assert sol.chi.is_zero()
    assert sol.constant_offsets == ()


def test_log_solution_rejects_non_relation():
    p = make_profile(3, [2, 1])
    with pytest.raises(ValueError):
        log_solution(p, [F(1), F(0), F(0)], 10)


def test_log_solution_matches_pointwise_evaluation():
    # chi = sum_i y_i log y_i evaluated via the series must agree with the
    # same expression computed from scalar roots at a nearby point
    p = make_profile(3, [1])
    order = 14
    sol = log_solution(p, [F(1)], order)
    x0 = 0.05
    vals = roots_at_point(EquationInstance(p, (0,), (x0,)))
    direct = 0j
    for y in vals:
        b = min(range(3), key=lambda k: abs(y - cmath.exp(2j * cmath.pi * k / 3)))
        logy = cmath.log(y * cmath.exp(-2j * cmath.pi * b / 3)) \
            + 2j * cmath.pi * b / 3
        direct += y * logy
    assert abs(sol.chi.evaluate((x0,)) - direct) < 1e-10


def test_log_solution_offsets_are_exact():
    p = make_profile(3, [1])
    sol = log_solution(p, [F(1)], 8)
    assert sol.constant_offsets == ((0, 1, F(1, 3)), (0, 2, F(2, 3)))


def test_chi_annihilated_depressed_cubic():
    p = make_profile(3, [1])
    sol = log_solution(p, [F(1)], 12)
    assert mellin_residual(p, sol.chi) < ANNIHILATION_TOL


def test_chi_annihilated_general_cubic_and_direct_sum():
    p = make_profile(3, [2, 1])
    yjets = [j.series for block in coset_equation_jets(p, 12) for j in block]
    assert independence_rank(yjets, RANK_TOL) == 7
    chis = []
    for c in ([F(1), F(-1), F(0)], [F(1), F(0), F(-1)]):
        sol = log_solution(p, c, 12)
        assert mellin_residual(p, sol.chi) < ANNIHILATION_TOL
        chis.append(sol.chi)
    assert independence_rank(yjets + chis, RANK_TOL) == 9


def test_root_jets_are_annihilated():
    p = make_profile(3, [2, 1])
    for block in coset_equation_jets(p, 12):
        for jet in block:
            assert mellin_residual(p, jet.series) < ANNIHILATION_TOL


def test_random_series_not_annihilated():
    rng = random.Random(0)
    p = make_profile(3, [2, 1])
    terms = {e: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
             for e in exponents_up_to(2, 12)}
    junk = TruncatedSeries(COMPLEX, 2, 12, terms)
    assert mellin_residual(p, junk) > 1e-3


def test_mellin_residual_requires_headroom():
    p = make_profile(3, [1])
    tiny = TruncatedSeries(COMPLEX, 1, 4, {(0,): 1.0})
    with pytest.raises(ValueError):
        mellin_residual(p, tiny)


# ---------------------------------------------------------------------------
# invariant subspaces
# ---------------------------------------------------------------------------

def test_invariant_subspaces_quartic():
    w = invariant_subspace_witness(4, 2, 10)
    assert w.d == 2
    assert w.block_ranks == (2, 2)
    assert w.joint_rank == 4
    assert w.max_residual < ANNIHILATION_TOL
    assert w.original_root_rank == 2


def test_invariant_subspaces_sextic():
    w = invariant_subspace_witness(6, 2, 10)
    assert w.block_ranks == (3, 3)
    assert w.joint_rank == 6
    assert w.max_residual < ANNIHILATION_TOL


def test_polyquadratic_roots_span_dimension_two():
    for k in (2, 3):
        w = invariant_subspace_witness(2 * k, k, 10)
        assert w.original_root_rank == 2
        assert w.joint_rank == 2 * k
        assert all(r == 2 for r in w.block_ranks)


# ---------------------------------------------------------------------------
# per-equation reports
# ---------------------------------------------------------------------------

def test_equation_report_shape_and_values():
    from mellinsys.roots import equation_report
    p = make_profile(3, [2, 1])
    rep = equation_report(p, (0, 1), 10)
    assert rep["twist"] == [0, 1]
    assert rep["profile"]["m_list"] == [2, 1]
    assert rep["rank"] == 3
    assert rep["substitution_residual"] < SUBSTITUTION_TOL
    assert rep["annihilation_residual"] < ANNIHILATION_TOL
    import json
    assert json.loads(json.dumps(rep)) == rep


def test_aberth_rejects_degenerate_polynomial():
    from mellinsys.roots import aberth_roots
    with pytest.raises(RootFindingError):
        aberth_roots([1.0])  # constant
    with pytest.raises(RootFindingError):
        aberth_roots([0.0, 0.0])  # zero after trimming
