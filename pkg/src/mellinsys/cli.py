"""Command-line front end.

Subcommands: ``dims`` (box/dimension combinatorics), ``operators``
(Mellin, cleared, and Horn operators plus the homogeneous matrices),
``series`` (principal / basis / root-branch expansions), ``verify``
(the full check battery for one profile).

Exit codes: 0 all checks pass, 1 usage or profile error, 2 verification
failure.  Output is deterministic for a fixed (arguments, seed) pair.
"""

from __future__ import annotations

import argparse
import cmath
import json
import sys
from dataclasses import dataclass

from . import roots as roots_mod
from .profiles import (ExponentProfile, ProfileError, algebraic_index_set,
                       coset_representatives, dims, index_box, make_profile,
                       missing_index_set, modular_count, relation_basis)
from .series import (TruncatedSeries, convenient_basis_series, format_series,
                     independence_rank, is_generating, principal_series,
                     rotate, scaled_root_series, series_to_json)
from .weyl import (DiffOperator, discriminant_poly, derivative_factorization,
                   horn_mellin_multiplier, horn_system, lattice_matrices,
                   leading_coefficient, mellin_system,
                   mellin_system_theta_form, poly_scale_ratio,
                   theta_factorization)

DEFAULT_ORDER = 12
DEFAULT_SEED = 0


@dataclass
class RunConfig:
    profile: ExponentProfile
    order: int = DEFAULT_ORDER
    seed: int = DEFAULT_SEED
    as_json: bool = False
    tol_annihilation: float = roots_mod.ANNIHILATION_TOL


class _Parser(argparse.ArgumentParser):
    """argparse variant exiting with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt_idx(idx) -> str:
    return "(" + ",".join(str(v) for v in idx) + ")"


def _fmt_vec(vec) -> str:
    return "(" + ",".join(str(v) for v in vec) + ")"


# ---------------------------------------------------------------------------
# dims
# ---------------------------------------------------------------------------

def cmd_dims(config: RunConfig) -> int:
    p = config.profile
    report = dims(p)
    bprime = algebraic_index_set(p)
    missing = missing_index_set(p)
    gamma = coset_representatives(p)
    if config.as_json:
        payload = {
            "profile": _profile_json(p),
            "rank": report.rank,
            "dim_Y": report.dim_Y,
            "dim_R": report.dim_R,
            "dim_S": report.dim_S,
            "card_Bprime": report.card_Bprime,
            "Bprime": [list(i) for i in bprime],
            "missing": [list(i) for i in missing],
            "gamma": [list(i) for i in gamma],
        }
        if p.d == 1:
            payload["modular_counts"] = [modular_count(p, r) for r in range(p.m)]
        print(json.dumps(payload, indent=2))
        return 0
    print(f"profile   : {p.equation_str()}   (m={p.m}, n={p.n}, d={p.d})")
    print(f"rank      : {report.rank}")
    print(f"dim Y     : {report.dim_Y}   (algebraic solutions)")
    print(f"dim R     : {report.dim_R}   (root-sum relations)")
    print(f"dim S     : {report.dim_S}   (logarithmic solutions)")
    print(f"B'  ({report.card_Bprime}): " + " ".join(_fmt_idx(i) for i in bprime))
    print(f"B'' ({len(missing)}): " +
          (" ".join(_fmt_idx(i) for i in missing) if missing else "-"))
    print(f"Gamma ({len(gamma)}): " + " ".join(_fmt_idx(i) for i in gamma))
    return 0


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def _render_op(op: DiffOperator) -> str:
    return op.render_ode() if op.n_vars == 1 else op.render()


def cmd_operators(config: RunConfig, check_horn: bool = False) -> int:
    p = config.profile
    mellin = mellin_system(p)
    cleared = mellin_system_theta_form(p)
    horn_w, horn_x = horn_system(p)
    lattice = lattice_matrices(p)
    if config.as_json:
        payload = {
            "profile": _profile_json(p),
            "mellin": [op.to_json() for op in mellin],
            "cleared": [op.to_json() for op in cleared],
            "horn_w": [op.to_json() for op in horn_w],
            "horn_x": [op.to_json() for op in horn_x],
            "matrices": {
                "A": [list(r) for r in lattice.A],
                "A_prime": [[str(v) for v in r] for r in lattice.A_prime],
                "B": [list(r) for r in lattice.B],
                "c": [str(v) for v in lattice.c],
                "beta": list(lattice.beta),
                "beta_prime": [str(v) for v in lattice.beta_prime],
                "horn_rank": lattice.horn_rank,
                "toric_pairs": [[list(u), list(v)]
                                for u, v in lattice.toric_pairs],
            },
        }
        if check_horn:
            payload["horn_mellin_multipliers"] = [
                str(horn_mellin_multiplier(p, j)) for j in range(p.n)]
        print(json.dumps(payload, indent=2))
        return 0
    print(f"profile: {p.equation_str()}")
    for j, op in enumerate(mellin):
        print(f"mellin[{j + 1}]  : {_render_op(op)}")
    for j, op in enumerate(cleared):
        print(f"cleared[{j + 1}] : {_render_op(op)}")
    for j, op in enumerate(horn_w):
        print(f"horn_w[{j + 1}]  : {op.render('w') if p.n > 1 else op.render_ode('w')}")
    for j, op in enumerate(horn_x):
        print(f"horn_x[{j + 1}]  : {_render_op(op)}")
    print("A       : " + "; ".join(_fmt_vec(r) for r in lattice.A))
    print("A'      : " + "; ".join(_fmt_vec(r) for r in lattice.A_prime))
    print("B       : " + "; ".join(_fmt_vec(r) for r in lattice.B))
    print(f"c       : {_fmt_vec(lattice.c)}")
    print(f"beta    : {_fmt_vec(lattice.beta)}   beta' : {_fmt_vec(lattice.beta_prime)}")
    print("toric   : " + "; ".join(f"D^{_fmt_vec(u)} - D^{_fmt_vec(v)}"
                                   for u, v in lattice.toric_pairs))
    if check_horn:
        ok = True
        for j in range(p.n):
            mult = horn_mellin_multiplier(p, j)
            lhs = horn_x[j].scale(mult)
            ok = ok and (lhs == cleared[j])
            print(f"horn->mellin[{j + 1}]: multiplier {mult} "
                  f"{'OK' if lhs == cleared[j] else 'MISMATCH'}")
        if not ok:
            return 2
        print("horn->mellin identity: OK")
    return 0


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def cmd_series(config: RunConfig, principal: bool, basis, show_roots: bool,
               generating_check: bool) -> int:
    p = config.profile
    chosen = []
    if principal:
        chosen.append(("principal", principal_series(p, config.order)))
    if basis is not None:
        idx = tuple(int(v) for v in basis.split(","))
        chosen.append((f"basis{_fmt_idx(idx)}",
                       convenient_basis_series(p, idx, config.order)))
    if show_roots:
        for j in range(p.m):
            chosen.append((f"root[{j}]", scaled_root_series(p, j, config.order)))
    if not chosen:
        raise ProfileError("nothing selected: use --principal, --basis or --roots")
    gen_result = None
    if generating_check:
        target = chosen[0][1]
        gen_result = is_generating(target, p)
    if config.as_json:
        payload = {
            "profile": _profile_json(p),
            "order": config.order,
            "series": [{"name": name, **series_to_json(s)}
                       for name, s in chosen],
        }
        if gen_result is not None:
            payload["generating"] = gen_result
        print(json.dumps(payload, indent=2))
        return 0
    for name, s in chosen:
        print(f"-- {name} (order {config.order}, ring {s.ring.name})")
        print(format_series(s))
    if gen_result is not None:
        print("GENERATING" if gen_result else "NOT GENERATING")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    detail: str


def _profile_json(p: ExponentProfile) -> dict:
    return {"m": p.m, "m_list": list(p.m_list), "n": p.n, "d": p.d}


def run_verification(config: RunConfig) -> list[Check]:
    """The full battery for one profile; every check is deterministic."""
    p = config.profile
    order = config.order
    tol = config.tol_annihilation
    checks: list[Check] = []

    def add(name, ok, detail):
        checks.append(Check(name=name, ok=bool(ok), detail=detail))

    report = dims(p)
    gamma = coset_representatives(p)
    ok_gamma = len(gamma) == p.d * p.m ** (p.n - 1)
    add("dimension-table", report.dim_Y + report.dim_S == report.rank
        and ok_gamma,
        f"rank {report.rank}, dim Y {report.dim_Y}, dim R {report.dim_R}, "
        f"|Gamma| {len(gamma)}")
    if p.d == 1:
        counts = {modular_count(p, r) for r in range(p.m)}
        add("modular-count", counts == {p.m ** (p.n - 1)},
            f"every residue hit {p.m ** (p.n - 1)} times")

    mellin = mellin_system(p)
    box = index_box(p)
    initial_ok = True
    annihilated = True
    for idx in box:
        f = convenient_basis_series(p, idx, order)
        initial_ok = initial_ok and f.coefficient(idx) == 1
        for op in mellin:
            if not op.apply(f).is_zero():
                annihilated = False
    add("basis-annihilation", annihilated and initial_ok,
        f"{len(box)} series, exact rational annihilation at order {order}")

    ypr = principal_series(p, order)
    gen = is_generating(ypr, p)
    add("generating-principal", gen == (report.card_Bprime == report.rank),
        f"principal solution {'is' if gen else 'is not'} generating; "
        f"|B'| = {report.card_Bprime}")

    rot_rank = independence_rank(
        [rotate(ypr, idx, p.m) for idx in box])
    add("rotation-rank", rot_rank == report.card_Bprime,
        f"rank of {len(box)} rotations = {rot_rank} (expected |B'| = "
        f"{report.card_Bprime})")

    cleared = mellin_system_theta_form(p)
    _, horn_x = horn_system(p)
    horn_ok = True
    mults = []
    for j in range(p.n):
        mult = horn_mellin_multiplier(p, j)
        mults.append(str(mult))
        horn_ok = horn_ok and horn_x[j].scale(mult) == cleared[j]
    add("horn-mellin", horn_ok, "multipliers " + ", ".join(mults))

    lattice = lattice_matrices(p)
    add("lattice-kernel", lattice.horn_rank == report.rank,
        f"A*B = 0; rank bookkeeping {lattice.horn_rank}")

    if p.n == 1:
        lead = leading_coefficient(mellin[0])
        disc = discriminant_poly(p.m, p.m_list[0])
        ratio = poly_scale_ratio(lead, disc)
        if p.d == 1:
            add("discriminant-leading", ratio is not None,
                f"leading coefficient = {ratio} * discriminant")
        else:
            add("discriminant-leading", True,
                "skipped: coincidence holds only for d = 1 "
                f"(proportionality here: {ratio})")

    dev = roots_mod.scaled_root_max_deviation(p, min(order, 8))
    add("scaled-roots", dev < roots_mod.SUBSTITUTION_TOL,
        f"max jet/rotation gap {dev:.3e} at order {min(order, 8)}")

    base = tuple(0.2 * cmath.exp(0.7j * (j + 1)) for j in range(p.n))
    inst = roots_mod.EquationInstance(p, (0,) * p.n, base)
    vals = roots_mod.roots_at_point(inst, seed=config.seed)
    coeffs = inst.poly_coefficients()
    vieta = sum(vals) + coeffs[p.m - 1] / coeffs[p.m]
    add("point-roots", len(vals) == p.m and abs(vieta) < 1e-9,
        f"{len(vals)} distinct roots at a fixed base point; "
        f"degree-1 symmetric residual {abs(vieta):.3e}")

    jets = roots_mod.lift_jets(roots_mod.origin_instance(p), order)
    total = roots_mod.jet_sum(jets)
    if p.m_list[0] == p.m - 1:
        expect = TruncatedSeries.variable(total.ring, p.n, order, 0)
        gap = (total + expect).max_abs()
    else:
        gap = total.max_abs()
    add("jet-root-sum", gap < roots_mod.SUBSTITUTION_TOL,
        f"sum of origin branches matches -[y^(m-1)] ({gap:.3e})")

    if p.d == 1:
        basis_r = relation_basis(p)
        rel_ok = True
        worst = 0.0
        for vec in basis_r:
            res = roots_mod.relation_check(p, vec, order)
            worst = max(worst, res)
            rel_ok = rel_ok and res < roots_mod.SUBSTITUTION_TOL
        add("relation-residuals", rel_ok,
            f"{len(basis_r)} basis vectors, worst residual {worst:.3e}")

        yjets = [jet.series for block in
                 roots_mod.coset_equation_jets(p, order) for jet in block]
        yrank = independence_rank(yjets, roots_mod.RANK_TOL)
        add("algebraic-span", yrank == report.dim_Y,
            f"rank of the {len(yjets)} coset-equation jets = {yrank} "
            f"(dim Y = {report.dim_Y})")

        chis = []
        chi_ok = True
        worst_chi = 0.0
        for vec in basis_r:
            sol = roots_mod.log_solution(p, vec, order)
            res = roots_mod.mellin_residual(p, sol.chi)
            worst_chi = max(worst_chi, res)
            chi_ok = chi_ok and res < tol
            chis.append(sol.chi)
        if basis_r:
            add("log-solutions", chi_ok,
                f"{len(chis)} logarithmic solutions, worst relative "
                f"residual {worst_chi:.3e}")
        full_rank = independence_rank(yjets + chis, roots_mod.RANK_TOL)
        add("direct-sum", full_rank == report.rank,
            f"rank(Y-jets + logs) = {full_rank} (expected {report.rank})")
    elif p.n == 1:
        witness = roots_mod.invariant_subspace_witness(p.m, p.m_list[0], order)
        blocks_ok = (all(r == p.m // p.d for r in witness.block_ranks)
                     and witness.joint_rank == p.m
                     and witness.max_residual < tol)
        add("invariant-subspaces", blocks_ok,
            f"block ranks {list(witness.block_ranks)}, joint "
            f"{witness.joint_rank}, residual {witness.max_residual:.3e}, "
            f"original roots span {witness.original_root_rank}")

    if p.n == 1 and p.m_list[0] == p.m - 1:
        try:
            fac = theta_factorization(p.m)
            add("theta-factorization", True,
                f"x^{fac.exponent} multiplier resolved "
                f"(closed form uses x^{p.m})")
        except ArithmeticError as exc:  # pragma: no cover - hard failure path
            add("theta-factorization", False, str(exc))
    if p.n == 1 and p.m_list[0] == 1:
        try:
            derivative_factorization(p.m)
            add("derivative-factorization", True,
                "left factor D splits off exactly")
        except ArithmeticError as exc:  # pragma: no cover - hard failure path
            add("derivative-factorization", False, str(exc))
    return checks


def cmd_verify(config: RunConfig) -> int:
    checks = run_verification(config)
    ok_all = all(c.ok for c in checks)
    if config.as_json:
        payload = {
            "profile": _profile_json(config.profile),
            "order": config.order,
            "seed": config.seed,
            "tolerances": {
                "annihilation": config.tol_annihilation,
                "substitution": roots_mod.SUBSTITUTION_TOL,
                "rank": roots_mod.RANK_TOL,
            },
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                       for c in checks],
            "equations": [
                roots_mod.equation_report(config.profile, rep, config.order,
                                          config.seed)
                for rep in coset_representatives(config.profile)],
            "ok": ok_all,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"profile: {config.profile.equation_str()}   "
              f"(order {config.order}, seed {config.seed})")
        for c in checks:
            print(f"{'ok  ' if c.ok else 'FAIL'} {c.name:24s} {c.detail}")
        print(f"{'all checks passed' if ok_all else 'VERIFICATION FAILED'} "
              f"({sum(c.ok for c in checks)}/{len(checks)})")
    return 0 if ok_all else 2


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("m", type=int, help="leading exponent m")
    sub.add_argument("m_list", type=int, nargs="+", metavar="mj",
                     help="inner exponents m_1 > ... > m_n")
    sub.add_argument("--order", type=int, default=DEFAULT_ORDER,
                     help="series truncation order (default 12)")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help="seed for root-finder perturbations (default 0)")
    sub.add_argument("--json", action="store_true", dest="as_json",
                     help="emit JSON (schema in docs/schema.md)")
    sub.add_argument("--tol-annihilation", type=float,
                     default=roots_mod.ANNIHILATION_TOL,
                     help="relative annihilation tolerance (default 1e-8)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mellinsys",
                     description="Mellin systems of sparse algebraic "
                                 "equations: bases, operators, verification")
    subs = parser.add_subparsers(dest="command", required=True)

    p_dims = subs.add_parser("dims", parents=[], help="dimension table and index sets")
    _add_common(p_dims)

    p_ops = subs.add_parser("operators", help="Mellin/Horn operators and matrices")
    _add_common(p_ops)
    p_ops.add_argument("--check-horn", action="store_true",
                       help="assert the Horn -> Mellin identity")

    p_ser = subs.add_parser("series", help="solution series expansions")
    _add_common(p_ser)
    p_ser.add_argument("--principal", action="store_true",
                       help="print the principal solution")
    p_ser.add_argument("--basis", metavar="I",
                       help="comma-separated initial exponent, e.g. 0,2")
    p_ser.add_argument("--roots", action="store_true",
                       help="print the m scaled root branches")
    p_ser.add_argument("--generating-check", action="store_true",
                       help="test whether the first selected series is generating")

    p_ver = subs.add_parser("verify", help="run the full verification battery")
    _add_common(p_ver)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        profile = make_profile(ns.m, ns.m_list)
        config = RunConfig(profile=profile, order=ns.order, seed=ns.seed,
                           as_json=ns.as_json,
                           tol_annihilation=ns.tol_annihilation)
        if ns.command == "dims":
            return cmd_dims(config)
        if ns.command == "operators":
            return cmd_operators(config, check_horn=ns.check_horn)
        if ns.command == "series":
            return cmd_series(config, principal=ns.principal, basis=ns.basis,
                              show_roots=ns.roots,
                              generating_check=ns.generating_check)
        if ns.command == "verify":
            return cmd_verify(config)
        parser.error(f"unknown command {ns.command}")
    except (ProfileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
