"""
Gestionnaires des sous-commandes: chaque fonction reçoit les arguments
analysés et renvoie un ReportDocument. Les erreurs remontent à main().
"""

from __future__ import annotations

import argparse
import hashlib
import math
from pathlib import Path

from pydantic import ValidationError

from .area import area_monotonicity_check, class_constants, schwarz_distortion
from .bounds import (
    R0,
    bound_H_alpha,
    bound_constants,
    bound_HC,
    bound_quasiregular,
    envelope_H_alpha,
    envelope_H_alpha_e,
    envelope_HC,
    optimal_radius,
    q_constant,
    verify_map_bounds,
)
from .core import DomainError, InputError
from .landau import landau_radii, landau_report
from .lipschitz import equivalence_witness, fully_convex_check, sandwich_check, schwarz_pick_ratio
from .norms import (
    bloch_norm,
    bloch_seminorm,
    bmo_bound_majorant,
    bmo_norm,
    boundary_trace,
    colonna_ratio_sup,
    gradient_majorant_check,
    minimal_majorant_constant,
    quasiregular_bmo_bound,
)
from .schemas import GRID_PRESETS, CheckOutcome, DiskGrid, Majorant, MappingSpecFile, ReportDocument
from .series import HarmonicMap

EXPECT_RTOL = 1e-6
BMO_SLACK = 1e-6
COLONNA_RTOL = 0.02


def load_mapping(path: str) -> tuple[MappingSpecFile, str]:
    """Lit un fichier JSON de description d'application; renvoie (spec, empreinte sha256)."""
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"lecture impossible de {path}: {e.strerror}") from e
    try:
        spec = MappingSpecFile.model_validate_json(raw)
    except ValidationError as e:
        raise InputError(f"fichier invalide {path}: {e}") from e
    return spec, hashlib.sha256(raw).hexdigest()[:16]


def _grid(args: argparse.Namespace) -> DiskGrid:
    if args.grid not in GRID_PRESETS:
        raise InputError(f"maillage inconnu: {args.grid} (choix: {', '.join(sorted(GRID_PRESETS))})")
    return GRID_PRESETS[args.grid]


def _document(args: argparse.Namespace, digest: str | None = None, **fields) -> ReportDocument:
    return ReportDocument(command=args.command, input_digest=digest, seed=args.seed, grid=args.grid, **fields)


def _ratio_outcome(name: str, value: float, bound: float, slack: float = 0.0) -> CheckOutcome:
    return CheckOutcome(name=name, passed=value <= bound + slack, value=value, bound=bound, margin=bound - value)


def _expectation_checks(spec: MappingSpecFile, computed: dict[str, float]) -> list[CheckOutcome]:
    if spec.expected is None:
        return []
    out = []
    for key, expected in spec.expected.model_dump().items():
        if expected is None:
            continue
        value = computed[key]
        ok = math.isclose(value, expected, rel_tol=EXPECT_RTOL, abs_tol=1e-12)
        out.append(CheckOutcome(name=f"attendu {key}", passed=ok, value=value, bound=expected, margin=expected - value))
    return out


def _majorant(beta: float) -> Majorant:
    try:
        return Majorant(beta=beta)
    except ValidationError as e:
        raise DomainError(f"majorant t^beta invalide: beta = {beta} (0 < beta <= 1)") from e


def _open_map(args: argparse.Namespace) -> tuple[MappingSpecFile, HarmonicMap, str]:
    spec, digest = load_mapping(args.file)
    return spec, spec.to_map(), digest


def cmd_analyze(args: argparse.Namespace) -> ReportDocument:
    spec, fmap, digest = _open_map(args)
    grid = _grid(args)
    cr = class_constants(fmap, grid)
    local = class_constants(fmap, grid, r=args.r)
    seminorm = bloch_seminorm(fmap, grid)
    bnorm = bloch_norm(fmap, grid)
    colonna = colonna_ratio_sup(fmap, seed=args.seed)
    report = verify_map_bounds(fmap, grid)

    results = {
        "label": spec.label,
        "degree": fmap.degree,
        "in_H": cr.in_H,
        "normalized": cr.normalized,
        "sense_preserving": cr.sense_preserving,
        "alpha": cr.alpha,
        "C": cr.C,
        "K": cr.K_estimate,
        "r": args.r,
        "K_r_measured": local.K_estimate,
        "K_r_schwarz": schwarz_distortion(args.r),
        "bloch_norm": bnorm,
        "bloch_seminorm": seminorm,
        "colonna_sup": colonna,
    }
    for name, reason in report.skipped.items():
        results[f"skipped {name}"] = reason
    rows = [
        {"n": row.n, "theorem": row.theorem, "value": row.value, "bound": row.bound, "margin": row.margin}
        for row in report.rows
    ]

    checks = [
        CheckOutcome(name="bornes de coefficients", passed=not report.violations, value=float(len(report.violations))),
    ]
    if report.dirichlet_sum is not None:
        checks.append(_ratio_outcome("somme de Dirichlet <= C", report.dirichlet_sum, cr.C, 1e-12))
    if cr.in_H:
        checks.append(_ratio_outcome("K(r) mesuré <= (1+r)/(1-r)", local.K_estimate, results["K_r_schwarz"], 1e-9))
    if cr.sense_preserving:
        checks.append(CheckOutcome(name="S_f croissante", passed=area_monotonicity_check(fmap, grid=grid)))
    if bnorm > 0:
        gap = abs(colonna - seminorm)
        checks.append(_ratio_outcome("identité de Colonna", gap, COLONNA_RTOL * bnorm))
    checks += _expectation_checks(spec, {"C": cr.C, "alpha": cr.alpha, "K": cr.K_estimate})
    return _document(args, digest, results=results, rows=rows, checks=checks)


def cmd_landau(args: argparse.Namespace) -> ReportDocument:
    digest = None
    if args.file:
        _spec, fmap, digest = _open_map(args)
        rep = landau_report(
            fmap,
            C=args.C,
            alpha=args.alpha,
            samples=args.samples,
            n_boundary=args.n_boundary,
            seed=args.seed,
            grid=_grid(args),
        )
    elif args.C is not None and args.alpha is not None:
        rep = landau_radii(args.C, args.alpha)
    else:
        raise InputError("--C et --alpha, ou un fichier d'application, sont requis")

    results = {"r0": R0, "Q": rep.Q, "C": rep.C, "alpha": rep.alpha, "rho": rep.rho, "r0rho": rep.r0rho, "R0": rep.R0}
    checks = [CheckOutcome(name="R0 > 0", passed=rep.R0 > 0, value=rep.R0, bound=0.0)]
    if rep.univalence is not None:
        checks.append(
            CheckOutcome(
                name="univalence sur D_{r0 rho}",
                passed=rep.univalence.passed,
                value=rep.univalence.min_separation,
                detail="point dégénéré" if rep.univalence.degenerate else None,
            )
        )
    if rep.covering is not None:
        checks.append(
            CheckOutcome(
                name="recouvrement de D_{R0}",
                passed=rep.covering.passed,
                value=rep.covering.min_modulus,
                bound=rep.R0,
                margin=rep.covering.min_modulus - rep.R0,
                detail="non concluant" if rep.covering.inconclusive else f"indice {rep.covering.winding}",
            )
        )
    return _document(args, digest, results=results, checks=checks)


def cmd_bounds(args: argparse.Namespace) -> ReportDocument:
    C, K, alpha = args.C, args.K, args.alpha
    consts = bound_constants(C, 1.0 if K is None else K, 0.0 if alpha is None else alpha)
    if alpha is not None and not 0.0 < alpha < consts.Q:
        raise DomainError(f"alpha doit être dans (0, Q(r0)) = (0, {consts.Q:.10g}), reçu {alpha}")
    rows: list[dict] = []
    checks: list[CheckOutcome] = [
        _ratio_outcome("r0^2 + r0 = 1", abs(consts.r0 * consts.r0 + consts.r0 - 1.0), 1e-15),
    ]
    for n in range(1, args.n_max + 1):
        row: dict = {"n": n, "H(C)": bound_HC(C, n)}
        if n >= 2:
            row["H(C) e-envelope"] = envelope_HC(C, n)
            checks.append(_ratio_outcome(f"H(C) n={n} < enveloppe", row["H(C)"], row["H(C) e-envelope"]))
        if K is not None:
            row["quasiregular"] = bound_quasiregular(C, K, n)
        if alpha is not None and n >= 2:
            row["H_alpha(C)"] = bound_H_alpha(C, alpha, n)
            row["H_alpha envelope"] = envelope_H_alpha(C, n)
            row["H_alpha e-envelope"] = envelope_H_alpha_e(C, n)
            strict = row["H_alpha(C)"] < row["H_alpha envelope"] < row["H_alpha e-envelope"]
            checks.append(CheckOutcome(name=f"chaîne stricte n={n}", passed=strict, value=row["H_alpha(C)"]))
        rows.append(row)
    results = {"r0": consts.r0, "Q": consts.Q, "Q/sqrt(C)": consts.Q / math.sqrt(C), "e": consts.e_const, "C": C}
    if K is not None:
        results["K"] = K
    if alpha is not None:
        results["alpha"] = alpha
    return _document(args, results=results, rows=rows, checks=checks)


def cmd_norms(args: argparse.Namespace) -> ReportDocument:
    spec, fmap, digest = _open_map(args)
    grid = _grid(args)
    seminorm = bloch_seminorm(fmap, grid)
    bnorm = bloch_norm(fmap, grid)
    colonna = colonna_ratio_sup(fmap, seed=args.seed)
    omega = Majorant(beta=1.0)
    M = minimal_majorant_constant(fmap, omega, grid)

    results = {"label": spec.label, "bloch_norm": bnorm, "bloch_seminorm": seminorm, "colonna_sup": colonna, "M": M}
    checks = []
    if bnorm > 0:
        checks.append(_ratio_outcome("identité de Colonna", abs(colonna - seminorm), COLONNA_RTOL * bnorm))
    rows = []
    for r in args.r:
        norm = bmo_norm(boundary_trace(fmap, r), grid)
        row = {"r": r, "bmo_norm": norm}
        if M > 0:
            row["bound"] = bmo_bound_majorant(M, r, omega)
            checks.append(_ratio_outcome(f"BMO r={r:g}", norm, row["bound"], BMO_SLACK))
        rows.append(row)
    return _document(args, digest, results=results, rows=rows, checks=checks)


def cmd_bmo(args: argparse.Namespace) -> ReportDocument:
    spec, fmap, digest = _open_map(args)
    grid = _grid(args)
    omega = _majorant(args.omega)
    M = minimal_majorant_constant(fmap, omega, grid)
    norm = bmo_norm(boundary_trace(fmap, args.r), grid)
    bound = bmo_bound_majorant(M, args.r, omega)
    results = {"label": spec.label, "r": args.r, "beta": args.omega, "M": M, "bmo_norm": norm, "bound": bound}

    checks = [
        CheckOutcome(name="hypothèse de gradient", passed=gradient_majorant_check(fmap, M, omega, grid).passed),
        _ratio_outcome("norme BMO <= borne", norm, bound, BMO_SLACK),
    ]
    cr = class_constants(fmap, grid)
    if args.omega == 1.0 and cr.C > 0 and math.isfinite(cr.K_estimate):
        results["quasiregular_bound"] = quasiregular_bmo_bound(cr.C, cr.K_estimate, args.r)
        checks.append(_ratio_outcome("norme BMO <= 2 sqrt(r KC log)", norm, results["quasiregular_bound"], BMO_SLACK))
    return _document(args, digest, results=results, checks=checks)


def cmd_convex(args: argparse.Namespace) -> ReportDocument:
    spec, fmap, digest = _open_map(args)
    rows = []
    for r in args.r:
        res = fully_convex_check(fmap, [r], args.n_boundary)
        rows.append({"r": r, "convex": res.passed, "inconclusive": res.inconclusive})
    convex = all(row["convex"] for row in rows)
    checks = [CheckOutcome(name="pleinement convexe", passed=convex)]
    results: dict = {"label": spec.label}

    cr = class_constants(fmap, _grid(args))
    if convex and cr.in_H:
        sw = sandwich_check(fmap, max(args.r), seed=args.seed, grid=_grid(args))
        results.update(
            lower_ratio=sw.lower_ratio,
            upper_ratio=sw.upper_ratio,
            real_part_max=sw.real_part_max,
            real_part_bound=sw.real_part_bound,
            h_collisions=sw.h_collisions,
        )
        worst = max(sw.lower_ratio, sw.upper_ratio)
        checks.append(CheckOutcome(name="encadrement par h", passed=sw.passed, value=worst, bound=1.0))
    return _document(args, digest, results=results, rows=rows, checks=checks)


def cmd_lipschitz(args: argparse.Namespace) -> ReportDocument:
    spec, fmap, digest = _open_map(args)
    omega = _majorant(args.omega)
    rep = equivalence_witness(fmap, omega, args.r, _grid(args), seed=args.seed)
    results = {
        "label": spec.label,
        "r": args.r,
        "beta": args.omega,
        "full": rep.full,
        "modulus": rep.modulus,
        "boundary": rep.boundary,
        "K_r": rep.K_r,
        "chain_constant": rep.chain_constant,
        "implied_constant": rep.implied_constant,
    }
    checks = [
        CheckOutcome(name="ordre des estimations", passed=rep.nested),
        CheckOutcome(name="chaîne de gradient", passed=rep.chain.passed, value=rep.chain.max_ratio, bound=1.0),
    ]
    return _document(args, digest, results=results, checks=checks)


def _builtin(label: str, h: list[complex], g: list[complex]) -> HarmonicMap:
    return HarmonicMap.from_coefficients(h, g, label=label)


def cmd_verify_all(args: argparse.Namespace) -> ReportDocument:
    """Suite intégrée: cas d'égalité, constantes, Landau, Colonna, BMO, Schwarz-Pick, encadrement."""
    grid = _grid(args)
    extremal = _builtin("z + conj(z)^2/2", [0, 1], [0, 0, 0.5])
    identity = _builtin("z", [0, 1], [0])
    convex = _builtin("z + 0.1 conj(z)^2", [0, 1], [0, 0, 0.1])
    checks: list[CheckOutcome] = []

    ext = class_constants(extremal, grid)
    checks.append(_ratio_outcome("C extrémale = 1/2", abs(ext.C - 0.5), 1e-9))
    checks.append(_ratio_outcome("|a1| = sqrt(2C)", abs(ext.alpha - bound_HC(ext.C, 1)), 1e-12))
    ide = class_constants(identity, grid)
    sharp = bound_quasiregular(ide.C, ide.K_estimate, 1)
    checks.append(_ratio_outcome("|a1| = sqrt(CK) pour z", abs(ide.alpha - sharp), 1e-12))

    opt = optimal_radius()
    checks.append(_ratio_outcome("r0 = (sqrt 5 - 1)/2", abs(opt.t - R0), 1e-6))
    checks.append(_ratio_outcome("Q(r0) = 3.3302 sqrt(C)", abs(q_constant(1.0) - 3.3302), 5e-4))

    radii = landau_radii(1.0, 1.0)
    checks.append(_ratio_outcome("rho(1, 1)", abs(radii.rho - 0.051046), 1e-5))
    checks.append(_ratio_outcome("R0(1, 1)", abs(radii.R0 - 0.016187), 1e-5))
    lr = landau_report(extremal, C=0.5, alpha=1.0, seed=args.seed)
    checks.append(CheckOutcome(name="univalence extrémale", passed=bool(lr.univalent_check)))
    checks.append(CheckOutcome(name="recouvrement extrémal", passed=bool(lr.covering_check)))

    seminorm = bloch_seminorm(extremal, grid)
    colonna = colonna_ratio_sup(extremal, seed=args.seed)
    checks.append(_ratio_outcome("Colonna = 32/27", abs(colonna - seminorm), COLONNA_RTOL * seminorm))

    norm = bmo_norm(boundary_trace(identity, 0.5), grid)
    checks.append(_ratio_outcome("BMO identité r=0.5", abs(norm - 0.5), 1e-4))
    bound = bmo_bound_majorant(1.0, 0.5, Majorant())
    checks.append(_ratio_outcome("borne BMO 1.17741", abs(bound - 1.17741), 1e-5))

    sp = float(schwarz_pick_ratio(identity, 1.0, 0j))
    checks.append(_ratio_outcome("Schwarz-Pick égalité en 0", abs(sp - 1.0), 1e-12))

    sw = sandwich_check(convex, 0.5, seed=args.seed, grid=grid)
    checks.append(CheckOutcome(name="encadrement z + 0.1 conj(z)^2", passed=sw.passed))

    results = {"checks": len(checks), "failed": sum(not c.passed for c in checks)}
    return _document(args, results=results, checks=checks)
