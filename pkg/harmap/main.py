from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from collections.abc import Sequence

from . import commands
from .core import DEFAULT_GRID, DEFAULT_SEED, LOG_LEVEL, HarmapError, get_threads, set_threads
from .schemas import GRID_PRESETS, ReportDocument

logger = logging.getLogger(__name__)


def _common_flags() -> argparse.ArgumentParser:
    # Options partagées par toutes les sous-commandes
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", choices=sorted(GRID_PRESETS), default=DEFAULT_GRID)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=None, help="défaut: HARMAP_THREADS")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="rapport JSON")
    out.add_argument("--csv", action="store_true", help="tableau CSV")
    common.add_argument("--timing", action="store_true", help="inclut la durée dans le rapport")
    return common


def _radius_list(text: str) -> list[float]:
    try:
        radii = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"liste de rayons invalide: {text}") from e
    if not radii:
        raise argparse.ArgumentTypeError(f"liste de rayons vide: {text!r}")
    return radii


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="harmap", description="Applications harmoniques planes: bornes et vérifications"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="constantes de classe, Bloch, bornes de coefficients")
    p.add_argument("file")
    p.add_argument("--r", type=float, default=0.5)
    p.set_defaults(handler=commands.cmd_analyze)

    p = sub.add_parser("landau", parents=[common], help="rayons de Landau et vérifications numériques")
    p.add_argument("file", nargs="?")
    p.add_argument("--C", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--n-boundary", type=int, default=4096)
    p.set_defaults(handler=commands.cmd_landau)

    p = sub.add_parser("bounds", parents=[common], help="table des bornes de coefficients")
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--K", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n-max", type=int, default=5)
    p.set_defaults(handler=commands.cmd_bounds)

    p = sub.add_parser("norms", parents=[common], help="normes de Bloch et BMO")
    p.add_argument("file")
    p.add_argument("--r", type=_radius_list, default=[0.5])
    p.set_defaults(handler=commands.cmd_norms)

    p = sub.add_parser("bmo", parents=[common], help="théorème BMO avec majorant t^beta")
    p.add_argument("file")
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--omega", type=float, default=1.0, metavar="BETA")
    p.set_defaults(handler=commands.cmd_bmo)

    p = sub.add_parser("convex", parents=[common], help="convexité des images de cercles et encadrement")
    p.add_argument("file")
    p.add_argument("--r", type=_radius_list, default=[0.25, 0.5, 0.75, 0.9])
    p.add_argument("--n-boundary", type=int, default=4096)
    p.set_defaults(handler=commands.cmd_convex)

    p = sub.add_parser("lipschitz", parents=[common], help="estimations de Lipschitz et chaîne de gradient")
    p.add_argument("file")
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--omega", type=float, default=1.0, metavar="BETA")
    p.set_defaults(handler=commands.cmd_lipschitz)

    p = sub.add_parser("verify-all", parents=[common], help="suite de vérification intégrée")
    p.set_defaults(handler=commands.cmd_verify_all)
    return parser


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def render_text(doc: ReportDocument) -> str:
    lines = [f"commande: {doc.command}"]
    if doc.input_digest:
        lines.append(f"empreinte: {doc.input_digest}")
    lines.append(f"graine: {doc.seed}  maillage: {doc.grid}")
    for key, value in doc.results.items():
        lines.append(f"{key} = {_fmt(value)}")
    if doc.rows:
        header = list(dict.fromkeys(k for row in doc.rows for k in row))
        lines.append("  ".join(header))
        for row in doc.rows:
            lines.append("  ".join(_fmt(row.get(k, "")) for k in header))
    for check in doc.checks:
        tag = "OK" if check.passed else "ÉCHEC"
        extra = []
        if check.value is not None:
            extra.append(f"valeur={_fmt(check.value)}")
        if check.bound is not None:
            extra.append(f"borne={_fmt(check.bound)}")
        if check.margin is not None:
            extra.append(f"marge={_fmt(check.margin)}")
        if check.detail:
            extra.append(check.detail)
        lines.append(f"[{tag}] {check.name} {' '.join(extra)}".rstrip())
    if doc.elapsed_seconds is not None:
        lines.append(f"durée: {doc.elapsed_seconds:.3f} s")
    return "\n".join(lines) + "\n"


def render_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    if doc.rows:
        header = list(dict.fromkeys(k for row in doc.rows for k in row))
        writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        for row in doc.rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "passed", "value", "bound"])
        for c in doc.checks:
            value = "" if c.value is None else _fmt(c.value)
            bound = "" if c.bound is None else _fmt(c.bound)
            writer.writerow([c.name, _fmt(c.passed), value, bound])
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    """Point d'entrée CLI; codes de sortie: 0 succès, 1 échec de vérification, 2 entrée, 3 hypothèse."""
    logging.basicConfig(level=LOG_LEVEL)
    args = build_parser().parse_args(argv)

    started = time.perf_counter()
    try:
        set_threads(args.threads if args.threads is not None else get_threads())
        doc = args.handler(args)
    except HarmapError as e:
        print(f"erreur: {e.detail}", file=sys.stderr)
        return e.exit_code

    elapsed = time.perf_counter() - started
    logger.info("%s terminé en %.3f s", args.command, elapsed)
    if args.timing:
        doc.elapsed_seconds = elapsed

    if args.json:
        sys.stdout.write(doc.model_dump_json(indent=2) + "\n")
    elif args.csv:
        sys.stdout.write(render_csv(doc))
    else:
        sys.stdout.write(render_text(doc))
    return 0 if doc.passed else 1


if __name__ == "__main__":
    sys.exit(main())
