"""Command-line interface.

Exit codes: 0 success, 1 identity failure (``verify``), 2 input error,
3 optimizer divergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, lattice, oracle
from .andor import MODES, OPTIMIZERS, OptimizerConfig, make_split, sparsity_loss
from .attribution import (
    TERM_PRUNE,
    banzhaf_from_interactions,
    conflict_decomposition,
    efficiency_report,
    shapley_from_interactions,
)
from .errors import Diverged, InputError
from .game import GAME_KINDS, GameSpec, dump_value_table, load_value_table, parse_coalition, synth_game
from .interactions import compute_spectrum, reconstruct_all
from .report import dumps, new_report
from .verify import run_identity_suite

log = logging.getLogger("harsanyi_attrib")

EXIT_OK, EXIT_IDENTITY, EXIT_INPUT, EXIT_DIVERGED = 0, 1, 2, 3


def _members(mask: int) -> list[int]:
    return lattice.mask_members(mask)


def _label(table, mask: int) -> str:
    return "{" + ",".join(table.variable_name(i) for i in _members(mask)) + "}"


def _load(args):
    path = Path(args.input)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    fmt = args.format or ("csv" if path.suffix.lower() == ".csv" else "json")
    return load_value_table(data, fmt, n=args.n)


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(
        max_iters=args.max_iters,
        step0=args.step0,
        decay=args.decay,
        tol=args.tol,
        seed=args.seed,
        method=args.optimizer,
    )


def _resolved_config(args) -> dict:
    skip = {"func", "verbose"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = list(value) if isinstance(value, (list, tuple)) else value
    return out


def _split_meta(split) -> dict:
    meta = {"mode": split.mode, "loss": sparsity_loss(split)}
    if split.history:
        meta["iterations"] = len(split.history) - 1
        meta["initial_loss"] = split.history[0]
    return meta


def cmd_interactions(args) -> tuple[dict, int]:
    table = _load(args)
    split = make_split(table, args.mode, _optimizer_config(args))
    spec = compute_spectrum(split)
    scale = max(1.0, float(np.abs(table.values).max()))

    magnitude = np.maximum(np.abs(spec.i_and), np.abs(spec.i_or))
    keep = np.arange(1, 1 << table.n)
    if args.prune > 0:
        keep = keep[magnitude[keep] > args.prune]
    order = sorted(keep.tolist(), key=lambda m: (-(abs(spec.i_and[m]) + abs(spec.i_or[m])), m))

    report = new_report("interactions", _resolved_config(args))
    report["meta"] = {"n": table.n, "baseline": table.baseline, "v_and_empty": float(spec.i_and[0])}
    report["meta"].update(_split_meta(split))
    report["interactions"] = [
        {"mask": m, "members": _members(m), "i_and": float(spec.i_and[m]), "i_or": float(spec.i_or[m])}
        for m in order
    ]
    report["reconstruction_max_error"] = float(np.abs(reconstruct_all(spec) - table.values).max()) / scale
    if args.emit_plot_data or args.figure:
        top = order[: args.plot_top]
        report["bars"] = [
            {"label": _label(table, m), "value": float(spec.i_and[m] + spec.i_or[m])} for m in top
        ]
    return report, EXIT_OK


def cmd_attribute(args) -> tuple[dict, int]:
    table = _load(args)
    split = make_split(table, args.mode, _optimizer_config(args))
    spec = compute_spectrum(split)
    phi = shapley_from_interactions(spec)
    banzhaf = banzhaf_from_interactions(spec)
    target = table.grand - table.baseline

    report = new_report("attribute", _resolved_config(args))
    report["meta"] = {"n": table.n, **_split_meta(split)}
    report["labels"] = [table.variable_name(i) for i in range(table.n)]
    report["shapley"] = phi.tolist()
    report["banzhaf"] = banzhaf.tolist()
    report["efficiency"] = {
        "total": float(phi.sum()),
        "target": target,
        "max_abs_error": abs(float(phi.sum()) - target),
    }
    if table.n <= oracle.ORACLE_N_CAP:
        shapley_ref = np.array([oracle.shapley_direct(table, i) for i in range(table.n)])
        banzhaf_ref = np.array([oracle.banzhaf_direct(table, i) for i in range(table.n)])
        report["identity_checks"] = {
            "shapley_max_err": float(np.abs(phi - shapley_ref).max()),
            "banzhaf_max_err": float(np.abs(banzhaf - banzhaf_ref).max()),
        }
    if args.emit_plot_data or args.figure:
        report["bars"] = [{"label": table.variable_name(i), "value": float(x)} for i, x in enumerate(phi)]
    return report, EXIT_OK


def cmd_coalition(args) -> tuple[dict, int]:
    table = _load(args)
    if not args.coalition:
        raise InputError("the coalition command needs at least one --coalition")
    masks = [parse_coalition(text, table.n) for text in args.coalition]
    split = make_split(table, args.mode, _optimizer_config(args))
    spec = compute_spectrum(split)
    phi = shapley_from_interactions(spec)
    target = table.grand - table.baseline

    report = new_report("coalition", _resolved_config(args))
    report["meta"] = {"n": table.n, **_split_meta(split)}
    report["shapley"] = phi.tolist()
    report["coalitions"] = []
    bars = []
    for mask in masks:
        conflict = conflict_decomposition(spec, mask, phi)
        eff = efficiency_report(spec, mask, target, phi)
        significant = np.abs(conflict.term_contributions) > TERM_PRUNE
        terms = [
            {"mask": int(m), "members": _members(int(m)), "weight": float(w), "contribution": float(c)}
            for m, w, c in zip(
                conflict.term_masks[significant],
                conflict.term_weights[significant],
                conflict.term_contributions[significant],
            )
        ]
        report["coalitions"].append(
            {
                "coalition": {
                    "mask": mask,
                    "members": _members(mask),
                    "varphi": conflict.varphi,
                    "shapley_sum": conflict.shapley_sum,
                    "residual": conflict.partial_overlap_residual,
                    "identity_error": conflict.identity_error,
                    "terms": terms,
                },
                "efficiency": {
                    "varphi": eff.varphi,
                    "outside_phi": eff.outside_phi,
                    "residual": eff.residual,
                    "total": eff.total,
                    "target": eff.target,
                    "max_abs_error": eff.error,
                },
            }
        )
        name = _label(table, mask)
        bars.append({"label": f"varphi{name}", "value": conflict.varphi})
        bars.append({"label": f"sum phi{name}", "value": conflict.shapley_sum})
        bars.append({"label": f"residual{name}", "value": conflict.partial_overlap_residual})
    if args.emit_plot_data or args.figure:
        report["bars"] = bars
    return report, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    table = _load(args)
    results = run_identity_suite(
        table, gamma_draws=args.gamma_draws, seed=args.seed, config=_optimizer_config(args)
    )
    passed = all(r.passed for r in results)
    report = new_report("verify", _resolved_config(args))
    report["meta"] = {"n": table.n}
    report["identities"] = [
        {"name": r.name, "max_error": r.max_error, "tolerance": r.tolerance, "passed": r.passed}
        for r in results
    ]
    report["passed"] = passed
    if args.emit_plot_data or args.figure:
        report["bars"] = [{"label": r.name, "value": r.max_error} for r in results]
    return report, EXIT_OK if passed else EXIT_IDENTITY


def _parse_plant(text: str) -> tuple[int, float]:
    try:
        mask, coef = text.split(":")
        return int(mask, 0), float(coef)
    except ValueError:
        raise InputError(f"--plant expects MASK:COEF, got {text!r}") from None


def cmd_synth(args) -> tuple[str, int]:
    weights = ()
    if args.weights:
        try:
            weights = tuple(float(x) for x in args.weights.split(","))
        except ValueError:
            raise InputError(f"bad --weights {args.weights!r}") from None
    plants = [_parse_plant(p) for p in args.plant]
    plants_or = [_parse_plant(p) for p in args.plant_or]
    if args.kind == "planted-or":
        plants_or, plants = plants + plants_or, []
    spec = GameSpec(
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        weights=weights,
        and_terms=tuple(plants),
        or_terms=tuple(plants_or),
        baseline=args.baseline,
    )
    table = synth_game(spec)
    return dump_value_table(table), EXIT_OK


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", required=True, help="value table file")
    p.add_argument("--format", choices=("json", "csv"), help="input format (default: from suffix)")
    p.add_argument("--n", type=int, help="variable count override")
    p.add_argument("--mode", choices=MODES, default="and-only", help="AND/OR split (default: and-only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--step0", type=float, default=None)
    p.add_argument("--decay", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--optimizer", choices=OPTIMIZERS, default="primal-dual")
    p.add_argument("--prune", type=float, default=0.0, help="drop interactions with |I| <= PRUNE")
    p.add_argument("--output", help="report path (default: stdout)")
    p.add_argument("--emit-plot-data", action="store_true", help='add a "bars" array to the report')
    p.add_argument("--figure", help="also render the bars as a chart to this path")
    p.add_argument("--plot-top", type=int, default=20, help="bars shown by the interactions command")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harsanyi-attrib",
        description="Harsanyi AND/OR interactions, Shapley/Banzhaf and coalition attributions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    p = sub.add_parser("interactions", parents=[common], help="AND/OR interaction spectrum")
    p.set_defaults(func=cmd_interactions)
    p = sub.add_parser("attribute", parents=[common], help="Shapley and Banzhaf values")
    p.set_defaults(func=cmd_attribute)
    p = sub.add_parser("coalition", parents=[common], help="coalition attribution and conflict")
    p.add_argument("--coalition", action="append", default=[], help="comma-separated variables, repeatable")
    p.set_defaults(func=cmd_coalition)
    p = sub.add_parser("verify", parents=[common], help="check every identity on a table (n <= 12)")
    p.add_argument("--gamma-draws", type=int, default=5, help="random splits to test")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="write a synthetic value table")
    p.add_argument("--kind", choices=GAME_KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", help="comma-separated weights for the linear kind")
    p.add_argument("--plant", action="append", default=[], metavar="MASK:COEF",
                   help="planted term (AND for planted-and/mixed, OR for planted-or)")
    p.add_argument("--plant-or", action="append", default=[], metavar="MASK:COEF",
                   help="planted OR term for planted-mixed")
    p.add_argument("--baseline", type=float, default=0.0)
    p.add_argument("--output")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_synth, emit_plot_data=False, figure=None)
    return parser


def _write(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        result, code = args.func(args)
        if isinstance(result, dict):
            bars = result.get("bars")
            if args.figure and bars:
                from .plotting import render_bars

                render_bars(bars, args.figure, title=f"{args.command}: {args.input}")
            if not args.emit_plot_data:
                result.pop("bars", None)
            result = dumps(result)
        _write(result, args.output)
    except Diverged as exc:
        print(f"error: optimizer diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
