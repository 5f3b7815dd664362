# Command-line front end: eval, gram, kernel, project and ledger subcommands.
# Exit codes: 0 pass, 1 tolerance failure, 2 usage or configuration error.

import argparse
import logging
import math
import sys
from typing import Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .config import config
from .disc_poly import REPRESENTATIONS, Orders, WeightParam, as_points, norm_const
from .expressions import ExpressionError, load_input
from .kernels import KernelSpec, TruncationInsufficientError, bergman_kernel, true_kernel_closed, true_kernel_series
from .ledger import build_ledger
from .reports import EXIT_TOLERANCE, EXIT_USAGE, complex_columns, envelope, pair, table, write_report
from .spaces import build_quad_rule, expand, gram_matrix, integrate, norm_sq, synthesize
from .special_fn import NonConvergenceError

logger = logging.getLogger(__name__)

# Tolerances used when --tol is not given.
DEFAULT_TOL = {"gram": 1e-10, "kernel": 1e-8, "project": 1e-9}

DEFAULT_GRID = (3, 4)
LEDGER_FILE = "derivation_ledger.json"


class RunConfig(BaseModel):
    """Validated parameters of a single run; shared by the CLI and the HTTP API."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma: float = 0.0
    m: int = Field(0, ge=0)
    n: int = Field(0, ge=0)
    reps: list[str] = Field(default_factory=lambda: ["jacobi"])
    points: list[tuple[float, float]] = Field(default_factory=list)
    grid: Optional[tuple[int, int]] = None
    grid_radius: float = Field(0.8, gt=0, lt=1)
    max_m: int = Field(4, ge=0)
    max_n: int = Field(4, ge=0)
    trunc: Optional[int] = Field(None, ge=1)
    radial_nodes: int = Field(default_factory=lambda: config.RADIAL_NODES, ge=1)
    angular_nodes: int = Field(default_factory=lambda: config.ANGULAR_NODES, ge=1)
    tol: Optional[float] = Field(None, gt=0)
    seed: int = Field(default_factory=lambda: config.SEED)
    output_format: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    input: Optional[str] = None
    expect_member: Optional[int] = Field(None, ge=0)

    @field_validator("gamma")
    @classmethod
    def gamma_above_minus_one(cls, v: float) -> float:
        if not v > -1:
            raise ValueError(f"gamma must exceed -1 (got {v})")
        return v

    @field_validator("reps")
    @classmethod
    def known_representations(cls, v: list[str]) -> list[str]:
        unknown = [rep for rep in v if rep not in REPRESENTATIONS]
        if unknown or not v:
            raise ValueError(f"Representations must be chosen from {sorted(REPRESENTATIONS)} (got {v})")
        return v

    @field_validator("grid")
    @classmethod
    def positive_grid(cls, v: Optional[tuple[int, int]]) -> Optional[tuple[int, int]]:
        if v is not None and min(v) < 1:
            raise ValueError(f"Grid counts must be at least 1 (got {v})")
        return v

    def tolerance(self, command: str) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOL.get(command, config.CHECK_TOL)


def polar_grid(radial: int, angular: int, radius: float) -> np.ndarray:
    """The origin followed by ``angular`` points on each of ``radial - 1`` circles up to ``radius``."""
    points = [0j]
    for r in np.linspace(0.0, radius, radial)[1:]:
        points.extend(r * np.exp(2j * math.pi * np.arange(angular) / angular))
    return np.array(points, dtype=complex)


def _points(run: RunConfig) -> np.ndarray:
    if run.points:
        return as_points([complex(re, im) for re, im in run.points])
    return polar_grid(*(run.grid or DEFAULT_GRID), run.grid_radius)


def cmd_eval(run: RunConfig) -> tuple[int, dict]:
    g, o = WeightParam(run.gamma), Orders(run.m, run.n)
    points = _points(run)
    values = {rep: as_points(REPRESENTATIONS[rep](g, o, points)) for rep in run.reps}

    deviation = 0.0
    reference = values[run.reps[0]]
    for rep in run.reps[1:]:
        deviation = max(deviation, float(np.max(np.abs(values[rep] - reference))))

    columns = complex_columns("z") + [c for rep in run.reps for c in complex_columns(rep)]
    rows = [pair(z) + [x for rep in run.reps for x in pair(values[rep][i])] for i, z in enumerate(points)]
    body = {
        "m": run.m,
        "n": run.n,
        "representations": run.reps,
        "values": [{"z": pair(z), **{rep: pair(values[rep][i]) for rep in run.reps}} for i, z in enumerate(points)],
        "table": table(columns, rows),
    }
    if len(run.reps) > 1:
        body["max_deviation"] = deviation
    return envelope("eval", run.gamma, run.seed, body)


def cmd_gram(run: RunConfig) -> tuple[int, dict]:
    tol = run.tolerance("gram")
    g = WeightParam(run.gamma)
    q = build_quad_rule(g, run.radial_nodes, run.angular_nodes)
    indices = [Orders(m, n) for m in range(run.max_m + 1) for n in range(run.max_n + 1)]
    gram = gram_matrix(indices, q)
    norms = np.array([norm_const(g, o) for o in indices])

    scale = np.sqrt(np.outer(norms, norms))
    off = np.abs(gram) / scale
    np.fill_diagonal(off, 0.0)
    max_offdiag = float(np.max(off))
    diag_error = np.abs(np.diag(gram) - norms) / norms
    max_diag = float(np.max(diag_error))

    rows = []
    for a, oa in enumerate(indices):
        for b, ob in enumerate(indices):
            rows.append([oa.m, oa.n, ob.m, ob.n] + pair(gram[a, b]))
    body = {
        "max_m": run.max_m,
        "max_n": run.max_n,
        "radial_nodes": q.radial_nodes,
        "angular_nodes": q.angular_nodes,
        "tol": tol,
        "max_offdiag": max_offdiag,
        "max_diag_rel_error": max_diag,
        "diagonal": [
            {"m": o.m, "n": o.n, "value": float(gram[a, a].real), "expected": float(norms[a])}
            for a, o in enumerate(indices)
        ],
        "table": table(["m", "n", "j", "k"] + complex_columns("gram"), rows),
    }
    passed = max_offdiag <= tol and max_diag <= tol
    logger.info(f"Gram check gamma={run.gamma}: off-diagonal {max_offdiag:.3g}, diagonal {max_diag:.3g}")
    return envelope("gram", run.gamma, run.seed, body, passed)


def cmd_kernel(run: RunConfig) -> tuple[int, dict]:
    tol = run.tolerance("kernel")
    g = WeightParam(run.gamma)
    spec = KernelSpec(g, run.n, run.trunc or config.KERNEL_TRUNCATION, tol)
    points = _points(run)
    zz, ww = (a.reshape(-1) for a in np.meshgrid(points, points, indexing="ij"))

    closed = as_points(true_kernel_closed(spec, zz, ww).value)
    expected_origin = (run.gamma + 2 * run.n + 1) / math.pi
    origin = complex(true_kernel_closed(spec, 0j, 0j).value)
    origin_error = abs(origin - expected_origin) / expected_origin
    body = {
        "n": run.n,
        "truncation": spec.truncation,
        "tol": tol,
        "origin": {"closed": pair(origin), "expected": expected_origin, "rel_error": origin_error},
    }

    try:
        series = true_kernel_series(spec, zz, ww)
    except TruncationInsufficientError as e:
        logger.warning(f"Series kernel rejected: {e}")
        body["error"] = str(e)
        return envelope("kernel", run.gamma, run.seed, body, passed=False)

    values, est = as_points(series.value), np.broadcast_to(series.est_error, zz.shape)
    rel = np.abs(values - closed) / np.abs(closed)
    max_rel = float(np.max(rel))
    passed = max_rel <= tol and origin_error <= tol

    if run.n == 0:
        bergman = as_points(bergman_kernel(g, zz, ww))
        body["bergman_max_rel_deviation"] = float(np.max(np.abs(closed - bergman) / np.abs(bergman)))
        passed = passed and body["bergman_max_rel_deviation"] <= tol

    columns = complex_columns("z") + complex_columns("w") + complex_columns("series") + complex_columns("closed") + ["est_error", "rel_dev"]
    rows = [pair(zz[i]) + pair(ww[i]) + pair(values[i]) + pair(closed[i]) + [float(est[i]), float(rel[i])] for i in range(zz.size)]
    body["max_rel_deviation"] = max_rel
    body["table"] = table(columns, rows)
    logger.info(f"Kernel check gamma={run.gamma}, n={run.n}: max relative deviation {max_rel:.3g}")
    return envelope("kernel", run.gamma, run.seed, body, passed)


def cmd_project(run: RunConfig) -> tuple[int, dict]:
    if not run.input:
        raise ValueError("project needs an --input expression, coefficient file or random:ORDER,DEGREE")
    tol = run.tolerance("project")
    g = WeightParam(run.gamma)
    source = load_input(run.input, g, run.seed)
    f = source.function

    J = max(source.zbar_degree, run.n, run.expect_member + 1 if run.expect_member is not None else 0)
    M = run.trunc or source.z_degree
    q = build_quad_rule(g, run.radial_nodes, run.angular_nodes)
    coeffs = expand(f, M, J, q)

    f_values = f.at_nodes(q)
    f_norm = norm_sq(f, q) or 1.0
    reconstruction = integrate(np.abs(f_values - synthesize(coeffs).at_nodes(q)) ** 2, q).real / f_norm

    components = [coeffs.column(k) for k in range(J + 1)]
    energies = [c.energy() for c in components]
    pythagoras = abs(norm_sq(f, q) - sum(energies)) / f_norm
    samples = [synthesize(c).at_nodes(q) for c in components]
    orthogonality = max(
        (abs(integrate(samples[k] * np.conj(samples[l]), q)) / f_norm for k in range(J + 1) for l in range(k + 1, J + 1)),
        default=0.0,
    )

    target = coeffs.column(run.n)
    projection_residual = integrate(np.abs(f_values - synthesize(target).at_nodes(q)) ** 2, q).real / f_norm
    membership = [
        {"n": k, "member": coeffs.tail_energy(k) < tol ** 2 * f_norm, "residual": coeffs.tail_energy(k)}
        for k in range(J + 1)
    ]

    body = {
        "input": run.input,
        "M": M,
        "J": J,
        "tol": tol,
        "function": coeffs.to_payload(),
        "components": [{"n": k, "energy": energies[k], "table": components[k].to_payload()} for k in range(J + 1)],
        "projection": {"n": run.n, "table": target.to_payload(), "residual": projection_residual},
        "reconstruction_residual": reconstruction,
        "pythagoras_rel_error": pythagoras,
        "orthogonality": orthogonality,
        "membership": membership,
    }
    if source.table is not None and source.table.gamma == g:
        known = source.table.coeffs
        body["coefficient_error"] = float(np.max(np.abs(coeffs.coeffs[: known.shape[0], : known.shape[1]] - known)))

    passed = reconstruction <= tol and pythagoras <= tol
    if run.expect_member is not None:
        verdict = membership[run.expect_member]["member"]
        body["expect_member"] = {"n": run.expect_member, "member": verdict}
        passed = passed and verdict

    rows = [[k, m] + pair(coeffs.coeffs[m, k]) for k in range(J + 1) for m in range(M + 1)]
    body["table"] = table(["component", "m"] + complex_columns("coeff"), rows)
    return envelope("project", run.gamma, run.seed, body, passed)


def cmd_ledger(run: RunConfig) -> tuple[int, dict]:
    g = WeightParam(run.gamma)
    q = build_quad_rule(g, run.radial_nodes, run.angular_nodes)
    ledger = build_ledger(g, run.seed, q)
    sections = {key: ledger[key] for key in ("corrected", "divergent", "notes")}
    rows = [[entry["id"], section, entry["status"]] for section, entries in sections.items() for entry in entries]
    body = dict(sections, table=table(["id", "section", "status"], rows))
    exit_code, report = envelope("ledger", run.gamma, run.seed, body)
    # the JSON ledger file is written in every format; json runs write it through main
    if run.output_format != "json":
        write_report(report, "json", LEDGER_FILE)
    return exit_code, report


HANDLERS: dict[str, Callable[[RunConfig], tuple[int, dict]]] = {
    "eval": cmd_eval,
    "gram": cmd_gram,
    "kernel": cmd_kernel,
    "project": cmd_project,
    "ledger": cmd_ledger,
}


def _point(text: str) -> tuple[float, float]:
    try:
        re_part, im_part = (float(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"point must read re,im (got '{text}')") from e
    return re_part, im_part


def _grid(text: str) -> tuple[int, int]:
    try:
        radial, angular = (int(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"grid must read RADIAL,ANGULAR (got '{text}')") from e
    return radial, angular


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float, default=0.0, help="weight exponent, > -1")
    common.add_argument("--tol", type=float, default=None, help="check tolerance (per-command default)")
    common.add_argument("--radial-nodes", type=int, default=config.RADIAL_NODES)
    common.add_argument("--angular-nodes", type=int, default=config.ANGULAR_NODES)
    common.add_argument("--trunc", type=int, default=None, help="series cutoff (kernel) or expansion box M (project)")
    common.add_argument("--seed", type=int, default=config.SEED)
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")

    parser = argparse.ArgumentParser(prog="polybergman", description="Disc polynomials and weighted poly-Bergman kernels")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a disc polynomial")
    p_eval.add_argument("--m", type=int, default=0)
    p_eval.add_argument("--n", type=int, default=0)
    p_eval.add_argument("--rep", default="jacobi", help="comma-separated subset of jacobi,sum,rodrigues")
    p_eval.add_argument("--points", type=_point, nargs="+", default=[], help="points as re,im")
    p_eval.add_argument("--grid", type=_grid, default=None, help="polar grid RADIAL,ANGULAR")
    p_eval.add_argument("--grid-radius", type=float, default=0.8)

    p_gram = sub.add_parser("gram", parents=[common], help="orthogonality check")
    p_gram.add_argument("--max-m", type=int, default=4)
    p_gram.add_argument("--max-n", type=int, default=4)

    p_kernel = sub.add_parser("kernel", parents=[common], help="series against closed-form kernel")
    p_kernel.add_argument("--n", type=int, default=0)
    p_kernel.add_argument("--points", type=_point, nargs="+", default=[], help="points as re,im")
    p_kernel.add_argument("--grid", type=_grid, default=None, help="polar grid RADIAL,ANGULAR")
    p_kernel.add_argument("--grid-radius", type=float, default=0.8)

    p_project = sub.add_parser("project", parents=[common], help="expand and decompose an input function")
    p_project.add_argument("--input", required=True, help="expression, coefficient JSON file or random:ORDER,DEGREE")
    p_project.add_argument("--n", type=int, default=0, help="true space to project onto")
    p_project.add_argument("--expect-member", type=int, default=None)

    sub.add_parser("ledger", parents=[common], help="write the derivation ledger")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {key: value for key, value in vars(args).items() if key in RunConfig.model_fields}
    if "rep" in vars(args):
        fields["reps"] = [rep.strip() for rep in args.rep.split(",") if rep.strip()]
    if args.command == "ledger" and args.out is None and args.output_format == "json":
        fields["out"] = LEDGER_FILE
    return RunConfig(**fields)


def main(argv: Optional[list[str]] = None) -> int:
    config.setup_logging()
    args = build_parser().parse_args(argv)

    try:
        run = run_config_from_args(args)
        exit_code, report = HANDLERS[args.command](run)
    except (ValidationError, ExpressionError, ValueError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOLERANCE

    write_report(report, run.output_format, run.out)
    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
