"""Command-line front door: source ingestion, experiment drivers, CSV/JSON output.

Subcommands
-----------
compute     score a distribution and report its rarest-event gap (JSON)
allocate    code-length allocation sweep over budgets (CSV)
bsc         channel importance change over a p-grid (CSV)
distortion  loss-distortion curves over a D-grid (CSV)
plan        maximum-transmission planner over an allowance grid (CSV)
figures     run the full experiment battery into a directory (CSV + PNG)

Exit codes: 0 success, 2 input validation, 3 numerical infeasibility,
4 I/O failure. CSV output uses LF line endings, a header row, and
floats serialized with 17 significant digits so they round-trip
exactly. All outputs are deterministic; the environment variable
NMIM_SEED is reserved for future stochastic features and currently
unused.
"""
from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path
from typing import NoReturn, Sequence

import click

from nmim.analysis import min_gap
from nmim.coding import (
    AllocationProblem,
    ErrorModel,
    baseline_equal,
    baseline_proportional,
    cap_and_iterate,
    importance_loss,
)
from nmim.measure import Distribution, log_importance_values, nmim
from nmim.sources import SourceKind, SourceSpec
from nmim.transmission import (
    BscChannel,
    delta_plateau,
    plan_max_transmission,
    psi,
    rmim,
)

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

#: Five-event storage experiment: source, budget sweep, cap, alphabet.
EXPERIMENT_PROBS = (0.010, 0.215, 0.037, 0.292, 0.446)
EXPERIMENT_K_GRID = "10:200:10"
EXPERIMENT_L = 100
EXPERIMENT_GAMMA = 2

GAP_N_RANGE = range(5, 21)
GAP_FAMILIES = (SourceKind.ZIPF, SourceKind.NORMAL_DISCRETE, SourceKind.RAYLEIGH_DISCRETE)

BSC_DEFAULT_EPS = 0.01
BSC_DEFAULT_P = "0.05:0.5:0.01"
DISTORTION_DEFAULT_P = "0.1,0.15,0.2,0.25"
DISTORTION_DEFAULT_D = "0:0.6:0.005"
PLAN_DEFAULT_C = "0.2,0.5,0.8"
PLAN_DEFAULT_DELTA = "0:8:0.01"


def _fail(code: int, message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def parse_grid(text: str) -> list[float]:
    """Parse "start:stop:step" (inclusive) or a comma list of numbers."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(v) for v in parts)
        if step <= 0:
            raise ValueError(f"grid step must be positive, got {step!r}")
        count = int(math.floor((stop - start) / step + 1e-9))
        return [start + i * step for i in range(count + 1)]
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError(f"empty grid {text!r}")
    return values


def parse_int_grid(text: str) -> list[int]:
    values = parse_grid(text)
    out = []
    for v in values:
        if abs(v - round(v)) > 1e-9:
            raise ValueError(f"expected integers in grid, got {v!r}")
        out.append(int(round(v)))
    return out


def dump_distribution(d: Distribution) -> str:
    """Serialize a distribution as the canonical JSON object."""
    return json.dumps({"probs": list(d.probs)})


def load_distribution_json(text: str) -> Distribution:
    """Parse the canonical {"probs": [...]} JSON object."""
    payload = json.loads(text)
    if not isinstance(payload, dict) or "probs" not in payload:
        raise ValueError('expected a JSON object with a "probs" array')
    return Distribution(payload["probs"])


def _fmt(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_csv(destination: str, header: Sequence[str], rows: Sequence[dict]) -> None:
    def emit(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in header])

    if destination == "-":
        emit(sys.stdout)
        return
    try:
        path = Path(destination)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            emit(fh)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {destination}: {exc}")


def _source_options(f):
    f = click.option(
        "--input", "input_path", default=None, metavar="PATH",
        help='JSON file with {"probs": [...]}; "-" reads stdin.',
    )(f)
    f = click.option("--uniform", type=int, default=None, metavar="N",
                     help="Uniform source on N events.")(f)
    f = click.option("--zipf", is_flag=True, help="Zipf source (needs --n).")(f)
    f = click.option("--normal", is_flag=True,
                     help="Discretized normal source (needs --n).")(f)
    f = click.option("--rayleigh", is_flag=True,
                     help="Discretized Rayleigh source (needs --n).")(f)
    f = click.option("--n", "n_events", type=int, default=None,
                     help="Event count for the generator families.")(f)
    f = click.option("--zipf-exponent", type=float, default=1.01, show_default=True,
                     help="Zipf decay exponent.")(f)
    return f


def _resolve_source(
    input_path: str | None,
    uniform: int | None,
    zipf: bool,
    normal: bool,
    rayleigh: bool,
    n_events: int | None,
    zipf_exponent: float,
) -> Distribution:
    picked = [
        input_path is not None,
        uniform is not None,
        zipf,
        normal,
        rayleigh,
    ]
    if sum(picked) != 1:
        _fail(EXIT_VALIDATION,
              "choose exactly one source: --input, --uniform, --zipf, --normal, --rayleigh")
    try:
        if input_path is not None:
            try:
                text = sys.stdin.read() if input_path == "-" else Path(input_path).read_text()
            except OSError as exc:
                _fail(EXIT_IO, f"cannot read {input_path}: {exc}")
            return load_distribution_json(text)
        if uniform is not None:
            return SourceSpec(kind=SourceKind.UNIFORM, n=uniform).make()
        if n_events is None:
            _fail(EXIT_VALIDATION, "generator families need --n")
        if zipf:
            kind = SourceKind.ZIPF
        elif normal:
            kind = SourceKind.NORMAL_DISCRETE
        else:
            kind = SourceKind.RAYLEIGH_DISCRETE
        return SourceSpec(kind=kind, n=n_events, zipf_exponent=zipf_exponent).make()
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(EXIT_VALIDATION, str(exc))


# ---------------------------------------------------------------------------
# Experiment drivers (used by the subcommands, the figures run, and tests)
# ---------------------------------------------------------------------------

GAP_HEADER = ("n", "source", "nmim", "l_pmin", "gap", "p_min", "p_smin",
              "condition_i", "condition_ii")


def gap_rows(n_values: Sequence[int] = GAP_N_RANGE) -> list[dict]:
    rows = []
    for n in n_values:
        for kind in GAP_FAMILIES:
            report = min_gap(SourceSpec(kind=kind, n=n).make())
            rows.append({
                "n": n,
                "source": kind.value,
                "nmim": report.nmim_total.log_value,
                "l_pmin": report.l_pmin.log_value,
                "gap": report.gap,
                "p_min": report.p_min,
                "p_smin": report.p_smin,
                "condition_i": report.condition_i,
                "condition_ii": report.condition_ii,
            })
    return rows


ALLOCATION_HEADER = ("model", "K", "scheme", "lengths", "realized_total",
                     "importance_loss", "avg_length", "compression_ratio",
                     "n_active", "feasible", "note")

#: Scheme labels: the importance-driven allocator plus the two reference
#: splits (even division, inverse-probability weighting).
SCHEME_NMIM = "nmim"
SCHEME_EQUAL = "equal"
SCHEME_PROPORTIONAL = "inverse-proportional"


def _scheme_row(d: Distribution, model: ErrorModel, K: int, L: int, gamma: int,
                scheme: str) -> dict:
    row: dict = {"model": model.value, "K": K, "scheme": scheme}
    try:
        if scheme == SCHEME_NMIM:
            result = cap_and_iterate(AllocationProblem(
                source=d, K=K, L=L, model=model, gamma=gamma))
            lengths = result.lengths
            loss = result.importance_loss
            avg = result.avg_length
            n_active = result.n_active
        else:
            builder = baseline_equal if scheme == SCHEME_EQUAL else baseline_proportional
            lengths = builder(d, K)
            loss = importance_loss(d, lengths, model, gamma)
            probs = d.as_array()
            avg = float(sum(p * l for p, l in zip(probs, lengths)))
            n_active = sum(1 for l in lengths if l > 0)
        row.update({
            "lengths": ";".join(str(l) for l in lengths),
            "realized_total": int(sum(lengths)),
            "importance_loss": loss,
            "avg_length": avg,
            "compression_ratio": avg / L,
            "n_active": n_active,
            "feasible": True,
            "note": None,
        })
    except ValueError as exc:
        row.update({
            "lengths": None, "realized_total": None, "importance_loss": None,
            "avg_length": None, "compression_ratio": None, "n_active": None,
            "feasible": False, "note": str(exc),
        })
    return row


def allocation_rows(d: Distribution, k_values: Sequence[int], L: int,
                    models: Sequence[ErrorModel], gamma: int) -> list[dict]:
    rows = []
    for model in models:
        for K in k_values:
            for scheme in (SCHEME_NMIM, SCHEME_EQUAL, SCHEME_PROPORTIONAL):
                rows.append(_scheme_row(d, model, K, L, gamma, scheme))
    return rows


BSC_HEADER = ("p", "epsilon", "exact", "coarse", "fine", "lower_bound", "upper_bound")


def bsc_rows(p_values: Sequence[float], eps: float) -> tuple[list[dict], int]:
    channel = BscChannel(epsilon=eps)
    rows, errors = [], 0
    for p in p_values:
        row: dict = {"p": p, "epsilon": eps}
        try:
            change = psi(p, channel)
            row.update({
                "exact": change.exact, "coarse": change.coarse, "fine": change.fine,
                "lower_bound": change.lower_bound, "upper_bound": change.upper_bound,
            })
        except ValueError:
            errors += 1
            row.update({"exact": None, "coarse": None, "fine": None,
                        "lower_bound": None, "upper_bound": None})
        rows.append(row)
    return rows, errors


DISTORTION_HEADER = ("p", "D", "R", "delta_p")


def distortion_rows(p_values: Sequence[float],
                    d_values: Sequence[float]) -> tuple[list[dict], int]:
    rows, errors = [], 0
    for p in p_values:
        for D in d_values:
            row: dict = {"p": p, "D": D}
            try:
                row.update({"R": rmim(p, D), "delta_p": delta_plateau(p)})
            except ValueError:
                errors += 1
                row.update({"R": None, "delta_p": None})
            rows.append(row)
    return rows, errors


PLAN_HEADER = ("C", "t", "delta", "p0", "delta_p0", "regime", "max_entropy")


def plan_rows(c_values: Sequence[float], t: float,
              delta_values: Sequence[float]) -> tuple[list[dict], int]:
    rows, errors = [], 0
    for c in c_values:
        for delta in delta_values:
            row: dict = {"C": c, "t": t, "delta": delta}
            try:
                plan = plan_max_transmission(delta, c, t)
                row.update({
                    "p0": plan.p0,
                    "delta_p0": delta_plateau(plan.p0),
                    "regime": plan.regime.value,
                    "max_entropy": plan.max_entropy,
                })
            except ValueError:
                errors += 1
                row.update({"p0": None, "delta_p0": None,
                            "regime": None, "max_entropy": None})
            rows.append(row)
    return rows, errors


def _warn_rows(errors: int) -> None:
    if errors:
        click.echo(f"warning: {errors} row(s) hit domain errors; "
                   "their computed cells are empty", err=True)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

@click.group()
@click.version_option(package_name="nmim")
def main() -> None:
    """Importance measure toolkit: scoring, length allocation, channel loss,
    loss-distortion curves, and transmission planning.

    NMIM_SEED is reserved for future stochastic features; nothing reads
    it today and every command is deterministic.
    """


@main.command()
@_source_options
@click.option("--output", "-o", default="-", metavar="PATH",
              help="Write the JSON report here instead of stdout.")
def compute(input_path, uniform, zipf, normal, rayleigh, n_events,
            zipf_exponent, output) -> None:
    """Score a source and report the gap to its rarest event as JSON."""
    d = _resolve_source(input_path, uniform, zipf, normal, rayleigh,
                        n_events, zipf_exponent)
    report: dict = {
        "n": d.n,
        "probs": list(d.probs),
        "nmim": nmim(d).log_value,
        "log_importance": [float(v) for v in log_importance_values(d.as_array())],
    }
    try:
        gap = min_gap(d)
        report["gap"] = {
            "value": gap.gap,
            "l_pmin": gap.l_pmin.log_value,
            "p_min": gap.p_min,
            "p_smin": gap.p_smin,
            "condition_i": gap.condition_i,
            "condition_ii": gap.condition_ii,
        }
    except ValueError as exc:
        report["gap"] = None
        report["gap_note"] = str(exc)
    text = json.dumps(report, indent=2)
    if output == "-":
        click.echo(text)
    else:
        try:
            Path(output).write_text(text + "\n")
        except OSError as exc:
            _fail(EXIT_IO, f"cannot write {output}: {exc}")


@main.command()
@_source_options
@click.option("--k", "k_grid", default=EXPERIMENT_K_GRID, show_default=True,
              help="Budget grid, start:stop:step or comma list.")
@click.option("--length", "-L", "cap", type=int, default=EXPERIMENT_L,
              show_default=True, help="Initial per-event length cap L.")
@click.option("--model", type=click.Choice(["reciprocal", "exponent", "both"]),
              default="both", show_default=True)
@click.option("--gamma", type=int, default=EXPERIMENT_GAMMA, show_default=True,
              help="Code alphabet size for the exponent model.")
@click.option("--output", "-o", default="-", metavar="PATH", help="CSV destination.")
def allocate(input_path, uniform, zipf, normal, rayleigh, n_events,
             zipf_exponent, k_grid, cap, model, gamma, output) -> None:
    """Sweep code-length allocation over budgets; one CSV row per K per scheme."""
    d = _resolve_source(input_path, uniform, zipf, normal, rayleigh,
                        n_events, zipf_exponent)
    try:
        k_values = parse_int_grid(k_grid)
    except ValueError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    models = {
        "reciprocal": [ErrorModel.RECIPROCAL],
        "exponent": [ErrorModel.EXPONENT],
        "both": [ErrorModel.RECIPROCAL, ErrorModel.EXPONENT],
    }[model]
    rows = allocation_rows(d, k_values, cap, models, gamma)
    _write_csv(output, ALLOCATION_HEADER, rows)
    feasible = [r for r in rows if r["feasible"]]
    infeasible = len(rows) - len(feasible)
    if infeasible:
        click.echo(f"warning: {infeasible} row(s) infeasible; see the note column",
                   err=True)
    if not feasible:
        _fail(EXIT_INFEASIBLE, "no feasible allocation in the requested sweep")


@main.command()
@click.option("--eps", type=float, default=BSC_DEFAULT_EPS, show_default=True,
              help="Channel crossover probability.")
@click.option("--p", "p_grid", default=BSC_DEFAULT_P, show_default=True,
              help="Source-parameter grid, start:stop:step or comma list.")
@click.option("--output", "-o", default="-", metavar="PATH", help="CSV destination.")
def bsc(eps, p_grid, output) -> None:
    """Channel importance change: exact, approximations, and bounds per p."""
    try:
        p_values = parse_grid(p_grid)
        rows, errors = bsc_rows(p_values, eps)
    except ValueError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    _write_csv(output, BSC_HEADER, rows)
    _warn_rows(errors)


@main.command()
@click.option("--p", "p_list", default=DISTORTION_DEFAULT_P, show_default=True,
              help="Source parameters, comma list.")
@click.option("--d", "d_grid", default=DISTORTION_DEFAULT_D, show_default=True,
              help="Distortion grid, start:stop:step or comma list.")
@click.option("--output", "-o", default="-", metavar="PATH", help="CSV destination.")
def distortion(p_list, d_grid, output) -> None:
    """Loss-distortion curves: R over a D-grid for each source parameter."""
    try:
        p_values = parse_grid(p_list)
        d_values = parse_grid(d_grid)
    except ValueError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    rows, errors = distortion_rows(p_values, d_values)
    _write_csv(output, DISTORTION_HEADER, rows)
    _warn_rows(errors)


@main.command()
@click.option("--c", "c_list", default=PLAN_DEFAULT_C, show_default=True,
              help="Channel capacities, comma list (bits/use).")
@click.option("--t", "time", type=float, default=1.0, show_default=True,
              help="Transmission time (channel uses).")
@click.option("--delta", "delta_grid", default=PLAN_DEFAULT_DELTA, show_default=True,
              help="Loss-allowance grid (nats), start:stop:step or comma list.")
@click.option("--output", "-o", default="-", metavar="PATH", help="CSV destination.")
def plan(c_list, time, delta_grid, output) -> None:
    """Maximum received entropy per capacity and loss allowance."""
    try:
        c_values = parse_grid(c_list)
        delta_values = parse_grid(delta_grid)
    except ValueError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    rows, errors = plan_rows(c_values, time, delta_values)
    _write_csv(output, PLAN_HEADER, rows)
    _warn_rows(errors)


@main.command()
@click.option("--outdir", default="experiments", show_default=True,
              help="Directory for the CSV and PNG outputs.")
def figures(outdir) -> None:
    """Run the full experiment battery; write CSVs with PNG figures."""
    from nmim import figures as fig

    out = Path(outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot create {outdir}: {exc}")

    rows = gap_rows()
    _write_csv(str(out / "gap.csv"), GAP_HEADER, rows)
    fig.render_gap_figure(rows, out / "gap.png")
    click.echo(f"wrote {out / 'gap.csv'} and gap.png")

    d = Distribution(EXPERIMENT_PROBS)
    alloc = allocation_rows(d, parse_int_grid(EXPERIMENT_K_GRID), EXPERIMENT_L,
                            [ErrorModel.RECIPROCAL, ErrorModel.EXPONENT],
                            EXPERIMENT_GAMMA)
    _write_csv(str(out / "allocation.csv"), ALLOCATION_HEADER, alloc)
    for model in ErrorModel:
        fig.render_allocation_figure(alloc, model.value,
                                     out / f"allocation-{model.value}.png")
    click.echo(f"wrote {out / 'allocation.csv'} and per-model figures")

    rows, errors = bsc_rows(parse_grid(BSC_DEFAULT_P), BSC_DEFAULT_EPS)
    _write_csv(str(out / "bsc.csv"), BSC_HEADER, rows)
    fig.render_bsc_figure(rows, out / "bsc.png")
    _warn_rows(errors)
    click.echo(f"wrote {out / 'bsc.csv'} and bsc.png")

    rows, errors = distortion_rows(parse_grid(DISTORTION_DEFAULT_P),
                                   parse_grid(DISTORTION_DEFAULT_D))
    _write_csv(str(out / "distortion.csv"), DISTORTION_HEADER, rows)
    fig.render_distortion_figure(rows, out / "distortion.png")
    _warn_rows(errors)
    click.echo(f"wrote {out / 'distortion.csv'} and distortion.png")

    rows, errors = plan_rows(parse_grid(PLAN_DEFAULT_C), 1.0,
                             parse_grid(PLAN_DEFAULT_DELTA))
    _write_csv(str(out / "plan.csv"), PLAN_HEADER, rows)
    fig.render_plan_figure(rows, out / "plan.png")
    _warn_rows(errors)
    click.echo(f"wrote {out / 'plan.csv'} and plan.png")


if __name__ == "__main__":
    main()
