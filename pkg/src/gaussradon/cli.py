"""Batch command-line interface.

Non-interactive by design: every command reads files and flags, writes
JSON or CSV with 17-significant-digit doubles, and exits. Randomized
commands require an explicit --seed, and identical invocations produce
byte-identical outputs. Exit codes: 0 success, 1 numerical failure,
2 usage or input error.
"""

import argparse
import csv
import json
import sys

import numpy as np
from threadpoolctl import threadpool_limits

from . import gauss, jsonio, radon, regress, wiener
from .errors import NumericsError, ValidationError
from .kernels import kernel_from_spec
from .radon import AffineConditioning, FunctionalSpec

PROG = "gaussradon"


def _log(args, message):
    if getattr(args, "verbose", False):
        print(f"[{PROG}] {message}", file=sys.stderr)


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def _read_table(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [name.strip() for name in rows[0]]
    return header, rows[1:]


def _expect_columns(path, header, want_targets):
    cols = set(header)
    if len(cols) != len(header):
        raise ValidationError(f"{path}: duplicate column names")
    x_names = sorted(name for name in cols if name.startswith("x"))
    d = len(x_names)
    expected = {f"x{i}" for i in range(d)}
    if d == 0 or set(x_names) != expected:
        raise ValidationError(f"{path}: need contiguous coordinate columns x0..x{{d-1}}, got {header}")
    if want_targets and "y" not in cols:
        raise ValidationError(f"{path}: missing column 'y'")
    allowed = expected | ({"y"} if want_targets else set())
    unknown = cols - allowed
    if unknown:
        raise ValidationError(f"{path}: unexpected columns {sorted(unknown)}")
    return d


def _parse_cell(path, row_number, column, text):
    try:
        return float(text)
    except ValueError:
        raise ValidationError(
            f"{path}: row {row_number}, column '{column}': cannot parse {text!r} as a number"
        ) from None


def _parse_matrix(path, header, data_rows, columns):
    index = {name: header.index(name) for name in columns}
    out = np.empty((len(data_rows), len(columns)))
    for r, row in enumerate(data_rows):
        if len(row) != len(header):
            raise ValidationError(f"{path}: row {r + 1} has {len(row)} cells, header has {len(header)}")
        for c, name in enumerate(columns):
            out[r, c] = _parse_cell(path, r + 1, name, row[index[name]].strip())
    return out


def ingest_csv(path):
    """Read a training table with columns x0..x{d-1}, y into a Dataset."""
    header, data_rows = _read_table(path)
    d = _expect_columns(path, header, want_targets=True)
    if not data_rows:
        raise ValidationError(f"{path}: no data rows")
    columns = [f"x{i}" for i in range(d)] + ["y"]
    table = _parse_matrix(path, header, data_rows, columns)
    return regress.Dataset(points=table[:, :d], targets=table[:, d])


def read_points_csv(path):
    """Read a query table with columns x0..x{d-1} into an (n, d) array."""
    header, data_rows = _read_table(path)
    d = _expect_columns(path, header, want_targets=False)
    if not data_rows:
        raise ValidationError(f"{path}: no data rows")
    return _parse_matrix(path, header, data_rows, [f"x{i}" for i in range(d)])


# ---------------------------------------------------------------------------
# Shared flag handling
# ---------------------------------------------------------------------------

def _add_kernel_flags(parser):
    parser.add_argument("--kernel", required=True, choices=["rbf", "brownian_min", "linear"])
    parser.add_argument("--scale", type=float, help="rbf scale parameter")
    parser.add_argument("--horizon", type=float, help="brownian_min time horizon")


def _kernel_from_flags(args):
    spec = {"kind": args.kernel}
    if args.scale is not None:
        spec["scale"] = args.scale
    if args.horizon is not None:
        spec["horizon"] = args.horizon
    return kernel_from_spec(spec)


def _add_common_flags(parser):
    parser.add_argument("--threads", type=int, default=None, help="cap worker threads (results unchanged)")
    parser.add_argument("--verbose", action="store_true", help="one-line progress log on stderr")


def _grid_points(start, stop, count):
    if count < 1:
        raise ValidationError(f"grid count must be >= 1, got {count}")
    if not (np.isfinite(start) and np.isfinite(stop) and stop >= start):
        raise ValidationError(f"bad grid range [{start}, {stop}]")
    return np.linspace(start, stop, int(count)).reshape(-1, 1)


def _query_points_from_flags(args):
    if (args.points is None) == (args.grid is None):
        raise ValidationError("give exactly one of --points or --grid START STOP COUNT")
    if args.points is not None:
        return read_points_csv(args.points)
    start, stop, count = args.grid
    return _grid_points(float(start), float(stop), int(count))


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _cmd_fit(args):
    if args.lam <= 0:
        raise ValidationError("--lambda must be > 0 for fit; use the interpolate command for lambda = 0")
    data = ingest_csv(args.data)
    kernel = _kernel_from_flags(args)
    model = regress.ridge_fit(data, kernel, args.lam, path=args.path)
    regress.save_model(args.out, model)
    _log(args, f"fit {data.n} observations, wrote {args.out}")
    return 0


def _cmd_interpolate(args):
    data = ingest_csv(args.data)
    kernel = _kernel_from_flags(args)
    model = regress.spline_fit(data, kernel)
    regress.save_model(args.out, model)
    _log(args, f"interpolated {data.n} observations, wrote {args.out}")
    return 0


def _cmd_predict(args):
    model = regress.load_model(args.model)
    points = read_points_csv(args.points)
    if points.shape[1] != model.points.shape[1]:
        raise ValidationError(
            f"query dimension {points.shape[1]} does not match model dimension {model.points.shape[1]}"
        )
    values = regress.predict(model, points)
    header = [f"x{i}" for i in range(points.shape[1])] + ["yhat"]
    jsonio.write_csv(args.out, header, np.column_stack([points, values]))
    _log(args, f"predicted {points.shape[0]} points, wrote {args.out}")
    return 0


def _conditioning_from_flags(args):
    kernel = _kernel_from_flags(args)
    if args.data is None:
        return AffineConditioning(kernel=kernel, train_points=[], targets=[], lam=args.lam)
    data = ingest_csv(args.data)
    return AffineConditioning(kernel=kernel, train_points=data.points, targets=data.targets, lam=args.lam)


def _cmd_condition(args):
    cond = _conditioning_from_flags(args)
    points = _query_points_from_flags(args)
    marginal = radon.posterior_over(cond, points)
    doc = {
        "labels": list(marginal.labels),
        "points": [list(row) for row in points],
        "mean": list(marginal.mean),
        "covariance": [list(row) for row in marginal.covariance.entries],
        "conditioned_on": {
            "labels": [name for name, _ in marginal.conditioned_on],
            "values": [value for _, value in marginal.conditioned_on],
        },
    }
    jsonio.dump_json(args.out, doc)
    _log(args, f"conditioned on {cond.n} observations over {points.shape[0]} points, wrote {args.out}")
    return 0


def _cmd_sample(args):
    cond = _conditioning_from_flags(args)
    points = _query_points_from_flags(args)
    marginal = radon.posterior_over(cond, points)
    draws = gauss.sample(marginal, args.count, args.seed)
    header = [f"v{i}" for i in range(draws.shape[1])]
    jsonio.write_csv(args.out, header, draws)
    _log(args, f"sampled {args.count} paths over {points.shape[0]} points, wrote {args.out}")
    return 0


_RADON_KEYS = {"kernel", "train", "lambda", "functional", "samples", "seed"}
_FUNCTIONAL_KEYS = {"kind", "grid", "points", "at", "level"}


def _reject_unknown(doc, allowed, what):
    if not isinstance(doc, dict):
        raise ValidationError(f"{what} must be a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError(f"{what} has unknown keys {sorted(unknown)}")


def _functional_from_doc(doc):
    _reject_unknown(doc, _FUNCTIONAL_KEYS, "functional")
    kind = doc.get("kind")
    if kind not in radon.FUNCTIONAL_KINDS:
        raise ValidationError(f"unknown functional kind {kind!r}")
    if kind == "eval":
        if "at" not in doc or "grid" in doc or "points" in doc:
            raise ValidationError("eval functional needs 'at' and no grid or points")
        return FunctionalSpec.eval_at(np.atleast_1d(np.asarray(doc["at"], dtype=float)))
    if ("grid" in doc) == ("points" in doc):
        raise ValidationError(f"functional {kind!r} needs exactly one of 'grid' or 'points'")
    if "grid" in doc:
        grid = doc["grid"]
        _reject_unknown(grid, {"start", "stop", "count"}, "grid")
        for key in ("start", "stop", "count"):
            if key not in grid:
                raise ValidationError(f"grid is missing {key!r}")
        pts = _grid_points(float(grid["start"]), float(grid["stop"]), int(grid["count"]))
    else:
        pts = np.asarray(doc["points"], dtype=float)
    if kind == "exceed":
        if "level" not in doc:
            raise ValidationError("exceed functional needs 'level'")
        return FunctionalSpec.exceed(float(doc["level"]), pts)
    if "level" in doc:
        raise ValidationError(f"functional {kind!r} takes no level")
    return FunctionalSpec(kind=kind, points=pts)


def _train_from_doc(doc):
    if isinstance(doc, dict):
        _reject_unknown(doc, {"csv"}, "train")
        if "csv" not in doc:
            raise ValidationError("train object needs a 'csv' path")
        data = ingest_csv(doc["csv"])
        return data.points, data.targets
    if not isinstance(doc, list):
        raise ValidationError("train must be a list of rows or {'csv': path}")
    if not doc:
        return [], []
    rows = np.asarray(doc, dtype=float)
    if rows.ndim != 2 or rows.shape[1] < 2:
        raise ValidationError("inline train rows are [x0, .., x{d-1}, y] with d >= 1")
    return rows[:, :-1], rows[:, -1]


def _cmd_radon(args):
    spec = jsonio.load_json(args.spec)
    _reject_unknown(spec, _RADON_KEYS, "radon spec")
    for key in ("kernel", "train", "functional", "seed"):
        if key not in spec:
            raise ValidationError(f"radon spec is missing {key!r}")
    kernel = kernel_from_spec(spec["kernel"])
    train_points, targets = _train_from_doc(spec["train"])
    cond = AffineConditioning(
        kernel=kernel,
        train_points=train_points,
        targets=targets,
        lam=float(spec.get("lambda", 0.0)),
    )
    functional = _functional_from_doc(spec["functional"])
    samples = int(spec.get("samples", radon.DEFAULT_SAMPLES))
    seed = int(spec["seed"])
    estimate = radon.grt_mc(cond, functional, samples=samples, seed=seed)
    jsonio.dump_json(args.out, {
        "value": estimate.value,
        "std_error": estimate.std_error,
        "samples": estimate.samples,
        "seed": estimate.seed,
    })
    _log(args, f"estimated {functional.kind} over {functional.points.shape[0]} points, wrote {args.out}")
    return 0


def _cmd_tailmass(args):
    report = wiener.tail_mass(args.N, args.k, args.eps, args.samples, args.seed)
    doc = {
        "N": report.N,
        "k": report.k,
        "epsilon": report.epsilon,
        "estimate": report.estimate,
        "std_error": report.std_error,
        "markov_bound": report.markov_bound,
        "samples": report.samples,
        "seed": report.seed,
    }
    if args.out is None:
        print(jsonio.dumps_json(doc))
    else:
        jsonio.dump_json(args.out, doc)
        _log(args, f"tail mass estimate {report.estimate:.6g}, wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a ridge model from a CSV table")
    p.add_argument("--data", required=True)
    _add_kernel_flags(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--path", choices=list(regress.SOLVE_PATHS), default="closed_form")
    p.add_argument("--out", required=True)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("interpolate", help="fit the minimum-norm exact interpolant")
    p.add_argument("--data", required=True)
    _add_kernel_flags(p)
    p.add_argument("--out", required=True)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_interpolate)

    p = sub.add_parser("predict", help="evaluate a saved model at query points")
    p.add_argument("--model", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--out", required=True)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("condition", help="posterior mean and covariance over query points")
    _add_kernel_flags(p)
    p.add_argument("--data", default=None, help="training CSV; omit for the unconditioned process")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--points", default=None, help="query CSV")
    p.add_argument("--grid", nargs=3, metavar=("START", "STOP", "COUNT"), default=None)
    p.add_argument("--out", required=True)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_condition)

    p = sub.add_parser("sample", help="draw reproducible paths of the conditioned process")
    _add_kernel_flags(p)
    p.add_argument("--data", default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--points", default=None)
    p.add_argument("--grid", nargs=3, metavar=("START", "STOP", "COUNT"), default=None)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("radon", help="Monte Carlo functional prediction from a JSON spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_radon)

    p = sub.add_parser("tailmass", help="measurable-norm tail mass experiment")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_tailmass)

    return parser


def run(argv):
    """Dispatch one command line; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.threads is not None:
            if args.threads < 1:
                raise ValidationError("--threads must be >= 1")
            with threadpool_limits(limits=args.threads):
                return args.handler(args)
        return args.handler(args)
    except ValidationError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"{PROG}: numerical error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
