"""Command-line interface.

    qsubspace fit --mode {flat1d|separable|nonseparable} --data train.csv --out model.json
    qsubspace classify --model model.json --in patterns.csv --out predictions.csv
    qsubspace experiment [--seed N --trials N --n-min N --n-max N --test-points N
                          --means "1,1;-2,-2" --stddevs "1,1;1,1"] --out prefix

Exit status: 0 on success, 1 for unreadable or malformed input, 2 when the
input is well formed but cannot be fitted or classified.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .classify import fit, predict_batch
from .dataset import read_csv, read_features_csv
from .errors import DatasetError, ModelError, QSubspaceError
from .experiment import ExperimentConfig, run_experiment
from .represent import Mode
from .storage import load_model, save_model

EXIT_PARSE = 1
EXIT_FIT = 2


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_fit(args) -> int:
    try:
        data = read_csv(args.data)
    except (OSError, DatasetError) as exc:
        _err(str(exc))
        return EXIT_PARSE
    try:
        model = fit(data, args.mode, store_elements=args.store_elements)
    except QSubspaceError as exc:
        _err(str(exc))
        return EXIT_FIT
    save_model(model, args.out)
    print(f"mode: {model.mode.value}")
    print(f"classes: {', '.join(model.labels)}")
    print(f"quantizer dims: {list(model.bank.dims)}")
    if model.mode is Mode.NONSEPARABLE:
        print(f"product dim: {math.prod(model.bank.dims)}")
    return 0


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_classify(args) -> int:
    try:
        model = load_model(args.model)
        X, _ = read_features_csv(args.input, require_label=False)
    except (OSError, DatasetError, ModelError) as exc:
        _err(str(exc))
        return EXIT_PARSE
    if X.shape[1] != model.p:
        _err(f"model expects {model.p} features, input has {X.shape[1]}")
        return EXIT_FIT
    try:
        pred = predict_batch(model, X)
    except QSubspaceError as exc:
        _err(str(exc))
        return EXIT_FIT
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "label"] + [f"score_{lab}" for lab in model.labels] + ["tie"])
        for i in range(len(pred)):
            w.writerow(
                [i, model.labels[pred.class_index[i]]]
                + [_fmt(s) for s in pred.scores[i]]
                + ["true" if pred.tie[i] else "false"]
            )
    return 0


def _parse_matrix(text: str) -> list[list[float]]:
    """``"1,1;-2,-2"`` -> ``[[1, 1], [-2, -2]]``."""
    return [[float(v) for v in row.split(",")] for row in text.split(";") if row.strip()]


def _experiment_config(args) -> ExperimentConfig:
    base = {}
    if args.config:
        base = json.loads(Path(args.config).read_text(encoding="utf-8"))
    overrides = {
        "master_seed": args.seed,
        "trials": args.trials,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "test_points_per_class": args.test_points,
        "class_means": _parse_matrix(args.means) if args.means else None,
        "class_stddevs": _parse_matrix(args.stddevs) if args.stddevs else None,
        "modes": args.modes.split(",") if args.modes else None,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if "class_means" in base and "class_stddevs" not in base:
        base["class_stddevs"] = [[1.0] * len(m) for m in base["class_means"]]
    return ExperimentConfig.from_dict(base)


def cmd_experiment(args) -> int:
    try:
        config = _experiment_config(args)
    except (OSError, ValueError, TypeError) as exc:
        _err(f"invalid experiment config: {exc}")
        return EXIT_PARSE
    report = run_experiment(config, workers=args.workers)
    prefix = Path(args.out)
    prefix.with_name(prefix.name + ".csv").write_text(report.to_csv(), encoding="utf-8")
    prefix.with_name(prefix.name + ".json").write_text(report.to_json(), encoding="utf-8")
    n = config.n_max
    line = "n=%d " % n + " ".join(f"{m}={report.mean(m, n):.4f}" for m in config.modes)
    sep, ent = Mode.SEPARABLE.value, Mode.NONSEPARABLE.value
    if sep in config.modes and ent in config.modes and config.trials > 1:
        t = report.paired_test(n, ent, sep)
        line += f" (nonseparable - separable = {t['mean_diff']:+.4f}, one-sided p = {t['p_value']:.3g})"
    print(line)
    if report.failures:
        print(f"{len(report.failures)} failed trials excluded", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsubspace", description="Quantum-inspired overlap classifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a model from a labeled CSV")
    p.add_argument("--mode", required=True, choices=[m.value for m in Mode])
    p.add_argument("--data", required=True, help="CSV with header f0,...,f{p-1},label")
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--store-elements", action="store_true", help="keep quantized learning elements for kNN")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("classify", help="classify rows of a feature CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="run the Gaussian success-rate experiment")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--test-points", type=int)
    p.add_argument("--means", help='per-class means, e.g. "1,1;-2,-2"')
    p.add_argument("--stddevs", help='per-class stddevs, e.g. "1,1;1,1"')
    p.add_argument("--modes", help="comma-separated subset of separable,nonseparable")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output prefix; writes <prefix>.csv and <prefix>.json")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
