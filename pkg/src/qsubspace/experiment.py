"""Monte-Carlo comparison of separable and non-separable classifiers on Gaussian classes.

For every learning-set size ``n`` and trial, ``n`` points per class are drawn,
quantizers and one model per mode are fitted on that same sample, and
``test_points_per_class`` fresh points per class are classified by every
mode.  Randomness comes from ``numpy.random.Generator`` (PCG64, ziggurat
normals) seeded by ``SeedSequence([master_seed, n, trial])``, so each trial
is reproducible on its own and the report does not depend on how trials are
scheduled across threads.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from .classify import fit, predict_batch
from .dataset import Dataset
from .errors import QSubspaceError
from .represent import Mode

log = logging.getLogger(__name__)

CSV_HEADER = ("mode", "n", "trials", "mean_success", "std_success")


@dataclass(frozen=True)
class ExperimentConfig:
    class_means: tuple[tuple[float, ...], ...] = ((1.0, 1.0), (-2.0, -2.0))
    class_stddevs: tuple[tuple[float, ...], ...] = ((1.0, 1.0), (1.0, 1.0))
    n_min: int = 2
    n_max: int = 16
    trials: int = 100
    test_points_per_class: int = 1000
    modes: tuple[str, ...] = (Mode.SEPARABLE.value, Mode.NONSEPARABLE.value)
    master_seed: int = 20160101

    def __post_init__(self):
        means = tuple(tuple(float(v) for v in m) for m in self.class_means)
        stds = tuple(tuple(float(v) for v in s) for s in self.class_stddevs)
        object.__setattr__(self, "class_means", means)
        object.__setattr__(self, "class_stddevs", stds)
        object.__setattr__(self, "modes", tuple(Mode.parse(m).value for m in self.modes))
        if len(means) < 2:
            raise ValueError("need at least two classes")
        if len(stds) != len(means):
            raise ValueError("class_means and class_stddevs must have the same number of classes")
        p = len(means[0])
        if p == 0 or any(len(m) != p for m in means) or any(len(s) != p for s in stds):
            raise ValueError("every class needs one mean and one stddev per feature")
        if any(not math.isfinite(v) for m in means for v in m):
            raise ValueError("means must be finite")
        if any(not (v >= 0 and math.isfinite(v)) for s in stds for v in s):
            raise ValueError("stddevs must be finite and nonnegative")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError(f"invalid n range [{self.n_min}, {self.n_max}]")
        if self.trials < 1 or self.test_points_per_class < 1:
            raise ValueError("trials and test_points_per_class must be positive")
        if not self.modes:
            raise ValueError("no modes selected")

    @property
    def n_values(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @property
    def p(self) -> int:
        return len(self.class_means[0])

    def to_dict(self) -> dict:
        return {k: (list(map(list, v)) if k.startswith("class_") else list(v) if isinstance(v, tuple) else v)
                for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        unknown = set(d) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key in ("class_means", "class_stddevs", "modes"):
            if key in known:
                known[key] = tuple(tuple(v) if isinstance(v, list) else v for v in known[key])
        return cls(**known)


def sample_gaussian_class(mean, stddev, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` points whose coordinates are independent normals."""
    mean = np.asarray(mean, dtype=float)
    stddev = np.asarray(stddev, dtype=float)
    if count < 1:
        raise ValueError("count must be at least 1")
    if mean.shape != stddev.shape or mean.ndim != 1:
        raise ValueError("mean and stddev must be vectors of equal length")
    if np.any(stddev < 0) or not np.all(np.isfinite(stddev)) or not np.all(np.isfinite(mean)):
        raise ValueError("stddev must be finite and nonnegative, mean finite")
    return rng.normal(mean, stddev, size=(count, mean.size))


def trial_rngs(master_seed: int, n: int, trial: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent learning-set and test-set generators for one trial."""
    ss = np.random.SeedSequence([master_seed & 0xFFFFFFFFFFFFFFFF, n, trial])
    learn, test = ss.spawn(2)
    return np.random.default_rng(learn), np.random.default_rng(test)


@dataclass
class TrialResult:
    n: int
    trial: int
    correct: dict[str, int]
    total: int
    ties: dict[str, int]
    error: str | None = None

    def rate(self, mode: str) -> float:
        return self.correct[mode] / self.total


def run_trial(config: ExperimentConfig, n: int, trial_index: int) -> TrialResult:
    """One paired trial: every mode sees the same learning and test samples."""
    learn_rng, test_rng = trial_rngs(config.master_seed, n, trial_index)
    classes = {
        str(c): sample_gaussian_class(m, s, n, learn_rng)
        for c, (m, s) in enumerate(zip(config.class_means, config.class_stddevs))
    }
    tests = [
        sample_gaussian_class(m, s, config.test_points_per_class, test_rng)
        for m, s in zip(config.class_means, config.class_stddevs)
    ]
    X_test = np.vstack(tests)
    truth = np.repeat(np.arange(len(tests)), config.test_points_per_class)
    data = Dataset.from_classes(classes)
    correct, ties = {}, {}
    for mode in config.modes:
        try:
            model = fit(data, mode)
        except QSubspaceError as exc:
            return TrialResult(n, trial_index, {}, X_test.shape[0], {}, error=f"{mode}: {exc}")
        pred = predict_batch(model, X_test)
        correct[mode] = int(np.count_nonzero(pred.class_index == truth))
        ties[mode] = int(np.count_nonzero(pred.tie))
    return TrialResult(n, trial_index, correct, X_test.shape[0], ties)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    # (mode, n) -> per-trial success rates in trial order (failed trials omitted)
    rates: dict[tuple[str, int], list[float]]
    failures: list[dict] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return self.config.trials < 2

    def rows(self) -> list[dict]:
        out = []
        for mode in self.config.modes:
            for n in self.config.n_values:
                r = np.asarray(self.rates[mode, n])
                std = float(r.std(ddof=1)) if r.size > 1 else 0.0
                out.append({
                    "mode": mode,
                    "n": n,
                    "trials": int(r.size),
                    "mean_success": float(r.mean()) if r.size else float("nan"),
                    "std_success": std,
                })
        return out

    def mean(self, mode, n) -> float:
        return float(np.mean(self.rates[Mode.parse(mode).value, n]))

    def paired_test(self, n: int, better, worse) -> dict:
        """One-sided paired t-test of ``better > worse`` across trials at size ``n``.

        Only trials where both modes succeeded are paired; since both modes run
        inside the same trial this is every non-failed trial.
        """
        a = np.asarray(self.rates[Mode.parse(better).value, n])
        b = np.asarray(self.rates[Mode.parse(worse).value, n])
        diff = a - b
        if diff.size < 2:
            return {"n": n, "mean_diff": float(diff.mean()) if diff.size else float("nan"), "t": float("nan"), "p_value": float("nan")}
        res = stats.ttest_rel(a, b, alternative="greater")
        return {"n": n, "mean_diff": float(diff.mean()), "t": float(res.statistic), "p_value": float(res.pvalue)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows():
            w.writerow([row["mode"], row["n"], row["trials"], repr(row["mean_success"]), repr(row["std_success"])])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "config": self.config.to_dict(),
            "master_seed": self.config.master_seed,
            "sampler": "numpy PCG64 Generator.normal, SeedSequence([master_seed, n, trial]).spawn(2)",
            "degenerate_statistics": self.degenerate,
            "rows": self.rows(),
            "failures": self.failures,
        }
        return json.dumps(doc, indent=1) + "\n"


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    jobs = [(n, t) for n in config.n_values for t in range(config.trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: run_trial(config, *job), jobs))
    else:
        results = [run_trial(config, n, t) for n, t in jobs]
    results.sort(key=lambda r: (r.n, r.trial))

    rates = {(mode, n): [] for mode in config.modes for n in config.n_values}
    failures = []
    for res in results:
        if res.error is not None:
            failures.append({"n": res.n, "trial": res.trial, "error": res.error})
            continue
        for mode in config.modes:
            rates[mode, res.n].append(res.rate(mode))
    if failures:
        log.warning("%d of %d trials failed and were excluded", len(failures), len(jobs))
    if config.trials < 2:
        warnings.warn("a single trial per size gives degenerate statistics; std reported as 0", RuntimeWarning, stacklevel=2)
    return ExperimentReport(config, rates, failures)
