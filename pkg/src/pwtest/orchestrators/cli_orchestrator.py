"""
CLI Orchestrator for pwtest
Runs each command as a pipeline: load inputs, compute, write outputs and a run manifest
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import pandas as pd

from .. import __version__
from ..core import (
    DatasetSpec,
    RngSeed,
    SampleSet,
    estimate_pw,
    generate,
    h1_pair,
    penalty_gap_probe,
    project,
)
from ..core.bounds import ThresholdParams, sigmoid_preprocess, threshold_report
from ..core.datasets import Family, h0_pair, kde_export, kde_frame
from ..core.errors import ConfigError
from ..core.estimators import PwEstimate
from ..core.tester import (
    CalibrationResult,
    RocCurve,
    TestVerdict,
    calibrate,
    convergence_frame,
    convergence_medians,
    convergence_probe,
    evaluate_roc,
    run_test,
)
from ..utils import (
    ConfigLoader,
    create_progress_bar,
    manifest_path,
    print_config_panel,
    print_info,
    print_step,
    print_success,
    print_summary_table,
    read_samples,
    samples_frame,
    setup_logger,
    to_jsonable,
    write_frame,
    write_json,
    write_samples,
)

UNBOUNDED_FAMILIES = (Family.LAPLACE_SHIFT, Family.GAUSS_VAR)


@dataclass
class RunManifest:
    """Everything needed to reproduce the outputs of one command"""

    command: str
    config: Dict[str, Any]
    seed: Optional[int]
    version: str = __version__
    started_at: str = ""
    duration_seconds: float = 0.0
    outputs: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "started_at": self.started_at,
            "duration_seconds": self.duration_seconds,
            "outputs": self.outputs,
        }


def default_sigmoid(mode: str, sigmoid: Optional[bool] = None, family: Optional[str] = None) -> bool:
    """
    Sigmoid preprocessing default for one run

    An explicit choice wins. Otherwise preprocessing is on only in threshold
    mode, and there only for the unbounded families (Laplace shift, Gaussian
    variance) or for sample files, whose support is unknown.
    """
    if sigmoid is not None:
        return bool(sigmoid)
    if mode != "threshold":
        return False
    return family is None or Family(family) in UNBOUNDED_FAMILIES


class CLIOrchestrator:
    """
    Command pipelines behind the CLI

    Every command follows the same steps:
    1. Resolve configuration (flags over YAML over defaults)
    2. Load or generate samples
    3. Compute
    4. Write outputs atomically, then the run manifest
    """

    def __init__(self, config_loader: ConfigLoader, jobs: Optional[int] = None):
        """
        Initialize orchestrator

        Args:
            config_loader: Loaded configuration
            jobs: Worker processes (None defers to tester.jobs, then PWTEST_JOBS)
        """
        self.config_loader = config_loader
        self.config = config_loader.config
        self.jobs = jobs if jobs is not None else config_loader.get("tester.jobs")
        logging_section = self.config.get("logging", {})
        level = logging_section.get("level", "INFO")
        self.logger = setup_logger("pwtest", level=level, log_file=logging_section.get("file"))
        # DEBUG runs also echo the resolved configuration
        self.verbose = level == "DEBUG"

        # Statistics
        self.stats = {
            "start_time": None,
            "end_time": None,
            "outputs_written": 0,
        }

    def _seed(self, seed: Optional[int]) -> int:
        return int(self.config_loader.get("seed", 0) if seed is None else seed)

    def _start(self):
        self.stats["start_time"] = datetime.now(timezone.utc)
        self.stats["outputs_written"] = 0
        self._clock = time.perf_counter()

    def _finish(self, command: str, config: Dict[str, Any], seed: Optional[int],
                outputs: Sequence[Path]) -> RunManifest:
        """Write <first output>.manifest.json and report the run"""
        self.stats["end_time"] = datetime.now(timezone.utc)
        outputs = [Path(p) for p in outputs]
        manifest = RunManifest(
            command=command,
            config=config,
            seed=seed,
            started_at=self.stats["start_time"].isoformat(),
            duration_seconds=round(time.perf_counter() - self._clock, 6),
            outputs=[str(p) for p in outputs],
        )
        if self.verbose:
            print_config_panel(to_jsonable(config), title=f"{command} configuration")
        write_json(manifest.to_dict(), manifest_path(outputs[0]))
        self.stats["outputs_written"] = len(outputs)
        for path in outputs:
            print_success(f"Wrote {path}")
        return manifest

    @contextmanager
    def _progress(self, description: str, total: int) -> Iterator[Callable[[], None]]:
        """Progress bar over `total` work items; yields the per-item advance callback"""
        with create_progress_bar(auto_refresh=False) as progress:
            task = progress.add_task(f"[cyan]{description}", total=total)
            yield lambda: progress.update(task, advance=1, refresh=True)

    def _load_pair(self, x_path: Optional[str], y_path: Optional[str], family: Optional[str],
                   n: Optional[int], d: Optional[int], delta: Optional[float], seed: int) -> Tuple[SampleSet, SampleSet, Dict]:
        """Read both CSVs, or draw the (mu, nu) benchmark pair of a family"""
        if x_path and y_path:
            X, Y = read_samples(x_path), read_samples(y_path)
            source = {"x": str(x_path), "y": str(y_path)}
        elif family:
            if n is None:
                raise ConfigError("Generating a pair needs --n")
            spec = DatasetSpec.from_name(family, "mu", d=d or 2, **({} if delta is None else {"delta": delta}))
            spec_x, spec_y = h1_pair(spec)
            root = RngSeed(seed)
            X = generate(spec_x, n, root.derive("x"))
            Y = generate(spec_y, n, root.derive("y"))
            source = {"family": spec.family.value, "n": n, "d": spec.d, "delta": spec.delta}
        else:
            raise ConfigError("Provide both --x and --y sample files, or --family to generate a pair")
        print_info(f"Samples: n = {X.n}, m = {Y.n}, d = {X.d}")
        return X, Y, source

    def generate(self, family: str, role: str, n: int, d: int, seed: Optional[int], out: str,
                 delta: Optional[float] = None) -> SampleSet:
        """Write n draws of one side of a benchmark pair"""
        self._start()
        seed = self._seed(seed)
        spec = DatasetSpec.from_name(family, role, d=d, **({} if delta is None else {"delta": delta}))
        X = generate(spec, n, RngSeed(seed))
        path = write_samples(X, out)
        self._finish("generate", {**spec.to_dict(), "n": n}, seed, [path])
        return X

    def pw(self, x_path: Optional[str], y_path: Optional[str], out_dir: str, seed: Optional[int] = None,
           family: Optional[str] = None, n: Optional[int] = None, d: Optional[int] = None,
           delta: Optional[float] = None, kde: bool = False, grid_points: int = 512,
           **overrides) -> PwEstimate:
        """Estimate PW and write estimate.json, trace.csv, projected_{x,y}.csv and optional KDE curves"""
        self._start()
        seed = self._seed(seed)
        cfg = self.config_loader.pw_config(seed=seed, **overrides)
        if kde and cfg.k != 1:
            raise ConfigError(f"KDE export needs k = 1, got k = {cfg.k}")
        print_step(1, 3, "Loading samples")
        X, Y, source = self._load_pair(x_path, y_path, family, n, d, delta, seed)

        print_step(2, 3, f"Running SGD for {cfg.iterations} iterations")
        estimate = estimate_pw(X, Y, cfg)

        print_step(3, 3, "Saving results")
        out_dir = Path(out_dir)
        px, py = project(estimate.projector, X), project(estimate.projector, Y)
        curves = [kde_frame(kde_export(p, grid_points)) for p in (px, py)] if kde else []
        outputs = [
            write_json({**estimate.to_dict(), "input": source}, out_dir / "estimate.json"),
            write_frame(estimate.trace_frame(), out_dir / "trace.csv"),
            write_frame(samples_frame(px), out_dir / "projected_x.csv"),
            write_frame(samples_frame(py), out_dir / "projected_y.csv"),
        ]
        for name, frame in zip(("kde_x.csv", "kde_y.csv"), curves):
            outputs.append(write_frame(frame, out_dir / name))

        print_summary_table({
            "PW estimate": estimate.value,
            "Orthogonality defect": estimate.defect,
            "Iterations": cfg.iterations,
        }, title="Projected Wasserstein")
        self._finish("pw", {**cfg.to_dict(), "input": source}, seed, outputs)
        return estimate

    def test(self, x_path: Optional[str], y_path: Optional[str], out: str, method: Optional[str] = None,
             mode: Optional[str] = None, alpha: Optional[float] = None, permutations: Optional[int] = None,
             sigmoid: Optional[bool] = None, seed: Optional[int] = None, family: Optional[str] = None,
             n: Optional[int] = None, d: Optional[int] = None, delta: Optional[float] = None,
             **overrides) -> TestVerdict:
        """Run one test and write the verdict JSON"""
        self._start()
        seed = self._seed(seed)
        method = self.config_loader.tester_setting("method", method)
        mode = self.config_loader.tester_setting("mode", mode)
        alpha = self.config_loader.tester_setting("alpha", alpha)
        permutations = self.config_loader.tester_setting("permutations", permutations)
        method_config = self.config_loader.method_config(method, seed=seed, **overrides)

        X, Y, source = self._load_pair(x_path, y_path, family, n, d, delta, seed)
        sigmoid = default_sigmoid(mode, self.config_loader.tester_setting("sigmoid", sigmoid), source.get("family"))
        print_info(f"{method.upper()} test, {mode} mode, alpha = {alpha}")
        verdict = run_test(X, Y, method=method, alpha=alpha, method_config=method_config, mode=mode,
                           permutations=permutations, seed=RngSeed(seed), sigmoid=sigmoid, jobs=self.jobs)

        summary = {"Statistic": verdict.statistic, "Decision": verdict.decision.value}
        if verdict.threshold is not None:
            summary["Threshold"] = verdict.threshold
        if verdict.p_value is not None:
            summary["p-value"] = verdict.p_value
        print_summary_table(summary, title="Two-sample test")

        path = write_json({**verdict.to_dict(), "input": source}, out)
        self._finish("test", {
            "method": method, "mode": mode, "alpha": alpha, "permutations": permutations,
            "sigmoid": sigmoid, "method_config": verdict.details["config"], "input": source,
        }, seed, [path])
        return verdict

    def roc(self, family: str, d: int, n: int, out: str, method: Optional[str] = None,
            trials: Optional[int] = None, seed: Optional[int] = None, delta: Optional[float] = None,
            **overrides) -> RocCurve:
        """ROC over H0 (mu, mu) and H1 (mu, nu) draws; writes <out> (fpr, tpr) and <out>.json"""
        self._start()
        seed = self._seed(seed)
        method = self.config_loader.tester_setting("method", method)
        trials = self.config_loader.tester_setting("trials", trials)
        spec = DatasetSpec.from_name(family, "mu", d=d, **({} if delta is None else {"delta": delta}))
        method_config = self.config_loader.method_config(method, seed=seed, **overrides)

        print_info(f"{method.upper()} ROC on {spec.family.value}, d = {spec.d}, n = {n}, {trials} trials per class")
        with self._progress("ROC trials", 2 * trials) as advance:
            curve = evaluate_roc(h0_pair(spec), h1_pair(spec), method=method, trials=trials, seed=RngSeed(seed),
                                 n=n, method_config=method_config, jobs=self.jobs, progress=advance)
        out = Path(out)
        outputs = [
            write_frame(curve.to_frame(), out),
            write_json(curve.to_dict(), out.with_suffix(".json")),
        ]
        print_summary_table({"AUC": curve.auc, "Trials per class": trials}, title="ROC")
        self._finish("roc", {**curve.config, "method": method, "trials": trials}, seed, outputs)
        return curve

    def sweep_lambda(self, lambdas: Sequence[float], out: str, x_path: Optional[str] = None,
                     y_path: Optional[str] = None, seed: Optional[int] = None, family: Optional[str] = None,
                     n: Optional[int] = None, d: Optional[int] = None, delta: Optional[float] = None,
                     **overrides) -> list:
        """One PW run per penalty value; writes (penalty, value, defect) CSV"""
        self._start()
        seed = self._seed(seed)
        cfg = self.config_loader.pw_config(seed=seed, **overrides)
        X, Y, source = self._load_pair(x_path, y_path, family, n, d, delta, seed)
        rows = penalty_gap_probe(X, Y, cfg, lambdas)

        frame = pd.DataFrame([{"penalty": r.penalty, "value": r.value, "defect": r.defect} for r in rows])
        path = write_frame(frame, out)
        self._finish("sweep-lambda", {**cfg.to_dict(), "lambdas": list(lambdas), "input": source}, seed, [path])
        return rows

    def thresholds(self, x_path: str, y_path: str, out: str, alpha: Optional[float] = None,
                   method: Optional[str] = None, k: int = 1, sigmoid: bool = False) -> Dict[str, Any]:
        """Write the per-term threshold report for two sample files"""
        self._start()
        alpha = self.config_loader.tester_setting("alpha", alpha)
        method = self.config_loader.tester_setting("method", method)
        X, Y = read_samples(x_path), read_samples(y_path)
        if sigmoid:
            X, Y = sigmoid_preprocess(X), sigmoid_preprocess(Y)
        report = threshold_report(ThresholdParams.from_samples(X, Y, alpha, k=k), method)
        print_summary_table({**report["terms"], "threshold": report["threshold"]}, title="Threshold")
        path = write_json(report, out)
        self._finish("thresholds", {"alpha": alpha, "method": method, "k": k, "sigmoid": sigmoid,
                                    "x": str(x_path), "y": str(y_path)}, None, [path])
        return report

    def calibrate(self, family: str, d: int, n: int, out: str, method: Optional[str] = None,
                  trials: Optional[int] = None, alpha: Optional[float] = None, sigmoid: Optional[bool] = None,
                  seed: Optional[int] = None, delta: Optional[float] = None, **overrides) -> CalibrationResult:
        """Empirical type-I rate of the threshold test; writes per-trial CSV and <out>.json"""
        self._start()
        seed = self._seed(seed)
        method = self.config_loader.tester_setting("method", method)
        trials = self.config_loader.tester_setting("trials", trials)
        alpha = self.config_loader.tester_setting("alpha", alpha)
        spec = DatasetSpec.from_name(family, "mu", d=d, **({} if delta is None else {"delta": delta}))
        sigmoid = default_sigmoid("threshold", self.config_loader.tester_setting("sigmoid", sigmoid), spec.family.value)
        method_config = self.config_loader.method_config(method, seed=seed, **overrides)

        with self._progress("Calibration trials", trials) as advance:
            result = calibrate(spec, method=method, n=n, trials=trials, alpha=alpha, seed=RngSeed(seed),
                               method_config=method_config, sigmoid=sigmoid, jobs=self.jobs, progress=advance)
        out = Path(out)
        outputs = [
            write_frame(result.to_frame(), out),
            write_json({**result.to_dict(), "spec": spec.to_dict(), "n": n}, out.with_suffix(".json")),
        ]
        print_summary_table({"Rejections": result.rejections, "Trials": trials, "Type-I rate": result.rate},
                            title="Calibration")
        self._finish("calibrate", {**result.to_dict(), "spec": spec.to_dict(), "n": n, "sigmoid": sigmoid},
                     seed, outputs)
        return result

    def convergence(self, family: str, d: int, sizes: Sequence[int], seeds: int, out: str,
                    delta: Optional[float] = None, **overrides):
        """PW between two null-side samples per (n, seed); writes rows and <out stem>_medians.csv"""
        self._start()
        cfg = self.config_loader.pw_config(**overrides)
        spec = DatasetSpec.from_name(family, "mu", d=d, **({} if delta is None else {"delta": delta}))
        with self._progress("Convergence runs", len(sizes) * seeds) as advance:
            rows = convergence_probe(spec, sizes, seeds, cfg, jobs=self.jobs, progress=advance)
        out = Path(out)
        medians = convergence_medians(rows)
        outputs = [
            write_frame(convergence_frame(rows), out),
            write_frame(medians, out.with_name(out.stem + "_medians.csv")),
        ]
        print_summary_table({f"median PW at n = {int(r.n)}": float(r.statistic) for r in medians.itertuples()},
                            title="Convergence under H0")
        self._finish("convergence", {**cfg.to_dict(), "spec": spec.to_dict(), "sizes": list(sizes),
                                     "seeds": seeds}, None, outputs)
        return rows

    def kde(self, input_path: str, out: str, grid_points: int = 512, bandwidth="silverman"):
        """KDE curve (t, density) of a one-column sample file"""
        self._start()
        curve = kde_export(read_samples(input_path), grid_points, bandwidth)
        path = write_frame(kde_frame(curve), out)
        self._finish("kde", {"input": str(input_path), "grid_points": grid_points, "bandwidth": bandwidth},
                     None, [path])
        return curve
