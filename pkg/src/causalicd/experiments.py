"""Experiment runner: oracle CI-count studies and finite-sample accuracy
studies over batches of random graphs, emitting CSV rows and per-size CI
histograms.

Every algorithm in a run consumes the identical generated DAG (and
dataset bytes, in data mode); testers start from zeroed counters.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .citest import Dataset, FisherZCiTester, OracleCiTester
from .fci import fci
from .graphs import MixedGraph, NodePartition
from .icd import IcdConfig, icd
from .metrics import ground_truth_pag, orientation_accuracy, skeleton_confusion
from .simgen import GenConfig, make_sem, random_dag, sample_sem

CSV_COLUMNS = ["run_id", "seed", "n_total", "n_observed", "n_latent",
               "algorithm", "sample_size", "total_ci", "ci_size_hist",
               "fpr", "fnr", "f1", "orient_acc", "wall_ms"]


class SpecError(ValueError):
    pass


@dataclass
class ExperimentSpec:
    mode: str  # "oracle" or "data"
    nodes: list
    rho: float = 2.0
    graphs_per_size: int = 25
    sample_sizes: list = field(default_factory=lambda: [500])
    alpha: float = 0.01
    algorithms: list = field(default_factory=lambda: ["icd", "fci"])
    icd_n: int = None
    icd_condition_3: bool = True
    icd_ordering: str = "eq1_heuristic"
    seed: int = 0
    out_dir: str = "results"
    snapshots: bool = False

    def validate(self):
        if self.mode not in ("oracle", "data"):
            raise SpecError(f"mode: expected 'oracle' or 'data', got {self.mode!r}")
        if not self.nodes or any(n < 4 for n in self.nodes):
            raise SpecError("nodes: every listed size must be >= 4")
        if self.graphs_per_size < 1:
            raise SpecError("graphs_per_size: must be >= 1")
        if self.mode == "data" and not self.sample_sizes:
            raise SpecError("sample_sizes: required in data mode")
        bad = set(self.algorithms) - {"icd", "fci"}
        if bad:
            raise SpecError(f"algorithms: unknown entries {sorted(bad)}")


def _dag_seed(spec, size, gidx):
    return np.random.SeedSequence([spec.seed, size, gidx])


def _run_algorithm(alg, tester, num_observed, spec, snapshot_dir=None):
    strict = spec.mode == "oracle"
    start = time.perf_counter()
    if alg == "icd":
        cfg = IcdConfig(n=spec.icd_n, use_condition_3=spec.icd_condition_3,
                        ordering=spec.icd_ordering, strict_orientation=strict,
                        snapshot_dir=snapshot_dir)
        pag, _, _ = icd(tester, num_observed, cfg)
    else:
        pag, _ = fci(tester, num_observed, strict_orientation=strict)
    wall_ms = 1000.0 * (time.perf_counter() - start)
    return pag, wall_ms


def run_experiment(spec: ExperimentSpec):
    """Execute the study described by ``spec``; returns the rows written."""
    spec.validate()
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    histograms = {}

    for size in spec.nodes:
        for gidx in range(spec.graphs_per_size):
            ss_graph, ss_data = _dag_seed(spec, size, gidx).spawn(2)
            cfg = GenConfig(n_total=size, rho=spec.rho, seed=spec.seed)
            rng_graph = np.random.default_rng(ss_graph)
            dag, partition = random_dag(cfg, rng_graph)
            truth = ground_truth_pag(dag, partition)
            num_obs = len(partition.observed)

            if spec.mode == "oracle":
                testers = [(None, lambda: OracleCiTester(dag, partition))]
            else:
                sem = make_sem(dag, partition, cfg, rng_graph)
                rng_data = np.random.default_rng(ss_data)
                full = sample_sem(sem, max(spec.sample_sizes), rng_data)
                testers = []
                for n_samples in spec.sample_sizes:
                    data = Dataset(full.values[:n_samples], full.labels)
                    testers.append(
                        (n_samples,
                         lambda d=data: FisherZCiTester(d, alpha=spec.alpha)))

            for n_samples, make_tester in testers:
                for alg in spec.algorithms:
                    tester = make_tester()
                    snap = None
                    if spec.snapshots and alg == "icd":
                        snap = out / f"snapshots_n{size}_g{gidx}"
                        if n_samples is not None:
                            snap = out / f"snapshots_n{size}_g{gidx}_N{n_samples}"
                        snap.mkdir(parents=True, exist_ok=True)
                        snap = str(snap)
                    pag, wall_ms = _run_algorithm(alg, tester, num_obs, spec, snap)
                    conf = skeleton_confusion(pag, truth)
                    hist = tester.counters_snapshot()
                    run_id = f"n{size:03d}_g{gidx:03d}_{alg}"
                    if n_samples is not None:
                        run_id += f"_N{n_samples}"
                    rows.append({
                        "run_id": run_id,
                        "seed": spec.seed,
                        "n_total": size,
                        "n_observed": num_obs,
                        "n_latent": len(partition.latent),
                        "algorithm": alg,
                        "sample_size": "" if n_samples is None else n_samples,
                        "total_ci": tester.total_tests(),
                        "ci_size_hist": json.dumps(
                            {str(k): v for k, v in sorted(hist.items())}),
                        "fpr": round(conf.fpr, 6),
                        "fnr": round(conf.fnr, 6),
                        "f1": round(conf.f1, 6),
                        "orient_acc": round(orientation_accuracy(pag, truth), 6),
                        "wall_ms": round(wall_ms, 3),
                    })
                    key = (size, alg, n_samples)
                    histograms.setdefault(key, []).append(hist)

    rows.sort(key=lambda r: r["run_id"])
    with open(out / "results.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        w.writerows(rows)

    hist_payload = []
    for (size, alg, n_samples), hists in sorted(
            histograms.items(), key=lambda kv: (kv[0][0], kv[0][1], str(kv[0][2]))):
        sizes = sorted({s for h in hists for s in h})
        mean = {str(s): sum(h.get(s, 0) for h in hists) / len(hists)
                for s in sizes}
        hist_payload.append({"n_total": size, "algorithm": alg,
                             "sample_size": n_samples, "mean_counts": mean})
    with open(out / "ci_histograms.json", "w") as fh:
        json.dump(hist_payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return rows


def summarize(results_dir):
    """Aggregate a results directory into per-group summary rows.

    Groups by (n_total, algorithm, sample_size); the CI ratio column is
    relative to the FCI mean of the same group key, 1.0 for FCI itself.
    """
    path = Path(results_dir) / "results.csv"
    if not path.exists():
        raise SpecError(f"no results.csv under {results_dir}")
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SpecError("results.csv is empty")

    groups = {}
    for r in rows:
        key = (int(r["n_total"]), r["algorithm"], r["sample_size"])
        groups.setdefault(key, []).append(r)

    def mean(rs, col):
        return sum(float(r[col]) for r in rs) / len(rs)

    summary = []
    for (size, alg, sample), rs in sorted(groups.items()):
        fci_key = (size, "fci", sample)
        fci_mean = mean(groups[fci_key], "total_ci") if fci_key in groups else None
        ci_mean = mean(rs, "total_ci")
        summary.append({
            "n_total": size,
            "algorithm": alg,
            "sample_size": sample,
            "runs": len(rs),
            "mean_total_ci": round(ci_mean, 2),
            "ci_ratio_vs_fci": round(ci_mean / fci_mean, 4) if fci_mean else "",
            "mean_fpr": round(mean(rs, "fpr"), 4),
            "mean_fnr": round(mean(rs, "fnr"), 4),
            "mean_f1": round(mean(rs, "f1"), 4),
            "mean_orient_acc": round(mean(rs, "orient_acc"), 4),
        })

    out = Path(results_dir)
    cols = list(summary[0].keys())
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        w.writerows(summary)
    widths = {c: max(len(c), max(len(str(s[c])) for s in summary)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    for s in summary:
        lines.append("  ".join(str(s[c]).ljust(widths[c]) for c in cols))
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    return summary
