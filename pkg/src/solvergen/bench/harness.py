"""General engine versus generated solver on the benchmark classes.

Each instance goes through analyse -> generate -> build -> run. Pipeline
overhead is timed separately from solve time, and correctness (solution
count, status, objective and node count) is checked before any timing is
kept. Divergent instances are flagged and carry no timings.
"""

from __future__ import annotations

import csv
import io
import statistics
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

from ..analysis import analyse
from ..codegen import (
    SourceTree,
    conformance_check,
    generate,
    resolve_defaults,
    run,
    solver_args,
)
from ..engine import Solver
from ..model import ProblemModel, render_model
from .generators import gen_bibd, gen_golfers, gen_golomb, gen_queens

CSV_COLUMNS = ["class", "params", "general_ms", "specialised_ms", "speedup", "nodes_g",
               "nodes_s", "sols_g", "sols_s", "overhead_ms"]
CLASS_ORDER = ("queens", "golomb", "bibd", "golfers")


@dataclass(frozen=True)
class Instance:
    cls: str
    params: tuple  # ((name, value), ...)
    model: ProblemModel

    @property
    def label(self) -> str:
        return f"{self.cls}(" + ",".join(str(v) for _, v in self.params) + ")"

    @property
    def params_text(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.params)

    @property
    def slug(self) -> str:
        return self.cls + "_" + "_".join(str(v) for _, v in self.params)


def instance_of(m: ProblemModel) -> Instance:
    return Instance(m.name, tuple(m.params), m)


def default_suite() -> list[Instance]:
    models = [gen_queens(n) for n in (8, 10, 12)]
    models += [gen_golomb(m) for m in (5, 6, 7)]
    models += [gen_bibd(*p) for p in ((7, 7, 3, 3, 1), (6, 10, 5, 3, 2), (7, 14, 6, 3, 2))]
    models += [gen_golfers(*p) for p in ((2, 2, 3), (3, 2, 3))]
    return [instance_of(m) for m in models]


def select(suite: Sequence[Instance], names: Sequence[str]) -> list[Instance]:
    """Instances whose class or label matches one of ``names``."""
    wanted = set(names)
    return [i for i in suite if i.cls in wanted or i.label in wanted]


@dataclass
class InstanceResult:
    instance: Instance
    nodes_g: int = 0
    nodes_s: int = 0
    sols_g: int = 0
    sols_s: int = 0
    status_g: str = ""
    status_s: str = ""
    counts_equal: bool = False
    nodes_equal: bool = False
    general_runs: list = field(default_factory=list)
    specialised_runs: list = field(default_factory=list)
    analyse_ms: float = 0.0
    generate_ms: float = 0.0
    build_ms: float = 0.0
    divergences: list = field(default_factory=list)
    baseline: object = field(default=None, repr=False)  # engine result, reused by the sweep

    @property
    def ok(self) -> bool:
        return self.counts_equal and self.nodes_equal and not self.divergences

    @property
    def general_ms(self) -> Optional[float]:
        return statistics.median(self.general_runs) if self.ok and self.general_runs else None

    @property
    def specialised_ms(self) -> Optional[float]:
        if not (self.ok and self.specialised_runs):
            return None
        return statistics.median(self.specialised_runs)

    @property
    def speedup(self) -> Optional[float]:
        g, s = self.general_ms, self.specialised_ms
        if g is None or s is None:
            return None
        return g / max(s, 1e-6)

    @property
    def overhead_ms(self) -> float:
        return self.analyse_ms + self.generate_ms + self.build_ms


@dataclass
class BenchmarkReport:
    results: list[InstanceResult]
    rounds: int
    embed: str = "instance"

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def class_medians(self) -> dict[str, float]:
        by: dict[str, list[float]] = {}
        for r in self.results:
            if r.speedup is not None:
                by.setdefault(r.instance.cls, []).append(r.speedup)
        return {c: statistics.median(v) for c, v in by.items()}

    def overall_median(self) -> Optional[float]:
        ups = [r.speedup for r in self.results if r.speedup is not None]
        return statistics.median(ups) if ups else None

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.results:
            if r.ok:
                timing = [f"{r.general_ms:.3f}", f"{r.specialised_ms:.3f}", f"{r.speedup:.3f}"]
            else:
                timing = ["", "", "diverged"]
            w.writerow([r.instance.cls, r.instance.params_text, *timing, r.nodes_g, r.nodes_s,
                        r.sols_g, r.sols_s, f"{r.overhead_ms:.1f}"])
        return buf.getvalue()

    def table(self) -> str:
        head = (f"{'instance':<22}{'general ms':>12}{'special ms':>12}{'speedup':>9}"
                f"{'nodes':>11}{'sols':>10}{'overhead ms':>13}  equal")
        lines = [head, "-" * len(head)]
        for r in self.results:
            if r.ok:
                t = f"{r.general_ms:>12.1f}{r.specialised_ms:>12.1f}{r.speedup:>9.2f}"
            else:
                t = f"{'-':>12}{'-':>12}{'-':>9}"
            lines.append(f"{r.instance.label:<22}{t}{r.nodes_s:>11}{r.sols_s:>10}"
                         f"{r.overhead_ms:>13.0f}  {'yes' if r.ok else 'NO'}")
        lines.append("-" * len(head))
        for c, med in sorted(self.class_medians().items(), key=lambda kv: _class_key(kv[0])):
            lines.append(f"median speedup {c:<10}{med:>6.2f}")
        overall = self.overall_median()
        lines.append(f"median speedup overall   "
                     + ("n/a" if overall is None else f"{overall:.2f}"))
        lines.append(f"rounds per instance: {self.rounds}")
        for r in self.results:
            for d in r.divergences:
                lines.append(f"DIVERGED {r.instance.label}: {d}")
        return "\n".join(lines) + "\n"

    def plot(self, path) -> Path:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5.5, 5))
        pts = []
        for cls in sorted({r.instance.cls for r in self.results}, key=_class_key):
            rows = [r for r in self.results if r.instance.cls == cls and r.ok]
            if rows:
                xs = [r.general_ms for r in rows]
                ys = [r.specialised_ms for r in rows]
                ax.scatter(xs, ys, label=cls)
                pts += xs + ys
        if pts:
            lo, hi = min(pts) * 0.8, max(pts) * 1.25
            ax.plot([lo, hi], [lo, hi], "k--", linewidth=0.8, label="equal time")
            ax.set_xlim(lo, hi)
            ax.set_ylim(lo, hi)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("general engine solve time (ms)")
        ax.set_ylabel("generated solver solve time (ms)")
        ax.set_title("Solve time per instance (below the line: generated is faster)",
                     fontsize=9)
        if pts:
            ax.legend(fontsize=8)
        fig.tight_layout()
        path = Path(path)
        fig.savefig(path, dpi=120)
        plt.close(fig)
        return path

    def write(self, out_dir, stem: str = "bench") -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"csv": out / f"{stem}.csv", "table": out / f"{stem}.txt",
                 "plot": out / f"{stem}.png", "models": out / "models"}
        paths["csv"].write_text(self.csv_text())
        paths["table"].write_text(self.table())
        self.plot(paths["plot"])
        write_models([r.instance for r in self.results], paths["models"])
        return paths


def _class_key(cls: str):
    return (CLASS_ORDER.index(cls) if cls in CLASS_ORDER else len(CLASS_ORDER), cls)


def write_models(instances: Sequence[Instance], directory) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for inst in instances:
        p = d / f"{inst.slug}.dmn"
        p.write_text(render_model(inst.model))
        paths.append(p)
    return paths


def miscount_solutions(tree: SourceTree) -> SourceTree:
    """Mutation used by the self-test: the generated solver counts every solution twice."""
    files = dict(tree.files)
    core = files["dsolver/core.py"]
    target = "        count += 1\n"
    if target not in core:
        raise ValueError("core module lacks the solution counter")
    files["dsolver/core.py"] = core.replace(target, "        count += 2\n", 1)
    return replace(tree, files=files)


def _general_run(m: ProblemModel, rs) -> tuple[float, object]:
    t0 = time.perf_counter()
    res = Solver(m, rs.engine_options(), rs.search_config()).solve(record=False)
    return (time.perf_counter() - t0) * 1000.0, res


def compare_instance(inst: Instance, rounds: int, workdir, embed: str = "instance",
                     mutate: Optional[Callable[[SourceTree], SourceTree]] = None,
                     timeout: Optional[float] = None) -> InstanceResult:
    m = inst.model
    res = InstanceResult(inst)

    t0 = time.perf_counter()
    spec = analyse(m)
    res.analyse_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    spec = replace(spec, embed=embed, embedded_model=m if embed == "instance" else None)
    rs = resolve_defaults(spec, m)
    tree = generate(rs, m)
    res.generate_ms = (time.perf_counter() - t0) * 1000.0
    if mutate is not None:
        tree = mutate(tree)

    g_ms, base = _general_run(m, rs)
    res.baseline = base
    res.nodes_g, res.sols_g, res.status_g = base.nodes, base.solution_count, base.status
    rep = conformance_check(tree, m, base, workdir, extra_args=["--time"])
    res.build_ms = rep.build_ms
    out = rep.output
    if out is not None and out.returncode == 0:
        res.nodes_s, res.sols_s, res.status_s = out.nodes, out.count, out.status
    res.counts_equal = res.sols_g == res.sols_s and res.status_g == res.status_s
    res.nodes_equal = res.nodes_g == res.nodes_s
    if not rep.ok:
        res.divergences.extend(rep.divergences)
        return res
    res.general_runs.append(g_ms)
    res.specialised_runs.append(out.time_ms)

    args = solver_args(tree, m, workdir) + ["--count", "--time"]
    for _ in range(rounds - 1):
        g_ms, again = _general_run(m, rs)
        if (again.nodes, again.solution_count) == (res.nodes_g, res.sols_g):
            res.general_runs.append(g_ms)
        try:
            o = run(tree, workdir, args, timeout=timeout)
        except Exception as e:  # a hung or crashed run is not a completed run
            res.divergences.append(f"timing run failed: {e}")
            continue
        if o.returncode != 0 or (o.nodes, o.count) != (res.nodes_s, res.sols_s):
            res.divergences.append("timing run disagreed with the verified run")
            continue
        res.specialised_runs.append(o.time_ms)
    return res


def run_comparison(instances: Sequence, rounds: int = 5, embed: str = "instance",
                   workdir=None, mutate: Optional[Callable] = None,
                   progress: Optional[Callable[[InstanceResult], None]] = None,
                   timeout: Optional[float] = None) -> BenchmarkReport:
    """Compare both solvers on ``instances`` (``Instance`` or ``ProblemModel``).

    Timing runs are serialised; solve times are medians of ``rounds`` runs.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be at least 1, got {rounds}")
    insts = [i if isinstance(i, Instance) else instance_of(i) for i in instances]
    results = []
    with tempfile.TemporaryDirectory(prefix="solvergen-bench-") as tmp:
        base = Path(workdir) if workdir is not None else Path(tmp)
        for inst in insts:
            d = base / inst.slug
            d.mkdir(parents=True, exist_ok=True)
            r = compare_instance(inst, rounds, d, embed, mutate, timeout)
            results.append(r)
            if progress is not None:
                progress(r)
    return BenchmarkReport(results, rounds, embed)


# correctness sweep across embed modes (no timing, may run in parallel)


@dataclass
class SweepEntry:
    label: str
    embed: str
    ok: bool
    divergences: list


def _sweep_one(job) -> SweepEntry:
    inst, embed, baseline = job
    m = inst.model
    spec = replace(analyse(m), embed=embed, embedded_model=m if embed == "instance" else None)
    rs = resolve_defaults(spec, m)
    tree = generate(rs, m)
    if baseline is None:
        baseline = Solver(m, rs.engine_options(), rs.search_config()).solve(record=False)
    with tempfile.TemporaryDirectory(prefix="solvergen-sweep-") as d:
        rep = conformance_check(tree, m, baseline, d)
    return SweepEntry(inst.label, embed, rep.ok, rep.divergences)


def conformance_sweep(instances: Sequence, embeds: Sequence[str] = ("none", "class", "instance"),
                      workers: int = 1, baselines: Optional[dict] = None) -> list[SweepEntry]:
    """Generated-vs-engine equality for every instance and embed mode.

    ``baselines`` maps instance labels to engine results already computed
    with the analysed spec, so the engine need not be rerun.
    """
    insts = [i if isinstance(i, Instance) else instance_of(i) for i in instances]
    baselines = baselines or {}
    jobs = [(i, e, baselines.get(i.label)) for i in insts for e in embeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_sweep_one, jobs))
    return [_sweep_one(j) for j in jobs]
