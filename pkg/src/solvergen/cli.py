"""Command-line entry point: ``solvergen <subcommand> ...``.

Exit codes:
  0  success (an unsatisfiable model or a hit limit is still a result)
  2  bad input: missing file, invalid model or spec, spec that does not fit
     the model, unwritable output directory
  3  analysis failure, e.g. a partial spec that conflicts with the model
  4  divergence between the generated solver and the engine
"""

from __future__ import annotations

import argparse
import shutil
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from .analysis import AnalysisError, analyse
from .bench import (
    conformance_sweep,
    default_suite,
    miscount_solutions,
    run_comparison,
    select,
)
from .codegen import (
    GenerationError,
    build,
    class_arguments,
    conformance_check,
    generate,
    resolve_defaults,
    run,
)
from .engine import EngineOptions, SearchConfig, solve
from .model import ModelError, ProblemModel, parse_model, validate_model
from .spec import (
    EMBED_MODES,
    PartialSpec,
    SpecError,
    deserialize,
    deserialize_partial,
    serialize,
)

EXIT_OK, EXIT_INPUT, EXIT_ANALYSIS, EXIT_DIVERGED = 0, 2, 3, 4
STRATEGIES = ("trailing", "copying")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _read(path: str, what: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} file not found: {path}")
    try:
        return p.read_text()
    except OSError as e:
        raise CliError(f"cannot read {what} file {path}: {e.strerror}") from None


def load_model(path: str) -> ProblemModel:
    try:
        m = parse_model(_read(path, "model"))
    except ModelError as e:
        raise CliError(f"{path}: {e}") from None
    report = validate_model(m)
    if not report.ok:
        raise CliError(f"{path}: invalid model: {report.findings[0].message}")
    return m


def load_spec(path: str):
    try:
        return deserialize(_read(path, "spec"))
    except SpecError as e:
        raise CliError(f"{path}: {e}") from None


def load_partial(path: str | None) -> PartialSpec:
    if path is None:
        return PartialSpec()
    try:
        return deserialize_partial(_read(path, "partial spec"))
    except SpecError as e:
        raise CliError(f"{path}: {e}") from None


def _writable_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".solvergen-write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as e:
        raise CliError(f"output directory {path} is not writable: {e.strerror}") from None
    return out


def _write_file(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror}") from None


def _partial_with_flags(args) -> PartialSpec:
    p = load_partial(args.partial_spec)
    if args.strategy is not None:
        p = replace(p, backtracking=args.strategy)
    if args.embed is not None:
        p = replace(p, embed=args.embed)
    return p


def _analyse(m: ProblemModel, args) -> str:
    try:
        spec = analyse(m, _partial_with_flags(args), rounds=args.rounds)
    except AnalysisError as e:
        raise CliError(f"analysis failed: {e}", EXIT_ANALYSIS) from None
    except ValueError as e:
        raise CliError(str(e)) from None
    return serialize(spec)


def _generate(spec_text: str, spec_path: str, m: ProblemModel, out: str):
    try:
        spec = deserialize(spec_text)
        rs = resolve_defaults(spec, m)
        tree = generate(rs, m)
    except (SpecError, GenerationError) as e:
        raise CliError(f"{spec_path}: {e}") from None
    directory = _writable_dir(out)
    tree.write(directory)
    return rs, tree, directory


def _search_flags(args) -> dict:
    limits = {"node_limit": args.node_limit}
    if args.solutions == "first":
        limits["solution_limit"] = 1
    return limits


def _stats_line(nodes, count, status, objective_model: bool, best) -> str:
    line = f"nodes={nodes} solutions={count} status={status}"
    if objective_model:
        line += f" objective={'none' if best is None else best}"
    return line


# subcommands


def cmd_analyse(args) -> int:
    m = load_model(args.model)
    text = _analyse(m, args)
    if args.out:
        _write_file(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_generate(args) -> int:
    m = load_model(args.model)
    _, tree, directory = _generate(_read(args.spec, "spec"), args.spec, m, args.out)
    props = sorted(c for c in tree.component_names if c.startswith("propagator:"))
    print(f"wrote {len(tree.files)} files to {directory}")
    print(f"components: {len(tree.components)} ({len(props)} propagators: {', '.join(props)})")
    print(f"build: cd {directory} && {' '.join(tree.build_command())}")
    print(f"run:   cd {directory} && {' '.join(tree.run_command())}")
    return EXIT_OK


def cmd_solve(args) -> int:
    m = load_model(args.model)
    if args.spec:
        try:
            rs = resolve_defaults(load_spec(args.spec), m)
        except SpecError as e:
            raise CliError(f"{args.spec}: {e}") from None
        options = rs.engine_options()
        cfg = rs.search_config(**_search_flags(args))
        if args.strategy:
            options = replace(options, strategy=args.strategy)
    else:
        options = EngineOptions(strategy=args.strategy or "trailing")
        cfg = SearchConfig(**_search_flags(args))
    res = solve(m, cfg, options, record=args.solutions != "count")
    out = sys.stdout
    for sol in res.solutions:
        out.write(" ".join(map(str, sol)) + "\n")
    print(_stats_line(res.nodes, res.solution_count, res.status, m.objective is not None,
                      res.best_objective))
    return EXIT_OK


def cmd_bench(args) -> int:
    suite = default_suite()
    if args.only:
        suite = select(suite, args.only)
        if not suite:
            raise CliError(f"no benchmark instance matches {', '.join(args.only)}")
    out = _writable_dir(args.out)
    mutate = miscount_solutions if args.self_test else None

    def progress(r):
        state = "ok" if r.ok else "DIVERGED"
        print(f"  {r.instance.label}: {state}", file=sys.stderr, flush=True)

    report = run_comparison(suite, rounds=args.rounds, embed=args.embed or "instance",
                            mutate=mutate, progress=progress)
    paths = report.write(out)
    sys.stdout.write(report.table())
    ok = report.ok
    if args.sweep:
        baselines = {r.instance.label: r.baseline for r in report.results if r.ok}
        for e in conformance_sweep(suite, workers=args.workers, baselines=baselines):
            print(f"sweep {e.label} embed={e.embed}: {'ok' if e.ok else 'DIVERGED'}")
            ok = ok and e.ok
    print(f"csv: {paths['csv']}")
    print(f"plot: {paths['plot']}")
    return EXIT_OK if ok else EXIT_DIVERGED


def cmd_pipeline(args) -> int:
    m = load_model(args.model)
    out = _writable_dir(args.out)
    spec_path = out / f"{m.name}.spec"
    spec_text = _analyse(m, args)
    _write_file(str(spec_path), spec_text)
    print(f"spec: {spec_path}")
    rs, tree, tree_dir = _generate(spec_text, str(spec_path), m, str(out / "solver"))
    print(f"tree: {tree_dir}")

    record = args.solutions != "count"
    baseline = solve(m, rs.search_config(), rs.engine_options(), record=record)
    with tempfile.TemporaryDirectory(prefix="solvergen-check-") as tmp:
        rep = conformance_check(tree, m, baseline, tmp)
    if not rep.ok:
        for d in rep.divergences:
            print(f"conformance: {d}", file=sys.stderr)
        return EXIT_DIVERGED
    print(f"conformance: ok ({baseline.solution_count} solutions, {baseline.nodes} nodes)")

    b = build(tree, tree_dir)
    if not b.ok:
        print(f"build failed: {b.output}", file=sys.stderr)
        return EXIT_DIVERGED
    print(f"build: ok ({b.ms:.0f} ms)")
    solver_args = []
    if "frontend:file" in tree.component_names:
        solver_args = [str(Path(args.model).resolve())]
    elif "frontend:class" in tree.component_names:
        solver_args = [str(v) for v in class_arguments(m)]
    if args.node_limit is not None:
        solver_args += ["--node-limit", str(args.node_limit)]
    if args.solutions == "first":
        solver_args += ["--solution-limit", "1"]
    elif args.solutions == "count":
        solver_args += ["--count"]
    res = run(tree, tree_dir, solver_args)
    if res.returncode != 0:
        print(res.stderr, file=sys.stderr, end="")
        return EXIT_DIVERGED
    for sol in res.solutions:
        print(" ".join(map(str, sol)))
    print(" ".join(f"{k}={v}" for k, v in res.stats.items()))
    # keep the tree identical to what `generate` writes
    shutil.rmtree(tree_dir / "dsolver" / "__pycache__", ignore_errors=True)
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solvergen",
                                 description="Analyse models and generate specialised solvers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def analysis_flags(p):
        p.add_argument("--partial-spec", metavar="PATH", help="expert choices to keep fixed")
        p.add_argument("--rounds", type=_positive, default=1,
                       help="analysis rounds; rounds past the first probe the engine")
        p.add_argument("--embed", choices=EMBED_MODES, help="how the model reaches the solver")
        p.add_argument("--strategy", choices=STRATEGIES, help="force the backtracking memory")

    def search_flags(p):
        p.add_argument("--node-limit", type=_positive, metavar="N")
        p.add_argument("--solutions", choices=("all", "first", "count"), default="all",
                       help="print every solution, stop at the first, or only count")

    p = sub.add_parser("analyse", help="derive a solver spec for a model")
    p.add_argument("model")
    p.add_argument("-o", "--out", help="spec file to write (default: stdout)")
    analysis_flags(p)
    p.set_defaults(fn=cmd_analyse)

    p = sub.add_parser("generate", help="emit a specialised solver source tree")
    p.add_argument("spec")
    p.add_argument("model")
    p.add_argument("-o", "--out", required=True, help="directory for the source tree")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("solve", help="solve a model with the general engine")
    p.add_argument("model")
    p.add_argument("--spec", help="take engine choices from this spec")
    p.add_argument("--strategy", choices=STRATEGIES)
    search_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("bench", help="compare general and generated solvers")
    p.add_argument("-o", "--out", default="bench-out", help="report directory")
    p.add_argument("--rounds", type=_positive, default=5, help="timed runs per instance")
    p.add_argument("--only", nargs="+", metavar="NAME",
                   help="class names or labels such as queens or 'bibd(7,7,3,3,1)'")
    p.add_argument("--embed", choices=EMBED_MODES)
    p.add_argument("--self-test", action="store_true",
                   help="corrupt the generated solution counter; every row must diverge")
    p.add_argument("--sweep", action="store_true",
                   help="also check every embed mode for equality (no timing)")
    p.add_argument("--workers", type=_positive, default=1, help="processes for --sweep")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("pipeline", help="analyse, generate, build, check and run")
    p.add_argument("model")
    p.add_argument("-o", "--out", required=True, help="directory for the spec and tree")
    analysis_flags(p)
    search_flags(p)
    p.set_defaults(fn=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
