"""Compose a specialised solver source tree from the component templates."""

from __future__ import annotations

import ast
import inspect
import re
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from jinja2 import Environment, PackageLoader, StrictUndefined

from ..bench.generators import CLASS_GENERATORS
from ..model import ProblemModel, parse_model, render_model
from ..model.features import var_classes
from ..engine.store import TYPECODES
from ..spec import validate_against_model
from .components import COMPONENTS, pruning_violations
from .resolve import ResolvedSpec

PACKAGE = "dsolver"
BUILD_COMMAND = ["python3", "-O", "-m", "compileall", "-q", PACKAGE]
RUN_COMMAND = ["python3", "-O", "-m", PACKAGE]

_ENV = Environment(loader=PackageLoader("solvergen.codegen", "templates"),
                   trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True,
                   undefined=StrictUndefined)

_SNIPPET = {
    ("neq-offset", "value"): ("neq_offset_value", "make_neq_offset"),
    ("alldifferent", "pairwise"): ("alldifferent_pairwise", "make_alldiff_pairwise"),
    ("alldifferent", "hall-bounds"): ("alldifferent_hall_bounds", "make_alldiff_hall"),
    ("sum-eq", "bounds"): ("linear_bounds", "lambda scope, extra: make_linear(scope, extra, True)"),
    ("sum-leq", "bounds"): ("linear_bounds",
                            "lambda scope, extra: make_linear(scope, extra, False)"),
    ("element", "bounds"): ("element_bounds", "make_element"),
    ("table", "gac"): ("table_gac", "make_table"),
    ("product", "bounds"): ("product_bounds", "make_product"),
    ("lex-leq", "incremental"): ("lex_leq_incremental", "make_lex"),
}

# variants that can only prune once a scope variable is fixed
_WAKE_ON_FIX = {("neq-offset", "value"), ("alldifferent", "pairwise")}

_READER = {
    "neq-offset": ("neq_offset", "read_neq_offset"),
    "alldifferent": ("alldifferent", "read_alldiff"),
    "sum-eq": ("linear", "read_linear"),
    "sum-leq": ("linear", "read_linear"),
    "element": ("element", "read_element"),
    "table": ("table", "read_table"),
    "product": ("product", "read_product"),
    "lex-leq": ("lex_leq", "read_lex"),
}


class GenerationError(RuntimeError):
    pass


@dataclass
class SourceTree:
    files: dict[str, str]
    manifest: str  # path of the build manifest inside the tree
    components: list[tuple[str, str]]  # (component, reason)

    @property
    def component_names(self) -> set[str]:
        return {c for c, _ in self.components}

    def build_command(self) -> list[str]:
        return _manifest_list(self.files[self.manifest], "build")

    def run_command(self) -> list[str]:
        return _manifest_list(self.files[self.manifest], "run")

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        for rel, text in sorted(self.files.items()):
            path = out / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        return out


def _manifest_list(text: str, key: str) -> list[str]:
    m = re.search(rf"^{key} = (\[.*\])$", text, re.M)
    if not m:
        raise GenerationError(f"build manifest has no {key} entry")
    return list(ast.literal_eval(m.group(1)))


def _rep_of(rs: ResolvedSpec, name: str) -> str:
    return rs.var_classes[name].rep


def _select(rs: ResolvedSpec, m: ProblemModel) -> list[tuple[str, str]]:
    comps = [(f"memory:{rs.backtracking}", f"backtracking={rs.backtracking}")]
    by_rep: dict[str, list[str]] = {}
    for vc in var_classes(m):
        by_rep.setdefault(_rep_of(rs, vc.name), []).append(vc.name)
    for rep in sorted(by_rep):
        comps.append((f"rep:{rep}", "classes " + ",".join(by_rep[rep])))
    width = max((rs.var_classes[vc.name].width for vc in var_classes(m)), default=8)
    comps.append((f"width:{width}", "widest specialised class"))
    kinds = sorted({c.kind for c in m.constraints})
    for kind in kinds:
        comps.append((f"propagator:{kind}@{rs.propagators[kind]}", f"model uses {kind}"))
    comps.append((f"search:{rs.search.var_order}", f"var-order={rs.search.var_order}"))
    if m.objective is not None:
        comps.append(("objective:bound", f"model has an objective on {m.objective[1]}"))
    if rs.embed == "instance":
        comps.append(("frontend:instance", "embed=instance"))
    else:
        comps.append(("frontend:reader", f"embed={rs.embed}"))
        comps.append(("frontend:class" if rs.embed == "class" else "frontend:file",
                      f"embed={rs.embed}"))
    return comps


def _instance_data(rs: ResolvedSpec, m: ProblemModel):
    doms = []
    for _, d in m.scalars:
        vals = list(d.domain)
        lo, hi = vals[0], vals[-1]
        mask = None
        if _rep_of(rs, d.name) == "bitset":
            mask = 0
            for x in vals:
                mask |= 1 << (x - lo)
        doms.append(repr((lo, hi, mask)))
    cons = []
    for c in m.constraints:
        scope = tuple(m.index[r] for r in c.scope)
        if c.kind == "neq-offset":
            extra = c.const
        elif c.kind in ("sum-eq", "sum-leq"):
            extra = (tuple(c.coeffs), c.const)
        elif c.kind == "table":
            extra = tuple(c.tuples)
        else:
            extra = None
        cons.append(repr((c.kind, scope, extra)))
    goal = None
    if m.objective is not None:
        goal = (m.objective[0] == "minimise", m.index[m.objective[1]])
    return doms, cons, repr(goal)


def class_arguments(m: ProblemModel) -> list[int]:
    """Parameter values a class-level solver needs to rebuild ``m``."""
    if m.name not in CLASS_GENERATORS:
        raise GenerationError(f"no problem-class generator registered for model {m.name!r}")
    _, names = CLASS_GENERATORS[m.name]
    params = dict(m.params)
    try:
        return [params[n] for n in names]
    except KeyError as e:
        raise GenerationError(f"model {m.name!r} lacks class parameter {e.args[0]!r}") from None


def _command_line(cmd: Sequence[str]) -> str:
    return " ".join(cmd)


def generate(rs: ResolvedSpec, m: ProblemModel) -> SourceTree:
    """Pure function of ``(rs, m)``: equal inputs give byte-identical trees."""
    report = validate_against_model(rs, m)
    if not report.ok:
        raise GenerationError(f"spec does not fit the model: {report.findings[0].message}")
    comps = _select(rs, m)
    names = {c for c, _ in comps}
    reps = {c.split(":", 1)[1] for c in names if c.startswith("rep:")}
    width = int(next(c for c in names if c.startswith("width:")).split(":")[1])
    kinds = sorted({c.kind for c in m.constraints})
    objective = m.objective is not None

    bool_product = all(_rep_of(rs, m.scalars[m.index[r]][1].name) == "boolean"
                       for c in m.constraints if c.kind == "product" for r in c.scope)

    need_quotient = "product" in kinds and not bool_product
    bool_linear = all(_rep_of(rs, m.scalars[m.index[r]][1].name) == "boolean"
                      for c in m.constraints if c.kind in ("sum-eq", "sum-leq") for r in c.scope)
    snippets, makers, seen = [], [], set()
    for kind in kinds:
        tmpl, maker = _SNIPPET[(kind, rs.propagators[kind])]
        if tmpl not in seen:
            seen.add(tmpl)
            snippets.append(_ENV.get_template(f"propagators/{tmpl}.py.j2").render(
                eq="sum-eq" in kinds,
                boolean=bool_linear if tmpl == "linear_bounds" else bool_product).rstrip("\n"))
        makers.append((kind, maker))

    search = rs.search
    core = _ENV.get_template("core.py.j2").render(
        components=names, typecode=TYPECODES[width], trailing=rs.backtracking == "trailing",
        memory_desc=rs.backtracking, order_desc=search.var_order,
        bitset="bitset" in reps, plain=bool(reps & {"interval", "boolean"}),
        descending=search.val_order == "descending", node_limit=search.node_limit,
        solution_limit=search.solution_limit,
        need_cdiv=bool(set(kinds) & {"sum-eq", "sum-leq"}) or need_quotient,
        need_quotient=need_quotient,
        need_size=search.var_order != "static", need_keep="table" in kinds,
        static_order=search.var_order == "static", objective=objective,
        propagator_snippets=snippets, makers=makers,
        fix_kinds=[k for k in kinds if (k, rs.propagators[k]) in _WAKE_ON_FIX])

    files = {f"{PACKAGE}/__init__.py": f'"""Specialised solver for {m.name}."""\n',
             f"{PACKAGE}/core.py": core}
    if rs.embed == "instance":
        doms, cons, goal = _instance_data(rs, m)
        files[f"{PACKAGE}/model.py"] = _ENV.get_template("model_instance.py.j2").render(
            doms=doms, cons=cons, goal=goal)
        usage = ""
    else:
        blocks, reader_map = [], []
        for kind in kinds:
            tmpl, fn = _READER[kind]
            block = _ENV.get_template(f"readers/{tmpl}.py.j2").render().rstrip("\n")
            if block not in blocks:
                blocks.append(block)
            reader_map.append((kind, fn))
        classes = []
        for vc in var_classes(m):
            c = rs.var_classes[vc.name]
            classes.append((vc.name, c.range[0], c.range[1], c.rep == "bitset",
                            f"{c.rep} width {c.width}"))
        files[f"{PACKAGE}/reader.py"] = _ENV.get_template("reader.py.j2").render(
            components=names, classes=classes, reader_blocks=blocks, reader_map=reader_map,
            objective=objective)
        if rs.embed == "class":
            args = class_arguments(m)
            fn, pnames = CLASS_GENERATORS[m.name]
            if parse_model(fn(*args)) != m:
                raise GenerationError(f"model is not an instance of the {m.name!r} class")
            files[f"{PACKAGE}/model.py"] = _ENV.get_template("model_class.py.j2").render(
                params=repr(tuple(pnames)), generator_source=inspect.getsource(fn).rstrip("\n"),
                generator_name=fn.__name__)
            usage = " ".join(f"<{p}>" for p in pnames)
        else:
            files[f"{PACKAGE}/model.py"] = _ENV.get_template("model_file.py.j2").render()
            usage = "<model file>"
    files[f"{PACKAGE}/__main__.py"] = _ENV.get_template("main.py.j2").render(
        mode=rs.embed, objective=objective,
        description=f"specialised solver for {m.name}")
    files["pyproject.toml"] = _ENV.get_template("pyproject.toml.j2").render(
        model_name=m.name, build_command=_toml_list(BUILD_COMMAND),
        run_command=_toml_list(RUN_COMMAND))
    files["README.txt"] = _ENV.get_template("README.txt.j2").render(
        model_name=m.name, build_line=_command_line(BUILD_COMMAND),
        run_line=(_command_line(RUN_COMMAND) + " " + usage).rstrip(), objective=objective)
    files["components.txt"] = "".join(f"{c} {r}\n" for c, r in comps)

    tree = SourceTree(files, "pyproject.toml", comps)
    leaks = pruning_violations(files, names)
    if leaks:
        owner, ident, path = leaks[0]
        raise GenerationError(f"excluded component {owner} leaked {ident!r} into {path}")
    return tree


def _toml_list(items: Sequence[str]) -> str:
    return "[" + ", ".join(f'"{i}"' for i in items) + "]"


# building and running


@dataclass
class BuildResult:
    ok: bool
    ms: float
    output: str


def _localise(cmd: list[str]) -> list[str]:
    return [sys.executable if c == "python3" else c for c in cmd]


def build(tree: SourceTree, directory) -> BuildResult:
    """Run the manifest's build command inside ``directory`` (the written tree)."""
    t0 = time.perf_counter()
    proc = subprocess.run(_localise(tree.build_command()), cwd=directory, capture_output=True,
                          text=True)
    ms = (time.perf_counter() - t0) * 1000
    return BuildResult(proc.returncode == 0, ms, proc.stdout + proc.stderr)


@dataclass
class RunOutput:
    returncode: int
    solutions: list[tuple[int, ...]]
    stats: dict
    stderr: str = ""

    @property
    def nodes(self) -> int:
        return int(self.stats["nodes"])

    @property
    def count(self) -> int:
        return int(self.stats["solutions"])

    @property
    def status(self) -> str:
        return self.stats["status"]

    @property
    def objective(self) -> Optional[int]:
        v = self.stats.get("objective")
        return None if v in (None, "none") else int(v)

    @property
    def time_ms(self) -> Optional[float]:
        v = self.stats.get("time_ms")
        return None if v is None else float(v)


def parse_output(text: str) -> tuple[list[tuple[int, ...]], dict]:
    lines = text.splitlines()
    if not lines or not lines[-1].startswith("nodes="):
        raise GenerationError(f"solver output lacks a stats line: {text[-200:]!r}")
    stats = dict(kv.split("=", 1) for kv in lines[-1].split())
    sols = [tuple(int(t) for t in ln.split()) for ln in lines[:-1]]
    return sols, stats


def solver_args(tree: SourceTree, m: ProblemModel, directory) -> list[str]:
    """Input arguments that make the built tree solve ``m``."""
    names = tree.component_names
    if "frontend:instance" in names:
        return []
    if "frontend:class" in names:
        return [str(v) for v in class_arguments(m)]
    path = Path(directory) / "input.dmn"
    path.write_text(render_model(m))
    return [str(path)]


def run(tree: SourceTree, directory, args: Sequence[str] = (),
        timeout: Optional[float] = None) -> RunOutput:
    proc = subprocess.run(_localise(tree.run_command()) + list(args), cwd=directory,
                          capture_output=True, text=True, timeout=timeout)
    if proc.returncode != 0:
        return RunOutput(proc.returncode, [], {}, proc.stderr)
    sols, stats = parse_output(proc.stdout)
    return RunOutput(0, sols, stats, proc.stderr)


@dataclass
class ConformanceReport:
    ok: bool
    divergences: list[str] = field(default_factory=list)
    build_ms: float = 0.0
    output: Optional[RunOutput] = None
    directory: Optional[str] = None


def conformance_check(tree: SourceTree, m: ProblemModel, baseline, directory,
                      compare_nodes: bool = True,
                      extra_args: Sequence[str] = ()) -> ConformanceReport:
    """Build ``tree`` in ``directory``, solve ``m`` and compare against ``baseline``.

    Solution sets are compared when the baseline recorded its solutions.
    ``directory`` is kept so divergent artefacts can be inspected.
    """
    tree.write(directory)
    b = build(tree, directory)
    rep = ConformanceReport(True, build_ms=b.ms, directory=str(directory))
    if not b.ok:
        rep.ok = False
        rep.divergences.append(f"build failed: {b.output.strip()[-400:]}")
        return rep
    record = bool(baseline.solutions) or baseline.solution_count == 0
    args = solver_args(tree, m, directory) + ([] if record else ["--count"]) + list(extra_args)
    out = run(tree, directory, args)
    rep.output = out
    if out.returncode != 0:
        rep.ok = False
        rep.divergences.append(f"solver exited with {out.returncode}: {out.stderr.strip()}")
        return rep
    if out.count != baseline.solution_count:
        rep.divergences.append(
            f"solution count {out.count} != baseline {baseline.solution_count}")
    if out.status != baseline.status:
        rep.divergences.append(f"status {out.status} != baseline {baseline.status}")
    if m.objective is not None and out.objective != baseline.best_objective:
        rep.divergences.append(
            f"objective {out.objective} != baseline {baseline.best_objective}")
    if compare_nodes and out.nodes != baseline.nodes:
        rep.divergences.append(f"node count {out.nodes} != baseline {baseline.nodes}")
    if record and sorted(out.solutions) != sorted(baseline.solutions):
        rep.divergences.append("solution sets differ")
    rep.ok = not rep.divergences
    return rep


__all__ = ["COMPONENTS", "GenerationError", "SourceTree", "build", "conformance_check",
           "generate", "run"]
