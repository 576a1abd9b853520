"""Solver specification: the design decisions handed from analyser to generator.

Text format (canonical: fixed section order, sorted keys, single spaces)::

    spec-version 1

    [backtracking]
    strategy trailing|copying|default

    [propagators]
    <kind> <variant>|default

    [var-classes]
    <class> <rep>|default <width>|default <lo>..<hi>|default

    [search]
    default
      -- or --
    var-order static|smallest-domain-first
    val-order ascending|descending
    node-limit <n>|none
    solution-limit <n>|none

    [embed]
    mode none|class|instance

    [provenance]
    <decision> analyser|partial-input|default

    [model]
      <model text, each line indented by two spaces>

A partial specification uses the same grammar with every section and line
optional; var-class lines may stop after the representation or width.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from ..engine import REPS, VARIANTS, WIDTHS, SearchConfig, fits_width, width_for_range
from ..engine.search import VAL_ORDERS, VAR_ORDERS
from ..engine.store import StoreError
from ..model import ProblemModel, ValidationReport, parse_model, render_model, validate_model
from ..model.features import extract_features, var_classes

SPEC_VERSION = 1
DEFAULT = "default"
EMBED_MODES = ("none", "class", "instance")
SOURCES = ("analyser", "partial-input", "default")
SECTIONS = ("backtracking", "propagators", "var-classes", "search", "embed", "provenance",
            "model")


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class VarClassChoice:
    rep: str = DEFAULT
    width: Union[int, str] = DEFAULT
    range: Union[tuple[int, int], str] = DEFAULT

    def render(self) -> str:
        rng = self.range if self.range == DEFAULT else f"{self.range[0]}..{self.range[1]}"
        return f"{self.rep} {self.width} {rng}"


@dataclass(frozen=True)
class PartialVarClass:
    rep: Optional[str] = None
    width: Union[int, str, None] = None
    range: Union[tuple[int, int], str, None] = None


@dataclass(frozen=True)
class SolverSpec:
    version: int = SPEC_VERSION
    backtracking: str = DEFAULT
    propagators: dict = field(default_factory=dict)  # kind -> variant | default
    var_classes: dict = field(default_factory=dict)  # class -> VarClassChoice
    search: Union[SearchConfig, str] = DEFAULT
    embed: str = "none"
    embedded_model: Optional[ProblemModel] = None
    provenance: dict = field(default_factory=dict)  # decision -> source

    def __post_init__(self):
        # provenance is total: decisions nobody recorded count as defaults
        prov = {k: self.provenance.get(k, DEFAULT) for k in self.decisions()}
        extra = set(self.provenance) - set(prov)
        if extra:
            raise SpecError(f"provenance names unknown decision {sorted(extra)[0]!r}")
        object.__setattr__(self, "provenance", prov)

    def decisions(self) -> list[str]:
        keys = ["backtracking", "search", "embed"]
        keys += [f"propagator:{k}" for k in self.propagators]
        keys += [f"var-class:{c}" for c in self.var_classes]
        return sorted(keys)


@dataclass(frozen=True)
class PartialSpec:
    version: Optional[int] = None
    backtracking: Optional[str] = None
    propagators: dict = field(default_factory=dict)
    var_classes: dict = field(default_factory=dict)  # class -> PartialVarClass
    search: Union[SearchConfig, str, None] = None
    embed: Optional[str] = None
    embedded_model: Optional[ProblemModel] = None

    def is_empty(self) -> bool:
        return self == PartialSpec()


# structural invariants (model independent)


def _check_choice(kind_or_class: str, c, where: str) -> None:
    rep, width, rng = c.rep, c.width, c.range
    if rep is not None and rep != DEFAULT and rep not in REPS:
        raise SpecError(f"unknown option {rep!r} for representation of {where}")
    if width is not None and width != DEFAULT and width not in WIDTHS:
        raise SpecError(f"unknown option {width!r} for width of {where}")
    if isinstance(rng, tuple):
        lo, hi = rng
        if lo > hi:
            raise SpecError(f"range {lo}..{hi} of {where} is empty")
        if isinstance(width, int) and not fits_width(lo, hi, width):
            raise SpecError(f"width {width} of {where} cannot hold range {lo}..{hi}")
        if rep == "boolean" and not (0 <= lo and hi <= 1):
            raise SpecError(f"boolean representation of {where} needs a range within 0..1")
    if rep == "boolean" and width not in (None, DEFAULT, 8):
        raise SpecError(f"boolean representation of {where} requires width 8")


def check_structure(s) -> None:
    """Raise SpecError unless every present field is a legal option."""
    if s.backtracking is not None and s.backtracking not in ("trailing", "copying", DEFAULT):
        raise SpecError(f"unknown option {s.backtracking!r} for backtracking")
    for kind, variant in s.propagators.items():
        if kind not in VARIANTS:
            raise SpecError(f"unknown constraint kind {kind!r} in propagators")
        if variant != DEFAULT and variant not in VARIANTS[kind]:
            raise SpecError(f"unknown option {variant!r} for propagator {kind}")
    for name, c in s.var_classes.items():
        _check_choice(name, c, f"var class {name!r}")
    if s.embed is not None and s.embed not in EMBED_MODES:
        raise SpecError(f"unknown option {s.embed!r} for embed mode")
    if s.embedded_model is not None and not validate_model(s.embedded_model).ok:
        raise SpecError("embedded model is invalid")
    if isinstance(s, SolverSpec):
        if s.embed == "instance" and s.embedded_model is None:
            raise SpecError("embed mode instance requires an embedded model")
        for key, src in s.provenance.items():
            if src not in SOURCES:
                raise SpecError(f"unknown provenance source {src!r} for {key}")


# serialization


def _render_search(search) -> list[str]:
    if search == DEFAULT:
        return ["default"]
    lim = lambda x: "none" if x is None else str(x)  # noqa: E731
    return [f"var-order {search.var_order}", f"val-order {search.val_order}",
            f"node-limit {lim(search.node_limit)}",
            f"solution-limit {lim(search.solution_limit)}"]


def serialize(s: SolverSpec) -> str:
    check_structure(s)
    out = [f"spec-version {s.version}", "", "[backtracking]", f"strategy {s.backtracking}", "",
           "[propagators]"]
    out += [f"{k} {v}" for k, v in sorted(s.propagators.items())]
    out += ["", "[var-classes]"]
    out += [f"{n} {c.render()}" for n, c in sorted(s.var_classes.items())]
    out += ["", "[search]"] + _render_search(s.search)
    out += ["", "[embed]", f"mode {s.embed}", "", "[provenance]"]
    out += [f"{k} {v}" for k, v in sorted(s.provenance.items())]
    if s.embedded_model is not None:
        out += ["", "[model]"]
        out += ["  " + line for line in render_model(s.embedded_model).splitlines()]
    return "\n".join(out) + "\n"


def serialize_partial(p: PartialSpec) -> str:
    check_structure(p)
    out = []
    if p.version is not None:
        out += [f"spec-version {p.version}", ""]
    if p.backtracking is not None:
        out += ["[backtracking]", f"strategy {p.backtracking}", ""]
    if p.propagators:
        out += ["[propagators]"] + [f"{k} {v}" for k, v in sorted(p.propagators.items())] + [""]
    if p.var_classes:
        out.append("[var-classes]")
        for n, c in sorted(p.var_classes.items()):
            fields = [c.rep, c.width, c.range]
            while fields and fields[-1] is None:
                fields.pop()
            if any(f is None for f in fields):
                raise SpecError(f"partial var class {n!r} can only omit trailing fields")
            rng = fields[2] if len(fields) > 2 else None
            if isinstance(rng, tuple):
                fields[2] = f"{rng[0]}..{rng[1]}"
            out.append(" ".join([n] + [str(f) for f in fields]))
        out.append("")
    if p.search is not None:
        out += ["[search]"] + _render_search(p.search) + [""]
    if p.embed is not None:
        out += ["[embed]", f"mode {p.embed}", ""]
    if p.embedded_model is not None:
        out += ["[model]"] + ["  " + ln for ln in render_model(p.embedded_model).splitlines()]
    return "\n".join(out).rstrip("\n") + "\n"


def _parse_range(tok: str, where: str):
    if tok == DEFAULT:
        return DEFAULT
    try:
        lo, hi = tok.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise SpecError(f"malformed range {tok!r} for {where}") from None


def _parse_width(tok: str, where: str):
    if tok == DEFAULT:
        return DEFAULT
    try:
        return int(tok)
    except ValueError:
        raise SpecError(f"unknown option {tok!r} for width of {where}") from None


def _parse_limit(tok: str, where: str):
    if tok == "none":
        return None
    try:
        return int(tok)
    except ValueError:
        raise SpecError(f"unknown option {tok!r} for {where}") from None


def _parse_sections(text: str) -> dict:
    sections: dict = {"": []}
    current = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        if current == "model":
            if raw.startswith("  ") or not raw.strip():
                sections["model"].append(raw[2:])
                continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in SECTIONS:
                raise SpecError(f"line {lineno}: unknown field [{current}]")
            if current in sections:
                raise SpecError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
            continue
        sections[current].append((lineno, line.split()))
    return sections


def _load(text: str, partial: bool):
    sec = _parse_sections(text)
    kw: dict = {}
    for lineno, toks in sec[""]:
        if toks[0] != "spec-version" or len(toks) != 2:
            raise SpecError(f"line {lineno}: unknown field {toks[0]!r}")
        try:
            kw["version"] = int(toks[1])
        except ValueError:
            raise SpecError(f"line {lineno}: malformed spec-version") from None
    if not partial and "version" not in kw:
        raise SpecError("missing spec-version")
    if kw.get("version", SPEC_VERSION) != SPEC_VERSION:
        raise SpecError(f"version mismatch: file has {kw['version']}, expected {SPEC_VERSION}")

    for lineno, toks in sec.get("backtracking", []):
        if toks[0] != "strategy" or len(toks) != 2:
            raise SpecError(f"line {lineno}: unknown field {toks[0]!r} in [backtracking]")
        if toks[1] not in ("trailing", "copying", DEFAULT):
            raise SpecError(f"line {lineno}: unknown option {toks[1]!r} for backtracking")
        kw["backtracking"] = toks[1]

    props = {}
    for lineno, toks in sec.get("propagators", []):
        if len(toks) != 2:
            raise SpecError(f"line {lineno}: expected '<kind> <variant>'")
        props[toks[0]] = toks[1]
    kw["propagators"] = props

    classes = {}
    for lineno, toks in sec.get("var-classes", []):
        name, fields = toks[0], toks[1:]
        where = f"var class {name!r}"
        if not 1 <= len(fields) <= 3 or (not partial and len(fields) != 3):
            raise SpecError(f"line {lineno}: expected '<class> <rep> <width> <range>'")
        rep = fields[0]
        width = _parse_width(fields[1], where) if len(fields) > 1 else None
        rng = _parse_range(fields[2], where) if len(fields) > 2 else None
        classes[name] = (PartialVarClass if partial else VarClassChoice)(rep, width, rng)
    kw["var_classes"] = classes

    if "search" in sec:
        lines = sec["search"]
        if len(lines) == 1 and lines[0][1] == [DEFAULT]:
            kw["search"] = DEFAULT
        else:
            vals = {"var-order": "static", "val-order": "ascending",
                    "node-limit": None, "solution-limit": None}
            for lineno, toks in lines:
                if len(toks) != 2 or toks[0] not in vals:
                    raise SpecError(f"line {lineno}: unknown field {toks[0]!r} in [search]")
                key, val = toks
                if key == "var-order" and val not in VAR_ORDERS:
                    raise SpecError(f"line {lineno}: unknown option {val!r} for var-order")
                if key == "val-order" and val not in VAL_ORDERS:
                    raise SpecError(f"line {lineno}: unknown option {val!r} for val-order")
                vals[key] = _parse_limit(val, key) if key.endswith("limit") else val
            try:
                kw["search"] = SearchConfig(vals["var-order"], vals["val-order"],
                                            vals["node-limit"], vals["solution-limit"])
            except ValueError as e:
                raise SpecError(str(e)) from None
    elif not partial:
        raise SpecError("missing section [search]")

    for lineno, toks in sec.get("embed", []):
        if toks[0] != "mode" or len(toks) != 2:
            raise SpecError(f"line {lineno}: unknown field {toks[0]!r} in [embed]")
        if toks[1] not in EMBED_MODES:
            raise SpecError(f"line {lineno}: unknown option {toks[1]!r} for embed mode")
        kw["embed"] = toks[1]

    if "model" in sec:
        try:
            kw["embedded_model"] = parse_model("\n".join(sec["model"]) + "\n")
        except ValueError as e:
            raise SpecError(f"invariant violation: embedded model: {e}") from None

    if partial:
        if "provenance" in sec:
            raise SpecError("unknown field [provenance] in a partial specification")
        spec = PartialSpec(**kw)
    else:
        prov = {}
        for lineno, toks in sec.get("provenance", []):
            if len(toks) != 2 or toks[1] not in SOURCES:
                raise SpecError(f"line {lineno}: unknown option in [provenance]")
            prov[toks[0]] = toks[1]
        kw["provenance"] = prov
        spec = SolverSpec(**kw)
    try:
        check_structure(spec)
    except SpecError as e:
        raise SpecError(f"invariant violation: {e}") from None
    return spec


def deserialize(text: str) -> SolverSpec:
    """Load a full specification; unmentioned provenance entries become ``default``."""
    return _load(text, partial=False)


def deserialize_partial(text: str) -> PartialSpec:
    return _load(text, partial=True)


# merging and model checks


def merge_partial(p: PartialSpec, derived: SolverSpec,
                  model: Optional[ProblemModel] = None) -> SolverSpec:
    """Overlay ``p`` on ``derived``; overridden decisions get ``partial-input`` provenance."""
    check_structure(p)
    prov = dict(derived.provenance)
    kw: dict = {}
    if p.backtracking is not None:
        kw["backtracking"] = p.backtracking
        prov["backtracking"] = "partial-input"
    if p.search is not None:
        kw["search"] = p.search
        prov["search"] = "partial-input"
    if p.embed is not None:
        kw["embed"] = p.embed
        prov["embed"] = "partial-input"
    if p.embedded_model is not None:
        kw["embedded_model"] = p.embedded_model
    if p.propagators:
        props = dict(derived.propagators)
        for kind, variant in p.propagators.items():
            if derived.propagators and kind not in derived.propagators:
                raise SpecError(f"partial specification names propagator:{kind}, "
                                "which the model does not use")
            props[kind] = variant
            prov[f"propagator:{kind}"] = "partial-input"
        kw["propagators"] = props
    if p.var_classes:
        classes = dict(derived.var_classes)
        for name, pc in p.var_classes.items():
            if name not in classes:
                raise SpecError(f"partial specification names unknown var-class:{name}")
            base = classes[name]
            merged = VarClassChoice(
                pc.rep if pc.rep is not None else base.rep,
                pc.width if pc.width is not None else base.width,
                pc.range if pc.range is not None else base.range,
            )
            if merged.rep == "boolean" and pc.width is None:
                merged = replace(merged, width=8)
            hull = base.range if isinstance(base.range, tuple) else None
            if isinstance(merged.range, tuple) and hull is not None:
                if merged.range[0] > hull[0] or merged.range[1] < hull[1]:
                    raise SpecError(
                        f"var-class:{name}: range {merged.range[0]}..{merged.range[1]} "
                        f"excludes model domain {hull[0]}..{hull[1]}")
            try:
                _check_choice(name, merged, f"var-class:{name}")
            except SpecError as e:
                raise SpecError(str(e)) from None
            classes[name] = merged
            prov[f"var-class:{name}"] = "partial-input"
        kw["var_classes"] = classes
    merged_spec = replace(derived, provenance=prov, **kw)
    if merged_spec.embed == "instance" and merged_spec.embedded_model is None and model:
        merged_spec = replace(merged_spec, embedded_model=model)
    try:
        check_structure(merged_spec)
    except SpecError as e:
        raise SpecError(f"merged specification violates an invariant: {e}") from None
    if model is not None:
        report = validate_against_model(merged_spec, model)
        if not report.ok:
            raise SpecError(f"merged specification conflicts with the model: "
                            f"{report.findings[0].message}")
    return merged_spec


def validate_against_model(s: SolverSpec, m: ProblemModel) -> ValidationReport:
    rep = ValidationReport()
    for kind in sorted({c.kind for c in m.constraints}):
        if kind not in s.propagators:
            rep.add("uncovered", f"uncovered kind {kind}", name=kind)
            continue
        variant = s.propagators[kind]
        if variant != DEFAULT and variant not in VARIANTS.get(kind, ()):
            rep.add("variant", f"unknown variant {variant!r} for kind {kind}", name=kind)
    for vc in var_classes(m):
        choice = s.var_classes.get(vc.name)
        if choice is None:
            rep.add("uncovered", f"uncovered var class {vc.name} ({vc.kind})", name=vc.name)
            continue
        if choice.rep == "boolean" and not (0 <= vc.lo and vc.hi <= 1):
            rep.add("rep", f"boolean representation cannot hold class {vc.name} "
                    f"domain {vc.lo}..{vc.hi}", name=vc.name)
        if choice.rep == "interval" and vc.kind == "int-sparse":
            rep.add("rep", f"interval representation cannot hold sparse class {vc.name}",
                    name=vc.name)
        if choice.rep not in REPS + (DEFAULT,):
            rep.add("rep", f"unknown representation {choice.rep!r} for class {vc.name}",
                    name=vc.name)
        rng = choice.range if isinstance(choice.range, tuple) else (vc.lo, vc.hi)
        if isinstance(choice.range, tuple) and (rng[0] > vc.lo or rng[1] < vc.hi):
            rep.add("range", f"range {rng[0]}..{rng[1]} of class {vc.name} excludes "
                    f"model domain {vc.lo}..{vc.hi}", name=vc.name)
        if isinstance(choice.width, int) and not fits_width(rng[0], rng[1], choice.width):
            rep.add("width", f"width {choice.width} of class {vc.name} cannot hold "
                    f"{rng[0]}..{rng[1]}", name=vc.name)
    if s.embed == "instance":
        if s.embedded_model is None or s.embedded_model != m:
            rep.add("embed", "embedded model mismatch")
    elif s.embed == "class" and s.embedded_model is not None:
        if not extract_features(s.embedded_model).same_class_as(extract_features(m)):
            rep.add("embed", "embedded model mismatch: different problem class")
    return rep


def class_hull(m: ProblemModel, name: str) -> tuple[int, int]:
    for vc in var_classes(m):
        if vc.name == name:
            return vc.lo, vc.hi
    raise KeyError(name)


def default_width(lo: int, hi: int) -> int:
    try:
        return width_for_range(lo, hi)
    except StoreError:
        raise SpecError(f"range {lo}..{hi} does not fit any width class") from None
