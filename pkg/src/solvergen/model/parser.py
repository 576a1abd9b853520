"""Line-based model format front end.

One declaration per line; ``#`` comments run to end of line. Arrays are
flattened at parse time, so constraints always name scalars such as ``q[3]``.
"""

from __future__ import annotations

import re

from .ir import BOOL_DOMAIN, KINDS, ConstraintDecl, DomainLiteral, ProblemModel, VarDecl
from .validate import _arity_problem, classify_ref


class ModelError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)
        self.message = message


_IDENT = r"[A-Za-z_]\w*"
_INT = r"-?\d+"
_REF = rf"{_IDENT}(?:\[\d+\])*"
_TOKEN = re.compile(rf"\s*(?:(?P<ref>{_REF})|(?P<int>{_INT})|(?P<punct>[\[\]{{}}(),;:=]|\.\.))")


class _Cursor:
    def __init__(self, text: str, lineno: int, start: int = 0):
        self.text, self.lineno, self.pos = text, lineno, start

    def error(self, msg: str):
        raise ModelError(msg, self.lineno, self.pos + 1)

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == self.pos:
            return None
        return m

    def at_end(self) -> bool:
        return not self.text[self.pos:].strip()

    def next(self, kind: str, expect: str | None = None) -> str:
        m = self.peek()
        if m is None or m.group(kind) is None or (expect is not None and m.group(kind) != expect):
            rest = self.text[self.pos:].strip()
            want = expect or kind
            self.pos += len(self.text[self.pos:]) - len(self.text[self.pos:].lstrip())
            self.error(f"syntax error: expected {want!r}, found {rest[:12]!r}" if rest
                       else f"syntax error: expected {want!r} at end of line")
        self.pos = m.end()
        return m.group(kind)

    def maybe(self, punct: str) -> bool:
        m = self.peek()
        if m is not None and m.group("punct") == punct:
            self.pos = m.end()
            return True
        return False

    def integer(self) -> int:
        return int(self.next("int"))

    def int_list(self) -> list[int]:
        self.next("punct", "[")
        out = []
        if self.maybe("]"):
            return out
        while True:
            out.append(self.integer())
            if self.maybe("]"):
                return out
            self.next("punct", ",")

    def ref_list(self) -> list[tuple[str, int]]:
        self.next("punct", "[")
        out = []
        if self.maybe("]"):
            return out
        while True:
            out.append(self.ref())
            if self.maybe("]"):
                return out
            self.next("punct", ",")

    def ref(self) -> tuple[str, int]:
        m = self.peek()
        col = (m.start("ref") if m is not None and m.group("ref") else self.pos) + 1
        return self.next("ref"), col

    def tuples(self) -> list[tuple[int, ...]]:
        self.next("punct", "{")
        rows = []
        if self.maybe("}"):
            return rows
        while True:
            self.next("punct", "(")
            row = [self.integer()]
            while self.maybe(","):
                row.append(self.integer())
            self.next("punct", ")")
            rows.append(tuple(row))
            if self.maybe("}"):
                return rows
            self.next("punct", ";")


def _parse_domain(cur: _Cursor) -> tuple[str, DomainLiteral]:
    start = cur.pos
    kw = cur.next("ref")
    if kw == "bool":
        return "bool", BOOL_DOMAIN
    if kw != "int":
        cur.pos = start
        cur.error(f"syntax error: unknown variable type {kw!r}")
    if cur.maybe("("):
        lo = cur.integer()
        cur.next("punct", "..")
        hi = cur.integer()
        cur.next("punct", ")")
        if hi < lo:
            cur.pos = start
            cur.error(f"malformed domain: int({lo}..{hi}) has hi < lo")
        return "int", DomainLiteral(lo, hi)
    cur.next("punct", "{")
    vals = [cur.integer()]
    while cur.maybe(","):
        vals.append(cur.integer())
    cur.next("punct", "}")
    if vals != sorted(set(vals)):
        cur.pos = start
        cur.error("malformed domain: sparse values must be sorted and distinct")
    return "int", DomainLiteral.sparse(vals)


def _parse_constraint(cur: _Cursor, kind: str) -> tuple[ConstraintDecl, list[tuple[str, int]]]:
    if kind == "neq-offset":
        x, y = cur.ref(), cur.ref()
        return ConstraintDecl(kind, (x[0], y[0]), const=cur.integer()), [x, y]
    if kind == "alldifferent":
        refs = cur.ref_list()
        return ConstraintDecl(kind, tuple(r for r, _ in refs)), refs
    if kind in ("sum-eq", "sum-leq"):
        coeffs = cur.int_list()
        refs = cur.ref_list()
        rhs = cur.integer()
        return ConstraintDecl(kind, tuple(r for r, _ in refs), tuple(coeffs), rhs), refs
    if kind == "element":
        refs = cur.ref_list()
        idx, val = cur.ref(), cur.ref()
        refs += [idx, val]
        return ConstraintDecl(kind, tuple(r for r, _ in refs)), refs
    if kind == "table":
        refs = cur.ref_list()
        rows = cur.tuples()
        return ConstraintDecl(kind, tuple(r for r, _ in refs), tuples=tuple(rows)), refs
    if kind == "product":
        refs = [cur.ref(), cur.ref(), cur.ref()]
        return ConstraintDecl(kind, tuple(r for r, _ in refs)), refs
    # lex-leq
    xs, ys = cur.ref_list(), cur.ref_list()
    if len(xs) != len(ys):
        cur.error(f"arity mismatch: lex-leq vectors have lengths {len(xs)} and {len(ys)}")
    return ConstraintDecl(kind, tuple(r for r, _ in xs + ys)), xs + ys


def parse_model(text: str) -> ProblemModel:
    """Parse model text; raises :class:`ModelError` with line/column on failure."""
    name = None
    params: list[tuple[str, int]] = []
    variables: list[VarDecl] = []
    constraints: list[ConstraintDecl] = []
    objective = None
    partial = ProblemModel("_")  # grows as declarations arrive, for reference checks

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        cur = _Cursor(line, lineno)
        cur.pos = len(line) - len(line.lstrip())
        head = cur.peek()
        if head is None or head.group("ref") is None:
            cur.error("syntax error: expected a keyword")
        keyword = cur.next("ref")

        if name is None:
            if keyword != "model":
                cur.pos = 0
                cur.error("syntax error: first declaration must be 'model <name>'")
            name = cur.next("ref")
        elif keyword == "model":
            cur.error("syntax error: duplicate 'model' line")
        elif keyword == "param":
            pname = cur.next("ref")
            cur.next("punct", "=")
            params.append((pname, cur.integer()))
        elif keyword == "var":
            vname = cur.next("ref")
            base = re.match(_IDENT, vname).group(0)
            shape = tuple(int(e) for e in re.findall(r"\[(\d+)\]", vname[len(base):]))
            if any(e <= 0 for e in shape):
                cur.error(f"syntax error: array {base!r} needs positive extents")
            cur.next("punct", ":")
            kind, dom = _parse_domain(cur)
            if any(d.name == base for d in variables):
                cur.error(f"duplicate variable {base!r}")
            variables.append(VarDecl(base, kind, dom, shape))
            partial = ProblemModel("_", variables=tuple(variables))
        elif keyword == "constraint":
            kind_col = cur.pos
            kind = _next_kind(cur)
            if kind not in KINDS:
                cur.pos = kind_col
                cur.error(f"syntax error: unknown constraint kind {kind!r}")
            c, refs = _parse_constraint(cur, kind)
            for ref, col in refs:
                problem = classify_ref(partial, ref)
                if problem:
                    code, msg = problem
                    raise ModelError(msg, lineno, col)
            problem = _arity_problem(c)
            if problem:
                cur.error(f"arity mismatch: {problem}")
            constraints.append(c)
        elif keyword in ("minimise", "maximise"):
            if objective is not None:
                cur.error("syntax error: at most one objective")
            ref, col = cur.ref()
            if ref not in partial.index:
                raise ModelError(f"undeclared variable {ref!r}", lineno, col)
            if dict(partial.scalars)[ref].kind != "int":
                raise ModelError(f"objective variable {ref!r} is not an int variable", lineno, col)
            objective = (keyword, ref)
        else:
            cur.pos = 0
            cur.error(f"syntax error: unknown keyword {keyword!r}")
        if not cur.at_end():
            cur.pos += len(line[cur.pos:]) - len(line[cur.pos:].lstrip())
            cur.error(f"syntax error: unexpected trailing text {line[cur.pos:].strip()[:12]!r}")

    if name is None:
        raise ModelError("syntax error: empty input, expected 'model <name>'")
    return ProblemModel(name, tuple(params), tuple(variables), tuple(constraints), objective)


_KIND_RE = re.compile(r"\s*([a-z]+(?:-[a-z]+)*)")


def _next_kind(cur: _Cursor) -> str:
    m = _KIND_RE.match(cur.text, cur.pos)
    if not m:
        cur.error("syntax error: expected a constraint kind")
    cur.pos = m.end()
    return m.group(1)
