"""Benchmark model generators for the four problem classes.

Each ``*_text`` function is self-contained (stdlib only, no module-level
helpers) because class-level generated solvers embed its source verbatim.
"""

from __future__ import annotations

from ..model import ProblemModel, parse_model


def queens_text(n):
    if n < 1:
        raise ValueError("queens needs n >= 1")
    q = [f"q[{i}]" for i in range(n)]
    out = ["model queens", f"param n = {n}", f"var q[{n}] : int(1..{n})",
           "constraint alldifferent [" + ",".join(q) + "]"]
    for i in range(n):
        for j in range(i + 1, n):
            out.append(f"constraint neq-offset {q[i]} {q[j]} {j - i}")
            out.append(f"constraint neq-offset {q[i]} {q[j]} {i - j}")
    return "\n".join(out) + "\n"


def golomb_text(m, bound):
    if m < 2 or bound < 1:
        raise ValueError("golomb needs m >= 2 and a positive length bound")
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    out = ["model golomb", f"param m = {m}", f"param bound = {bound}",
           f"var x[{m}] : int(0..{bound})",
           f"var d[{len(pairs)}] : int(1..{bound})",
           "constraint sum-eq [1] [x[0]] 0"]
    for i in range(m - 1):
        out.append(f"constraint sum-leq [1,-1] [x[{i}],x[{i + 1}]] -1")
    for k, (i, j) in enumerate(pairs):
        out.append(f"constraint sum-eq [1,-1,-1] [x[{j}],x[{i}],d[{k}]] 0")
    out.append("constraint alldifferent [" + ",".join(f"d[{k}]" for k in range(len(pairs))) + "]")
    if m > 2:
        last = pairs.index((m - 2, m - 1))
        out.append(f"constraint sum-leq [1,-1] [d[0],d[{last}]] -1")
    out.append(f"minimise x[{m - 1}]")
    return "\n".join(out) + "\n"


def bibd_text(v, b, r, k, lam):
    if min(v, b, r, k, lam) < 1:
        raise ValueError("bibd parameters must be positive")
    if v * r != b * k:
        raise ValueError(f"inadmissible bibd: v*r = {v * r} != b*k = {b * k}")
    if lam * (v - 1) != r * (k - 1):
        raise ValueError(
            f"inadmissible bibd: lambda*(v-1) = {lam * (v - 1)} != r*(k-1) = {r * (k - 1)}")
    pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
    out = ["model bibd"] + [f"param {n} = {x}" for n, x in
                            (("v", v), ("b", b), ("r", r), ("k", k), ("lambda", lam))]
    out.append(f"var x[{v}][{b}] : bool")
    if pairs:
        out.append(f"var p[{len(pairs)}][{b}] : bool")
    for i in range(v):
        row = ",".join(f"x[{i}][{t}]" for t in range(b))
        out.append(f"constraint sum-eq [{','.join(['1'] * b)}] [{row}] {r}")
    for t in range(b):
        col = ",".join(f"x[{i}][{t}]" for i in range(v))
        out.append(f"constraint sum-eq [{','.join(['1'] * v)}] [{col}] {k}")
    for n, (i, j) in enumerate(pairs):
        for t in range(b):
            out.append(f"constraint product x[{i}][{t}] x[{j}][{t}] p[{n}][{t}]")
        prow = ",".join(f"p[{n}][{t}]" for t in range(b))
        out.append(f"constraint sum-eq [{','.join(['1'] * b)}] [{prow}] {lam}")
    for i in range(v - 1):
        a = ",".join(f"x[{i + 1}][{t}]" for t in range(b))
        c = ",".join(f"x[{i}][{t}]" for t in range(b))
        out.append(f"constraint lex-leq [{a}] [{c}]")
    for t in range(b - 1):
        a = ",".join(f"x[{i}][{t + 1}]" for i in range(v))
        c = ",".join(f"x[{i}][{t}]" for i in range(v))
        out.append(f"constraint lex-leq [{a}] [{c}]")
    return "\n".join(out) + "\n"


def golfers_text(g, s, w):
    if min(g, s, w) < 1:
        raise ValueError("golfers parameters must be positive")
    n = g * s
    pairs = [(a, c) for a in range(n) for c in range(a + 1, n)]
    out = ["model golfers", f"param g = {g}", f"param s = {s}", f"param w = {w}",
           f"var x[{w}][{n}][{g}] : bool"]
    if pairs:
        out.append(f"var meet[{len(pairs)}][{w}][{g}] : bool")
    for wk in range(w):
        for grp in range(g):
            cell = ",".join(f"x[{wk}][{p}][{grp}]" for p in range(n))
            out.append(f"constraint sum-eq [{','.join(['1'] * n)}] [{cell}] {s}")
        for p in range(n):
            cell = ",".join(f"x[{wk}][{p}][{grp}]" for grp in range(g))
            out.append(f"constraint sum-eq [{','.join(['1'] * g)}] [{cell}] 1")
    # first week is fixed: golfer p plays in group p // s
    for p in range(n):
        out.append(f"constraint sum-eq [1] [x[0][{p}][{p // s}]] 1")
    for idx, (a, c) in enumerate(pairs):
        cells = []
        for wk in range(w):
            for grp in range(g):
                out.append(f"constraint product x[{wk}][{a}][{grp}] x[{wk}][{c}][{grp}] "
                           f"meet[{idx}][{wk}][{grp}]")
                cells.append(f"meet[{idx}][{wk}][{grp}]")
        out.append(f"constraint sum-leq [{','.join(['1'] * len(cells))}] [{','.join(cells)}] 1")
    return "\n".join(out) + "\n"


def gen_queens(n: int) -> ProblemModel:
    return parse_model(queens_text(n))


def gen_golomb(m: int, length_bound: int | None = None) -> ProblemModel:
    return parse_model(golomb_text(m, length_bound if length_bound is not None else m * m))


def gen_bibd(v: int, b: int, r: int, k: int, lam: int) -> ProblemModel:
    return parse_model(bibd_text(v, b, r, k, lam))


def gen_golfers(g: int, s: int, w: int) -> ProblemModel:
    return parse_model(golfers_text(g, s, w))


# model name -> (text generator, parameter names in header order)
CLASS_GENERATORS = {
    "queens": (queens_text, ("n",)),
    "golomb": (golomb_text, ("m", "bound")),
    "bibd": (bibd_text, ("v", "b", "r", "k", "lambda")),
    "golfers": (golfers_text, ("g", "s", "w")),
}
