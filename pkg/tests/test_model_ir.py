import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_model
from solvergen.bench.generators import gen_bibd, gen_golfers, gen_golomb, gen_queens
from solvergen.model import (
    ConstraintDecl,
    DomainLiteral,
    ModelError,
    ProblemModel,
    VarDecl,
    extract_features,
    parse_model,
    render_model,
    validate_model,
)

QUEENS4 = """\
# four queens
model queens
param n = 4
var q[4] : int(1..4)
constraint alldifferent [q[0],q[1],q[2],q[3]]
"""


def queens4_text():
    lines = [QUEENS4.rstrip("\n")]
    for i in range(4):
        for j in range(i + 1, 4):
            lines.append(f"constraint neq-offset q[{i}] q[{j}] {j - i}   # diagonal")
            lines.append(f"constraint neq-offset q[{i}] q[{j}] {i - j}")
    return "\n".join(lines) + "\n\n"


def test_parse_queens4_counts():
    m = parse_model(queens4_text())
    assert len(m.scalars) == 4
    assert len(m.constraints) == 13
    assert m.var_names == ["q[0]", "q[1]", "q[2]", "q[3]"]
    assert m.params == (("n", 4),)


def test_parse_matches_generator():
    assert parse_model(queens4_text()) == gen_queens(4)


def test_empty_model():
    m = parse_model("model empty\n")
    assert m.name == "empty"
    assert len(m.scalars) == 0 and len(m.constraints) == 0


@pytest.mark.parametrize("text, fragment", [
    ("model t\nvar x : int(5..3)\n", "malformed domain"),
    ("model t\nvar x : int{3,1}\n", "malformed domain"),
    ("model t\nvar x : int(1..3)\nconstraint alldifferent [x,z]\n", "undeclared variable 'z'"),
    ("model t\nvar x[2] : bool\nconstraint alldifferent [x[0],x[2]]\n", "index out of bounds"),
    ("model t\nvar x : bool\nvar y : bool\nconstraint lex-leq [x] [x,y]\n", "arity mismatch"),
    ("model t\nvar x : bool\nconstraint sum-eq [1,2] [x] 1\n", "arity mismatch"),
    ("model t\nvar x : bool\nconstraint table [x] { (0,1) }\n", "arity mismatch"),
    ("model t\nvar x : bool\nconstraint frobnicate [x]\n", "unknown constraint kind"),
    ("var x : bool\n", "first declaration must be"),
    ("model t\nvar x : bool extra\n", "trailing text"),
    ("model t\nvar x : int(1..3)\nminimise x\nmaximise x\n", "at most one objective"),
    ("model t\nvar b : bool\nminimise b\n", "not an int variable"),
    ("", "empty input"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ModelError) as err:
        parse_model(text)
    assert fragment in str(err.value)


def test_error_reports_line_and_column():
    with pytest.raises(ModelError) as err:
        parse_model("model t\nvar x : int(1..3)\nconstraint alldifferent [x,z]\n")
    assert err.value.line == 3
    assert err.value.col == 28


def test_all_kinds_round_trip():
    text = """model kinds
param k = 3
var x : int(0..4)
var y : int{-2,0,5}
var b[2][2] : bool
var a[3] : int(1..3)
constraint neq-offset x y -1
constraint alldifferent [a[0],a[1],a[2]]
constraint sum-eq [2,-3] [x,y] 4
constraint sum-leq [1,1,1] [b[0][0],b[0][1],b[1][1]] 2
constraint element [a[0],a[1],a[2]] x y
constraint table [x,y] { (1,0) ; (4,5) }
constraint product x b[1][0] y
constraint lex-leq [b[0][0],b[0][1]] [b[1][0],b[1][1]]
maximise x
"""
    m = parse_model(text)
    assert render_model(m) == text
    assert parse_model(render_model(m)) == m
    assert [n for n, _ in m.scalars][2:6] == ["b[0][0]", "b[0][1]", "b[1][0]", "b[1][1]"]


@pytest.mark.parametrize("model", [
    gen_queens(5), gen_golomb(4, 10), gen_bibd(7, 7, 3, 3, 1), gen_golfers(2, 2, 2),
])
def test_benchmark_round_trip(model):
    assert parse_model(render_model(model)) == model
    assert validate_model(model).ok


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_random_models(seed):
    m = random_model(random.Random(seed))
    assert parse_model(render_model(m)) == m


def test_validate_clean_model(queens4):
    assert len(validate_model(queens4)) == 0


def test_validate_undeclared_names_variable():
    m = ProblemModel("t", variables=(VarDecl("x", "int", DomainLiteral(1, 3)),),
                     constraints=(ConstraintDecl("alldifferent", ("x", "z")),))
    rep = validate_model(m)
    assert len(rep) == 1
    assert "z" in rep.findings[0].message
    assert rep.findings[0].name == "z"


def test_validate_bad_table_arity_cites_index():
    m = ProblemModel("t", variables=(VarDecl("x", "int", DomainLiteral(1, 3)),
                                     VarDecl("y", "int", DomainLiteral(1, 3))),
                     constraints=(ConstraintDecl("neq-offset", ("x", "y"), const=0),
                                  ConstraintDecl("table", ("x", "y"), tuples=((1, 2), (3,)))))
    rep = validate_model(m)
    assert len(rep) == 1
    assert rep.findings[0].constraint == 1
    assert "constraint 1" in rep.findings[0].message


def test_validate_never_mutates(queens4):
    before = render_model(queens4)
    validate_model(queens4)
    assert render_model(queens4) == before


def test_validate_domain_and_objective_findings():
    m = ProblemModel("t", variables=(VarDecl("x", "int", DomainLiteral(4, 2)),
                                     VarDecl("b", "bool", DomainLiteral(0, 2)),
                                     VarDecl("x", "int", DomainLiteral(1, 1))),
                     objective=("minimise", "b"))
    codes = sorted(f.code for f in validate_model(m))
    assert codes == ["domain", "domain", "duplicate", "objective"]


def test_features_queens4(queens4):
    f = extract_features(queens4)
    assert f.constraint_kinds == {"alldifferent": 1, "neq-offset": 12}
    assert f.var_kinds == {"int-range"}
    assert (f.global_min, f.global_max) == (1, 4)
    assert f.var_count == 4 and f.constraint_count == 13
    assert f.max_arity == 4


def test_features_empty():
    f = extract_features(parse_model("model empty\n"))
    assert f.constraint_kinds == {} and f.var_kinds == frozenset()
    assert f.var_count == 0 and f.global_min is None


def test_features_bibd(bibd7):
    f = extract_features(bibd7)
    assert f.var_kinds == {"bool"}
    assert "sum-eq" in f.constraint_kinds
    assert set(f.constraint_kinds) == {"sum-eq", "product", "lex-leq"}
    assert [c.name for c in f.classes] == ["x", "p"]


def test_features_sparse_kind():
    m = parse_model("model t\nvar y : int{1,5,9}\nvar z : int(2..3)\n")
    f = extract_features(m)
    assert f.var_kinds == {"int-sparse", "int-range"}
    assert (f.global_min, f.global_max) == (1, 9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_features_pure(seed):
    a = random_model(random.Random(seed))
    b = parse_model(render_model(a))
    assert extract_features(a) == extract_features(b)
    f = extract_features(a)
    assert set(f.constraint_kinds) == {c.kind for c in a.constraints}
    assert all(n >= 0 for n in f.constraint_kinds.values())
