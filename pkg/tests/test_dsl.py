import math
import operator

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tnormlab import dsl
from tnormlab.dsl import BinOp, Call, Const, EvalError, Neg, ParseError, Var
from tnormlab.rng import SplitMix64


# --------------------------------------------------------------------------
# Reference evaluator: an independent recursive-descent mirror used as the
# oracle for agreement tests.  Errors are classified the same three ways.
# --------------------------------------------------------------------------

class RefError(Exception):
    def __init__(self, kind):
        self.kind = kind


_REF_BINOPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
}


def ref_eval(node, x, y):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else y
    if isinstance(node, Neg):
        return -ref_eval(node.operand, x, y)
    if isinstance(node, Call):
        fn = min if node.func == "min" else max
        value = fn(ref_eval(node.left, x, y), ref_eval(node.right, x, y))
    elif node.op in _REF_BINOPS:
        value = _REF_BINOPS[node.op](ref_eval(node.left, x, y),
                                     ref_eval(node.right, x, y))
    elif node.op == "/":
        a = ref_eval(node.left, x, y)
        b = ref_eval(node.right, x, y)
        if b == 0.0:
            raise RefError("division_by_zero")
        value = a / b
    else:  # "^"
        a = ref_eval(node.left, x, y)
        b = ref_eval(node.right, x, y)
        if a == 0.0 and b < 0.0:
            raise RefError("zero_to_negative_power")
        try:
            value = math.pow(a, b)
        except OverflowError:
            # magnitude overflow; negative bases reach here only with an
            # integer exponent (others raise ValueError)
            negative = a < 0.0 and float(b) == int(b) and int(b) % 2 == 1
            value = -math.inf if negative else math.inf
        except ValueError:
            raise RefError("nan")
    if isinstance(value, float) and math.isnan(value):
        raise RefError("nan")
    return value


# --------------------------------------------------------------------------
# Random grammar-producible trees
# --------------------------------------------------------------------------

def random_tree(rng: SplitMix64, depth: int):
    r = rng.next_unit()
    if depth <= 0 or r < 0.25:
        pick = rng.next_unit()
        if pick < 0.4:
            return Var("x")
        if pick < 0.8:
            return Var("y")
        return Const(round(rng.next_unit() * 4.0, 3))
    if r < 0.35:
        return Neg(random_tree(rng, depth - 1))
    if r < 0.5:
        func = "min" if rng.next_unit() < 0.5 else "max"
        return Call(func, random_tree(rng, depth - 1),
                    random_tree(rng, depth - 1))
    op = "+-*/^"[int(rng.next_unit() * 5) % 5]
    return BinOp(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1))


expressions = st.recursive(
    st.one_of(
        st.builds(Var, st.sampled_from(["x", "y"])),
        st.builds(Const, st.floats(min_value=0.0, max_value=1e6,
                                   allow_nan=False, allow_infinity=False)),
    ),
    lambda inner: st.one_of(
        st.builds(Neg, inner),
        st.builds(BinOp, st.sampled_from(list("+-*/^")), inner, inner),
        st.builds(Call, st.sampled_from(["min", "max"]), inner, inner),
    ),
    max_leaves=2 ** 6,
)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def test_parse_section_example():
    tree = dsl.parse("max(x + y - 1, 0)")
    assert isinstance(tree, Call) and tree.func == "max"
    assert dsl.eval_expr(tree, 0.5, 0.7) == pytest.approx(0.2, abs=1e-15)


def test_parse_power_product():
    assert dsl.eval_expr(dsl.parse("x^2*y"), 0.5, 1.0) == 0.25


def test_parse_reciprocal_form():
    tree = dsl.parse("(x^(-1)+y^(-1)-1)^(-1)")
    assert dsl.eval_expr(tree, 0.5, 0.5) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_parse_error_position_at_end():
    with pytest.raises(ParseError) as err:
        dsl.parse("min(x,")
    assert err.value.position == 6
    assert "expression" in err.value.expected
    assert err.value.found == "end of input"


@pytest.mark.parametrize("source", ["", "x +", "min(x)", "1..2", "x y", "foo",
                                    "(x", "x)", "x ** y", "2 2"])
def test_parse_rejections(source):
    with pytest.raises(ParseError) as err:
        dsl.parse(source)
    assert 0 <= err.value.position <= len(source) + 1


def test_implicit_multiplication_rejected():
    with pytest.raises(ParseError):
        dsl.parse("xy")
    with pytest.raises(ParseError):
        dsl.parse("2x")


def test_number_literals():
    assert dsl.eval_expr(dsl.parse("1e-3"), 0, 0) == 1e-3
    assert dsl.eval_expr(dsl.parse("2.5E+2"), 0, 0) == 250.0
    assert dsl.eval_expr(dsl.parse("0.125"), 0, 0) == 0.125


# Precedence goldens
def test_precedence_addition_vs_product():
    assert dsl.parse("x+y*2") == BinOp("+", Var("x"),
                                       BinOp("*", Var("y"), Const(2.0)))


def test_precedence_power_right_associative():
    assert dsl.parse("x^y^2") == BinOp("^", Var("x"),
                                       BinOp("^", Var("y"), Const(2.0)))


def test_precedence_unary_minus_below_power():
    assert dsl.parse("-x^2") == Neg(BinOp("^", Var("x"), Const(2.0)))


def test_unary_minus_binds_above_product():
    assert dsl.parse("-x*y") == BinOp("*", Neg(Var("x")), Var("y"))


def test_subtraction_left_associative():
    assert dsl.parse("x-y-1") == BinOp("-", BinOp("-", Var("x"), Var("y")),
                                       Const(1.0))


# --------------------------------------------------------------------------
# Serialization roundtrip
# --------------------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(expressions)
def test_serialize_parse_roundtrip(tree):
    assert dsl.parse(dsl.serialize(tree)) == tree


def test_roundtrip_seeded_thousand():
    rng = SplitMix64(0xD51)
    for _ in range(1000):
        tree = random_tree(rng, 6)
        assert dsl.parse(dsl.serialize(tree)) == tree


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def test_eval_product_example():
    assert dsl.eval_expr(dsl.parse("x*y"), 0.25, 0.4) == 0.1


def test_eval_division_by_zero():
    with pytest.raises(EvalError) as err:
        dsl.eval_expr(dsl.parse("x/y"), 0.1, 0.0)
    assert err.value.kind == "division_by_zero"
    assert "(x / y)" in str(err.value)


def test_eval_zero_to_negative_power():
    with pytest.raises(EvalError) as err:
        dsl.eval_expr(dsl.parse("x^(-1)"), 0.0, 0.5)
    assert err.value.kind == "zero_to_negative_power"


def test_eval_nan_from_negative_base():
    with pytest.raises(EvalError) as err:
        dsl.eval_expr(dsl.parse("(x-1)^0.5"), 0.5, 0.5)
    assert err.value.kind == "nan"


def test_eval_section_example_hand_value():
    assert dsl.eval_expr(dsl.parse("max(x+x*y-1,0)"), 0.8, 0.8) == \
        pytest.approx(0.44, abs=1e-15)


def test_eval_array_matches_scalar():
    tree = dsl.parse("max(x + x*y - 1, 0)")
    xs = np.linspace(0.0, 1.0, 33)
    ys = np.linspace(0.0, 1.0, 33)[::-1].copy()
    arr = dsl.eval_expr(tree, xs, ys)
    for i in range(xs.size):
        assert arr[i] == dsl.eval_expr(tree, float(xs[i]), float(ys[i]))


def test_eval_array_error_names_point():
    tree = dsl.parse("x/y")
    xs = np.asarray([0.5, 0.5])
    ys = np.asarray([0.5, 0.0])
    with pytest.raises(EvalError) as err:
        dsl.eval_expr(tree, xs, ys)
    assert err.value.point == (0.5, 0.0)


def test_agreement_with_reference_evaluator():
    rng = SplitMix64(0xACE)
    agreements = 0
    for _ in range(10_000):
        tree = random_tree(rng, 5)
        x = rng.next_unit()
        y = rng.next_unit()
        try:
            expected = ref_eval(tree, x, y)
            failure = None
        except RefError as err:
            expected = None
            failure = err.kind
        if failure is None:
            got = dsl.eval_expr(tree, x, y)
            if math.isinf(expected):
                assert got == expected
            else:
                assert got == pytest.approx(expected, rel=1e-12, abs=1e-300)
        else:
            with pytest.raises(EvalError) as err:
                dsl.eval_expr(tree, x, y)
            assert err.value.kind == failure
        agreements += 1
    assert agreements == 10_000
