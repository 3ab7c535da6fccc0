"""Type checker for expressions against a schema.

Typing is deterministic: every well-typed expression has exactly one type.
Loop iterators must have type (gamma, 1) for a non-unit symbol gamma; loop
bodies must preserve the accumulator type.  Pointwise applications require
all arguments to share one type, which is also the result type.
"""

from __future__ import annotations

from . import ast
from .ast import (Add, Apply, Const, Diag, For, Hadamard, MatMul, MatrixType,
                  Ones, OrderKind, OrderPrim, Prod, ScalarMul, Sum, Transpose,
                  UNIT, Var)
from .errors import (ArityMismatch, IteratorNotVector, TypeMismatch,
                     UnboundVariable)
from .functions import builtin_arity


def typecheck(e: ast.Expr, schema: ast.Schema) -> MatrixType:
    """Return the unique type of `e`, or raise a TypeCheckError subclass."""
    return _check(e, dict(schema.vars))


def type_in_env(e: ast.Expr, env: dict[str, MatrixType]) -> MatrixType:
    """Type of `e` under an explicit variable-type environment."""
    return _check(e, env)


def _iterator_type(e, name, env):
    if getattr(e, "var_sym", None) is not None:
        t = MatrixType(e.var_sym, UNIT)
    elif name in env:
        t = env[name]
    else:
        raise UnboundVariable(name)
    if t.cols != UNIT or t.rows == UNIT:
        raise IteratorNotVector(
            f"loop iterator '{name}' must have type (gamma, 1) with gamma != 1, "
            f"got {t}")
    return t


def _check(e, env):
    if isinstance(e, Var):
        if e.name not in env:
            raise UnboundVariable(e.name)
        return env[e.name]

    if isinstance(e, Const):
        return ast.SCALAR

    if isinstance(e, Transpose):
        return _check(e.arg, env).transposed()

    if isinstance(e, MatMul):
        lt = _check(e.left, env)
        rt = _check(e.right, env)
        if lt.cols != rt.rows:
            raise TypeMismatch(
                f"matrix product needs matching inner symbols: {lt} vs {rt}",
                lt, rt)
        return MatrixType(lt.rows, rt.cols)

    if isinstance(e, Add):
        lt = _check(e.left, env)
        rt = _check(e.right, env)
        if lt != rt:
            raise TypeMismatch(f"addition needs equal types: {lt} vs {rt}",
                               lt, rt)
        return lt

    if isinstance(e, ScalarMul):
        st = _check(e.scalar, env)
        if not st.is_scalar:
            raise TypeMismatch(
                f"scalar product needs a (1, 1) left operand, got {st}", st)
        return _check(e.arg, env)

    if isinstance(e, Apply):
        if not e.args:
            raise ArityMismatch(f"function '{e.func}' applied to no arguments")
        arity = builtin_arity(e.func)
        if arity is not None and arity != len(e.args):
            raise ArityMismatch(
                f"function '{e.func}' expects {arity} arguments, "
                f"got {len(e.args)}")
        t0 = _check(e.args[0], env)
        for a in e.args[1:]:
            t = _check(a, env)
            if t != t0:
                raise TypeMismatch(
                    f"pointwise application needs one common argument type: "
                    f"{t0} vs {t}", t0, t)
        return t0

    if isinstance(e, For):
        _iterator_type(e, e.var, env)
        if e.acc_type is not None:
            acc_t = e.acc_type
        elif e.acc in env:
            acc_t = env[e.acc]
        else:
            raise UnboundVariable(e.acc)
        if e.init is not None:
            it = _check(e.init, env)
            if it != acc_t:
                raise TypeMismatch(
                    f"loop initialiser type {it} differs from accumulator "
                    f"type {acc_t}", it, acc_t)
        inner = dict(env)
        inner[e.var] = _iterator_type(e, e.var, env)
        inner[e.acc] = acc_t
        bt = _check(e.body, inner)
        if bt != acc_t:
            raise TypeMismatch(
                f"loop body type {bt} differs from accumulator type {acc_t}",
                bt, acc_t)
        return acc_t

    if isinstance(e, (Sum, Prod, Hadamard)):
        vt = _iterator_type(e, e.var, env)
        inner = dict(env)
        inner[e.var] = vt
        bt = _check(e.body, inner)
        if isinstance(e, Prod) and bt.rows != bt.cols:
            raise TypeMismatch(
                f"prod quantifier needs a square or scalar body, got {bt}", bt)
        return bt

    if isinstance(e, Ones):
        t = _check(e.arg, env)
        return MatrixType(t.rows, UNIT)

    if isinstance(e, Diag):
        t = _check(e.arg, env)
        if t.cols != UNIT:
            raise TypeMismatch(
                f"diag needs a column vector argument, got {t}", t)
        return MatrixType(t.rows, t.rows)

    if isinstance(e, OrderPrim):
        if e.kind in (OrderKind.SLESS, OrderKind.NSHIFT):
            return MatrixType(e.sym, e.sym)
        return MatrixType(e.sym, UNIT)

    raise TypeError(f"not an expression node: {e!r}")
