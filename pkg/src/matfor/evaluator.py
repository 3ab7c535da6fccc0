"""Iterative semantics of expressions over a semiring instance.

A ``for v, X . e`` loop starts the accumulator at the zero matrix (or at the
value of its explicit initialiser), then performs one sequential iteration
per canonical vector b_1 .. b_n in ascending index order, n being the
dimension assigned to the iterator's size symbol.  The quantifier sugar is
evaluated directly by folding: ``sum`` with +, ``prod`` with matrix product,
``hprod`` with the entrywise product.

Evaluation is pure, so results of a subexpression are memoised per call,
keyed by node identity and the values currently bound to the node's free
variables.  Builders share subtrees by reference, which turns deeply nested
library expressions into DAGs and keeps evaluation polynomial.

``iteration_order`` replaces the ascending visit order of every loop with a
caller-supplied permutation; over exact semirings a pure ``sum`` expression
must produce the same result for every order.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from . import ast, matrix
from .ast import (Add, Apply, Const, Diag, For, Hadamard, MatMul, Ones,
                  OrderKind, OrderPrim, Prod, ScalarMul, Sum, Transpose, UNIT,
                  Var)
from .errors import (EvalError, FormatError, MatforError, MissingDimension,
                     ShapeMismatch)
from .functions import DEFAULT_REGISTRY, FuncRegistry
from .instance import Instance
from .matrix import KMatrix, mat_add, mat_map, mat_mul, mat_scale, mat_transpose
from .semiring import Semiring

canonical_vector = matrix.canonical_vector
mat_equal = matrix.mat_equal


class _Ctx:
    def __init__(self, inst, sr, registry, schema, order, default_sym):
        self.inst = inst
        self.sr = sr
        self.registry = registry
        self.types = dict(schema.vars) if schema is not None else {}
        self.order = order
        self.default_sym = default_sym
        self.cache = {}
        self.fv = {}
        self.canon = {}

    def free(self, node):
        got = self.fv.get(id(node))
        if got is None:
            got = ast.free_vars(node)
            self.fv[id(node)] = got
        return got

    def basis(self, i, n):
        key = (i, n)
        got = self.canon.get(key)
        if got is None:
            got = canonical_vector(i, n, self.sr)
            self.canon[key] = got
        return got

    def dim(self, sym, what):
        if sym == UNIT:
            return 1
        try:
            return self.inst.dims[sym]
        except KeyError:
            raise MissingDimension(
                f"no dimension assigned to size symbol '{sym}' ({what})"
            ) from None

    def iter_sym(self, node):
        if node.var_sym is not None:
            return node.var_sym
        t = self.types.get(node.var)
        if t is not None:
            return t.rows
        if self.default_sym is not None:
            return self.default_sym
        raise MissingDimension(
            f"cannot resolve the size symbol of loop iterator '{node.var}'; "
            f"declare it in the schema")

    def acc_shape(self, node):
        t = node.acc_type if node.acc_type is not None else self.types.get(node.acc)
        if t is None:
            raise MissingDimension(
                f"cannot resolve the type of loop accumulator '{node.acc}'; "
                f"declare it in the schema or give the loop an initialiser")
        return (self.dim(t.rows, f"accumulator '{node.acc}'"),
                self.dim(t.cols, f"accumulator '{node.acc}'"))

    def indices(self, n):
        if self.order is None:
            return range(1, n + 1)
        seq = list(self.order(n))
        if sorted(seq) != list(range(1, n + 1)):
            raise EvalError(
                f"iteration_order({n}) is not a permutation of 1..{n}")
        return seq


def evaluate(e: ast.Expr,
             inst: Instance,
             sr: Semiring,
             registry: Optional[FuncRegistry] = None,
             schema: Optional[ast.Schema] = None,
             iteration_order: Optional[Callable[[int], Sequence[int]]] = None,
             default_sym: Optional[str] = None) -> KMatrix:
    """Evaluate a (well-typed) expression on an instance.

    `schema` supplies types for loop binders that carry no inline annotation;
    `default_sym` optionally names a fallback size symbol for undeclared
    iterators (the CLI uses this when an instance declares a single symbol).
    """
    ctx = _Ctx(inst, sr, registry or DEFAULT_REGISTRY, schema,
               iteration_order, default_sym)
    return _eval(e, dict(inst.mats), ctx)


def _eval(e, env, ctx):
    fv = ctx.free(e)
    key = (id(e), tuple((name, env[name]) for name in sorted(fv)
                        if name in env))
    got = ctx.cache.get(key)
    if got is not None:
        return got
    out = _eval_raw(e, env, ctx)
    ctx.cache[key] = out
    return out


def _eval_raw(e, env, ctx):
    sr = ctx.sr

    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError(
                f"no value bound to variable '{e.name}'") from None

    if isinstance(e, MatMul):
        return mat_mul(_eval(e.left, env, ctx), _eval(e.right, env, ctx), sr)

    if isinstance(e, Add):
        return mat_add(_eval(e.left, env, ctx), _eval(e.right, env, ctx), sr)

    if isinstance(e, ScalarMul):
        s = _eval(e.scalar, env, ctx)
        if s.shape != (1, 1):
            raise ShapeMismatch(
                f"scalar product needs a 1 x 1 left operand, got {s.shape}")
        return mat_scale(s.entries[0], _eval(e.arg, env, ctx), sr)

    if isinstance(e, Transpose):
        return mat_transpose(_eval(e.arg, env, ctx))

    if isinstance(e, Const):
        try:
            return matrix.scalar(sr.from_literal(e.value))
        except FormatError as exc:
            raise EvalError(
                f"literal not in the {sr.name} carrier: {exc}") from None

    if isinstance(e, Apply):
        spec = ctx.registry.resolve(e.func, sr)
        if spec.arity != len(e.args):
            raise EvalError(
                f"function '{e.func}' expects {spec.arity} arguments, "
                f"got {len(e.args)}")
        vals = [_eval(a, env, ctx) for a in e.args]
        return mat_map(lambda *xs: spec.impl(sr, *xs), vals)

    if isinstance(e, For):
        n = ctx.dim(ctx.iter_sym(e), f"iterator '{e.var}'")
        if e.init is not None:
            acc = _eval(e.init, env, ctx)
        else:
            acc = matrix.zeros(*ctx.acc_shape(e), sr)
        inner = dict(env)
        for step, i in enumerate(ctx.indices(n), start=1):
            inner[e.var] = ctx.basis(i, n)
            inner[e.acc] = acc
            try:
                acc = _eval(e.body, inner, ctx)
            except EvalError as exc:
                exc.add_context(
                    f"loop over '{e.var}', iteration {step} of {n}")
                raise
        return acc

    if isinstance(e, (Sum, Prod, Hadamard)):
        n = ctx.dim(ctx.iter_sym(e), f"iterator '{e.var}'")
        inner = dict(env)
        acc = None
        for step, i in enumerate(ctx.indices(n), start=1):
            inner[e.var] = ctx.basis(i, n)
            try:
                val = _eval(e.body, inner, ctx)
            except EvalError as exc:
                exc.add_context(
                    f"loop over '{e.var}', iteration {step} of {n}")
                raise
            if acc is None:
                acc = val
            elif isinstance(e, Sum):
                acc = mat_add(acc, val, sr)
            elif isinstance(e, Prod):
                acc = mat_mul(acc, val, sr)
            else:
                acc = mat_map(sr.times, [acc, val])
        return acc

    if isinstance(e, Ones):
        val = _eval(e.arg, env, ctx)
        return KMatrix(val.rows, 1, (sr.one,) * val.rows)

    if isinstance(e, Diag):
        val = _eval(e.arg, env, ctx)
        if val.cols != 1:
            raise ShapeMismatch(
                f"diag needs a column vector, got {val.shape}")
        n = val.rows
        ent = [sr.zero] * (n * n)
        for i in range(n):
            ent[i * n + i] = val.entries[i]
        return KMatrix(n, n, tuple(ent))

    if isinstance(e, OrderPrim):
        n = ctx.dim(e.sym, f"order primitive {e.kind.value}")
        if e.kind is OrderKind.EMIN:
            return ctx.basis(1, n)
        if e.kind is OrderKind.EMAX:
            return ctx.basis(n, n)
        ent = [sr.zero] * (n * n)
        if e.kind is OrderKind.SLESS:
            for i in range(n):
                for j in range(i + 1, n):
                    ent[i * n + j] = sr.one
        else:  # NSHIFT: maps b_j to b_{j+1}, kills b_n
            for j in range(n - 1):
                ent[(j + 1) * n + j] = sr.one
        return KMatrix(n, n, tuple(ent))

    raise MatforError(f"cannot evaluate node {type(e).__name__}")
