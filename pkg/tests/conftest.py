import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from matfor import stdlib
from matfor.ast import (Add, Apply, Const, Diag, For, Hadamard, MatMul,
                        MatrixType, Ones, OrderKind, OrderPrim, Prod,
                        ScalarMul, Sum, Transpose, UNIT, Var)
from matfor.evaluator import evaluate
from matfor.instance import Instance
from matfor.matrix import from_rows
from matfor.semiring import REAL


@pytest.fixture(scope="session")
def lib():
    return stdlib.all_named()


def run_named(lib, name, n, sr=REAL, order=None, **mats):
    """Evaluate a library expression with inputs given as KMatrix values."""
    item = lib[name]
    inst = Instance({stdlib.ALPHA: n}, mats)
    return evaluate(item.expr, inst, sr, schema=item.schema,
                    iteration_order=order)


def real_matrix(rows):
    return from_rows([[float(v) for v in row] for row in rows])


def rand_real(rng, n, m=None, lo=-1.0, hi=1.0):
    m = n if m is None else m
    return from_rows([[rng.uniform(lo, hi) for _ in range(m)]
                      for _ in range(n)])


def dominant_real(rng, n):
    """Diagonally dominant sample: every leading minor is nonsingular."""
    rows = [[rng.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        rows[i][i] = sum(abs(v) for v in rows[i]) + rng.uniform(1.0, 2.0)
    return from_rows(rows)


def max_abs_diff(mat, reference):
    """Largest |entry - reference| over a KMatrix vs a row-list."""
    return max(abs(mat.get(i, j) - reference[i][j])
               for i in range(mat.rows) for j in range(mat.cols))


@pytest.fixture
def rng():
    return random.Random(20240811)


class TypedGen:
    """Random well-typed expression generator for differential testing.

    `consts` is "any", "nonneg", or "none"; `loops` is "all" (general loops
    and every quantifier), "sum" (additive quantifiers only), or "none";
    `order` enables the order-matrix primitives.
    """

    def __init__(self, rng, decls, consts="any", loops="all", order=True,
                 functions=("hprod2", "hsum2"), syms=("alpha", "beta")):
        self.rng = rng
        self.decls = decls
        self.consts = consts
        self.loops = loops
        self.order = order
        self.functions = functions
        self.syms = list(syms)
        self.counter = 0

    def fresh(self):
        self.counter += 1
        return f"b{self.counter}"

    def expr(self, target, depth):
        rng = self.rng
        leaves = []
        matching = [n for n, t in self.decls.items() if t == target]
        if matching:
            leaves.append(lambda: Var(rng.choice(matching)))
        if target.is_scalar and self.consts != "none":
            low = 0 if self.consts == "nonneg" else -3
            leaves.append(lambda: Const(rng.randrange(low, 4)))
        if self.order and target.rows == target.cols and target.rows != UNIT:
            leaves.append(lambda: OrderPrim(
                rng.choice([OrderKind.SLESS, OrderKind.NSHIFT]), target.rows))
        if self.order and target.cols == UNIT and target.rows != UNIT:
            leaves.append(lambda: OrderPrim(
                rng.choice([OrderKind.EMIN, OrderKind.EMAX]), target.rows))

        if depth <= 0:
            if leaves:
                return rng.choice(leaves)()
            flipped = [n for n, t in self.decls.items()
                       if t == target.transposed()]
            if flipped:
                return Transpose(Var(rng.choice(flipped)))
            return self.expr(target, 1)

        def sub(t):
            return self.expr(t, depth - 1)

        def matmul():
            mid = rng.choice(self.syms + [UNIT])
            return MatMul(sub(MatrixType(target.rows, mid)),
                          sub(MatrixType(mid, target.cols)))

        combos = [
            lambda: Add(sub(target), sub(target)),
            lambda: Transpose(sub(target.transposed())),
            lambda: ScalarMul(sub(MatrixType(UNIT, UNIT)), sub(target)),
            matmul,
        ]
        if self.functions:
            combos.append(lambda: Apply(rng.choice(self.functions),
                                        (sub(target), sub(target))))
        if target.cols == UNIT:
            combos.append(lambda: Ones(
                sub(MatrixType(target.rows, rng.choice(self.syms)))))
        if target.rows == target.cols and target.rows != UNIT:
            combos.append(lambda: Diag(sub(MatrixType(target.rows, UNIT))))

        def binder(node):
            it = self.fresh()
            self.decls[it] = MatrixType(rng.choice(self.syms), UNIT)
            return node(it, sub(target))

        if self.loops != "none":
            combos.append(lambda: binder(Sum))
        if self.loops == "all":
            combos.append(lambda: binder(Hadamard))
            if target.rows == target.cols:
                combos.append(lambda: binder(Prod))

            def general_loop():
                it, acc = self.fresh(), self.fresh()
                self.decls[it] = MatrixType(rng.choice(self.syms), UNIT)
                self.decls[acc] = target
                init = sub(target) if rng.random() < 0.5 else None
                return For(it, acc, sub(target), init)

            combos.append(general_loop)
        return rng.choice(combos)()
