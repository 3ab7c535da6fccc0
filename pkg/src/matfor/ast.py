"""Expression AST, size symbols, matrix types, and schemas.

The language manipulates matrices whose dimensions are *size symbols* rather
than concrete numbers; an instance later assigns each symbol a positive
integer.  The distinguished symbol ``"1"`` always denotes dimension one, so a
type ``(alpha, 1)`` is a column vector and ``(1, 1)`` a scalar.

Core expression forms: variables, transpose, matrix product, addition,
scalar product, pointwise function application, and the canonical-vector
``for`` loop (with an optional explicit initialiser).  On top of the core
there are sugar forms (``sum``/``prod``/``hprod`` quantifiers, ``ones``,
``diag``) that desugar to the core, plus four built-in order matrices over
canonical vectors (strict order, first/last basis vector, index shift).

Loop binders are resolved against a schema.  Passes that synthesise fresh
binders (desugaring, translations) annotate them inline via ``var_sym`` /
``acc_type`` instead of mutating the schema; the type checker and evaluator
prefer the annotation when present.  Annotations, like source spans, are
internal metadata - but unlike spans they affect typing, so they take part
in structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .errors import DuplicateVariable

#: The unit size symbol: always assigned dimension 1.
UNIT = "1"


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class MatrixType:
    """A pair of size symbols (rows, cols)."""

    rows: str
    cols: str

    def transposed(self):
        return MatrixType(self.cols, self.rows)

    @property
    def is_scalar(self):
        return self.rows == UNIT and self.cols == UNIT

    @property
    def is_column(self):
        return self.cols == UNIT

    def __str__(self):
        return f"{self.rows} x {self.cols}"


SCALAR = MatrixType(UNIT, UNIT)


class Schema:
    """Mapping from variable names to matrix types.

    Loop variables (iterators and accumulators) may be declared here just
    like input matrices; the evaluator binds them during iteration and an
    instance never has to supply their contents.
    """

    def __init__(self, vars=None):
        self.vars: dict[str, MatrixType] = {}
        if vars:
            for name, t in vars.items():
                self.declare(name, t)

    def declare(self, name, t):
        if not name:
            raise DuplicateVariable("variable name must be nonempty")
        if name in self.vars:
            raise DuplicateVariable(f"variable '{name}' declared twice")
        self.vars[name] = t

    def merged(self, other):
        out = Schema(self.vars)
        for name, t in other.vars.items():
            if name in out.vars:
                if out.vars[name] != t:
                    raise DuplicateVariable(
                        f"variable '{name}' declared with conflicting types")
            else:
                out.vars[name] = t
        return out

    def __contains__(self, name):
        return name in self.vars

    def __getitem__(self, name):
        return self.vars[name]

    def __eq__(self, other):
        return isinstance(other, Schema) and self.vars == other.vars

    def __repr__(self):
        return f"Schema({self.vars!r})"


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Expr:
    span: Optional[SourceSpan] = field(
        default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    """Scalar literal; int for integral values, float otherwise (inf allowed)."""

    value: Union[int, float]


@dataclass(frozen=True)
class Transpose(Expr):
    arg: Expr


@dataclass(frozen=True)
class MatMul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ScalarMul(Expr):
    """Scalar product: `scalar` must have type (1,1)."""

    scalar: Expr
    arg: Expr


@dataclass(frozen=True)
class Apply(Expr):
    func: str
    args: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class For(Expr):
    """Canonical-vector loop: iterate `var` over b_1..b_n updating `acc`.

    Without `init` the accumulator starts at the zero matrix; with `init`
    it starts at the value of that expression.  `var_sym` / `acc_type` are
    optional inline binder types used when the binders are not in the schema.
    """

    var: str
    acc: str
    body: Expr
    init: Optional[Expr] = None
    var_sym: Optional[str] = None
    acc_type: Optional[MatrixType] = None


@dataclass(frozen=True)
class Sum(Expr):
    """Additive quantifier: fold the body over canonical vectors with +."""

    var: str
    body: Expr
    var_sym: Optional[str] = None


@dataclass(frozen=True)
class Prod(Expr):
    """Multiplicative quantifier: fold with matrix product, identity start."""

    var: str
    body: Expr
    var_sym: Optional[str] = None


@dataclass(frozen=True)
class Hadamard(Expr):
    """Pointwise-product quantifier: fold with entrywise product, ones start."""

    var: str
    body: Expr
    var_sym: Optional[str] = None


@dataclass(frozen=True)
class Ones(Expr):
    """All-ones column vector whose height is the row dimension of `arg`."""

    arg: Expr


@dataclass(frozen=True)
class Diag(Expr):
    """Diagonal matrix built from a column vector."""

    arg: Expr


class OrderKind(Enum):
    SLESS = "Sless"     # square matrix, (i,j) = one iff i < j
    EMIN = "Emin"       # first canonical vector b_1
    EMAX = "Emax"       # last canonical vector b_n
    NSHIFT = "Nshift"   # square matrix, (i,j) = one iff i = j + 1


@dataclass(frozen=True)
class OrderPrim(Expr):
    kind: OrderKind
    sym: str


SUGAR_NODES = (Sum, Prod, Hadamard, Ones, Diag)
LOOP_NODES = (For, Sum, Prod, Hadamard)


def children(e: Expr) -> tuple[Expr, ...]:
    """Direct subexpressions of a node, in a fixed order."""
    if isinstance(e, (Var, Const, OrderPrim)):
        return ()
    if isinstance(e, (Transpose, Ones, Diag)):
        return (e.arg,)
    if isinstance(e, MatMul):
        return (e.left, e.right)
    if isinstance(e, Add):
        return (e.left, e.right)
    if isinstance(e, ScalarMul):
        return (e.scalar, e.arg)
    if isinstance(e, Apply):
        return e.args
    if isinstance(e, For):
        return (e.body,) if e.init is None else (e.init, e.body)
    if isinstance(e, (Sum, Prod, Hadamard)):
        return (e.body,)
    raise TypeError(f"not an expression node: {e!r}")


def free_vars(e: Expr) -> frozenset[str]:
    """Free variable names of `e`; loop binders are excluded inside bodies."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, For):
        out = free_vars(e.body) - {e.var, e.acc}
        if e.init is not None:
            out |= free_vars(e.init)
        return out
    if isinstance(e, (Sum, Prod, Hadamard)):
        return free_vars(e.body) - {e.var}
    out = frozenset()
    for c in children(e):
        out |= free_vars(c)
    return out


def bound_names(e: Expr) -> frozenset[str]:
    """Every name bound by some loop inside `e` (including sugar)."""
    out = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, For):
            out.add(node.var)
            out.add(node.acc)
        elif isinstance(node, (Sum, Prod, Hadamard)):
            out.add(node.var)
        stack.extend(children(node))
    return frozenset(out)


def substitute(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Replace free occurrences of variables by expressions.

    The caller must ensure no replacement gets captured by a binder in `e`
    (all internal binder-generating passes use globally fresh names).
    """
    if not mapping:
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, For):
        inner = {k: v for k, v in mapping.items() if k not in (e.var, e.acc)}
        init = substitute(e.init, mapping) if e.init is not None else None
        return For(e.var, e.acc, substitute(e.body, inner), init,
                   e.var_sym, e.acc_type)
    if isinstance(e, (Sum, Prod, Hadamard)):
        inner = {k: v for k, v in mapping.items() if k != e.var}
        return type(e)(e.var, substitute(e.body, inner), e.var_sym)
    if isinstance(e, Transpose):
        return Transpose(substitute(e.arg, mapping))
    if isinstance(e, Ones):
        return Ones(substitute(e.arg, mapping))
    if isinstance(e, Diag):
        return Diag(substitute(e.arg, mapping))
    if isinstance(e, MatMul):
        return MatMul(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Add):
        return Add(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, ScalarMul):
        return ScalarMul(substitute(e.scalar, mapping), substitute(e.arg, mapping))
    if isinstance(e, Apply):
        return Apply(e.func, tuple(substitute(a, mapping) for a in e.args))
    return e


def walk(e: Expr):
    """Yield every node of the tree, preorder."""
    yield e
    for c in children(e):
        yield from walk(c)
