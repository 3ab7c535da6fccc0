"""Encodings and translations between the additive fragment and annotated
relational algebra.

Matrix side -> relational side: a variable V of type (alpha, beta) becomes a
relation R_V over attributes ``row_alpha`` / ``col_beta`` (dropped for unit
dimensions) whose support holds the nonzero entries, and every non-unit size
symbol gets a unary domain relation D_sym listing 1..dims[sym] with
annotation one.  Domain relations matter because absence encodes zero: an
expression may be nonzero at indices its inputs never mention (an all-ones
vector, say), and only the domain relations can supply those indices.

`phi_translate` maps any additive-fragment expression to a relational
expression satisfying, entry for entry,

    evaluate(e)[i, j] == eval_ra(phi(e))(row_alpha: i, col_beta: j)

Bound iterators become fresh attributes: an occurrence of the iterator is
the diagonal relation over (row_sym, attr) built from two renamed copies of
the domain relation, an additive quantifier joins the body with the domain
relation on the iterator attribute and projects the attribute away, and
union-like nodes pad either side with missing iterator attributes.

Relational side -> matrix side: for a binary input schema, `mat_encode`
collapses the active domain to {d_1 < ... < d_n}, assigns every relation a
square/vector/scalar variable over one symbol, and `psi_translate` produces
an additive-fragment expression whose (i, j) entry equals the query's value
at (d_i, d_j).  Intermediate signatures of any arity are handled by keeping
one canonical-vector variable per attribute and summing out projected ones.
"""

from __future__ import annotations

from . import relalg
from .ast import (Add, Apply, Expr, For, MatMul, MatrixType, ScalarMul,
                  Schema, Sum, Transpose, UNIT, Var, substitute)
from .errors import (EmptyActiveDomain, NotInSumFragment, OutputArityTooLarge,
                     SchemaNotBinary, UnsupportedFunction)
from .fragments import LoopPattern, recognize_loop_pattern
from .instance import Instance
from .matrix import KMatrix
from .relalg import (Join, KRelation, Project, RAExpr, Rel, Rename, Select,
                     Union, make_tuple)
from .semiring import Semiring
from .sugar import desugar
from .typecheck import type_in_env

MAT_SYM = "alpha"


def rel_name(var: str) -> str:
    return f"R_{var}"


def dom_name(sym: str) -> str:
    return f"D_{sym}"


def row_attr(sym: str) -> str:
    return f"row_{sym}"


def col_attr(sym: str) -> str:
    return f"col_{sym}"


def type_attrs(t: MatrixType) -> frozenset[str]:
    attrs = set()
    if t.rows != UNIT:
        attrs.add(row_attr(t.rows))
    if t.cols != UNIT:
        attrs.add(col_attr(t.cols))
    return frozenset(attrs)


def rel_schema_of(schema: Schema, dims=None) -> dict[str, frozenset[str]]:
    """Relational schema of the encoding of a matrix schema."""
    out = {}
    syms = set()
    for name, t in schema.vars.items():
        out[rel_name(name)] = type_attrs(t)
        syms.update(s for s in (t.rows, t.cols) if s != UNIT)
    if dims:
        syms.update(s for s in dims if s != UNIT)
    for sym in syms:
        out[dom_name(sym)] = frozenset({sym})
    return out


def rel_encode(schema: Schema, inst: Instance, sr: Semiring):
    """Encode an instance; returns (relational schema, relation instance)."""
    relschema = rel_schema_of(schema, inst.dims)
    rels: dict[str, KRelation] = {}
    for name, t in schema.vars.items():
        mat = inst.mats.get(name)
        if mat is None:
            continue
        items = []
        for i in range(mat.rows):
            for j in range(mat.cols):
                v = mat.get(i, j)
                if v == sr.zero:
                    continue
                point = {}
                if t.rows != UNIT:
                    point[row_attr(t.rows)] = i + 1
                if t.cols != UNIT:
                    point[col_attr(t.cols)] = j + 1
                items.append((make_tuple(point), v))
        rels[rel_name(name)] = KRelation.build(relschema[rel_name(name)],
                                               items, sr)
    for sym, n in inst.dims.items():
        if sym == UNIT:
            continue
        items = [(make_tuple({sym: i}), sr.one) for i in range(1, n + 1)]
        rels[dom_name(sym)] = KRelation.build(frozenset({sym}), items, sr)
    return relschema, rels


# ---------------------------------------------------------------------------
# phi: additive fragment -> relational algebra


class _Phi:
    def __init__(self, schema):
        self.schema = schema
        self.counter = 0

    def fresh(self, base):
        self.counter += 1
        return f"{base}_{self.counter}"

    def dom_join(self, attr, sym):
        return Rename(((attr, sym),), Rel(dom_name(sym)))

    def rename_keeping(self, q, sig, changes):
        """Rename `changes` (new -> old) and keep every other attribute."""
        mapping = dict(changes)
        touched = set(mapping.values())
        for a in sig:
            if a not in touched:
                mapping[a] = a
        new_sig = frozenset(mapping)
        if all(new == old for new, old in mapping.items()):
            return q, sig
        return Rename(tuple(mapping.items()), q), new_sig

    def pad(self, q, sig, missing, itersyms):
        for attr in sorted(missing):
            q = Join(q, self.dom_join(attr, itersyms[attr]))
            sig = sig | {attr}
        return q, sig

    def translate(self, e, types, env, itersyms):
        """Returns (relational expr, signature).

        `env` maps bound iterator names to attributes, `itersyms` attributes
        back to their size symbols.
        """
        t = type_in_env(e, types)

        if isinstance(e, Var):
            if e.name in env:
                attr = env[e.name]
                sym = itersyms[attr]
                ra = row_attr(sym)
                q = Select(frozenset({ra, attr}),
                           Join(self.dom_join(ra, sym),
                                self.dom_join(attr, sym)))
                return q, frozenset({ra, attr})
            return Rel(rel_name(e.name)), type_attrs(t)

        if isinstance(e, Transpose):
            at = type_in_env(e.arg, types)
            q, sig = self.translate(e.arg, types, env, itersyms)
            changes = {}
            if at.rows != UNIT:
                changes[col_attr(at.rows)] = row_attr(at.rows)
            if at.cols != UNIT:
                changes[row_attr(at.cols)] = col_attr(at.cols)
            return self.rename_keeping(q, sig, changes)

        if isinstance(e, Add):
            q1, s1 = self.translate(e.left, types, env, itersyms)
            q2, s2 = self.translate(e.right, types, env, itersyms)
            q1, s1 = self.pad(q1, s1, s2 - s1, itersyms)
            q2, s2 = self.pad(q2, s2, s1 - s2, itersyms)
            return Union(q1, q2), s1

        if isinstance(e, ScalarMul):
            q1, s1 = self.translate(e.scalar, types, env, itersyms)
            q2, s2 = self.translate(e.arg, types, env, itersyms)
            return Join(q1, q2), s1 | s2

        if isinstance(e, MatMul):
            lt = type_in_env(e.left, types)
            q1, s1 = self.translate(e.left, types, env, itersyms)
            q2, s2 = self.translate(e.right, types, env, itersyms)
            if lt.cols == UNIT:
                return Join(q1, q2), s1 | s2
            mid = self.fresh("mid")
            q1, s1 = self.rename_keeping(q1, s1, {mid: col_attr(lt.cols)})
            q2, s2 = self.rename_keeping(q2, s2, {mid: row_attr(lt.cols)})
            out_sig = (s1 | s2) - {mid}
            return Project(out_sig, Join(q1, q2)), out_sig

        if isinstance(e, Apply):
            kind, arity = _pointwise_kind(e.func)
            if kind is None:
                raise UnsupportedFunction(
                    f"function '{e.func}' has no relational counterpart")
            parts = [self.translate(a, types, env, itersyms) for a in e.args]
            if kind == "hprod":
                q, sig = parts[0]
                for q2, s2 in parts[1:]:
                    q, sig = Join(q, q2), sig | s2
                return q, sig
            q, sig = parts[0]
            for q2, s2 in parts[1:]:
                q, sig = self.pad(q, sig, s2 - sig, itersyms)
                q2, s2 = self.pad(q2, s2, sig - s2, itersyms)
                q = Union(q, q2)
            return q, sig

        if isinstance(e, For):
            if recognize_loop_pattern(e) is not LoopPattern.SIGMA:
                raise NotInSumFragment(
                    "only additive loops can be translated")
            body = e.body.right if e.body.left == Var(e.acc) else e.body.left
            sym = e.var_sym if e.var_sym is not None else types[e.var].rows
            attr = self.fresh("it")
            inner_types = dict(types)
            inner_types[e.var] = MatrixType(sym, UNIT)
            inner_env = dict(env)
            inner_env[e.var] = attr
            inner_syms = dict(itersyms)
            inner_syms[attr] = sym
            q, sig = self.translate(body, inner_types, inner_env, inner_syms)
            q, sig = self.pad(q, sig, {attr} - sig, inner_syms)
            out_sig = sig - {attr}
            return Project(out_sig, q), out_sig

        raise NotInSumFragment(
            f"{type(e).__name__} nodes have no relational counterpart")


def _pointwise_kind(name):
    for prefix in ("hprod", "hsum"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return prefix, int(name[len(prefix):])
    return None, None


def phi_translate(e: Expr, schema: Schema) -> RAExpr:
    """Translate an additive-fragment expression over `schema` to relational
    algebra over its encoding."""
    core = desugar(e, schema)
    q, _ = _Phi(schema).translate(core, dict(schema.vars), {}, {})
    return q


# ---------------------------------------------------------------------------
# psi: relational algebra -> additive fragment


def active_domain(rels: dict[str, KRelation]) -> list[int]:
    dom = set()
    for rel in rels.values():
        dom |= rel.adom()
    return sorted(dom)


def check_binary(relschema: dict[str, frozenset[str]]):
    for name, attrs in relschema.items():
        if len(attrs) > 2:
            raise SchemaNotBinary(
                f"relation '{name}' has arity {len(attrs)} > 2")


def mat_var(name: str) -> str:
    return f"V_{name}"


def mat_schema(relschema: dict[str, frozenset[str]]) -> Schema:
    check_binary(relschema)
    schema = Schema()
    for name, attrs in relschema.items():
        if len(attrs) == 2:
            t = MatrixType(MAT_SYM, MAT_SYM)
        elif len(attrs) == 1:
            t = MatrixType(MAT_SYM, UNIT)
        else:
            t = MatrixType(UNIT, UNIT)
        schema.declare(mat_var(name), t)
    return schema


def mat_encode(relschema: dict[str, frozenset[str]],
               rels: dict[str, KRelation],
               sr: Semiring):
    """Encode a binary relation instance as matrices over the active domain
    (taken in ascending order); returns (schema, instance)."""
    check_binary(relschema)
    dom = active_domain(rels)
    if not dom:
        raise EmptyActiveDomain(
            "cannot encode an instance with an empty active domain")
    n = len(dom)
    schema = mat_schema(relschema)
    mats = {}
    for name, attrs in relschema.items():
        rel = rels.get(name)
        if rel is None:
            rel = KRelation(frozenset(attrs), {})
        order = sorted(attrs)
        if len(order) == 2:
            ent = [rel.value(make_tuple({order[0]: dom[i],
                                         order[1]: dom[j]}), sr)
                   for i in range(n) for j in range(n)]
            mats[mat_var(name)] = KMatrix(n, n, tuple(ent))
        elif len(order) == 1:
            ent = [rel.value(make_tuple({order[0]: dom[i]}), sr)
                   for i in range(n)]
            mats[mat_var(name)] = KMatrix(n, 1, tuple(ent))
        else:
            mats[mat_var(name)] = KMatrix(1, 1, (rel.value((), sr),))
    return schema, Instance({MAT_SYM: n}, mats)


class _Psi:
    def __init__(self, relschema):
        self.relschema = relschema
        self.counter = 0

    def fresh(self):
        self.counter += 1
        return f"_t{self.counter}"

    def translate(self, q):
        """Returns (scalar expression, attr -> free iterator-variable name)."""
        if isinstance(q, Rel):
            attrs = sorted(self.relschema[q.name])
            v = Var(mat_var(q.name))
            if len(attrs) == 2:
                a, b = self.fresh(), self.fresh()
                return (MatMul(MatMul(Transpose(Var(a)), v), Var(b)),
                        {attrs[0]: a, attrs[1]: b})
            if len(attrs) == 1:
                a = self.fresh()
                return MatMul(Transpose(Var(a)), v), {attrs[0]: a}
            return v, {}

        if isinstance(q, Union):
            le, lv = self.translate(q.left)
            re_, rv = self.translate(q.right)
            re_ = self.unify(re_, rv, lv)
            return Add(le, re_), lv

        if isinstance(q, Join):
            le, lv = self.translate(q.left)
            re_, rv = self.translate(q.right)
            shared = {a: lv[a] for a in lv.keys() & rv.keys()}
            re_ = self.unify(re_, rv, shared)
            merged = dict(lv)
            for a, name in rv.items():
                if a not in merged:
                    merged[a] = name
            return MatMul(le, re_), merged

        if isinstance(q, Project):
            be, bv = self.translate(q.arg)
            out = dict(bv)
            for attr in sorted(bv.keys() - q.attrs):
                be = Sum(out.pop(attr), be, var_sym=MAT_SYM)
            return be, out

        if isinstance(q, Select):
            be, bv = self.translate(q.arg)
            order = sorted(q.attrs)
            for a, b in zip(order, order[1:]):
                be = MatMul(be, MatMul(Transpose(Var(bv[a])), Var(bv[b])))
            return be, bv

        if isinstance(q, Rename):
            be, bv = self.translate(q.arg)
            return be, {new: bv[old] for new, old in q.mapping}

        raise TypeError(f"not a relational expression: {q!r}")

    def unify(self, e, evars, target):
        mapping = {}
        for attr, name in target.items():
            if attr in evars and evars[attr] != name:
                mapping[evars[attr]] = Var(name)
        return substitute(e, mapping) if mapping else e


def psi_translate(q: RAExpr, relschema: dict[str, frozenset[str]]) -> Expr:
    """Translate a query over a binary schema to an additive-fragment
    expression over `mat_schema(relschema)`.

    Loop binders carry inline type annotations, so the returned expression
    evaluates with just that schema.
    """
    check_binary(relschema)
    sig = relalg.signature_of(q, relschema)
    if len(sig) > 2:
        raise OutputArityTooLarge(
            f"query signature {sorted(sig)} has arity {len(sig)} > 2")
    tr = _Psi(relschema)
    scalar_e, attr_vars = tr.translate(q)
    order = sorted(sig)
    if len(order) == 2:
        va, vb = attr_vars[order[0]], attr_vars[order[1]]
        body = ScalarMul(scalar_e, MatMul(Var(va), Transpose(Var(vb))))
        return Sum(va, Sum(vb, body, var_sym=MAT_SYM), var_sym=MAT_SYM)
    if len(order) == 1:
        va = attr_vars[order[0]]
        return Sum(va, ScalarMul(scalar_e, Var(va)), var_sym=MAT_SYM)
    return scalar_e
