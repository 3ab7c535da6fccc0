"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every tolerance is pinned here and nowhere else.  Oracles come from
tests/oracles.py (textbook eliminations, exhaustive enumeration, permutation
expansion) and never touch the package's own evaluator.
"""

import functools
import itertools
import random
from fractions import Fraction

import numpy as np

import oracles
from conftest import dominant_real, rand_real, real_matrix, run_named
from matfor import relalg, stdlib
from matfor.ast import (Diag, MatrixType, Ones, OrderKind, OrderPrim,
                        Schema, UNIT, Var, substitute)
from matfor.bridge import (active_domain, col_attr, mat_encode, mat_schema,
                           phi_translate, psi_translate, rel_encode, row_attr)
from matfor.circuit_compile import compile_expr, degree_growth
from matfor.circuits import INPUT, ONE, PROD, SUM, ZERO, eval_circuit
from matfor.evaluator import evaluate, mat_equal
from matfor.instance import Instance
from matfor.matrix import KMatrix, from_rows
from matfor.parser import parse_expr, parse_schema
from matfor.printer import pretty
from matfor.relalg import eval_ra, make_tuple, parse_ra
from matfor.semiring import BOOL, NAT, REAL, TROPICAL
from matfor.sugar import desugar, reduce_apply_to_scalars
from matfor.typecheck import typecheck

LIB = stdlib.all_named()


def criterion(number, text):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL criterion {number:2d}: {text}", flush=True)
                raise
            print(f"PASS criterion {number:2d}: {text}", flush=True)
        return wrapper
    return deco


def norm_inf(array):
    return float(np.max(np.abs(array))) if array.size else 0.0


# ---------------------------------------------------------------------------


@criterion(1, "ones/diag loops match the direct constructions")
def test_criterion_01_ones_and_diag():
    rng = random.Random(101)
    schema = parse_schema("var V : alpha x beta\nvar u : alpha x 1")
    for n in range(1, 9):
        m = rng.randrange(1, 5)
        inst = Instance({"alpha": n, "beta": m},
                        {"V": rand_real(rng, n, m),
                         "u": rand_real(rng, n, 1)})
        for expr in (Ones(Var("V")), desugar(Ones(Var("V")), schema)):
            out = evaluate(expr, inst, REAL, schema=schema)
            assert out.shape == (n, 1)
            assert all(v == 1.0 for v in out.entries)
        want = [[inst.mats["u"].get(i, 0) if i == j else 0.0
                 for j in range(n)] for i in range(n)]
        for expr in (Diag(Var("u")), desugar(Diag(Var("u")), schema)):
            out = evaluate(expr, inst, REAL, schema=schema)
            assert out.shape == (n, n)
            assert all(abs(out.get(i, j) - want[i][j]) <= 1e-12
                       for i in range(n) for j in range(n))


def _edge_bit_arrays(n):
    """Adjacency entries for all 2^(n choose 2) graphs as 0/1 arrays."""
    edges = list(itertools.combinations(range(n), 2))
    ids = np.arange(1 << len(edges), dtype=np.int64)
    bits = {}
    for k, (i, j) in enumerate(edges):
        arr = ((ids >> k) & 1).astype(np.float64)
        bits[(i, j)] = arr
        bits[(j, i)] = arr
    return edges, ids, bits


def _vectorized_eval(circuit, inputs, width):
    vals = []
    for g in circuit.gates:
        if g.kind == INPUT:
            name, r, c = g.ref
            vals.append(inputs[(name, r, c)])
        elif g.kind == ZERO:
            vals.append(np.zeros(width))
        elif g.kind == ONE:
            vals.append(np.ones(width))
        elif g.kind == SUM:
            acc = np.zeros(width)
            for ch in g.children:
                acc = acc + vals[ch]
            vals.append(acc)
        elif g.kind == PROD:
            acc = np.ones(width)
            for ch in g.children:
                acc = acc * vals[ch]
            vals.append(acc)
        else:
            raise AssertionError("no division expected here")
    return {pos: vals[idx] for pos, idx in circuit.outputs}


@criterion(2, "4-clique is complete over all 32768 graphs on 6 vertices")
def test_criterion_02_four_clique_exhaustive():
    n = 6
    item = LIB["four_clique"]
    circ = compile_expr(item.expr, item.schema, {"alpha": n})
    edges, ids, bits = _edge_bit_arrays(n)
    width = len(ids)
    inputs = {}
    for i in range(n):
        for j in range(n):
            inputs[("V", i + 1, j + 1)] = (
                np.zeros(width) if i == j else bits[(i, j)])
    counts = _vectorized_eval(circ, inputs, width)[(1, 1)]

    # oracle: a 4-clique exists iff some 4-subset has all six edges
    exists = np.zeros(width, dtype=bool)
    for sub in itertools.combinations(range(n), 4):
        mask = np.ones(width)
        for a, b in itertools.combinations(sub, 2):
            mask = mask * bits[(a, b)]
        exists |= mask.astype(bool)
    assert np.array_equal(counts > 0, exists)

    # the vectorized sweep agrees with the reference circuit evaluator
    rng = random.Random(202)
    for gid in rng.sample(range(width), 40):
        single = {key: float(arr[gid]) for key, arr in inputs.items()}
        assert eval_circuit(circ, single)[(1, 1)] == counts[gid]

    # and with the interpreter itself on a sample of graphs
    for gid in rng.sample(range(width), 12):
        adj = [[float(inputs[("V", i + 1, j + 1)][gid]) for j in range(n)]
               for i in range(n)]
        got = run_named(LIB, "four_clique", n, V=from_rows(adj)).get(0, 0)
        assert got == counts[gid]

    k5 = [[0.0 if i == j else 1.0 for j in range(5)] for i in range(5)]
    assert run_named(LIB, "four_clique", 5,
                     V=real_matrix(k5)).get(0, 0) == 120.0


@criterion(3, "closure indicator equals Warshall on 200 random digraphs")
def test_criterion_03_transitive_closure():
    rng = random.Random(303)
    for _ in range(200):
        n = rng.randrange(1, 9)
        adj = [[rng.randrange(2) for _ in range(n)] for _ in range(n)]
        out = run_named(LIB, "transitive_closure", n, V=real_matrix(adj))
        want = oracles.warshall_closure(adj)
        assert out.tolists() == [[float(v) for v in row] for row in want]


@criterion(4, "LU factors 100 diagonally dominant matrices, n <= 8")
def test_criterion_04_lu():
    rng = random.Random(404)
    for _ in range(100):
        n = rng.randrange(1, 9)
        a = dominant_real(rng, n)
        rows = np.array(a.tolists())
        lo = np.array(run_named(LIB, "lu_lower", n, V=a).tolists())
        up = np.array(run_named(LIB, "lu_upper", n, V=a).tolists())
        assert norm_inf(lo @ up - rows) <= 1e-8
        assert norm_inf(np.triu(lo, 1)) == 0.0
        assert np.allclose(np.diag(lo), 1.0, atol=0)
        assert norm_inf(np.tril(up, -1)) <= 1e-8


@criterion(5, "pivoted elimination handles 100 arbitrary matrices, n <= 6")
def test_criterion_05_plu():
    rng = random.Random(505)
    for trial in range(100):
        n = rng.randrange(1, 7)
        kind = trial % 5
        if kind == 0:
            rows = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
        elif kind == 1:
            rows = [[rng.choice([0.0, 0.0, 1.0, -1.0]) for _ in range(n)]
                    for _ in range(n)]
        elif kind == 2:
            rows = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
            rows[0][0] = 0.0
        elif kind == 3:
            rows = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                rows[i][n // 2] = 0.0
        else:
            rows = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
            if n > 1:
                rows[-1] = list(rows[0])
        a = real_matrix(rows)
        m = np.array(run_named(LIB, "plu_transform", n, V=a).tolists())
        u = np.array(run_named(LIB, "plu_upper", n, V=a).tolists())
        assert norm_inf(m @ np.array(rows, dtype=float) - u) <= 1e-8
        assert norm_inf(np.tril(u, -1)) <= 1e-8


@criterion(6, "determinant and inverse match oracles on 100 matrices, n <= 6")
def test_criterion_06_det_inverse():
    rng = random.Random(606)
    done = 0
    while done < 100:
        n = rng.randrange(1, 7)
        rows = [[rng.uniform(-1.0, 1.0) + (2.5 * n if i == j else 0.0)
                 for j in range(n)] for i in range(n)]
        if abs(np.linalg.det(np.array(rows))) < 0.5:
            continue
        done += 1
        a = real_matrix(rows)
        det = run_named(LIB, "determinant", n, V=a).get(0, 0)
        want = oracles.det_by_permutations(rows)
        assert abs(det - want) <= 1e-6 * max(1.0, abs(want))
        inv = np.array(run_named(LIB, "inverse", n, V=a).tolists())
        assert norm_inf(np.array(rows) @ inv - np.eye(n)) <= 1e-6
    eye5 = real_matrix([[1.0 if i == j else 0.0 for j in range(5)]
                        for i in range(5)])
    assert abs(run_named(LIB, "determinant", 5, V=eye5).get(0, 0) - 1.0) \
        <= 1e-12


PHI_SCHEMA = parse_schema("""
var V : alpha x beta
var W : alpha x beta
var M : beta x alpha
var Q : alpha x alpha
var u : alpha x 1
var v : alpha x 1
var w : beta x 1
var s : 1 x 1
""")

PHI_CORPUS = [
    "V", "V + W", "V^T", "V * M", "Q * Q", "s .* V", "u^T * V",
    "sum v . v", "sum v . v * v^T",
    "sum v . (v^T * u) .* (V^T * v)",
    "sum v . sum w . (v^T * V * w) .* (v * w^T)",
    "sum v . u", "sum v . s",
    "hprod2(V, W)", "hsum2(V, W) + V", "ones(V)", "diag(u)",
]


def _phi_instance(rng, sr, nmax=5):
    dims = {"alpha": rng.randint(1, nmax), "beta": rng.randint(1, nmax)}
    mats = {}
    for name, t in PHI_SCHEMA.vars.items():
        r, c = dims.get(t.rows, 1), dims.get(t.cols, 1)
        vals = [rng.choice([0, 0, 1, 2, 3]) if sr is NAT
                else rng.choice([0, 1]) for _ in range(r * c)]
        mats[name] = KMatrix(r, c, tuple(vals))
    return Instance(dims, mats)


@criterion(7, "relational translation agrees entrywise on 30 instances each")
def test_criterion_07_phi_contract():
    rng = random.Random(707)
    for text in PHI_CORPUS:
        e = parse_expr(text)
        t = typecheck(e, PHI_SCHEMA)
        q = phi_translate(e, PHI_SCHEMA)
        for k in range(30):
            sr = NAT if k % 2 == 0 else BOOL
            inst = _phi_instance(rng, sr)
            val = evaluate(e, inst, sr, schema=PHI_SCHEMA)
            _, rels = rel_encode(PHI_SCHEMA, inst, sr)
            out = eval_ra(q, rels, sr)
            for i in range(val.rows):
                for j in range(val.cols):
                    point = {}
                    if t.rows != UNIT:
                        point[row_attr(t.rows)] = i + 1
                    if t.cols != UNIT:
                        point[col_attr(t.cols)] = j + 1
                    assert out.value(make_tuple(point), sr) == val.get(i, j)


PSI_SCHEMA = {"R": frozenset({"a", "b"}), "S": frozenset({"b", "c"}),
              "T": frozenset({"a"}), "Z": frozenset()}

PSI_CORPUS = [
    "rel R",
    "rel T",
    "union(rel R, rel R)",
    "project[a](rel R)",
    "project[](rel R)",
    "select[a, b](rel R)",
    "rename[c->a, d->b](rel R)",
    "project[a, c](join(rel R, rel S))",
    "join(rel T, rel R)",
    # four attributes alive in the intermediate join, clique style
    "project[a, d](join(join(rel R, rename[c->a, d->b](rel R)), "
    "rename[b->a, c->b](rel R)))",
]


def _psi_instance(rng, sr, maxdom=5):
    dom = list(range(1, rng.randint(1, maxdom) + 1))
    rels = {}
    for name, attrs in PSI_SCHEMA.items():
        order = sorted(attrs)
        items = []
        for point in itertools.product(dom, repeat=len(order)):
            v = rng.choice([0, 0, 1, 2]) if sr is NAT else rng.choice([0, 1])
            if v:
                items.append((make_tuple(dict(zip(order, point))), v))
        rels[name] = relalg.KRelation.build(frozenset(order), items, sr)
    if not active_domain(rels):
        rels["T"] = relalg.KRelation.build(
            frozenset({"a"}), [(make_tuple({"a": 1}), sr.one)], sr)
    return rels


@criterion(8, "matrix translation agrees with the relational semantics")
def test_criterion_08_psi_contract():
    rng = random.Random(808)
    schema = mat_schema(PSI_SCHEMA)
    for qtext in PSI_CORPUS:
        q = parse_ra(qtext)
        sig = sorted(relalg.signature_of(q, PSI_SCHEMA))
        e = psi_translate(q, PSI_SCHEMA)
        for k in range(12):
            sr = NAT if k % 2 == 0 else BOOL
            rels = _psi_instance(rng, sr)
            want = eval_ra(q, rels, sr)
            _, inst = mat_encode(PSI_SCHEMA, rels, sr)
            dom = active_domain(rels)
            val = evaluate(e, inst, sr, schema=schema)
            n = len(dom)
            if len(sig) == 2:
                for i in range(n):
                    for j in range(n):
                        point = make_tuple({sig[0]: dom[i], sig[1]: dom[j]})
                        assert val.get(i, j) == want.value(point, sr)
            elif len(sig) == 1:
                for i in range(n):
                    assert val.get(i, 0) == \
                        want.value(make_tuple({sig[0]: dom[i]}), sr)
            else:
                assert val.get(0, 0) == want.value((), sr)


def _circuit_corpus():
    emax = OrderPrim(OrderKind.EMAX, stdlib.ALPHA)
    emin = OrderPrim(OrderKind.EMIN, stdlib.ALPHA)
    names = ["ones_vec", "identity", "diag_embed", "index_le", "index_lt",
             "is_first", "is_last", "last_basis", "pivot_column",
             "index_diagonal", "diagonal_part", "four_clique",
             "shift_by_index", "shift_vector", "trace_vector", "power_sum",
             "repeated_squaring"]
    corpus = [(name, LIB[name].expr, LIB[name].schema, LIB[name].inputs)
              for name in names]
    pinned = substitute(LIB["matrix_power"].expr, {"v": emax})
    corpus.append(("matrix_power@last", pinned, LIB["matrix_power"].schema,
                   ("V",)))
    pinned = substitute(LIB["inverse_power"].expr, {"v": emin})
    corpus.append(("inverse_power@first", pinned,
                   LIB["inverse_power"].schema, ("V",)))
    return corpus


@criterion(9, "compiled circuits agree with the interpreter within 1e-9")
def test_criterion_09_circuit_agreement():
    rng = random.Random(909)
    corpus = _circuit_corpus()
    assert len(corpus) >= 15
    for name, expr, schema, inputs in corpus:
        for n in range(2, 7):
            dims = {"alpha": n}
            circ = compile_expr(expr, schema, dims)
            for _ in range(20):
                mats, gate_inputs = {}, {}
                for vn in inputs:
                    t = schema[vn]
                    r, c = dims.get(t.rows, 1), dims.get(t.cols, 1)
                    vals = [Fraction(rng.randint(-8, 8), rng.randint(1, 4))
                            for _ in range(r * c)]
                    mats[vn] = KMatrix(r, c,
                                       tuple(float(v) for v in vals))
                    for i in range(r):
                        for j in range(c):
                            gate_inputs[(vn, i + 1, j + 1)] = \
                                float(vals[i * c + j])
                inst = Instance(dims, mats)
                want = evaluate(expr, inst, REAL, schema=schema)
                got = eval_circuit(circ, gate_inputs)
                for i in range(want.rows):
                    for j in range(want.cols):
                        assert abs(got[(i + 1, j + 1)] - want.get(i, j)) \
                            <= 1e-9, (name, n, i, j)


@criterion(10, "degree witnesses: 2^n for squaring, <= n^2 for additive")
def test_criterion_10_degrees():
    item = LIB["repeated_squaring"]
    growth = degree_growth(item.expr, item.schema, stdlib.ALPHA, [1, 2, 3, 4])
    assert growth == [(1, 2), (2, 4), (3, 8), (4, 16)]

    additive = ["ones_vec", "identity", "diag_embed", "index_le", "index_lt",
                "is_first", "is_last", "last_basis", "pivot_column",
                "index_diagonal", "diagonal_part", "four_clique",
                "four_clique_order"]
    for name in additive:
        from matfor.fragments import Fragment, classify
        assert classify(LIB[name].expr) <= Fragment.SUM, name
        item = LIB[name]
        for n, degree in degree_growth(item.expr, item.schema, stdlib.ALPHA,
                                       range(2, 9)):
            assert degree <= n * n, (name, n, degree)


@criterion(11, "additive folds are invariant under iteration order")
def test_criterion_11_order_invariance():
    rng = random.Random(111)
    cases = [
        ("sum v . v", "var v : alpha x 1", ()),
        ("sum v . v * v^T", "var v : alpha x 1", ()),
        ("sum v . (v^T * V * v) .* (v * v^T)",
         "var v : alpha x 1\nvar V : alpha x alpha", ("V",)),
        ("sum v . sum w . (v^T * V * w) .* (v * w^T)",
         "var v : alpha x 1\nvar w : alpha x 1\nvar V : alpha x alpha",
         ("V",)),
    ]
    samplers = {
        NAT: lambda: rng.randrange(5),
        BOOL: lambda: rng.randrange(2),
        TROPICAL: lambda: float(rng.randrange(9)),
    }
    for text, schema_text, inputs in cases:
        schema = parse_schema(schema_text)
        core = desugar(parse_expr(text), schema)
        for sr, sample in samplers.items():
            n = rng.randrange(2, 6)
            mats = {vn: KMatrix(n, n, tuple(sample() for _ in range(n * n)))
                    for vn in inputs}
            inst = Instance({"alpha": n}, mats)
            base = evaluate(core, inst, sr, schema=schema)
            for _ in range(10):
                perm = list(range(1, n + 1))
                rng.shuffle(perm)
                out = evaluate(core, inst, sr, schema=schema,
                               iteration_order=lambda _n, p=perm: p)
                assert mat_equal(out, base, sr)


@criterion(12, "desugaring and scalarisation preserve semantics exactly")
def test_criterion_12_lowering_soundness():
    rng = random.Random(112)
    schema = parse_schema("""
var V : alpha x alpha
var W : alpha x alpha
var u : alpha x 1
var v : alpha x 1
var w : alpha x 1
""")
    corpus = [
        "sum v . v",
        "sum v . v * v^T",
        "prod v . V",
        "hprod v . V + v * v^T",
        "ones(V) + diag(u)^T * u",
        "diag(ones(W))",
        "sum v . hprod2(V, v * v^T)",
        "hsum3(V, W, V)",
        "hprod2(u, u) + u",
        "prod v . hprod2(V, W) + diag(v)",
        "sum v . sum w . (v^T * V * w) .* (v * w^T)",
    ]
    for text in corpus:
        e = parse_expr(text)
        lowered = desugar(e, schema)
        scalarised = reduce_apply_to_scalars(e, schema)
        assert typecheck(lowered, schema) == typecheck(e, schema)
        assert typecheck(scalarised, schema) == typecheck(e, schema)
        for _ in range(5):
            n = rng.randrange(1, 6)
            mats = {}
            for name, t in schema.vars.items():
                r = n if t.rows == "alpha" else 1
                c = n if t.cols == "alpha" else 1
                mats[name] = KMatrix(
                    r, c, tuple(rng.randrange(4) for _ in range(r * c)))
            inst = Instance({"alpha": n}, mats)
            want = evaluate(e, inst, NAT, schema=schema)
            assert mat_equal(evaluate(lowered, inst, NAT, schema=schema),
                             want, NAT), text
            assert mat_equal(evaluate(scalarised, inst, NAT, schema=schema),
                             want, NAT), text


@criterion(13, "parse/pretty round trip on the library and 500 random terms")
def test_criterion_13_round_trip():
    from conftest import TypedGen

    for name, item in LIB.items():
        assert parse_expr(pretty(item.expr)) == item.expr, name

    rng = random.Random(113)
    types = [MatrixType("alpha", "beta"), MatrixType("alpha", "alpha"),
             MatrixType("alpha", UNIT), MatrixType(UNIT, UNIT),
             MatrixType(UNIT, "beta")]
    for _ in range(500):
        decls = {"V": MatrixType("alpha", "beta"),
                 "M": MatrixType("beta", "alpha"),
                 "Q": MatrixType("alpha", "alpha"),
                 "P": MatrixType("beta", "beta"),
                 "u": MatrixType("alpha", UNIT),
                 "w": MatrixType("beta", UNIT),
                 "s": MatrixType(UNIT, UNIT)}
        gen = TypedGen(rng, decls)
        target = rng.choice(types)
        e = gen.expr(target, rng.randrange(1, 4))
        assert typecheck(e, Schema(decls)) == target
        assert parse_expr(pretty(e)) == e
