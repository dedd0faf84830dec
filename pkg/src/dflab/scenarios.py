"""End-to-end pipelines producing machine-checked rank tables.

Each scenario builds its complexes from scratch, runs a homology
engine, compares against the frozen expected tables, and returns a
ScenarioResult with per-degree detail.  Results serialize into the
report document emitted by the command line tool.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import fieldla
from . import groebner as gb_mod
from .complexes import (
    ChainComplex,
    homology_graded,
    homology_groebner,
    homology_groebner_report,
    is_quasi_iso,
    total_complex,
    total_complex_many,
    truncate,
)
from .expected import EXPECTED, prediction_tables
from .functors import (
    CoSchurL31,
    Div,
    Ext,
    ProductFunctor,
    SchurL31,
    Sym,
    TensorPow,
    cauchy_det_map,
    cauchy_m21_map,
    cross_effect,
    delta_map,
    plus_map,
)
from .koszul import cokoszul_complex, koszul_complex, regular_sequence_resolution, two_term_complex
from .linear import LabeledFreeModule, MapMatrix, atom, identity_map
from .ring import ring_descriptor
from .simplicial import (
    apply_pointwise_functor,
    aw_map,
    aw_map_triple,
    diagonal_tensor,
    gamma,
    normalize,
    shuffle_map,
    shuffle_map_triple,
)


class ConfigError(ValueError):
    """Invalid scenario configuration."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ScenarioConfig:
    prime: int = 97
    rationals: bool = False
    variables: tuple = ("x", "y")
    order: str = "degrevlex"
    sequence: tuple | None = None  # default: the variables themselves
    n_max: int = 7
    t_max: int = 12
    engine: str = "graded"  # graded | groebner | both
    route: str = "a"  # gk only: a | b | both
    budget_s: float | None = None

    def ring(self):
        try:
            return ring_descriptor(
                prime=self.prime,
                rationals=self.rationals,
                variables=self.variables,
                order=self.order,
                sequence=self.sequence,
            )
        except ValueError as e:
            raise ConfigError(str(e)) from e


@dataclass
class ScenarioResult:
    name: str
    ring: dict
    expected: dict = dc_field(default_factory=dict)
    computed: dict = dc_field(default_factory=dict)
    per_degree: dict = dc_field(default_factory=dict)
    passed: bool = False
    millis: int = 0
    partial: bool = False
    notes: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "per_degree": self.per_degree,
            "pass": self.passed,
            "partial": self.partial,
            "notes": sorted(self.notes),
            "millis": self.millis,
        }


class _Budget:
    def __init__(self, seconds):
        self.t0 = time.monotonic()
        self.seconds = seconds

    def check(self):
        if self.seconds is not None and time.monotonic() - self.t0 > self.seconds:
            raise BudgetExceeded()


def _finish(result: ScenarioResult, t0: float) -> ScenarioResult:
    result.millis = int((time.monotonic() - t0) * 1000)
    return result


def _ranks_and_detail(report, ks):
    ranks = report.rank_vector(ks)
    detail = report.to_dict()["per_degree"]
    certified = all(
        d.ri_rank is not None for k, d in report.degrees.items() if k in set(ks)
    )
    return ranks, detail, certified and report.euler_ok


def _resolution_pipeline(ring, n_max, tag):
    """normalize(F applied levelwise to the level-build of the resolution)."""
    P = regular_sequence_resolution(ring)
    GP = gamma(P, n_max)
    return normalize(apply_pointwise_functor(tag, GP)), P, GP


# --- main scenario: the cube pipeline ---------------------------------------


def run_gk(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence or len(ring.regular_sequence) != 2:
        raise ConfigError("run_gk needs a regular sequence of length 2")
    budget = _Budget(cfg.budget_s)
    res = ScenarioResult("gk", ring.describe(), expected={"ranks": EXPECTED["gk_ranks"]["value"]})
    ks = list(range(0, 7))
    try:
        N, P, GP = _resolution_pipeline(ring, cfg.n_max, Sym(3))
        budget.check()
        if cfg.engine in ("graded", "both"):
            rep = homology_graded(N, cfg.t_max)
            ranks, detail, certified = _ranks_and_detail(rep, ks)
            res.computed["ranks"] = ranks
            res.per_degree["graded"] = detail
            res.computed["certified"] = certified
        budget.check()
        if cfg.engine in ("groebner", "both"):
            rep_g = homology_groebner_report(truncate(N, 7), cfg.t_max)
            ranks_g = rep_g.rank_vector(ks)
            res.per_degree["groebner"] = rep_g.to_dict()["per_degree"]
            res.computed.setdefault("ranks", ranks_g)
            res.computed["groebner_ranks"] = ranks_g
        budget.check()
        if cfg.route in ("b", "both"):
            ranks_b, detail_b = _gk_route_b(ring, cfg, budget)
            res.computed["route_b_ranks"] = ranks_b
            res.per_degree["route_b"] = detail_b
            if cfg.route == "b":
                res.computed["ranks"] = ranks_b
        ok = res.computed.get("ranks") == res.expected["ranks"]
        if cfg.engine == "both":
            ok = ok and res.computed["groebner_ranks"] == res.expected["ranks"]
        if cfg.route == "both":
            ok = ok and res.computed["route_b_ranks"] == res.expected["ranks"]
            per_t_a = res.per_degree["graded"]
            per_t_b = res.per_degree["route_b"]
            ok = ok and _same_dim_tables(per_t_a, per_t_b)
            res.computed["route_independent"] = _same_dim_tables(per_t_a, per_t_b)
        if cfg.engine != "groebner":
            ok = ok and res.computed.get("certified", False)
        res.passed = bool(ok)
    except BudgetExceeded:
        res.partial = True
        res.notes.append("budget exceeded; partial report")
    return _finish(res, t0)


def _gk_route_b(ring, cfg, budget):
    """H_k of the normalized cube of the levelwise product of the two
    one-variable level-builds (the route through the diagonal)."""
    f, g = ring.regular_sequence
    K = _two_term(ring, "k", f)
    L = _two_term(ring, "l", g)
    GK, GL = gamma(K, cfg.n_max), gamma(L, cfg.n_max)
    D = diagonal_tensor([GK, GL])
    NB = normalize(apply_pointwise_functor(Sym(3), D))
    budget.check()
    rep = homology_graded(NB, cfg.t_max)
    ranks, detail, _ = _ranks_and_detail(rep, list(range(0, 7)))
    return ranks, detail


def _two_term(ring, name, f):
    M0 = LabeledFreeModule(ring, [atom(f"{name}0", 0)])
    M1 = LabeledFreeModule(ring, [atom(f"{name}1", max(f.degree(), 0))])
    return ChainComplex(ring, {0: M0, 1: M1}, {1: MapMatrix(M1, M0, {0: {0: f}})})


def _same_dim_tables(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    for k in keys:
        da = a.get(k, {}).get("dims", {})
        db = b.get(k, {}).get("dims", {})
        if {t: v for t, v in da.items() if v} != {t: v for t, v in db.items() if v}:
            return False
    return True


# --- cross-effect scenarios ---------------------------------------------------


def run_cross2(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence or len(ring.regular_sequence) != 2:
        raise ConfigError("run_cross2 needs a regular sequence of length 2")
    budget = _Budget(cfg.budget_s)
    res = ScenarioResult(
        "cross2",
        ring.describe(),
        expected={
            "per_side": EXPECTED["cross2_per_side"]["value"],
            "totals": EXPECTED["cross2_totals"]["value"],
            "sym2": EXPECTED["sym2_ranks"]["value"],
        },
    )
    ks = list(range(0, 6))
    try:
        P = regular_sequence_resolution(ring)
        GP = gamma(P, cfg.n_max)
        S2GP = apply_pointwise_functor(Sym(2), GP)
        sides = {}
        for label, mods in (("left", [S2GP, GP]), ("right", [GP, S2GP])):
            N = normalize(diagonal_tensor(mods))
            budget.check()
            rep = homology_graded(N, cfg.t_max)
            ranks, detail, certified = _ranks_and_detail(rep, ks)
            sides[label] = ranks
            res.per_degree[label] = detail
            res.computed.setdefault("certified", True)
            res.computed["certified"] = res.computed["certified"] and certified
        res.computed["per_side"] = sides
        res.computed["totals"] = [a + b for a, b in zip(sides["left"], sides["right"])]
        # square-power sub-table on the same resolution
        NS2 = normalize(S2GP)
        rep2 = homology_graded(NS2, cfg.t_max)
        res.computed["sym2"] = rep2.rank_vector(range(0, 4))
        res.per_degree["sym2"] = rep2.to_dict()["per_degree"]
        ok = (
            sides["left"] == res.expected["per_side"]
            and sides["right"] == res.expected["per_side"]
            and res.computed["totals"] == res.expected["totals"]
            and res.computed["sym2"] == res.expected["sym2"]
            and res.computed["certified"]
        )
        res.passed = bool(ok)
    except BudgetExceeded:
        res.partial = True
        res.notes.append("budget exceeded; partial report")
    return _finish(res, t0)


def run_cross3(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence or len(ring.regular_sequence) != 2:
        raise ConfigError("run_cross3 needs a regular sequence of length 2")
    budget = _Budget(cfg.budget_s)
    res = ScenarioResult(
        "cross3", ring.describe(), expected={"ranks": EXPECTED["cross3_ranks"]["value"]}
    )
    ks = list(range(0, 6))
    try:
        P = regular_sequence_resolution(ring)
        GP = gamma(P, cfg.n_max)
        N = normalize(diagonal_tensor([GP, GP, GP]))
        budget.check()
        rep = homology_graded(N, cfg.t_max)
        ranks, detail, certified = _ranks_and_detail(rep, ks)
        res.computed["ranks"] = ranks
        res.per_degree["diagonal"] = detail
        # cross-check through the total complex of the triple power
        T = total_complex_many([P, P, P])
        rep_t = homology_graded(T, cfg.t_max)
        res.computed["total_complex_ranks"] = rep_t.rank_vector(ks)
        res.per_degree["total_complex"] = rep_t.to_dict()["per_degree"]
        binom = [_choose(4, k) for k in ks]
        ok = (
            ranks == res.expected["ranks"] == binom[: len(ranks)]
            and res.computed["total_complex_ranks"] == res.expected["ranks"]
            and certified
        )
        res.passed = bool(ok)
    except BudgetExceeded:
        res.partial = True
        res.notes.append("budget exceeded; partial report")
    return _finish(res, t0)


def run_tor_powers(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence or len(ring.regular_sequence) != 2:
        raise ConfigError("run_tor_powers needs a regular sequence of length 2")
    res = ScenarioResult(
        "tor-powers",
        ring.describe(),
        expected={"square": EXPECTED["tor_square"]["value"], "cube": EXPECTED["tor_cube"]["value"]},
    )
    P = regular_sequence_resolution(ring)
    T2 = total_complex(P, P)
    T3 = total_complex(T2, P)
    rep2 = homology_graded(T2, cfg.t_max)
    rep3 = homology_graded(T3, cfg.t_max)
    res.computed["square"] = rep2.rank_vector(range(0, 3))
    res.computed["cube"] = rep3.rank_vector(range(0, 5))
    res.per_degree["square"] = rep2.to_dict()["per_degree"]
    res.per_degree["cube"] = rep3.to_dict()["per_degree"]
    certified = all(d.ri_rank is not None for d in rep2.degrees.values()) and all(
        d.ri_rank is not None for d in rep3.degrees.values()
    )
    res.passed = bool(
        res.computed["square"] == res.expected["square"]
        and res.computed["cube"] == res.expected["cube"]
        and certified
    )
    return _finish(res, t0)


# --- predictions ---------------------------------------------------------------


def run_predictions(cfg: ScenarioConfig, d: int = 2, g_tables: dict | None = None) -> ScenarioResult:
    t0 = time.monotonic()
    if d < 1:
        raise ConfigError("conormal rank d must be >= 1")
    ring = cfg.ring()
    res = ScenarioResult("predict", ring.describe())
    tables = prediction_tables(d)
    res.computed["F"] = tables["F"]
    res.computed["cr2"] = tables["cr2"]
    res.computed["cr3"] = tables["cr3"]
    res.computed["cr3_printed_list"] = tables["cr3_printed_list"]
    res.computed["d"] = d
    if tables["printed_list_discrepancy"]:
        res.notes.append(
            "printed summand list for the k=2 entry of the three-argument table "
            f"gives {tables['cr3_printed_list'][2]}, composition-factor evaluation gives "
            f"{tables['cr3'][2]}; the latter matches the three-argument theorem"
        )
    # confirm the composition-factor evaluation by brute-force cross-effects
    plain = ring_descriptor(
        prime=cfg.prime, rationals=cfg.rationals, variables=(), sequence=()
    )
    k1 = [LabeledFreeModule(plain, [atom(f"a{i}", 0)]) for i in range(3)]
    d2v = ProductFunctor([Div(2), TensorPow(1)])
    lam2 = d * (d - 1) // 2
    sym2 = d * (d + 1) // 2
    brute = (
        cross_effect(d2v, k1).module.rank * lam2
        + cross_effect(Ext(3), k1).module.rank * sym2
    )
    res.computed["cr3_k2_brute_force"] = brute
    ok = brute == tables["cr3"][2]
    if d == 2:
        if g_tables is None:
            sub = ScenarioConfig(**{**cfg.__dict__})
            g_tables = {
                "gk": run_gk(sub).computed.get("ranks"),
                "cross2_totals": run_cross2(sub).computed.get("totals"),
                "cross3": run_cross3(sub).computed.get("ranks"),
            }
        res.computed["g_tables"] = g_tables
        f_pad = tables["F"] + [0, 0]
        cr2_pad = tables["cr2"] + [0]
        cr3_pad = tables["cr3"] + [0]
        res.expected = {"gk": f_pad, "cross2_totals": cr2_pad, "cross3": cr3_pad}
        ok = (
            ok
            and g_tables["gk"] == f_pad
            and g_tables["cross2_totals"] == cr2_pad
            and g_tables["cross3"] == cr3_pad
        )
    res.passed = bool(ok)
    return _finish(res, t0)


# --- Schur comparison ------------------------------------------------------------


def run_schur_comparison(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    plain = ring_descriptor(
        prime=cfg.prime, rationals=cfg.rationals, variables=(), sequence=()
    )
    res = ScenarioResult(
        "check-schur",
        plain.describe(),
        expected={"cross_ranks": EXPECTED["schur_cross_ranks"]["value"]},
    )
    field = plain.field

    def kmods(count):
        return [LabeledFreeModule(plain, [atom(f"s{i}", 0)]) for i in range(count)]

    ranks = {}
    for tag, label in ((SchurL31, "schur"), (CoSchurL31, "coschur")):
        ranks[label] = [cross_effect(tag, kmods(k)).module.rank for k in (1, 2, 3, 4)]
    res.computed["cross_ranks"] = ranks
    ok = all(ranks[lbl] == res.expected["cross_ranks"] for lbl in ranks)

    # mixed-rank sanity: cr2 at (k^2, k^3) has the same dimension on both sides
    m2 = [
        LabeledFreeModule(plain, [atom("u0", 0), atom("u1", 0)]),
        LabeledFreeModule(plain, [atom("w0", 0), atom("w1", 0), atom("w2", 0)]),
    ]
    dims23 = [cross_effect(t, m2).module.rank for t in (SchurL31, CoSchurL31)]
    res.computed["cr2_rank_2_3"] = dims23
    ok = ok and dims23 == [30, 30]

    # structural squares: find isomorphisms alpha2, alpha3 commuting with all
    # diagonal/plus maps for epsilon in {1,2}^2 with |epsilon| = 3
    args2 = kmods(2)
    eps_list = [(1, 2), (2, 1)]
    mats = {}
    for tag, label in ((SchurL31, "F"), (CoSchurL31, "G")):
        for eps in eps_list:
            dm, _, _ = delta_map(tag, eps, args2)
            pm, _, _ = plus_map(tag, eps, args2)
            mats[(label, "delta", eps)] = dm.to_field_matrix()
            mats[(label, "plus", eps)] = pm.to_field_matrix()
    alpha = _solve_commuting_isos(field, mats, eps_list, 2, 2)
    res.computed["squares_commute"] = alpha is not None
    # the one-variable squares involve the zero module on both sides
    zero_rank = cross_effect(SchurL31, kmods(1)).module.rank
    res.computed["cr1_zero"] = zero_rank == 0
    ok = ok and alpha is not None and zero_rank == 0
    res.passed = bool(ok)
    return _finish(res, t0)


def _solve_commuting_isos(field, mats, eps_list, n2, n3):
    """Find invertible alpha2 (n2 x n2), alpha3 (n3 x n3) with
    alpha3 @ deltaF = deltaG @ alpha2 and alpha2 @ plusF = plusG @ alpha3."""
    nunk = n2 * n2 + n3 * n3
    nrows = len(eps_list) * (n3 * n2 + n2 * n3)
    M = fieldla.zeros(field, nrows, nunk)

    def a2(i, j):
        return i * n2 + j

    def a3(i, j):
        return n2 * n2 + i * n3 + j

    r = 0
    for eps in eps_list:
        dF, dG = mats[("F", "delta", eps)], mats[("G", "delta", eps)]
        pF, pG = mats[("F", "plus", eps)], mats[("G", "plus", eps)]
        for i in range(n3):
            for j in range(n2):
                for t in range(n3):
                    M[r, a3(i, t)] = field.add(M[r, a3(i, t)], dF[t, j])
                for t in range(n2):
                    M[r, a2(t, j)] = field.sub(M[r, a2(t, j)], dG[i, t])
                r += 1
        for i in range(n2):
            for j in range(n3):
                for t in range(n2):
                    M[r, a2(i, t)] = field.add(M[r, a2(i, t)], pF[t, j])
                for t in range(n3):
                    M[r, a3(t, j)] = field.sub(M[r, a3(t, j)], pG[i, t])
                r += 1
    null = fieldla.nullspace(field, M)
    if null.shape[1] == 0:
        return None
    rng = np.random.default_rng(12345)
    for _ in range(400):
        coeffs = [int(c) for c in rng.integers(1, 50, size=null.shape[1])]
        v = fieldla.zeros(field, nunk, 1)[:, 0]
        for idx, c in enumerate(coeffs):
            col = null[:, idx]
            for row in range(nunk):
                v[row] = field.add(v[row], field.mul(col[row], field.coerce(c)))
        A2 = v[: n2 * n2].reshape(n2, n2)
        A3 = v[n2 * n2 :].reshape(n3, n3)
        if fieldla.rank(field, A2) == n2 and fieldla.rank(field, A3) == n3:
            return A2, A3
    return None


# --- proof intermediates -----------------------------------------------------------


def _certify_cyclic_mod(pres, f, others, t_max) -> str:
    """Classify a presentation as '0', 'R/(f)' (cyclic, killed by f, Hilbert
    function 1 in each degree past the generator), or 'other'."""
    finite, dim = pres.finite, pres.dim
    if finite and dim == 0:
        return "0"
    if pres.generator_count == 0:
        return "0"
    if finite:
        return "other"
    if gb_mod.minimal_generators(pres) != 1:
        return "other"
    if not gb_mod.annihilates(pres, f):
        return "other"
    if any(gb_mod.annihilates(pres, g) for g in others):
        return "other"
    dims = gb_mod.hilbert_dims(pres, t_max)
    t0 = min(pres.gen_degrees) if pres.gen_degrees else 0
    if all(dims[t] == (1 if t >= t0 else 0) for t in range(t_max + 1)):
        return f"R/({f})"
    return "other"


def run_l31_homology(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence:
        raise ConfigError("run_l31_homology needs a regular sequence")
    budget = _Budget(cfg.budget_s)
    f = ring.regular_sequence[0]
    others = [g for g in ring.regular_sequence[1:]]
    res = ScenarioResult(
        "check-l31",
        ring.describe(),
        expected={
            "l31": EXPECTED["l31_gamma_k"]["value"],
            "mixed": EXPECTED["mixed_gamma_k"]["value"],
            "cube": EXPECTED["cube_gamma_k"]["value"],
            "m21_ranks": EXPECTED["m21_ranks"]["value"],
        },
    )
    fname = str(f)
    expected_named = {
        "l31": [s.replace("x", fname) if s != "0" else s for s in res.expected["l31"]],
        "mixed": [s.replace("x", fname) if s != "0" else s for s in res.expected["mixed"]],
        "cube": [s.replace("x", fname) if s != "0" else s for s in res.expected["cube"]],
    }
    try:
        n_small = min(cfg.n_max, 5)
        K = _two_term(ring, "k", f)
        GK = gamma(K, n_small)
        pieces = {
            "l31": normalize(apply_pointwise_functor(SchurL31, GK)),
            "mixed": normalize(
                diagonal_tensor([GK, apply_pointwise_functor(Sym(2), GK)])
            ),
            "cube": normalize(apply_pointwise_functor(Sym(3), GK)),
        }
        for label, N in pieces.items():
            budget.check()
            table = []
            for k in range(0, 4):
                pres = homology_groebner(truncate(N, n_small - 1), k)
                table.append(_certify_cyclic_mod(pres, f, others, cfg.t_max))
            res.computed[label] = table
            res.per_degree[label] = {str(k): v for k, v in enumerate(table)}
        ok = all(res.computed[label] == expected_named[label] for label in pieces)
        if len(ring.regular_sequence) == 2:
            budget.check()
            m21, dims_check, sub_N, quot_N = m21_complex(ring, cfg.n_max)
            rep = homology_graded(m21, cfg.t_max)
            ranks, detail, certified = _ranks_and_detail(rep, list(range(0, 7)))
            res.computed["m21_ranks"] = ranks
            res.per_degree["m21"] = detail
            res.computed["m21_rank_split"] = dims_check
            ok = ok and ranks == res.expected["m21_ranks"] and certified
            ok = ok and all(a == b + c for a, b, c in dims_check)
            budget.check()
            rep_sub = homology_graded(sub_N, cfg.t_max)
            rep_quot = homology_graded(quot_N, cfg.t_max)
            sub_ranks = rep_sub.rank_vector(range(0, 7))
            quot_ranks = rep_quot.rank_vector(range(0, 7))
            res.computed["wedge_cube_pair_ranks"] = sub_ranks
            res.computed["schur_pair_ranks"] = quot_ranks
            ok = ok and sub_ranks == [0, 0, 0, 0, 1, 0, 0]
            ok = ok and quot_ranks == [0, 0, 1, 0, 0, 0, 0]
        res.passed = bool(ok)
    except BudgetExceeded:
        res.partial = True
        res.notes.append("budget exceeded; partial report")
    return _finish(res, t0)


def m21_complex(ring, n_max: int):
    """Normalized complex of the middle Cauchy filtration stage inside the
    normalized cube of the two-variable diagonal, plus a rank cross-check
    against the two filtration quotients.

    Returns (ChainComplex, [(dim M_n, dim sub_n, dim quotient_n)], sub, quot)
    where sub and quot are the normalized complexes of the two filtration
    quotients.
    """
    f, g = ring.regular_sequence
    field = ring.field
    GK = gamma(_two_term(ring, "k", f), n_max)
    GL = gamma(_two_term(ring, "l", g), n_max)
    D = diagonal_tensor([GK, GL])
    S3 = apply_pointwise_functor(Sym(3), D)
    NS3 = normalize(S3)
    # quotient ranks for the cross-check
    sub_N = normalize(diagonal_tensor([
        apply_pointwise_functor(Ext(3), GK), apply_pointwise_functor(Ext(3), GL)
    ]))
    quot_N = normalize(diagonal_tensor([
        apply_pointwise_functor(SchurL31, GK), apply_pointwise_functor(SchurL31, GL)
    ]))

    bases = {}
    pivots = {}
    for n in range(n_max + 1):
        Nmod = NS3.module(n)
        level = S3.level(n)
        pos_of = {}
        for p, lab in enumerate(Nmod.labels):
            pos_of[level.index(lab)] = p
        cs = fieldla.ColumnSpace(field, Nmod.rank)
        det = cauchy_det_map(GK.level(n), GL.level(n))
        m21 = cauchy_m21_map(GK.level(n), GL.level(n))
        if det.target.labels != level.labels:
            raise RuntimeError("filtration maps built over a mismatched basis")
        zero_mono = (0,) * ring.nvars
        for gen in (det, m21):
            for j in range(gen.source.rank):
                col = gen.col(j)
                vec = fieldla.zeros(field, Nmod.rank, 1)[:, 0]
                any_nz = False
                for i, poly in col.items():
                    p = pos_of.get(i)
                    if p is None:
                        continue
                    vec[p] = poly.terms.get(zero_mono, field.zero)
                    any_nz = True
                if any_nz:
                    cs.add(vec)
        bases[n] = cs
        pivots[n] = list(cs.pivots)

    dims_check = []
    for n in range(n_max + 1):
        dims_check.append(
            (bases[n].rank, sub_N.module(n).rank, quot_N.module(n).rank)
        )

    modules = {}
    for n in range(n_max + 1):
        labs = []
        for i in range(bases[n].rank):
            row = bases[n].rows[i]
            support = [r for r in range(len(row)) if row[r] != 0]
            degs = {NS3.module(n).degrees[r] for r in support}
            if len(degs) != 1:
                raise RuntimeError("filtration basis vector is not homogeneous")
            labs.append(atom(f"m21_{n}_{i}", degs.pop()))
        modules[n] = LabeledFreeModule(ring, labs)

    diffs = {}
    for n in range(1, n_max + 1):
        if modules[n].rank == 0 or modules[n - 1].rank == 0:
            continue
        Bn, Bp = bases[n], bases[n - 1]
        d = NS3.diff(n)
        cols = {}
        for c in range(Bn.rank):
            row = Bn.rows[c]
            W: dict = {}
            for r in range(len(row)):
                coeff = row[r]
                if coeff == 0:
                    continue
                for i, poly in d.col(r).items():
                    term = poly.scale(coeff)
                    cur = W.get(i)
                    W[i] = term if cur is None else cur + term
            W = {i: q for i, q in W.items() if not q.is_zero()}
            col = {}
            for idx, piv in enumerate(Bp.pivots):
                q = W.get(piv)
                if q is not None and not q.is_zero():
                    col[idx] = q
            # verify the residual: W must equal B_{n-1} applied to col
            recon: dict = {}
            for idx, q in col.items():
                brow = Bp.rows[idx]
                for r in range(len(brow)):
                    if brow[r] != 0:
                        term = q.scale(brow[r])
                        cur = recon.get(r)
                        recon[r] = term if cur is None else cur + term
            recon = {r: q for r, q in recon.items() if not q.is_zero()}
            if recon != W:
                raise RuntimeError("filtration stage is not a subcomplex")
            if col:
                cols[c] = col
        diffs[n] = MapMatrix(modules[n], modules[n - 1], cols)
    return ChainComplex(ring, modules, diffs), dims_check, sub_N, quot_N


# --- Koszul quasi-isomorphisms -------------------------------------------------


def run_koszul_qis(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence:
        raise ConfigError("run_koszul_qis needs a regular sequence")
    res = ScenarioResult("check-koszul", ring.describe())
    budget = _Budget(cfg.budget_s)
    cases = {}
    f = ring.regular_sequence[0]
    P1 = LabeledFreeModule(ring, [atom("p", max(f.degree(), 0))])
    Q1 = LabeledFreeModule(ring, [atom("q", 0)])
    cases["single"] = MapMatrix(P1, Q1, {0: {0: f}})
    if len(ring.regular_sequence) == 2:
        g = ring.regular_sequence[1]
        P2 = LabeledFreeModule(
            ring, [atom("p1", max(f.degree(), 0)), atom("p2", max(g.degree(), 0))]
        )
        cases["pair"] = MapMatrix(P2, Q1, {0: {0: f}, 1: {0: g}})
    I2s = LabeledFreeModule(ring, [atom("i1", 0), atom("i2", 0)])
    I2t = LabeledFreeModule(ring, [atom("j1", 0), atom("j2", 0)])
    cases["invertible"] = MapMatrix(
        I2s, I2t, {0: {0: ring.one()}, 1: {1: ring.one()}}
    )
    try:
        all_ok = True
        for label, fmap in cases.items():
            T = two_term_complex(fmap)
            for n in (1, 2, 3):
                budget.check()
                G = gamma(T, n + 2)
                sym_n = truncate(normalize(apply_pointwise_functor(Sym(n), G)), n + 1)
                ext_n = truncate(normalize(apply_pointwise_functor(Ext(n), G)), n + 1)
                pairs = {
                    "sym": (koszul_complex(fmap, n), sym_n),
                    "ext": (cokoszul_complex(fmap, n), ext_n),
                }
                for side, (A, B) in pairs.items():
                    da = _dims_table(A, min(cfg.t_max, 8))
                    db = _dims_table(B, min(cfg.t_max, 8))
                    key = f"{label}/n={n}/{side}"
                    res.per_degree[key] = {"koszul": _str_dims(da), "derived": _str_dims(db)}
                    if da != db:
                        all_ok = False
                if label == "invertible":
                    exact = all(
                        not v
                        for v in _dims_table(koszul_complex(fmap, n), 0).values()
                    )
                    all_ok = all_ok and exact
        res.computed["all_tables_match"] = all_ok
        res.passed = bool(all_ok)
    except BudgetExceeded:
        res.partial = True
        res.notes.append("budget exceeded; partial report")
    return _finish(res, t0)


def _dims_table(C: ChainComplex, t_max: int) -> dict:
    rep = homology_graded(C, t_max, annihilators=[])
    return {k: d.dims for k, d in rep.degrees.items() if d.dims}


def _str_dims(d: dict) -> dict:
    return {str(k): {str(t): v for t, v in sorted(ts.items())} for k, ts in sorted(d.items())}


# --- Eilenberg-Zilber checks ------------------------------------------------------


def run_ez_check(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence or len(ring.regular_sequence) != 2:
        raise ConfigError("run_ez_check needs a regular sequence of length 2")
    res = ScenarioResult("check-ez", ring.describe())
    budget = _Budget(cfg.budget_s)
    n_max = min(cfg.n_max, 5)
    f, g = ring.regular_sequence
    K = _two_term(ring, "k", f)
    L = _two_term(ring, "l", g)
    try:
        GK, GL = gamma(K, n_max), gamma(L, n_max)
        sh, tot, nd = shuffle_map(GK, GL)
        aw, _, _ = aw_map(GK, GL)
        comp = aw.compose(sh)
        section = all(
            comp.map_at(n).equals(identity_map(tot.module(n))) for n in range(n_max + 1)
        )
        pair_ok = (
            sh.is_chain_map()
            and aw.is_chain_map()
            and section
            and is_quasi_iso(sh, min(cfg.t_max, 8), k_max=n_max - 1)
        )
        res.computed["pair"] = {
            "chain_maps": sh.is_chain_map() and aw.is_chain_map(),
            "section_identity": section,
            "quasi_iso": pair_ok,
        }
        budget.check()
        P = regular_sequence_resolution(ring)
        GP = gamma(P, n_max)
        sh3, tot3, nd3 = shuffle_map_triple(GP, GP, GP)
        aw3, _, _ = aw_map_triple(GP, GP, GP)
        comp3 = aw3.compose(sh3)
        section3 = all(
            comp3.map_at(n).equals(identity_map(tot3.module(n)))
            for n in range(n_max + 1)
        )
        rep_tot = homology_graded(truncate(tot3, n_max), min(cfg.t_max, 8))
        rep_nd = homology_graded(nd3, min(cfg.t_max, 8))
        tot_ranks = rep_tot.rank_vector(range(0, n_max))
        nd_ranks = rep_nd.rank_vector(range(0, n_max))
        triple_ok = (
            sh3.is_chain_map()
            and aw3.is_chain_map()
            and section3
            and tot_ranks == nd_ranks == [_choose(4, k) for k in range(n_max)]
            and is_quasi_iso(sh3, min(cfg.t_max, 8), k_max=n_max - 1)
        )
        res.computed["triple"] = {
            "chain_maps": sh3.is_chain_map() and aw3.is_chain_map(),
            "section_identity": section3,
            "ranks": tot_ranks,
        }
        res.passed = bool(pair_ok and triple_ok)
    except BudgetExceeded:
        res.partial = True
        res.notes.append("budget exceeded; partial report")
    return _finish(res, t0)


def _choose(n, k):
    from math import comb

    return comb(n, k)


# --- Cauchy filtration checks ------------------------------------------------------


def run_cauchy_check(cfg: ScenarioConfig) -> ScenarioResult:
    t0 = time.monotonic()
    plain = ring_descriptor(
        prime=cfg.prime, rationals=cfg.rationals, variables=(), sequence=()
    )
    field = plain.field
    res = ScenarioResult(
        "check-cauchy",
        plain.describe(),
        expected={"22": EXPECTED["cauchy_22"]["value"], "33": EXPECTED["cauchy_33"]["value"]},
    )

    def kmod(name, n):
        return LabeledFreeModule(plain, [atom(f"{name}{i}", 0) for i in range(n)])

    all_ok = True
    for np_, nq in ((2, 2), (3, 3), (2, 3), (4, 3)):
        P, Q = kmod("p", np_), kmod("q", nq)
        det = cauchy_det_map(P, Q).materialize()
        m21 = cauchy_m21_map(P, Q).materialize()
        Md, Mm = det.to_field_matrix(), m21.to_field_matrix()
        r_det, r_union = fieldla.rank_two(field, Md, Mm)
        lam3 = _choose(np_, 3) * _choose(nq, 3)
        l31 = (np_**3 - np_) // 3 * ((nq**3 - nq) // 3)
        sym3 = _choose(np_ + 2, 3) * _choose(nq + 2, 3)
        total = det.target.rank
        split_ok = (
            r_det == lam3
            and r_union - r_det == l31
            and total - r_union == sym3
            and total == lam3 + l31 + sym3
        )
        # membership: the first stage sits inside the second
        r_m21_only = fieldla.rank(field, Mm)
        stage_ok = r_union >= r_m21_only
        res.per_degree[f"{np_}{nq}"] = {
            "stage_dims": [lam3, l31, sym3],
            "total": total,
            "det_rank": int(r_det),
            "union_rank": int(r_union),
        }
        if np_ >= 3:
            split_ok = split_ok and r_det == det.source.rank  # injectivity
        all_ok = all_ok and split_ok and stage_ok
    res.computed["22"] = res.per_degree["22"]["stage_dims"]
    res.computed["33"] = res.per_degree["33"]["stage_dims"]

    # the defining four-term sequences are the n=3 contractions of the
    # identity map, exact for free modules
    from .complexes import homology_graded as hg

    seq_exact = True
    for n in (2, 3, 4):
        V = kmod("v", n)
        idm = identity_map(V)
        for C in (koszul_complex(idm, 3), cokoszul_complex(idm, 3)):
            rep = hg(C, 0, annihilators=[])
            if any(d.total for d in rep.degrees.values()):
                seq_exact = False
    res.computed["schur_sequences_exact"] = seq_exact
    all_ok = all_ok and seq_exact
    res.passed = bool(
        all_ok
        and res.computed["22"] == res.expected["22"]
        and res.computed["33"] == res.expected["33"]
    )
    return _finish(res, t0)


# --- property suite (construction identities) ----------------------------------------


def run_gamma_check(cfg: ScenarioConfig) -> ScenarioResult:
    """Simplicial identities, degenerate shapes, and the unit isomorphism."""
    t0 = time.monotonic()
    ring = cfg.ring()
    if not ring.regular_sequence or len(ring.regular_sequence) != 2:
        raise ConfigError("run_gamma_check needs a regular sequence of length 2")
    res = ScenarioResult("check-gamma", ring.describe())
    n_small = min(cfg.n_max, 4)
    P = regular_sequence_resolution(ring)
    GP = gamma(P, n_small)
    ok = GP.validate()
    NP = normalize(GP)
    unit_ok = NP.ranks() == P.ranks() and all(
        NP.diff(n).col(j) == P.diff(n).col(j)
        for n in P.diffs
        for j in range(P.module(n).rank)
    )
    f, g = ring.regular_sequence
    GK = gamma(_two_term(ring, "k", f), n_small)
    GL = gamma(_two_term(ring, "l", g), n_small)
    D = diagonal_tensor([GK, GL])
    ok = ok and D.validate()
    S3 = apply_pointwise_functor(Sym(3), D)
    ok = ok and S3.validate(up_to=3)
    res.computed["simplicial_identities"] = ok
    res.computed["unit_iso_identity_matrices"] = unit_ok
    res.passed = bool(ok and unit_ok)
    return _finish(res, t0)


SCENARIOS = {
    "gk": run_gk,
    "cross2": run_cross2,
    "cross3": run_cross3,
    "tor-powers": run_tor_powers,
    "predict": run_predictions,
    "check-schur": run_schur_comparison,
    "check-l31": run_l31_homology,
    "check-koszul": run_koszul_qis,
    "check-ez": run_ez_check,
    "check-cauchy": run_cauchy_check,
    "check-gamma": run_gamma_check,
}
