"""Bounded chain complexes, total complexes, and two homology engines.

The graded engine slices a homogeneous complex into exact field linear
algebra, one internal degree at a time, and certifies R/I-module ranks
by annihilator checks on explicit homology representatives.  The
Groebner engine presents each homology module by generators (syzygies
of the differential) and relations (lifted boundaries plus kernel
syzygies) and is the finiteness certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import fieldla
from . import groebner as gb_mod
from .linear import (
    LabeledFreeModule,
    MapMatrix,
    graded_slice,
    identity_map,
    multiplication_slice,
    slice_basis,
    tensor_maps,
    zero_map,
)


class NonHomogeneousComplex(ValueError):
    """Raised when the graded engine is handed non-homogeneous data."""


class ChainComplex:
    """Complex of labeled free modules with degree -1 differentials."""

    def __init__(self, ring, modules: dict, diffs: dict, check: bool = True):
        self.ring = ring
        self.modules = {n: m for n, m in modules.items() if m.rank > 0}
        degs = sorted(self.modules)
        self.lo = degs[0] if degs else 0
        self.hi = degs[-1] if degs else 0
        self.diffs = {}
        for n, d in diffs.items():
            if d is None:
                continue
            if n - 1 in self.modules and n in self.modules:
                self.diffs[n] = d
        if check:
            self._check()

    def _check(self):
        for n, d in self.diffs.items():
            if d.source.labels != self.module(n).labels or d.target.labels != self.module(n - 1).labels:
                raise ValueError(f"differential at {n} has wrong shape")
        for n in list(self.diffs):
            if n + 1 in self.diffs:
                if not self.diffs[n].compose(self.diffs[n + 1]).is_zero():
                    raise ValueError(f"d^2 != 0 at degree {n + 1}")

    def module(self, n: int) -> LabeledFreeModule:
        m = self.modules.get(n)
        if m is None:
            m = LabeledFreeModule(self.ring, [])
        return m

    def diff(self, n: int) -> MapMatrix:
        d = self.diffs.get(n)
        if d is None:
            d = zero_map(self.module(n), self.module(n - 1))
        return d

    def ranks(self) -> dict:
        return {n: self.module(n).rank for n in range(self.lo, self.hi + 1)}

    def is_homogeneous(self) -> bool:
        return all(d.is_homogeneous() for d in self.diffs.values())

    def support(self):
        return range(self.lo, self.hi + 1)

    def __repr__(self):
        return f"ChainComplex({self.ranks()})"


def shift(C: ChainComplex, s: int) -> ChainComplex:
    """C[s]_n = C_{n+s}; differentials reused with sign (-1)^s."""
    modules = {n - s: m for n, m in C.modules.items()}
    sign = -1 if s % 2 else 1
    diffs = {}
    for n, d in C.diffs.items():
        diffs[n - s] = d if sign == 1 else d.scale(-1)
    return ChainComplex(C.ring, modules, diffs, check=False)


def total_complex(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Tot(C (x) D) with the Koszul sign (-1)^p on the second differential."""
    ring = C.ring
    blocks: dict[int, list] = {}
    for p in C.support():
        if C.module(p).rank == 0:
            continue
        for q in D.support():
            if D.module(q).rank == 0:
                continue
            blocks.setdefault(p + q, []).append((p, q))
    modules = {}
    offsets = {}
    for n, pq in blocks.items():
        labels = []
        offs = {}
        for (p, q) in pq:
            offs[(p, q)] = len(labels)
            tensored = tensor_maps([identity_map(C.module(p)), identity_map(D.module(q))])
            labels.extend(tensored.source.labels)
        modules[n] = LabeledFreeModule(ring, labels)
        offsets[n] = offs
    diffs = {}
    for n in sorted(blocks):
        if n - 1 not in blocks:
            continue
        src, tgt = modules[n], modules[n - 1]
        cols: dict = {}
        for (p, q) in blocks[n]:
            base = offsets[n][(p, q)]
            pieces = []
            if (p - 1, q) in offsets[n - 1]:
                m1 = tensor_maps([C.diff(p), identity_map(D.module(q))])
                pieces.append((offsets[n - 1][(p - 1, q)], m1))
            if (p, q - 1) in offsets[n - 1]:
                m2 = tensor_maps([identity_map(C.module(p)), D.diff(q)])
                if p % 2:
                    m2 = m2.scale(-1)
                pieces.append((offsets[n - 1][(p, q - 1)], m2))
            rank_pq = C.module(p).rank * D.module(q).rank
            for j in range(rank_pq):
                col = cols.setdefault(base + j, {})
                for toff, mat in pieces:
                    for i, poly in mat.col(j).items():
                        col[toff + i] = poly
        cols = {j: {i: q for i, q in col.items() if not q.is_zero()} for j, col in cols.items()}
        diffs[n] = MapMatrix(src, tgt, {j: c for j, c in cols.items() if c})
    return ChainComplex(ring, modules, diffs)


def total_complex_many(Cs) -> ChainComplex:
    out = Cs[0]
    for C in Cs[1:]:
        out = total_complex(out, C)
    return out


def truncate(C: ChainComplex, top: int) -> ChainComplex:
    """Drop all degrees above ``top`` (homology below ``top`` unchanged)."""
    modules = {n: m for n, m in C.modules.items() if n <= top}
    diffs = {n: d for n, d in C.diffs.items() if n <= top}
    return ChainComplex(C.ring, modules, diffs, check=False)


# --- graded homology engine ------------------------------------------------


@dataclass
class GradedDegree:
    dims: dict = dc_field(default_factory=dict)  # internal degree t -> dim_k
    total: int = 0
    annihilator_ok: dict = dc_field(default_factory=dict)  # str(poly) -> bool
    stabilized: bool = True
    ri_rank: int | None = None


@dataclass
class HomologyReport:
    engine: str
    t_max: int
    degrees: dict = dc_field(default_factory=dict)  # k -> GradedDegree
    euler_ok: bool = True
    presentations: dict = dc_field(default_factory=dict)  # k -> Presentation (groebner)

    def rank_vector(self, ks) -> list:
        out = []
        for k in ks:
            d = self.degrees.get(k)
            out.append(0 if d is None else (d.ri_rank if d.ri_rank is not None else d.total))
        return out

    def dim_table(self) -> dict:
        return {k: dict(sorted(d.dims.items())) for k, d in sorted(self.degrees.items())}

    def to_dict(self) -> dict:
        return {
            "engine": self.engine,
            "t_max": self.t_max,
            "per_degree": {
                str(k): {
                    "dims": {str(t): v for t, v in sorted(d.dims.items())},
                    "total": d.total,
                    "annihilators_zero": d.annihilator_ok,
                    "stabilized": d.stabilized,
                    "ri_rank": d.ri_rank,
                }
                for k, d in sorted(self.degrees.items())
            },
            "euler_ok": self.euler_ok,
        }


def homology_graded(C: ChainComplex, t_max: int, annihilators=None) -> HomologyReport:
    """Per-degree, per-internal-degree homology dimensions over the field.

    ``annihilators`` defaults to the ring's regular sequence; for each
    homology class representative z and each generator f the certificate
    checks that f*z is a boundary.  Slices are built and discarded one
    internal degree at a time; certificates re-slice at the (small)
    degrees where homology is nonzero.
    """
    ring = C.ring
    field = ring.field
    if ring.nvars and not C.is_homogeneous():
        raise NonHomogeneousComplex("complex is not homogeneous; use homology_groebner")
    if annihilators is None:
        annihilators = list(ring.regular_sequence or [])
    ann_degs = [f.degree() for f in annihilators]

    ks = list(range(C.lo, C.hi + 1))
    report = HomologyReport(engine="graded", t_max=t_max)
    for k in ks:
        report.degrees[k] = GradedDegree()

    euler_ok = True
    for t in range(0, t_max + 1):
        dim_c = {k: len(slice_basis(C.module(k), t)) for k in ks}
        ranks = {}
        for k in ks:
            if k + 1 > C.hi or dim_c[k] == 0 or dim_c.get(k + 1, 0) == 0:
                ranks[k + 1] = 0
                continue
            M, _, _ = graded_slice(C.diff(k + 1), t)
            ranks[k + 1] = fieldla.rank(field, M)
            del M
        ranks[C.lo] = 0
        lhs = rhs = 0
        for k in ks:
            dim_h = dim_c[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
            lhs += (-1) ** k * dim_h
            rhs += (-1) ** k * dim_c[k]
            if dim_h:
                deg = report.degrees[k]
                deg.dims[t] = dim_h
                deg.total += dim_h
        if lhs != rhs:
            euler_ok = False
    report.euler_ok = euler_ok

    for k in ks:
        deg = report.degrees[k]
        deg.stabilized = all(deg.dims.get(t, 0) == 0 for t in (t_max - 1, t_max))
        ok_all = True
        for f, fdeg in zip(annihilators, ann_degs):
            ok = all(
                _annihilator_check(C, field, k, t, dim_h, f, fdeg)
                for t, dim_h in deg.dims.items()
            )
            deg.annihilator_ok[str(f)] = ok
            ok_all = ok_all and ok
        if deg.stabilized and ok_all and annihilators:
            deg.ri_rank = deg.total
    return report


def _homology_reps(C, field, k, t, dim_h):
    """Column vectors representing a basis of H_k at internal degree t."""
    sb = slice_basis(C.module(k), t)
    if k - 1 >= C.lo and C.module(k - 1).rank:
        dk, _, _ = graded_slice(C.diff(k), t, src_basis=sb)
        K = fieldla.nullspace(field, dk)
    else:
        K = fieldla.identity(field, len(sb))
    space = fieldla.ColumnSpace(field, len(sb))
    if k + 1 <= C.hi and C.module(k + 1).rank:
        B, _, _ = graded_slice(C.diff(k + 1), t, tgt_basis=sb)
        space.add_columns(B)
    reps = []
    for j in range(K.shape[1]):
        v = K[:, j]
        if space.add(v):
            reps.append(v)
        if len(reps) == dim_h:
            break
    if len(reps) != dim_h:
        raise RuntimeError("homology representative extraction mismatch")
    return reps, sb


def _annihilator_check(C, field, k, t, dim_h, f, fdeg) -> bool:
    """f * (every class at (k, t)) must be a boundary at t + deg f."""
    reps, sb = _homology_reps(C, field, k, t, dim_h)
    tb = slice_basis(C.module(k), t + fdeg)
    space = fieldla.ColumnSpace(field, len(tb))
    if k + 1 <= C.hi and C.module(k + 1).rank:
        B, _, _ = graded_slice(C.diff(k + 1), t + fdeg, tgt_basis=tb)
        space.add_columns(B)
    mult = multiplication_slice(C.module(k), f, t, src_basis=sb, tgt_basis=tb)
    for v in reps:
        image = mult @ v if fieldla.is_prime_field(field) else mult.dot(v)
        if not space.contains(image):
            return False
    return True


# --- Groebner homology engine ----------------------------------------------


def homology_groebner(C: ChainComplex, k: int) -> gb_mod.Presentation:
    """Presentation of H_k: kernel generators modulo lifted boundaries."""
    ring = C.ring
    module_k = C.module(k)
    if k <= C.lo:
        kernel = [
            {(i, (0,) * ring.nvars): ring.field.one} for i in range(module_k.rank)
        ]
    else:
        cols = [gb_mod.from_map_column(C.diff(k).col(j)) for j in range(module_k.rank)]
        kernel, _ = gb_mod.kernel_of_columns(cols, C.module(k - 1).rank, ring)
    gen_degs = tuple(_element_degree(module_k, v) for v in kernel)
    if not kernel:
        empty = gb_mod.buchberger([], 0, ring)
        pres = gb_mod.Presentation(0, empty, gen_degrees=())
        gb_mod.quotient_dim(pres)
        return pres
    gb_k = gb_mod.buchberger([dict(v) for v in kernel], module_k.rank, ring)
    relations = list(gb_k.input_syzygies)
    if k + 1 <= C.hi:
        for j in range(C.module(k + 1).rank):
            v = gb_mod.from_map_column(C.diff(k + 1).col(j))
            rem, expr = gb_mod.normal_form_with_cofactors(v, gb_k)
            if not gb_mod.elem_is_zero(rem):
                raise RuntimeError("boundary not contained in kernel: broken complex")
            if not gb_mod.elem_is_zero(expr):
                relations.append(expr)
    rel_gb = gb_mod.buchberger(relations, len(kernel), ring)
    pres = gb_mod.Presentation(len(kernel), rel_gb, gen_degrees=gen_degs)
    gb_mod.quotient_dim(pres)
    return pres


def _element_degree(module, v: dict) -> int:
    degs = {module.degrees[pos] + sum(mono) for (pos, mono) in v}
    return max(degs) if degs else 0


def homology_groebner_report(C: ChainComplex, t_max: int, annihilators=None) -> HomologyReport:
    """Groebner-engine report mirroring the graded report's shape."""
    ring = C.ring
    if annihilators is None:
        annihilators = list(ring.regular_sequence or [])
    report = HomologyReport(engine="groebner", t_max=t_max)
    for k in C.support():
        pres = homology_groebner(C, k)
        report.presentations[k] = pres
        deg = GradedDegree()
        dims = gb_mod.hilbert_dims(pres, t_max)
        deg.dims = {t: d for t, d in enumerate(dims) if d}
        deg.total = pres.dim if pres.finite else sum(dims)
        deg.stabilized = pres.finite
        for f in annihilators:
            deg.annihilator_ok[str(f)] = gb_mod.annihilates(pres, f)
        if pres.finite and all(deg.annihilator_ok.values()) and annihilators:
            deg.ri_rank = pres.dim
        report.degrees[k] = deg
    return report


def engines_agree(C: ChainComplex, t_max: int) -> bool:
    """Per-degree, per-internal-degree agreement of the two engines."""
    gr = homology_graded(C, t_max)
    go = homology_groebner_report(C, t_max)
    for k in C.support():
        a = gr.degrees.get(k, GradedDegree()).dims
        b = go.degrees.get(k, GradedDegree()).dims
        if {t: v for t, v in a.items() if v} != {t: v for t, v in b.items() if v}:
            return False
        pa = go.presentations[k]
        if pa.finite and pa.dim != gr.degrees[k].total:
            return False
    return True


# --- chain maps and quasi-isomorphisms --------------------------------------


class ChainMap:
    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict):
        self.source = source
        self.target = target
        self.maps = maps

    def map_at(self, n: int) -> MapMatrix:
        m = self.maps.get(n)
        if m is None:
            m = zero_map(self.source.module(n), self.target.module(n))
        return m

    def is_chain_map(self) -> bool:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            lhs = self.target.diff(n).compose(self.map_at(n))
            rhs = self.map_at(n - 1).compose(self.source.diff(n))
            if not lhs.equals(rhs):
                return False
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        maps = {}
        lo = min(self.source.lo, other.source.lo)
        hi = max(self.source.hi, other.source.hi)
        for n in range(lo, hi + 1):
            maps[n] = self.map_at(n).compose(other.map_at(n))
        return ChainMap(other.source, self.target, maps)


def is_quasi_iso(cm: ChainMap, t_max: int, k_max: int | None = None) -> bool:
    """Equal graded homology dims and induced bijections on every slice.

    ``k_max`` bounds the compared homological degrees; use it when the
    complexes are truncations whose top degree is an artifact.
    """
    field = cm.source.ring.field
    src, tgt = cm.source, cm.target
    hs = homology_graded(src, t_max, annihilators=[])
    ht = homology_graded(tgt, t_max, annihilators=[])
    ks = sorted(set(hs.degrees) | set(ht.degrees))
    if k_max is not None:
        ks = [k for k in ks if k <= k_max]
    for k in ks:
        a = hs.degrees.get(k, GradedDegree()).dims
        b = ht.degrees.get(k, GradedDegree()).dims
        if a != b:
            return False
    for k in ks:
        dims = hs.degrees.get(k, GradedDegree()).dims
        for t, dim_h in dims.items():
            sb_k = slice_basis(src.module(k), t)
            tb_k = slice_basis(tgt.module(k), t)
            dk_src, _, _ = graded_slice(src.diff(k), t, src_basis=sb_k)
            dk1_src, _, _ = graded_slice(src.diff(k + 1), t, tgt_basis=sb_k)
            dk1_tgt, _, _ = graded_slice(tgt.diff(k + 1), t, tgt_basis=tb_k)
            fmat, _, _ = graded_slice(cm.map_at(k), t, src_basis=sb_k, tgt_basis=tb_k)
            K = fieldla.nullspace(field, dk_src)
            space_src = fieldla.ColumnSpace(field, len(sb_k))
            space_src.add_columns(dk1_src)
            reps = [K[:, j] for j in range(K.shape[1]) if space_src.add(K[:, j])]
            space_tgt = fieldla.ColumnSpace(field, len(tb_k))
            space_tgt.add_columns(dk1_tgt)
            added = sum(bool(space_tgt.add(fmat @ rep if fieldla.is_prime_field(field) else fmat.dot(rep))) for rep in reps)
            if added != dim_h:
                return False
    return True
