"""Truncated simplicial modules and the Dold-Kan machinery.

The level-building functor sends a nonnegatively supported complex C to
the simplicial module whose level n is one copy of C_k for every
weakly monotone surjection [n] ->> [k] (stored by its jump set).  A
monotone operator acts on the copy indexed by s through the epi-monic
factorization of s composed with the operator: identity when the monic
part is the identity, the differential of C when the monic part omits
the bottom element 0, zero otherwise.  With the bottom-omission
convention the normalized complex of the construction IS C, with
identity matrices, which the test suite pins down.

Normalization uses the quotient model: levels are cut down to the
non-degenerate coordinates (degeneracies here are signed basis
injections, which the builders preserve), and the differential is the
alternating face sum followed by deletion of degenerate coordinates.
"""

from __future__ import annotations

from itertools import combinations

from . import fieldla
from .complexes import ChainComplex, ChainMap, total_complex_many, truncate
from .functors import FunctorTag, functor_module, functor_on_map
from .linear import (
    LabeledFreeModule,
    MapMatrix,
    from_field_matrix,
    gam,
    identity_map,
    label_key,
    tens,
    tensor_maps,
    tensor_modules,
    zero_map,
)


class SimplicialModule:
    """Degreewise free modules with faces and degeneracies up to n_max."""

    def __init__(self, ring, n_max: int, levels: dict, faces: dict, degeneracies: dict):
        self.ring = ring
        self.n_max = n_max
        self.levels = levels
        self.faces = faces  # (n, i): level n -> n-1
        self.degeneracies = degeneracies  # (n, j): level n -> n+1

    def level(self, n: int) -> LabeledFreeModule:
        return self.levels[n]

    def face(self, n: int, i: int) -> MapMatrix:
        return self.faces[(n, i)]

    def degeneracy(self, n: int, j: int) -> MapMatrix:
        return self.degeneracies[(n, j)]

    def validate(self, up_to: int | None = None) -> bool:
        """Check every simplicial identity inside the truncation window."""
        top = self.n_max if up_to is None else min(up_to, self.n_max)
        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.face(n - 1, i).compose(self.face(n, j))
                    rhs = self.face(n - 1, j - 1).compose(self.face(n, i))
                    if not lhs.equals(rhs):
                        return False
        for n in range(0, top - 1):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    lhs = self.degeneracy(n + 1, i).compose(self.degeneracy(n, j))
                    rhs = self.degeneracy(n + 1, j + 1).compose(self.degeneracy(n, i))
                    if not lhs.equals(rhs):
                        return False
        for n in range(0, top):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.face(n + 1, i).compose(self.degeneracy(n, j))
                    if i == j or i == j + 1:
                        ok = lhs.equals(identity_map(self.level(n)))
                    elif i < j:
                        ok = lhs.equals(self.degeneracy(n - 1, j - 1).compose(self.face(n, i)))
                    else:
                        ok = lhs.equals(self.degeneracy(n - 1, j).compose(self.face(n, i - 1)))
                    if not ok:
                        return False
        return True


# --- the level-building functor (complex -> simplicial) ---------------------


def _jumps_of(values) -> tuple:
    return tuple(t for t in range(len(values) - 1) if values[t + 1] > values[t])


def gamma(C: ChainComplex, n_max: int) -> SimplicialModule:
    """Simplicial module of the complex C, truncated at n_max."""
    if C.lo < 0:
        raise ValueError("complex must be supported in degrees >= 0")
    ring = C.ring
    degrees = [k for k in C.support() if C.module(k).rank > 0]
    levels = {}
    for n in range(n_max + 1):
        labels = []
        for k in degrees:
            if k > n:
                continue
            for J in combinations(range(n), k):
                labels.extend(gam(J, v) for v in C.module(k).labels)
        labels.sort(key=label_key)
        levels[n] = LabeledFreeModule(ring, labels)

    def structure_map(n: int, alpha_values) -> MapMatrix:
        """Matrix of the operator with the given composite values [m] -> [n]."""
        m = len(alpha_values) - 1
        src, tgt = levels[n], levels[m]
        cols = {}
        for cidx, lab in enumerate(src.labels):
            J, v = lab[1], lab[2]
            k = len(J)
            sigma = [0] * (n + 1)
            for t in range(1, n + 1):
                sigma[t] = sigma[t - 1] + (1 if (t - 1) in J else 0)
            tvals = [sigma[a] for a in alpha_values]
            image = sorted(set(tvals))
            col = {}
            if image == list(range(k + 1)):
                tj = _jumps_of(tvals)
                col[tgt.index(gam(tj, v))] = ring.one()
            elif k >= 1 and image == list(range(1, k + 1)):
                tj = _jumps_of(tvals)
                vidx = C.module(k).index(v)
                for w, poly in C.diff(k).col(vidx).items():
                    wl = C.module(k - 1).labels[w]
                    col[tgt.index(gam(tj, wl))] = poly
            if col:
                cols[cidx] = col
        return MapMatrix(src, tgt, cols)

    faces = {}
    degeneracies = {}
    for n in range(1, n_max + 1):
        for i in range(n + 1):
            vals = [t for t in range(n + 1) if t != i]
            faces[(n, i)] = structure_map(n, vals)
    for n in range(0, n_max):
        for j in range(n + 1):
            vals = list(range(j + 1)) + list(range(j, n + 1))
            degeneracies[(n, j)] = structure_map(n, vals)
    return SimplicialModule(ring, n_max, levels, faces, degeneracies)


# --- normalization -----------------------------------------------------------


class DegeneracyShapeError(ValueError):
    """A degeneracy column is not a signed basis injection."""


def degenerate_indices(A: SimplicialModule, n: int) -> set:
    """Rows of level n hit by some degeneracy; validates signed-monomial shape."""
    out = set()
    for j in range(n):
        s = A.degeneracy(n - 1, j)
        for c in range(A.level(n - 1).rank):
            col = s.col(c)
            if len(col) != 1:
                raise DegeneracyShapeError(f"degeneracy s_{j} at level {n-1} is not monomial")
            (row, poly), = col.items()
            c = poly.terms.get((0,) * A.ring.nvars)
            fld = A.ring.field
            if c not in (fld.one, fld.neg(fld.one)):
                raise DegeneracyShapeError("degeneracy entry is not +-1")
            out.add(row)
    return out


def normalize(A: SimplicialModule) -> ChainComplex:
    """Quotient of each level by the degenerate coordinates.

    Falls back to the kernel-model Moore complex over a plain field when
    the degeneracies are not signed basis injections; rejects that case
    over a polynomial ring.
    """
    try:
        nondeg = {}
        for n in range(A.n_max + 1):
            deg_rows = degenerate_indices(A, n) if n else set()
            nondeg[n] = [i for i in range(A.level(n).rank) if i not in deg_rows]
    except DegeneracyShapeError:
        if A.ring.nvars:
            raise
        return _moore_complex_field(A)
    ring = A.ring
    modules = {}
    for n, keep in nondeg.items():
        modules[n] = LabeledFreeModule(ring, [A.level(n).labels[i] for i in keep])
    diffs = {}
    for n in range(1, A.n_max + 1):
        if modules[n].rank == 0 or modules[n - 1].rank == 0:
            continue
        keep_src = nondeg[n]
        pos_of = {row: p for p, row in enumerate(nondeg[n - 1])}
        cols = {}
        for cpos, c in enumerate(keep_src):
            acc: dict = {}
            for i in range(n + 1):
                for row, poly in A.face(n, i).col(c).items():
                    p = pos_of.get(row)
                    if p is None:
                        continue
                    term = poly if i % 2 == 0 else -poly
                    cur = acc.get(p)
                    acc[p] = term if cur is None else cur + term
            acc = {p: q for p, q in acc.items() if not q.is_zero()}
            if acc:
                cols[cpos] = acc
        diffs[n] = MapMatrix(modules[n], modules[n - 1], cols)
    return ChainComplex(ring, modules, diffs)


def _moore_complex_field(A: SimplicialModule) -> ChainComplex:
    """Kernel-model Moore complex over a plain field: levels cap ker d_i, i>=1."""
    from .linear import atom

    ring = A.ring
    field = ring.field
    kernels = {}
    modules = {}
    for n in range(A.n_max + 1):
        lv = A.level(n)
        if n == 0:
            K = fieldla.identity(field, lv.rank)
        else:
            import numpy as np

            stacked = np.concatenate(
                [A.face(n, i).materialize().to_field_matrix() for i in range(1, n + 1)],
                axis=0,
            )
            K = fieldla.nullspace(field, stacked)
        kernels[n] = K
        modules[n] = LabeledFreeModule(
            ring, [atom(f"moore{n}_{t}", 0) for t in range(K.shape[1])]
        )
    diffs = {}
    for n in range(1, A.n_max + 1):
        if modules[n].rank == 0 or modules[n - 1].rank == 0:
            continue
        d0 = A.face(n, 0).materialize().to_field_matrix()
        img = fieldla.matmul(field, d0, kernels[n])
        X = fieldla.solve_columns(field, kernels[n - 1], img)
        if X is None:
            raise RuntimeError("Moore differential does not land in the Moore subspace")
        diffs[n] = from_field_matrix(modules[n], modules[n - 1], X)
    return ChainComplex(ring, modules, diffs)


# --- diagonal tensor and pointwise functors ---------------------------------


def diagonal_tensor(As) -> SimplicialModule:
    """Diagonal of the multi-simplicial tensor: level n is the tensor of
    the levels n, faces and degeneracies act factorwise."""
    n_max = As[0].n_max
    if any(A.n_max != n_max for A in As):
        raise ValueError("mismatched truncation degrees")
    ring = As[0].ring
    levels = {n: tensor_modules([A.level(n) for A in As]) for n in range(n_max + 1)}
    faces = {}
    degeneracies = {}
    for n in range(1, n_max + 1):
        for i in range(n + 1):
            faces[(n, i)] = tensor_maps([A.face(n, i) for A in As])
    for n in range(0, n_max):
        for j in range(n + 1):
            degeneracies[(n, j)] = tensor_maps([A.degeneracy(n, j) for A in As])
    return SimplicialModule(ring, n_max, levels, faces, degeneracies)


def apply_pointwise_functor(tag: FunctorTag, A: SimplicialModule) -> SimplicialModule:
    levels = {n: functor_module(tag, A.level(n)) for n in range(A.n_max + 1)}
    faces = {}
    degeneracies = {}
    for n in range(1, A.n_max + 1):
        for i in range(n + 1):
            faces[(n, i)] = functor_on_map(tag, A.face(n, i))
    for n in range(0, A.n_max):
        for j in range(n + 1):
            degeneracies[(n, j)] = functor_on_map(tag, A.degeneracy(n, j))
    return SimplicialModule(A.ring, A.n_max, levels, faces, degeneracies)


# --- Eilenberg-Zilber comparison maps ----------------------------------------


def _nondeg_positions(A: SimplicialModule, NA: ChainComplex, n: int) -> dict:
    """level-label index -> coordinate in NA_n (quotient model)."""
    lv = A.level(n)
    return {lv.index(lab): p for p, lab in enumerate(NA.module(n).labels)}


def _apply_degeneracies_label(A: SimplicialModule, level: int, idx: int, positions):
    """Apply degeneracies at ascending absolute positions to a basis label."""
    coeff = 1
    lv = level
    for pos in sorted(positions):
        col = A.degeneracy(lv, pos).col(idx)
        (row, poly), = col.items()
        c = poly.terms.get((0,) * A.ring.nvars)
        if c == A.ring.field.one:
            pass
        elif c == A.ring.field.neg(A.ring.field.one):
            coeff = -coeff
        else:
            raise DegeneracyShapeError("degeneracy entry is not +-1")
        idx = row
        lv += 1
    return idx, coeff


def _shuffle_sign(a_positions, b_positions) -> int:
    inv = sum(1 for s in b_positions for t in a_positions if s < t)
    return -1 if inv % 2 else 1


def shuffle_map(A: SimplicialModule, B: SimplicialModule):
    """Chain map Tot(NA (x) NB) -> N(diagonal of A (x) B) by shuffles.

    Returns (chain map, Tot complex, normalized diagonal complex).
    """
    NA, NB = normalize(A), normalize(B)
    D = diagonal_tensor([A, B])
    ND = normalize(D)
    tot = truncate(total_complex_many([NA, NB]), A.n_max)
    ring = A.ring
    maps = {}
    for n in range(0, min(tot.hi, A.n_max) + 1):
        src = tot.module(n)
        tgt = ND.module(n)
        if src.rank == 0 or tgt.rank == 0:
            maps[n] = zero_map(src, tgt)
            continue
        tgt_pos = {lab: p for p, lab in enumerate(tgt.labels)}
        cols = {}
        for cidx, lab in enumerate(src.labels):
            a_lab, b_lab = lab[1]
            p = _level_of(NA, a_lab)
            q = n - p
            a_idx = A.level(p).index(a_lab)
            b_idx = B.level(q).index(b_lab)
            col: dict = {}
            for b_pos in combinations(range(n), q):
                a_pos = tuple(t for t in range(n) if t not in b_pos)
                ia, ca = _apply_degeneracies_label(A, p, a_idx, b_pos)
                ib, cb = _apply_degeneracies_label(B, q, b_idx, a_pos)
                pair = tens((A.level(n).labels[ia], B.level(n).labels[ib]))
                tpos = tgt_pos.get(pair)
                if tpos is None:
                    continue
                sign = _shuffle_sign(a_pos, b_pos) * ca * cb
                coeff = ring.one().scale(sign)
                cur = col.get(tpos)
                col[tpos] = coeff if cur is None else cur + coeff
            col = {i: q2 for i, q2 in col.items() if not q2.is_zero()}
            if col:
                cols[cidx] = col
        maps[n] = MapMatrix(src, tgt, cols)
    return ChainMap(tot, ND, maps), tot, ND


def aw_map(A: SimplicialModule, B: SimplicialModule):
    """Chain map N(diagonal of A (x) B) -> Tot(NA (x) NB), front/back faces."""
    NA, NB = normalize(A), normalize(B)
    D = diagonal_tensor([A, B])
    ND = normalize(D)
    tot = truncate(total_complex_many([NA, NB]), A.n_max)
    ring = A.ring
    maps = {}
    for n in range(0, min(tot.hi, A.n_max) + 1):
        src = ND.module(n)
        tgt = tot.module(n)
        if src.rank == 0 or tgt.rank == 0:
            maps[n] = zero_map(src, tgt)
            continue
        tgt_pos = {lab: p for p, lab in enumerate(tgt.labels)}
        na_pos = {p2: _nondeg_positions(A, NA, p2) for p2 in range(n + 1)}
        nb_pos = {q2: _nondeg_positions(B, NB, q2) for q2 in range(n + 1)}
        cols = {}
        for cidx, lab in enumerate(src.labels):
            a_lab, b_lab = lab[1]
            col: dict = {}
            for p in range(n + 1):
                q = n - p
                va = {A.level(n).index(a_lab): ring.one()}
                for lv in range(n, p, -1):
                    va = _apply_face_vec(A, lv, lv, va)
                vb = {B.level(n).index(b_lab): ring.one()}
                for lv in range(n, q, -1):
                    vb = _apply_face_vec(B, lv, 0, vb)
                for ra, qa in va.items():
                    pa = na_pos[p].get(ra)
                    if pa is None:
                        continue
                    for rb, qb in vb.items():
                        pb = nb_pos[q].get(rb)
                        if pb is None:
                            continue
                        pair = tens((NA.module(p).labels[pa], NB.module(q).labels[pb]))
                        tpos = tgt_pos.get(pair)
                        if tpos is None:
                            continue
                        term = qa * qb
                        cur = col.get(tpos)
                        col[tpos] = term if cur is None else cur + term
            col = {i: q2 for i, q2 in col.items() if not q2.is_zero()}
            if col:
                cols[cidx] = col
        maps[n] = MapMatrix(src, tgt, cols)
    return ChainMap(ND, tot, maps), ND, tot


def _apply_face_vec(A: SimplicialModule, level: int, i: int, vec: dict) -> dict:
    out: dict = {}
    face = A.face(level, i)
    for idx, poly in vec.items():
        for row, q in face.col(idx).items():
            term = q * poly
            cur = out.get(row)
            out[row] = term if cur is None else cur + term
    return {r: q for r, q in out.items() if not q.is_zero()}


def _level_of(N: ChainComplex, lab) -> int:
    for n in N.support():
        if lab in N.module(n)._index:
            return n
    raise KeyError("label not found in normalized complex")


def tot_map_left(f: ChainMap, Z: ChainComplex, top: int | None = None) -> ChainMap:
    """Tot(f (x) id_Z): blockwise f_p (x) id on left-associated totals."""
    from .complexes import total_complex

    src = total_complex(f.source, Z)
    tgt = total_complex(f.target, Z)
    if top is not None:
        src, tgt = truncate(src, top), truncate(tgt, top)
    maps = {}
    for n in range(src.lo, src.hi + 1):
        S, T = src.module(n), tgt.module(n)
        if S.rank == 0 or T.rank == 0:
            maps[n] = zero_map(S, T)
            continue
        cols = {}
        for cidx, lab in enumerate(S.labels):
            xl, zl = lab[1]
            p = _level_of(f.source, xl)
            col = {}
            fp = f.map_at(p)
            xi = f.source.module(p).index(xl)
            for row, poly in fp.col(xi).items():
                ylab = f.target.module(p).labels[row]
                col[T.index(tens((ylab, zl)))] = poly
            if col:
                cols[cidx] = col
        maps[n] = MapMatrix(S, T, cols)
    return ChainMap(src, tgt, maps)


def shuffle_map_triple(A, B, C):
    """Iterated shuffle Tot(NA,NB,NC) -> N(diagonal of the nested product)."""
    sh1, tot1, nd1 = shuffle_map(A, B)
    D1 = diagonal_tensor([A, B])
    sh2, tot2, nd2 = shuffle_map(D1, C)
    NC = normalize(C)
    lift = tot_map_left(sh1, NC, top=A.n_max)
    return sh2.compose(lift), lift.source, nd2


def aw_map_triple(A, B, C):
    """Iterated front/back faces N(diagonal) -> Tot(NA,NB,NC)."""
    aw1, nd1, tot1 = aw_map(A, B)
    D1 = diagonal_tensor([A, B])
    aw2, nd2, tot2 = aw_map(D1, C)
    NC = normalize(C)
    push = tot_map_left(aw1, NC, top=A.n_max)
    return push.compose(aw2), nd2, push.target
