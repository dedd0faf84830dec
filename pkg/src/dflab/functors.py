"""Polynomial functors on labeled free modules and their cross-effects.

Functor values carry canonical bases: monomials for Sym, strictly
increasing words for exterior powers, multisets for divided powers
(realized as the dual of Sym on the dual), pure tensors for tensor
powers, and standard tableaux (i^j)|k with i<j, i<=k for the shape
(2,1) Schur functor.  The Schur action straightens non-standard wedges
through the relation (a^b)|c = (a^c)|b - (b^c)|a for c < a < b, which
is the boundary of a^b^c.

Cross-effects are images of the inclusion-exclusion idempotent
sum_S (-1)^(k-|S|) F(p_S); diagonal and plus maps are computed inside
F(direct sum) and re-expressed in the chosen image bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations

from . import fieldla
from .linear import (
    LabeledFreeModule,
    MapMatrix,
    cosch,
    cr,
    direct_sum_modules,
    from_field_matrix,
    schur,
    sym,
    tens,
    tensor_modules,
    wedge,
)
from .linear import div as div_label


@dataclass(frozen=True)
class FunctorTag:
    kind: str  # sym | ext | div | tensor | schur | coschur
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if self.kind in ("schur", "coschur") and self.arity != 3:
            raise ValueError("Schur kinds are fixed at arity 3")


def Sym(l: int) -> FunctorTag:
    return FunctorTag("sym", l)


def Ext(l: int) -> FunctorTag:
    return FunctorTag("ext", l)


def Div(l: int) -> FunctorTag:
    return FunctorTag("div", l)


def TensorPow(l: int) -> FunctorTag:
    return FunctorTag("tensor", l)


SchurL31 = FunctorTag("schur", 3)
CoSchurL31 = FunctorTag("coschur", 3)


# --- modules ---------------------------------------------------------------


def sym_module(V: LabeledFreeModule, l: int) -> LabeledFreeModule:
    labs = [sym(c) for c in combinations_with_replacement(V.labels, l)]
    return LabeledFreeModule(V.ring, labs)


def ext_module(V: LabeledFreeModule, l: int) -> LabeledFreeModule:
    labs = [wedge(c)[1] for c in combinations(V.labels, l)]
    return LabeledFreeModule(V.ring, labs)


def div_module(V: LabeledFreeModule, l: int) -> LabeledFreeModule:
    labs = [div_label(c) for c in combinations_with_replacement(V.labels, l)]
    return LabeledFreeModule(V.ring, labs)


def tensor_power_module(V: LabeledFreeModule, l: int) -> LabeledFreeModule:
    return tensor_modules([V] * l)


def schur_module(V: LabeledFreeModule) -> LabeledFreeModule:
    labs = []
    n = V.rank
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(i, n):
                labs.append(schur(V.labels[i], V.labels[j], V.labels[k]))
    return LabeledFreeModule(V.ring, labs)


def coschur_module(V: LabeledFreeModule) -> LabeledFreeModule:
    labs = []
    n = V.rank
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(i, n):
                labs.append(cosch(V.labels[i], V.labels[j], V.labels[k]))
    return LabeledFreeModule(V.ring, labs)


def functor_module(tag: FunctorTag, V: LabeledFreeModule) -> LabeledFreeModule:
    if tag.kind == "sym":
        return sym_module(V, tag.arity)
    if tag.kind == "ext":
        return ext_module(V, tag.arity)
    if tag.kind == "div":
        return div_module(V, tag.arity)
    if tag.kind == "tensor":
        return tensor_power_module(V, tag.arity)
    if tag.kind == "schur":
        return schur_module(V)
    if tag.kind == "coschur":
        return coschur_module(V)
    raise ValueError(f"unknown functor tag {tag}")


# --- maps ------------------------------------------------------------------


def _sym_col(f: MapMatrix, tgt: LabeledFreeModule, parts) -> dict:
    """Expand the product of f-images of the multiset ``parts`` (indices)."""
    ring = f.source.ring
    combos = {(): ring.one()}
    for i in parts:
        new: dict = {}
        col = f.col(i)
        for partial, poly in combos.items():
            for r, q in col.items():
                key = tuple(sorted(partial + (r,)))
                prod = poly * q
                acc = new.get(key)
                new[key] = prod if acc is None else acc + prod
        combos = new
    out = {}
    for key, poly in combos.items():
        if poly.is_zero():
            continue
        label = sym(tuple(f.target.labels[r] for r in key))
        out[tgt.index(label)] = poly
    return out


def _ext_col(f: MapMatrix, tgt: LabeledFreeModule, parts) -> dict:
    ring = f.source.ring
    combos = {(): ring.one()}
    for i in parts:
        new: dict = {}
        col = f.col(i)
        for partial, poly in combos.items():
            for r, q in col.items():
                if r in partial:
                    continue
                pos = 0
                while pos < len(partial) and partial[pos] < r:
                    pos += 1
                sign = -1 if (len(partial) - pos) % 2 else 1
                key = partial[:pos] + (r,) + partial[pos:]
                prod = (poly * q).scale(sign)
                acc = new.get(key)
                new[key] = prod if acc is None else acc + prod
        combos = new
    out = {}
    for key, poly in combos.items():
        if poly.is_zero():
            continue
        label = wedge(tuple(f.target.labels[r] for r in key))[1]
        out[tgt.index(label)] = poly
    return out


def _schur_straighten(a: int, b: int, c: int):
    """Rewrite the class of (e_a ^ e_b) | e_c on standard tableaux (indices)."""
    if a == b:
        return []
    if a > b:
        return [(-coeff, t) for coeff, t in _schur_straighten(b, a, c)]
    if a <= c:
        return [(1, (a, b, c))]
    # c < a < b: subtract the boundary of c ^ a ^ b
    return [(-1, (c, a, b)), (1, (c, b, a))]


def _schur_col(f: MapMatrix, tgt: LabeledFreeModule, parts) -> dict:
    ring = f.source.ring
    i, j, k = parts
    out: dict = {}
    for r, q1 in f.col(i).items():
        for s, q2 in f.col(j).items():
            if r == s:
                continue
            for t, q3 in f.col(k).items():
                poly = q1 * q2 * q3
                for sign, (a, b, c) in _schur_straighten(r, s, t):
                    label = schur(
                        f.target.labels[a], f.target.labels[b], f.target.labels[c]
                    )
                    idx = tgt.index(label)
                    term = poly.scale(sign)
                    acc = out.get(idx)
                    out[idx] = term if acc is None else acc + term
    return {i2: q for i2, q in out.items() if not q.is_zero()}


def _transpose_plain(f: MapMatrix) -> MapMatrix:
    """Transpose with labels kept as-is (no dual wrapping)."""
    out: dict = {}
    for j in range(f.source.rank):
        for i, q in f.col(j).items():
            out.setdefault(i, {})[j] = q
    return MapMatrix(f.target, f.source, out)


def functor_on_map(tag: FunctorTag, f: MapMatrix) -> MapMatrix:
    """F(f) on the canonical bases; columns are lazily expanded."""
    src = functor_module(tag, f.source)
    tgt = functor_module(tag, f.target)
    if tag.kind == "tensor":
        return tensor_modules_map_power(f, tag.arity)
    if tag.kind == "sym":
        idx_parts = list(combinations_with_replacement(range(f.source.rank), tag.arity))

        def provider(j):
            return _sym_col(f, tgt, idx_parts[j])

        return MapMatrix(src, tgt, provider=provider)
    if tag.kind == "ext":
        idx_parts = list(combinations(range(f.source.rank), tag.arity))

        def provider(j):
            return _ext_col(f, tgt, idx_parts[j])

        return MapMatrix(src, tgt, provider=provider)
    if tag.kind == "schur":
        idx_parts = [
            (i, j, k)
            for i in range(f.source.rank)
            for j in range(i + 1, f.source.rank)
            for k in range(i, f.source.rank)
        ]

        def provider(j):
            return _schur_col(f, tgt, idx_parts[j])

        return MapMatrix(src, tgt, provider=provider)
    if tag.kind == "div":
        S = functor_on_map(Sym(tag.arity), _transpose_plain(f)).materialize()
        T = _transpose_plain(S)
        # relabel sym multisets as divided monomials on both sides
        return MapMatrix(src, tgt, {j: dict(T.col(j)) for j in range(src.rank)})
    if tag.kind == "coschur":
        S = functor_on_map(SchurL31, _transpose_plain(f)).materialize()
        T = _transpose_plain(S)
        return MapMatrix(src, tgt, {j: dict(T.col(j)) for j in range(src.rank)})
    raise ValueError(f"unknown functor tag {tag}")


def tensor_modules_map_power(f: MapMatrix, l: int) -> MapMatrix:
    from .linear import tensor_maps

    return tensor_maps([f] * l)


class ProductFunctor:
    """Tensor product of functors, e.g. V -> D^2(V) (x) V."""

    def __init__(self, tags):
        self.tags = list(tags)

    def module(self, V):
        return tensor_modules([functor_module(t, V) for t in self.tags])

    def on_map(self, f):
        from .linear import tensor_maps

        return tensor_maps([functor_on_map(t, f) for t in self.tags])


def _f_module(F, V):
    return functor_module(F, V) if isinstance(F, FunctorTag) else F.module(V)


def _f_map(F, f):
    return functor_on_map(F, f) if isinstance(F, FunctorTag) else F.on_map(f)


# --- cross-effects ----------------------------------------------------------


def _projection_onto(Vsum: LabeledFreeModule, keep: set) -> MapMatrix:
    cols = {}
    one = Vsum.ring.one()
    for j, lab in enumerate(Vsum.labels):
        if lab[1] in keep:
            cols[j] = {j: one}
    return MapMatrix(Vsum, Vsum, cols)


@dataclass
class CrossEffect:
    module: LabeledFreeModule
    inclusion: MapMatrix  # into F(sum of arguments)
    ambient: LabeledFreeModule
    pivot_cols: list


def cross_effect(tag: FunctorTag, args, ring=None) -> CrossEffect:
    """Image of the cross-effect idempotent, basis = pivot columns.

    args: list of LabeledFreeModule over a plain field ring.
    """
    k = len(args)
    ring = ring or args[0].ring
    if ring.nvars != 0:
        raise ValueError("cross-effects are computed over a plain field ring")
    Vsum = direct_sum_modules(args)
    FV = _f_module(tag, Vsum)
    field = ring.field
    total = fieldla.zeros(field, FV.rank, FV.rank)
    for size in range(1, k + 1):
        sign = (-1) ** (k - size)
        for subset in combinations(range(k), size):
            pS = _projection_onto(Vsum, set(subset))
            FpS = _f_map(tag, pS).materialize()
            M = FpS.to_field_matrix()
            total = total + (M if sign > 0 else -M)
    if fieldla.is_prime_field(field):
        total = total % field.p
    r, pivcols, _ = fieldla._echelon(field, total)
    basis_labels = [cr(FV.labels[j]) for j in pivcols]
    module = LabeledFreeModule(ring, basis_labels)
    incl_matrix = total[:, pivcols] if pivcols else fieldla.zeros(field, FV.rank, 0)
    inclusion = from_field_matrix(module, FV, incl_matrix)
    return CrossEffect(module, inclusion, FV, list(pivcols))


def _idempotent_matrix(tag, Vsum, k_args, field):
    FV = _f_module(tag, Vsum)
    total = fieldla.zeros(field, FV.rank, FV.rank)
    k = len(k_args)
    for size in range(1, k + 1):
        sign = (-1) ** (k - size)
        for subset in combinations(range(k), size):
            pS = _projection_onto(Vsum, set(subset))
            M = _f_map(tag, pS).materialize().to_field_matrix()
            total = total + (M if sign > 0 else -M)
    if fieldla.is_prime_field(field):
        total = total % field.p
    return FV, total


def delta_map(tag: FunctorTag, eps, args):
    """Diagonal map cr_k(F)(V_1..V_k) -> cr_l(F)(V_1,..,V_1,..,V_k,..,V_k).

    eps: tuple of positive multiplicities, sum = l.
    """
    _check_eps(eps)
    ring = args[0].ring
    field = ring.field
    crA = cross_effect(tag, args)
    rep_args = [args[i] for i, e in enumerate(eps) for _ in range(e)]
    crB = cross_effect(tag, rep_args)
    Asum = direct_sum_modules(args)
    Bsum = direct_sum_modules(rep_args)
    # diagonal V_i -> V_i^{eps_i}
    cols: dict = {}
    one = ring.one()
    flat = []
    for i, e in enumerate(eps):
        for c in range(e):
            flat.append(i)
    for j, lab in enumerate(Asum.labels):
        i, inner = lab[1], lab[2]
        col = {}
        for b, i_src in enumerate(flat):
            if i_src == i:
                col[Bsum.index((lab[0], b, inner))] = one
        cols[j] = col
    diag = MapMatrix(Asum, Bsum, cols)
    Fdiag = _f_map(tag, diag).materialize().to_field_matrix()
    eB = _cross_idempotent(tag, rep_args, field)
    incl_A = crA.inclusion.to_field_matrix()
    image = fieldla.matmul(field, eB, fieldla.matmul(field, Fdiag, incl_A))
    incl_B = crB.inclusion.to_field_matrix()
    X = fieldla.solve_columns(field, incl_B, image)
    if X is None:
        raise RuntimeError("diagonal map does not land in the cross-effect")
    return from_field_matrix(crA.module, crB.module, X), crA, crB


def plus_map(tag: FunctorTag, eps, args):
    """Plus map cr_l(F)(repeats) -> cr_k(F)(V_1..V_k)."""
    _check_eps(eps)
    ring = args[0].ring
    field = ring.field
    crA = cross_effect(tag, args)
    rep_args = [args[i] for i, e in enumerate(eps) for _ in range(e)]
    crB = cross_effect(tag, rep_args)
    Asum = direct_sum_modules(args)
    Bsum = direct_sum_modules(rep_args)
    flat = []
    for i, e in enumerate(eps):
        for c in range(e):
            flat.append(i)
    one = ring.one()
    cols = {}
    for j, lab in enumerate(Bsum.labels):
        b, inner = lab[1], lab[2]
        cols[j] = {Asum.index((lab[0], flat[b], inner)): one}
    fold = MapMatrix(Bsum, Asum, cols)
    Ffold = _f_map(tag, fold).materialize().to_field_matrix()
    eA = _cross_idempotent(tag, args, field)
    incl_B = crB.inclusion.to_field_matrix()
    image = fieldla.matmul(field, eA, fieldla.matmul(field, Ffold, incl_B))
    incl_A = crA.inclusion.to_field_matrix()
    X = fieldla.solve_columns(field, incl_A, image)
    if X is None:
        raise RuntimeError("plus map does not land in the cross-effect")
    return from_field_matrix(crB.module, crA.module, X), crB, crA


def _cross_idempotent(tag, args, field):
    Vsum = direct_sum_modules(args)
    _, total = _idempotent_matrix(tag, Vsum, args, field)
    return total


def _check_eps(eps):
    if any(e < 1 for e in eps):
        raise ValueError("epsilon entries must be positive")


# --- Cauchy filtration maps --------------------------------------------------


def cauchy_det_map(P: LabeledFreeModule, Q: LabeledFreeModule) -> MapMatrix:
    """Lambda^3 P (x) Lambda^3 Q -> Sym^3(P (x) Q), the 3x3 determinant."""
    ring = P.ring
    src = tensor_modules([ext_module(P, 3), ext_module(Q, 3)])
    PQ = tensor_modules([P, Q])
    tgt = sym_module(PQ, 3)
    p_triples = list(combinations(range(P.rank), 3))
    q_triples = list(combinations(range(Q.rank), 3))
    one = ring.one()

    def provider(j):
        pi = p_triples[j // len(q_triples)]
        qi = q_triples[j % len(q_triples)]
        out: dict = {}
        for perm in permutations(range(3)):
            sign = _perm_sign(perm)
            pairs = [
                tens((P.labels[pi[t]], Q.labels[qi[perm[t]]])) for t in range(3)
            ]
            label = sym(tuple(pairs))
            idx = tgt.index(label)
            coeff = one.scale(sign)
            acc = out.get(idx)
            out[idx] = coeff if acc is None else acc + coeff
        return {i: q for i, q in out.items() if not q.is_zero()}

    return MapMatrix(src, tgt, provider=provider)


def cauchy_m21_map(P: LabeledFreeModule, Q: LabeledFreeModule) -> MapMatrix:
    """Lambda^2 P (x) P (x) Lambda^2 Q (x) Q -> Sym^3(P (x) Q).

    (p1^p2, p3, q1^q2, q3) goes to the 2x2 minor on (p1,p2|q1,q2) times
    the pair (p3,q3).
    """
    ring = P.ring
    src = tensor_modules([ext_module(P, 2), P, ext_module(Q, 2), Q])
    PQ = tensor_modules([P, Q])
    tgt = sym_module(PQ, 3)
    p_pairs = list(combinations(range(P.rank), 2))
    q_pairs = list(combinations(range(Q.rank), 2))
    one = ring.one()
    dims = (len(p_pairs), P.rank, len(q_pairs), Q.rank)

    def provider(j):
        rem = j
        qi3 = rem % dims[3]; rem //= dims[3]
        qpair = q_pairs[rem % dims[2]]; rem //= dims[2]
        pi3 = rem % dims[1]; rem //= dims[1]
        ppair = p_pairs[rem]
        (p1, p2), (q1, q2) = ppair, qpair
        out: dict = {}
        third = tens((P.labels[pi3], Q.labels[qi3]))
        for sign, (qa, qb) in ((1, (q1, q2)), (-1, (q2, q1))):
            pairs = (
                tens((P.labels[p1], Q.labels[qa])),
                tens((P.labels[p2], Q.labels[qb])),
                third,
            )
            idx = tgt.index(sym(pairs))
            coeff = one.scale(sign)
            acc = out.get(idx)
            out[idx] = coeff if acc is None else acc + coeff
        return {i: q for i, q in out.items() if not q.is_zero()}

    return MapMatrix(src, tgt, provider=provider)


def _perm_sign(perm) -> int:
    inv = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inv % 2 else 1
