"""Labeled free modules and sparse matrices over a ring descriptor.

Basis labels are immutable tagged trees (plain nested tuples), so they
hash and compare cheaply.  Every constructed module carries internal
degrees on its labels; with a homogeneous regular sequence this makes
every differential in the pipelines homogeneous of internal degree 0,
which is what validates the graded homology engine.

The label order is the structural recursive order of ``label_key``; it
is fixed once and used for all tie-breaking (wedge normalization,
multiset sorting, slice ordering).
"""

from __future__ import annotations

from . import fieldla
from .ring import Poly, RingDescriptor, monomial_key, monomial_mul, monomials_of_degree

# --- labels --------------------------------------------------------------

ATOM, GAM, TENS, SYM, WEDGE, DIV, SCHUR, COSCH, DUAL, SMD, CR = range(11)

_degree_cache: dict = {}
_key_cache: dict = {}


def atom(name: str, degree: int = 0):
    return (ATOM, name, degree)


def gam(jumps: tuple, inner):
    """Basis copy label inside a Dold-Puppe level, indexed by jump set."""
    return (GAM, tuple(jumps), inner)


def tens(parts: tuple):
    return (TENS, tuple(parts))


def sym(parts) -> tuple:
    return (SYM, tuple(sorted(parts, key=label_key)))


def wedge(parts):
    """Strictly increasing wedge label, or (sign, label); None if degenerate."""
    parts = tuple(parts)
    order = sorted(range(len(parts)), key=lambda i: label_key(parts[i]))
    sorted_parts = tuple(parts[i] for i in order)
    for a, b in zip(sorted_parts, sorted_parts[1:]):
        if a == b:
            return None
    inversions = sum(
        1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j]
    )
    sign = -1 if inversions % 2 else 1
    return sign, (WEDGE, sorted_parts)


def div(parts) -> tuple:
    return (DIV, tuple(sorted(parts, key=label_key)))


def schur(a, b, c):
    return (SCHUR, a, b, c)


def cosch(a, b, c):
    return (COSCH, a, b, c)


def dual(label):
    if label[0] == DUAL:
        return label[1]
    return (DUAL, label)


def smd(i: int, label):
    return (SMD, i, label)


def cr(label):
    return (CR, label)


def label_key(label):
    k = _key_cache.get(label)
    if k is not None:
        return k
    kind = label[0]
    if kind == ATOM:
        k = (ATOM, label[1], label[2])
    elif kind == GAM:
        k = (GAM, len(label[1]), label[1], label_key(label[2]))
    elif kind in (TENS, SYM, WEDGE, DIV):
        k = (kind, tuple(label_key(x) for x in label[1]))
    elif kind in (SCHUR, COSCH):
        k = (kind, label_key(label[1]), label_key(label[2]), label_key(label[3]))
    elif kind == DUAL:
        k = (DUAL, label_key(label[1]))
    elif kind == SMD:
        k = (SMD, label[1], label_key(label[2]))
    elif kind == CR:
        k = (CR, label_key(label[1]))
    else:
        raise ValueError(f"unknown label {label!r}")
    _key_cache[label] = k
    return k


def label_degree(label) -> int:
    d = _degree_cache.get(label)
    if d is not None:
        return d
    kind = label[0]
    if kind == ATOM:
        d = label[2]
    elif kind == GAM:
        d = label_degree(label[2])
    elif kind in (TENS, SYM, WEDGE, DIV):
        d = sum(label_degree(x) for x in label[1])
    elif kind in (SCHUR, COSCH):
        d = label_degree(label[1]) + label_degree(label[2]) + label_degree(label[3])
    elif kind == DUAL:
        d = -label_degree(label[1])
    elif kind in (SMD, CR):
        d = label_degree(label[2] if kind == SMD else label[1])
    else:
        raise ValueError(f"unknown label {label!r}")
    _degree_cache[label] = d
    return d


def label_str(label) -> str:
    kind = label[0]
    if kind == ATOM:
        return label[1]
    if kind == GAM:
        return f"g{list(label[1])}[{label_str(label[2])}]"
    if kind == TENS:
        return "(" + "@".join(label_str(x) for x in label[1]) + ")"
    if kind == SYM:
        return "s(" + "·".join(label_str(x) for x in label[1]) + ")"
    if kind == WEDGE:
        return "w(" + "^".join(label_str(x) for x in label[1]) + ")"
    if kind == DIV:
        return "d(" + "·".join(label_str(x) for x in label[1]) + ")"
    if kind in (SCHUR, COSCH):
        tag = "L" if kind == SCHUR else "coL"
        return f"{tag}({label_str(label[1])}^{label_str(label[2])}|{label_str(label[3])})"
    if kind == DUAL:
        return label_str(label[1]) + "*"
    if kind == SMD:
        return f"[{label[1]}]{label_str(label[2])}"
    if kind == CR:
        return "cr:" + label_str(label[1])
    return repr(label)


# --- modules -------------------------------------------------------------


class LabeledFreeModule:
    """Finite free module with an ordered, internally graded basis."""

    __slots__ = ("ring", "labels", "_index", "degrees")

    def __init__(self, ring: RingDescriptor, labels):
        self.ring = ring
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.degrees = tuple(label_degree(lab) for lab in self.labels)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def __eq__(self, other):
        return (
            isinstance(other, LabeledFreeModule)
            and self.ring.compatible(other.ring)
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"FreeModule(rank {self.rank})"


def tensor_modules(mods) -> LabeledFreeModule:
    """Flat tensor product; labels are tens() words, rightmost fastest."""
    ring = mods[0].ring
    labels = [()]
    for m in mods:
        labels = [prev + (lab,) for prev in labels for lab in m.labels]
    return LabeledFreeModule(ring, [tens(w) for w in labels])


def direct_sum_modules(mods) -> LabeledFreeModule:
    ring = mods[0].ring
    labels = [smd(i, lab) for i, m in enumerate(mods) for lab in m.labels]
    return LabeledFreeModule(ring, labels)


# --- matrices ------------------------------------------------------------


class MapMatrix:
    """Sparse column-major matrix between labeled free modules.

    Columns may be backed by a provider function and are cached on
    first access, so functor images of huge face matrices never have to
    materialize fully.
    """

    __slots__ = ("source", "target", "_cols", "_provider")

    def __init__(self, source, target, cols=None, provider=None):
        self.source = source
        self.target = target
        self._cols = {} if cols is None else cols
        self._provider = provider

    @classmethod
    def from_entries(cls, source, target, entries):
        """entries: iterable of (row, col, Poly)."""
        cols: dict = {}
        for i, j, poly in entries:
            if not poly.is_zero():
                col = cols.setdefault(j, {})
                col[i] = col.get(i, source.ring.zero()) + poly
        for j in list(cols):
            cols[j] = {i: q for i, q in cols[j].items() if not q.is_zero()}
            if not cols[j]:
                del cols[j]
        return cls(source, target, cols)

    def col(self, j: int) -> dict:
        c = self._cols.get(j)
        if c is None:
            if self._provider is not None:
                c = self._provider(j)
                c = {i: q for i, q in c.items() if not q.is_zero()}
                self._cols[j] = c
            else:
                c = self._cols[j] = {}
        return c

    def materialize(self) -> "MapMatrix":
        for j in range(self.source.rank):
            self.col(j)
        self._provider = None
        return self

    def entries(self):
        for j in range(self.source.rank):
            for i, q in self.col(j).items():
                yield i, j, q

    def is_zero(self) -> bool:
        return all(not self.col(j) for j in range(self.source.rank))

    def equals(self, other: "MapMatrix") -> bool:
        if self.source.labels != other.source.labels or self.target.labels != other.target.labels:
            return False
        return all(self.col(j) == other.col(j) for j in range(self.source.rank))

    def is_homogeneous(self) -> bool:
        """Entry degrees satisfy deg(target) + deg(entry) = deg(source)."""
        sdeg, tdeg = self.source.degrees, self.target.degrees
        for j in range(self.source.rank):
            for i, q in self.col(j).items():
                if not q.is_homogeneous() or q.degree() != sdeg[j] - tdeg[i]:
                    return False
        return True

    # algebra ------------------------------------------------------------

    def compose(self, f: "MapMatrix") -> "MapMatrix":
        """self ∘ f (apply f first)."""
        if f.target.labels != self.source.labels:
            raise ValueError("shape mismatch in compose")

        def provider(j, f=f, g=self):
            out: dict = {}
            ring = g.target.ring
            for i, q in f.col(j).items():
                for k, r in g.col(i).items():
                    prod = r * q
                    acc = out.get(k)
                    out[k] = prod if acc is None else acc + prod
            return out

        return MapMatrix(f.source, self.target, provider=provider).materialize()

    def __add__(self, other: "MapMatrix") -> "MapMatrix":
        cols: dict = {}
        for j in range(self.source.rank):
            col = dict(self.col(j))
            for i, q in other.col(j).items():
                acc = col.get(i)
                col[i] = q if acc is None else acc + q
            col = {i: q for i, q in col.items() if not q.is_zero()}
            if col:
                cols[j] = col
        return MapMatrix(self.source, self.target, cols)

    def scale(self, c) -> "MapMatrix":
        cols = {}
        for j in range(self.source.rank):
            col = {i: q.scale(c) for i, q in self.col(j).items()}
            col = {i: q for i, q in col.items() if not q.is_zero()}
            if col:
                cols[j] = col
        return MapMatrix(self.source, self.target, cols)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def transpose_raw(self, new_source, new_target) -> "MapMatrix":
        """Transpose entries onto the given relabeled modules."""
        out = MapMatrix(new_source, new_target, {})
        for j in range(self.source.rank):
            for i, q in self.col(j).items():
                out._cols.setdefault(i, {})[j] = q
        return out

    def to_field_matrix(self):
        """Dense coefficient matrix; requires a variable-free ring."""
        ring = self.source.ring
        if ring.nvars != 0:
            raise ValueError("to_field_matrix needs a plain field ring")
        M = fieldla.zeros(ring.field, self.target.rank, self.source.rank)
        for j in range(self.source.rank):
            for i, q in self.col(j).items():
                if q.terms:
                    M[i, j] = q.terms[()]
        return M


def identity_map(module: LabeledFreeModule) -> MapMatrix:
    one = module.ring.one()
    return MapMatrix(module, module, {j: {j: one} for j in range(module.rank)})


def zero_map(source, target) -> MapMatrix:
    return MapMatrix(source, target, {})


def from_field_matrix(source, target, M) -> MapMatrix:
    ring = source.ring
    cols: dict = {}
    for j in range(source.rank):
        col = {}
        for i in range(target.rank):
            if M[i, j] != 0:
                col[i] = ring.const(M[i, j])
        if col:
            cols[j] = col
    return MapMatrix(source, target, cols)


def compose(g: MapMatrix, f: MapMatrix) -> MapMatrix:
    return g.compose(f)


def tensor_maps(maps) -> MapMatrix:
    """Kronecker product over a flat list of maps, labels tens() words."""
    src = tensor_modules([f.source for f in maps])
    tgt = tensor_modules([f.target for f in maps])
    tgt_ranks = [f.target.rank for f in maps]

    def provider(j, maps=maps, tgt_ranks=tgt_ranks):
        idx = []
        rem = j
        for f in reversed(maps):
            idx.append(rem % f.source.rank)
            rem //= f.source.rank
        idx.reverse()
        parts = [[(i, q) for i, q in f.col(jj).items()] for f, jj in zip(maps, idx)]
        out: dict = {}
        combos = [((), None)]
        for part in parts:
            new = []
            for rows, poly in combos:
                for i, q in part:
                    new.append((rows + (i,), q if poly is None else poly * q))
            combos = new
        for rows, poly in combos:
            if poly is None or poly.is_zero():
                continue
            flat = 0
            for r, rk in zip(rows, tgt_ranks):
                flat = flat * rk + r
            acc = out.get(flat)
            out[flat] = poly if acc is None else acc + poly
        return out

    return MapMatrix(src, tgt, provider=provider)


def tensor(f: MapMatrix, g: MapMatrix) -> MapMatrix:
    return tensor_maps([f, g])


def dual_module(module: LabeledFreeModule) -> LabeledFreeModule:
    return LabeledFreeModule(module.ring, [dual(lab) for lab in module.labels])


def dual_map(f: MapMatrix) -> MapMatrix:
    """Transpose onto dual labels; dual(dual(f)) == f on the nose."""
    return f.transpose_raw(dual_module(f.target), dual_module(f.source))


# --- graded slices -------------------------------------------------------


def slice_basis(module: LabeledFreeModule, t: int):
    """(label index, monomial) pairs of internal degree t, in label order
    then decreasing monomial order."""
    ring = module.ring
    out = []
    for i, d in enumerate(module.degrees):
        monos = monomials_of_degree(ring.nvars, t - d)
        monos.sort(key=lambda m: monomial_key(m, ring.order), reverse=True)
        out.extend((i, m) for m in monos)
    return out


def slice_positions(basis):
    return {pair: pos for pos, pair in enumerate(basis)}


def graded_slice(f: MapMatrix, t: int, src_basis=None, tgt_basis=None):
    """Field matrix of f restricted to internal degree t.

    Returns (matrix, tgt_basis, src_basis); requires f homogeneous (the
    caller certifies via is_homogeneous, not re-checked here).
    """
    ring = f.source.ring
    field = ring.field
    if src_basis is None:
        src_basis = slice_basis(f.source, t)
    if tgt_basis is None:
        tgt_basis = slice_basis(f.target, t)
    pos = slice_positions(tgt_basis)
    M = fieldla.zeros(field, len(tgt_basis), len(src_basis))
    for cpos, (j, mono) in enumerate(src_basis):
        for i, q in f.col(j).items():
            for mterm, coeff in q.terms.items():
                key = (i, monomial_mul(mono, mterm))
                rpos = pos.get(key)
                if rpos is None:
                    raise ValueError("non-homogeneous entry hit a missing slice row")
                M[rpos, cpos] = field.add(M[rpos, cpos], coeff)
    return M, tgt_basis, src_basis


def multiplication_slice(module: LabeledFreeModule, poly: Poly, t: int, src_basis=None, tgt_basis=None):
    """Matrix of multiplication by a homogeneous poly from slice t to t+deg."""
    ring = module.ring
    field = ring.field
    d = poly.degree()
    if src_basis is None:
        src_basis = slice_basis(module, t)
    if tgt_basis is None:
        tgt_basis = slice_basis(module, t + d)
    pos = slice_positions(tgt_basis)
    M = fieldla.zeros(field, len(tgt_basis), len(src_basis))
    for cpos, (i, mono) in enumerate(src_basis):
        for mterm, coeff in poly.terms.items():
            rpos = pos[(i, monomial_mul(mono, mterm))]
            M[rpos, cpos] = field.add(M[rpos, cpos], coeff)
    return M


def slice_vector_of(module, vec_col: dict, t: int, basis=None):
    """Coefficient column of a degree-t element given as {row: Poly}."""
    ring = module.ring
    if basis is None:
        basis = slice_basis(module, t)
    pos = slice_positions(basis)
    v = fieldla.zeros(ring.field, len(basis), 1)
    for i, q in vec_col.items():
        for mono, coeff in q.terms.items():
            v[pos[(i, mono)], 0] = ring.field.add(v[pos[(i, mono)], 0], coeff)
    return v
