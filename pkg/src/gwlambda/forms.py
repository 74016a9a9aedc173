"""Nondegenerate symmetric bilinear forms over the model fields.

A form is carried by its Gram matrix.  The constructions here are the ones
needed to realize exterior-power operations on Witt-style invariants:
orthogonal sum, tensor product, exterior power, hyperbolic forms,
diagonalization, sub-Lagrangian reduction, and an explicit change-of-basis
witness identifying ``a + (-a)`` with a hyperbolic form.

Complete invariants per model (rank over qc; rank and signature over rc;
rank and signed discriminant over fq) are packaged as :class:`GWClass`,
with the induced virtual (formal-difference) ring structure.
"""

import itertools
import json

from .errors import DomainError, FormatError
from .fields import FieldModel, SquareClass, field_model


class GramForm:
    """A symmetric bilinear form with invertible Gram matrix.

    The zero-dimensional form (empty matrix) is allowed; it arises as the
    core of a metabolic form under sub-Lagrangian reduction.
    """

    __slots__ = ("field", "gram")

    def __init__(self, field, gram):
        gram = tuple(tuple(row) for row in gram)
        n = len(gram)
        for row in gram:
            if len(row) != n:
                raise DomainError("gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise DomainError("gram matrix is not symmetric")
        if n and field.is_zero(_det(field, gram)):
            raise DomainError("gram matrix is singular")
        self.field = field
        self.gram = gram

    @property
    def dim(self):
        return len(self.gram)

    def det(self):
        return _det(self.field, self.gram)

    def is_diagonal(self):
        return all(
            self.field.is_zero(self.gram[i][j])
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )

    def __eq__(self, other):
        """Literal equality of Gram matrices (not isometry)."""
        return (
            isinstance(other, GramForm)
            and self.field == other.field
            and self.gram == other.gram
        )

    def __hash__(self):
        return hash((self.field, self.gram))

    def __repr__(self):
        rows = "; ".join(
            ",".join(self.field.to_str(v) for v in row) for row in self.gram
        )
        return "GramForm(%s, [%s])" % (self.field.spec, rows)


def diagonal_form(field, entries):
    """The form <a1,...,an> with the given nonzero diagonal entries."""
    entries = list(entries)
    gram = [
        [entries[i] if i == j else field.zero for j in range(len(entries))]
        for i in range(len(entries))
    ]
    return GramForm(field, gram)


def _det(field, rows):
    """Determinant by Gaussian elimination with exact field arithmetic."""
    n = len(rows)
    if n == 0:
        return field.one
    if all(field.is_zero(rows[i][j]) for i in range(n) for j in range(n) if i != j):
        det = field.one
        for i in range(n):
            det = field.mul(det, rows[i][i])
        return det
    m = [list(row) for row in rows]
    det = field.one
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not field.is_zero(m[r][col]):
                pivot = r
                break
        if pivot is None:
            return field.zero
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = field.neg(det)
        det = field.mul(det, m[col][col])
        inv = field.inv(m[col][col])
        for r in range(col + 1, n):
            if field.is_zero(m[r][col]):
                continue
            f = field.mul(m[r][col], inv)
            for c in range(col, n):
                m[r][c] = field.sub(m[r][c], field.mul(f, m[col][c]))
    return det


# ---------------------------------------------------------------------------
# constructions


def perp_sum(a, b):
    """Orthogonal sum: block-diagonal Gram matrix."""
    if a.field != b.field:
        raise DomainError("orthogonal sum of forms over different fields")
    field = a.field
    n, m = a.dim, b.dim
    gram = [
        [
            a.gram[i][j]
            if i < n and j < n
            else (b.gram[i - n][j - n] if i >= n and j >= n else field.zero)
            for j in range(n + m)
        ]
        for i in range(n + m)
    ]
    return GramForm(field, gram)


def tensor(a, b):
    """Tensor product: Kronecker product of Gram matrices."""
    if a.field != b.field:
        raise DomainError("tensor product of forms over different fields")
    field = a.field
    n, m = a.dim, b.dim
    gram = [
        [
            field.mul(a.gram[i // m][j // m], b.gram[i % m][j % m])
            for j in range(n * m)
        ]
        for i in range(n * m)
    ]
    return GramForm(field, gram)


def exterior_power(a, k):
    """k-th exterior power, rows and columns indexed by k-subsets in lex order.

    The (I, J) entry is the k x k minor of the Gram matrix on rows I and
    columns J.  Lambda^0 is <1> and the top power is the determinant line.
    """
    if k < 0:
        raise DomainError("exterior power index must be >= 0")
    if k > a.dim:
        raise DomainError("exterior power index exceeds dimension")
    field = a.field
    if k == 0:
        return GramForm(field, [[field.one]])
    subsets = list(itertools.combinations(range(a.dim), k))
    if a.is_diagonal():
        # Off-diagonal minors of a diagonal matrix vanish.
        diag = []
        for idx in subsets:
            v = field.one
            for i in idx:
                v = field.mul(v, a.gram[i][i])
            diag.append(v)
        return diagonal_form(field, diag)
    gram = [
        [
            _det(field, [[a.gram[r][c] for c in cols] for r in rows])
            for cols in subsets
        ]
        for rows in subsets
    ]
    return GramForm(field, gram)


def hyperbolic(n, field):
    """The hyperbolic form on a rank-n summand and its dual: [[0, I], [I, 0]]."""
    if n < 1:
        raise DomainError("hyperbolic rank must be >= 1")
    gram = [
        [field.one if abs(i - j) == n else field.zero for j in range(2 * n)]
        for i in range(2 * n)
    ]
    return GramForm(field, gram)


def negate(a):
    """The form -a, with negated Gram matrix."""
    field = a.field
    return GramForm(field, [[field.neg(v) for v in row] for row in a.gram])


def diagonalize(a):
    """Diagonal entries of a congruent diagonal Gram matrix.

    Symmetric Gaussian elimination; when every remaining diagonal entry
    vanishes, a basis vector is replaced by its sum with a non-orthogonal
    one, which produces the nonzero diagonal value 2*g_ij (char != 2).
    """
    field = a.field
    n = a.dim
    g = [list(row) for row in a.gram]
    out = []
    for i in range(n):
        if field.is_zero(g[i][i]):
            swap = next(
                (j for j in range(i + 1, n) if not field.is_zero(g[j][j])), None
            )
            if swap is not None:
                for r in range(n):
                    g[r][i], g[r][swap] = g[r][swap], g[r][i]
                g[i], g[swap] = g[swap], g[i]
            else:
                j = next(
                    (j for j in range(i + 1, n) if not field.is_zero(g[i][j])), None
                )
                if j is None:
                    raise DomainError("gram matrix is singular")
                for r in range(n):
                    g[r][i] = field.add(g[r][i], g[r][j])
                for c in range(n):
                    g[i][c] = field.add(g[i][c], g[j][c])
        pivot = g[i][i]
        inv = field.inv(pivot)
        for j in range(i + 1, n):
            if field.is_zero(g[i][j]):
                continue
            f = field.mul(g[i][j], inv)
            for c in range(n):
                g[j][c] = field.sub(g[j][c], field.mul(f, g[i][c]))
            for r in range(n):
                g[r][j] = field.sub(g[r][j], field.mul(f, g[r][i]))
        out.append(pivot)
    return out


# ---------------------------------------------------------------------------
# classes (complete invariants per model)


class GWClass:
    """Isometry-class invariants of a (virtual) form over a model field.

    rank, signed discriminant, and (over rc) signature.  Equality uses the
    invariants that are complete for the model: rank (qc), rank and
    signature (rc), rank and signed discriminant (fq).  The signed
    discriminant is (-1)^(n(n-1)/2) det as a square class, which makes the
    hyperbolic class have trivial discriminant.
    """

    __slots__ = ("field", "rank", "disc", "signature")

    def __init__(self, field, rank, disc, signature=None):
        if not isinstance(disc, SquareClass) or disc.field != field:
            raise DomainError("discriminant must be a square class of the same field")
        if field.kind == "rc":
            if signature is None:
                raise DomainError("rc classes carry a signature")
            # Virtual classes may have |signature| > |rank|; only the
            # parity constraint survives in the Grothendieck group.
            if (rank - signature) % 2 != 0:
                raise DomainError("signature incompatible with rank")
        else:
            signature = None
        self.field = field
        self.rank = rank
        self.disc = disc
        self.signature = signature

    @classmethod
    def of_form(cls, a):
        """Invariants of an actual GramForm."""
        field = a.field
        n = a.dim
        if n == 0:
            return cls.zero(field)
        det = a.det()
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        disc = SquareClass(field, field.mul(field.from_int(sign), det))
        signature = None
        if field.kind == "rc":
            signature = sum(1 if d > 0 else -1 for d in diagonalize(a))
        return cls(field, n, disc, signature)

    @classmethod
    def zero(cls, field):
        one = SquareClass(field, field.one)
        return cls(field, 0, one, 0 if field.kind == "rc" else None)

    @classmethod
    def of_diagonal(cls, field, entries):
        """Invariants of <a1,...,an> without building the matrix."""
        out = cls.zero(field)
        for a in entries:
            sig = None
            if field.kind == "rc":
                sig = 1 if a > 0 else -1
            out = out + cls(field, 1, SquareClass(field, a), sig)
        return out

    def _sign_twist(self, other):
        # disc(a + b) = (-1)^(ra*rb) disc(a) disc(b)
        field = self.field
        sign = -1 if (self.rank * other.rank) % 2 else 1
        return SquareClass(field, field.from_int(sign))

    def __add__(self, other):
        self._check(other)
        disc = self._sign_twist(other) * self.disc * other.disc
        sig = None
        if self.field.kind == "rc":
            sig = self.signature + other.signature
        return GWClass(self.field, self.rank + other.rank, disc, sig)

    def __neg__(self):
        field = self.field
        sign = -1 if self.rank % 2 else 1
        disc = SquareClass(field, field.from_int(sign)) * self.disc
        sig = -self.signature if field.kind == "rc" else None
        return GWClass(field, -self.rank, disc, sig)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        field = self.field
        # disc(ab) = disc(a)^rank(b) * disc(b)^rank(a); the sign twist
        # exponent mn(m-1)(n-1)/2 is always even, so no extra sign.
        disc = SquareClass(field, field.one)
        if other.rank % 2:
            disc = disc * self.disc
        if self.rank % 2:
            disc = disc * other.disc
        sig = None
        if field.kind == "rc":
            sig = self.signature * other.signature
        return GWClass(field, self.rank * other.rank, disc, sig)

    def _check(self, other):
        if not isinstance(other, GWClass) or other.field != self.field:
            raise DomainError("class arithmetic over mismatched fields")

    def __eq__(self, other):
        if not isinstance(other, GWClass):
            return NotImplemented
        if other.field != self.field:
            raise DomainError("class comparison over mismatched fields")
        if self.rank != other.rank:
            return False
        kind = self.field.kind
        if kind == "qc":
            return True
        if kind == "rc":
            return self.signature == other.signature
        return self.disc == other.disc

    def __hash__(self):
        kind = self.field.kind
        if kind == "qc":
            return hash((self.field, self.rank))
        if kind == "rc":
            return hash((self.field, self.rank, self.signature))
        return hash((self.field, self.rank, self.disc))

    def __repr__(self):
        parts = ["rank=%d" % self.rank, "disc=%s" % self.field.to_str(self.disc.rep)]
        if self.signature is not None:
            parts.append("sig=%d" % self.signature)
        return "GWClass(%s, %s)" % (self.field.spec, ", ".join(parts))


def gw_class(a):
    """Complete invariants of a form, as a GWClass."""
    return GWClass.of_form(a)


# ---------------------------------------------------------------------------
# sub-Lagrangian reduction


def _rref(field, rows):
    """Row-reduce; returns (reduced rows, pivot column list)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(v, field.mul(f, w)) for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _kernel_basis(field, rows, ncols):
    """Basis of the right kernel of the given matrix."""
    reduced, pivots = _rref(field, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(reduced[r][fc])
        basis.append(v)
    return basis


def sublagrangian_reduce(a, vectors):
    """Quotient form on N-perp / N for a totally isotropic subspace N.

    ``vectors`` spans N and must be linearly independent; every pairing
    between spanning vectors must vanish.  Returns the induced form
    together with dim N.  The class of ``a`` equals the class of the
    reduced form plus the class of hyperbolic(dim N).
    """
    field = a.field
    n = a.dim
    vectors = [list(v) for v in vectors]
    if not vectors:
        raise DomainError("sub-Lagrangian must have rank >= 1")
    for v in vectors:
        if len(v) != n:
            raise DomainError("sub-Lagrangian vector has wrong length")
    _, pivots = _rref(field, vectors)
    if len(pivots) != len(vectors):
        raise DomainError("sub-Lagrangian basis is linearly dependent")

    def pair(u, v):
        s = field.zero
        for i in range(n):
            for j in range(n):
                s = field.add(s, field.mul(field.mul(u[i], a.gram[i][j]), v[j]))
        return s

    for i in range(len(vectors)):
        for j in range(i, len(vectors)):
            if not field.is_zero(pair(vectors[i], vectors[j])):
                raise DomainError("sub-Lagrangian is not totally isotropic")

    # N-perp is the kernel of v |-> (pairings with the spanning vectors).
    pairing_rows = [
        [
            sum_field(field, (field.mul(v[i], a.gram[i][j]) for i in range(n)))
            for j in range(n)
        ]
        for v in vectors
    ]
    perp = _kernel_basis(field, pairing_rows, n)

    # Extend the basis of N to a basis of N-perp; the added vectors span a
    # complement on which the induced form lives.
    chosen = [list(v) for v in vectors]
    complement = []
    for w in perp:
        _, piv = _rref(field, chosen + [w])
        if len(piv) > len(chosen):
            chosen.append(list(w))
            complement.append(w)
    gram = [[pair(u, v) for v in complement] for u in complement]
    return GramForm(field, gram), len(vectors)


def sum_field(field, items):
    s = field.zero
    for v in items:
        s = field.add(s, v)
    return s


# ---------------------------------------------------------------------------
# hyperbolic witness


def _inverse(field, rows):
    """Matrix inverse by Gauss-Jordan elimination."""
    n = len(rows)
    aug = [
        list(rows[i]) + [field.one if j == i else field.zero for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not field.is_zero(aug[r][col])), None
        )
        if piv is None:
            raise DomainError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = field.inv(aug[col][col])
        aug[col] = [field.mul(scale, v) for v in aug[col]]
        for r in range(n):
            if r != col and not field.is_zero(aug[r][col]):
                factor = aug[r][col]
                aug[r] = [
                    field.sub(v, field.mul(factor, w))
                    for v, w in zip(aug[r], aug[col])
                ]
    return [row[n:] for row in aug]


def hyperbolic_lemma_witness(a):
    """Change-of-basis matrix B with B^T * Gram(a perp -a) * B hyperbolic.

    In block form B = [[I, G^{-1}/2], [I, -G^{-1}/2]] with G the Gram
    matrix of a: the identity blocks fold the two copies diagonally and
    the inverse-symmetry blocks, scaled by 1/2, produce the dual half of
    the hyperbolic basis.  The identity is verified exactly before
    returning, so a returned matrix is always a valid witness.
    """
    field = a.field
    n = a.dim
    if n == 0:
        raise DomainError("witness needs a form of dimension >= 1")
    half = field.half
    ginv = _inverse(field, a.gram)
    b = [[field.zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        b[i][i] = field.one
        b[n + i][i] = field.one
        for j in range(n):
            v = field.mul(half, ginv[i][j])
            b[i][n + j] = v
            b[n + i][n + j] = field.neg(v)
    source = perp_sum(a, negate(a)).gram
    target = hyperbolic(n, field).gram
    got = tuple(tuple(row) for row in _congruence(field, source, b))
    if got != target:
        raise AssertionError("hyperbolic witness failed verification")
    return tuple(tuple(row) for row in b)


def _congruence(field, g, b):
    """B^T G B with exact arithmetic."""
    n = len(g)
    gb = [
        [sum_field(field, (field.mul(g[i][k], b[k][j]) for k in range(n))) for j in range(n)]
        for i in range(n)
    ]
    return [
        [sum_field(field, (field.mul(b[k][i], gb[k][j]) for k in range(n))) for j in range(n)]
        for i in range(n)
    ]


# ---------------------------------------------------------------------------
# exchange format


def form_record(a):
    """JSON-ready record for a form: field spec and Gram entries as strings."""
    return {
        "field": a.field.spec,
        "gram": [[a.field.to_str(v) for v in row] for row in a.gram],
    }


def parse_form(record):
    """Inverse of :func:`form_record`; diagnostics name the violated rule."""
    if not isinstance(record, dict):
        raise FormatError("form record must be an object")
    try:
        spec = record["field"]
        gram = record["gram"]
    except (KeyError, TypeError) as exc:
        raise FormatError("form record is missing field %s" % exc) from None
    field = field_model(spec)
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise FormatError("gram must be a 2-D array of strings")
    rows = [[field.parse(str(v)) for v in row] for row in gram]
    return GramForm(field, rows)


def load_form(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            record = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError("invalid JSON in %s: %s" % (path, exc)) from None
    return parse_form(record)
