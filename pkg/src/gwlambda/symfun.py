"""Symmetric polynomials over the integers and their elementary-basis form.

Polynomials live in one alphabet x1..xn or two alphabets x1..xn, y1..yn and
are stored sparsely as {exponent vector: coefficient}.  The fundamental
reduction rewrites a (bi)symmetric polynomial as a polynomial in the
elementary symmetric polynomials of each alphabet by repeatedly clearing
the lexicographic leading term.

On top of the reduction sit the two universal polynomial families that
control lambda-operations: the coefficient of T^k in

    prod_{i,j} (1 + x_i y_j T)        (products of line bundles), and
    prod_{i1<...<ij} (1 + x_{i1}...x_{ij} T)   (composition with lambda^j),

expressed in elementary symmetric variables.  Truncation degree k only
requires n = k (resp. n = k*j) variables; stability in n is a testable
property, not an assumption baked into the data structures.
"""

import itertools
import math
from functools import lru_cache

from .errors import DomainError, NotSymmetricError


def _strip(exps):
    """Drop trailing zeros so exponent keys compare across variable counts."""
    exps = tuple(exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


class SymPolynomial:
    """Integer polynomial in one or two alphabets of ``n_vars`` variables.

    ``terms`` maps combined exponent vectors (the x block followed by the
    y block when ``alphabets == 2``) to nonzero integer coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ("n_vars", "alphabets", "terms")

    def __init__(self, n_vars, terms, alphabets=1):
        if alphabets not in (1, 2):
            raise DomainError("alphabets must be 1 or 2")
        width = n_vars * alphabets
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != width:
                raise DomainError("exponent vector has wrong length")
            if any(e < 0 for e in exps):
                raise DomainError("exponents must be >= 0")
            if coeff:
                clean[exps] = coeff
        self.n_vars = n_vars
        self.alphabets = alphabets
        self.terms = clean

    def _split(self, exps):
        return exps[: self.n_vars], exps[self.n_vars :]

    def is_symmetric(self):
        """Invariance under adjacent transpositions within each alphabet."""
        n = self.n_vars
        for i in range(n - 1):
            for block in range(self.alphabets):
                a, b = block * n + i, block * n + i + 1
                for exps, coeff in self.terms.items():
                    swapped = list(exps)
                    swapped[a], swapped[b] = swapped[b], swapped[a]
                    if self.terms.get(tuple(swapped), 0) != coeff:
                        return False
        return True

    def __add__(self, other):
        self._compat(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, 0) + coeff
        return SymPolynomial(self.n_vars, terms, self.alphabets)

    def __neg__(self):
        return SymPolynomial(
            self.n_vars, {e: -c for e, c in self.terms.items()}, self.alphabets
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._compat(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, 0) + c1 * c2
        return SymPolynomial(self.n_vars, terms, self.alphabets)

    def _compat(self, other):
        if self.n_vars != other.n_vars or self.alphabets != other.alphabets:
            raise DomainError("polynomials over different variable sets")

    def __eq__(self, other):
        return (
            isinstance(other, SymPolynomial)
            and self.n_vars == other.n_vars
            and self.alphabets == other.alphabets
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n_vars, self.alphabets, frozenset(self.terms.items())))

    def __repr__(self):
        return "SymPolynomial(n=%d, alphabets=%d, %d terms)" % (
            self.n_vars,
            self.alphabets,
            len(self.terms),
        )


def elem_sym(n, i):
    """The elementary symmetric polynomial e_i of x1..xn."""
    if not 0 <= i <= n:
        raise DomainError("elem_sym needs 0 <= i <= n")
    return SymPolynomial(n, dict(_elem_sym_terms(n, i)))


@lru_cache(maxsize=None)
def _elem_sym_terms(n, i):
    terms = {}
    for subset in itertools.combinations(range(n), i):
        exps = [0] * n
        for v in subset:
            exps[v] = 1
        terms[tuple(exps)] = 1
    return tuple(terms.items())


class EPolynomial:
    """Integer polynomial in elementary symmetric variables.

    Variables are ex1, ex2, ... (and ey1, ey2, ... for two alphabets).
    Keys are pairs (x exponents, y exponents) with trailing zeros stripped,
    so the same polynomial built from different variable counts compares
    equal.  ``degree_bound`` records the largest usable e-index.
    """

    __slots__ = ("degree_bound", "alphabets", "terms")

    def __init__(self, degree_bound, terms, alphabets=1):
        if alphabets not in (1, 2):
            raise DomainError("alphabets must be 1 or 2")
        clean = {}
        for (ex, ey), coeff in terms.items():
            ex, ey = _strip(ex), _strip(ey)
            if ey and alphabets == 1:
                raise DomainError("y variables in a one-alphabet polynomial")
            if len(ex) > degree_bound or len(ey) > degree_bound:
                raise DomainError("e-variable index exceeds the degree bound")
            if coeff:
                clean[(ex, ey)] = clean.get((ex, ey), 0) + coeff
        self.degree_bound = degree_bound
        self.alphabets = alphabets
        self.terms = {k: v for k, v in clean.items() if v}

    def __eq__(self, other):
        """Equality of polynomials; the degree bound is not part of it."""
        return (
            isinstance(other, EPolynomial)
            and self.alphabets == other.alphabets
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alphabets, frozenset(self.terms.items())))

    def specialize(self, max_index):
        """Set every e-variable of index > max_index to zero."""
        kept = {
            key: c
            for key, c in self.terms.items()
            if len(key[0]) <= max_index and len(key[1]) <= max_index
        }
        return EPolynomial(min(self.degree_bound, max_index), kept, self.alphabets)

    def weighted_degrees(self):
        """Set of (x weight, y weight) with e_i carrying weight i."""
        return {
            (
                sum((i + 1) * e for i, e in enumerate(ex)),
                sum((i + 1) * e for i, e in enumerate(ey)),
            )
            for ex, ey in self.terms
        }

    def evaluate(self, xs, ys=(), one=1):
        """Substitute values for the e-variables; ``xs[i]`` stands for ex(i+1).

        Values may come from any commutative ring whose elements support
        ``+``, ``*`` and integer scalars via ``n * value``; ``one`` must be
        the ring unit.
        """
        xs, ys = list(xs), list(ys)
        total = 0 * one
        for (ex, ey), coeff in sorted(self.terms.items()):
            if len(ex) > len(xs) or len(ey) > len(ys):
                raise DomainError("not enough values for the e-variables used")
            term = one
            for i, e in enumerate(ex):
                for _ in range(e):
                    term = term * xs[i]
            for i, e in enumerate(ey):
                for _ in range(e):
                    term = term * ys[i]
            total = total + coeff * term
        return total

    def to_text(self):
        """Canonical text: descending lex on (x, y) exponents.

        Example: ``ex1^2*ey2 + ex2*ey1^2 - 2*ex2*ey2``.
        """
        if not self.terms:
            return "0"
        d = self.degree_bound

        def padded(key):
            ex, ey = key
            return ex + (0,) * (d - len(ex)) + ey + (0,) * (d - len(ey))

        pieces = []
        for key in sorted(self.terms, key=padded, reverse=True):
            coeff = self.terms[key]
            factors = []
            for name, exps in zip(("ex", "ey"), key):
                for i, e in enumerate(exps):
                    if e == 1:
                        factors.append("%s%d" % (name, i + 1))
                    elif e > 1:
                        factors.append("%s%d^%d" % (name, i + 1, e))
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append("-" + body if coeff < 0 else body)
            else:
                pieces.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return "EPolynomial(%s)" % self.to_text()


def e_substitute(ep, n):
    """Expand an EPolynomial back into x (and y) variables with n per alphabet."""
    if n < ep.degree_bound and any(
        len(ex) > n or len(ey) > n for ex, ey in ep.terms
    ):
        raise DomainError("need at least as many variables as the largest e-index")
    width = n * ep.alphabets
    out = {}
    for (ex, ey), coeff in ep.terms.items():
        for xkey, xval in _e_monomial(n, ex).items():
            if ep.alphabets == 1:
                key = xkey
                out[key] = out.get(key, 0) + coeff * xval
            else:
                for ykey, yval in _e_monomial(n, ey).items():
                    key = xkey + ykey
                    out[key] = out.get(key, 0) + coeff * xval * yval
    if ep.alphabets == 1:
        return SymPolynomial(n, out, 1)
    return SymPolynomial(n, {k: v for k, v in out.items() if len(k) == width}, 2)


@lru_cache(maxsize=None)
def _e_monomial(n, exps):
    """Expansion of prod_i e_i(x1..xn)^exps[i-1] as an exponent dict."""
    poly = {(0,) * n: 1}
    for i, e in enumerate(exps):
        base = dict(_elem_sym_terms(n, i + 1))
        for _ in range(e):
            poly = _dict_mul(poly, base)
    return poly


def _dict_mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(p + q for p, q in zip(e1, e2))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _partition_to_e(part):
    """Exponents (a1-a2, a2-a3, ...) of the e-monomial with leading term part."""
    exps = []
    for i, a in enumerate(part):
        nxt = part[i + 1] if i + 1 < len(part) else 0
        exps.append(a - nxt)
    return tuple(exps)


def reduce_to_elementary(p):
    """Rewrite a symmetric polynomial in the elementary basis.

    Repeatedly subtracts the e-monomial whose leading term matches the
    current lexicographic leading term.  A leading exponent that is not
    weakly decreasing within each alphabet proves the input is not
    symmetric there, which raises :class:`NotSymmetricError`.
    """
    n = p.n_vars
    two = p.alphabets == 2
    work = dict(p.terms)
    out = {}
    while work:
        lead = max(work)
        coeff = work[lead]
        xpart, ypart = lead[:n], lead[n:]
        for part in (xpart, ypart):
            if any(part[i] < part[i + 1] for i in range(len(part) - 1)):
                raise NotSymmetricError(
                    "leading exponent %r is not a partition; "
                    "input is not symmetric" % (lead,)
                )
        ex = _partition_to_e(xpart)
        ey = _partition_to_e(ypart) if two else ()
        key = (_strip(ex), _strip(ey))
        out[key] = out.get(key, 0) + coeff
        xexp = _e_monomial(n, _strip(ex))
        yexp = _e_monomial(n, _strip(ey)) if two else {(): 1}
        for xkey, xval in xexp.items():
            for ykey, yval in yexp.items():
                mono = xkey + ykey
                v = work.get(mono, 0) - coeff * xval * yval
                if v:
                    work[mono] = v
                else:
                    work.pop(mono, None)
    return EPolynomial(n, out, p.alphabets)


# ---------------------------------------------------------------------------
# universal polynomial tables

# The generic reduction above expands e-monomials over every monomial of the
# ambient polynomial ring, which blows up around total degree 8 in 9+
# variables.  The table builders therefore run the same leading-term
# algorithm on partition representatives only: a symmetric polynomial is
# determined by its coefficients on weakly decreasing exponent vectors, and
# the coefficient of x^cols in prod_r e_{rows[r]} is the number of 0/1
# matrices with the given row and column sums.


@lru_cache(maxsize=None)
def _matrix_count(rows, cols):
    """Count 0/1 matrices with row sums ``rows`` and column sums ``cols``.

    Both arguments are weakly decreasing tuples of positive integers with
    equal totals (callers strip zeros).
    """
    if not cols:
        return 1 if not rows else 0
    s = cols[0]
    rest = cols[1:]
    groups = [(v, len(list(g))) for v, g in itertools.groupby(rows)]
    total = 0

    def place(idx, left, ways, new_rows):
        nonlocal total
        if left == 0:
            for v, m in groups[idx:]:
                new_rows.extend([v] * m)
            tail = tuple(sorted((v for v in new_rows if v), reverse=True))
            total += ways * _matrix_count(tail, rest)
            return
        if idx == len(groups):
            return
        v, m = groups[idx]
        for take in range(min(m, left), -1, -1):
            place(
                idx + 1,
                left - take,
                ways * math.comb(m, take),
                new_rows + [v - 1] * take + [v] * (m - take),
            )

    place(0, s, 1, [])
    return total


def _bounded_partitions(total, max_part, max_len):
    """Weakly decreasing tuples of positive ints summing to total."""
    if total == 0:
        yield ()
        return
    if max_len == 0 or max_part == 0:
        return
    for first in range(min(max_part, total), 0, -1):
        if total - first <= first * (max_len - 1):
            for tail in _bounded_partitions(total - first, first, max_len - 1):
                yield (first,) + tail


@lru_cache(maxsize=None)
def _e_partition_coeffs(n, exps):
    """Coefficients of prod e_i^exps[i-1] on partition-shaped monomials."""
    rows = tuple(
        sorted((i + 1 for i, e in enumerate(exps) for _ in range(e)), reverse=True)
    )
    out = {}
    for lam in _bounded_partitions(sum(rows), len(rows), n):
        c = _matrix_count(rows, lam)
        if c:
            out[lam] = c
    return out


def _reduce_symmetric_parts(work, n, two):
    """Leading-term reduction on {(x partition, y partition): coeff} dicts."""
    out = {}
    while work:
        lead = max(work)
        coeff = work[lead]
        xpart, ypart = lead
        ex = _partition_to_e(xpart)
        ey = _partition_to_e(ypart) if two else ()
        key = (ex, ey)
        out[key] = out.get(key, 0) + coeff
        xexp = _e_partition_coeffs(n, ex)
        yexp = _e_partition_coeffs(n, ey) if two else {(): 1}
        for xk, xv in xexp.items():
            for yk, yv in yexp.items():
                mono = (xk, yk)
                v = work.get(mono, 0) - coeff * xv * yv
                if v:
                    work[mono] = v
                else:
                    work.pop(mono, None)
    return out


def _elementary_table(terms, n, two):
    """Reduce a symmetric coefficient dict to an EPolynomial, fast path."""
    work = {}
    for exps, c in terms.items():
        x, y = exps[:n], exps[n:]
        if any(x[i] < x[i + 1] for i in range(len(x) - 1)):
            continue
        if two and any(y[i] < y[i + 1] for i in range(len(y) - 1)):
            continue
        work[(_strip(x), _strip(y))] = c
    return EPolynomial(n, _reduce_symmetric_parts(work, n, two), 2 if two else 1)


def _truncated_elem(monomials, k, width):
    """Coefficient dicts of T^0..T^k in prod (1 + m*T) over the monomials."""
    coeffs = [{(0,) * width: 1}] + [{} for _ in range(k)]
    seen = 0
    for mono in monomials:
        seen += 1
        for t in range(min(seen, k), 0, -1):
            cur = coeffs[t]
            for key, val in coeffs[t - 1].items():
                nk = tuple(a + b for a, b in zip(key, mono))
                cur[nk] = cur.get(nk, 0) + val
    return coeffs


def universal_P(k, n_vars=None):
    """The polynomial expressing lambda^k(x*y) in the lambda^i of the factors.

    Defined by: the coefficient of T^k in prod_{i,j} (1 + x_i y_j T),
    written in elementary symmetric variables of the two alphabets.
    ``n_vars`` defaults to k, which already determines the answer; passing
    a larger value recomputes the table for the stability check.
    """
    if k < 1:
        raise DomainError("universal_P needs k >= 1")
    if n_vars is None:
        return _universal_P_cached(k)
    if n_vars < k:
        raise DomainError("need at least k variables per alphabet")
    return _universal_P_build(k, n_vars)


@lru_cache(maxsize=None)
def _universal_P_cached(k):
    return _universal_P_build(k, k)


def _universal_P_build(k, n):
    width = 2 * n
    monomials = []
    for i in range(n):
        for j in range(n):
            mono = [0] * width
            mono[i] = 1
            mono[n + j] = 1
            monomials.append(tuple(mono))
    coeff = _truncated_elem(monomials, k, width)[k]
    return _elementary_table(coeff, n, two=True)


def universal_P_kj(k, j, n_vars=None):
    """The polynomial expressing lambda^k(lambda^j(x)) in the lambda^i(x).

    Defined by: the coefficient of T^k in
    prod_{i1<...<ij} (1 + x_{i1}...x_{ij} T), written in elementary
    symmetric variables.  ``n_vars`` defaults to k*j.
    """
    if k < 1 or j < 1:
        raise DomainError("universal_P_kj needs k >= 1 and j >= 1")
    if n_vars is None:
        return _universal_P_kj_cached(k, j)
    if n_vars < k * j:
        raise DomainError("need at least k*j variables")
    return _universal_P_kj_build(k, j, n_vars)


@lru_cache(maxsize=None)
def _universal_P_kj_cached(k, j):
    return _universal_P_kj_build(k, j, k * j)


def _universal_P_kj_build(k, j, n):
    monomials = []
    for subset in itertools.combinations(range(n), j):
        mono = [0] * n
        for v in subset:
            mono[v] = 1
        monomials.append(tuple(mono))
    coeff = _truncated_elem(monomials, k, n)[k]
    return _elementary_table(coeff, n, two=False)
