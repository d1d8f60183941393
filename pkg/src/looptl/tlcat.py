"""Planar diagram calculus for the Temperley-Lieb category.

An (m, n)-diagram is a noncrossing perfect matching of m marked points on
the top edge and n on the bottom edge of a rectangle.  Points are indexed
0..m-1 across the top (left to right) and m..m+n-1 across the bottom
(left to right).  Vertical stacking composes diagrams; every closed loop
produced by stacking contributes a factor of the loop weight d.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import IndexOutOfRange, PoleAtSpecialValue, SignatureMismatch
from .scalars import (D_GENERIC, RationalFunc, SpecialField, quantum_int,
                      specialize)


class Diagram:
    """Immutable noncrossing (m, n)-pairing."""

    __slots__ = ("m", "n", "pairs", "_hash")

    def __init__(self, m, n, pairs):
        self.m = m
        self.n = n
        self.pairs = tuple(pairs)
        if len(self.pairs) != m + n:
            raise SignatureMismatch("pairing length does not match signature")
        self._hash = hash((m, n, self.pairs))

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.m == other.m
                and self.n == other.n and self.pairs == other.pairs)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Diagram({self.m},{self.n},{list(self.pairs)})"

    def is_identity(self):
        return self.m == self.n and all(
            self.pairs[i] == self.m + i for i in range(self.m))


def _boundary_order(m, n):
    """Point indices walked around the boundary: top L-R then bottom R-L."""
    return list(range(m)) + [m + n - 1 - t for t in range(n)]


def is_noncrossing(diag):
    pos = {}
    order = _boundary_order(diag.m, diag.n)
    for i, p in enumerate(order):
        pos[p] = i
    stack = []
    for p in order:
        q = diag.pairs[p]
        if pos[q] < pos[p]:
            if not stack or stack[-1] != q:
                return False
            stack.pop()
        else:
            stack.append(p)
    return not stack


def enumerate_diagrams(m, n):
    """All (m, n)-diagrams in a fixed deterministic order.

    Empty when m + n is odd; otherwise Catalan((m+n)/2) diagrams.
    """
    if (m + n) % 2:
        return []

    def gen(points):
        if not points:
            yield []
            return
        first = points[0]
        for k in range(1, len(points), 2):
            mate = points[k]
            for left in gen(points[1:k]):
                for right in gen(points[k + 1:]):
                    yield [(first, mate)] + left + right

    out = []
    for matching in gen(_boundary_order(m, n)):
        pairs = [0] * (m + n)
        for a, b in matching:
            pairs[a], pairs[b] = b, a
        out.append(Diagram(m, n, pairs))
    return out


def identity_diagram(n):
    return Diagram(n, n, [n + i for i in range(n)] + list(range(n)))


def cap_diagram():
    """The (0, 2)-diagram: an arc joining the two bottom points."""
    return Diagram(0, 2, [1, 0])


def cup_diagram():
    """The (2, 0)-diagram: an arc joining the two top points."""
    return Diagram(2, 0, [1, 0])


def u_diagram(n, i):
    """The hook generator on strands i, i+1 (0-based) inside grade n."""
    if not 0 <= i < n - 1:
        raise IndexOutOfRange(f"hook index {i} outside 0..{n - 2}")
    pairs = [0] * (2 * n)
    for k in range(n):
        pairs[k] = n + k
        pairs[n + k] = k
    pairs[i], pairs[i + 1] = i + 1, i
    pairs[n + i], pairs[n + i + 1] = n + i + 1, n + i
    return Diagram(n, n, pairs)


def stack_diagrams(upper, lower):
    """Glue upper's bottom edge to lower's top edge.

    Requires upper.n == lower.m; returns (diagram, closed_loop_count).
    """
    if upper.n != lower.m:
        raise SignatureMismatch(
            f"cannot stack ({upper.m},{upper.n}) on ({lower.m},{lower.n})")
    l, mid, n = upper.m, upper.n, lower.n
    # Node labels: 0..l-1 result top; l..l+n-1 result bottom;
    # l+n..l+n+mid-1 interface strands.  Each external node carries one
    # strand end, each interface node two (one per glued diagram).
    NT, NB, NI = l, n, mid

    def up_label(p):
        return p if p < l else NT + NB + (p - l)

    def low_label(p):
        return NT + NB + p if p < mid else NT + (p - mid)

    adj = [[] for _ in range(NT + NB + NI)]
    for p in range(l + mid):
        q = upper.pairs[p]
        if p < q:
            a, b = up_label(p), up_label(q)
            adj[a].append(b)
            adj[b].append(a)
    for p in range(mid + n):
        q = lower.pairs[p]
        if p < q:
            a, b = low_label(p), low_label(q)
            adj[a].append(b)
            adj[b].append(a)

    pairs = [None] * (NT + NB)
    seen = [False] * (NT + NB + NI)
    for start in range(NT + NB):
        if seen[start]:
            continue
        seen[start] = True
        prev, cur = start, adj[start][0]
        while cur >= NT + NB:
            seen[cur] = True
            nei = adj[cur]
            nxt = nei[1] if nei[0] == prev else nei[0]
            prev, cur = cur, nxt
        seen[cur] = True
        pairs[start], pairs[cur] = cur, start
    loops = 0
    for start in range(NT + NB, NT + NB + NI):
        if seen[start]:
            continue
        loops += 1
        seen[start] = True
        prev, cur = start, adj[start][0]
        while cur != start:
            seen[cur] = True
            nei = adj[cur]
            nxt = nei[1] if nei[0] == prev else nei[0]
            prev, cur = cur, nxt
    return Diagram(l, n, pairs), loops


def tensor_diagrams(a, b):
    """Horizontal juxtaposition: a on the left, b on the right."""
    m, n = a.m + b.m, a.n + b.n
    pairs = [0] * (m + n)

    def a_new(p):
        return p if p < a.m else a.m + b.m + (p - a.m)

    def b_new(p):
        return a.m + p if p < b.m else m + a.n + (p - b.m)

    for p in range(a.m + a.n):
        pairs[a_new(p)] = a_new(a.pairs[p])
    for p in range(b.m + b.n):
        pairs[b_new(p)] = b_new(b.pairs[p])
    return Diagram(m, n, pairs)


def bar_diagram(a):
    """Reflect through a horizontal line: top and bottom edges swap."""

    def relabel(p):
        return a.n + p if p < a.m else p - a.m

    pairs = [0] * (a.m + a.n)
    for p in range(a.m + a.n):
        pairs[relabel(p)] = relabel(a.pairs[p])
    return Diagram(a.n, a.m, pairs)


def trace_loops(a):
    """Loop count when a square diagram is closed around a cylinder."""
    if a.m != a.n:
        raise SignatureMismatch("trace requires a square diagram")
    n = a.m
    seen = [False] * (2 * n)
    loops = 0
    for start in range(2 * n):
        if seen[start]:
            continue
        loops += 1
        p = start
        while not seen[p]:
            seen[p] = True
            q = a.pairs[p]
            seen[q] = True
            p = q + n if q < n else q - n  # close top i onto bottom i
    return loops


class Morphism:
    """Formal linear combination of (m, n)-diagrams over a scalar backend.

    The loop weight d must be supplied as a scalar of the same backend so
    stacking can convert closed loops into factors.
    """

    __slots__ = ("m", "n", "terms", "d")

    def __init__(self, m, n, terms, d):
        self.m = m
        self.n = n
        self.d = d
        self.terms = {k: v for k, v in terms.items() if v}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_diagram(diag, d, coeff=1):
        return Morphism(diag.m, diag.n, {diag: coeff * _one_like(d)}, d)

    @staticmethod
    def zero(m, n, d):
        return Morphism(m, n, {}, d)

    @staticmethod
    def identity(n, d):
        return Morphism.from_diagram(identity_diagram(n), d)

    @staticmethod
    def hook(n, i, d):
        return Morphism.from_diagram(u_diagram(n, i), d)

    # -- linear structure ----------------------------------------------------

    def _check_sig(self, other):
        if self.m != other.m or self.n != other.n:
            raise SignatureMismatch(
                f"({self.m},{self.n}) vs ({other.m},{other.n})")

    def __add__(self, other):
        self._check_sig(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return Morphism(self.m, self.n, terms, self.d)

    def __sub__(self, other):
        self._check_sig(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] - v if k in terms else -v
        return Morphism(self.m, self.n, terms, self.d)

    def __neg__(self):
        return Morphism(self.m, self.n,
                        {k: -v for k, v in self.terms.items()}, self.d)

    def scale(self, c):
        return Morphism(self.m, self.n,
                        {k: v * c for k, v in self.terms.items()}, self.d)

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) \
            and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return f"0:({self.m},{self.n})"
        bits = [f"({v!r})*{k!r}" for k, v in self.terms.items()]
        return " + ".join(bits)

    # -- categorical operations ----------------------------------------------

    def stack_under(self, upper):
        """Vertical stacking with `upper` above self; loops become d factors."""
        if upper.n != self.m:
            raise SignatureMismatch(
                f"cannot stack ({upper.m},{upper.n}) over ({self.m},{self.n})")
        d = self.d
        powers = {}
        out = {}
        for da, ca in upper.terms.items():
            for db, cb in self.terms.items():
                diag, loops = stack_diagrams(da, db)
                if loops not in powers:
                    powers[loops] = d ** loops if loops else _one_like(d)
                c = ca * cb * powers[loops] if loops else ca * cb
                if diag in out:
                    out[diag] = out[diag] + c
                else:
                    out[diag] = c
        return Morphism(upper.m, self.n, out, d)

    def tensor(self, other):
        out = {}
        for da, ca in self.terms.items():
            for db, cb in other.terms.items():
                diag = tensor_diagrams(da, db)
                c = ca * cb
                out[diag] = out[diag] + c if diag in out else c
        return Morphism(self.m + other.m, self.n + other.n, out, self.d)

    def bar(self):
        return Morphism(self.n, self.m,
                        {bar_diagram(k): v for k, v in self.terms.items()},
                        self.d)

    def markov_trace(self):
        d = self.d
        total = None
        for diag, c in self.terms.items():
            val = c * d ** trace_loops(diag)
            total = val if total is None else total + val
        return total if total is not None else _zero_like(d)


def _one_like(d):
    if isinstance(d, RationalFunc):
        return RationalFunc(1)
    if isinstance(d, float):
        return 1.0
    return d.field.one  # FieldElement


def _zero_like(d):
    if isinstance(d, RationalFunc):
        return RationalFunc(0)
    if isinstance(d, float):
        return 0.0
    return d.field.zero


def compose(a, b):
    """Categorical composite a after b: b stacked above a.

    a: (m, n), b: (l, m)  ->  (l, n).
    """
    return a.stack_under(b)


def compose_factored(a, b):
    """Same contract as compose(a, b), evaluated arc by arc.

    Each diagram D of the upper factor b with an adjacent bottom arc at
    (i, i+1) satisfies D = (1/d) * (D stacked over U_i), so its product
    with the lower factor routes through U_i * a; when the lower factor
    kills the hooks (as a projector does) almost every term vanishes.
    """
    d = a.d
    out = Morphism.zero(b.m, a.n, d)
    zcache = {}
    direct = {}
    for D, c in b.terms.items():
        if D.is_identity():
            out = out + a.scale(c)
            continue
        arc = None
        for i in range(D.n - 1):
            if D.pairs[D.m + i] == D.m + i + 1:
                arc = i
                break
        if arc is None:
            direct[D] = direct[D] + c if D in direct else c
            continue
        if arc not in zcache:
            zcache[arc] = compose(a, Morphism.hook(D.n, arc, d))
        z = zcache[arc]
        if z.is_zero():
            continue
        out = out + compose(z, Morphism.from_diagram(D, d)).scale(c / d)
    if direct:
        out = out + compose(a, Morphism(b.m, b.n, direct, d))
    return out


def tensor(a, b):
    return a.tensor(b)


def bar(a):
    return a.bar()


def markov_trace(a):
    return a.markov_trace()


# ---------------------------------------------------------------------------
# rectangular <-> square embedding
# ---------------------------------------------------------------------------


def embed_rectangular(a):
    """Embed a: (m, n) with m < n into the square algebra at grade n.

    Pads the top edge with (n - m) / 2 nested arcs on the right.
    """
    if a.m >= a.n or (a.n - a.m) % 2:
        raise SignatureMismatch("embedding expects m < n of equal parity")
    k = (a.n - a.m) // 2
    cup = Morphism.from_diagram(cup_diagram(), a.d)
    pad = cup
    for _ in range(k - 1):
        pad = pad.tensor(cup)
    return a.tensor(pad)


def restrict_square(ahat, m):
    """Left inverse of embed_rectangular: recover the (m, n) morphism."""
    n = ahat.n
    if ahat.m != n:
        raise SignatureMismatch("restriction expects a square morphism")
    k = (n - m) // 2
    d = ahat.d
    cap = Morphism.from_diagram(cap_diagram(), d)
    pad = Morphism.identity(m, d)
    for _ in range(k):
        pad = pad.tensor(cap)
    # pad: (m, n); stack it above ahat and divide by d^k
    out = compose(ahat, pad)
    one = _one_like(d)
    scale = one
    for _ in range(k):
        scale = scale / d
    return out.scale(scale)


# ---------------------------------------------------------------------------
# Jones-Wenzl projectors
# ---------------------------------------------------------------------------


def _backend_key(backend, ell, d_value):
    if backend == "generic":
        return ("generic",)
    if backend == "special":
        return ("special", ell)
    if backend == "float":
        return ("float", float(d_value))
    raise ValueError(f"unknown backend {backend!r}")


_jw_cache = {}


def _loop_weight(backend, ell=None, d_value=None):
    if backend == "generic":
        return D_GENERIC
    if backend == "special":
        return SpecialField(ell).delta
    if backend == "float":
        return float(d_value)
    raise ValueError(f"unknown backend {backend!r}")


def _qint(m, backend, ell=None, d_value=None):
    if backend == "generic":
        return quantum_int(m)
    if backend == "special":
        return SpecialField(ell).quantum_int(m)
    return quantum_int(m).eval_float(float(d_value))


def _jw_generic_cleared(k):
    """Denominator-cleared projector: (N, delta) with p_k = N / delta.

    N has polynomial coefficients and delta is a polynomial; the pair is
    reduced so the overall content is trivial.  Working with cleared
    numerators keeps the Wenzl recursion free of per-product gcd work.
    """
    if k in _jw_cleared_cache:
        return _jw_cleared_cache[k]
    d = D_GENERIC
    if k == 1:
        out = (Morphism.identity(1, d), RationalFunc(1))
    else:
        N, delta = _jw_generic_cleared(k - 1)
        qk, qk1 = quantum_int(k - 1), quantum_int(k)
        N1 = N.tensor(Morphism.identity(1, d))
        hook = Morphism.hook(k, k - 2, d)
        corr = compose(compose(N1, hook), N1)
        num = N1.scale(delta * qk1) - corr.scale(qk)
        den = delta * delta * qk1
        # strip common polynomial content
        from .scalars import _pgcd, _pdivmod_q
        g = list(den.num)
        for c in num.terms.values():
            g = _pgcd(g, list(c.num))
            if g == [1]:
                break
        if g != [1]:
            def reduce_poly(rf):
                q, _ = _pdivmod_q(list(rf.num), g)
                return RationalFunc([int(x) for x in q], [1],
                                    _normalized=True)
            num = Morphism(num.m, num.n,
                           {kk: reduce_poly(v) for kk, v in num.terms.items()},
                           d)
            den = reduce_poly(den)
        out = (num, den)
    _jw_cleared_cache[k] = out
    return out


_jw_cleared_cache = {}


def jones_wenzl(k, backend="generic", ell=None, d_value=None):
    """The grade-k Jones-Wenzl projector.

    Built by the inductive relation
        p_{k+1} = p_k x 1 - ([k]/[k+1]) (p_k x 1) U_k (p_k x 1).
    In the special backend this exists for k <= ell + 1 and raises
    PoleAtSpecialValue beyond, where [k+1] = 0.
    """
    key = (_backend_key(backend, ell, d_value), k)
    if key in _jw_cache:
        return _jw_cache[key]
    d = _loop_weight(backend, ell, d_value)
    if k < 1:
        raise IndexOutOfRange("projector grade must be >= 1")
    if backend == "generic":
        N, delta = _jw_generic_cleared(k)
        inv = RationalFunc(list(delta.den), list(delta.num))
        p = N.scale(inv)
    elif k == 1:
        p = Morphism.identity(1, d)
    else:
        p_prev = jones_wenzl(k - 1, backend, ell, d_value)
        qk, qk1 = _qint(k - 1, backend, ell, d_value), \
            _qint(k, backend, ell, d_value)
        if backend == "special" and not qk1:
            raise PoleAtSpecialValue(
                f"projector grade {k} does not exist at level {ell}")
        if backend == "float" and abs(qk1) < 1e-12:
            raise PoleAtSpecialValue(
                f"projector grade {k} is singular at d={d_value}")
        pk1 = p_prev.tensor(Morphism.identity(1, d))
        hook = Morphism.hook(k, k - 2, d)
        corr = compose(compose(pk1, hook), pk1)
        p = pk1 - corr.scale(qk / qk1)
    _jw_cache[key] = p
    return p


def common_denominator(a):
    """Clear denominators of a generic-backend morphism.

    Returns (delta, cleared) where delta is a polynomial scalar and
    cleared = delta * a has polynomial coefficients only.
    """
    from .scalars import _pgcd, _pmul, _pdivmod_q  # internal poly helpers
    lcm = (1,)
    for c in a.terms.values():
        g = _pgcd(list(lcm), list(c.den))
        q, _ = _pdivmod_q(list(c.den), g)
        lcm = tuple(int(x) for x in _pmul(list(lcm), [int(v) for v in q]))
    delta = RationalFunc(list(lcm))
    return delta, a.scale(delta)


# ---------------------------------------------------------------------------
# Markov pairing and its radical
# ---------------------------------------------------------------------------


def gram_exponents(m, n):
    """Loop-count matrix of the Markov pairing on the (m, n) diagram basis.

    Entry [i][j] is the number of loops in the cylinder closure of
    D_i stacked over bar(D_j); the pairing value is d to that power.
    """
    basis = enumerate_diagrams(m, n)
    bars = [bar_diagram(b) for b in basis]
    out = []
    for di in basis:
        row = []
        for bj in bars:
            # compose(D_i, bar(D_j)): bar(D_j) stacked above D_i -> (n, n)
            diag, loops = stack_diagrams(bj, di)
            row.append(loops + trace_loops(diag))
        out.append(row)
    return basis, out


def gram_matrix(m, n, backend="generic", ell=None, d_value=None):
    """Gram matrix of the Markov pairing over the chosen backend."""
    d = _loop_weight(backend, ell, d_value)
    basis, expo = gram_exponents(m, n)
    return basis, [[d ** e for e in row] for row in expo]


def radical_basis(n, ell):
    """Exact basis of the Markov-pairing radical of the grade-n algebra
    at the level-ell special weight.  Returned as square morphisms."""
    from .linalg import nullspace
    field = SpecialField(ell)
    basis, expo = gram_exponents(n, n)
    delta = field.delta
    mat = [[delta ** e for e in row] for row in expo]
    null = nullspace(mat, field.zero, field.one)
    d = field.delta
    out = []
    for vec in null:
        terms = {basis[i]: vec[i] for i in range(len(basis)) if vec[i]}
        out.append(Morphism(n, n, terms, d))
    return out
