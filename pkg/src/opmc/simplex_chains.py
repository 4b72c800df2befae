"""Normalized chains on standard simplices.

Basis classes e_I are indexed by nonempty subsets I of {0..n}, stored as
strictly increasing tuples, with degree |I| - 1 and the usual alternating
boundary.  The module also provides the explicit vertex contractions
(counit, vertex inclusion, chain homotopy), the cosimplicial structure,
and the chain-level coalgebra structure over permutation-tuple cochains:
a tuple of permutations reduces to a sum of surjections by the table
procedure, and surjections act on chains through interval cuts.
"""

from itertools import combinations

from .errors import ResourceLimitError, ShapeError
from .graded import BasisElement, GradedModule, LinearMap, koszul_sign_images

__all__ = [
    "SimplexChains",
    "chains",
    "induced_map",
    "face_map",
    "degeneracy_map",
    "contraction",
    "Surjection",
    "surjection_action",
    "surjection_boundary",
    "table_reduction",
    "einfty_decompose",
    "c_coalgebra_decompose",
]


class SimplexChains:
    """N_*(Delta^n): basis e_I, alternating boundary, counit at vertices."""

    def __init__(self, ring, n):
        if n < 0:
            raise ShapeError(f"need n >= 0, got {n}")
        self.ring = ring
        self.n = n
        basis = []
        for size in range(1, n + 2):
            for I in combinations(range(n + 1), size):
                basis.append(BasisElement(I, size - 1, 1))
        self.module = GradedModule(ring, basis)
        self.d = LinearMap(self.module, self.module, -1)
        for I in self.module.names:
            if len(I) == 1:
                continue
            for j in range(len(I)):
                self.d.set(I, I[:j] + I[j + 1:], (-1) ** j)

    def gen(self, I, coeff=1):
        return self.module.gen(tuple(sorted(I)), coeff)

    def top(self):
        return tuple(range(self.n + 1))


def chains(ring, n):
    return SimplexChains(ring, n)


def induced_map(f, source, target):
    """Chain map N_*(Delta^m) -> N_*(Delta^n) of a monotone vertex map.

    ``f`` lists the images of 0..m; classes on which f is not injective
    collapse to zero (normalization).
    """
    m = source.n
    if len(f) != m + 1:
        raise ShapeError(f"vertex map has {len(f)} entries, expected {m + 1}")
    if any(f[i] > f[i + 1] for i in range(m)):
        raise ShapeError(f"vertex map {f} is not monotone")
    if f and (f[0] < 0 or f[-1] > target.n):
        raise ShapeError(f"vertex map {f} leaves 0..{target.n}")
    out = LinearMap(source.module, target.module, 0)
    for I in source.module.names:
        J = tuple(f[i] for i in I)
        if len(set(J)) == len(J):
            out.set(I, J, 1)
    return out


def face_map(ring, i, n):
    """delta_i: N_*(Delta^(n-1)) -> N_*(Delta^n), skipping vertex i."""
    verts = [v for v in range(n + 1) if v != i]
    return induced_map(verts, chains(ring, n - 1), chains(ring, n))


def degeneracy_map(ring, j, n):
    """sigma_j: N_*(Delta^(n+1)) -> N_*(Delta^n), repeating vertex j."""
    verts = [v if v <= j else v - 1 for v in range(n + 2)]
    return induced_map(verts, chains(ring, n + 1), chains(ring, n))


def contraction(ring, k, n):
    """The contraction of N_*(Delta^n) onto its k-th vertex.

    Returns (cx, eps, p, h): eps is the counit to N_*(Delta^0), p the
    vertex inclusion, and h the chain homotopy with
    d h + h d = id - p o eps.
    """
    if not 0 <= k <= n:
        raise ShapeError(f"vertex {k} outside 0..{n}")
    cx = chains(ring, n)
    pt = chains(ring, 0)
    eps = induced_map([0] * (n + 1), cx, pt)
    p = induced_map([k], pt, cx)
    h = LinearMap(cx.module, cx.module, 1)
    for I in cx.module.names:
        if k in I:
            continue
        s = sum(1 for v in I if v < k)
        h.set(I, tuple(sorted(I + (k,))), (-1) ** s)
    return cx, eps, p, h


class Surjection:
    """A surjection {1..len} ->> {1..r} with no equal adjacent values."""

    __slots__ = ("seq", "arity")

    def __init__(self, seq):
        seq = tuple(seq)
        if not seq:
            raise ShapeError("empty surjection")
        arity = max(seq)
        if set(seq) != set(range(1, arity + 1)):
            raise ShapeError(f"{seq} is not onto 1..{arity}")
        if any(seq[i] == seq[i + 1] for i in range(len(seq) - 1)):
            raise ShapeError(f"{seq} has equal adjacent values (degenerate)")
        self.seq = seq
        self.arity = arity

    @property
    def degree(self):
        return len(self.seq) - self.arity

    def __eq__(self, other):
        return isinstance(other, Surjection) and self.seq == other.seq

    def __hash__(self):
        return hash(self.seq)

    def __repr__(self):
        return f"Surjection{self.seq}"


def _cut_positions(l, p):
    """All 0 = c_0 <= c_1 <= ... <= c_l = p: l interval endpoints."""
    out = []

    def rec(i, last, acc):
        if i == l:
            out.append(tuple(acc + [p]))
            return
        for c in range(last, p + 1):
            rec(i + 1, c, acc + [c])

    rec(1, 0, [0])
    return out


def surjection_action(u, cx, I):
    """Interval-cut action of a surjection on a chain basis class.

    Returns {(J_1, ..., J_r): coeff}; total output degree is
    |e_I| + degree(u).  The sign is the Koszul sign of regrouping the
    interval pieces by output slot -- a piece ending a non-final
    occurrence is graded one above its interior degree and contributes
    the parity of its right cut -- the orientation convention fixed by
    the chain-map property (see surjection_boundary).
    """
    seq = u.seq
    l = len(seq)
    r = u.arity
    p = len(I) - 1
    last_occ = {v: max(t for t in range(l) if seq[t] == v) for v in set(seq)}
    out = {}
    for cuts in _cut_positions(l, p):
        pieces = []  # (slot, piece degree for the sign)
        segs = [[] for _ in range(r)]
        extra = 1
        for t in range(l):
            a, b = cuts[t], cuts[t + 1]
            slot = seq[t] - 1
            segs[slot].extend(I[a:b + 1])
            deg = b - a
            if t != last_occ[seq[t]]:
                deg += 1
                if b % 2:
                    extra = -extra
            pieces.append((slot, deg))
        if any(not s for s in segs):
            continue
        if any(len(set(s)) != len(s) for s in segs):
            continue
        # Koszul sign of sorting the pieces stably by output slot
        order = sorted(range(len(pieces)), key=lambda t: (pieces[t][0], t))
        position = {t: i + 1 for i, t in enumerate(order)}
        images = [position[t] for t in range(len(pieces))]
        sign = koszul_sign_images(images, [d for _, d in pieces]) * extra
        key = tuple(tuple(s) for s in segs)
        out[key] = out.get(key, 0) + sign
    return {k: c for k, c in out.items() if c}


def surjection_boundary(u):
    """Boundary of a surjection: signed single-entry deletions.

    Returns [(coeff, Surjection)]; deletions producing equal adjacent
    values or losing a value are dropped (normalization).  Orientation:
    each non-final occurrence of a value (caesura) carries a degree-1
    marker, in position order.  Deleting a caesura removes its own
    marker; deleting a final occurrence turns the previous occurrence of
    that value into the final one, removing that marker and flipping the
    overall orientation.  The resulting signs make the interval-cut
    action a chain map and square to zero (both verified exhaustively in
    the tests for lengths up to 6).
    """
    seq = u.seq
    l = len(seq)
    last = {v: max(i for i in range(l) if seq[i] == v) for v in set(seq)}
    caesuras = [t for t in range(l) if t != last[seq[t]]]
    counts = {}
    for v in seq:
        counts[v] = counts.get(v, 0) + 1
    out = []
    for t in range(l):
        v = seq[t]
        if counts[v] == 1:
            continue
        rest = seq[:t] + seq[t + 1:]
        if any(rest[i] == rest[i + 1] for i in range(len(rest) - 1)):
            continue
        if t != last[v]:
            sign = (-1) ** sum(1 for c in caesuras if c < t)
        else:
            prev = max(i for i in range(t) if seq[i] == v)
            sign = -((-1) ** sum(1 for c in caesuras if c < prev))
        out.append((sign, Surjection(rest)))
    return out


def table_reduction(simplex):
    """Reduce a tuple of permutations to a sum of surjections.

    ``simplex`` is a (d+1)-tuple of permutations of the same arity; the
    result lists the surjections of length arity + d produced by the
    table procedure, one per admissible row-length composition, without
    signs (the convention matching the degree-0 and mod-2 uses below).
    """
    d = len(simplex) - 1
    r = simplex[0].r
    out = []

    def rec(i, closed, seq, remaining_len):
        row_all = [v for v in simplex[i].images if v not in closed]
        max_take = len(row_all)
        if i == d:
            take = row_all
            if len(take) != remaining_len:
                return
            full = seq + take
            if any(full[t] == full[t + 1] for t in range(len(full) - 1)):
                return
            out.append(Surjection(full))
            return
        for a in range(1, min(max_take, remaining_len - (d - i)) + 1):
            take = row_all[:a]
            rec(i + 1, closed | set(take[:-1]), seq + take,
                remaining_len - a)

    rec(0, frozenset(), [], r + d)
    return out


def einfty_decompose(E, cx, I, r, cap=200000):
    """Arity-r chain coproduct over permutation-tuple cochains.

    ``E`` is the cochain cooperad on tuples of permutations (with its
    complexity filter), ``cx`` the chains on a simplex and ``I`` a basis
    class.  Returns {(dual-basis name, (J_1..J_r)): coeff}: the dual
    basis element against the image of e_I under the table reduction of
    the named tuple.
    """
    from .builders import be_from_name

    if r > E.r_max:
        raise ShapeError(f"arity {r} exceeds the truncation {E.r_max}")
    if r == 0:
        return {}
    out = {}
    count = 0
    for name in E.basis_names(r):
        simplex = be_from_name(name)
        for surj in table_reduction(simplex):
            for key, c in surjection_action(surj, cx, I).items():
                count += 1
                if count > cap:
                    raise ResourceLimitError(
                        f"decomposition exceeded the term cap {cap}"
                    )
                kk = (name, key)
                out[kk] = out.get(kk, 0) + c
    ring = cx.ring
    norm = {k: ring.normalize(c) for k, c in out.items()}
    return {k: c for k, c in norm.items() if not ring.is_zero(c)}


def c_coalgebra_decompose(phi, E, cx, I, r, cap=200000):
    """Push the chain coproduct along a cooperad morphism out of ``E``.

    Returns {(target-cooperad name, (J_1..J_r)): coeff}.
    """
    ring = cx.ring
    out = {}
    for (name, key), c in einfty_decompose(E, cx, I, r, cap=cap).items():
        img = phi.apply_name(r, name)
        for tname, tc in img.terms.items():
            kk = (tname, key)
            out[kk] = ring.add(out.get(kk, ring.zero), ring.mul(c, tc))
    return {k: c for k, c in out.items() if not ring.is_zero(c)}
