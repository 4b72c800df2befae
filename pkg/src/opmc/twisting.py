"""Generalized shuffle product, exponentials, twisting, and the
Maurer-Cartan equation on weight-truncated cofree coalgebras.

All constructions live over a fixed Hopf cooperad truncation (cooperad
plus arity-wise products mu_r and units eta_r) and a cofree coalgebra
uC(V).  The shuffle product is the coalgebra-morphism extension of

    tilde(x (x) y) = T(x) eps(y) + eps(x) T(y),

the exponential is read off from the unit elements eta_r, and twisting
conjugates a coderivation by the shuffle action of exp(v).
"""

from itertools import product as _product

from .cofree import Coderivation, coderivation_extend
from .errors import (
    InternalCheckError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedError,
)

__all__ = [
    "pair_decompose",
    "shuffle",
    "one_param",
    "exp_element",
    "twist",
    "mc_residual",
    "is_mc",
    "mc_enumerate",
]


def pair_decompose(H, cf, x, y, k):
    """Cocomposition of x (x) y in the tensor-product coalgebra.

    Returns {(outer-name, ((K_1, L_1) .. (K_k, L_k))): coeff}: both
    factors are decomposed, the slots are interleaved with Koszul signs,
    and the two outer cooperad factors are multiplied with mu_k.
    """
    C = cf.cooperad
    ring = cf.ring
    mod = C.component(k).module
    out = {}
    dx = cf.decompose(x, k)
    dy = cf.decompose(y, k)
    for (a, Ks), ca in dx.items():
        degsK = [cf.module.degree(K) for K in Ks]
        for (b, Ls), cb in dy.items():
            # reorder a, K_1..K_k, b, L_1..L_k -> (a b), (K_1 L_1), ...
            sign = 1
            if C.degree(k, b) % 2 and sum(degsK) % 2:
                sign = -sign
            for i in range(k):
                if cf.module.degree(Ls[i]) % 2 and sum(degsK[i + 1:]) % 2:
                    sign = -sign
            coeff = ring.mul(ring.mul(ca, cb), sign)
            prod = H.multiply(k, mod.gen(a), mod.gen(b))
            pairs = tuple(zip(Ks, Ls))
            for aname, pc in prod.terms.items():
                kk = (aname, pairs)
                out[kk] = ring.add(out.get(kk, ring.zero), ring.mul(coeff, pc))
    return {kk: c for kk, c in out.items() if not ring.is_zero(c)}


def _tilde(cf, K, L):
    """T(K) eps(L) + eps(K) T(L) on basis keys; None when zero."""
    if K[0] == 1 and L[0] == 0:
        return K[2][0]
    if K[0] == 0 and L[0] == 1:
        return L[2][0]
    return None


def shuffle(H, cf, x, y):
    """The generalized shuffle product x * y in uC(V)."""
    C = cf.cooperad
    ring = cf.ring
    acc = {}
    eps = ring.mul(cf.counit_coefficient(x), cf.counit_coefficient(y))
    if not ring.is_zero(eps) and cf.unitary:
        acc[0] = {(C.unit_name, ()): eps}
    for k in range(1, C.r_max + 1):
        for (aname, pairs), coeff in pair_decompose(H, cf, x, y, k).items():
            names = []
            ok = True
            for K, L in pairs:
                vn = _tilde(cf, K, L)
                if vn is None:
                    ok = False
                    break
                names.append(vn)
            if not ok:
                continue
            if sum(cf.V.weight(vn) for vn in names) > cf.w_max:
                continue
            tgt = acc.setdefault(k, {})
            pk = (aname, tuple(names))
            tgt[pk] = ring.add(tgt.get(pk, ring.zero), coeff)
    return cf.collect(acc)


def _plain_cocompose(cf, r, cname, vt, k):
    """Cocomposition of a plain tensor, keeping the blocks plain.

    Yields (coeff, outer-name, blocks) with blocks a tuple of plain
    triples (r_i, inner-name, v-subtuple); the Koszul sign interleaves
    the inner cooperad factors into the v-blocks.
    """
    from .cooperad import compositions

    C = cf.cooperad
    for shape in compositions(r, k):
        if any(ri > C.r_max for ri in shape):
            continue
        blocks = []
        pos = 0
        for ri in shape:
            blocks.append(vt[pos:pos + ri])
            pos += ri
        for lam, a, gs in C.cocompose(k, shape, cname):
            sign = 1
            for i in range(k):
                if C.degree(shape[i], gs[i]) % 2:
                    pre = sum(
                        cf.vdeg(v) for j in range(i) for v in blocks[j]
                    )
                    if pre % 2:
                        sign = -sign
            out_blocks = tuple(
                (shape[i], gs[i], blocks[i]) for i in range(k)
            )
            yield cf.ring.mul(lam, sign), a, out_blocks


def _block_degree(cf, block):
    ri, g, bvt = block
    return cf.cooperad.degree(ri, g) + sum(cf.vdeg(v) for v in bvt)


def _tilde_plain(block_a, block_b):
    """tilde on a pair of plain blocks; the generator name or None."""
    if block_a[0] == 1 and block_b[0] == 0:
        return block_a[2][0]
    if block_a[0] == 0 and block_b[0] == 1:
        return block_b[2][0]
    return None


def _shuffle_plain(H, cf, u, x):
    """Shuffle product of two plain presentations, kept plain.

    ``u`` and ``x`` map arity -> {(cooperad-name, v-tuple): coeff};
    the result is in the same form.
    """
    C = cf.cooperad
    ring = cf.ring
    out = {}

    def put(r_out, pk, c):
        tgt = out.setdefault(r_out, {})
        tgt[pk] = ring.add(tgt.get(pk, ring.zero), c)

    eps_u = u.get(0, {}).get((C.unit_name, ()), ring.zero)
    eps_x = x.get(0, {}).get((C.unit_name, ()), ring.zero)
    eps = ring.mul(eps_u, eps_x)
    if not ring.is_zero(eps):
        put(0, (C.unit_name, ()), eps)
    for k in range(1, C.r_max + 1):
        du = {}
        for r, plain in u.items():
            for (cname, vt), c in plain.items():
                for coeff, a, blocks in _plain_cocompose(cf, r, cname, vt, k):
                    kk = (a, blocks)
                    du[kk] = ring.add(du.get(kk, ring.zero),
                                      ring.mul(c, coeff))
        dx = {}
        for r, plain in x.items():
            for (cname, vt), c in plain.items():
                for coeff, b, blocks in _plain_cocompose(cf, r, cname, vt, k):
                    kk = (b, blocks)
                    dx[kk] = ring.add(dx.get(kk, ring.zero),
                                      ring.mul(c, coeff))
        for (a, Ab), ca in du.items():
            if ring.is_zero(ca):
                continue
            degsA = [_block_degree(cf, blk) for blk in Ab]
            for (b, Bb), cb in dx.items():
                if ring.is_zero(cb):
                    continue
                names = []
                ok = True
                for i in range(k):
                    vn = _tilde_plain(Ab[i], Bb[i])
                    if vn is None:
                        ok = False
                        break
                    names.append(vn)
                if not ok:
                    continue
                if sum(cf.V.weight(vn) for vn in names) > cf.w_max:
                    continue
                sign = 1
                if C.degree(k, b) % 2 and sum(degsA) % 2:
                    sign = -sign
                for i in range(k):
                    if _block_degree(cf, Bb[i]) % 2 and sum(degsA[i + 1:]) % 2:
                        sign = -sign
                coeff = ring.mul(ring.mul(ca, cb), sign)
                for pc, cname2 in H.multiply_names(k, a, b):
                    put(k, (cname2, tuple(names)), ring.mul(coeff, pc))
    for r in list(out):
        out[r] = {pk: c for pk, c in out[r].items() if not ring.is_zero(c)}
        if not out[r]:
            del out[r]
    return out


def _weighted_tuples(cf, terms, r):
    """All (v-name tuple, coefficient-product) with total weight <= w_max."""
    ring = cf.ring
    out = []

    def rec(depth, names, coeff, wt):
        if depth == r:
            out.append((tuple(names), coeff))
            return
        for vn, c in terms.items():
            w = wt + cf.V.weight(vn)
            if w > cf.w_max:
                continue
            rec(depth + 1, names + [vn], ring.mul(coeff, c), w)

    rec(0, [], ring.one, 0)
    return out


def _one_param_plain(H, cf, v, lam):
    """Plain presentation of gamma_v(lambda): eta_r against (lambda v)^r."""
    ring = cf.ring
    C = cf.cooperad
    for vn in v.terms:
        if cf.V.degree(vn) != 0:
            raise PreconditionError(
                "one-parameter subgroups need a degree-0 element"
            )
    w = v.scale(lam)
    acc = {0: {(C.unit_name, ()): ring.one}}
    for r in range(1, C.r_max + 1):
        plain = {}
        for cname, e in H.unit(r).terms.items():
            for vt, c in _weighted_tuples(cf, w.terms, r):
                pk = (cname, vt)
                plain[pk] = ring.add(plain.get(pk, ring.zero), ring.mul(e, c))
        plain = {pk: c for pk, c in plain.items() if not ring.is_zero(c)}
        if plain:
            acc[r] = plain
    return acc


def one_param(H, cf, v, lam):
    """The grouplike element gamma_v(lambda): eta_r against (lambda v)^r."""
    return cf.collect(_one_param_plain(H, cf, v, lam))


def exp_element(H, cf, v):
    """exp(v) = the one-parameter subgroup of v at the unit scalar."""
    return one_param(H, cf, v, cf.ring.one)


def twist(H, Qt, v, verify=True):
    """The twisted coderivation with Q^v(x) = exp(-v) * Q(exp(v) * x).

    The cogenerator components are computed on plain representative
    tensors: T(exp(-v) * w) = T(exp(-v)) eps(w) + T(w) and the image of
    a coderivation has no counit part, so the corestriction of the
    twisted operator is T(Q(exp(v) * x)).  Working plain keeps the
    computation exact over rings where the orbit normalization is not
    invertible.  With ``verify`` the extension of the components is
    compared against the conjugated operator on every basis class, and
    any disagreement raises an internal-consistency error.
    """
    cf = Qt.cofree
    ring = cf.ring
    ev_plain = _one_param_plain(H, cf, v, ring.one)
    comps = {}
    for key in cf.module.names:
        r, rep, vt = key
        w = _shuffle_plain(H, cf, ev_plain, {r: {(rep, vt): ring.one}})
        val = cf.V.zero()
        for r2, plain in w.items():
            for (cname2, vt2), c in plain.items():
                val = val.add(Qt.eval_plain(r2, cname2, vt2).scale(c))
        if not val.is_zero():
            comps[key] = val
    twisted = Coderivation(cf, comps)
    if verify:
        Q = coderivation_extend(Qt)
        Q2 = coderivation_extend(twisted)
        ev = exp_element(H, cf, v)
        em = exp_element(H, cf, v.scale(-1))
        for key in cf.module.names:
            img = shuffle(H, cf, em, Q(shuffle(H, cf, ev, cf.module.gen(key))))
            if not Q2.on_key(key).eq(img):
                raise InternalCheckError(
                    f"twisted operator is not the extension of its "
                    f"cogenerator projection at {key!r}"
                )
    return twisted


def mc_residual(H, Qt, v):
    """Value of the curvature of the twist, as the eta-pairing of Qt with v.

    Computed twice -- on the expansion of exp(v) and directly from the
    eta_r (x) v^r sums -- and compared; a mismatch signals a norm or
    sign inconsistency and raises an internal error.
    """
    cf = Qt.cofree
    ring = cf.ring
    total = cf.V.zero()
    ev = exp_element(H, cf, v)
    for r, plain in cf.expand(ev).items():
        for (cname, vt), c in plain.items():
            total = total.add(Qt.eval_plain(r, cname, vt).scale(c))
    direct = Qt.curvature()
    for r in range(1, cf.cooperad.r_max + 1):
        for cname, e in H.unit(r).terms.items():
            for vt, c in _weighted_tuples(cf, v.terms, r):
                val = Qt.eval_plain(r, cname, vt)
                direct = direct.add(val.scale(ring.mul(e, c)))
    if not total.eq(direct):
        raise InternalCheckError(
            "exp-expansion and eta-sum forms of the residual disagree"
        )
    return total


def is_mc(H, Qt, v):
    return mc_residual(H, Qt, v).is_zero()


def mc_enumerate(H, Qt, cap=20000, cross_check=True):
    """All degree-0 solutions of the MC equation over a finite ring."""
    cf = Qt.cofree
    ring = cf.ring
    if not ring.finite:
        raise UnsupportedError("enumeration needs a finite coefficient ring")
    names0 = [n for n in cf.V.names if cf.V.degree(n) == 0]
    scalars = ring.elements()
    if len(scalars) ** len(names0) > cap:
        raise ResourceLimitError(
            f"{len(scalars) ** len(names0)} candidates exceed the cap {cap}"
        )
    out = []
    for combo in _product(scalars, repeat=len(names0)):
        v = cf.V.zero()
        v.terms = {n: c for n, c in zip(names0, combo) if not ring.is_zero(c)}
        member = is_mc(H, Qt, v)
        if cross_check:
            flat = twist(H, Qt, v, verify=False).curvature().is_zero()
            if flat != member:
                raise InternalCheckError(
                    f"flatness of the twist disagrees with the MC "
                    f"equation at {v!r}"
                )
        if member:
            out.append(v)
    return out
