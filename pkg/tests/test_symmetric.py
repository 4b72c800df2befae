import random

import pytest

from opmc.errors import FreenessError, InvarianceError
from opmc.graded import BasisElement
from opmc.rings import ring_make
from opmc.symmetric import (
    OrbitModule,
    Permutation,
    act_plain,
    all_permutations,
    coinv_normalize_plain,
    norm_inverse_plain,
    norm_plain,
)

Z = ring_make({"kind": "integers"})
Z2 = ring_make({"kind": "integers-mod-m", "modulus": 2})
Z8 = ring_make({"kind": "integers-mod-m", "modulus": 8})
Q = ring_make({"kind": "rationals"})

RINGS = {"Z": Z, "Z2": Z2, "Z8": Z8, "Q": Q}


def regular_module(ring, r):
    """Free module R[S_r] with left-multiplication action."""
    perms = all_permutations(r)
    ident = Permutation.identity(r)

    def act(sigma, name):
        tau = Permutation(tuple(int(ch) for ch in name))
        return sigma.compose(tau).oneline()

    return OrbitModule.from_orbits(
        ring, r, [BasisElement(ident.oneline(), 0)], act
    )


def vdeg_const(d):
    return lambda name: d


def test_act_identity_and_koszul():
    om = regular_module(Z, 2)
    tau = Permutation((2, 1))
    x = {("12", ("v", "w")): 1}
    assert act_plain(om, Permutation.identity(2), x, vdeg_const(0)) == x
    acted = act_plain(om, tau, x, vdeg_const(0))
    assert acted == {("21", ("w", "v")): 1}
    # both slots odd: sign -1
    y = {("12", ("v", "v")): 1}
    acted = act_plain(om, tau, y, vdeg_const(1))
    assert acted == {("21", ("v", "v")): -1}


def test_norm_r2_and_r1():
    om = regular_module(Z, 2)
    x = {("12", ("v", "w")): 1}
    assert norm_plain(om, x, vdeg_const(0)) == {
        ("12", ("v", "w")): 1,
        ("21", ("w", "v")): 1,
    }
    om1 = regular_module(Z, 1)
    x1 = {("1", ("v",)): 5}
    assert norm_plain(om1, x1, vdeg_const(0)) == x1


def test_norm_well_defined_on_representatives():
    om = regular_module(Z, 3)
    rng = random.Random(5)
    perms = all_permutations(3)
    for _ in range(20):
        vt = tuple(rng.choice("abc") for _ in range(3))
        x = {("123", vt): rng.randint(-3, 3)}
        sigma = rng.choice(perms)
        moved = act_plain(om, sigma, x, vdeg_const(1))
        assert norm_plain(om, x, vdeg_const(1)) == norm_plain(om, moved, vdeg_const(1))


def test_norm_inverse_round_trip():
    rng = random.Random(11)
    for rname, ring in RINGS.items():
        for r in (1, 2, 3, 4):
            om = regular_module(ring, r)
            ident = Permutation.identity(r).oneline()
            for _ in range(10):
                x = {}
                for _ in range(rng.randint(1, 3)):
                    vt = tuple(rng.choice("ab") for _ in range(r))
                    x[(ident, vt)] = ring.normalize(rng.randint(1, 5))
                x = {k: c for k, c in x.items() if not ring.is_zero(c)}
                y = norm_plain(om, x, vdeg_const(0))
                assert norm_inverse_plain(om, y, vdeg_const(0)) == x, (rname, r)


def test_norm_inverse_rejects_non_invariant():
    om = regular_module(Z, 2)
    y = {("12", ("v", "w")): 1}
    with pytest.raises(InvarianceError):
        norm_inverse_plain(om, y, vdeg_const(0))


def test_norm_inverse_detects_unreachable():
    om = regular_module(Z, 2)
    # invariant but not a norm over Z: the symmetric tensor on one slot pair
    y = {("12", ("v", "v")): 1, ("21", ("v", "v")): 1}
    assert norm_inverse_plain(om, y, vdeg_const(0)) == {("12", ("v", "v")): 1}
    y_bad = {("12", ("v", "w")): 1, ("21", ("v", "w")): 1}
    with pytest.raises((InvarianceError, FreenessError)):
        norm_inverse_plain(om, y_bad, vdeg_const(0))


def test_coinv_normalize():
    om = regular_module(Z, 2)
    x = {("21", ("w", "v")): 1}
    assert coinv_normalize_plain(om, x, vdeg_const(0)) == {("12", ("v", "w")): 1}
    x_odd = {("21", ("v", "v")): 1}
    assert coinv_normalize_plain(om, x_odd, vdeg_const(1)) == {("12", ("v", "v")): -1}
    # already a representative
    x_rep = {("12", ("v", "w")): 2}
    assert coinv_normalize_plain(om, x_rep, vdeg_const(0)) == x_rep


def test_normalize_constant_on_orbits():
    om = regular_module(Z, 3)
    rng = random.Random(2)
    perms = all_permutations(3)
    for _ in range(30):
        vt = tuple(rng.choice("ab") for _ in range(3))
        degs = vdeg_const(rng.choice([0, 1]))
        x = {(rng.choice(perms).oneline(), vt): 1}
        base = coinv_normalize_plain(om, x, degs)
        sigma = rng.choice(perms)
        moved = act_plain(om, sigma, x, degs)
        assert coinv_normalize_plain(om, moved, degs) == base


def test_action_is_group_action_with_signs():
    om = regular_module(Z, 3)
    rng = random.Random(9)
    perms = all_permutations(3)
    for _ in range(50):
        s, t = rng.choice(perms), rng.choice(perms)
        vt = tuple(rng.choice("ab") for _ in range(3))
        degs = vdeg_const(1)
        x = {(rng.choice(perms).oneline(), vt): 1}
        lhs = act_plain(om, s.compose(t), x, degs)
        rhs = act_plain(om, s, act_plain(om, t, x, degs), degs)
        assert lhs == rhs


def test_rational_norm_variant():
    om = regular_module(Q, 2)
    x = {("12", ("v", "w")): 1}
    y = norm_plain(om, x, vdeg_const(0), rational_variant=True)
    assert y == {("12", ("v", "w")): Q.normalize("1/2"), ("21", ("w", "v")): Q.normalize("1/2")}
    with pytest.raises(InvarianceError):
        norm_plain(regular_module(Z, 2), x, vdeg_const(0), rational_variant=True)
