import random
from fractions import Fraction

import numpy as np
import pytest

from symkilling import identities as ids
from symkilling.connections import (
    check_zwei, first_stage_connection, generic_prolong, killing1_connection,
    killing2_connection, ky_connection, pentagon_connection, phi_map,
    r_diamond_apply, symmetric_power_connection,
)
from symkilling.exact import RatMat
from symkilling.curvature import k_subspace
from symkilling.fibers import ALT, HOOK_ALT, SYM, WINDOW, fiber, family_map_matrix
from symkilling.tensors import Ten

from conftest import get_curv, get_pair

F = Fraction

SMALL = ["sphere:3", "sphere:4", "cp:2", "flat:3", "group:su2", "slso:3"]


@pytest.mark.parametrize("spec", SMALL)
def test_killing1_invariants(spec):
    conn = killing1_connection(get_curv(spec))
    assert conn.check_representation()
    assert conn.check_equivariance()


@pytest.mark.parametrize("spec", SMALL)
def test_killing1_curvature_formula(spec):
    rep = ids.verify_killing1_curvature(get_curv(spec))
    assert rep == {"first_line_vanishes": True,
                   "second_line_matches_formula": True}


@pytest.mark.parametrize("spec", ["sphere:3", "sphere:4", "cp:2", "group:su2"])
def test_option_properties(spec):
    rng = random.Random(1)
    rep = ids.option_properties(get_curv(spec), rng, trials=3)
    assert all(rep.values()), rep


@pytest.mark.parametrize("spec", ["sphere:3", "cp:2", "group:su2"])
def test_freedom_display_sign(spec):
    assert ids.freedom_display_sign(get_curv(spec)) != 0


@pytest.mark.parametrize("spec", ["sphere:4", "cp:2", "su2n_spn:2", "flat:3"])
def test_first_stage_curvature(spec):
    rep = ids.verify_first_stage_curvature(get_curv(spec))
    assert all(rep.values()), rep


@pytest.mark.parametrize("spec", ["sphere:3", "cp:2", "group:su2"])
def test_r_diamond_lines_in_window(spec):
    rng = random.Random(2)
    assert ids.r_diamond_lines_in_window(get_curv(spec), rng, trials=3)


@pytest.mark.parametrize("spec", ["sphere:3", "sphere:4", "cp:2", "group:su2"])
def test_key_piece(spec):
    rng = random.Random(3)
    assert ids.verify_key_piece(get_curv(spec), rng, trials=3)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_very_simple_algebra(n):
    assert ids.very_simple_algebra_kernel(n) == 0


@pytest.mark.parametrize("spec", ["sphere:3", "sphere:4", "cp:2", "flat:3",
                                  "group:su2"])
def test_killing2_curvature_zwei(spec):
    rep = ids.verify_killing2_curvature(get_curv(spec))
    assert all(rep.values()), rep


@pytest.mark.parametrize("spec", ["sphere:3", "cp:2", "group:su2", "flat:3"])
def test_metric_parallel_section(spec):
    rep = ids.metric_parallel_section(get_curv(spec))
    assert all(rep.values()), rep


@pytest.mark.parametrize("spec", ["sphere:3", "cp:2"])
def test_gauge_conjugacy(spec):
    assert ids.gauge_conjugacy(get_curv(spec))


def test_unique_lift_reproduces_r_diamond():
    curv = get_curv("sphere:3")
    from symkilling.connections import _unique_second_lift
    lifted = _unique_second_lift(curv, 1)
    hook = fiber(3, HOOK_ALT)
    win = fiber(3, WINDOW)
    direct = family_map_matrix(
        lambda b: r_diamond_apply(curv, b) * F(-1), hook, win, exact=True)
    stage = first_stage_connection(curv, 1)
    hs = stage.fsum.slice(1)
    for a in range(3):
        block = RatMat(lifted[a].num[:, hs].copy(), lifted[a].den)
        assert block == direct[a]
        sig_block = RatMat(lifted[a].num[:, stage.fsum.slice(0)].copy(),
                           lifted[a].den)
        assert sig_block.is_zero()


@pytest.mark.parametrize("spec", ["sphere:3", "cp:2", "group:su2"])
def test_symmetric_power_curvature(spec):
    rep = ids.verify_symmetric_power_curvature(get_curv(spec))
    assert all(rep.values()), rep


@pytest.mark.parametrize("spec", ["sphere:3", "sphere:4", "cp:2", "flat:3"])
def test_phi_intertwining(spec):
    rep = ids.phi_intertwining(get_curv(spec))
    assert all(rep.values()), rep


def test_phi_kernel_count():
    n = 4
    Phi, src, dst = phi_map(get_curv("sphere:4"))
    from symkilling.exact import kernel
    assert kernel(Phi).shape[1] == 4 + 1  # C(4,3) + C(4,4)


def test_pentagon_on_l1k():
    curv = get_curv("su2n_spn:2")
    K = k_subspace(curv)
    assert ids.pentagon_vanishes_on_l1k(curv, K)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_ses1_exact(n):
    assert all(ids.ses1_report(n).values())


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ses2_exact(n):
    assert all(ids.ses2_report(n).values())


def test_baywindow_dim_formula():
    # GL(n) dimension of the (3,3) symmetry class
    for n in (3, 4):
        expected = n * n * (n + 1) * (n + 1) * (n + 2) * (n - 1) // 144
        assert ids.baywindow_dim(n) == expected


@pytest.mark.parametrize("spec", ["sphere:3", "flat:3", "cp:2"])
def test_generic_prolong_reproduces_killing1(spec):
    curv = get_curv(spec)
    pair = curv.pair
    n = curv.n
    from symkilling.connections import (FiberSum, drho_blockdiag,
                                        kappa_tilde_killing1)
    l1 = FiberSum(n, [("one_form", fiber(n, ALT, 1))])
    l2 = FiberSum(n, [("two_form", fiber(n, ALT, 2))])
    from symkilling.connections import InvariantConnection
    u = InvariantConnection(pair, l1, drho_blockdiag(pair, l1),
                            [RatMat.zeros(n, n) for _ in range(n)], "U")
    dim2 = l2.dim
    v = InvariantConnection(pair, l2, drho_blockdiag(pair, l2),
                            [RatMat.zeros(dim2, dim2) for _ in range(n)], "V")
    partials = family_map_matrix(lambda t: t, fiber(n, ALT, 2),
                                 fiber(n, ALT, 1), exact=True)
    kts = family_map_matrix(lambda t: kappa_tilde_killing1(curv, t),
                            fiber(n, ALT, 1), fiber(n, ALT, 2), exact=True)
    prol = generic_prolong(pair, u, v, partials, kts)
    direct = killing1_connection(curv)
    for a in range(n):
        assert prol.alpha[a] == direct.alpha[a]
    for k in range(pair.dim_k):
        assert prol.dRho[k] == direct.dRho[k]
    assert check_zwei(prol, 1, partials)


def test_generic_prolong_flat_product():
    curv = get_curv("flat:3")
    pair = curv.pair
    n = 3
    from symkilling.connections import FiberSum, InvariantConnection, drho_blockdiag
    l1 = FiberSum(n, [("one_form", fiber(n, ALT, 1))])
    l2 = FiberSum(n, [("two_form", fiber(n, ALT, 2))])
    u = InvariantConnection(pair, l1, drho_blockdiag(pair, l1),
                            [RatMat.zeros(n, n) for _ in range(n)], "U")
    v = InvariantConnection(pair, l2, drho_blockdiag(pair, l2),
                            [RatMat.zeros(3, 3) for _ in range(n)], "V")
    partials = family_map_matrix(lambda t: t, fiber(n, ALT, 2),
                                 fiber(n, ALT, 1), exact=True)
    kts = [RatMat.zeros(3, n) for _ in range(n)]
    prol = generic_prolong(pair, u, v, partials, kts)
    for a, b in prol.curvature_pairs():
        assert prol.curvature(a, b).is_zero()


def test_generic_prolong_reproduces_first_stage():
    curv = get_curv("sphere:3")
    pair = curv.pair
    n = 3
    from symkilling.connections import (FiberSum, InvariantConnection,
                                        drho_blockdiag, r_triangle_apply,
                                        two_mu_sym)
    s2f, hkf = fiber(n, SYM, 2), fiber(n, HOOK_ALT)
    U = FiberSum(n, [("sym2", s2f)])
    V = FiberSum(n, [("hook", hkf)])
    u = InvariantConnection(pair, U, drho_blockdiag(pair, U),
                            [RatMat.zeros(U.dim, U.dim) for _ in range(n)], "U")
    v = InvariantConnection(pair, V, drho_blockdiag(pair, V),
                            [RatMat.zeros(V.dim, V.dim) for _ in range(n)], "V")
    partials = family_map_matrix(lambda t: two_mu_sym(t) * F(-1), hkf, s2f,
                                 exact=True)
    kts = family_map_matrix(lambda t: r_triangle_apply(curv, t, 1) * F(-1),
                            s2f, hkf, exact=True)
    prol = generic_prolong(pair, u, v, partials, kts)
    direct = first_stage_connection(curv, 1)
    for a in range(n):
        assert prol.alpha[a] == direct.alpha[a]
    assert check_zwei(prol, 1, partials)


@pytest.mark.parametrize("spec", SMALL)
def test_connections_equivariant(spec):
    curv = get_curv(spec)
    for build in (killing2_connection, symmetric_power_connection,
                  pentagon_connection, ky_connection):
        conn = build(curv)
        assert conn.check_equivariance(), (spec, conn.label)


def test_ky_connection_flat_on_sphere():
    for n in (3, 4):
        conn = ky_connection(get_curv(f"sphere:{n}"))
        for a, b in conn.curvature_pairs():
            assert conn.curvature(a, b).is_zero()
