"""Curvature of a symmetric pair and the algebraic subspaces it cuts out.

Conventions: R(e_a, e_b) e_d = -[[e_a, e_b], e_d] = R_ab^c_d e_c, stored as
Rud[a, b, c, d]; all-lower Rdown[a, b, c, d] = g_ce Rud[a,b,e,d] with pair
structure [ab][cd].  The metric is rescaled so Ricci = metric (Ric_bd =
Rud[a,b,a,d]); on the sphere this yields
R_abcd = (g_ac g_bd - g_bc g_ad)/(n - 1), which pins the sign once and for all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import RatMat, Subspace, kernel, mat_inverse, rank_at_eigenvalue
from .fibers import ALT, FULL, SYM, fiber, map_matrix
from .liealg import ratten
from .tensors import Ten, einsum, ten_to_ratmat

F = Fraction


class ConventionError(RuntimeError):
    """A curvature symmetry failed: the construction itself is broken."""


class NonProportionalRicci(RuntimeError):
    """Ricci is not a multiple of the raw metric (pair outside scope)."""


@dataclass
class MetricNormalization:
    scale: Fraction


@dataclass
class CurvatureData:
    pair: object
    g: RatMat            # normalized metric on m (Ric = g unless flat)
    ginv: RatMat
    scale: Fraction      # g = scale * raw metric
    Rud: Ten             # R_ab^c_d
    Rdown: Ten           # R_abcd
    Ric: RatMat
    is_flat: bool

    @property
    def n(self):
        return self.pair.n

    @property
    def exact(self):
        return self.Rud.exact

    def gt(self):
        return ratten(self.g)

    def ginvt(self):
        return ratten(self.ginv)

    def raise_last(self, t):
        """Raise the last index: T...e -> T...^e."""
        spec = "...x,xy->...y"
        return einsum(spec, t, self.ginvt())

    def to_float(self):
        return CurvatureData(self.pair, self.g, self.ginv, self.scale,
                             self.Rud.to_float(), self.Rdown.to_float(),
                             self.Ric, self.is_flat)


def normalize_metric(pair):
    """Scale factor s with Ric = s * raw metric (1 for flat pairs)."""
    curv = curvature_tensor(pair)
    return MetricNormalization(curv.scale)


def curvature_tensor(pair):
    """Build normalized CurvatureData from the pair's brackets."""
    kap = pair.m_bracket_to_k()       # [e_a, e_b] = kap[a,b,kappa] A_kappa
    adk = pair.ad_k_on_m()            # [A_kappa, e_d] = adk[kappa,c,d] e_c
    Rud = einsum("abk,kcd->abcd", kap, adk) * F(-1)
    Ric_t = einsum("abad->bd", Rud)
    Ric = ten_to_ratmat(Ric_t)
    graw = pair.metric_raw
    if Rud.is_zero():
        g = graw
        scale = F(1)
        is_flat = True
    else:
        scale = _proportionality(Ric, graw)
        g = graw * scale
        is_flat = False
    ginv = mat_inverse(g)
    Rdown = einsum("abed,ce->abcd", Rud, ratten(g))
    _assert_symmetries(Rud, Rdown, pair.label)
    if not is_flat and not Ric == g:
        raise ConventionError("normalization failed to give Ric = g")
    return CurvatureData(pair, g, ginv, scale, Rud, Rdown, Ric, is_flat)


def _proportionality(Ric, graw):
    n = Ric.shape[0]
    s = None
    for i in range(n):
        for j in range(n):
            if graw.entry(i, j) != 0:
                s = Ric.entry(i, j) / graw.entry(i, j)
                break
        if s is not None:
            break
    if s is None or not (graw * s) == Ric:
        raise NonProportionalRicci(
            "Ricci is not proportional to the metric: reducible or "
            "non-Einstein pair, outside the irreducible-case scope")
    if s <= 0:
        raise NonProportionalRicci("non-positive Einstein constant")
    return s


def _assert_symmetries(Rud, Rdown, label):
    checks = {
        "R antisym ab": (Rud + Rud.perm("bacd")).is_zero(),
        "Bianchi R_[ab^e_c]": Rud.alt((0, 1, 3)).is_zero(),
        "Rdown antisym cd": (Rdown + Rdown.perm("abdc")).is_zero(),
        "Rdown pair swap": (Rdown - Rdown.perm("cdab")).is_zero(),
    }
    bad = [k for k, v in checks.items() if not v]
    if bad:
        raise ConventionError(f"{label}: curvature symmetry failed: {bad}")


# ---------------------------------------------------------------------------
# K and K-hat


def k_condition(curv, mu):
    """R_ab^e_[c mu_d]e + R_cd^e_[a mu_b]e on a batch of 2-forms."""
    t1 = einsum("abec,...de->...abcd", curv.Rud, mu).alt((-2, -1))
    t2 = einsum("cdea,...be->...abcd", curv.Rud, mu).alt((-4, -3))
    return t1 + t2


def k_subspace(curv):
    """K = 2-forms commuting with curvature, as a Subspace in Lambda^2 coords."""
    l2 = fiber(curv.n, ALT, 2)
    full = fiber(curv.n, FULL, 4)
    M = map_matrix(lambda b: k_condition(curv, b), l2, full, exact=curv.exact)
    return Subspace.from_columns(kernel(M))


def khat_condition(curv, phi):
    """Appendix-B condition on endomorphisms, in the all-lower realisation.

    phi is stored all-lower: phi[c, d] stands for phi_c^d with the upper
    index lowered by the metric; the condition's free upper index d is kept
    as a plain slot (any realisation gives the same kernel).
    """
    up = curv.raise_last(phi)                      # phi_c^e on axis -1
    t1 = einsum("abde,...ce->...abcd", curv.Rud, up)
    t2 = einsum("abec,...ed->...abcd", curv.Rud, up) * F(-1)
    t3 = einsum("aedc,...be->...abcd", curv.Rud, up)
    t4 = einsum("bedc,...ae->...abcd", curv.Rud, up) * F(-1)
    return t1 + t2 + t3 + t4


def khat_subspace(curv):
    end = fiber(curv.n, FULL, 2)
    full = fiber(curv.n, FULL, 4)
    M = map_matrix(lambda b: khat_condition(curv, b), end, full,
                   exact=curv.exact)
    return Subspace.from_columns(kernel(M))


def verify_lts(curv, K=None, Khat=None):
    """Local-symmetry identities: eq. for [nabla,nabla]R and R's memberships."""
    rep = {}
    Rud = curv.Rud
    lhs = einsum("abec,depq->abcdpq", Rud, Rud).alt((2, 3)) * F(2)
    rhs = einsum("abeq,cdpe->abcdpq", Rud, Rud) \
        - einsum("cdeq,abpe->abcdpq", Rud, Rud)
    rep["second_bianchi_consequence"] = (lhs - rhs).is_zero()
    if K is None:
        K = k_subspace(curv)
    if Khat is None:
        Khat = khat_subspace(curv)
    n = curv.n
    l2 = fiber(n, ALT, 2)
    end = fiber(n, FULL, 2)
    # for each fixed End slot (c,d): the 2-form (ab) -> R_ab^c_d lies in K
    forms = l2.project(_moved(curv.Rud, (2, 3), (0, 1)))
    rep["R_image_in_K"] = K.contains_columns(_coords_to_cols(forms))
    # for each (a,b): the endomorphism phi_x^y = R_ab^y_x lies in K-hat;
    # all-lower storage: phi[x, z] = Rdown[a, b, z, x]
    low = curv.Rdown.perm("abdc")
    rep["R_image_in_Khat"] = Khat.contains_columns(
        _coords_to_cols(end.project(low)))
    # Riemannian remark: K sits inside K-hat (raising an index of mu in K)
    embedded = l2.embed(Ten(K.basis.num.T.copy(), K.basis.den))
    rep["K_inside_Khat"] = Khat.contains_columns(
        _coords_to_cols(end.project(embedded)))
    return rep


def _moved(t, src, dst):
    return Ten(np.ascontiguousarray(np.moveaxis(t.arr, src, dst)), t.den)


def _coords_to_cols(coords):
    """(batch..., dim) coordinate Ten -> RatMat with vectors as columns."""
    dim = coords.arr.shape[-1]
    flat = coords.arr.reshape(-1, dim)
    return RatMat(np.ascontiguousarray(flat.T), coords.den)


# ---------------------------------------------------------------------------
# operators on Sym^2 and Lambda^2


def second_kind_operator(curv):
    """Matrix of sigma_ab -> R_a^c_b^d sigma_cd on Sym^2 coordinates."""
    s2 = fiber(curv.n, SYM, 2)
    Rup = einsum("axby,xc,yd->acbd", curv.Rdown, curv.ginvt(), curv.ginvt())
    M = map_matrix(lambda b: einsum("acbd,...cd->...ab", Rup, b), s2, s2,
                   exact=curv.exact)
    return M


def lambda2_operator(curv):
    """Matrix of mu_ab -> R_ab^{cd} mu_cd on Lambda^2 coordinates."""
    l2 = fiber(curv.n, ALT, 2)
    Rup = einsum("abxy,xc,yd->abcd", curv.Rdown, curv.ginvt(), curv.ginvt())
    return map_matrix(lambda b: einsum("abcd,...cd->...ab", Rup, b), l2, l2,
                      exact=curv.exact)


def lambda2_kernel_complements_K(curv, K=None):
    """ker(lambda2 operator) + K = Lambda^2, directly (exact backends only)."""
    L = lambda2_operator(curv)
    ker = Subspace.from_columns(kernel(L))
    if K is None:
        K = k_subspace(curv)
    inter = ker.intersect(K)
    l2dim = fiber(curv.n, ALT, 2).dim
    return inter.dim == 0 and ker.dim + K.dim == l2dim


def scalar_curvature(curv):
    """R_ab^{ab}; equals dim m for every normalized non-flat pair."""
    Rup2 = einsum("abxy,xc,yd->abcd", curv.Rdown, curv.ginvt(), curv.ginvt())
    return einsum("abab->", Rup2).item()


def second_kind_trace(curv):
    """Raw double pair contraction R_a^a_b^b (vanishes identically).

    The matrix trace of the second-kind operator on Sym^2 is -n/2 instead:
    the full tensor-square trace is zero and the Lambda^2 part contributes
    +n/2 through the (1,4)(2,3) contraction, which is minus the Ricci trace.
    """
    Rup = einsum("axby,xc,yd->acbd", curv.Rdown, curv.ginvt(), curv.ginvt())
    return einsum("aabb->", Rup).item()


def eigen_multiplicities(curv, eigenvalues):
    """Certified dim ker(L - lambda I) for the second-kind operator."""
    M = second_kind_operator(curv)
    return {lam: rank_at_eigenvalue(M, lam) for lam in eigenvalues}


# ---------------------------------------------------------------------------
# SU(6)/Sp(3) identities


def su6_identities(curv):
    """The two quadratic curvature identities and R^2 = (2/3) R."""
    Rd = curv.Rdown
    gi = curv.ginvt()
    Rmidup = einsum("axyc,xe,yf->aefc", Rd, gi, gi)
    t1 = einsum("aefc,befd->abcd", Rmidup, Rd)
    t2 = einsum("befc,aefd->abcd", Rmidup, Rd)
    t3 = einsum("cefb,aefd->abcd", Rmidup, Rd)
    rep = {}
    rep["useful"] = (Rd * F(2, 3) - (t1 - t2)).is_zero()
    rep["also_useful"] = (Rd * F(2, 3) - Rd.perm("adcb") * F(1, 3)
                          - (t1 - t3)).is_zero()
    Rup2 = einsum("abxy,xe,yf->abef", Rd, gi, gi)
    rep["r_squared"] = (einsum("abef,cdef->abcd", Rup2, Rd)
                        - Rd * F(2, 3)).is_zero()
    return rep


# ---------------------------------------------------------------------------
# Cartan 3-form on group pairs


@dataclass
class CartanForm:
    phi: Ten   # full Lambda^3 array, normalized so phi_a^{cd} phi_bcd = g_ab


def cartan_form(pair, curv):
    """phi(X,Y,Z) = <[X,Y],Z> on a group pair, in the normalized metric.

    With Ric = g the normalized metric equals minus the Killing form of the
    factor, and phi_bcd = g_de kap[b,c,e] already satisfies the normalization
    phi_a^{cd} phi_bcd = g_ab; both facts are asserted.
    """
    if not pair.group_aligned:
        raise ValueError("Cartan form needs an aligned group pair")
    kap = pair.m_bracket_to_k()      # k-basis aligned with m-basis
    phi = einsum("bce,de->bcd", kap, curv.gt())
    if not (phi.alt((0, 1, 2)) - phi).is_zero():
        raise ConventionError("Cartan form is not totally antisymmetric")
    gi = curv.ginvt()
    contr = einsum("acd,bxy,cx,dy->ab", phi, phi, gi, gi)
    if not (contr - curv.gt()).is_zero():
        raise ConventionError("Cartan form normalization failed")
    # key observation: R_bc^{de} phi_ade = phi_abc
    Rup2 = einsum("bcxy,xd,ye->bcde", curv.Rdown, gi, gi)
    key = einsum("bcde,ade->abc", Rup2, phi)
    if not (key - phi).is_zero():
        raise ConventionError("R phi = phi identity failed")
    # invariance under the isotropy action
    adk = pair.ad_k_on_m()
    act = einsum("kxb,xcd->kbcd", adk, phi) + einsum("kxc,bxd->kbcd", adk, phi) \
        + einsum("kxd,bcx->kbcd", adk, phi)
    if not act.is_zero():
        raise ConventionError("Cartan form is not isotropy-invariant")
    return CartanForm(phi)


def group_curvature_identity(curv, cartan):
    """R_abcd = phi_ab^e phi_cde."""
    up = curv.raise_last(cartan.phi)
    rhs = einsum("abe,cde->abcd", up, cartan.phi)
    return (curv.Rdown - rhs).is_zero()


def nice_endomorphism_matrix(curv, cartan, conn_fiber):
    """Matrix of (sigma, mu) -> (phi_b^{cd} mu_cd, phi_bc^d sigma_d) on a
    Lambda^1 + Lambda^2 fiber sum."""
    n = curv.n
    gi = curv.ginvt()
    phi_up2 = einsum("bxy,xc,yd->bcd", cartan.phi, gi, gi)
    phi_up1 = curv.raise_last(cartan.phi)
    l1 = fiber(n, ALT, 1)
    l2 = fiber(n, ALT, 2)
    sig_to_mu = map_matrix(lambda b: einsum("bcd,...d->...bc", phi_up1, b),
                           l1, l2, exact=curv.exact)
    mu_to_sig = map_matrix(lambda b: einsum("bcd,...cd->...b", phi_up2, b),
                           l2, l1, exact=curv.exact)
    return conn_fiber.assemble_blocks({(0, 1): mu_to_sig, (1, 0): sig_to_mu})
