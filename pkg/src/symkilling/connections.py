"""Invariant prolongation connections on homogeneous bundles.

A connection is stored relative to the canonical connection of the symmetric
pair: dRho gives the isotropy action on the fiber (one endomorphism per
k-basis element) and alpha the algebraic Nomizu-type terms (one per m-basis
element).  The curvature endomorphism is then
Lambda(e_a, e_b) = [alpha_a, alpha_b] - dRho([e_a, e_b]),
and equals twice the nabla_[a nabla_b] of the corresponding formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .exact import RatMat, kernel, solve
from .fibers import (
    ALT, FULL, HOOK_ALT, L1L2, SYM, SYM2L2, WINDOW, fiber,
    family_map_matrix, fun_automorphism, map_matrix,
)
from .liealg import ratten
from .tensors import Ten, concat0, einsum, ten_to_ratmat

F = Fraction


# ---------------------------------------------------------------------------
# fiber sums and block matrices


class FiberSum:
    """Ordered direct sum of symmetry-typed fibers with block bookkeeping."""

    def __init__(self, n, components):
        self.n = n
        self.components = list(components)   # [(name, Fiber)]
        self.dims = [f.dim for _, f in self.components]
        self.offsets = np.concatenate([[0], np.cumsum(self.dims)]).tolist()
        self.dim = self.offsets[-1]

    def names(self):
        return [name for name, _ in self.components]

    def slice(self, i):
        return slice(self.offsets[i], self.offsets[i + 1])

    def assemble_blocks(self, blocks, exact=True):
        """Full matrix from {(target_idx, source_idx): block}."""
        if exact:
            den = 1
            for b in blocks.values():
                den = den * b.den // math.gcd(den, b.den)
            obj = any(b.num.dtype == object for b in blocks.values())
            if not obj:
                worst = max((float(np.abs(b.num).max(initial=0)) * (den // b.den)
                             for b in blocks.values()), default=0.0)
                obj = worst >= float(1 << 62)
            out = np.zeros((self.dim, self.dim),
                           dtype=object if obj else np.int64)
            for (i, j), b in blocks.items():
                num = b.num.astype(object) if obj else b.num
                out[self.slice(i), self.slice(j)] = num * (den // b.den)
            return RatMat(out, den)
        out = np.zeros((self.dim, self.dim))
        for (i, j), b in blocks.items():
            out[self.slice(i), self.slice(j)] = b
        return out

    def section(self, parts, exact=True):
        """Column vector from per-component coordinate Tens (None = zero)."""
        cols = []
        for (name, f), part in zip(self.components, parts):
            if part is None:
                part = f.zero_coords(exact=exact)
            cols.append(part)
        vec = concat0(cols)
        if exact:
            return RatMat(vec.arr.reshape(-1, 1).copy(), vec.den)
        return vec.arr.reshape(-1, 1)

    def split(self, mat):
        """Split a (dim x k) matrix of sections into per-component blocks."""
        out = []
        for i in range(len(self.components)):
            if isinstance(mat, RatMat):
                out.append(RatMat(mat.num[self.slice(i), :].copy(), mat.den))
            else:
                out.append(mat[self.slice(i), :])
        return out


@dataclass
class InvariantConnection:
    pair: object
    fsum: FiberSum
    dRho: list           # per k-basis element
    alpha: list          # per m-basis element
    label: str
    exact: bool = True
    _kap: object = field(default=None, repr=False)

    @property
    def dim(self):
        return self.fsum.dim

    def kap(self):
        if self._kap is None:
            k = self.pair.m_bracket_to_k()
            self._kap = k if self.exact else k.to_float()
        return self._kap

    def drho_of_bracket(self, a, b):
        """dRho([e_a, e_b]) for m-basis elements (bracket lands in k)."""
        kap = self.kap()
        acc = None
        for kidx in range(self.pair.dim_k):
            coef = kap.item(a, b, kidx)
            if coef == 0:
                continue
            term = self.dRho[kidx] * coef
            acc = term if acc is None else acc + term
        if acc is None:
            if self.exact:
                return RatMat.zeros(self.dim, self.dim)
            return np.zeros((self.dim, self.dim))
        return acc

    def curvature(self, a, b):
        al = self.alpha
        return al[a] @ al[b] - al[b] @ al[a] - self.drho_of_bracket(a, b)

    def curvature_pairs(self):
        return combinations(range(self.pair.n), 2)

    def to_float(self):
        if not self.exact:
            return self
        return InvariantConnection(
            self.pair, self.fsum,
            [m.to_float() for m in self.dRho],
            [m.to_float() for m in self.alpha],
            self.label, exact=False)

    # -- structural invariants -------------------------------------------
    def check_representation(self):
        ck = self.pair.k_structure()
        nk = self.pair.dim_k
        for i in range(nk):
            for j in range(i + 1, nk):
                acc = self.dRho[i] @ self.dRho[j] - self.dRho[j] @ self.dRho[i]
                for k in range(nk):
                    coef = ck.item(i, j, k)
                    if coef:
                        acc = acc - self.dRho[k] * coef
                if not _is_zero_mat(acc):
                    return False
        return True

    def check_equivariance(self):
        # [dRho(A), alpha(X)] = alpha([A, X])
        adk = self.pair.ad_k_on_m()
        n, nk = self.pair.n, self.pair.dim_k
        for k in range(nk):
            for a in range(n):
                acc = self.dRho[k] @ self.alpha[a] - self.alpha[a] @ self.dRho[k]
                for b in range(n):
                    coef = adk.item(k, b, a)
                    if coef:
                        acc = acc - self.alpha[b] * coef
                if not _is_zero_mat(acc):
                    return False
        return True


def _is_zero_mat(m, tol=1e-9):
    if isinstance(m, RatMat):
        return m.is_zero()
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return bool(np.all(np.abs(m) <= tol * scale))


def corep_matrices(pair, fib, exact=True):
    """Isotropy action dRho on a covariant tensor fiber, one matrix per
    k-basis element."""
    adk = pair.ad_k_on_m()
    if not exact:
        adk = adk.to_float()
    rank = fib.rank
    specs = {
        1: ["kea,se->ksa"],
        2: ["kea,seb->ksab", "keb,sae->ksab"],
        3: ["kea,sebc->ksabc", "keb,saec->ksabc", "kec,sabe->ksabc"],
        4: ["kea,sebcd->ksabcd", "keb,saecd->ksabcd",
            "kec,sabed->ksabcd", "ked,sabce->ksabcd"],
    }[rank]
    basis = fib.basis(exact=exact, cache=False)
    acc = None
    for spec in specs:
        term = einsum(spec, adk, basis)
        acc = term if acc is None else acc + term
    acc = acc * F(-1)
    coords = fib.project(acc)            # (nk, batch, dim)
    nk = pair.dim_k
    mats = []
    for k in range(nk):
        block = np.ascontiguousarray(coords.arr[k].T)
        if exact:
            mats.append(RatMat(block.copy(), coords.den))
        else:
            mats.append(block)
    return mats


def drho_blockdiag(pair, fsum, exact=True):
    per_comp = [corep_matrices(pair, f, exact=exact) for _, f in fsum.components]
    out = []
    for k in range(pair.dim_k):
        out.append(fsum.assemble_blocks(
            {(i, i): per_comp[i][k] for i in range(len(fsum.components))},
            exact=exact))
    return out


# ---------------------------------------------------------------------------
# the algebraic maps of the Killing prolongations


def r_triangle_apply(curv, sigma, option=1):
    """(R <| sigma)_abcd on a batch of Sym^2 tensors, direction index first."""
    R = curv.Rud
    if option == 1:
        return einsum("cdea,sbe->sabcd", R, sigma) * F(2, 3) \
            - einsum("bcea,sde->sabcd", R, sigma) * F(1, 3) \
            + einsum("bdea,sce->sabcd", R, sigma) * F(1, 3)
    t = einsum("cdea,sbe->sabcd", R, sigma) * F(5, 12) \
        + einsum("cdeb,sae->sabcd", R, sigma) * F(1, 4) \
        + (einsum("abec,sde->sabcd", R, sigma)
           - einsum("abed,sce->sabcd", R, sigma)) * F(1, 12) \
        + einsum("caeb,sde->sabcd", R, sigma) * F(1, 3) \
        - einsum("daeb,sce->sabcd", R, sigma) * F(1, 3)
    return t


def r_diamond_apply(curv, mu):
    """(R <> mu)_abcde on a batch of hook tensors, direction index first."""
    R = curv.Rud
    line1 = einsum("bcfa,sfde->sabcde", R, mu) \
        + einsum("defa,sfbc->sabcde", R, mu) \
        - einsum("befa,sfcd->sabcde", R, mu) * F(1, 2) \
        - einsum("cdfa,sfbe->sabcde", R, mu) * F(1, 2) \
        + einsum("bdfa,sfce->sabcde", R, mu) * F(1, 2) \
        + einsum("cefa,sfbd->sabcde", R, mu) * F(1, 2)
    Rsym = (R + R.perm("adcb")) * F(1, 2)          # R_a(b^f_d) on [a,b,f,d]
    musym = (mu + mu.perm("bac")) * F(1, 2)        # mu_(ce)f on [c,e,f]
    line2 = (einsum("abfd,scef->sabcde", Rsym, musym)
             - einsum("acfd,sbef->sabcde", Rsym, musym)
             - einsum("abfe,scdf->sabcde", Rsym, musym)
             + einsum("acfe,sbdf->sabcde", Rsym, musym)) * F(2, 3)
    line3 = (einsum("bcfd,seaf->sabcde", R, musym)
             - einsum("bcfe,sdaf->sabcde", R, musym)
             + einsum("defb,scaf->sabcde", R, musym)
             - einsum("defc,sbaf->sabcde", R, musym)) * F(-2, 3)
    return line1 + line2 + line3


def r_diamond_lines(curv, mu):
    """The three lines of R <> mu separately (for the per-line checks)."""
    R = curv.Rud
    line1 = einsum("bcfa,sfde->sabcde", R, mu) \
        + einsum("defa,sfbc->sabcde", R, mu) \
        - einsum("befa,sfcd->sabcde", R, mu) * F(1, 2) \
        - einsum("cdfa,sfbe->sabcde", R, mu) * F(1, 2) \
        + einsum("bdfa,sfce->sabcde", R, mu) * F(1, 2) \
        + einsum("cefa,sfbd->sabcde", R, mu) * F(1, 2)
    Rsym = (R + R.perm("adcb")) * F(1, 2)
    musym = (mu + mu.perm("bac")) * F(1, 2)
    line2 = (einsum("abfd,scef->sabcde", Rsym, musym)
             - einsum("acfd,sbef->sabcde", Rsym, musym)
             - einsum("abfe,scdf->sabcde", Rsym, musym)
             + einsum("acfe,sbdf->sabcde", Rsym, musym)) * F(2, 3)
    line3 = (einsum("bcfd,seaf->sabcde", R, musym)
             - einsum("bcfe,sdaf->sabcde", R, musym)
             + einsum("defb,scaf->sabcde", R, musym)
             - einsum("defc,sbaf->sabcde", R, musym)) * F(-2, 3)
    return line1, line2, line3


def x_tensor(curv, mu):
    """X_abcde = R_bc^f_d mu_aef - R_bc^f_e mu_adf + R_de^f_b mu_acf
    - R_de^f_c mu_abf, batched (mu has a leading batch axis)."""
    R = curv.Rud
    return einsum("bcfd,saef->sabcde", R, mu) \
        - einsum("bcfe,sadf->sabcde", R, mu) \
        + einsum("defb,sacf->sabcde", R, mu) \
        - einsum("defc,sabf->sabcde", R, mu)


def r_pentagon_apply(curv, mu):
    """(R pentagon mu)_abcde = (1/3) of the hook automorphism applied to X."""
    return fun_automorphism(x_tensor(curv, mu)) * F(1, 3)


def two_mu_sym(mu):
    """mu |-> 2 mu_(bc)a with the direction index first (batched)."""
    u = mu.perm("bca")
    nd = u.arr.ndim
    return u.sym((nd - 2, nd - 1)) * F(2)


def kappa_tilde_killing1(curv, sigma):
    """sigma |-> -R_bc^d_a sigma_d, direction first (batched)."""
    return einsum("bcda,sd->sabc", curv.Rud, sigma) * F(-1)


def ky_curvature_term(curv, mu):
    """mu |-> 4 R_a[b^f_c mu_de]f, direction first (batched)."""
    t = einsum("abfc,sdef->sabcde", curv.Rud, mu)
    nd = t.arr.ndim
    return t.alt((nd - 4, nd - 3, nd - 2, nd - 1)) * F(4)


# ---------------------------------------------------------------------------
# named connections


def _family(curv, fn, src_kind, dst_kind, src_rank=None, dst_rank=None):
    n = curv.n
    src = fiber(n, src_kind, src_rank)
    dst = fiber(n, dst_kind, dst_rank)
    return family_map_matrix(fn, src, dst, exact=curv.exact)


def killing1_connection(curv):
    """Prolongation connection for Killing 1-forms on Lambda^1 + Lambda^2."""
    pair = curv.pair
    n = curv.n
    fsum = FiberSum(n, [("one_form", fiber(n, ALT, 1)),
                        ("two_form", fiber(n, ALT, 2))])
    exact = curv.exact
    mu_to_sig = _family(curv, lambda b: b * F(-1), ALT, ALT, 2, 1)
    sig_to_mu = _family(curv, lambda b: kappa_tilde_killing1(curv, b),
                        ALT, ALT, 1, 2)
    alpha = [fsum.assemble_blocks({(0, 1): mu_to_sig[a], (1, 0): sig_to_mu[a]},
                                  exact=exact) for a in range(n)]
    dRho = drho_blockdiag(pair, fsum, exact=exact)
    return InvariantConnection(pair, fsum, dRho, alpha, "killing1", exact)


def first_stage_connection(curv, option=1):
    """Stage-one prolongation on Sym^2 + HookAlt."""
    pair, n, exact = curv.pair, curv.n, curv.exact
    fsum = FiberSum(n, [("sym2", fiber(n, SYM, 2)),
                        ("hook", fiber(n, HOOK_ALT))])
    mu_to_sig = _family(curv, two_mu_sym, HOOK_ALT, SYM, None, 2)
    sig_to_mu = _family(curv, lambda b: r_triangle_apply(curv, b, option) * F(-1),
                        SYM, HOOK_ALT, 2, None)
    alpha = [fsum.assemble_blocks({(0, 1): mu_to_sig[a], (1, 0): sig_to_mu[a]},
                                  exact=exact) for a in range(n)]
    dRho = drho_blockdiag(pair, fsum, exact=exact)
    return InvariantConnection(pair, fsum, dRho, alpha,
                               f"first_stage_opt{option}", exact)


def killing2_connection(curv, option=1):
    """Killing 2-tensor prolongation on Sym^2 + HookAlt + Window."""
    pair, n, exact = curv.pair, curv.n, curv.exact
    fsum = FiberSum(n, [("sym2", fiber(n, SYM, 2)),
                        ("hook", fiber(n, HOOK_ALT)),
                        ("window", fiber(n, WINDOW))])
    mu_to_sig = _family(curv, two_mu_sym, HOOK_ALT, SYM, None, 2)
    sig_to_mu = _family(curv, lambda b: r_triangle_apply(curv, b, option) * F(-1),
                        SYM, HOOK_ALT, 2, None)
    rho_to_mu = _family(curv, lambda b: b * F(-1), WINDOW, HOOK_ALT)
    if option == 1:
        mu_to_rho = _family(curv, lambda b: r_diamond_apply(curv, b) * F(-1),
                            HOOK_ALT, WINDOW)
    else:
        lifts = _unique_second_lift(curv, option)
        s2dim = fiber(n, SYM, 2).dim
        for L in lifts:
            if np.any(L.num[:, :s2dim]):
                raise ProlongError("second-stage lift has a Sym^2 component")
        mu_to_rho = [RatMat(L.num[:, s2dim:].copy(), L.den) for L in lifts]
    alpha = [fsum.assemble_blocks(
        {(0, 1): mu_to_sig[a], (1, 0): sig_to_mu[a], (1, 2): rho_to_mu[a],
         (2, 1): mu_to_rho[a]}, exact=exact) for a in range(n)]
    dRho = drho_blockdiag(pair, fsum, exact=exact)
    return InvariantConnection(pair, fsum, dRho, alpha,
                               f"killing2_opt{option}", exact)


def _unique_second_lift(curv, option):
    """Solve for the unique kappa-tilde of the second prolongation stage.

    The boundary Lambda^1 (x) Window -> Lambda^2 (x) HookAlt is injective
    (SES2), so the lift of the stage-one curvature through it is unique; for
    option one it reproduces the R-diamond formula.  The lift equations
    P_a L_b - P_b L_a = Lambda(a,b) decouple over the source index, so they
    are one linear system with dim(E) right-hand sides.
    """
    assert curv.exact, "the unique-lift solver is exact-only"
    n = curv.n
    stage = first_stage_connection(curv, option)
    hook = fiber(n, HOOK_ALT)
    win = fiber(n, WINDOW)
    E = stage.fsum.dim
    hdim, wdim = hook.dim, win.dim
    # P_a = +slice window -> hook (the prolongation boundary)
    P = _family(curv, lambda t: t, WINDOW, HOOK_ALT)
    pairs = list(combinations(range(n), 2))
    pden = 1
    for m in P:
        pden = pden * m.den // math.gcd(pden, m.den)
    A = np.zeros((len(pairs) * hdim, n * wdim), dtype=object)
    for row_i, (a, b) in enumerate(pairs):
        rs = slice(row_i * hdim, (row_i + 1) * hdim)
        A[rs, b * wdim:(b + 1) * wdim] += P[a].num.astype(object) * (pden // P[a].den)
        A[rs, a * wdim:(a + 1) * wdim] -= P[b].num.astype(object) * (pden // P[b].den)
    hs = stage.fsum.slice(1)
    rhs_blocks = []
    rden = 1
    lams = {}
    for a, b in pairs:
        lam = stage.curvature(a, b)
        lams[(a, b)] = RatMat(lam.num[hs, :].copy(), lam.den)
        rden = rden * lam.den // math.gcd(rden, lam.den)
    Rv = np.zeros((len(pairs) * hdim, E), dtype=object)
    for row_i, (a, b) in enumerate(pairs):
        lamh = lams[(a, b)]
        Rv[row_i * hdim:(row_i + 1) * hdim, :] = \
            lamh.num.astype(object) * (rden // lamh.den)
    sol = solve(RatMat(A, pden), RatMat(Rv, rden))
    return [RatMat(sol.num[a * wdim:(a + 1) * wdim, :].copy(), sol.den)
            for a in range(n)]


def symmetric_power_connection(curv):
    """Connection induced by killing1 on its symmetric square."""
    pair, n, exact = curv.pair, curv.n, curv.exact
    fsum = FiberSum(n, [("sym2", fiber(n, SYM, 2)),
                        ("l1l2", fiber(n, L1L2)),
                        ("sym2l2", fiber(n, SYM2L2))])
    mu_to_sig = _family(curv, two_mu_sym, L1L2, SYM, None, 2)
    sig_to_mu = _family(
        curv, lambda b: einsum("cdea,sbe->sabcd", curv.Rud, b) * F(-1),
        SYM, L1L2, 2, None)
    rho_to_mu = _family(curv, lambda b: b * F(-1), SYM2L2, L1L2)
    mu_to_rho = _family(
        curv,
        lambda b: (einsum("bcfa,sfde->sabcde", curv.Rud, b)
                   + einsum("defa,sfbc->sabcde", curv.Rud, b)) * F(-1),
        L1L2, SYM2L2)
    alpha = [fsum.assemble_blocks(
        {(0, 1): mu_to_sig[a], (1, 0): sig_to_mu[a], (1, 2): rho_to_mu[a],
         (2, 1): mu_to_rho[a]}, exact=exact) for a in range(n)]
    dRho = drho_blockdiag(pair, fsum, exact=exact)
    return InvariantConnection(pair, fsum, dRho, alpha, "sym_power", exact)


def pentagon_connection(curv):
    """The modified connection: symmetric power plus the pentagon term."""
    base = symmetric_power_connection(curv)
    n = curv.n
    extra = _family(curv, lambda b: r_pentagon_apply(curv, b), L1L2, SYM2L2)
    alpha = []
    for a in range(n):
        add = base.fsum.assemble_blocks({(2, 1): extra[a]}, exact=curv.exact)
        alpha.append(base.alpha[a] + add)
    return InvariantConnection(curv.pair, base.fsum, base.dRho, alpha,
                               "pentagon", curv.exact)


def phi_map(curv):
    """Phi: Sym^2(L1+L2) bundle -> killing2 bundle, as a block matrix."""
    n, exact = curv.n, curv.exact
    src = FiberSum(n, [("sym2", fiber(n, SYM, 2)),
                       ("l1l2", fiber(n, L1L2)),
                       ("sym2l2", fiber(n, SYM2L2))])
    dst = FiberSum(n, [("sym2", fiber(n, SYM, 2)),
                       ("hook", fiber(n, HOOK_ALT)),
                       ("window", fiber(n, WINDOW))])
    eye = map_matrix(lambda b: b, fiber(n, SYM, 2), fiber(n, SYM, 2),
                     exact=exact)
    mu_part = map_matrix(lambda b: b - b.alt((1, 2, 3)), fiber(n, L1L2),
                         fiber(n, HOOK_ALT), exact=exact)
    rho_part = map_matrix(lambda b: b - b.alt((1, 2, 3, 4)),
                          fiber(n, SYM2L2), fiber(n, WINDOW), exact=exact)
    if exact:
        den = 1
        for b in (eye, mu_part, rho_part):
            den = den * b.den // math.gcd(den, b.den)
        out = np.zeros((dst.dim, src.dim), dtype=object)
        out[dst.slice(0), src.slice(0)] = eye.num.astype(object) * (den // eye.den)
        out[dst.slice(1), src.slice(1)] = mu_part.num.astype(object) * (den // mu_part.den)
        out[dst.slice(2), src.slice(2)] = rho_part.num.astype(object) * (den // rho_part.den)
        return RatMat(out, den), src, dst
    out = np.zeros((dst.dim, src.dim))
    out[dst.slice(0), src.slice(0)] = eye
    out[dst.slice(1), src.slice(1)] = mu_part
    out[dst.slice(2), src.slice(2)] = rho_part
    return out, src, dst


def ky_connection(curv):
    """Killing-Yano 3-form prolongation on Lambda^3 + Lambda^4."""
    pair, n, exact = curv.pair, curv.n, curv.exact
    fsum = FiberSum(n, [("three_form", fiber(n, ALT, 3)),
                        ("four_form", fiber(n, ALT, 4))])
    rho_to_mu = _family(curv, lambda b: b * F(-1), ALT, ALT, 4, 3)
    mu_to_rho = _family(curv, lambda b: ky_curvature_term(curv, b),
                        ALT, ALT, 3, 4)
    alpha = [fsum.assemble_blocks({(0, 1): rho_to_mu[a], (1, 0): mu_to_rho[a]},
                                  exact=exact) for a in range(n)]
    dRho = drho_blockdiag(pair, fsum, exact=exact)
    return InvariantConnection(pair, fsum, dRho, alpha, "killing_yano", exact)


def affine_connection(curv):
    """Affine Killing prolongation on Lambda^1 + End, all indices lowered."""
    pair, n, exact = curv.pair, curv.n, curv.exact
    fsum = FiberSum(n, [("one_form", fiber(n, ALT, 1)),
                        ("endo", fiber(n, FULL, 2))])
    phi_to_x = _family(curv, lambda b: b * F(-1), FULL, ALT, 2, 1)
    x_to_phi = _family(curv, lambda b: kappa_tilde_killing1(curv, b),
                       ALT, FULL, 1, 2)
    alpha = [fsum.assemble_blocks({(0, 1): phi_to_x[a], (1, 0): x_to_phi[a]},
                                  exact=exact) for a in range(n)]
    dRho = drho_blockdiag(pair, fsum, exact=exact)
    return InvariantConnection(pair, fsum, dRho, alpha, "affine", exact)


# ---------------------------------------------------------------------------
# the generic prolongation combiner


class ProlongError(Exception):
    pass


def generic_prolong(pair, u_conn, v_conn, partials, kappa_tildes, label="prolonged"):
    """Combine (U, nabla), (V, nabla), a boundary and a curvature lift.

    partials[a]: V -> U and kappa_tildes[a]: U -> V matrices per direction.
    Preconditions (checked exactly): the coupled exterior derivative of the
    boundary vanishes, and the lift hits the curvature of U.  Returns the
    prolonged connection on U + V with its (Zwei) conclusions asserted by
    `check_zwei`.
    """
    n = pair.n
    for a in range(n):
        for b in range(a + 1, n):
            dd = u_conn.alpha[a] @ partials[b] - partials[b] @ v_conn.alpha[a] \
                - u_conn.alpha[b] @ partials[a] + partials[a] @ v_conn.alpha[b]
            if not _is_zero_mat(dd):
                raise ProlongError("coupled exterior derivative of the "
                                   "boundary does not vanish")
            lift = partials[a] @ kappa_tildes[b] - partials[b] @ kappa_tildes[a]
            if not _is_zero_mat(lift - u_conn.curvature(a, b)):
                raise ProlongError("kappa-tilde is not a lift of the curvature")
    fsum = FiberSum(n, u_conn.fsum.components + v_conn.fsum.components)
    nu = len(u_conn.fsum.components)
    exact = u_conn.exact
    alpha = []
    for a in range(n):
        blocks = {}
        for i in range(nu):
            for j in range(nu):
                blocks[(i, j)] = _subblock(u_conn.alpha[a], u_conn.fsum, i, j)
        nv = len(v_conn.fsum.components)
        for i in range(nv):
            for j in range(nv):
                blocks[(nu + i, nu + j)] = _subblock(v_conn.alpha[a], v_conn.fsum, i, j)
        for i in range(nu):
            for j in range(nv):
                blocks[(i, nu + j)] = _subblock_cross(partials[a], u_conn.fsum,
                                                      v_conn.fsum, i, j) * F(-1)
        for i in range(nv):
            for j in range(nu):
                blocks[(nu + i, j)] = _subblock_cross(kappa_tildes[a],
                                                      v_conn.fsum, u_conn.fsum, i, j)
        alpha.append(fsum.assemble_blocks(blocks, exact=exact))
    dRho = []
    for k in range(pair.dim_k):
        blocks = {}
        for i in range(nu):
            blocks[(i, i)] = _subblock(u_conn.dRho[k], u_conn.fsum, i, i)
        for i in range(len(v_conn.fsum.components)):
            blocks[(nu + i, nu + i)] = _subblock(v_conn.dRho[k], v_conn.fsum, i, i)
        dRho.append(fsum.assemble_blocks(blocks, exact=exact))
    return InvariantConnection(pair, fsum, dRho, alpha, label, exact)


def _subblock(mat, fsum, i, j):
    if isinstance(mat, RatMat):
        return RatMat(mat.num[fsum.slice(i), fsum.slice(j)].copy(), mat.den)
    return mat[fsum.slice(i), fsum.slice(j)]


def _subblock_cross(mat, rows_fsum, cols_fsum, i, j):
    if isinstance(mat, RatMat):
        return RatMat(mat.num[rows_fsum.slice(i), cols_fsum.slice(j)].copy(),
                      mat.den)
    return mat[rows_fsum.slice(i), cols_fsum.slice(j)]


def check_zwei(conn, n_u_components, partials):
    """Conclusion (Zwei): curvature has zero U-part and V-part in ker(d-wedge).

    partials[a] maps V-coords to U-coords (the boundary of the prolongation).
    """
    fsum = conn.fsum
    udim = fsum.offsets[n_u_components]
    n = conn.pair.n
    for a, b in conn.curvature_pairs():
        lam = conn.curvature(a, b)
        upart = lam.num[:udim, :] if conn.exact else lam[:udim, :]
        zero = (not np.any(upart)) if conn.exact else _is_zero_mat(upart)
        if not zero:
            return False
    # V-part T_{ab}: check (d wedge T)_{abc} = 0
    vparts = {}
    for a, b in conn.curvature_pairs():
        lam = conn.curvature(a, b)
        if conn.exact:
            vparts[(a, b)] = RatMat(lam.num[udim:, :].copy(), lam.den)
        else:
            vparts[(a, b)] = lam[udim:, :]
    def getv(a, b):
        if a == b:
            return None
        if (a, b) in vparts:
            return vparts[(a, b)]
        return vparts[(b, a)] * F(-1) if conn.exact else -vparts[(b, a)]
    for a, b, c in combinations(range(n), 3):
        acc = partials[a] @ getv(b, c) - partials[b] @ getv(a, c) \
            + partials[c] @ getv(a, b)
        if not _is_zero_mat(acc):
            return False
    return True
