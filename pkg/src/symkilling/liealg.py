"""Lie algebras with rational structure constants and symmetric pairs.

Catalog algebras are built from explicit matrix models: so(n) directly, su(n)
realified to 2n x 2n real matrices, sp(n) (quaternionic) realified to 4n x 4n.
Realification is a faithful Lie algebra embedding, so structure constants can
be read off by exact linear solves against the flattened basis.  The involution
is then diagonalized exactly (theta-adapted basis: m first, then k) and the raw
invariant metric on m is minus the Killing form (identity for flat pairs).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .exact import RatMat, kernel, mat_inverse, solve
from .tensors import Ten, einsum, ten_to_ratmat

F = Fraction


# ---------------------------------------------------------------------------
# exact matrix models


def _zeros(n):
    m = np.empty((n, n), dtype=object)
    m[:] = F(0)
    return m


def _eye(n):
    m = _zeros(n)
    for i in range(n):
        m[i, i] = F(1)
    return m


def _E(n, i, j, val=F(1)):
    m = _zeros(n)
    m[i, j] = F(val)
    return m


def realify_complex(re, im):
    """n x n complex (re + i*im) -> 2n x 2n real: [[re, -im], [im, re]]."""
    n = re.shape[0]
    out = _zeros(2 * n)
    out[:n, :n] = re
    out[n:, n:] = re
    out[:n, n:] = -im
    out[n:, :n] = im
    return out


_QUAT_LEFT = {
    # left multiplication tables of 1, i, j, k on (a, b, c, d) coordinates
    0: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
    1: np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
    2: np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]]),
    3: np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
}


def realify_quaternion(parts):
    """n x n quaternionic (a + bi + cj + dk) -> 4n x 4n real."""
    n = parts[0].shape[0]
    out = _zeros(4 * n)
    for u in range(4):
        table = _QUAT_LEFT[u]
        for r in range(4):
            for s in range(4):
                if table[r, s]:
                    blk = parts[u] * F(int(table[r, s]))
                    out[r * n:(r + 1) * n, s * n:(s + 1) * n] += blk
    return out


def so_basis(n):
    return [_E(n, p, q) - _E(n, q, p) for p, q in combinations(range(n), 2)]


def su_basis(n):
    basis = []
    z = _zeros(n)
    for p, q in combinations(range(n), 2):
        basis.append(realify_complex(_E(n, p, q) - _E(n, q, p), z))
        basis.append(realify_complex(z, _E(n, p, q) + _E(n, q, p)))
    for j in range(n - 1):
        basis.append(realify_complex(z, _E(n, j, j) - _E(n, j + 1, j + 1)))
    return basis


def sp_basis(n):
    basis = []
    z = _zeros(n)
    for j in range(n):
        for u in (1, 2, 3):
            parts = [z, z, z, z]
            parts = [p.copy() for p in parts]
            parts[u] = _E(n, j, j)
            basis.append(realify_quaternion(parts))
    for p, q in combinations(range(n), 2):
        basis.append(realify_quaternion([_E(n, p, q) - _E(n, q, p), z, z, z]))
        for u in (1, 2, 3):
            parts = [z, z, z, z]
            parts[u] = _E(n, p, q) + _E(n, q, p)
            basis.append(realify_quaternion(parts))
    return basis


def _matmul(a, b):
    return np.dot(a, b)


def _bracket(a, b):
    return _matmul(a, b) - _matmul(b, a)


def _flatten(mats):
    return RatMat.from_fractions([[x for x in m.ravel()] for m in mats]).T


# ---------------------------------------------------------------------------
# abstract algebra


@dataclass
class LieAlgebra:
    dim: int
    c: Ten                 # c[i, j, k]: [e_i, e_j] = sum_k c[i,j,k] e_k
    B: RatMat = field(default=None)

    def __post_init__(self):
        if self.B is None:
            self.B = ten_to_ratmat(einsum("ipq,jqp->ij", self.c, self.c))

    def check_antisymmetry(self):
        return (self.c + self.c.perm("bac")).is_zero()

    def check_jacobi(self):
        # cyclic sum of [[ei,ej],ek]
        t = einsum("abp,pcq->abcq", self.c, self.c)
        return (t + t.perm("bcad") + t.perm("cabd")).is_zero()

    def check_killing_ad_invariance(self):
        Bt = Ten(self.B.num.copy(), self.B.den)
        lhs = einsum("abp,pc->abc", self.c, Bt)
        rhs = einsum("acp,bp->abc", self.c, Bt)
        return (lhs + rhs).is_zero()


def algebra_from_matrices(mats):
    """Structure constants of the real span of a closed matrix basis."""
    N = len(mats)
    flat = _flatten(mats)
    brackets = [_bracket(mats[i], mats[j]) for i in range(N) for j in range(N)]
    rhs = _flatten(brackets)
    X = solve(flat, rhs)
    # X[k, i*N+j] is the e_k coefficient of [e_i, e_j]
    c = Ten(X.num.T.reshape(N, N, N).copy(), X.den)
    return LieAlgebra(N, c)


def theta_matrix(mats, theta_fn):
    flat = _flatten(mats)
    images = _flatten([theta_fn(m) for m in mats])
    return solve(flat, images)


# ---------------------------------------------------------------------------
# symmetric pairs


@dataclass
class SymmetricPair:
    algebra: LieAlgebra          # in the theta-adapted basis: m first, k second
    n: int                       # dim m
    label: str
    metric_raw: RatMat           # minus Killing form on m (identity for flat)
    theta_diag: RatMat           # the involution in the adapted basis
    group_aligned: bool = False  # group pairs: k-basis aligned with m-basis
    reducible_hint: bool = False

    @property
    def dim_k(self):
        return self.algebra.dim - self.n

    @property
    def c(self):
        return self.algebra.c

    def ad_k_on_m(self):
        """dRho generators: for each k-basis element, the matrix ad(A)|_m.

        Returns a Ten of shape (dim_k, n, n): adk[kappa, a, b] with
        [A_kappa, e_b] = sum_a adk[kappa, a, b] e_a.
        """
        n = self.n
        sub = self.c.arr[n:, :n, :n]
        return Ten(np.ascontiguousarray(np.swapaxes(sub, 1, 2)), self.c.den)

    def m_bracket_to_k(self):
        """kap[a, b, kappa]: [e_a, e_b] = sum kap[a,b,kappa] A_kappa, a,b in m."""
        n = self.n
        return Ten(self.c.arr[:n, :n, n:].copy(), self.c.den)

    def k_structure(self):
        n = self.n
        return Ten(self.c.arr[n:, n:, n:].copy(), self.c.den)


def adapt_pair(alg, theta, label, metric_raw=None, group_aligned=False,
               reducible_hint=False):
    """Diagonalize an involution exactly and reorder the basis as m then k."""
    N = alg.dim
    eye = RatMat.eye(N)
    if not (theta @ theta) == eye:
        raise ValueError("theta is not an involution")
    m_vecs = kernel(theta + eye)
    k_vecs = kernel(theta - eye)
    n = m_vecs.shape[1]
    if n + k_vecs.shape[1] != N:
        raise ValueError("involution eigenspaces do not span")
    C = m_vecs.hstack(k_vecs)
    Cinv = mat_inverse(C)
    ct = einsum("pi,qj,pqr,kr->ijk", ratten(C), ratten(C), alg.c, ratten(Cinv))
    alg2 = LieAlgebra(N, ct)
    theta2 = Cinv @ theta @ C
    if metric_raw is None:
        metric_raw = _submatrix(alg2.B, n) * F(-1)
    return SymmetricPair(alg2, n, label, metric_raw, theta2,
                         group_aligned=group_aligned,
                         reducible_hint=reducible_hint)


def _submatrix(M, n):
    return RatMat(M.num[:n, :n].copy(), M.den)


def ratten(M):
    return Ten(M.num.copy(), M.den)


def make_pair(mats, theta_fn, label, group_aligned=False, reducible_hint=False):
    alg = algebra_from_matrices(mats)
    th = theta_matrix(mats, theta_fn)
    return adapt_pair(alg, th, label, group_aligned=group_aligned,
                      reducible_hint=reducible_hint)


def _conj_by(D):
    Dinv = D  # our D's are involutive diagonal-ish matrices
    return lambda X: _matmul(_matmul(D, X), Dinv)


def _complex_conj_real(n):
    # entrywise complex conjugation in the realified picture
    D = _zeros(2 * n)
    D[:n, :n] = _eye(n)
    D[n:, n:] = -_eye(n)
    return D


def build_catalog(label, params=()):
    """Construct a validated catalog pair, e.g. build_catalog('sphere', [4])."""
    params = list(params)
    if label == "flat":
        (n,) = params
        if n < 1:
            raise ValueError("flat(n) needs n >= 1")
        c = Ten.zeros((n, n, n))
        alg = LieAlgebra(n, c)
        return SymmetricPair(alg, n, f"flat:{n}", RatMat.eye(n),
                             RatMat.eye(n) * F(-1))
    if label == "sphere":
        (n,) = params
        if n < 2:
            raise ValueError("sphere(n) needs n >= 2")
        mats = so_basis(n + 1)
        D = _eye(n + 1)
        D[0, 0] = F(-1)
        return make_pair(mats, _conj_by(D), f"sphere:{n}")
    if label == "cp":
        (m,) = params
        if m < 1:
            raise ValueError("cp(m) needs m >= 1")
        mats = su_basis(m + 1)
        Dc = _eye(m + 1)
        Dc[0, 0] = F(-1)
        D = realify_complex(Dc, _zeros(m + 1))
        return make_pair(mats, _conj_by(D), f"cp:{m}")
    if label == "hp":
        (k,) = params
        if k < 1:
            raise ValueError("hp(k) needs k >= 1")
        mats = sp_basis(k + 1)
        Dq = _eye(k + 1)
        Dq[0, 0] = F(-1)
        z = _zeros(k + 1)
        D = realify_quaternion([Dq, z, z, z])
        return make_pair(mats, _conj_by(D), f"hp:{k}")
    if label == "slso":
        (n,) = params
        if n < 2:
            raise ValueError("slso(n) needs n >= 2")
        mats = su_basis(n)
        D = _complex_conj_real(n)
        return make_pair(mats, _conj_by(D), f"slso:{n}")
    if label == "su2n_spn":
        (n,) = params
        if n < 2:
            raise ValueError("su2n_spn(n) needs n >= 2")
        mats = su_basis(2 * n)
        zn = _zeros(2 * n)
        Jc = _zeros(2 * n)
        for i in range(n):
            Jc[i, n + i] = F(1)
            Jc[n + i, i] = F(-1)
        J = realify_complex(Jc, zn)
        Jinv = realify_complex(-Jc, zn)
        D = _complex_conj_real(2 * n)
        theta_fn = lambda X: _matmul(_matmul(J, _matmul(_matmul(D, X), D)), Jinv)
        return make_pair(mats, theta_fn, f"su2n_spn:{n}")
    if label == "group":
        (h,) = params
        mats_h, reducible = _group_factor_basis(h)
        nh = len(mats_h)
        size = mats_h[0].shape[0]
        mats = []
        # pre-adapted: m_i = diag(h_i, -h_i), then k_i = diag(h_i, h_i)
        for m in mats_h:
            blk = _zeros(2 * size)
            blk[:size, :size] = m
            blk[size:, size:] = -m
            mats.append(blk)
        for m in mats_h:
            blk = _zeros(2 * size)
            blk[:size, :size] = m
            blk[size:, size:] = m
            mats.append(blk)
        alg = algebra_from_matrices(mats)
        metric_raw = _submatrix(alg.B, nh) * F(-1)
        th = np.zeros((2 * nh, 2 * nh), dtype=np.int64)
        for i in range(nh):
            th[i, i] = -1
            th[nh + i, nh + i] = 1
        pair = SymmetricPair(alg, nh, f"group:{h}", metric_raw, RatMat(th),
                             group_aligned=True, reducible_hint=reducible)
        return pair
    raise ValueError(f"unknown catalog label {label!r}")


def _group_factor_basis(h):
    kind = h[:2]
    num = int(h[2:])
    if kind == "su":
        if num < 2:
            raise ValueError("group(su(n)) needs n >= 2")
        return su_basis(num), False
    if kind == "so":
        if num < 3:
            raise ValueError("group(so(n)) needs n >= 3")
        return so_basis(num), num == 4
    if kind == "sp":
        if num < 1:
            raise ValueError("group(sp(n)) needs n >= 1")
        return sp_basis(num), False
    raise ValueError(f"unknown group factor {h!r}")


SPACE_SPECS = {
    "sphere": 1, "cp": 1, "hp": 1, "slso": 1, "su2n_spn": 1, "flat": 1,
    "group": 1,
}


def parse_space(spec):
    """Parse 'sphere:4' / 'group:su3' / 'flat:3' into a catalog pair."""
    if ":" not in spec:
        raise ValueError(f"space spec {spec!r} needs label:params")
    label, _, rest = spec.partition(":")
    if label == "group":
        return build_catalog("group", [rest])
    return build_catalog(label, [int(x) for x in rest.split(":")])


# ---------------------------------------------------------------------------
# validation


def validate(pair):
    """Run every algebraic invariant; returns {check: bool}."""
    alg = pair.algebra
    n, N = pair.n, pair.algebra.dim
    c = alg.c
    rep = {}
    rep["antisymmetry"] = (c + c.perm("bac")).is_zero()
    t = einsum("abp,pcq->abcq", c, c)
    rep["jacobi"] = (t + t.perm("bcad") + t.perm("cabd")).is_zero()
    rep["killing_form"] = alg.B == ten_to_ratmat(einsum("ipq,jqp->ij", c, c))
    rep["killing_ad_invariant"] = alg.check_killing_ad_invariance()
    th = pair.theta_diag
    rep["theta_involution"] = (th @ th) == RatMat.eye(N)
    thT = ratten(th)
    lhs = einsum("pi,qj,pqr->ijr", thT, thT, c)
    rhs = einsum("ijp,rp->ijr", c, thT)
    rep["theta_automorphism"] = (lhs - rhs).is_zero()
    arr = c.arr
    rep["grading_mm_k"] = not np.any(arr[:n, :n, :n])
    rep["grading_km_m"] = not np.any(arr[n:, :n, n:])
    rep["grading_kk_k"] = not np.any(arr[n:, n:, :n])
    g = pair.metric_raw
    rep["metric_symmetric"] = g == g.T
    rep["metric_positive"] = _positive_definite(g)
    gt = ratten(g)
    adk = pair.ad_k_on_m()
    inv = einsum("kax,ay->kxy", adk, gt)
    swapped = Ten(np.swapaxes(inv.arr, 1, 2).copy(), inv.den)
    rep["metric_ad_k_invariant"] = (inv + swapped).is_zero()
    rep["dims"] = pair.n + pair.dim_k == N
    return rep


def _positive_definite(g):
    rows = g.to_fractions()
    n = len(rows)
    a = [row[:] for row in rows]
    for i in range(n):
        piv = a[i][i]
        if piv <= 0:
            return False
        for r in range(i + 1, n):
            f = a[r][i] / piv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return True


# ---------------------------------------------------------------------------
# custom pairs (JSON)


def load_custom(path_or_dict):
    """Custom-pair JSON: {"dim": N, "c": sparse triplets, "theta": matrix,
    "metric": optional}.  Rationals are "p/q" strings."""
    if isinstance(path_or_dict, (str, bytes)):
        with open(path_or_dict) as fh:
            data = json.load(fh)
    else:
        data = path_or_dict
    N = data["dim"]
    carr = np.empty((N, N, N), dtype=object)
    carr[:] = F(0)
    for i, row in enumerate(data["c"]):
        for j, entries in enumerate(row):
            for k, val in entries:
                carr[i, j, k] = F(val)
    alg = LieAlgebra(N, Ten.from_fractions(carr))
    if not (alg.c + alg.c.perm("bac")).is_zero():
        raise ValueError("structure constants are not antisymmetric")
    t = einsum("abp,pcq->abcq", alg.c, alg.c)
    if not (t + t.perm("bcad") + t.perm("cabd")).is_zero():
        raise ValueError("Jacobi identity fails for custom input")
    theta = RatMat.from_fractions([[F(x) for x in row] for row in data["theta"]])
    metric = None
    if data.get("metric") is not None:
        metric = RatMat.from_fractions([[F(x) for x in row]
                                        for row in data["metric"]])
    return adapt_pair(alg, theta, data.get("label", "custom"),
                      metric_raw=metric)
