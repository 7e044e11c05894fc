"""Symmetry-typed tensor fibers over the tangent space m, plus the structural
equivariant maps every prolongation is assembled from.

Each fiber is a subspace of the full (x)^r tensor space cut out by symmetry
constraints.  It carries an equivariant projector (a closed-form Young-style
symmetrizer), a list of representative index positions whose values coordinatize
the fiber, and embed/project maps with project o embed = id.  The projector
formulas are GL(n)-equivariant, hence equivariant for any isotropy action.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

import numpy as np

from .tensors import Ten, concat0, einsum, stack

FULL, ALT, SYM, HOOK_ALT, HOOK_SYM, L1L2, SYM2L2, WINDOW = (
    "full", "alt", "sym", "hook_alt", "hook_sym", "l1l2", "sym2l2", "window")

_DEFAULT_RANK = {HOOK_ALT: 3, HOOK_SYM: 3, L1L2: 3, SYM2L2: 4, WINDOW: 4}

_CACHE = {}


def _positions(n, kind, rank):
    idx = range(n)
    if kind == FULL:
        return [tuple(p) for p in product(idx, repeat=rank)]
    if kind == ALT:
        return [tuple(c) for c in combinations(idx, rank)]
    if kind == SYM:
        return [tuple(c) for c in combinations_with_replacement(idx, rank)]
    if kind == L1L2:
        return [(a, b, c) for a in idx for b, c in combinations(idx, 2)]
    if kind == HOOK_ALT:
        # drop (a,(b,c)) with a < b < c: one cyclic relation per distinct triple
        return [(a, b, c) for a in idx for b, c in combinations(idx, 2)
                if not a < b]
    if kind == HOOK_SYM:
        # drop the smallest-first position of every multiset
        return [(a, b, c) for a in idx
                for b, c in combinations_with_replacement(idx, 2) if a > b]
    if kind == SYM2L2:
        pairs = list(combinations(idx, 2))
        return [p + q for p, q in combinations_with_replacement(pairs, 2)]
    if kind == WINDOW:
        pairs = list(combinations(idx, 2))
        out = []
        for p, q in combinations_with_replacement(pairs, 2):
            vals = sorted(p + q)
            if len(set(p + q)) == 4 and p == (vals[0], vals[3]) \
                    and q == (vals[1], vals[2]):
                continue  # Bianchi-dependent component ((min,max),(mid,mid))
            out.append(p + q)
        return out
    raise ValueError(kind)


class Fiber:
    """A symmetry-typed subspace of (x)^r with coordinates and embed/project."""

    def __init__(self, n, kind, rank):
        self.n = n
        self.kind = kind
        self.rank = rank
        self.positions = _positions(n, kind, rank)
        self.dim = len(self.positions)
        self._pos_arrays = tuple(
            np.array([p[i] for p in self.positions], dtype=np.intp)
            for i in range(rank))
        self._adjust_blocks = None
        self._basis = None

    # -- projector -----------------------------------------------------
    def symmetrize(self, t):
        nd = t.arr.ndim
        ax = list(range(nd - self.rank, nd))
        k = self.kind
        if k == FULL:
            return t
        if k == ALT:
            return t.alt(ax)
        if k == SYM:
            return t.sym(ax)
        if k == L1L2:
            return t.alt(ax[1:])
        if k == HOOK_ALT:
            u = t.alt(ax[1:])
            return u - u.alt(ax)
        if k == HOOK_SYM:
            u = t.sym(ax[1:])
            return u - u.sym(ax)
        if k in (SYM2L2, WINDOW):
            v = t.alt(ax[:2]).alt(ax[2:])
            letters = "abcdefghij"[: self.rank]
            swapped = "".join([letters[2], letters[3], letters[0], letters[1]])
            s = (v + v.perm(swapped)) * Fraction(1, 2)
            if k == SYM2L2:
                return s
            return s - s.alt(ax)
        raise ValueError(k)

    # -- coordinates ----------------------------------------------------
    def read(self, t):
        """Read representative positions (no projection); trailing axes."""
        return Ten(t.arr[(Ellipsis,) + self._pos_arrays], t.den)

    def project(self, t):
        """Full tensor -> coordinates (equivariant)."""
        return self.read(self.symmetrize(t))

    def _blocks(self):
        if self._adjust_blocks is not None:
            return self._adjust_blocks
        groups = {}
        for i, p in enumerate(self.positions):
            groups.setdefault(tuple(sorted(p)), []).append(i)
        blocks = []
        shape = (self.n,) * self.rank
        for _, idxs in groups.items():
            seeds = np.zeros((len(idxs),) + shape, dtype=np.int64)
            for j, i in enumerate(idxs):
                seeds[j][self.positions[i]] = 1
            m = self.read(self.symmetrize(Ten(seeds)))
            # M[q, p] = value of projected unit_p at position q, restricted
            M = [[m.item(j, idxs[q_i]) for j in range(len(idxs))]
                 for q_i in range(len(idxs))]
            Minv = _invert_small(M)
            blocks.append((idxs, Minv))
        self._adjust_blocks = blocks
        return blocks

    def embed(self, v):
        """Coordinates -> full tensor (leading axes preserved)."""
        exact = v.exact
        lead = v.arr.shape[:-1]
        shape = lead + (self.n,) * self.rank
        den = 1
        if exact:
            for _, Minv in self._blocks():
                for row in Minv:
                    for x in row:
                        den = den * x.denominator // math.gcd(den, x.denominator)
        seed = np.zeros(lead + (self.dim,), dtype=object if exact else np.float64)
        varr = v.arr
        for idxs, Minv in self._blocks():
            sub = varr[..., idxs]
            k = len(idxs)
            if exact:
                Mi = np.array([[int(Minv[i][j] * den) for j in range(k)]
                               for i in range(k)], dtype=object)
                seed[..., idxs] = np.dot(sub.astype(object), Mi.T)
            else:
                Mi = np.array([[float(Minv[i][j]) for j in range(k)]
                               for i in range(k)])
                seed[..., idxs] = sub @ Mi.T
        full = np.zeros(shape, dtype=object if exact else np.float64)
        full[(Ellipsis,) + self._pos_arrays] = seed
        if exact:
            t = Ten(full, v.den * den)
        else:
            t = Ten(full, den=None)
        return self.symmetrize(t)

    def basis(self, exact=True, cache=True):
        """Embedded basis as a (dim, n, ..., n) batch."""
        if cache and self._basis is not None and self._basis.exact == exact:
            return self._basis
        eye = Ten(np.eye(self.dim, dtype=np.int64)) if exact \
            else Ten(np.eye(self.dim), den=None)
        b = self.embed(eye)
        if cache and self.dim * self.n ** self.rank <= 3_000_000:
            self._basis = b
        return b

    def basis_chunks(self, exact=True, chunk=256):
        eye = np.eye(self.dim, dtype=np.int64 if exact else np.float64)
        for s in range(0, self.dim, chunk):
            block = eye[s: s + chunk]
            v = Ten(block) if exact else Ten(block, den=None)
            yield s, self.embed(v)

    def zero_coords(self, exact=True):
        return Ten.zeros((self.dim,), exact=exact)


def fiber(n, kind, rank=None):
    if rank is None:
        rank = _DEFAULT_RANK[kind]
    key = (n, kind, rank)
    if key not in _CACHE:
        _CACHE[key] = Fiber(n, kind, rank)
    return _CACHE[key]


def _invert_small(M):
    """Invert a small Fraction matrix by Gaussian elimination."""
    k = len(M)
    A = [[Fraction(M[i][j]) for j in range(k)] + [Fraction(int(i == j)) for j in range(k)]
         for i in range(k)]
    for c in range(k):
        piv = next(i for i in range(c, k) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(k):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[k:] for row in A]


# ---------------------------------------------------------------------------
# structural maps of the prolongation calculus


def partial_inverse(theta):
    """Invert the boundary Lambda^1 (x) Lambda^2 -> Lambda^2 (x) Lambda^1.

    theta_abc (antisymmetric in ab) |-> mu_abc = theta_acb + theta_bca - theta_abc.
    """
    if not (theta + theta.perm("bac")).is_zero():
        raise ValueError("input is not antisymmetric in its first index pair")
    return theta.perm("acb") + theta.perm("bca") - theta


def l2_boundary(mu):
    """The boundary Lambda^1 (x) Lambda^2 -> Lambda^2 (x) Lambda^1: mu |-> mu_[ba]c."""
    return (mu.perm("bac") - mu) * Fraction(1, 2)


def fun_automorphism(x):
    """X |-> X - 2 X_[bc]ade - 2 X_[de]abc on Lambda^1 (x) Window."""
    t1 = x.perm("bcade") - x.perm("cbade")
    t2 = x.perm("deabc") - x.perm("edabc")
    return x - t1 - t2


def fun_automorphism_inverse(y):
    t1 = y.perm("bcade") - y.perm("cbade")
    t2 = y.perm("deabc") - y.perm("edabc")
    return (y + t1 + t2) * Fraction(-1, 3)


def mindless_recover(theta):
    """phi = (8/3) theta_a[bcde] for theta = phi_[ab]cde."""
    nd = theta.arr.ndim
    return theta.alt(range(nd - 4, nd)) * Fraction(8, 3)


def hook_sym_to_alt(mu_sym):
    """Fixed isomorphism {mu_a(bc), mu_(abc)=0} -> {mu_a[bc], mu_[abc]=0}.

    This is the correspondence the Killing equation uses: nabla_a s_bc written
    as +mu~_abc on the symmetric side equals -2 mu_(bc)a on the alternating side.
    """
    return (mu_sym.perm("bca") - mu_sym.perm("cba")) * Fraction(1, 3)


def hook_alt_to_sym(mu_alt):
    nd = mu_alt.arr.ndim
    return mu_alt.perm("bca").sym((nd - 2, nd - 1)) * Fraction(-2, 1)


# matrices of equivariant maps between fibers --------------------------------


def map_matrix(fn, src, dst, exact=True, chunk=512):
    """Matrix (dst.dim x src.dim) of a linear map given as a batched tensor fn.

    fn takes a (batch, n, ..) embedded tensor and returns a (batch, n, ..)
    tensor in dst's ambient space.
    """
    if src.dim == 0:
        from .exact import RatMat
        return RatMat.zeros(dst.dim, 0) if exact else np.zeros((dst.dim, 0))
    blocks = []
    for _, batch in src.basis_chunks(exact=exact, chunk=chunk):
        out = dst.project(fn(batch))
        blocks.append(out)
    full = concat0(blocks)
    arr = full.arr.reshape(src.dim, dst.dim)
    cols = Ten(np.ascontiguousarray(arr.T), full.den)
    if exact:
        from .exact import RatMat
        return RatMat(cols.arr.copy(), cols.den)
    return cols.arr


def family_map_matrix(fn, src, dst, exact=True, chunk=512):
    """Per-direction matrices of a map into Lambda^1 (x) dst.

    fn returns a (batch, n, <dst shape>) tensor: axis 1 is the direction.
    Result: list over directions a of (dst.dim x src.dim) matrices.
    """
    n = src.n
    if src.dim == 0:
        from .exact import RatMat
        empty = RatMat.zeros(dst.dim, 0) if exact else np.zeros((dst.dim, 0))
        return [empty for _ in range(n)]
    blocks = []
    for _, batch in src.basis_chunks(exact=exact, chunk=chunk):
        out = dst.project(fn(batch))      # (batch, n, dst.dim)
        blocks.append(out)
    full = concat0(blocks)
    arr = full.arr.reshape(src.dim, n, dst.dim)
    mats = []
    for a in range(n):
        cols = np.ascontiguousarray(arr[:, a, :].T)
        if exact:
            from .exact import RatMat
            mats.append(RatMat(cols.copy(), full.den))
        else:
            mats.append(cols)
    return mats


# boundary maps of the two short exact sequences -----------------------------


def hook_to_sym2_boundary(mu):
    """HookAlt -> Lambda^1 (x) Sym^2: mu |-> -2 mu_(cd)b, direction index first.

    Same formula as hook_alt_to_sym; this is the boundary map of SES1.
    """
    return hook_alt_to_sym(mu)
