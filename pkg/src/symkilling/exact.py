"""Certified exact (and float) linear algebra.

Exact matrices store integer numerators (int64 when they fit, Python ints
otherwise) with a single shared positive denominator.  Kernels, solves and
echelon bases are computed mod word-sized primes, lifted by CRT + rational
reconstruction, and then *verified* in exact integer arithmetic, so the
results do not depend on the primes being lucky:

- a verified kernel with cols - rank_p columns is the whole kernel, because
  rank mod p never exceeds the exact rank;
- a verified solution certifies solvability; insolvability is certified by
  an exact cokernel vector.

The float backend mirrors the same operations with SVD rank decisions at a
relative tolerance (default 1e-9 against the largest singular value).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

INT64_CAP = 1 << 62

# primes just under 2^31 so products of two residues stay inside int64
PRIMES = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
    2147483549, 2147483543, 2147483497, 2147483489, 2147483477,
    2147483423, 2147483399, 2147483353, 2147483323, 2147483269,
    2147483249, 2147483237, 2147483179, 2147483171, 2147483137,
]

DEFAULT_TOL = 1e-9


class ExactnessError(RuntimeError):
    """An exact computation could not be certified (e.g. unsolvable system)."""


# ---------------------------------------------------------------------------
# integer array helpers

def _is_object(arr):
    return arr.dtype == object


def as_int_array(arr):
    """Canonicalize an integer ndarray: int64 when it fits, object otherwise."""
    if _is_object(arr):
        flat = arr.ravel()
        if all(-INT64_CAP < int(x) < INT64_CAP for x in flat):
            return arr.astype(np.int64)
        return arr
    return arr.astype(np.int64)


def _abs_bound_matmul(a, b):
    # upper bound on |a @ b| entries, computed in float64 (2x headroom vs 2^63)
    fa = np.abs(a).astype(np.float64)
    fb = np.abs(b).astype(np.float64)
    prod = fa @ fb
    return float(prod.max(initial=0.0)) * (1.0 + 1e-9)


def int_matmul(a, b):
    """Exact integer matmul; int64 fast path with overflow guard."""
    if not _is_object(a) and not _is_object(b):
        if _abs_bound_matmul(a, b) < INT64_CAP:
            return a @ b
    ao = a.astype(object) if not _is_object(a) else a
    bo = b.astype(object) if not _is_object(b) else b
    return as_int_array(np.dot(ao, bo))


def array_gcd(arr, extra=0):
    if _is_object(arr):
        g = int(extra)
        for x in arr.ravel():
            g = math.gcd(g, int(x))
            if g == 1:
                return 1
        return g
    if arr.size == 0:
        return int(extra)
    g = int(np.gcd.reduce(np.abs(arr).ravel()))
    return math.gcd(g, int(extra))


def rational_reconstruct(x, m):
    """Wang reconstruction of p/q from x mod m; None if no small solution."""
    x %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, x
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r1 > bound or t1 == 0 or abs(t1) > bound:
        return None
    if math.gcd(r1, t1) != 1:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    return (r1, t1)


def _crt_pair(a, ma, b, mb):
    # combine object arrays of residues
    inv = pow(ma % mb, mb - 2, mb) if _is_prime_cached(mb) else pow(ma % mb, -1, mb)
    m = ma * mb
    diff = (b - a) % mb
    return (a + ma * ((diff * inv) % mb)) % m, m


_prime_set = set(PRIMES)


def _is_prime_cached(p):
    return p in _prime_set


def rref_mod(mat, p):
    """Reduced row echelon form mod p.  Returns (R, pivot column list)."""
    M = np.mod(mat, p).astype(np.int64, copy=True)
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        colv = M[:, c].copy()
        colv[r] = 0
        nzr = np.nonzero(colv)[0]
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(colv[nzr], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def _mod_array(num, p):
    if _is_object(num):
        return np.frompyfunc(lambda x: int(x) % p, 1, 1)(num).astype(np.int64)
    return np.mod(num, p).astype(np.int64)


class _ModRref:
    """Accumulates rrefs of one integer matrix over increasing prime sets."""

    def __init__(self, num):
        self.num = num
        self.rank = -1
        self.pivots = None
        self.res = None     # object array of CRT residues
        self.mod = None
        self.used = 0

    def extend(self):
        while True:
            if self.used >= len(PRIMES):
                raise ExactnessError("prime supply exhausted")
            p = PRIMES[self.used]
            self.used += 1
            R, piv = rref_mod(_mod_array(self.num, p), p)
            if len(piv) < self.rank:
                continue    # bad prime, drops rank
            if len(piv) > self.rank:
                # all previous primes were bad
                self.rank = len(piv)
                self.pivots = piv
                self.res = R.astype(object)
                self.mod = p
                return
            if piv != self.pivots:
                continue
            self.res, self.mod = _crt_pair(self.res, self.mod, R.astype(object), p)
            return

    def reconstruct(self):
        """Try to reconstruct the exact rref as (int numerators, den); None if early."""
        res, m = self.res, self.mod
        out = np.zeros(res.shape, dtype=object)
        den = 1
        it = np.nditer(res, flags=["multi_index", "refs_ok"])
        entries = []
        for v in it:
            x = int(v)
            if x == 0:
                continue
            pq = rational_reconstruct(x, m)
            if pq is None:
                return None
            entries.append((it.multi_index, pq))
            den = den * pq[1] // math.gcd(den, pq[1])
        for idx, (p_, q_) in entries:
            out[idx] = p_ * (den // q_)
        return as_int_array(out), den


# ---------------------------------------------------------------------------
# exact matrices


class RatMat:
    """Dense exact rational matrix: integer numerators over one denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = as_int_array(np.asarray(num))
        if den < 0:
            num, den = -num, -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den != 1:
            g = array_gcd(num, den)
            if g > 1:
                if _is_object(num):
                    num = as_int_array(np.frompyfunc(lambda x: int(x) // g, 1, 1)(num))
                else:
                    num = num // g
                den //= g
        self.num = num
        self.den = int(den)

    # -- constructors
    @staticmethod
    def from_fractions(rows):
        arr = np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
        den = 1
        for x in arr.ravel():
            den = den * x.denominator // math.gcd(den, x.denominator)
        num = np.frompyfunc(lambda x: int(x * den), 1, 1)(arr)
        return RatMat(num, den)

    @staticmethod
    def zeros(r, c):
        return RatMat(np.zeros((r, c), dtype=np.int64))

    @staticmethod
    def eye(n):
        return RatMat(np.eye(n, dtype=np.int64))

    # -- basic structure
    @property
    def shape(self):
        return self.num.shape

    def __getitem__(self, idx):
        sub = self.num[idx]
        if np.isscalar(sub) or sub.ndim == 0:
            return Fraction(int(sub), self.den)
        if sub.ndim == 1:
            sub = sub.reshape(1, -1)
        return RatMat(sub.copy(), self.den)

    def entry(self, i, j):
        return Fraction(int(self.num[i, j]), self.den)

    def to_fractions(self):
        return [[Fraction(int(x), self.den) for x in row] for row in self.num]

    def to_float(self):
        if _is_object(self.num):
            return np.array([[float(Fraction(int(x), self.den)) for x in row]
                             for row in self.num])
        return self.num.astype(np.float64) / float(self.den)

    @property
    def T(self):
        return RatMat(self.num.T.copy(), self.den)

    def is_zero(self):
        return not np.any(self.num)

    def __eq__(self, other):
        if self.shape != other.shape:
            return False
        # both canonical (gcd-reduced), so cross-multiplied comparison
        if self.den == other.den:
            return bool(np.array_equal(self.num, other.num))
        a = self.num.astype(object) * other.den
        b = other.num.astype(object) * self.den
        return bool(np.array_equal(a, b))

    def __hash__(self):
        raise TypeError("unhashable")

    # -- arithmetic
    def __matmul__(self, other):
        return RatMat(int_matmul(self.num, other.num), self.den * other.den)

    def __add__(self, other):
        d = self.den * other.den // math.gcd(self.den, other.den)
        a = self.num * (d // self.den) if not _is_object(self.num) else self.num.astype(object) * (d // self.den)
        b = other.num * (d // other.den) if not _is_object(other.num) else other.num.astype(object) * (d // other.den)
        if _is_object(a) != _is_object(b):
            a, b = a.astype(object), b.astype(object)
        return RatMat(as_int_array(np.asarray(a + b)), d)

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def __mul__(self, scalar):
        s = Fraction(scalar)
        num = self.num * s.numerator if not _is_object(self.num) \
            else self.num.astype(object) * s.numerator
        return RatMat(as_int_array(np.asarray(num)), self.den * s.denominator)

    __rmul__ = __mul__

    def hstack(self, other):
        d = self.den * other.den // math.gcd(self.den, other.den)
        a = self.num.astype(object) * (d // self.den)
        b = other.num.astype(object) * (d // other.den)
        return RatMat(as_int_array(np.hstack([a, b])), d)

    def vstack(self, other):
        d = self.den * other.den // math.gcd(self.den, other.den)
        a = self.num.astype(object) * (d // self.den)
        b = other.num.astype(object) * (d // other.den)
        return RatMat(as_int_array(np.vstack([a, b])), d)

    def take_columns(self, idx):
        return RatMat(self.num[:, list(idx)].copy(), self.den)

    # -- certified linear algebra
    def rank(self):
        return self.shape[1] - kernel(self).shape[1]


def _kernel_from_rref(rnum, rden, pivots, ncols):
    free = [c for c in range(ncols) if c not in set(pivots)]
    if not free:
        return np.zeros((ncols, 0), dtype=np.int64), free
    K = np.zeros((ncols, len(free)), dtype=object)
    for j, f in enumerate(free):
        K[f, j] = rden
        for i, pc in enumerate(pivots):
            K[pc, j] = -int(rnum[i, f])
    # per-column gcd reduction keeps entries small
    for j in range(K.shape[1]):
        g = array_gcd(K[:, j])
        if g > 1:
            K[:, j] = np.frompyfunc(lambda x: int(x) // g, 1, 1)(K[:, j])
    return as_int_array(K), free


def kernel(A):
    """Certified exact kernel basis (columns); identity block on free rows."""
    ncols = A.shape[1]
    if A.shape[0] == 0 or A.is_zero():
        return RatMat.eye(ncols)
    state = _ModRref(A.num)
    state.extend()
    while True:
        rec = state.reconstruct()
        if rec is not None:
            rnum, rden = rec
            K, _free = _kernel_from_rref(rnum, rden, state.pivots, ncols)
            if K.shape[1] == 0:
                return RatMat(K)       # rank_p = ncols certifies triviality
            if not np.any(int_matmul(A.num, K)):
                return RatMat(K)
        state.extend()


def solve(A, B):
    """Certified X with A @ X = B; raises ExactnessError if unsolvable."""
    aug = A.hstack(B)
    na = A.shape[1]
    state = _ModRref(aug.num)
    state.extend()
    while True:
        rec = state.reconstruct()
        if rec is not None:
            rnum, rden = rec
            if all(c < na for c in state.pivots):
                X = np.zeros((na, B.shape[1]), dtype=object)
                for i, pc in enumerate(state.pivots):
                    X[pc, :] = rnum[i, na:]
                X = as_int_array(X)
                # (A.num/A.den) @ (X/rden) == B.num/B.den, cross-multiplied
                lhs = int_matmul(A.num, X).astype(object) * B.den
                rhs = B.num.astype(object) * (A.den * rden)
                if np.array_equal(lhs, rhs):
                    return RatMat(X, rden)
            else:
                # pivot in the rhs block: certify insolvability via cokernel
                co = kernel(A.T)
                if co.shape[1]:
                    t = RatMat(int_matmul(co.num.T, B.num), 1)
                    if not t.is_zero():
                        raise ExactnessError("system has no exact solution")
        state.extend()


def mat_inverse(A):
    n = A.shape[0]
    return solve(A, RatMat.eye(n))


class Subspace:
    """Column span with a reduced (pivot rows = identity) exact basis."""

    __slots__ = ("basis", "pivot_rows", "ambient_dim")

    def __init__(self, basis, pivot_rows):
        self.basis = basis
        self.pivot_rows = pivot_rows
        self.ambient_dim = basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @staticmethod
    def from_columns(B):
        """Echelonize the span of the columns of B (certified)."""
        n = B.shape[0]
        if B.shape[1] == 0 or B.is_zero():
            return Subspace(RatMat.zeros(n, 0), [])
        state = _ModRref(B.num.T)
        state.extend()
        while True:
            rec = state.reconstruct()
            if rec is not None:
                rnum, rden = rec
                E = RatMat(rnum.T.copy(), rden)
                piv = state.pivots
                # E @ B[piv,:] == B certifies span equality both ways
                coords = RatMat(B.num[piv, :].copy(), B.den)
                if (E @ coords) == B:
                    return Subspace(E, piv)
            state.extend()

    @staticmethod
    def full(n):
        return Subspace(RatMat.eye(n), list(range(n)))

    def coords(self, M):
        """Coordinates of columns of M, which must lie in the span."""
        C = RatMat(M.num[self.pivot_rows, :].copy(), M.den)
        if not (self.basis @ C) == M:
            raise ExactnessError("vector not in subspace")
        return C

    def residual(self, M):
        """M - projection-by-pivot-read; zero iff columns of M are in the span."""
        C = RatMat(M.num[self.pivot_rows, :].copy(), M.den)
        return M - self.basis @ C

    def contains_columns(self, M):
        return self.residual(M).is_zero()

    def intersect(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        paired = self.basis.hstack(other.basis * Fraction(-1))
        K = kernel(paired)
        if K.shape[1] == 0:
            return Subspace(RatMat.zeros(self.ambient_dim, 0), [])
        U = RatMat(K.num[: self.dim, :], K.den)
        return Subspace.from_columns(self.basis @ U)

    def restrict_to_kernel_of(self, op):
        """Largest subspace of self killed by op (a RatMat on the ambient)."""
        M = op @ self.basis
        if M.is_zero():
            return self
        K = kernel(M)
        if K.shape[1] == self.dim:
            return self
        return Subspace.from_columns(self.basis @ K)

    def restrict_invariant_step(self, op):
        """One fixpoint step: {v in self : op v in self}."""
        R = self.residual(op @ self.basis)
        if R.is_zero():
            return self, False
        K = kernel(R)
        if K.shape[1] == self.dim:
            return self, False
        return Subspace.from_columns(self.basis @ K), True


def common_kernel(ops, ambient_dim, start=None):
    """Intersection of the kernels of a list of operators (RatMat)."""
    S = start if start is not None else Subspace.full(ambient_dim)
    for op in ops:
        if S.dim == 0:
            break
        S = S.restrict_to_kernel_of(op)
    return S


def largest_invariant_subspace(V0, ops):
    """Largest subspace of V0 mapped into itself by every op.

    Returns (subspace, trace of dimensions per sweep).  Terminates in at most
    dim V0 shrink steps since the dimension strictly decreases on change.
    """
    S = V0
    trace = [S.dim]
    changed = True
    while changed and S.dim > 0:
        changed = False
        for op in ops:
            S, ch = S.restrict_invariant_step(op)
            if ch:
                changed = True
            if S.dim == 0:
                break
        trace.append(S.dim)
    return S, trace


def rank_at_eigenvalue(A, lam):
    """dim ker(A - lam I), exact."""
    n = A.shape[0]
    return kernel(A - RatMat.eye(n) * Fraction(lam)).shape[1]


# ---------------------------------------------------------------------------
# float backend


def float_kernel(A, tol=DEFAULT_TOL):
    """Orthonormal kernel basis of a float matrix at relative tolerance."""
    if A.size == 0:
        return np.eye(A.shape[1])
    if not np.any(A):
        return np.eye(A.shape[1])
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax))
    return vt[r:].T.copy()


class FloatSubspace:
    __slots__ = ("basis", "ambient_dim")

    def __init__(self, basis):
        self.basis = basis
        self.ambient_dim = basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @staticmethod
    def full(n):
        return FloatSubspace(np.eye(n))

    def restrict_to_kernel_of(self, op, tol=DEFAULT_TOL):
        M = op @ self.basis
        K = float_kernel(M, tol)
        if K.shape[1] == self.dim:
            return self
        return FloatSubspace(self.basis @ K)

    def restrict_invariant_step(self, op, tol=DEFAULT_TOL):
        M = op @ self.basis
        R = M - self.basis @ (self.basis.T @ M)
        K = float_kernel(R, tol)
        if K.shape[1] == self.dim:
            return self, False
        return FloatSubspace(self.basis @ K), True


def float_common_kernel(ops, ambient_dim, tol=DEFAULT_TOL, start=None):
    S = start if start is not None else FloatSubspace.full(ambient_dim)
    for op in ops:
        if S.dim == 0:
            break
        S = S.restrict_to_kernel_of(op, tol)
    return S


def float_largest_invariant_subspace(V0, ops, tol=DEFAULT_TOL):
    S = V0
    trace = [S.dim]
    changed = True
    while changed and S.dim > 0:
        changed = False
        for op in ops:
            S, ch = S.restrict_invariant_step(op, tol)
            changed = changed or ch
            if S.dim == 0:
                break
        trace.append(S.dim)
    return S, trace
