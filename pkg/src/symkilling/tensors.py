"""Dense tensors over exact rationals or float64, with einsum and symmetrizers.

A `Ten` wraps a numpy array of integer numerators plus one shared denominator
(exact mode), or a float64 array (den is None).  Contractions run through
numpy einsum: int64 with a float64 overflow bound check, escalating to Python
ints only when a product would not fit.  Every formula in the package is
written once against this class and runs on both backends.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

import numpy as np

from .exact import INT64_CAP, RatMat, array_gcd, as_int_array, _is_object

_PERM_CACHE = {}


def _perms_with_sign(k):
    if k not in _PERM_CACHE:
        out = []
        for p in permutations(range(k)):
            sign = 1
            q = list(p)
            for i in range(k):
                while q[i] != i:
                    j = q[i]
                    q[i], q[j] = q[j], q[i]
                    sign = -sign
            out.append((p, sign))
        _PERM_CACHE[k] = out
    return _PERM_CACHE[k]


class Ten:
    """numpy array + denominator; den=None marks float mode."""

    __slots__ = ("arr", "den")

    def __init__(self, arr, den=1):
        if den is None:
            self.arr = np.asarray(arr, dtype=np.float64)
            self.den = None
            return
        arr = as_int_array(np.asarray(arr))
        if den < 0:
            arr, den = -arr, -den
        if den != 1:
            g = array_gcd(arr, den)
            if g > 1:
                if _is_object(arr):
                    arr = as_int_array(np.frompyfunc(lambda x: int(x) // g, 1, 1)(arr))
                else:
                    arr = arr // g
                den //= g
        self.arr = arr
        self.den = int(den)

    # -- constructors
    @staticmethod
    def zeros(shape, exact=True):
        if exact:
            return Ten(np.zeros(shape, dtype=np.int64))
        return Ten(np.zeros(shape), den=None)

    @staticmethod
    def from_fractions(arr):
        arr = np.asarray(arr, dtype=object)
        den = 1
        for x in arr.ravel():
            f = Fraction(x)
            den = den * f.denominator // math.gcd(den, f.denominator)
        num = np.frompyfunc(lambda x: int(Fraction(x) * den), 1, 1)(arr)
        return Ten(num, den)

    @property
    def exact(self):
        return self.den is not None

    @property
    def shape(self):
        return self.arr.shape

    def copy(self):
        return Ten(self.arr.copy(), self.den)

    def to_float(self):
        if not self.exact:
            return self
        if _is_object(self.arr):
            f = np.frompyfunc(lambda x: float(Fraction(int(x), self.den)), 1, 1)(self.arr)
            return Ten(f.astype(np.float64), den=None)
        return Ten(self.arr.astype(np.float64) / float(self.den), den=None)

    def to_fraction_array(self):
        assert self.exact
        return np.frompyfunc(lambda x: Fraction(int(x), self.den), 1, 1)(
            self.arr.astype(object))

    def item(self, *idx):
        if self.exact:
            return Fraction(int(self.arr[idx]), self.den)
        return float(self.arr[idx])

    def is_zero(self, tol=0.0):
        if self.exact:
            return not np.any(self.arr)
        bound = tol if tol else 1e-9 * max(1.0, float(np.abs(self.arr).max(initial=0.0)))
        return bool(np.all(np.abs(self.arr) <= bound))

    # -- ring ops
    def __add__(self, other):
        if not self.exact or not other.exact:
            return Ten(self.to_float().arr + other.to_float().arr, den=None)
        d = self.den * other.den // math.gcd(self.den, other.den)
        a, b = self.arr, other.arr
        fa, fb = d // self.den, d // other.den
        if _is_object(a) or _is_object(b) or \
                (float(np.abs(a).max(initial=0)) * fa + float(np.abs(b).max(initial=0)) * fb) >= INT64_CAP:
            a, b = a.astype(object), b.astype(object)
        return Ten(np.asarray(a * fa + b * fb), d)

    def __sub__(self, other):
        return self + (other * -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        if not self.exact:
            return Ten(self.arr * float(scalar), den=None)
        s = Fraction(scalar)
        a = self.arr
        if not _is_object(a) and float(np.abs(a).max(initial=0)) * abs(s.numerator) >= INT64_CAP:
            a = a.astype(object)
        return Ten(np.asarray(a * s.numerator), self.den * s.denominator)

    __rmul__ = __mul__

    def __eq__(self, other):
        if self.shape != other.shape:
            return False
        if not self.exact or not other.exact:
            return bool(np.allclose(self.to_float().arr, other.to_float().arr,
                                    rtol=1e-8, atol=1e-8))
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("unhashable")

    # -- index gymnastics
    def perm(self, spec):
        """Relabel indices: perm('bac') returns u with u[a,b,c] = self[b,a,c].

        Leading batch axes (if any) are preserved; spec names the trailing
        tensor axes in their *source reading order*.
        """
        r = len(spec)
        letters = "abcdefghij"[:r]
        return Ten(np.einsum(f"...{spec}->...{letters}", self.arr), self.den)

    def alt(self, axes):
        """Antisymmetrize (unweighted average) over the given trailing axes."""
        return self._symmetrize(axes, signed=True)

    def sym(self, axes):
        return self._symmetrize(axes, signed=False)

    def _symmetrize(self, axes, signed):
        axes = tuple(axes)
        perms = _perms_with_sign(len(axes))
        nd = self.arr.ndim
        arr = self.arr
        if self.exact and not _is_object(arr) and \
                float(np.abs(arr).max(initial=0)) * len(perms) >= INT64_CAP:
            arr = arr.astype(object)
        acc = None
        for p, sign in perms:
            term = np.transpose(arr, _perm_order(nd, axes, p))
            s = sign if signed else 1
            acc = term * s if acc is None else acc + term * s
        if self.exact:
            return Ten(np.asarray(acc), self.den * len(perms))
        return Ten(acc / len(perms), den=None)


def _perm_order(nd, axes, p):
    order = list(range(nd))
    for i, ax in enumerate(axes):
        order[ax] = axes[p[i]]
    return order


def einsum(spec, *tens):
    """Contract `Ten`s with a numpy einsum spec (explicit '->' required)."""
    if any(not t.exact for t in tens):
        arrs = [t.to_float().arr for t in tens]
        return Ten(np.einsum(spec, *arrs, optimize=True), den=None)
    arrs = [t.arr for t in tens]
    den = 1
    for t in tens:
        den *= t.den
    if all(not _is_object(a) for a in arrs):
        bound = np.einsum(spec, *[np.abs(a).astype(np.float64) for a in arrs],
                          optimize=True)
        if float(bound.max(initial=0.0)) * (1.0 + 1e-9) < INT64_CAP:
            return Ten(np.einsum(spec, *arrs, optimize=True), den)
    arrs = [a.astype(object) if not _is_object(a) else a for a in arrs]
    return Ten(np.einsum(spec, *arrs), den)


def concat0(tens):
    """Concatenate Tens along their existing leading axis."""
    if len(tens) == 1:
        return tens[0]
    if any(not t.exact for t in tens):
        return Ten(np.concatenate([t.to_float().arr for t in tens]), den=None)
    d = 1
    for t in tens:
        d = d * t.den // math.gcd(d, t.den)
    arrs = []
    for t in tens:
        f = d // t.den
        a = t.arr
        if not _is_object(a) and float(np.abs(a).max(initial=0)) * f >= INT64_CAP:
            a = a.astype(object)
        arrs.append(np.asarray(a * f))
    if any(_is_object(a) for a in arrs):
        arrs = [a.astype(object) for a in arrs]
    return Ten(np.concatenate(arrs), d)


def stack(tens):
    """Stack Tens of equal shape along a new leading axis."""
    if any(not t.exact for t in tens):
        return Ten(np.stack([t.to_float().arr for t in tens]), den=None)
    d = 1
    for t in tens:
        d = d * t.den // math.gcd(d, t.den)
    arrs = []
    obj = any(_is_object(t.arr) for t in tens)
    for t in tens:
        a = t.arr.astype(object) if obj or _is_object(t.arr) else t.arr
        f = d // t.den
        if not _is_object(a) and float(np.abs(a).max(initial=0)) * f >= INT64_CAP:
            a = a.astype(object)
            obj = True
        arrs.append(np.asarray(a * f))
    if obj:
        arrs = [a.astype(object) for a in arrs]
    return Ten(np.stack(arrs), d)


def ten_to_ratmat(t):
    """2-d exact Ten -> RatMat."""
    assert t.exact and t.arr.ndim == 2
    return RatMat(t.arr.copy(), t.den)


def ratmat_to_ten(m):
    return Ten(m.num.copy(), m.den)


def random_fraction_tensor(shape, rng, max_num=9, max_den=4):
    arr = np.empty(shape, dtype=object)
    flat = arr.reshape(-1)
    for i in range(flat.size):
        flat[i] = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
    return Ten.from_fractions(arr)
