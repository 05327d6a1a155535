"""Truncated Taylor arithmetic for high-order derivatives in one variable.

A Jet holds the Taylor coefficients c_0..c_n of a function around a point,
f(z0 + t) = sum_k c_k t^k + O(t^(n+1)). Arithmetic on jets propagates all
coefficients at once, so the n-th derivative is n! * c_n, exact up to
floating-point rounding. Coefficients sit on axis 0; the remaining axes carry
vectorized values and broadcast like numpy arrays.
"""

import math

import numpy as np


class Jet:
    __slots__ = ("coeffs",)
    __array_ufunc__ = None

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs)

    @classmethod
    def variable(cls, value, order: int) -> "Jet":
        """The independent variable z = value + t."""
        value = np.asarray(value)
        coeffs = np.zeros((order + 1,) + value.shape, dtype=np.result_type(value, float))
        coeffs[0] = value
        if order >= 1:
            coeffs[1] = 1.0
        return cls(coeffs)

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value)
        coeffs = np.zeros((order + 1,) + value.shape, dtype=np.result_type(value, float))
        coeffs[0] = value
        return cls(coeffs)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, n: int):
        """n-th derivative at the expansion point."""
        if not 0 <= n <= self.order:
            raise ValueError(f"jet of order {self.order} has no derivative of order {n}")
        return math.factorial(n) * self.coeffs[n]

    # -------------------------------------------------------------------------
    # Arithmetic
    # -------------------------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        return Jet.constant(other, self.order)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __add__(self, other):
        a, b = _align(self, self._coerce(other))
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = _align(self, self._coerce(other))
        return Jet(a - b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b = _align(self, self._coerce(other))
        if not isinstance(other, Jet):
            return Jet(a * b[:1])
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
        for k in range(self.order + 1):
            out[k] = sum(a[j] * b[k - j] for j in range(k + 1))
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            a, b = _align(self, self._coerce(other))
            return Jet(a / b[:1])
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if isinstance(exponent, Jet):
            raise TypeError("jet exponents are not supported")
        return self.power(exponent)

    def reciprocal(self) -> "Jet":
        return self.power(-1.0)

    def power(self, r: float) -> "Jet":
        """self**r for real r, requiring a nonzero constant term.

        b_k = 1/(k a_0) sum_{j=1..k} ((r+1) j - k) a_j b_{k-j}
        """
        a = self.coeffs
        if np.any(a[0] == 0):
            raise ZeroDivisionError("power of a jet with zero constant term")
        b = np.zeros_like(a, dtype=np.result_type(a, float))
        b[0] = a[0] ** r
        for k in range(1, self.order + 1):
            b[k] = sum(((r + 1) * j - k) * a[j] * b[k - j] for j in range(1, k + 1)) / (k * a[0])
        return Jet(b)

    def sqrt(self) -> "Jet":
        return self.power(0.5)

    def exp(self) -> "Jet":
        """b_k = (1/k) sum_{j=1..k} j a_j b_{k-j}."""
        a = self.coeffs
        b = np.zeros_like(a, dtype=np.result_type(a, float))
        b[0] = np.exp(a[0])
        for k in range(1, self.order + 1):
            b[k] = sum(j * a[j] * b[k - j] for j in range(1, k + 1)) / k
        return Jet(b)

    def __repr__(self):
        return f"Jet(order={self.order}, value={self.value!r})"


def exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else np.sqrt(x)


def _align(a: Jet, b: Jet):
    """Coefficient arrays padded so their value axes broadcast against each other."""
    ca, cb = a.coeffs, b.coeffs
    ndim = max(ca.ndim, cb.ndim)
    ca = ca.reshape(ca.shape[:1] + (1,) * (ndim - ca.ndim) + ca.shape[1:])
    cb = cb.reshape(cb.shape[:1] + (1,) * (ndim - cb.ndim) + cb.shape[1:])
    return ca, cb
