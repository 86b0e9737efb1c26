"""Small matrix backends for developing frames in the hyperbolic plane.

Two models share one interface.  ``SL2`` works with 2x2 matrices acting on
the upper half plane (the frame at ``i`` heads up the imaginary axis) and
``SO21`` with 3x3 Lorentz matrices acting on the hyperboloid
``-x0^2 + x1^2 + x2^2 = -1`` (the frame at ``(1, 0, 0)`` heads along
``(0, 1, 0)``).  Each backend works over plain floats or over mpmath numbers,
chosen by the ``num`` namespace passed at construction.

Matrices are flat tuples in row-major order.  Rotations are restricted to
quarter turns, which keeps them exact at every precision.
"""
from __future__ import annotations

import math
from types import SimpleNamespace

import mpmath

FLOAT = SimpleNamespace(
    name="float", cosh=math.cosh, sinh=math.sinh, exp=math.exp, sqrt=math.sqrt,
    log=math.log, acosh=math.acosh, mpf=float, one=1.0, zero=0.0,
)


def mp_namespace(dps: int) -> SimpleNamespace:
    """mpmath functions bound to a private context at ``dps`` digits."""
    ctx = mpmath.mp.clone()
    ctx.dps = dps
    return SimpleNamespace(
        name=f"mp{dps}", ctx=ctx, cosh=ctx.cosh, sinh=ctx.sinh, exp=ctx.exp,
        sqrt=ctx.sqrt, log=ctx.log, acosh=ctx.acosh, mpf=ctx.mpf,
        one=ctx.mpf(1), zero=ctx.mpf(0),
    )


class SL2:
    """PSL(2, R) frames; traces are only meaningful up to sign."""
    dim = 2

    def __init__(self, num=FLOAT):
        self.num = num
        one, zero = num.one, num.zero
        h = num.sqrt(num.mpf(2)) / 2
        self._quarters = (
            (one, zero, zero, one),
            (h, h, -h, h),
            (zero, one, -one, zero),
            (-h, h, -h, -h),
        )

    def identity(self):
        return self._quarters[0]

    @staticmethod
    def mul(a, b):
        return (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])

    @staticmethod
    def inv(a):
        return (a[3], -a[1], -a[2], a[0])

    @staticmethod
    def trace(a):
        return a[0] + a[3]

    def translate(self, d):
        e = self.num.exp(d / 2)
        return (e, self.num.zero, self.num.zero, 1 / e)

    def rotate(self, q: int):
        return self._quarters[q % 4]

    def length(self, a):
        """Translation length of a hyperbolic element."""
        t = abs(self.trace(a)) / 2
        if t < 1:
            raise ValueError("element is elliptic")
        return 2 * self.num.acosh(t)


class SO21:
    """Orientation and time preserving isometries of the hyperboloid."""
    dim = 3

    def __init__(self, num=FLOAT):
        self.num = num
        one, zero = num.one, num.zero
        self._quarters = tuple(
            (one, zero, zero, zero, c, -s, zero, s, c)
            for c, s in ((one, zero), (zero, one), (-one, zero), (zero, -one))
        )

    def identity(self):
        return self._quarters[0]

    @staticmethod
    def mul(a, b):
        return tuple(
            a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j]
            for i in range(3) for j in range(3)
        )

    @staticmethod
    def inv(a):
        # J a^T J with J = diag(-1, 1, 1)
        return (a[0], -a[3], -a[6], -a[1], a[4], a[7], -a[2], a[5], a[8])

    @staticmethod
    def trace(a):
        return a[0] + a[4] + a[8]

    def translate(self, d):
        c, s = self.num.cosh(d), self.num.sinh(d)
        z, o = self.num.zero, self.num.one
        return (c, s, z, s, c, z, z, z, o)

    def rotate(self, q: int):
        return self._quarters[q % 4]

    def length(self, a):
        t = (self.trace(a) - 1) / 2
        if t < 1:
            raise ValueError("element is elliptic")
        return self.num.acosh(t)

    @staticmethod
    def apply(a, v):
        return tuple(a[3 * i] * v[0] + a[3 * i + 1] * v[1] + a[3 * i + 2] * v[2] for i in range(3))


def product(backend, mats):
    out = backend.identity()
    for m in mats:
        out = backend.mul(out, m)
    return out


def minkowski(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def lorentz_cross(u, v):
    """Vector orthogonal to ``u`` and ``v`` for the Minkowski form."""
    return (
        -(u[1] * v[2] - u[2] * v[1]),
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
