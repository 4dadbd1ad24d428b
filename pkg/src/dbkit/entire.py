"""Evaluatable entire functions.

Four concrete representations cover everything the toolkit needs:
polynomials (real coefficient lists, Horner evaluation), named closures,
finite canonical products over real zeros, and kernel-basis expansions
tied to a model space. On top of the representations sit the # involution
f^#(z) = conj(f(conj z)), numerical derivatives (exact for polynomials,
equispaced contour averages otherwise), a realness validator, and the
Hermite-Biehler positivity check.

All representations are immutable; evaluation is pure and thread-safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidGrid, MagnitudeOverflow

# Evaluations beyond this magnitude are treated as overflow rather than
# silently fed to downstream arithmetic.
_OVERFLOW_LIMIT = 1e300

_DEFAULT_DERIVATIVE_RADIUS = 0.5
_DEFAULT_CONTOUR_POINTS = 32


def _check_magnitude(value, z):
    v = np.atleast_1d(np.asarray(value))
    if not np.all(np.isfinite(v)) or np.any(np.abs(v) > _OVERFLOW_LIMIT):
        raise MagnitudeOverflow(f"evaluation overflow at z={z!r}", z=z)
    return value


@dataclass
class RealnessReport:
    passed: bool
    worst_deviation: float
    worst_point: complex
    tolerance: float

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.worst_deviation = float(self.worst_deviation)

    def __bool__(self):
        return self.passed


@dataclass
class HBReport:
    """Result of the |e(z)| > |e(conj z)| check on an upper-half-plane grid."""

    passed: bool
    min_margin: float
    worst_point: complex
    n_points: int

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.min_margin = float(self.min_margin)

    def __bool__(self):
        return self.passed


class RealEntireFunction:
    """An entire function in one of the supported representations.

    ``is_real`` is a declared claim that f^# = f; it is validated on
    demand by :meth:`realness_report`, never enforced at construction.
    ``derivative_radius`` is the contour radius for numerical derivatives.
    """

    __slots__ = ("kind", "name", "is_real", "derivative_radius", "_payload")

    def __init__(self, kind, payload, *, name, is_real, derivative_radius=_DEFAULT_DERIVATIVE_RADIUS):
        if derivative_radius <= 0:
            raise ValueError("derivative_radius must be positive")
        self.kind = kind
        self._payload = payload
        self.name = name
        self.is_real = is_real
        self.derivative_radius = derivative_radius

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def poly(cls, coeffs, name=None, derivative_radius=_DEFAULT_DERIVATIVE_RADIUS):
        """Polynomial from ascending coefficients; trailing zeros trimmed."""
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        nz = np.nonzero(np.abs(c) > 0)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        real = bool(np.all(c.imag == 0.0))
        if real:
            c = c.real.astype(float)
        return cls("poly", c, name=name or f"poly(deg {len(c) - 1})",
                   is_real=real, derivative_radius=derivative_radius)

    @classmethod
    def const(cls, value, name=None):
        return cls.poly([value], name=name or f"const({value})")

    @classmethod
    def closure(cls, fn, name, is_real=False, derivative_radius=_DEFAULT_DERIVATIVE_RADIUS):
        return cls("closure", fn, name=name, is_real=is_real,
                   derivative_radius=derivative_radius)

    @classmethod
    def product(cls, zeros, name=None, zero_tol=1e-12, derivative_radius=_DEFAULT_DERIVATIVE_RADIUS):
        """Finite canonical product prod (1 - z/b_k) over the given real zeros.

        A zero at the origin (within ``zero_tol``) becomes a leading factor z.
        Factors are ordered by ascending |b_k| (symmetric-radius ordering);
        the truncation order is len(zeros) and evaluation is deterministic.
        """
        zs = np.asarray(sorted(np.asarray(zeros, dtype=float), key=lambda b: (abs(b), b)))
        at_origin = np.abs(zs) <= zero_tol
        lead_z = int(np.count_nonzero(at_origin))
        if lead_z > 1:
            raise ValueError("repeated zero at the origin; products here have simple zeros")
        payload = (zs[~at_origin], bool(lead_z), len(zs))
        return cls("product", payload, name=name or f"product({len(zs)} zeros)",
                   is_real=True, derivative_radius=derivative_radius)

    @classmethod
    def kernel_expansion(cls, space, nodes, coeffs, name=None,
                         derivative_radius=_DEFAULT_DERIVATIVE_RADIUS):
        """f(z) = sum_k coeffs_k * k(z, x_k) in the given model space."""
        nodes = np.asarray(nodes, dtype=float)
        coeffs = np.asarray(coeffs, dtype=complex)
        if nodes.shape != coeffs.shape:
            raise ValueError("nodes and coeffs must have equal length")
        real = bool(np.all(np.abs(coeffs.imag) <= 1e-14 * (1.0 + np.abs(coeffs.real))))
        return cls("kernel", (space, nodes, coeffs),
                   name=name or f"kernel-expansion({len(nodes)})",
                   is_real=real, derivative_radius=derivative_radius)

    # ------------------------------------------------------------------
    # evaluation

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        z = complex(z)
        if self.kind == "poly":
            v = npoly.polyval(z, self._payload)
        elif self.kind == "closure":
            v = complex(self._payload(z))
        elif self.kind == "product":
            zeros, lead_z, _ = self._payload
            v = z if lead_z else 1.0 + 0.0j
            for b in zeros:
                v *= 1.0 - z / b
            v = complex(v)
        else:  # kernel
            space, nodes, coeffs = self._payload
            v = complex(np.sum(coeffs * np.array([space.kernel(z, x) for x in nodes])))
        return _check_magnitude(v, z)

    def eval_array(self, zs):
        """Vectorized evaluation; falls back to a loop for closures."""
        zs = np.asarray(zs, dtype=complex)
        if self.kind == "poly":
            v = npoly.polyval(zs, self._payload)
        elif self.kind == "product":
            zeros, lead_z, _ = self._payload
            v = zs.copy() if lead_z else np.ones_like(zs)
            for b in zeros:
                v = v * (1.0 - zs / b)
        elif self.kind == "kernel":
            space, nodes, coeffs = self._payload
            v = np.zeros_like(zs)
            for x, c in zip(nodes, coeffs):
                v = v + c * space.kernel_vec(zs, x)
        else:
            v = np.array([self._payload(z) for z in zs.ravel()], dtype=complex).reshape(zs.shape)
        return _check_magnitude(np.asarray(v, dtype=complex), zs)

    def sharp(self, z):
        """The involution f^#(z) = conj(f(conj z))."""
        return complex(np.conjugate(self.eval(np.conjugate(complex(z)))))

    # ------------------------------------------------------------------
    # derivatives

    def derivative(self, z, order=1, n_points=_DEFAULT_CONTOUR_POINTS):
        """Derivative of the given order (1 or 2) at z.

        Polynomials differentiate exactly by coefficients; every other
        representation uses an equispaced contour average on the circle of
        radius ``derivative_radius`` about z, which is spectrally accurate
        for entire functions.
        """
        if order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        z = complex(z)
        if self.kind == "poly":
            c = npoly.polyder(self._payload, m=order)
            return complex(npoly.polyval(z, c))
        r = self.derivative_radius
        theta = 2.0 * np.pi * np.arange(n_points) / n_points
        ring = z + r * np.exp(1j * theta)
        vals = self.eval_array(ring)
        acc = np.sum(vals * np.exp(-1j * order * theta))
        return complex(math.factorial(order) / (n_points * r**order) * acc)

    # ------------------------------------------------------------------
    # structure checks

    def realness_report(self, grid, tol=1e-12):
        """Check |f(conj z) - conj(f(z))| <= tol*(1+|f(z)|) over the grid."""
        grid = list(grid)
        if not grid:
            raise InvalidGrid("realness check needs a nonempty grid")
        worst, worst_z = -1.0, complex(grid[0])
        for z in grid:
            z = complex(z)
            fz = self.eval(z)
            dev = abs(self.eval(np.conjugate(z)) - np.conjugate(fz)) / (1.0 + abs(fz))
            if dev > worst:
                worst, worst_z = dev, z
        return RealnessReport(passed=worst <= tol, worst_deviation=worst,
                              worst_point=worst_z, tolerance=tol)

    # ------------------------------------------------------------------
    # cheap algebra (exact in polynomial land, closures otherwise)

    def scale(self, factor):
        factor = complex(factor)
        if self.kind == "poly":
            return RealEntireFunction.poly(self._payload * factor, name=f"{factor}*{self.name}")
        real = self.is_real and factor.imag == 0.0
        return RealEntireFunction.closure(lambda z, s=self, a=factor: a * s.eval(z),
                                          name=f"{factor}*{self.name}", is_real=real)

    def add(self, other):
        if self.kind == "poly" and other.kind == "poly":
            return RealEntireFunction.poly(npoly.polyadd(self._payload, other._payload),
                                           name=f"{self.name}+{other.name}")
        real = self.is_real and other.is_real
        return RealEntireFunction.closure(lambda z, a=self, b=other: a.eval(z) + b.eval(z),
                                          name=f"{self.name}+{other.name}", is_real=real)

    def mul(self, other):
        if self.kind == "poly" and other.kind == "poly":
            return RealEntireFunction.poly(npoly.polymul(self._payload, other._payload),
                                           name=f"{self.name}*{other.name}")
        real = self.is_real and other.is_real
        return RealEntireFunction.closure(lambda z, a=self, b=other: a.eval(z) * b.eval(z),
                                          name=f"{self.name}*{other.name}", is_real=real)

    def shift_by_z(self):
        """Multiplication by the independent variable, z*f(z)."""
        if self.kind == "poly":
            return RealEntireFunction.poly(np.concatenate(([0.0], self._payload)),
                                           name=f"z*{self.name}")
        return RealEntireFunction.closure(lambda z, f=self: z * f.eval(z),
                                          name=f"z*{self.name}", is_real=self.is_real)

    @property
    def poly_degree(self):
        """Degree when polynomial, else None."""
        return len(self._payload) - 1 if self.kind == "poly" else None

    @property
    def product_zeros(self):
        """(zeros_off_origin, has_origin_factor, truncation) for products."""
        if self.kind != "product":
            raise ValueError("not a canonical-product representation")
        return self._payload

    def __repr__(self):
        return f"RealEntireFunction({self.name}, kind={self.kind}, is_real={self.is_real})"


def sharp_eval(f, z):
    """conj(f(conj z)) for any evaluatable f."""
    if isinstance(f, RealEntireFunction):
        return f.sharp(z)
    return complex(np.conjugate(f(np.conjugate(complex(z)))))


def is_real_entire(f, grid, tol=1e-12):
    """Grid check of the realness claim f^# = f; reports the worst offender."""
    if isinstance(f, RealEntireFunction):
        return f.realness_report(grid, tol=tol)
    worst, worst_z = -1.0, None
    grid = list(grid)
    if not grid:
        raise InvalidGrid("realness check needs a nonempty grid")
    for z in grid:
        z = complex(z)
        fz = complex(f(z))
        dev = abs(complex(f(np.conjugate(z))) - np.conjugate(fz)) / (1.0 + abs(fz))
        if dev > worst:
            worst, worst_z = dev, z
    return RealnessReport(passed=worst <= tol, worst_deviation=worst,
                          worst_point=worst_z, tolerance=tol)


def validate_hb(e, grid):
    """Check the strict Hermite-Biehler inequality |e(z)| > |e(conj z)|.

    ``e`` is any complex-valued callable; every grid point must lie in the
    open upper half-plane.
    """
    grid = [complex(z) for z in grid]
    if not grid:
        raise InvalidGrid("empty grid")
    for z in grid:
        if z.imag <= 0.0:
            raise InvalidGrid(f"grid point {z} not in the open upper half-plane", z=z)
    margins = [abs(complex(e(z))) - abs(complex(e(np.conjugate(z)))) for z in grid]
    i = int(np.argmin(margins))
    return HBReport(passed=bool(margins[i] > 0.0), min_margin=float(margins[i]),
                    worst_point=grid[i], n_points=len(grid))


def guarded_ratio(num, den, name=None, *, is_real=False, fallback_radius=1e-3,
                  fallback_points=8):
    """num/den as a closure with a contour fallback at removable singularities.

    When the direct quotient is non-finite (0/0 at a shared zero), the value
    is recovered by a small-radius contour average of the quotient around the
    point, which is valid whenever the ratio extends to an entire function.
    """
    num_eval = num.eval if isinstance(num, RealEntireFunction) else num
    den_eval = den.eval if isinstance(den, RealEntireFunction) else den

    def ratio(z):
        z = complex(z)
        d = complex(den_eval(z))
        if d != 0.0:
            v = complex(num_eval(z)) / d
            if cmath.isfinite(v):
                return v
        theta = 2.0 * np.pi * np.arange(fallback_points) / fallback_points
        ring = z + fallback_radius * np.exp(1j * theta)
        vals = [complex(num_eval(p)) / complex(den_eval(p)) for p in ring]
        return complex(np.mean(vals))

    return RealEntireFunction.closure(ratio, name=name or "ratio", is_real=is_real)
