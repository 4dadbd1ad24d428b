"""Model spaces of entire functions generated by an associated-function pair.

A model is the pair (s0, s_half) with positive Wronskian orientation:
W(x) = (1/pi)[s_half'(x) s0(x) - s_half(x) s0'(x)] > 0 on the real line,
which is exactly the reproducing-kernel diagonal. The generating
Hermite-Biehler function is recovered as e = -s_half - i*s0.

Inner products run on two independent routes: Parseval sums in the
orthogonal basis of kernels at the sampling points (the spectrum of a
selfadjoint extension), and direct adaptive quadrature against the weight
1/|e(x)|^2 on the real line.

Models are immutable after construction; located spectra are memoized per
(beta, window) so repeated queries are deterministic and cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .entire import RealEntireFunction
from .errors import (DivergentIntegrand, OrientationViolation, RelationCase,
                     SampleShapeError, SpectrumMissing)

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class Numerics:
    """Numerical policy knobs carried by a model."""

    window: tuple            # default real search window for roots
    truncation: int          # number of basis nodes kept for truncated models
    tol: float = 1e-10       # generic residual tolerance
    membership_tol: float = 1e-8
    seam_scale: float = 1e-6  # kernel diagonal seam: delta = seam_scale*(1+|z|)
    quad_tol: float = 1e-11
    grid_points: int = 64


@dataclass
class MembershipReport:
    passed: bool
    deviation: float          # max |f - reconstruction| / (1 + max |f|) on the grid
    norm_sq: float            # Parseval norm^2 of the sample coefficients
    tolerance: float
    certified: bool           # False for truncated models (basis not complete)
    grid: np.ndarray = field(repr=False, default=None)

    def __bool__(self):
        return self.passed


class SampledFunction:
    """Samples of a function on the spectrum of one selfadjoint extension.

    Wraps (beta, values, base space) plus the located spectrum the values
    refer to. Length must match the number of located points, and the
    Parseval statistic sum |v_k|^2 / k(x_k, x_k) must be finite.
    """

    def __init__(self, base, spectrum, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != spectrum.points.shape:
            raise SampleShapeError(
                f"{values.size} samples for {spectrum.points.size} spectrum points")
        stat = float(np.sum(np.abs(values) ** 2 / spectrum.diag))
        if not np.isfinite(stat):
            raise SampleShapeError("non-finite Parseval statistic")
        self.base = base
        self.beta = spectrum.beta
        self.spectrum = spectrum
        self.values = values
        self.parseval_sq = stat

    def __len__(self):
        return self.values.size


class DBSpaceModel:
    """A model space defined by the pair (s0, s_half).

    ``dim`` is an integer for certified finite-dimensional models and None
    for truncated ones (completeness of located spectra not certified).
    """

    def __init__(self, s0, s_half, *, dim, numerics, provenance, jacobi=None,
                 orientation_probe=True):
        self.s0 = s0
        self.s_half = s_half
        self.dim = dim
        self.numerics = numerics
        self.provenance = provenance
        self.jacobi = jacobi
        self._spectra = {}
        if orientation_probe:
            self._check_orientation()

    # ------------------------------------------------------------------

    def _check_orientation(self, n_probe=100):
        lo, hi = self.numerics.window
        xs = np.linspace(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo), n_probe)
        for x in xs:
            w = self._wronskian(complex(x)).real
            if w <= 0.0:
                raise OrientationViolation(
                    f"kernel diagonal {w:.3e} <= 0 at x={x:.6g}; "
                    "model built with wrong sign orientation", x=float(x))

    def _wronskian(self, zeta):
        return (self.s_half.derivative(zeta) * self.s0.eval(zeta)
                - self.s_half.eval(zeta) * self.s0.derivative(zeta)) / math.pi

    # ------------------------------------------------------------------
    # generating Hermite-Biehler function

    def e_eval(self, z):
        """e(z) = -s_half(z) - i*s0(z)."""
        return -self.s_half.eval(z) - 1j * self.s0.eval(z)

    def e_abs_sq_real(self, x):
        """|e(x)|^2 on the real line: s_half(x)^2 + s0(x)^2."""
        return self.s_half.eval(complex(x)).real ** 2 + self.s0.eval(complex(x)).real ** 2

    # ------------------------------------------------------------------
    # kernel

    def kernel(self, z, w):
        """Reproducing kernel k(z, w), Wronskian form across the diagonal seam."""
        z, w = complex(z), complex(w)
        u = np.conjugate(w)
        delta = self.numerics.seam_scale * (1.0 + abs(z))
        if abs(z - u) > delta:
            num = (self.s_half.eval(z) * self.s0.eval(u)
                   - self.s0.eval(z) * self.s_half.eval(u))
            return num / (math.pi * (z - u))
        return complex(self._wronskian((z + u) / 2.0))

    def kernel_vec(self, zs, w):
        """Vectorized kernel in the first argument, scalar w."""
        zs = np.asarray(zs, dtype=complex)
        shape = zs.shape
        flat = np.atleast_1d(zs).ravel()
        u = complex(np.conjugate(complex(w)))
        sh = self.s_half.eval_array(flat)
        s0 = self.s0.eval_array(flat)
        shu = self.s_half.eval(u)
        s0u = self.s0.eval(u)
        delta = self.numerics.seam_scale * (1.0 + np.abs(flat))
        diff = flat - u
        near = np.abs(diff) <= delta
        safe = np.where(near, 1.0, diff)
        out = (sh * s0u - s0 * shu) / (math.pi * safe)
        for i in np.nonzero(near)[0]:
            out[i] = self._wronskian((complex(flat[i]) + u) / 2.0)
        return out.reshape(shape) if shape else out[0]

    def kernel_diag(self, x):
        """k(x, x) > 0 for real x; raises on an orientation violation."""
        v = self._wronskian(complex(x)).real
        if v <= 0.0:
            raise OrientationViolation(f"kernel diagonal {v:.3e} <= 0 at x={x}", x=x)
        return float(v)

    # ------------------------------------------------------------------
    # associated functions and spectra

    def assoc_s(self, beta):
        """The associated function sin(beta)*s_half + cos(beta)*s0."""
        if beta == 0.0:
            return self.s0
        if beta == HALF_PI:
            return self.s_half
        sb, cb = math.sin(beta), math.cos(beta)
        if self.s0.kind == "poly" and self.s_half.kind == "poly":
            return self.s_half.scale(sb).add(self.s0.scale(cb))
        return RealEntireFunction.closure(
            lambda z, m=self, a=sb, b=cb: a * m.s_half.eval(z) + b * m.s0.eval(z),
            name=f"s_beta[{beta:.12g}]", is_real=True)

    def spectrum(self, beta, window=None):
        """Located spectrum of S_beta, memoized per (beta, window)."""
        key = (float(beta), tuple(window) if window is not None else None)
        if key not in self._spectra:
            from .spectra import find_spectrum
            self._spectra[key] = find_spectrum(self, beta, window=window)
        return self._spectra[key]

    def spectral_radius(self):
        """max |x| over spec(S_pi/2), floored at 1 for grid construction."""
        pts = self.spectrum(HALF_PI).points
        return max(1.0, float(np.max(np.abs(pts)))) if pts.size else 1.0

    def test_grid(self, n=None):
        """Real membership-test grid on [-2R, 2R], R = spectral radius."""
        n = n or self.numerics.grid_points
        r = 2.0 * self.spectral_radius()
        if self.dim is None:
            # truncated models: reconstruction is only trusted inside the window
            lo, hi = self.numerics.window
            return np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), n)
        return np.linspace(-r, r, n)

    # ------------------------------------------------------------------

    def __repr__(self):
        d = self.dim if self.dim is not None else "truncated"
        return f"DBSpaceModel({self.provenance}, dim={d})"


# ----------------------------------------------------------------------
# module-level operations (thin wrappers keep call sites uniform)


def assoc_s(space, beta):
    return space.assoc_s(beta)


def kernel(space, z, w):
    return space.kernel(z, w)


def kernel_diag(space, x):
    return space.kernel_diag(x)


def inner_product(space, f, g, basis_beta=HALF_PI):
    """<f, g> via Parseval in the kernel basis on spec(S_basis_beta).

    Conjugate-linear in the first argument:
    sum_k conj(f(x_k)) g(x_k) / k(x_k, x_k).
    """
    if not 0.0 < basis_beta < math.pi:
        raise RelationCase("Parseval basis requires beta in (0, pi)")
    spec = space.spectrum(basis_beta)
    if spec.points.size == 0:
        raise SpectrumMissing("no spectrum points located for the Parseval basis")
    fv = np.array([f.eval(complex(x)) for x in spec.points])
    gv = np.array([g.eval(complex(x)) for x in spec.points])
    return complex(np.sum(np.conjugate(fv) * gv / spec.diag))


def norm_sq(space, f, basis_beta=HALF_PI):
    return inner_product(space, f, f, basis_beta=basis_beta).real


def _decay_exponent(integrand, r0):
    """Empirical decay exponent of |integrand| for |x| >= r0."""
    radii = r0 * np.array([1.0, 4.0, 16.0, 64.0])
    mags = []
    for r in radii:
        m = abs(integrand(r)) + abs(integrand(-r))
        mags.append(max(m, 1e-300))
    slopes = np.diff(np.log(mags)) / np.diff(np.log(radii))
    return float(np.max(slopes))


def inner_product_quadrature(space, f, g, *, full_output=False):
    """<f, g> by adaptive quadrature of conj(f(x)) g(x) / |e(x)|^2 on the line.

    Finite-dimensional models integrate over all of R with an exact degree
    gate for polynomial inputs; truncated models integrate over a hard
    window and report the tail residual estimate.
    """
    dim = space.dim
    df, dg = f.poly_degree, g.poly_degree
    if dim is not None and df is not None and dg is not None and df + dg >= 2 * dim:
        raise DivergentIntegrand(
            f"deg f + deg g = {df + dg} >= 2*dim = {2 * dim}; weight cannot absorb it")

    def integrand_re(x):
        w = space.e_abs_sq_real(x)
        return (np.conjugate(f.eval(complex(x))) * g.eval(complex(x))).real / w

    def integrand_im(x):
        w = space.e_abs_sq_real(x)
        return (np.conjugate(f.eval(complex(x))) * g.eval(complex(x))).imag / w

    lo, hi = space.numerics.window
    r0 = max(abs(lo), abs(hi), 1.0)
    if dim is not None and (df is None or dg is None):
        # non-polynomial input on a finite-dim model: probe the decay
        if _decay_exponent(lambda x: integrand_re(x) + 1j * integrand_im(x), r0) > -1.05:
            raise DivergentIntegrand("integrand does not decay integrably on the real line")

    tol = space.numerics.quad_tol
    tail = 0.0
    if dim is not None:
        re, _ = integrate.quad(integrand_re, -np.inf, np.inf, epsabs=tol, epsrel=tol, limit=400)
        im, _ = integrate.quad(integrand_im, -np.inf, np.inf, epsabs=tol, epsrel=tol, limit=400)
    else:
        re, _ = integrate.quad(integrand_re, lo, hi, epsabs=tol, epsrel=tol, limit=800)
        im, _ = integrate.quad(integrand_im, lo, hi, epsabs=tol, epsrel=tol, limit=800)
        edge = abs(integrand_re(hi)) + abs(integrand_re(lo))
        tail = float(edge * r0)  # crude monotone bound, reported not hidden
    value = complex(re, im)
    if full_output:
        return value, {"tail_residual": tail, "window": (lo, hi) if dim is None else None}
    return value


def expansion_coefficients(space, f, basis_beta=HALF_PI):
    """Coefficients gamma_k of f = sum gamma_k k(., x_k) on spec(S_basis_beta)."""
    spec = space.spectrum(basis_beta)
    vals = np.array([f.eval(complex(x)) for x in spec.points])
    return spec, vals / spec.diag


def expansion_from_samples(space, spectrum, values, name=None):
    """Element of the space with the given samples on the spectrum points."""
    values = np.asarray(values, dtype=complex)
    return RealEntireFunction.kernel_expansion(
        space, spectrum.points, values / spectrum.diag, name=name)


def in_space(space, f, tol=None):
    """Sampling-reconstruction membership test.

    Expands f from its samples on spec(S_pi/2) and compares the
    reconstruction against f on an independent test grid; true iff the
    scale-relative deviation stays below tolerance and the Parseval norm
    is finite. For truncated models the verdict is not a certificate and
    the report says so.
    """
    tol = tol if tol is not None else space.numerics.membership_tol
    spec, gamma = expansion_coefficients(space, f, HALF_PI)
    recon = RealEntireFunction.kernel_expansion(space, spec.points, gamma)
    grid = space.test_grid()
    fv = f.eval_array(grid.astype(complex))
    rv = recon.eval_array(grid.astype(complex))
    scale = 1.0 + float(np.max(np.abs(fv)))
    dev = float(np.max(np.abs(fv - rv))) / scale
    nsq = float(np.sum(np.abs(gamma) ** 2 * spec.diag))
    passed = bool(dev <= tol and np.isfinite(nsq))
    return MembershipReport(passed=passed, deviation=dev, norm_sq=nsq,
                            tolerance=tol, certified=space.dim is not None,
                            grid=grid)


def project(space, f):
    """Best in-space interpolant of f from its spec(S_pi/2) samples."""
    spec, gamma = expansion_coefficients(space, f, HALF_PI)
    return RealEntireFunction.kernel_expansion(space, spec.points, gamma,
                                               name=f"project({f.name})")


def reconstruct(space, samples):
    """(U_beta f)(z) = sum_k f(x_k) s0(x_k) / k(x_k,x_k) * k(z, x_k)."""
    spec = samples.spectrum
    s0v = np.array([space.s0.eval(complex(x)).real for x in spec.points])
    coeffs = samples.values * s0v / spec.diag
    return RealEntireFunction.kernel_expansion(
        space, spec.points, coeffs, name=f"U_beta[{samples.beta:.6g}]")
