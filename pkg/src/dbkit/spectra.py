"""Location of the real simple zeros of the associated functions.

The zero set of s_beta is the spectrum of the selfadjoint extension
S_beta. Roots are located by a sign-change scan on an adaptive grid,
bracketed with Brent's method and polished with one Newton step. For
Jacobi-built models the located count is cross-checked against the
independent dense eigensolver; truncated models report located points
without a completeness certificate.

beta = 0 is the multivalued relation: the zeros of s0 are still located
(they are needed for canonical products) but the data is tagged as the
relation case and carries no spectral jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import (CountMismatch, NonSimpleZero, RelationCase,
                     S0VanishesOnSpectrum, SameBeta)

_PI = math.pi


@dataclass
class SpectrumData:
    """Sorted zeros of s_beta with derivatives, kernel diagonal and jumps."""

    beta: float
    points: np.ndarray         # strictly increasing real zeros
    derivs: np.ndarray         # s_beta'(x_k)
    diag: np.ndarray           # k(x_k, x_k)
    jumps: np.ndarray | None   # |s0(x_k)|^2 / diag_k, None in the relation case
    window: tuple
    complete: bool             # count certified (finite-dim models only)
    relation_case: bool = False

    def __len__(self):
        return self.points.size


@dataclass
class InterlacingReport:
    passed: bool
    counts: list = field(default_factory=list)
    common_window: tuple = None

    def __bool__(self):
        return self.passed


def default_window(space, beta):
    """Search window guaranteed to contain every zero for finite-dim models.

    Rank-one perturbation shifts eigenvalues by at most |cot beta|/pi times
    ||s0||^2 (Weyl), so the base window is widened accordingly.
    """
    lo, hi = space.numerics.window
    if space.dim is None or beta in (0.0, _PI / 2.0):
        return (lo, hi)
    shift = abs(math.cos(beta) / math.sin(beta)) / _PI * _s0_norm_bound(space) + 1.0
    return (lo - shift, hi + shift)


def _s0_norm_bound(space):
    # from_jacobi models normalize s0 to an orthonormal basis element
    return 1.0 if space.jacobi is not None else 4.0


def _expected_count(space, beta):
    if space.dim is None:
        return None
    if beta == 0.0:
        d = space.s0.poly_degree
        return d if d is not None else None
    return space.dim


def _scan_brackets(fn, lo, hi, n_points):
    xs = np.linspace(lo, hi, n_points)
    vals = fn(xs)
    sign = np.sign(vals)
    brackets = []
    for i in range(len(xs) - 1):
        if sign[i] == 0.0:
            # grid point is an exact zero: nudge the bracket around it
            eps = 1e-12 * (1.0 + abs(xs[i]))
            brackets.append((xs[i] - eps, xs[i] + eps))
        elif sign[i] * sign[i + 1] < 0.0:
            brackets.append((xs[i], xs[i + 1]))
    return brackets, xs, vals


def _refine_dips(fn, xs, vals, depth=2):
    """Subdivide cells where |s| dips without a sign change (close root pairs)."""
    extra = []
    mags = np.abs(vals)
    med = np.median(mags) + 1e-300
    for i in range(1, len(xs) - 2):
        same_sign = np.sign(vals[i]) * np.sign(vals[i + 1]) > 0.0
        dip = min(mags[i], mags[i + 1]) < 1e-3 * med
        if same_sign and dip:
            sub, sx, sv = _scan_brackets(fn, xs[i - 1], xs[i + 2], 65)
            extra.extend(sub)
            if depth > 1:
                extra.extend(_refine_dips(fn, sx, sv, depth - 1))
    return extra


def find_spectrum(space, beta, window=None, *, oracle_check=True):
    """All zeros of s_beta inside the window as a SpectrumData record.

    Raises ``count-mismatch`` when a Jacobi-built model does not yield the
    eigensolver-certified number of zeros, and ``non-simple-zero`` when a
    located root has derivative below tolerance.
    """
    if not 0.0 <= beta < _PI:
        raise ValueError("beta must lie in [0, pi)")
    win = tuple(window) if window is not None else default_window(space, beta)
    lo, hi = float(win[0]), float(win[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError("window must be a finite nonempty interval")

    s_b = space.assoc_s(beta)

    def fvec(xs):
        return s_b.eval_array(np.asarray(xs, dtype=complex)).real

    size_hint = space.dim if space.dim is not None else space.numerics.truncation
    expected = _expected_count(space, beta)
    if oracle_check and expected is not None and space.jacobi is not None and 0.0 < beta < _PI:
        from .models import oracle_eigensystem
        expected = len(oracle_eigensystem(space.jacobi, beta, self_test=False)[0])

    n_points = max(8 * max(size_hint, 1), 64) + 1
    roots = []
    for _ in range(7):
        brackets, xs, vals = _scan_brackets(fvec, lo, hi, n_points)
        brackets.extend(_refine_dips(fvec, xs, vals))
        roots = _solve_brackets(space, s_b, brackets)
        if expected is None or len(roots) == expected:
            break
        n_points = 2 * (n_points - 1) + 1
    if expected is not None and len(roots) != expected:
        raise CountMismatch(
            f"located {len(roots)} zeros of s_beta(beta={beta:.6g}) in {win}, "
            f"expected {expected}", located=len(roots), expected=expected)

    points = np.array(sorted(roots))
    scale = 1.0 + (float(np.max(np.abs(points))) if points.size else 0.0)
    derivs = np.array([s_b.derivative(complex(x)).real for x in points])
    for x, d in zip(points, derivs):
        if abs(d) < space.numerics.tol * scale:
            raise NonSimpleZero(f"derivative {d:.3e} below tolerance at root {x:.6g}", x=x)
    diag = np.array([space.kernel_diag(x) for x in points])

    jumps = None
    relation = beta == 0.0
    if not relation and points.size:
        s0v = np.array([space.s0.eval(complex(x)).real for x in points])
        if np.any(np.abs(s0v) < space.numerics.tol * scale):
            raise S0VanishesOnSpectrum(
                "s0 vanishes on spec(S_beta) with beta != 0; model corrupt")
        jumps = s0v**2 / diag

    return SpectrumData(beta=float(beta), points=points, derivs=derivs, diag=diag,
                        jumps=jumps, window=(lo, hi),
                        complete=expected is not None, relation_case=relation)


def _solve_brackets(space, s_b, brackets):
    def freal(x):
        return s_b.eval(complex(x)).real

    roots = []
    for a, b in brackets:
        fa, fb = freal(a), freal(b)
        if fa == 0.0:
            x = a
        elif fb == 0.0:
            x = b
        elif fa * fb > 0.0:
            continue
        else:
            x = brentq(freal, a, b, xtol=1e-15, rtol=8.9e-16)
        # one Newton polish
        d = s_b.derivative(complex(x)).real
        if d != 0.0:
            x = x - freal(x) / d
        roots.append(x)
    # dedupe near-identical roots from overlapping refinement windows
    roots.sort()
    out = []
    for x in roots:
        if not out or abs(x - out[-1]) > 1e-10 * (1.0 + abs(x)):
            out.append(x)
    return out


def spectral_jumps(space, spec):
    """Jumps of the spectral function m_beta at the located points."""
    if spec.relation_case or spec.beta == 0.0:
        raise RelationCase("m_beta is undefined for the multivalued extension beta=0")
    return spec.jumps


def cumulative_spectral_function(spec, ts):
    """m_beta(t) = sum of jumps at points below t, for each t in ts."""
    if spec.jumps is None:
        raise RelationCase("m_beta is undefined for the multivalued extension beta=0")
    ts = np.asarray(ts, dtype=float)
    return np.array([float(np.sum(spec.jumps[spec.points < t])) for t in ts])


def eigenfunction(space, spec, k):
    """The eigenfunction s_beta(z)/(z - x_k), removable singularity guarded."""
    from .entire import RealEntireFunction

    x_k = float(spec.points[k])
    s_b = space.assoc_s(spec.beta)
    guard = 1e-6 * (1.0 + abs(x_k))

    def fn(z):
        z = complex(z)
        if abs(z - x_k) < guard:
            return (s_b.derivative(x_k)
                    + 0.5 * s_b.derivative(x_k, order=2) * (z - x_k))
        return s_b.eval(z) / (z - x_k)

    return RealEntireFunction.closure(fn, name=f"eig[{spec.beta:.6g}; {x_k:.6g}]",
                                      is_real=True)


def check_interlacing(a, b):
    """Exactly one zero of b strictly between consecutive zeros of a.

    Numerical bracketing aid, always verified a posteriori and never
    assumed. Single-point and empty interiors pass vacuously.
    """
    if a.beta == b.beta:
        raise SameBeta(f"both spectra have beta={a.beta}")
    lo = max(a.window[0], b.window[0])
    hi = min(a.window[1], b.window[1])
    pa = a.points[(a.points >= lo) & (a.points <= hi)]
    pb = b.points[(b.points >= lo) & (b.points <= hi)]
    counts = []
    ok = True
    for left, right in zip(pa[:-1], pa[1:]):
        c = int(np.count_nonzero((pb > left) & (pb < right)))
        counts.append(c)
        if c != 1:
            ok = False
    return InterlacingReport(passed=ok, counts=counts, common_window=(lo, hi))
