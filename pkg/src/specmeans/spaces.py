"""Smoothness norms on the periodic grid.

Implements the norm routes used by the convergence experiments:
Liouville (Bessel-weighted L_p), Littlewood-Paley Besov, the
modulus-of-continuity Besov equivalent, classical Besov with second
differences, Sobolev, Slobodetskii (1-D), Nikolskii, and smooth-cutoff
localized versions of all of them.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from .grid import GridFunction, GridSpec, forward_transform, inverse_transform, lp_norm
from .grid import SpectrumFunction
from .multipliers import (
    MultiplierPlan,
    apply_multiplier,
    bessel_order,
    spectral_derivative,
)

__all__ = [
    "LittlewoodPaleyPartition",
    "BesovParams",
    "NormSpec",
    "build_partition",
    "smooth_step",
    "smooth_window",
    "liouville_norm",
    "besov_norm_lp",
    "difference",
    "modulus_of_continuity",
    "besov_norm_modulus",
    "classical_besov_norm",
    "sobolev_norm",
    "nikolskii_norm",
    "slobodetskii_norm",
    "localized_norm",
    "evaluate_norm",
]


def _bridge(x: np.ndarray) -> np.ndarray:
    """exp(-1/x) for x > 0, 0 otherwise; the C^inf glue."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    with np.errstate(over="ignore", divide="ignore"):
        out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(r: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """C^inf step: 1 for r <= lo, 0 for r >= hi, monotone between."""
    r = np.asarray(r, dtype=float)
    u = (r - lo) / (hi - lo)
    up = _bridge(1.0 - u)
    down = _bridge(u)
    denom = up + down
    out = np.where(denom > 0, up / np.where(denom > 0, denom, 1.0), 0.0)
    out = np.where(u <= 0, 1.0, out)
    out = np.where(u >= 1, 0.0, out)
    return out


def _chi(r: np.ndarray) -> np.ndarray:
    """Smooth radial step: 1 on [0,1], 0 on [2,inf)."""
    return smooth_step(r, 1.0, 2.0)


@dataclass(frozen=True)
class LittlewoodPaleyPartition:
    """Dyadic multipliers phi(2^{-k} xi), k = 1..k_max, plus the base
    block F_psi = 1 - sum of shells."""

    spec: GridSpec
    k_max: int
    shell_multipliers: tuple
    base_multiplier: np.ndarray

    def shell(self, k: int) -> np.ndarray:
        return self.shell_multipliers[k - 1]


def build_partition(spec: GridSpec) -> LittlewoodPaleyPartition:
    """Shells phi(2^{-k} xi) = chi(2^{-k}|xi|) - chi(2^{1-k}|xi|).

    The telescoping sum makes the partition-of-unity identity exact at
    every lattice frequency below the dyadic ceiling 2^{k_max}.
    """
    xi = spec.frequency_magnitude()
    k_max = int(math.ceil(math.log2(float(np.max(xi))))) + 1
    shells = []
    chi_prev = _chi(2.0 * xi)  # chi(2^{1-k}|xi|) at k = 1
    for k in range(1, k_max + 1):
        chi_k = _chi(xi / 2.0**k)
        shells.append(chi_k - chi_prev)
        chi_prev = chi_k
    base = 1.0 - sum(shells)
    return LittlewoodPaleyPartition(spec, k_max, tuple(shells), base)


@dataclass(frozen=True)
class BesovParams:
    s: float
    p: float
    q: float

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be >= 1 (inf allowed)")


def liouville_norm(f: GridFunction, s: float, p: float) -> float:
    """L_p norm of the Bessel-weighted function (order s, any sign)."""
    return lp_norm(bessel_order(s, f), p)


def besov_norm_lp(
    f: GridFunction, params: BesovParams, partition: LittlewoodPaleyPartition
) -> float:
    """Littlewood-Paley Besov norm: base block plus the l_q sum of
    2^{sk}-weighted shell norms."""
    if partition.spec != f.spec:
        raise ValueError("partition grid does not match")
    base = apply_multiplier(
        MultiplierPlan(f.spec, partition.base_multiplier, "lp base"), f
    )
    total = lp_norm(base, params.p)
    terms = []
    for k in range(1, partition.k_max + 1):
        piece = apply_multiplier(
            MultiplierPlan(f.spec, partition.shell(k), f"lp shell {k}"), f
        )
        terms.append(2.0 ** (params.s * k) * lp_norm(piece, params.p))
    terms = np.array(terms)
    if params.q == np.inf:
        total += float(np.max(terms))
    else:
        total += float(np.sum(terms**params.q) ** (1.0 / params.q))
    return total


def _shift_steps(spec: GridSpec, y) -> tuple:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.size != spec.dimension:
        raise ValueError("shift length does not match dimension")
    steps = y / spec.spacing
    rounded = np.rint(steps)
    if np.max(np.abs(steps - rounded)) > 1e-9:
        raise ValueError(f"shift {y} is not lattice-commensurate")
    return tuple(int(s) for s in rounded)


def difference(f: GridFunction, y, m: int) -> GridFunction:
    """m-th finite difference: sum_k C(m,k) (-1)^k f(x + k y), y a
    lattice-commensurate periodic shift."""
    if m < 1:
        raise ValueError("difference order must be >= 1")
    steps = _shift_steps(f.spec, y)
    acc = np.zeros(f.spec.shape, dtype=complex)
    for k in range(m + 1):
        shifted = np.roll(
            f.values, tuple(-k * s for s in steps), axis=tuple(range(f.spec.dimension))
        )
        acc += comb(m, k) * (-1) ** k * shifted
    return GridFunction(f.spec, acc)


def _shift_vectors(spec: GridSpec, t: float, max_count: int = 512) -> list:
    """Lattice-commensurate shifts with 0 < |y| < t.

    1-D: full enumeration.  Higher dimensions: full enumeration when
    small, otherwise a quasi-uniform direction/magnitude subsample of at
    least 64 shifts.
    """
    h = spec.spacing
    jmax = int(math.ceil(t / h)) + 1
    vecs = []
    if spec.dimension == 1:
        for j in range(1, jmax + 1):
            if 0 < j * h < t:
                vecs.append(np.array([j * h]))
        return vecs
    ranges = [range(-jmax, jmax + 1)] * spec.dimension
    for idx in itertools.product(*ranges):
        v = h * np.array(idx, dtype=float)
        r = np.linalg.norm(v)
        if 0 < r < t:
            vecs.append(v)
    if len(vecs) > max_count:
        vecs.sort(key=lambda v: (round(np.linalg.norm(v) / h), tuple(v)))
        stride = len(vecs) // max(64, max_count // 2)
        vecs = vecs[:: max(1, stride)]
    return vecs


def modulus_of_continuity(f: GridFunction, t: float, m: int, p: float) -> float:
    """sup over lattice shifts |y| < t of the L_p norm of the m-th
    difference."""
    if t < f.spec.spacing or t <= 0:
        warnings.warn("t below grid spacing; modulus reported as 0", stacklevel=2)
        return 0.0
    best = 0.0
    for y in _shift_vectors(f.spec, t):
        best = max(best, lp_norm(difference(f, y, m), p))
    return best


def _log_grid_integral(ts: np.ndarray, gs: np.ndarray) -> float:
    """Trapezoid rule for int g(t) dt/t on the given nodes."""
    u = np.log(ts)
    return float(np.trapezoid(gs, u))


def _log_nodes(lo: float, hi: float, per_decade: int = 64) -> np.ndarray:
    decades = math.log10(hi / lo)
    count = max(4, int(math.ceil(per_decade * decades)) + 1)
    return np.geomspace(lo, hi, count)


def besov_norm_modulus(
    f: GridFunction, params: BesovParams, m: int, n1: int
) -> float:
    """Modulus-of-continuity Besov norm: ||f||_p plus, per axis, the
    L_q(dt/t) norm of t^{n1-s} omega_p^m(t, d^{n1} f / dx_j^{n1})."""
    s = params.s
    if s <= 0:
        raise ValueError("modulus route needs s > 0")
    if not (m + n1 > s and 0 <= n1 < s):
        raise ValueError("need m + n1 > s and 0 <= n1 < s")
    spec = f.spec
    ts = _log_nodes(spec.spacing, spec.period / 2.0)
    total = lp_norm(f, params.p)
    for j in range(spec.dimension):
        alpha = [0] * spec.dimension
        alpha[j] = n1
        g = spectral_derivative(f, alpha) if n1 else f
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            omegas = np.array([modulus_of_continuity(g, t, m, params.p) for t in ts])
        weighted = ts ** (n1 - s) * omegas
        if params.q == np.inf:
            total += float(np.max(weighted))
        else:
            total += _log_grid_integral(ts, weighted**params.q) ** (1.0 / params.q)
    return total


def _split_order(s: float) -> tuple:
    """s = k + frac with integer k and 0 < frac <= 1 (integers get frac = 1)."""
    if s <= 0:
        raise ValueError("order must be positive")
    k = math.ceil(s) - 1
    return k, s - k


def _multi_indices(dimension: int, total: int):
    for combo in itertools.product(range(total + 1), repeat=dimension):
        if sum(combo) == total:
            yield combo


def sobolev_norm(f: GridFunction, m: int, p: float) -> float:
    """Sum of L_p norms of all spectral derivatives of order <= m."""
    if m < 0 or m != int(m):
        raise ValueError("Sobolev order must be a nonnegative integer")
    total = 0.0
    for order in range(int(m) + 1):
        for alpha in _multi_indices(f.spec.dimension, order):
            total += lp_norm(spectral_derivative(f, alpha), p)
    return total


def _difference_h_set(spec: GridSpec, per_decade: int = 64) -> list:
    """Lattice-commensurate step vectors for the h-quadrature, magnitudes
    log-spaced in [spacing, L/4], with per-node log weights.

    Returns a list of (h_vector, magnitude, dtheta_weight) triples; 1-D
    enumerates both signs implicitly through the factor 2 surface measure
    of S^0.
    """
    h = spec.spacing
    hi = spec.period / 4.0
    mags = _log_nodes(h, hi, per_decade)
    if spec.dimension == 1:
        out = []
        seen = set()
        for r in mags:
            j = max(1, int(round(r / h)))
            if j * h > hi or j in seen:
                continue
            seen.add(j)
            out.append((np.array([j * h]), j * h, 2.0))  # both signs
        return out
    n_dirs = 64 if spec.dimension == 2 else 128
    dirs = []
    if spec.dimension == 2:
        angles = 2 * np.pi * (np.arange(n_dirs) + 0.5) / n_dirs
        dirs = [np.array([math.cos(a), math.sin(a)]) for a in angles]
        dtheta = 2 * np.pi / n_dirs
    else:
        rng = np.random.default_rng(12345)
        raw = rng.normal(size=(n_dirs, 3))
        dirs = [v / np.linalg.norm(v) for v in raw]
        dtheta = 4 * np.pi / n_dirs
    out = []
    seen = set()
    for r in mags:
        for d in dirs:
            steps = tuple(int(round(r * di / h)) for di in d)
            if all(s == 0 for s in steps):
                continue
            vec = h * np.array(steps, dtype=float)
            mag = float(np.linalg.norm(vec))
            key = steps
            if mag > hi or key in seen:
                continue
            seen.add(key)
            out.append((vec, mag, dtheta))
    return out


def classical_besov_norm(f: GridFunction, params: BesovParams) -> float:
    """Sobolev part of order [s]^- plus the second-difference seminorm
    integral over lattice steps |h| <= L/4."""
    k, frac = _split_order(params.s)
    if params.p == np.inf or params.q == np.inf:
        raise ValueError("classical route needs finite p and q")
    total = sobolev_norm(f, k, params.p)
    hset = _difference_h_set(f.spec)
    for alpha in _multi_indices(f.spec.dimension, k):
        g = spectral_derivative(f, alpha) if k else f
        # group nodes by magnitude for the radial log-trapezoid
        by_mag = {}
        for vec, mag, w in hset:
            val = lp_norm(difference(g, vec, 2), params.p)
            by_mag.setdefault(mag, []).append(w * (mag ** (-frac) * val) ** params.q)
        mags = np.array(sorted(by_mag))
        radial = np.array([sum(by_mag[m]) for m in mags])
        total += _log_grid_integral(mags, radial) ** (1.0 / params.q)
    return total


def nikolskii_norm(f: GridFunction, s: float, p: float) -> float:
    """q = inf Besov route: Sobolev part plus the sup over steps of
    |h|^{-frac} times the second-difference norm."""
    k, frac = _split_order(s)
    total = sobolev_norm(f, k, p)
    hset = _difference_h_set(f.spec)
    for alpha in _multi_indices(f.spec.dimension, k):
        g = spectral_derivative(f, alpha) if k else f
        best = 0.0
        for vec, mag, _ in hset:
            best = max(best, mag ** (-frac) * lp_norm(difference(g, vec, 2), p))
        total += best
    return total


def slobodetskii_norm(f: GridFunction, s: float, p: float) -> float:
    """Double-integral fractional seminorm; 1-D, noninteger s only."""
    if f.spec.dimension != 1:
        raise ValueError("Slobodetskii norm implemented for N = 1 only")
    if s <= 0 or s == int(s):
        raise ValueError("Slobodetskii order must be positive and noninteger")
    k = int(math.floor(s))
    frac = s - k
    total = sobolev_norm(f, k, p)
    g = spectral_derivative(f, [k]) if k else f
    x = f.spec.axis_points()
    vals = g.values
    dx = f.spec.spacing
    diff = np.abs(vals[:, None] - vals[None, :]) ** p
    dist = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(dist, np.inf)  # exclude diagonal cells
    kernel = diff / dist ** (1.0 + frac * p)
    total += float((np.sum(kernel) * dx * dx) ** (1.0 / p))
    return total


def smooth_window(
    spec: GridSpec, radius: float, outer: float | None = None
) -> GridFunction:
    """Smooth cutoff: 1 on |x| <= radius, 0 outside |x| >= outer
    (default 3L/8, keeping the L/8 boundary margin)."""
    if outer is None:
        outer = 3.0 * spec.period / 8.0
    if not (0 < radius < outer):
        raise ValueError("need 0 < radius < outer")
    mesh = spec.meshgrid()
    r = np.sqrt(sum(m**2 for m in mesh))
    return GridFunction(spec, smooth_step(r, radius, outer))


@dataclass(frozen=True)
class NormSpec:
    """Designator for one of the norm routes."""

    kind: str  # lp | liouville | besov_lp | besov_modulus | classical_besov
    #            | sobolev | nikolskii | slobodetskii
    p: float = 2.0
    s: float = 0.0
    q: float = 2.0
    m: int = 2
    n1: int = 0

    def label(self) -> str:
        if self.kind == "lp":
            return f"L{self.p:g}"
        if self.kind == "liouville":
            return f"liouville:{self.s:g}:{self.p:g}"
        if self.kind in ("besov_lp", "besov_modulus", "classical_besov"):
            return f"{self.kind}:{self.s:g}:{self.p:g}:{self.q:g}"
        return f"{self.kind}:{self.s:g}:{self.p:g}"


def evaluate_norm(
    f: GridFunction,
    norm_spec: NormSpec,
    partition: LittlewoodPaleyPartition | None = None,
) -> float:
    kind = norm_spec.kind
    if kind == "lp":
        return lp_norm(f, norm_spec.p)
    if kind == "liouville":
        return liouville_norm(f, norm_spec.s, norm_spec.p)
    if kind == "besov_lp":
        if partition is None:
            partition = build_partition(f.spec)
        return besov_norm_lp(f, BesovParams(norm_spec.s, norm_spec.p, norm_spec.q), partition)
    if kind == "besov_modulus":
        return besov_norm_modulus(
            f, BesovParams(norm_spec.s, norm_spec.p, norm_spec.q), norm_spec.m, norm_spec.n1
        )
    if kind == "classical_besov":
        return classical_besov_norm(f, BesovParams(norm_spec.s, norm_spec.p, norm_spec.q))
    if kind == "sobolev":
        return sobolev_norm(f, int(norm_spec.s), norm_spec.p)
    if kind == "nikolskii":
        return nikolskii_norm(f, norm_spec.s, norm_spec.p)
    if kind == "slobodetskii":
        return slobodetskii_norm(f, norm_spec.s, norm_spec.p)
    raise ValueError(f"unknown norm kind {kind!r}")


def localized_norm(
    f: GridFunction,
    window: GridFunction | None,
    norm_spec: NormSpec,
    partition: LittlewoodPaleyPartition | None = None,
) -> float:
    """Norm of window * f: upper-bound surrogate for the restriction norm
    on the compact covered by the window's plateau."""
    if window is not None:
        w = window.values.real
        if np.min(w) < -1e-12 or np.max(w) > 1.0 + 1e-12:
            raise ValueError("window values must lie in [0, 1]")
        f = f * window
    return evaluate_norm(f, norm_spec, partition)
