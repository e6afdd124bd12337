"""Periodic grid model of compactly supported functions on R^N.

A function with support well inside one period cell [-L/2, L/2)^N is
represented by its samples on a uniform lattice.  The discrete Fourier
transform is normalized so that the forward transform is the Riemann sum
of

    f_hat(y) = (2 pi)^{-N} \int f(x) exp(-i x y) dx

over the cell, and the inverse is the plain frequency sum (no prefactor)
weighted by the frequency-cell volume (2 pi / L)^N.  With these weights
the pair is an exact inverse pair on the lattice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "GridSpec",
    "GridFunction",
    "SpectrumFunction",
    "forward_transform",
    "inverse_transform",
    "lp_norm",
    "pair",
    "spectral_l2_norm",
]


@dataclass(frozen=True)
class GridSpec:
    """Sampling lattice: n points per axis on the cell [-L/2, L/2)^N."""

    dimension: int
    points_per_axis: int
    period: float = 2.0 * np.pi

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        n = self.points_per_axis
        if n < 8 or n % 2 != 0:
            raise ValueError(f"points_per_axis must be even and >= 8, got {n}")
        if not (self.period > 0):
            raise ValueError(f"period must be positive, got {self.period}")

    @property
    def spacing(self) -> float:
        return self.period / self.points_per_axis

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dimension

    @property
    def cell_volume(self) -> float:
        """Volume of one spatial lattice cell, (L/n)^N."""
        return self.spacing**self.dimension

    @property
    def freq_cell_volume(self) -> float:
        """Volume of one frequency lattice cell, (2 pi / L)^N."""
        return (2.0 * np.pi / self.period) ** self.dimension

    def axis_points(self) -> np.ndarray:
        n, L = self.points_per_axis, self.period
        return -L / 2.0 + (L / n) * np.arange(n)

    def axis_wavenumbers(self) -> np.ndarray:
        """Integer DFT wavenumbers in standard order, Nyquist at -n/2."""
        n = self.points_per_axis
        return np.rint(np.fft.fftfreq(n) * n).astype(int)

    def axis_frequencies(self) -> np.ndarray:
        return (2.0 * np.pi / self.period) * self.axis_wavenumbers()

    def meshgrid(self) -> tuple:
        return np.meshgrid(*([self.axis_points()] * self.dimension), indexing="ij")

    def frequency_grids(self) -> tuple:
        return np.meshgrid(
            *([self.axis_frequencies()] * self.dimension), indexing="ij"
        )

    def frequency_magnitude(self) -> np.ndarray:
        grids = self.frequency_grids()
        return np.sqrt(sum(g * g for g in grids))


@lru_cache(maxsize=64)
def _phase(spec: GridSpec) -> np.ndarray:
    """Per-mode sign (-1)^{k_1 + ... + k_N}, compensating the -L/2 grid offset."""
    axis = (-1.0) ** spec.axis_wavenumbers()
    out = axis
    for _ in range(spec.dimension - 1):
        out = np.multiply.outer(out, axis)
    return out


def _check_values(spec: GridSpec, values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.shape != spec.shape:
        raise ValueError(f"values shape {arr.shape} does not match grid {spec.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr


@dataclass(frozen=True)
class GridFunction:
    """Sampled complex field on the lattice of `spec`."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.spec, self.values))
        self.values.setflags(write=False)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._require_same_spec(other)
        return GridFunction(self.spec, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._require_same_spec(other)
        return GridFunction(self.spec, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._require_same_spec(other)
            return GridFunction(self.spec, self.values * other.values)
        return GridFunction(self.spec, self.values * other)

    __rmul__ = __mul__

    def _require_same_spec(self, other):
        if other.spec != self.spec:
            raise ValueError("grid specs do not match")

    def to_json(self) -> str:
        return _field_to_json(self.spec, self.values)

    @staticmethod
    def from_json(text: str) -> "GridFunction":
        spec, values = _field_from_json(text)
        return GridFunction(spec, values)


@dataclass(frozen=True)
class SpectrumFunction:
    """Discrete Fourier coefficients, standard DFT order on each axis."""

    spec: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _check_values(self.spec, self.coefficients)
        )
        self.coefficients.setflags(write=False)

    def to_json(self) -> str:
        return _field_to_json(self.spec, self.coefficients)

    @staticmethod
    def from_json(text: str) -> "SpectrumFunction":
        spec, values = _field_from_json(text)
        return SpectrumFunction(spec, values)


def _field_to_json(spec: GridSpec, arr: np.ndarray) -> str:
    flat = arr.reshape(-1)
    return json.dumps(
        {
            "spec": {
                "N": spec.dimension,
                "n": spec.points_per_axis,
                "L": spec.period,
            },
            "values": [[float(v.real), float(v.imag)] for v in flat],
        }
    )


def _field_from_json(text: str):
    obj = json.loads(text)
    spec = GridSpec(obj["spec"]["N"], obj["spec"]["n"], obj["spec"]["L"])
    flat = np.array([complex(re, im) for re, im in obj["values"]])
    return spec, flat.reshape(spec.shape)


def forward_transform(f: GridFunction) -> SpectrumFunction:
    """Riemann-sum Fourier coefficients with the (2 pi)^{-N} prefactor.

    Exact for band-limited f (lattice exponentials are orthogonal on the
    lattice).
    """
    spec = f.spec
    pref = (2.0 * np.pi) ** (-spec.dimension) * spec.cell_volume
    coeffs = pref * _phase(spec) * np.fft.fftn(f.values)
    return SpectrumFunction(spec, coeffs)


def inverse_transform(F: SpectrumFunction) -> GridFunction:
    """Frequency sum weighted by the frequency-cell volume; inverse of
    forward_transform on the lattice."""
    spec = F.spec
    scale = F.spec.freq_cell_volume * spec.size
    values = scale * np.fft.ifftn(F.coefficients * _phase(spec))
    return GridFunction(spec, values)


def lp_norm(f: GridFunction, p: float) -> float:
    """Discrete L_p norm over the period cell; p = inf gives the max norm."""
    if p != np.inf and p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    mags = np.abs(f.values)
    if p == np.inf:
        return float(mags.max())
    return float((np.sum(mags**p) * f.spec.cell_volume) ** (1.0 / p))


def spectral_l2_norm(F: SpectrumFunction) -> float:
    """L_2 norm of the underlying grid function computed on the spectral
    side (Parseval under the transform convention)."""
    spec = F.spec
    weight = (2.0 * np.pi) ** spec.dimension * spec.freq_cell_volume
    return float(np.sqrt(weight * np.sum(np.abs(F.coefficients) ** 2)))


def pair(f: GridFunction, g: GridFunction) -> complex:
    """Bilinear pairing \int f g dx as a Riemann sum (no conjugation)."""
    if f.spec != g.spec:
        raise ValueError("grid specs do not match")
    return complex(np.sum(f.values * g.values) * f.spec.cell_volume)
