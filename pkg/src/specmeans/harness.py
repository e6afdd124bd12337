"""Experiment runner: convergence sweeps, norm-equivalence studies,
hypothesis reports, and CSV/JSON emission."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .distributions import (
    CompactDistribution,
    PointAtom,
    distribution_convergence,
    realization,
)
from .grid import GridFunction, GridSpec, forward_transform, inverse_transform
from .grid import SpectrumFunction, lp_norm
from .multipliers import converge_error, spectral_mean
from .signals import make_signal
from .spaces import (
    NormSpec,
    build_partition,
    besov_norm_lp,
    besov_norm_modulus,
    classical_besov_norm,
    evaluate_norm,
    liouville_norm,
    localized_norm,
    nikolskii_norm,
    slobodetskii_norm,
    smooth_window,
    BesovParams,
)
from .symbols import (
    HomogeneousSymbol,
    MeanFunction,
    TheoremParameters,
    assemble_hypothesis_report,
    make_gaussian_mean,
    make_riesz_mean,
    make_smooth_cutoff_mean,
    power_symbol,
    quartic_symbol,
)

__all__ = [
    "ExperimentConfig",
    "ConvergenceReport",
    "parse_mean",
    "parse_symbol",
    "parse_norm_spec",
    "run_convergence_function",
    "run_convergence_distribution",
    "run_equivalence",
    "run_conditions",
    "report_to_csv",
    "report_to_json",
]


def parse_mean(text: str) -> MeanFunction:
    parts = text.split(":")
    if parts[0] == "gaussian":
        return make_gaussian_mean()
    if parts[0] == "riesz":
        return make_riesz_mean(float(parts[1]) if len(parts) > 1 else 1.0)
    if parts[0] == "cutoff":
        return make_smooth_cutoff_mean(float(parts[1]) if len(parts) > 1 else 1.0)
    raise ValueError(f"unknown mean {text!r}")


def parse_symbol(text: str) -> HomogeneousSymbol:
    parts = text.split(":")
    if parts[0] == "abs":
        return power_symbol(float(parts[1]) if len(parts) > 1 else 2.0)
    if parts[0] == "quartic":
        return quartic_symbol()
    raise ValueError(f"unknown symbol {text!r}")


def parse_norm_spec(text: str) -> NormSpec:
    """e.g. 'liouville:0.5:2', 'besov:0.5:2:2', 'lp:2', 'nikolskii:0.7:2'."""
    parts = text.split(":")
    kind = parts[0]
    if kind == "lp":
        return NormSpec("lp", p=float(parts[1]) if len(parts) > 1 else 2.0)
    if kind == "liouville":
        return NormSpec("liouville", s=float(parts[1]), p=float(parts[2]))
    if kind in ("besov", "besov_lp"):
        return NormSpec("besov_lp", s=float(parts[1]), p=float(parts[2]), q=float(parts[3]))
    if kind == "besov_modulus":
        return NormSpec(
            "besov_modulus", s=float(parts[1]), p=float(parts[2]), q=float(parts[3])
        )
    if kind == "classical_besov":
        return NormSpec(
            "classical_besov", s=float(parts[1]), p=float(parts[2]), q=float(parts[3])
        )
    if kind in ("sobolev", "nikolskii", "slobodetskii"):
        return NormSpec(kind, s=float(parts[1]), p=float(parts[2]))
    raise ValueError(f"unknown norm spec {text!r}")


@dataclass
class ExperimentConfig:
    kind: str = "converge_function"
    dimension: int = 1
    points_per_axis: int = 64
    period: float = 2.0 * math.pi
    symbol: str = "abs:2"
    mean: str = "gaussian"
    space: str = "liouville:0.5:2"
    t0: float = 1e-1
    ratio: float = 0.3
    steps: int = 6
    signal: str = "bump"
    window_radius: Optional[float] = None
    theorem: str = "T1"
    alpha: float = 0.5
    beta: float = 1.5
    p: float = 2.0
    p0: float = 2.0
    q: float = 2.0
    alpha0: Optional[float] = None
    l: int = 1
    tau: float = 1.0
    seed: int = 0
    corpus_size: int = 20
    band: float = 8.0
    atoms: list = field(default_factory=list)
    density_signal: Optional[str] = None
    out: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if not (0 < self.ratio < 1) or self.t0 <= 0 or self.steps < 1:
            raise ValueError("t schedule must be strictly decreasing and positive")
        if self.window_radius is not None:
            limit = self.period / 2.0 - self.period / 8.0
            if not (0 < self.window_radius < limit):
                raise ValueError(
                    f"window radius must lie in (0, {limit:g}) for this period"
                )

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.dimension, self.points_per_axis, self.period)

    def t_schedule(self) -> list:
        return [self.t0 * self.ratio**k for k in range(self.steps)]

    def theorem_parameters(self) -> TheoremParameters:
        sigma = parse_symbol(self.symbol)
        return TheoremParameters(
            N=self.dimension,
            m=sigma.degree,
            p=self.p,
            p0=self.p0,
            alpha=self.alpha,
            beta=self.beta,
            l=self.l,
            alpha0=self.alpha0,
            q=self.q,
            tau=self.tau,
        )

    def window(self) -> Optional[GridFunction]:
        if self.window_radius is None:
            return None
        return smooth_window(self.grid, self.window_radius)

    def distribution(self) -> CompactDistribution:
        atoms = tuple(
            PointAtom(
                tuple(float(v) for v in np.atleast_1d(a.get("x", [0.0]))),
                tuple(int(v) for v in a.get("alpha", [0] * self.dimension)),
                complex(a.get("c", [1.0, 0.0])[0], a.get("c", [1.0, 0.0])[1]),
            )
            for a in self.atoms
        )
        density = (
            make_signal(self.density_signal, self.grid)
            if self.density_signal
            else None
        )
        return CompactDistribution(atoms, density)

    @staticmethod
    def from_json(path) -> "ExperimentConfig":
        data = json.loads(Path(path).read_text())
        return ExperimentConfig(**data)


@dataclass
class ConvergenceReport:
    records: list  # dicts with t, error, space
    slope: float
    floor: float
    floor_validated: bool
    monotone: bool
    space: str
    norm_route: str
    hypothesis_json: Optional[str] = None
    hypothesis_passed: Optional[bool] = None
    boundedness_ratio: Optional[float] = None
    extra: dict = field(default_factory=dict)


def _fit_slope(ts: np.ndarray, errs: np.ndarray, floor: float) -> float:
    """Log-log slope on the pre-floor asymptotic tail (smallest t with
    error comfortably above the floor)."""
    mask = errs > 10.0 * floor
    ts, errs = ts[mask], errs[mask]
    if ts.size < 2:
        return float("nan")
    take = min(4, ts.size)
    ts, errs = ts[-take:], errs[-take:]
    return float(np.polyfit(np.log(ts), np.log(errs), 1)[0])


def _band_truncation_error(
    u: GridFunction, norm_spec: NormSpec, window
) -> float:
    """Norm of the outermost-octave part of u: proxy for what the finite
    band cannot represent."""
    spec = u.spec
    xi = spec.frequency_magnitude()
    cut = float(np.max(xi)) / 2.0
    F = forward_transform(u)
    hi = inverse_transform(SpectrumFunction(spec, F.coefficients * (xi > cut)))
    return localized_norm(hi, window, norm_spec)


def run_convergence_function(config: ExperimentConfig) -> ConvergenceReport:
    spec = config.grid
    sigma = parse_symbol(config.symbol)
    mean = parse_mean(config.mean)
    u = make_signal(config.signal, spec)
    window = config.window()
    norm_spec = parse_norm_spec(config.space)
    report = assemble_hypothesis_report(
        config.theorem, config.theorem_parameters(), mean
    )

    ts = config.t_schedule()
    errs = [
        converge_error(mean, t, sigma, u, norm_spec, window) for t in ts
    ]
    u_norm = localized_norm(u, window, norm_spec)
    bound_ratio = max(
        localized_norm(spectral_mean(mean, t, sigma, u), window, norm_spec) / u_norm
        for t in ts
    )
    band_err = _band_truncation_error(u, norm_spec, window)
    floor_candidate = errs[-1]
    floor_validated = floor_candidate <= 2.0 * max(band_err, 1e-14 * (errs[0] or 1.0))
    floor = floor_candidate if floor_validated else max(band_err, 1e-14 * (errs[0] or 1.0))
    slope = _fit_slope(np.array(ts), np.array(errs), floor)
    monotone = all(b < a for a, b in zip(errs, errs[1:]))
    records = [
        {"t": t, "error": e, "space": norm_spec.label()} for t, e in zip(ts, errs)
    ]
    return ConvergenceReport(
        records=records,
        slope=slope,
        floor=floor,
        floor_validated=floor_validated,
        monotone=monotone,
        space=norm_spec.label(),
        norm_route=norm_spec.kind,
        hypothesis_json=report.to_json(),
        hypothesis_passed=report.passed,
        boundedness_ratio=bound_ratio,
    )


def run_convergence_distribution(config: ExperimentConfig) -> ConvergenceReport:
    spec = config.grid
    sigma = parse_symbol(config.symbol)
    mean = parse_mean(config.mean)
    f = config.distribution()
    window = config.window()
    probe = make_signal("bump", spec)
    ts = config.t_schedule()
    records = distribution_convergence(
        mean, ts, sigma, f, config.alpha, config.p, spec, window, probe
    )
    errs = [r["error"] for r in records]
    label = f"liouville:{-config.alpha:g}:{config.p:g}"
    for r in records:
        r["space"] = label
    floor_candidate = errs[-1]
    roundoff = 1e-14 * (errs[0] or 1.0)
    floor_validated = floor_candidate <= 2.0 * roundoff
    floor = floor_candidate if floor_validated else roundoff
    slope = _fit_slope(np.array(ts), np.array(errs), floor)
    monotone = all(b < a for a, b in zip(errs, errs[1:]))
    report = assemble_hypothesis_report(
        config.theorem, config.theorem_parameters(), mean
    )
    return ConvergenceReport(
        records=records,
        slope=slope,
        floor=floor,
        floor_validated=floor_validated,
        monotone=monotone,
        space=label,
        norm_route="negative_liouville",
        hypothesis_json=report.to_json(),
        hypothesis_passed=report.passed,
        extra={"pairing_errors": [r.get("pairing_error") for r in records]},
    )


def trig_corpus(spec: GridSpec, size: int, band: int, seed: int) -> list:
    """Real trigonometric polynomials reproducible across grid
    refinements (coefficients depend only on the seed, not on n)."""
    rng = np.random.default_rng(seed)
    x = spec.meshgrid()
    out = []
    for _ in range(size):
        vals = np.zeros(spec.shape)
        for k in range(1, band + 1):
            for d in range(spec.dimension):
                a, b = rng.normal(size=2)
                w = 2.0 * np.pi * k / spec.period
                vals = vals + a * np.cos(w * x[d]) + b * np.sin(w * x[d])
        out.append(GridFunction(spec, vals))
    return out


def run_equivalence(config: ExperimentConfig) -> dict:
    """Norm-equivalence study on a reproducible corpus.

    Reports the LP-vs-modulus Besov ratio bracket (with its grid-doubling
    stability factor), classical/Nikolskii/Slobodetskii ratio brackets,
    and the Liouville-vs-Sobolev quadratic identity at p = 2, s = 1.
    """
    if config.corpus_size < 20:
        raise ValueError("corpus size must be >= 20")
    spec = config.grid
    s, pp, qq = 0.7, 2.0, 2.0
    norm_spec = parse_norm_spec(config.space)
    if norm_spec.kind in ("besov_lp", "besov_modulus"):
        s, pp, qq = norm_spec.s, norm_spec.p, norm_spec.q

    def brackets(gspec: GridSpec) -> dict:
        corpus = trig_corpus(gspec, config.corpus_size, int(config.band), config.seed)
        partition = build_partition(gspec)
        params = BesovParams(s, pp, qq)
        ratios = {"modulus_vs_lp": [], "classical_vs_lp": [], "nikolskii_vs_lp": []}
        if gspec.dimension == 1:
            ratios["slobodetskii_vs_classical"] = []
        for f in corpus:
            blp = besov_norm_lp(f, params, partition)
            bmod = besov_norm_modulus(f, params, m=2, n1=0)
            bcl = classical_besov_norm(f, BesovParams(s, pp, pp))
            nik = nikolskii_norm(f, s, pp)
            ratios["modulus_vs_lp"].append(bmod / blp)
            ratios["classical_vs_lp"].append(bcl / blp)
            ratios["nikolskii_vs_lp"].append(nik / blp)
            if gspec.dimension == 1:
                slo = slobodetskii_norm(f, s, pp)
                ratios["slobodetskii_vs_classical"].append(slo / bcl)
        return {
            key: {"min": float(np.min(v)), "max": float(np.max(v))}
            for key, v in ratios.items()
        }

    coarse = brackets(spec)
    fine = brackets(GridSpec(spec.dimension, 2 * spec.points_per_axis, spec.period))

    # Liouville vs Sobolev quadratic identity at p = 2, s = 1
    corpus = trig_corpus(spec, config.corpus_size, int(config.band), config.seed)
    lio_ratios = []
    for f in corpus:
        lio = liouville_norm(f, 1.0, 2.0)
        quad = math.sqrt(
            lp_norm(f, 2.0) ** 2
            + sum(
                lp_norm(
                    spectral_mean_derivative(f, d), 2.0
                ) ** 2
                for d in range(spec.dimension)
            )
        )
        lio_ratios.append(lio / quad)
    return {
        "bracket": coarse,
        "bracket_refined": fine,
        "liouville_vs_sobolev_ratio": {
            "min": float(np.min(lio_ratios)),
            "max": float(np.max(lio_ratios)),
        },
        "parameters": {"s": s, "p": pp, "q": qq, "corpus_size": config.corpus_size},
    }


def spectral_mean_derivative(f: GridFunction, axis: int) -> GridFunction:
    from .multipliers import spectral_derivative

    alpha = [0] * f.spec.dimension
    alpha[axis] = 1
    return spectral_derivative(f, alpha)


def run_conditions(config: ExperimentConfig) -> str:
    mean = parse_mean(config.mean)
    report = assemble_hypothesis_report(
        config.theorem, config.theorem_parameters(), mean
    )
    return report.to_json()


CSV_HEADER = "t,error,space,norm_route,monotone,slope,floor"


def report_to_csv(report: ConvergenceReport) -> str:
    lines = [CSV_HEADER]
    for rec in report.records:
        lines.append(
            "{t:.17g},{error:.17g},{space},{route},{mono},{slope:.17g},{floor:.17g}".format(
                t=rec["t"],
                error=rec["error"],
                space=rec["space"],
                route=report.norm_route,
                mono=int(report.monotone),
                slope=report.slope,
                floor=report.floor,
            )
        )
    return "\n".join(lines) + "\n"


def report_to_json(report: ConvergenceReport) -> str:
    payload = {
        "records": report.records,
        "slope": report.slope,
        "floor": report.floor,
        "floor_validated": report.floor_validated,
        "monotone": report.monotone,
        "space": report.space,
        "norm_route": report.norm_route,
        "hypothesis_passed": report.hypothesis_passed,
        "boundedness_ratio": report.boundedness_ratio,
    }
    if report.hypothesis_json is not None:
        payload["hypothesis"] = json.loads(report.hypothesis_json)
    payload.update(report.extra)
    return json.dumps(payload, indent=2)
