"""Gaussian mean estimation with a truncated squared loss.

Two i.i.d. samples Z1, Z2 ~ N(mean, sigma2) are combined into the estimate
W = t Z1 + (1 - t) Z2. The loss min((w - z)^2, c^2) lies in [0, c^2], so it is
c^2/2-subgaussian under every law and both the mutual-information bound and the
Jensen-Shannon bound apply. This module computes both bound curves over t and
a Monte Carlo estimate of the true expected generalization error.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from . import cgf_bounds as cb
from .info_measures import (
    LOG2,
    GaussianPair,
    QuadratureConvergenceError,
    QuadratureSpec,
    gaussian_js_information,
)
from .seeding import sub_seed

CSV_FIELDS = ("t", "true_gen", "stderr", "mi_bound", "js_bound",
              "i_mi_1", "i_mi_2", "i_js_1", "i_js_2", "converged")
MIN_MC_SAMPLES = 10**4


@dataclass(frozen=True)
class ExampleConfig:
    t: float = 0.5
    sigma2: float = 1.0
    mean: float = 1.0
    c: float = 0.25

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise ValueError("t must lie in (0, 1)")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")

    @classmethod
    def figure1(cls, sigma2: float = 1.0, t: float = 0.5) -> ExampleConfig:
        """Mean 1 and truncation c = sigma / 4."""
        return cls(t=t, sigma2=sigma2, mean=1.0, c=math.sqrt(sigma2) / 4.0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def subgaussian_sigma(self) -> float:
        return 0.5 * self.c**2

    def with_t(self, t: float) -> ExampleConfig:
        return ExampleConfig(t=t, sigma2=self.sigma2, mean=self.mean, c=self.c)


@dataclass(frozen=True)
class SweepSpec:
    t_values: tuple = tuple(np.linspace(0.01, 0.5, 50).tolist())
    mc_samples: int = 10**6
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: int = 42

    def __post_init__(self):
        t = np.asarray(self.t_values, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("t_values must be a non-empty vector")
        if np.any(t <= 0) or np.any(t > 0.5) or np.any(np.diff(t) <= 0):
            raise ValueError("t_values must be strictly increasing within (0, 0.5]")
        if self.mc_samples < MIN_MC_SAMPLES:
            raise ValueError(f"mc_samples must be at least {MIN_MC_SAMPLES}")
        object.__setattr__(self, "t_values", tuple(float(x) for x in t))


@dataclass
class CurvePoint:
    t: float
    true_gen: float
    true_gen_stderr: float
    mi_bound: float
    js_bound: float
    i_mi: tuple[float, float]
    i_js: tuple[float, float]
    converged: bool = True

    def row(self, bits: bool = False) -> dict:
        scale = 1.0 / LOG2 if bits else 1.0
        return {
            "t": self.t,
            "true_gen": self.true_gen,
            "stderr": self.true_gen_stderr,
            "mi_bound": self.mi_bound,
            "js_bound": self.js_bound,
            "i_mi_1": self.i_mi[0] * scale,
            "i_mi_2": self.i_mi[1] * scale,
            "i_js_1": self.i_js[0] * scale,
            "i_js_2": self.i_js[1] * scale,
            "converged": self.converged,
        }


def rho_coefficients(t: float) -> tuple[float, float]:
    """Correlations of W with Z1 and with Z2."""
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    norm = math.hypot(t, 1.0 - t)
    return t / norm, (1.0 - t) / norm


def example_mutual_informations(t: float) -> tuple[float, float]:
    """I(W; Z1) and I(W; Z2) in nats.

    Since rho1^2 + rho2^2 = 1, -0.5 log(1 - rho1^2) equals -log(rho2). That form
    keeps full precision when t is so small that rho2 rounds to 1.
    """
    r1, r2 = rho_coefficients(t)
    return -math.log(r2), -math.log(r1)


def _pairs(t: float, sigma2: float, mean: float = 0.0):
    var_w = sigma2 * (t * t + (1.0 - t) ** 2)
    return [GaussianPair(mean, mean, var_w, sigma2, r) for r in rho_coefficients(t)]


def example_js_informations(t: float, sigma2: float = 1.0, q: QuadratureSpec | None = None,
                            mean: float = 0.0, check: bool = True) -> tuple[float, float]:
    """I_JS(W; Z1) and I_JS(W; Z2) by quadrature of the mixture entropy.

    Raises :class:`QuadratureConvergenceError` when ``check`` is set and grid
    refinement moves either value by more than 1e-4 nats.
    """
    j1, j2 = (gaussian_js_information(g, q, check=check) for g in _pairs(t, sigma2, mean))
    return j1, j2


def truncated_loss(w, z, c: float):
    """(w - z)^2 when |w - z| <= c, else c^2."""
    d = np.asarray(w, dtype=float) - np.asarray(z, dtype=float)
    out = np.where(np.abs(d) <= c, d * d, c * c)
    return float(out) if out.ndim == 0 else out


def _truncated_moment(offset, scale: float, c: float):
    """E[min(U^2, c^2)] for U ~ N(offset, scale^2), elementwise in ``offset``."""
    m = np.asarray(offset, dtype=float)
    lo = (-c - m) / scale
    hi = (c - m) / scale
    inside = ndtr(hi) - ndtr(lo)
    phi_lo = np.exp(-0.5 * lo * lo) / math.sqrt(2.0 * math.pi)
    phi_hi = np.exp(-0.5 * hi * hi) / math.sqrt(2.0 * math.pi)
    # int_lo^hi (m + s x)^2 phi(x) dx via partial moments of the standard normal
    second = (
        m * m * inside
        + 2.0 * m * scale * (phi_lo - phi_hi)
        + scale * scale * (inside + lo * phi_lo - hi * phi_hi)
    )
    # tail mass: ndtr(lo) + ndtr(-hi) avoids cancellation in 1 - inside
    return second + c * c * (ndtr(lo) + ndtr(-hi))


def population_risk(w, cfg: ExampleConfig):
    """Expected truncated loss of hypothesis ``w`` under N(mean, sigma2), in closed form."""
    out = _truncated_moment(cfg.mean - np.asarray(w, dtype=float), cfg.sigma, cfg.c)
    return float(out) if np.ndim(out) == 0 else out


def true_gen_error_mc(cfg: ExampleConfig, samples: int = 10**6, seed: int = 42,
                      chunk: int = 250_000) -> tuple[float, float]:
    """Monte Carlo estimate of E[L_P(W) - L_E(W, S)] and its standard error."""
    if samples < MIN_MC_SAMPLES:
        raise ValueError(f"samples must be at least {MIN_MC_SAMPLES}")
    rng = np.random.default_rng(seed)
    total = total_sq = 0.0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        z = rng.normal(cfg.mean, cfg.sigma, size=(2, k))
        w = cfg.t * z[0] + (1.0 - cfg.t) * z[1]
        emp = 0.5 * (truncated_loss(w, z[0], cfg.c) + truncated_loss(w, z[1], cfg.c))
        diff = population_risk(w, cfg) - emp
        total += diff.sum()
        total_sq += np.dot(diff, diff)
        done += k
    mean = total / samples
    var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    return float(mean), math.sqrt(var / samples)


def bound_point(cfg: ExampleConfig, q: QuadratureSpec | None = None):
    """MI and JS bounds at ``cfg.t`` without the Monte Carlo part.

    Returns (mi_bound, js_bound, (I1, I2), (J1, J2), converged).
    """
    i_mi = example_mutual_informations(cfg.t)
    converged = True
    try:
        i_js = example_js_informations(cfg.t, cfg.sigma2, q, cfg.mean)
    except QuadratureConvergenceError:
        converged = False
        i_js = example_js_informations(cfg.t, cfg.sigma2, q, cfg.mean, check=False)
    s = cfg.subgaussian_sigma
    mi = cb.mi_bound(s, i_mi).value
    js = cb.js_bound(s, i_js).value
    return mi, js, i_mi, i_js, converged


def _sweep_point(args) -> CurvePoint:
    index, t, spec, cfg_base = args
    cfg = cfg_base.with_t(t)
    mi, js, i_mi, i_js, converged = bound_point(cfg, spec.quadrature)
    gen, se = true_gen_error_mc(cfg, spec.mc_samples, sub_seed(spec.seed, "sweep", index))
    return CurvePoint(t, gen, se, mi, js, i_mi, i_js, converged)


def sweep(spec: SweepSpec, cfg_base: ExampleConfig, max_workers: int = 1) -> list[CurvePoint]:
    """True generalization error and both bounds for every t in ``spec``.

    Points that fail the quadrature refinement check are still computed and
    carry ``converged=False``. Output order follows ``spec.t_values``.
    """
    jobs = [(i, t, spec, cfg_base) for i, t in enumerate(spec.t_values)]
    if max_workers <= 1:
        return [_sweep_point(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_sweep_point, jobs))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return f"{x:.9g}"


def to_csv(points: list[CurvePoint], bits: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for p in points:
        row = p.row(bits)
        writer.writerow([_fmt(row[k]) for k in CSV_FIELDS])
    return buf.getvalue()


def to_json(points: list[CurvePoint], bits: bool = False) -> str:
    rows = []
    for p in points:
        row = p.row(bits)
        rows.append({k: (row[k] if k == "converged" else float(_fmt(row[k]))) for k in CSV_FIELDS})
    return json.dumps(rows, indent=1) + "\n"


def read_csv(text: str) -> list[dict]:
    """Parse sweep CSV back into dicts of floats (``converged`` as bool)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {k: float(v) for k, v in rec.items() if k != "converged"}
        row["converged"] = rec["converged"] == "true"
        out.append(row)
    return out
