"""Generalization-error bounds built from CGF envelopes.

A CGF envelope psi upper-bounds the centered cumulant generating function of
the loss under an auxiliary joint law on (hypothesis, sample). Every bound in
this module is an average over training indices of the generalized inverse

    psi_star_inverse(x) = inf_{0 < lam < b} (x + psi(lam)) / lam

evaluated at KL terms between the true and auxiliary laws. Choosing the
auxiliary law as the product of marginals, the joint itself, or their equal
mixture gives the mutual-information, lautum and Jensen-Shannon bounds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .info_measures import LOG2

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
LAMBDA_MIN = 1e-8
LAMBDA_MAX = 1e8
SEARCH_RTOL = 1e-10
MAX_ITER = 200
GRID_POINTS = 64
JS_TERM_SLACK = 1e-9

BOUND_NAMES = (
    "theorem1_upper",
    "theorem1_lower",
    "theorem2",
    "mi_example1",
    "lautum_example2",
    "js_corollary1",
    "prop1_cap",
)


class EnvelopeError(ValueError):
    """The envelope failed a spot check of psi(0)=0, monotonicity or convexity."""


class CgfEnvelope:
    """Convex envelope ``psi`` of a CGF on ``[0, domain_bound)``."""

    def __init__(self, psi: Callable[[float], float], domain_bound: float = math.inf):
        if not domain_bound > 0:
            raise ValueError("domain_bound must be positive")
        self.psi = psi
        self.domain_bound = float(domain_bound)

    def __call__(self, lam: float) -> float:
        try:
            return float(self.psi(lam))
        except OverflowError:
            return math.inf

    def search_interval(self) -> tuple[float, float]:
        hi = min(self.domain_bound * (1.0 - 1e-9), LAMBDA_MAX)
        if hi <= LAMBDA_MIN:
            raise EnvelopeError(f"domain bound {self.domain_bound} below search floor")
        return LAMBDA_MIN, hi

    def validate(self) -> None:
        """Spot-check the envelope hypotheses on a 64-point grid.

        Raises :class:`EnvelopeError` on the first violation found.
        """
        lo, hi = self.search_interval()
        lam = np.concatenate(([0.0], np.geomspace(lo, hi, GRID_POINTS - 1)))
        vals = np.array([self(float(x)) for x in lam])
        if np.any(np.isnan(vals)) or np.any(vals == -math.inf):
            raise EnvelopeError("psi is undefined on the search grid")
        # overflow to +inf is allowed, but only as a tail
        finite = np.isfinite(vals)
        if not finite[0] or np.any(finite[1:] & ~finite[:-1]):
            raise EnvelopeError("psi is infinite before a finite value")
        lam, vals = lam[finite], vals[finite]
        scale = np.abs(vals) + 1e-300
        if abs(vals[0]) > 1e-12:
            raise EnvelopeError(f"psi(0) = {vals[0]!r}, expected 0")
        if np.any(vals < -1e-12):
            raise EnvelopeError("psi takes negative values")
        if np.any(np.diff(vals) < -1e-9 * scale[1:] - 1e-15):
            raise EnvelopeError("psi is decreasing somewhere on the grid")
        mids = 0.5 * (lam[:-1] + lam[1:])
        mid_vals = np.array([self(float(x)) for x in mids])
        chord = 0.5 * (vals[:-1] + vals[1:])
        if np.any(mid_vals > chord + 1e-9 * np.abs(chord) + 1e-15):
            raise EnvelopeError("psi fails the midpoint convexity check")


class SubgaussianEnvelope(CgfEnvelope):
    """psi(lam) = lam^2 sigma^2 / 2 on the whole half-line."""

    def __init__(self, sigma: float):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)
        s2 = self.sigma**2
        super().__init__(lambda lam: 0.5 * lam * lam * s2, math.inf)

    @classmethod
    def from_loss_range(cls, low: float, high: float) -> SubgaussianEnvelope:
        """A loss bounded in [low, high] is (high - low)/2-subgaussian under any law."""
        if not high > low:
            raise ValueError("need high > low")
        return cls(0.5 * (high - low))

    def __repr__(self):
        return f"SubgaussianEnvelope(sigma={self.sigma!r})"


class TabulatedEnvelope(CgfEnvelope):
    """Envelope given by samples (lam_k, psi_k), linearly interpolated.

    The table must start at lam = 0; its last abscissa is the domain bound.
    """

    def __init__(self, lambdas: Sequence[float], values: Sequence[float]):
        lam = np.asarray(lambdas, dtype=float)
        val = np.asarray(values, dtype=float)
        if lam.ndim != 1 or lam.shape != val.shape or lam.size < 3:
            raise ValueError("need at least three (lambda, psi) rows")
        if lam[0] != 0.0 or np.any(np.diff(lam) <= 0):
            raise ValueError("lambdas must start at 0 and increase strictly")
        self.lambdas, self.values = lam, val
        super().__init__(lambda x: float(np.interp(x, lam, val)), lam[-1])

    @classmethod
    def from_csv(cls, path) -> TabulatedEnvelope:
        """Read ``lambda,psi`` rows; a non-numeric header line is skipped."""
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                if not rec or not "".join(rec).strip():
                    continue
                try:
                    rows.append((float(rec[0]), float(rec[1])))
                except ValueError:
                    if rows:
                        raise
        if not rows:
            raise ValueError(f"no rows in {path}")
        lam, val = zip(*rows)
        return cls(lam, val)

    def validate(self) -> None:
        slopes = np.diff(self.values) / np.diff(self.lambdas)
        if np.any(np.diff(slopes) < -1e-9 * (np.abs(slopes[1:]) + 1.0)):
            raise EnvelopeError("tabulated psi is not convex")
        super().validate()


@dataclass
class BoundInputs:
    """Per-index KL terms A_i (product vs auxiliary) and B_i (joint vs auxiliary)."""

    a_terms: np.ndarray
    b_terms: np.ndarray

    def __post_init__(self):
        self.a_terms = np.atleast_1d(np.asarray(self.a_terms, dtype=float))
        self.b_terms = np.atleast_1d(np.asarray(self.b_terms, dtype=float))
        if self.a_terms.ndim != 1 or self.a_terms.shape != self.b_terms.shape:
            raise ValueError("a_terms and b_terms must be vectors of equal length")
        if self.a_terms.size == 0:
            raise ValueError("need at least one training index")
        for t in (self.a_terms, self.b_terms):
            if np.any(np.isnan(t)) or np.any(t < 0):
                raise ValueError("KL terms must be >= 0 or +inf")

    @property
    def n(self) -> int:
        return self.a_terms.size


@dataclass
class BoundReport:
    bound_name: str
    value: float
    per_sample_terms: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if self.bound_name not in BOUND_NAMES:
            raise ValueError(f"unknown bound {self.bound_name!r}")

    @property
    def finite(self) -> bool:
        return bool(math.isfinite(self.value))

    def as_dict(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "value": self.value,
            "per_sample_terms": [float(x) for x in self.per_sample_terms],
            "finite": self.finite,
        }


def _report(name: str, terms) -> BoundReport:
    terms = np.asarray(terms, dtype=float)
    value = math.inf if np.any(np.isinf(terms)) else float(terms.mean())
    return BoundReport(name, value, terms)


def golden_section_min(f: Callable[[float], float], lo: float, hi: float, rtol: float = SEARCH_RTOL,
                       max_iter: int = MAX_ITER) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on [lo, hi]; returns (argmin, min).

    Stops when the bracket is narrower than ``rtol * (1 + |x|)``. The bracket
    endpoints are also compared so a boundary minimum is not lost.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= rtol * (1.0 + abs(0.5 * (a + b))):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    best = min((f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi))
    return best[1], best[0]


def psi_star_inverse(env: CgfEnvelope, x: float, validate: bool = True) -> float:
    """inf over 0 < lam < b of (x + psi(lam)) / lam.

    The objective is quasi-convex in lam for a convex psi with psi(0)=0, so a
    golden-section search over log(lam) finds the infimum. ``x = 0`` returns 0
    and ``x = inf`` returns inf without searching.
    """
    x = float(x)
    if math.isnan(x) or x < 0:
        raise ValueError("x must be non-negative")
    if validate:
        env.validate()
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    lo, hi = env.search_interval()

    def objective(u: float) -> float:
        lam = math.exp(u)
        return (x + env(lam)) / lam

    _, value = golden_section_min(objective, math.log(lo), math.log(hi))
    return value


def theorem1_upper(inputs: BoundInputs, env_plus: CgfEnvelope, env_minus: CgfEnvelope) -> BoundReport:
    """Upper bound on gen: mean of psi_plus*^-1(A_i) + psi_minus*^-1(B_i)."""
    env_plus.validate()
    env_minus.validate()
    terms = [
        psi_star_inverse(env_plus, a, validate=False) + psi_star_inverse(env_minus, b, validate=False)
        for a, b in zip(inputs.a_terms, inputs.b_terms)
    ]
    return _report("theorem1_upper", terms)


def theorem1_lower(inputs: BoundInputs, env_plus: CgfEnvelope, env_minus: CgfEnvelope) -> BoundReport:
    """Upper bound on -gen: the envelope roles are swapped relative to the upper bound."""
    env_plus.validate()
    env_minus.validate()
    terms = [
        psi_star_inverse(env_minus, a, validate=False) + psi_star_inverse(env_plus, b, validate=False)
        for a, b in zip(inputs.a_terms, inputs.b_terms)
    ]
    return _report("theorem1_lower", terms)


def _check_sigma(sigma: float) -> float:
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return float(sigma)


def _check_terms(terms) -> np.ndarray:
    t = np.atleast_1d(np.asarray(terms, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise ValueError("need a non-empty vector of terms")
    if np.any(np.isnan(t)) or np.any(t < 0):
        raise ValueError("information terms must be >= 0")
    return t


def theorem2_bound(sigma: float, inputs: BoundInputs) -> BoundReport:
    """|gen| <= (2/n) sum sqrt(sigma^2 (A_i + B_i)) for a sigma-subgaussian loss."""
    s2 = _check_sigma(sigma) ** 2
    return _report("theorem2", 2.0 * np.sqrt(s2 * (inputs.a_terms + inputs.b_terms)))


def mi_bound(sigma: float, mi_terms) -> BoundReport:
    s2 = _check_sigma(sigma) ** 2
    return _report("mi_example1", np.sqrt(2.0 * s2 * _check_terms(mi_terms)))


def lautum_bound(sigma: float, lautum_terms) -> BoundReport:
    s2 = _check_sigma(sigma) ** 2
    return _report("lautum_example2", np.sqrt(2.0 * s2 * _check_terms(lautum_terms)))


def js_bound(sigma: float, js_terms) -> BoundReport:
    """(2/n) sum sqrt(2 sigma^2 I_JS,i); finite because every term is at most log 2."""
    s2 = _check_sigma(sigma) ** 2
    t = _check_terms(js_terms)
    if np.any(t > LOG2 + JS_TERM_SLACK):
        raise ValueError("Jensen-Shannon terms must lie in [0, log 2]")
    return _report("js_corollary1", 2.0 * np.sqrt(2.0 * s2 * t))


def prop1_cap(sigma: float) -> float:
    """Uniform ceiling 2 sigma sqrt(2 log 2) on the Jensen-Shannon bound."""
    return 2.0 * _check_sigma(sigma) * math.sqrt(2.0 * LOG2)


JS_DOMINANCE_THRESHOLD = 8.0 * LOG2**2


def js_dominance_condition(mi: float) -> bool:
    """True when this mutual information is large enough that the JS term beats the MI term."""
    if mi < 0:
        raise ValueError("mutual information must be non-negative")
    return mi >= JS_DOMINANCE_THRESHOLD
