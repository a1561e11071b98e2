"""Information measures on finite distributions and bivariate Gaussians.

All quantities are in nats. Discrete measures are exact; the Gaussian
Jensen-Shannon information needs the differential entropy of a two-component
mixture, which is evaluated by trapezoid quadrature on a tensor grid laid out
along the principal axes of the standardized pair.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import rel_entr

LOG2 = math.log(2.0)
PMF_ATOL = 1e-12
CONVERGENCE_TOL = 1e-4


class QuadratureConvergenceError(RuntimeError):
    """Raised when halving the grid spacing moves a quadrature result too much."""

    def __init__(self, value: float, change: float):
        super().__init__(
            f"quadrature not converged: refinement changed result by {change:.3e} nats"
        )
        self.value = value
        self.change = change


@dataclass(frozen=True)
class DiscretePmf:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if p.size < 1:
            raise ValueError("pmf needs at least one atom")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("pmf entries must be finite and non-negative")
        if abs(p.sum() - 1.0) > PMF_ATOL:
            raise ValueError(f"pmf sums to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size


@dataclass(frozen=True)
class DiscreteJoint:
    """Joint pmf over (hypothesis w, sample z); rows index w, columns index z."""

    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=float)
        if t.ndim != 2 or t.size == 0:
            raise ValueError("joint table must be a non-empty matrix")
        if not np.all(np.isfinite(t)) or np.any(t < 0):
            raise ValueError("joint entries must be finite and non-negative")
        if abs(t.sum() - 1.0) > PMF_ATOL:
            raise ValueError(f"joint sums to {t.sum()!r}, not 1")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def shape(self):
        return self.table.shape

    @property
    def w_marginal(self) -> DiscretePmf:
        return DiscretePmf(self.table.sum(axis=1))

    @property
    def z_marginal(self) -> DiscretePmf:
        return DiscretePmf(self.table.sum(axis=0))

    def product(self) -> DiscreteJoint:
        """Product of the marginals, P_W (x) P_Z."""
        return DiscreteJoint(np.outer(self.table.sum(axis=1), self.table.sum(axis=0)))

    def mixture(self) -> DiscreteJoint:
        """Equal mixture of the joint and the product of its marginals."""
        return DiscreteJoint(0.5 * (self.table + self.product().table))

    @classmethod
    def from_marginals(cls, pw, pz) -> DiscreteJoint:
        return cls(np.outer(_probs(pw), _probs(pz)))


@dataclass(frozen=True)
class GaussianPair:
    mean_w: float = 0.0
    mean_z: float = 0.0
    var_w: float = 1.0
    var_z: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if not (self.var_w > 0 and self.var_z > 0):
            raise ValueError("variances must be positive")
        if not -1.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (-1, 1)")

    @property
    def cov(self) -> np.ndarray:
        c = self.rho * math.sqrt(self.var_w * self.var_z)
        return np.array([[self.var_w, c], [c, self.var_z]])


@dataclass(frozen=True)
class QuadratureSpec:
    half_width_sigmas: float = 10.0
    points_per_axis: int = 401

    def __post_init__(self):
        if self.points_per_axis < 3 or self.points_per_axis % 2 == 0:
            raise ValueError("points_per_axis must be odd and >= 3")
        if not self.half_width_sigmas > 0:
            raise ValueError("half_width_sigmas must be positive")

    def refined(self) -> QuadratureSpec:
        """Same extent with the grid spacing halved."""
        return QuadratureSpec(self.half_width_sigmas, 2 * self.points_per_axis - 1)


def _probs(p) -> np.ndarray:
    if isinstance(p, DiscretePmf):
        return p.probs
    if isinstance(p, DiscreteJoint):
        return p.table.reshape(-1)
    return DiscretePmf(p).probs


def _pair(p, q):
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        raise ValueError(f"atom count mismatch: {p.size} vs {q.size}")
    return p, q


def _joint(j) -> DiscreteJoint:
    return j if isinstance(j, DiscreteJoint) else DiscreteJoint(j)


# --- discrete measures -------------------------------------------------------

def kl_discrete(p, q) -> float:
    """KL(p || q) in nats; ``math.inf`` when p puts mass where q has none."""
    p, q = _pair(p, q)
    # rel_entr gives 0 for p == 0 and inf for p > 0, q == 0; the clamp
    # removes negative rounding residue when p and q nearly coincide
    return max(float(np.sum(rel_entr(p, q))), 0.0)


def tv_discrete(p, q) -> float:
    """Sum of absolute differences (no 1/2 factor, so the range is [0, 2])."""
    p, q = _pair(p, q)
    return float(np.abs(p - q).sum())


def js_divergence(p, q) -> float:
    p, q = _pair(p, q)
    m = 0.5 * (p + q)
    js = 0.5 * np.sum(rel_entr(p, m)) + 0.5 * np.sum(rel_entr(q, m))
    return float(min(max(js, 0.0), LOG2))


def mutual_information(j) -> float:
    j = _joint(j)
    return kl_discrete(j, j.product())


def lautum_information(j) -> float:
    j = _joint(j)
    return kl_discrete(j.product(), j)


def js_information(j) -> float:
    j = _joint(j)
    return js_divergence(j, j.product())


# --- Gaussian measures -------------------------------------------------------

def gaussian_mutual_information(rho: float) -> float:
    if not -1.0 < rho < 1.0:
        raise ValueError("|rho| must be < 1")
    return -0.5 * math.log1p(-rho * rho)


def gaussian_entropies(g: GaussianPair) -> tuple[float, float, float]:
    """Differential entropies (h_w, h_z, h_joint) of a bivariate Gaussian."""
    two_pi_e = 2.0 * math.pi * math.e
    h_w = 0.5 * math.log(two_pi_e * g.var_w)
    h_z = 0.5 * math.log(two_pi_e * g.var_z)
    det = g.var_w * g.var_z * (1.0 - g.rho**2)
    h_joint = 0.5 * math.log(two_pi_e**2 * det)
    return h_w, h_z, h_joint


def _grid(g: GaussianPair, q: QuadratureSpec):
    half = q.half_width_sigmas * math.sqrt(max(g.var_w, g.var_z))
    w = np.linspace(g.mean_w - half, g.mean_w + half, q.points_per_axis)
    z = np.linspace(g.mean_z - half, g.mean_z + half, q.points_per_axis)
    return w, z


def _trapezoid_weights(x: np.ndarray) -> np.ndarray:
    w = np.empty_like(x)
    dx = np.diff(x)
    w[0], w[-1] = 0.5 * dx[0], 0.5 * dx[-1]
    w[1:-1] = 0.5 * (dx[:-1] + dx[1:])
    return w


def _principal_axis_rule(var: float, q: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for one principal axis of the standardized pair.

    Along this axis the correlated component has variance ``var`` and the
    independent one variance 1. A wide axis gets a uniform grid. A thin axis
    uses nodes c*sinh(s) with s uniform and c the thin standard deviation, so
    the trapezoid rule in s resolves both scales while staying smooth.
    """
    hw, n = q.half_width_sigmas, q.points_per_axis
    if var >= 1.0:
        half = hw * math.sqrt(var)
        x = np.linspace(-half, half, n)
        return x, _trapezoid_weights(x)
    c = math.sqrt(var)
    s_max = math.asinh(hw / c)
    s = np.linspace(-s_max, s_max, n)
    return c * np.sinh(s), _trapezoid_weights(s) * c * np.cosh(s)


def _trapezoid_entropy(g: GaussianPair, q: QuadratureSpec) -> float:
    # Standardize both coordinates and rotate by 45 degrees: the correlated
    # component becomes N(0, diag(1 + rho, 1 - rho)) and the independent one
    # stays N(0, I). Rotation has unit Jacobian; standardizing shifts h by
    # log(sd_w * sd_z).
    va, vb = 1.0 + g.rho, 1.0 - g.rho
    a, wa = _principal_axis_rule(va, q)
    b, wb = _principal_axis_rule(vb, q)
    a, b = a[:, None], b[None, :]
    log_corr = -math.log(2.0 * math.pi) - 0.5 * math.log(va * vb) - 0.5 * (a * a / va + b * b / vb)
    log_ind = -math.log(2.0 * math.pi) - 0.5 * (a * a + b * b)
    log_m = np.logaddexp(log_corr, log_ind) - LOG2
    # exp underflows to 0 far in the tails, where -m log m -> 0 as well
    integrand = -np.exp(log_m) * log_m
    h_std = float(wa @ integrand @ wb)
    return h_std + 0.5 * math.log(g.var_w * g.var_z)


def mixture_entropy_2d(g: GaussianPair, q: QuadratureSpec | None = None, check: bool = True) -> float:
    """Differential entropy of the half-half mixture of the correlated Gaussian
    ``g`` and the product of its marginals.

    With ``check`` the result is recomputed on a grid with half the spacing and
    :class:`QuadratureConvergenceError` is raised if the two differ by more than
    1e-4 nats. The coarser value is returned.
    """
    q = q or QuadratureSpec()
    value = _trapezoid_entropy(g, q)
    if check:
        change = abs(_trapezoid_entropy(g, q.refined()) - value)
        if change > CONVERGENCE_TOL:
            raise QuadratureConvergenceError(value, change)
    return value


def gaussian_js_information(g: GaussianPair, q: QuadratureSpec | None = None, check: bool = True) -> float:
    """I_JS between the two coordinates of ``g``.

    Uses h(mixture) - (h_w + h_z + h_joint) / 2 and clamps to [0, log 2].
    """
    h_w, h_z, h_joint = gaussian_entropies(g)
    raw = mixture_entropy_2d(g, q, check=check) - 0.5 * (h_w + h_z + h_joint)
    if raw < -1e-6 or raw > LOG2 + 1e-6:
        warnings.warn(f"JS information {raw!r} outside [0, log 2]; clamping", RuntimeWarning, stacklevel=2)
    return min(max(raw, 0.0), LOG2)


def discretize_gaussian_pair(g: GaussianPair, q: QuadratureSpec | None = None) -> DiscreteJoint:
    """Joint pmf proportional to the correlated density sampled on the quadrature grid."""
    q = q or QuadratureSpec()
    w, z = _grid(g, q)
    sw, sz = math.sqrt(g.var_w), math.sqrt(g.var_z)
    u = ((w - g.mean_w) / sw)[:, None]
    v = ((z - g.mean_z) / sz)[None, :]
    dens = np.exp(-(u * u - 2 * g.rho * u * v + v * v) / (2.0 * (1.0 - g.rho**2)))
    return DiscreteJoint(dens / dens.sum())
