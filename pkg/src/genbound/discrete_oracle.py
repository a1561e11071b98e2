"""Exact generalization error of enumerable toy learning problems.

A toy problem fixes a finite data distribution mu, a training-set size n, a
randomized algorithm given as one hypothesis pmf per training sequence, and a
bounded loss table. Everything is enumerated over the |Z|^n ordered training
sequences, which yields the exact expected generalization error and the exact
per-index joints P_{W,Z_i}. Those feed every information bound, so the bounds
can be certified against ground truth.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from . import cgf_bounds as cb
from .info_measures import (
    LOG2,
    PMF_ATOL,
    DiscreteJoint,
    DiscretePmf,
    _pair,
    js_information,
    kl_discrete,
    lautum_information,
    mutual_information,
    tv_discrete,
)
from .seeding import task_rng

MAX_ENUMERATION = 10**6
SOUNDNESS_SLACK = 1e-12


class ProblemError(ValueError):
    """A toy problem violates one of its structural invariants."""


def training_sequences(z_count: int, n: int) -> np.ndarray:
    """All ordered length-n sequences over range(z_count), lexicographic order.

    Row k of a problem's kernel belongs to row k of this array.
    """
    return np.array(list(itertools.product(range(z_count), repeat=n)), dtype=int).reshape(-1, n)


@dataclass(frozen=True)
class ToyLearningProblem:
    z_pmf: DiscretePmf
    n: int
    w_count: int
    kernel: np.ndarray  # (|Z|^n, w_count), rows follow training_sequences order
    loss: np.ndarray  # (w_count, |Z|)
    loss_min: float = 0.0
    loss_max: float = 1.0

    def __post_init__(self):
        if not isinstance(self.z_pmf, DiscretePmf):
            object.__setattr__(self, "z_pmf", DiscretePmf(self.z_pmf))
        z_count = len(self.z_pmf)
        if int(self.n) != self.n or self.n < 1:
            raise ProblemError("n must be a positive integer")
        if int(self.w_count) != self.w_count or self.w_count < 1:
            raise ProblemError("w_count must be a positive integer")
        if z_count**self.n * self.w_count > MAX_ENUMERATION:
            raise ProblemError(f"|Z|^n * |W| = {z_count ** self.n * self.w_count} exceeds {MAX_ENUMERATION}")
        kernel = np.array(self.kernel, dtype=float)
        if kernel.shape != (z_count**self.n, self.w_count):
            raise ProblemError(f"kernel shape {kernel.shape}, expected {(z_count ** self.n, self.w_count)}")
        if not np.all(np.isfinite(kernel)) or np.any(kernel < 0):
            raise ProblemError("kernel entries must be finite and non-negative")
        if np.any(np.abs(kernel.sum(axis=1) - 1.0) > PMF_ATOL):
            raise ProblemError("every kernel row must sum to 1")
        loss = np.array(self.loss, dtype=float)
        if loss.shape != (self.w_count, z_count):
            raise ProblemError(f"loss shape {loss.shape}, expected {(self.w_count, z_count)}")
        if not self.loss_max > self.loss_min:
            raise ProblemError("loss_max must exceed loss_min")
        if np.any(loss < self.loss_min) or np.any(loss > self.loss_max) or not np.all(np.isfinite(loss)):
            raise ProblemError(f"loss entries must lie in [{self.loss_min}, {self.loss_max}]")
        kernel.setflags(write=False)
        loss.setflags(write=False)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "loss", loss)

    @property
    def z_count(self) -> int:
        return len(self.z_pmf)

    @property
    def sigma(self) -> float:
        """Subgaussian parameter implied by the loss range."""
        return 0.5 * (self.loss_max - self.loss_min)

    def to_dict(self) -> dict:
        return {
            "z_pmf": self.z_pmf.probs.tolist(),
            "n": int(self.n),
            "w_count": int(self.w_count),
            "kernel": self.kernel.tolist(),
            "loss": self.loss.tolist(),
            "loss_min": float(self.loss_min),
            "loss_max": float(self.loss_max),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> ToyLearningProblem:
        missing = {"z_pmf", "n", "w_count", "kernel", "loss"} - set(d)
        if missing:
            raise ProblemError(f"missing fields: {sorted(missing)}")
        try:
            z_pmf = DiscretePmf(d["z_pmf"])
        except ValueError as e:
            raise ProblemError(f"z_pmf: {e}") from e
        return cls(
            z_pmf=z_pmf,
            n=d["n"],
            w_count=d["w_count"],
            kernel=d["kernel"],
            loss=d["loss"],
            loss_min=float(d.get("loss_min", 0.0)),
            loss_max=float(d.get("loss_max", 1.0)),
        )

    @classmethod
    def from_json(cls, text: str) -> ToyLearningProblem:
        return cls.from_dict(json.loads(text))


@dataclass
class ExactGenResult:
    gen: float
    per_index_joints: list[DiscreteJoint]
    population_risks: np.ndarray
    loss: np.ndarray = field(repr=False)

    def gen_from_joints(self) -> float:
        """E[L_P] - E[L_E] rebuilt from the stored joints alone."""
        total = 0.0
        for j in self.per_index_joints:
            total += np.sum(j.product().table * self.loss) - np.sum(j.table * self.loss)
        return float(total / len(self.per_index_joints))


def _sequence_probs(p: ToyLearningProblem, seqs: np.ndarray) -> np.ndarray:
    return np.prod(p.z_pmf.probs[seqs], axis=1)


def enumerate_joints(p: ToyLearningProblem) -> list[DiscreteJoint]:
    """P_{W,Z_i} for i = 1..n by summing over all training sequences."""
    seqs = training_sequences(p.z_count, p.n)
    weighted = _sequence_probs(p, seqs)[:, None] * p.kernel  # (S, W)
    joints = []
    for i in range(p.n):
        table = np.zeros((p.w_count, p.z_count))
        for z in range(p.z_count):
            table[:, z] = weighted[seqs[:, i] == z].sum(axis=0)
        table /= table.sum()
        joints.append(DiscreteJoint(table))
    return joints


def exact_gen_error(p: ToyLearningProblem) -> ExactGenResult:
    seqs = training_sequences(p.z_count, p.n)
    ps = _sequence_probs(p, seqs)
    pop = p.loss @ p.z_pmf.probs  # L_P(w)
    emp = p.loss[:, seqs].mean(axis=2).T  # (S, W): L_E(w, s)
    gen = float(np.sum(ps[:, None] * p.kernel * (pop[None, :] - emp)))
    return ExactGenResult(gen, enumerate_joints(p), pop, p.loss)


def dv_lower_bound(alpha, beta, f) -> float:
    """Donsker-Varadhan objective E_alpha[f] - log E_beta[exp f]; never exceeds KL(alpha || beta)."""
    a, b = _pair(alpha, beta)
    f = np.asarray(f, dtype=float).reshape(-1)
    if f.shape != a.shape:
        raise ValueError("f must have one value per atom")
    on_b = b > 0
    if not np.all(np.isfinite(f[on_b])):
        raise ValueError("f must be finite wherever beta > 0")
    on_a = a > 0
    return float(np.dot(a[on_a], f[on_a]) - logsumexp(f[on_b], b=b[on_b]))


# --- certification ------------------------------------------------------------

@dataclass
class CertificationReport:
    gen: float
    sigma: float
    mi_terms: np.ndarray
    lautum_terms: np.ndarray
    js_terms: np.ndarray
    bounds: dict[str, cb.BoundReport]
    violations: list[str]
    problem: ToyLearningProblem = field(repr=False)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self, include_problem: bool = False) -> dict:
        d = {
            "gen": self.gen,
            "sigma": self.sigma,
            "mi_terms": self.mi_terms.tolist(),
            "lautum_terms": self.lautum_terms.tolist(),
            "js_terms": self.js_terms.tolist(),
            "bounds": {k: v.value for k, v in self.bounds.items()},
            "violations": list(self.violations),
        }
        if include_problem:
            d["problem"] = self.problem.to_dict()
        return d


def certify_bounds(p: ToyLearningProblem) -> CertificationReport:
    """Evaluate every bound on ``p`` and compare with the exact generalization error.

    The subgaussian auxiliary-distribution bound is evaluated with the product
    of marginals, the joint and their mixture as auxiliaries. The two-sided
    envelope bound uses the mixture with subgaussian envelopes. Any finite bound below |gen| is
    recorded as a violation, which would indicate an implementation bug.
    """
    exact = exact_gen_error(p)
    sigma = p.sigma
    joints = exact.per_index_joints
    mi = np.array([mutual_information(j) for j in joints])
    lautum = np.array([lautum_information(j) for j in joints])
    js = np.array([js_information(j) for j in joints])
    mix_a = np.array([kl_discrete(j.product(), j.mixture()) for j in joints])
    mix_b = np.array([kl_discrete(j, j.mixture()) for j in joints])

    env = cb.SubgaussianEnvelope(sigma)
    mixture_inputs = cb.BoundInputs(mix_a, mix_b)
    bounds = {
        "mi_example1": cb.mi_bound(sigma, mi),
        "lautum_example2": cb.lautum_bound(sigma, lautum),
        "js_corollary1": cb.js_bound(sigma, js),
        "theorem2_product": cb.theorem2_bound(sigma, cb.BoundInputs(np.zeros_like(mi), mi)),
        "theorem2_joint": cb.theorem2_bound(sigma, cb.BoundInputs(lautum, np.zeros_like(lautum))),
        "theorem2_mixture": cb.theorem2_bound(sigma, mixture_inputs),
        "theorem1_upper_mixture": cb.theorem1_upper(mixture_inputs, env, env),
        "theorem1_lower_mixture": cb.theorem1_lower(mixture_inputs, env, env),
        "prop1_cap": cb.BoundReport("prop1_cap", cb.prop1_cap(sigma)),
    }
    gen = exact.gen
    violations = []
    for name, rep in bounds.items():
        if not rep.finite:
            continue
        if name == "theorem1_upper_mixture":
            target = gen
        elif name == "theorem1_lower_mixture":
            target = -gen
        else:
            target = abs(gen)
        if rep.value + SOUNDNESS_SLACK < target:
            violations.append(f"{name}: bound {rep.value!r} < {target!r}")
    return CertificationReport(gen, sigma, mi, lautum, js, bounds, violations, p)


def memorizing_problem() -> ToyLearningProblem:
    """n = 1, uniform binary Z, the algorithm outputs W = Z, 0-1 loss."""
    return ToyLearningProblem(
        z_pmf=DiscretePmf([0.5, 0.5]),
        n=1,
        w_count=2,
        kernel=np.eye(2),
        loss=1.0 - np.eye(2),
    )


def random_problem(rng: np.random.Generator, max_z: int = 4, max_n: int = 3, max_w: int = 4) -> ToyLearningProblem:
    """Dirichlet(1,...,1) data pmf and kernel rows, losses uniform on [0, 1]."""
    z_count = int(rng.integers(2, max_z + 1))
    n = int(rng.integers(1, max_n + 1))
    w_count = int(rng.integers(2, max_w + 1))
    z_pmf = rng.dirichlet(np.ones(z_count))
    kernel = rng.dirichlet(np.ones(w_count), size=z_count**n)
    loss = rng.uniform(0.0, 1.0, size=(w_count, z_count))
    return ToyLearningProblem(DiscretePmf(z_pmf / z_pmf.sum()), n, w_count, kernel, loss, 0.0, 1.0)


def certification_suite(count: int = 1000, seed: int = 42) -> list[CertificationReport]:
    return [certify_bounds(random_problem(task_rng(seed, "certify", i))) for i in range(count)]


# --- inequality audit ----------------------------------------------------------

@dataclass
class AuditResult:
    shape: tuple[int, int]
    mi: float
    js: float
    tv: float
    pinsker: bool
    js_tv: bool
    js_mi: bool
    dominance: bool | None  # None when MI is below the dominance threshold

    @property
    def ok(self) -> bool:
        return self.pinsker and self.js_tv and self.js_mi and self.dominance is not False


def audit_inequalities(j: DiscreteJoint, atol: float = 1e-12) -> AuditResult:
    """Check Pinsker, 2 I_JS <= log2 TV, I_JS^2 <= log(2)^2 I / 2 and the dominance threshold."""
    mi = mutual_information(j)
    js = js_information(j)
    tv = tv_discrete(j, j.product())
    dominance = None
    if cb.js_dominance_condition(mi):
        dominance = 4.0 * js <= mi + atol
    return AuditResult(
        shape=j.shape,
        mi=mi,
        js=js,
        tv=tv,
        pinsker=tv <= math.sqrt(2.0 * mi) + atol,
        js_tv=2.0 * js <= LOG2 * tv + atol,
        js_mi=js * js <= LOG2**2 * mi / 2.0 + atol,
        dominance=dominance,
    )


def random_joint(rng: np.random.Generator, max_alphabet: int = 8) -> DiscreteJoint:
    """Dirichlet(1,...,1) joint on a random |W| x |Z| grid with sides in [1, max_alphabet]."""
    rows = int(rng.integers(1, max_alphabet + 1))
    cols = int(rng.integers(1, max_alphabet + 1))
    t = rng.dirichlet(np.ones(rows * cols)).reshape(rows, cols)
    return DiscreteJoint(t / t.sum())


def noisy_diagonal_joint(size: int, noise: float) -> DiscreteJoint:
    """Uniform diagonal joint blended with the uniform product; high MI for large ``size``."""
    diag = np.eye(size) / size
    flat = np.full((size, size), 1.0 / size**2)
    return DiscreteJoint((1.0 - noise) * diag + noise * flat)


def audit_suite(trials: int = 1000, max_alphabet: int = 8, seed: int = 42) -> list[AuditResult]:
    return [audit_inequalities(random_joint(task_rng(seed, "audit", i), max_alphabet)) for i in range(trials)]
