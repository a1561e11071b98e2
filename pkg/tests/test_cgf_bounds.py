import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genbound import cgf_bounds as cb
from genbound.info_measures import LOG2


def closed_form(sigma, x):
    return math.sqrt(2 * sigma**2 * x)


def quadratic(a):
    """psi(lam) = a lam^2; its generalized inverse is 2 sqrt(a x)."""
    return cb.CgfEnvelope(lambda lam: a * lam * lam)


# --- envelopes ---------------------------------------------------------------

def test_subgaussian_envelope():
    env = cb.SubgaussianEnvelope(2.0)
    assert env(3.0) == pytest.approx(18.0)
    assert env.domain_bound == math.inf
    env.validate()
    with pytest.raises(ValueError):
        cb.SubgaussianEnvelope(0.0)
    assert cb.SubgaussianEnvelope.from_loss_range(0.0, 1.0).sigma == 0.5
    assert cb.SubgaussianEnvelope.from_loss_range(-1.0, 3.0).sigma == 2.0


@pytest.mark.parametrize(
    "psi, bound",
    [
        (lambda lam: lam * lam + 0.1, math.inf),  # psi(0) != 0
        (lambda lam: -lam * lam, math.inf),  # negative
        (lambda lam: math.sqrt(lam), math.inf),  # concave
        (lambda lam: lam * lam if lam < 5 else 25 - (lam - 5), math.inf),  # decreasing tail
        (lambda lam: math.nan if lam > 1 else lam * lam, math.inf),  # undefined
    ],
)
def test_envelope_spot_checks_reject(psi, bound):
    with pytest.raises(cb.EnvelopeError):
        cb.CgfEnvelope(psi, bound).validate()
    with pytest.raises(cb.EnvelopeError):
        cb.psi_star_inverse(cb.CgfEnvelope(psi, bound), 1.0)


def test_gamma_like_envelope_with_finite_domain():
    # psi(lam) = -log(1 - lam) - lam on [0, 1), a valid sub-gamma style envelope
    env = cb.CgfEnvelope(lambda lam: -math.log1p(-lam) - lam, 1.0)
    env.validate()
    x = 0.3
    grid = np.linspace(1e-6, 1 - 1e-9, 200001)
    brute = np.min((x - np.log1p(-grid) - grid) / grid)
    assert cb.psi_star_inverse(env, x) == pytest.approx(brute, rel=1e-8)


def test_tabulated_envelope(tmp_path):
    lam = np.linspace(0.0, 10.0, 10001)
    env = cb.TabulatedEnvelope(lam, 0.5 * lam**2)
    assert cb.psi_star_inverse(env, 2.0) == pytest.approx(2.0, abs=1e-6)
    path = tmp_path / "psi.csv"
    path.write_text("lambda,psi\n" + "".join(f"{a:.17g},{b:.17g}\n" for a, b in zip(lam, 0.5 * lam**2)))
    env2 = cb.TabulatedEnvelope.from_csv(path)
    assert cb.psi_star_inverse(env2, 2.0) == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(cb.EnvelopeError):
        cb.TabulatedEnvelope([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 1.5, 1.9]).validate()
    with pytest.raises(ValueError):
        cb.TabulatedEnvelope([0.5, 1.0, 2.0], [0.0, 1.0, 2.0])


# --- psi_star_inverse ---------------------------------------------------------

def test_psi_inverse_examples():
    assert cb.psi_star_inverse(cb.SubgaussianEnvelope(1.0), 2.0) == pytest.approx(2.0, rel=1e-8)
    assert cb.psi_star_inverse(cb.SubgaussianEnvelope(0.5), LOG2) == pytest.approx(0.5887, abs=1e-4)
    assert cb.psi_star_inverse(cb.SubgaussianEnvelope(0.5), LOG2) == pytest.approx(
        closed_form(0.5, LOG2), rel=1e-8
    )
    for env in (cb.SubgaussianEnvelope(3.0), quadratic(0.2)):
        assert cb.psi_star_inverse(env, 0.0) == 0.0
    assert cb.psi_star_inverse(cb.SubgaussianEnvelope(1.0), math.inf) == math.inf
    with pytest.raises(ValueError):
        cb.psi_star_inverse(cb.SubgaussianEnvelope(1.0), -1.0)


@pytest.mark.parametrize("sigma", [0.1, 0.5, 1.0, 4.0])
def test_psi_inverse_matches_subgaussian_closed_form(sigma):
    env = cb.SubgaussianEnvelope(sigma)
    for x in np.geomspace(1e-6, 1e3, 37):
        assert cb.psi_star_inverse(env, x) == pytest.approx(closed_form(sigma, x), rel=1e-8)


def test_psi_inverse_brute_force_grid():
    # independent check against a dense grid over lambda for a non-quadratic envelope
    env = cb.CgfEnvelope(lambda lam: math.cosh(lam) - 1.0)
    lam = np.linspace(1e-4, 20.0, 400001)
    for x in (0.01, 0.5, 3.0):
        k = np.argmin((x + np.cosh(lam) - 1.0) / lam)
        fine = np.linspace(lam[k - 1], lam[k + 1], 100001)
        brute = np.min((x + np.cosh(fine) - 1.0) / fine)
        assert cb.psi_star_inverse(env, x) == pytest.approx(brute, rel=1e-8)


@given(st.floats(0.0, 100.0), st.floats(0.0, 100.0))
def test_psi_inverse_monotone_in_x(x1, x2):
    env = cb.SubgaussianEnvelope(0.7)
    lo, hi = sorted((x1, x2))
    assert cb.psi_star_inverse(env, lo) <= cb.psi_star_inverse(env, hi) * (1 + 1e-12)


def test_psi_inverse_decreases_with_smaller_envelope():
    for x in (0.01, 1.0, 50.0):
        vals = [cb.psi_star_inverse(cb.SubgaussianEnvelope(s), x) for s in (2.0, 1.0, 0.5, 0.25)]
        assert all(np.diff(vals) <= 0)


def test_golden_section_min():
    x, f = cb.golden_section_min(lambda u: (u - 1.3) ** 2 + 2.0, -5.0, 5.0)
    assert x == pytest.approx(1.3, abs=1e-5)
    assert f == pytest.approx(2.0, abs=1e-10)
    # boundary minimum is kept
    x, f = cb.golden_section_min(lambda u: u, 0.0, 1.0)
    assert x == 0.0 and f == 0.0


# --- two-sided envelope bound --------------------------------------------------------------------

def test_theorem1_zero_terms():
    env = cb.SubgaussianEnvelope(1.0)
    inputs = cb.BoundInputs([0.0, 0.0], [0.0, 0.0])
    assert cb.theorem1_upper(inputs, env, env).value == 0.0
    assert cb.theorem1_lower(inputs, env, env).value == 0.0


def test_theorem1_recovers_mi_and_lautum_bounds():
    sigma = 0.8
    env = cb.SubgaussianEnvelope(sigma)
    info = np.array([0.05, 0.3, 1.7])
    zeros = np.zeros(3)
    mi = cb.theorem1_upper(cb.BoundInputs(zeros, info), env, env)
    assert mi.value == pytest.approx(np.mean(np.sqrt(2 * sigma**2 * info)), abs=1e-10)
    assert abs(mi.value - cb.mi_bound(sigma, info).value) <= 1e-10
    lautum = cb.theorem1_upper(cb.BoundInputs(info, zeros), env, env)
    assert abs(lautum.value - cb.lautum_bound(sigma, info).value) <= 1e-10


def test_theorem1_lower_symmetric_equals_upper():
    env = cb.SubgaussianEnvelope(1.3)
    inputs = cb.BoundInputs([0.1, 0.4], [0.9, 0.2])
    assert cb.theorem1_lower(inputs, env, env).value == pytest.approx(
        cb.theorem1_upper(inputs, env, env).value, rel=1e-12
    )


def test_theorem1_asymmetric_envelopes_swap_terms():
    plus, minus = quadratic(1.0), quadratic(2.0)
    a, b = np.array([0.3, 1.1]), np.array([0.7, 0.05])
    inputs = cb.BoundInputs(a, b)
    up = cb.theorem1_upper(inputs, plus, minus)
    low = cb.theorem1_lower(inputs, plus, minus)
    assert up.value == pytest.approx(np.mean(2 * np.sqrt(a) + 2 * np.sqrt(2 * b)), rel=1e-9)
    assert low.value == pytest.approx(np.mean(2 * np.sqrt(2 * a) + 2 * np.sqrt(b)), rel=1e-9)
    assert up.value != pytest.approx(low.value)


def test_theorem1_infinite_terms_propagate():
    env = cb.SubgaussianEnvelope(1.0)
    rep = cb.theorem1_upper(cb.BoundInputs([math.inf, 0.1], [0.2, 0.3]), env, env)
    assert rep.value == math.inf and not rep.finite
    assert np.isinf(rep.per_sample_terms[0])


def test_bound_inputs_validation():
    with pytest.raises(ValueError):
        cb.BoundInputs([0.1], [0.1, 0.2])
    with pytest.raises(ValueError):
        cb.BoundInputs([-0.1], [0.1])
    with pytest.raises(ValueError):
        cb.BoundInputs([], [])
    assert cb.BoundInputs([0.1, math.inf], [0.0, 0.0]).n == 2


# --- subgaussian auxiliary bound and specializations -----------------------------------------------

def test_theorem2_examples():
    assert cb.theorem2_bound(1.0, cb.BoundInputs([0.0, 0.0], [0.0, 0.0])).value == 0.0
    rep = cb.theorem2_bound(1.0, cb.BoundInputs([0.5, 0.5], [0.5, 0.5]))
    assert rep.value == pytest.approx(2.0, abs=1e-15)
    assert rep.bound_name == "theorem2"


def test_theorem2_dominates_split_form():
    rng = np.random.default_rng(0)
    for _ in range(500):
        n = int(rng.integers(1, 6))
        sigma = float(rng.uniform(0.1, 3.0))
        a, b = rng.exponential(1.0, n), rng.exponential(1.0, n)
        split = np.mean(np.sqrt(2 * sigma**2 * a) + np.sqrt(2 * sigma**2 * b))
        assert split <= cb.theorem2_bound(sigma, cb.BoundInputs(a, b)).value * (1 + 1e-12)


def test_mi_bound():
    assert cb.mi_bound(1.0, [0.0, 0.0]).value == 0.0
    assert cb.mi_bound(0.5, [LOG2]).value == pytest.approx(0.5887, abs=1e-4)
    terms = [0.2, 0.9, 1.4]
    assert cb.mi_bound(2.0, terms).value == pytest.approx(2 * cb.mi_bound(1.0, terms).value, rel=1e-14)


def test_lautum_bound():
    assert cb.lautum_bound(1.0, [0.0]).value == 0.0
    rep = cb.lautum_bound(1.0, [0.3, math.inf])
    assert not rep.finite and rep.value == math.inf
    assert cb.lautum_bound(1.0, [0.2, 0.8]).value == pytest.approx(0.5 * (math.sqrt(0.4) + math.sqrt(1.6)))
    assert cb.lautum_bound(1.0, [0.2, 0.8]).value == pytest.approx(0.9487, abs=1e-4)


def test_js_bound():
    assert cb.js_bound(1.0, [0.0, 0.0]).value == 0.0
    assert cb.js_bound(0.7, [LOG2] * 3).value == pytest.approx(cb.prop1_cap(0.7), rel=1e-14)
    assert cb.js_bound(0.5, [0.2158, 0.2158]).value == pytest.approx(0.6570, abs=1e-4)
    with pytest.raises(ValueError):
        cb.js_bound(1.0, [0.7])
    with pytest.raises(ValueError):
        cb.js_bound(1.0, [-0.01])


def test_js_bound_from_theorem2_with_mixture_terms():
    rng = np.random.default_rng(1)
    js = rng.uniform(0.0, LOG2, 4)
    split = rng.uniform(0.0, 1.0, 4)
    a, b = 2 * js * split, 2 * js * (1 - split)
    assert abs(cb.theorem2_bound(0.9, cb.BoundInputs(a, b)).value - cb.js_bound(0.9, js).value) <= 1e-10


def test_prop1_cap():
    assert 2.3548 <= cb.prop1_cap(1.0) <= 2.3549
    assert cb.prop1_cap(0.5) == pytest.approx(1.1774, abs=1e-4)
    rng = np.random.default_rng(2)
    for _ in range(200):
        sigma = float(rng.uniform(0.01, 5))
        assert cb.js_bound(sigma, rng.uniform(0, LOG2, 3)).value <= cb.prop1_cap(sigma)


def test_js_dominance_condition():
    threshold = 8 * math.log(2) ** 2
    assert threshold == pytest.approx(3.8436, abs=1e-4)
    assert not cb.js_dominance_condition(0.0)
    assert cb.js_dominance_condition(threshold)
    assert cb.js_dominance_condition(4.0)
    assert not cb.js_dominance_condition(3.84)


def test_js_dominance_on_term_vectors():
    # Under the threshold condition the JS term bound 4 I_JS <= I makes the JS bound smaller.
    rng = np.random.default_rng(4)
    for _ in range(200):
        mi = rng.uniform(cb.JS_DOMINANCE_THRESHOLD, 20.0, 3)
        # largest I_JS compatible with I_JS^2 <= log(2)^2 I / 2 and I_JS <= log 2
        js = np.minimum(np.sqrt(LOG2**2 * mi / 2), LOG2)
        assert all(cb.js_dominance_condition(m) for m in mi)
        assert cb.js_bound(1.0, js).value <= cb.mi_bound(1.0, mi).value


def test_bound_report():
    rep = cb.mi_bound(1.0, [0.1, 0.4])
    d = rep.as_dict()
    assert d["finite"] and d["bound_name"] == "mi_example1"
    assert d["value"] == pytest.approx(np.mean(d["per_sample_terms"]))
    with pytest.raises(ValueError):
        cb.BoundReport("nonsense", 1.0)
