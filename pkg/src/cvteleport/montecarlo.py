"""Monte Carlo cross-check of the closed-form criteria.

The simulator draws per-sample noise realizations from the channel's joint
Gaussian and rebuilds every figure of merit from samples alone: output
noise variances from the added-noise samples, the fidelity as the sample
mean of the overlap kernel (never through the closed form), and the
conditional-variance products through sample regression.  Estimates come
with jackknife standard errors over 100 equal blocks, and each is compared
to its analytic counterpart through a z-score.

Sampling is deterministic for a fixed seed: block ``b`` draws from a
generator seeded with ``SeedSequence([seed, b])``, and blocks are reduced
in index order, so reports are bit-identical across runs and machines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelConfig,
    InputState,
    budget_to_channel,
    compose,
    equivalent_output_noise,
    to_unity_gain_budget,
    vacuum_input,
)
from .criteria import epr_criterion, fidelity_general, fidelity_mc_integrand
from .epr import EprScenario, to_noise_budget
from .errors import ConfigError, DegenerateConditioningError
from .gaussian import apply_form, sample, term

JACKKNIFE_BLOCKS = 100
MIN_SAMPLES = 1000


@dataclass(frozen=True)
class McRunConfig:
    """One simulation run: channel, sample count, seed, input amplitude.

    ``samples`` must be at least 1000 and divisible by the jackknife block
    count.  ``input_amplitude`` sets the coherent amplitude when the channel
    is given as an :class:`EprScenario`; for an explicit
    :class:`ChannelConfig` it overrides the configured input means when
    provided.
    """

    channel: ChannelConfig | EprScenario
    samples: int
    seed: int
    input_amplitude: tuple[float, float] | None = None

    def __post_init__(self):
        if not isinstance(self.samples, (int, np.integer)) or isinstance(
            self.samples, bool
        ):
            raise ConfigError("samples must be an integer")
        if self.samples < MIN_SAMPLES:
            raise ConfigError(f"samples must be >= {MIN_SAMPLES}, got {self.samples}")
        if self.samples % JACKKNIFE_BLOCKS != 0:
            raise ConfigError(
                f"samples must be a multiple of {JACKKNIFE_BLOCKS} "
                "(jackknife block count)"
            )


@dataclass(frozen=True)
class Comparison:
    """A sampled estimate against its analytic counterpart."""

    estimate: float
    stderr: float
    analytic: float
    z_score: float


@dataclass(frozen=True)
class McReport:
    """Estimates, standard errors and z-scores for one simulation run."""

    samples: int
    seed: int
    N_X: Comparison
    N_Y: Comparison
    fidelity: Comparison
    cv_product_r_given_m: Comparison
    cv_product_m_given_r: Comparison

    @property
    def comparisons(self) -> dict[str, Comparison]:
        return {
            "N_X": self.N_X,
            "N_Y": self.N_Y,
            "fidelity": self.fidelity,
            "cv_product_r_given_m": self.cv_product_r_given_m,
            "cv_product_m_given_r": self.cv_product_m_given_r,
        }

    @property
    def max_abs_z(self) -> float:
        return max(abs(c.z_score) for c in self.comparisons.values())


def _moments(s1: float, s2: float, n: float) -> float:
    v = s2 / n - (s1 / n) ** 2
    return v if v > 0.0 else 0.0


def _sample_conditional(v_a: float, v_b: float, c: float) -> float:
    if v_b == 0.0:
        if c != 0.0:
            raise DegenerateConditioningError(
                "constant conditioning samples with nonzero sample covariance"
            )
        return v_a
    v = v_a - c * c / v_b
    return v if v > 0.0 else 0.0


def estimate_conditional_variance(
    samples_a: np.ndarray, samples_b: np.ndarray
) -> float:
    """Residual variance of ``a`` after linear regression on ``b``.

    The sample analog of the state-algebra conditional variance; used by
    the simulator to estimate the criterion products from data.  Moments
    are computed from centered samples, so a constant conditioner has an
    exactly zero sample covariance and falls back to the plain variance.
    """
    a = np.asarray(samples_a, dtype=float).reshape(-1)
    b = np.asarray(samples_b, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise ValueError("sample arrays must have equal length")
    n = a.size
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    ac = a - a.mean()
    bc = b - b.mean()
    v_a = float(ac @ ac) / n
    v_b = float(bc @ bc) / n
    c = float(ac @ bc) / n
    return _sample_conditional(v_a, v_b, c)


# Per-block sufficient statistics, in column order.
_STAT_COLUMNS = (
    "sxm", "sxm2", "sxr", "sxr2", "sxmxr",
    "sym", "sym2", "syr", "syr2", "symyr",
    "sw",
)


def _estimates_from_sums(sums: np.ndarray, n: float) -> dict[str, float]:
    (sxm, sxm2, sxr, sxr2, sxmxr, sym, sym2, syr, syr2, symyr, sw) = sums
    v_xm = _moments(sxm, sxm2, n)
    v_xr = _moments(sxr, sxr2, n)
    v_ym = _moments(sym, sym2, n)
    v_yr = _moments(syr, syr2, n)
    c_x = sxmxr / n - (sxm / n) * (sxr / n)
    c_y = symyr / n - (sym / n) * (syr / n)
    n_x = v_xm + v_xr + 2.0 * c_x
    n_y = v_ym + v_yr + 2.0 * c_y
    return {
        "N_X": n_x if n_x > 0.0 else 0.0,
        "N_Y": n_y if n_y > 0.0 else 0.0,
        "fidelity": sw / n,
        "cv_product_r_given_m": _sample_conditional(v_xr, v_xm, c_x)
        * _sample_conditional(v_yr, v_ym, c_y),
        "cv_product_m_given_r": _sample_conditional(v_xm, v_xr, c_x)
        * _sample_conditional(v_ym, v_yr, c_y),
    }


def _jackknife(block_stats: np.ndarray, block_n: int) -> tuple[dict, dict]:
    """Full-sample estimates plus delete-one-block jackknife stderr."""
    totals = block_stats.sum(axis=0)
    n_total = block_n * len(block_stats)
    estimates = _estimates_from_sums(totals, n_total)
    loo = np.array(
        [
            list(
                _estimates_from_sums(totals - row, n_total - block_n).values()
            )
            for row in block_stats
        ]
    )
    nb = len(block_stats)
    stderr_vec = np.sqrt((nb - 1) / nb * ((loo - loo.mean(axis=0)) ** 2).sum(axis=0))
    stderrs = dict(zip(estimates.keys(), stderr_vec.tolist()))
    return estimates, stderrs


def _resolve_channel(cfg: McRunConfig) -> ChannelConfig:
    if isinstance(cfg.channel, EprScenario):
        x_a, y_a = cfg.input_amplitude or (0.0, 0.0)
        return budget_to_channel(to_noise_budget(cfg.channel), vacuum_input(x_a, y_a))
    channel = cfg.channel
    if cfg.input_amplitude is not None:
        x_a, y_a = cfg.input_amplitude
        inp = channel.input
        channel = ChannelConfig(
            measurement=channel.measurement,
            reconstruction=channel.reconstruction,
            input=InputState(inp.var_X, inp.var_Y, x_a, y_a),
            cross_cov_BC=channel.cross_cov_BC,
        )
    return channel


def simulate_protocol(cfg: McRunConfig) -> McReport:
    """Simulate the channel sample by sample and compare against closed forms.

    Requires unity gain.  The reconstructed amplitude for each sample is the
    input amplitude displaced by that sample's added noise; its overlap with
    the target is averaged for the fidelity estimate, and the added-noise
    samples feed the variance and regression estimates.
    """
    channel = _resolve_channel(cfg)
    budget = to_unity_gain_budget(channel)
    n_x, n_y = equivalent_output_noise(budget)
    crit = epr_criterion(budget)
    analytic = {
        "N_X": n_x,
        "N_Y": n_y,
        "fidelity": fidelity_general(n_x, n_y),
        "cv_product_r_given_m": crit.products[0],
        "cv_product_m_given_r": crit.products[1],
    }

    composed = compose(channel)
    h_x, h_y = channel.reconstruction.h_X, channel.reconstruction.h_Y
    form_xm, form_ym = term("B_X", h_x), term("B_Y", h_y)
    form_xr, form_yr = term("C_X"), term("C_Y")
    x_a, y_a = channel.input.mean_x, channel.input.mean_y

    block_n = cfg.samples // JACKKNIFE_BLOCKS
    block_stats = np.zeros((JACKKNIFE_BLOCKS, len(_STAT_COLUMNS)))
    for b in range(JACKKNIFE_BLOCKS):
        rows = sample(composed.state, block_n, np.random.SeedSequence([cfg.seed, b]))
        xm = apply_form(form_xm, composed.state, rows)
        xr = apply_form(form_xr, composed.state, rows)
        ym = apply_form(form_ym, composed.state, rows)
        yr = apply_form(form_yr, composed.state, rows)
        w = fidelity_mc_integrand(x_a + xm + xr, y_a + ym + yr, x_a, y_a)
        block_stats[b] = (
            xm.sum(), (xm * xm).sum(), xr.sum(), (xr * xr).sum(), (xm * xr).sum(),
            ym.sum(), (ym * ym).sum(), yr.sum(), (yr * yr).sum(), (ym * yr).sum(),
            w.sum(),
        )

    estimates, stderrs = _jackknife(block_stats, block_n)
    comparisons = {}
    for key, est in estimates.items():
        se, ref = stderrs[key], analytic[key]
        if se == 0.0:
            z = 0.0 if est == ref else float(np.copysign(np.inf, est - ref))
        else:
            z = (est - ref) / se
        comparisons[key] = Comparison(
            estimate=float(est), stderr=float(se), analytic=float(ref), z_score=float(z)
        )
    return McReport(samples=cfg.samples, seed=cfg.seed, **comparisons)
