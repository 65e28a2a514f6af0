"""Teleportation quality criteria and their consistency verifier.

Three families of figures of merit are computed for a unity-gain channel,
all driven by the added-noise budget:

* equivalent output noises N and their product (quantum region: product < 1),
* signal transfer coefficients T and their sum (quantum region: sum > 1 for
  minimum-uncertainty inputs),
* coherent-state fidelity F (classical bound 1/2, conditional-variance bound 2/3).

The conditional-variance criterion tests for an apparent violation of the
uncertainty product between the two noise contributions: each stage's noise
pair is a conjugate pair, so the products of conditional variances (in both
conditioning directions) are bounded below by 1 for any separable noise
model.  A product below 1 is the entanglement signature.

The verifier rechecks, budget by budget, the algebraic chain that links the
no-violation condition to the noise-product bound, including the exact
factorization identity it relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelConfig,
    NoiseBudget,
    _clamp_edge,
    equivalent_output_noise,
    shot_noise_budget,
    to_unity_gain_budget,
    transfer_coefficients,
)
from .errors import VerificationError
from .gaussian import conditional_variance, term

# Strict-verdict margin: a bound counts as beaten only beyond this.
VERDICT_MARGIN = 1e-9
# The factorization identity must hold to this, relative to its largest term.
IDENTITY_RTOL = 1e-9

FIDELITY_CLASSICAL_BOUND = 0.5
FIDELITY_CV_BOUND = 2.0 / 3.0


def fidelity_general(
    n_x: float, n_y: float, offset_x: float = 0.0, offset_y: float = 0.0
) -> float:
    """Coherent-state fidelity for Gaussian added noises and amplitude offsets.

    ``offset_x``/``offset_y`` are the differences between the input amplitude
    and the mean reconstructed amplitude; they vanish at unity gain with
    zero-mean noises.  With zero offsets and both noises at the classical
    limit (N = 2) this evaluates to exactly 1/2.
    """
    if n_x < 0.0 or n_y < 0.0:
        raise ValueError("equivalent noises must be >= 0")
    prefactor = 2.0 / np.sqrt((2.0 + n_x) * (2.0 + n_y))
    damping = np.exp(
        -offset_x**2 / (2.0 * (2.0 + n_x)) - offset_y**2 / (2.0 * (2.0 + n_y))
    )
    return float(prefactor * damping)


def fidelity_mc_integrand(x, y, x_a: float, y_a: float):
    """Overlap kernel between a reconstructed amplitude and the target.

    The fidelity is the expectation of this kernel over the distribution of
    reconstructed amplitudes; the Monte Carlo oracle averages it directly,
    independently of the closed form above.  Accepts scalars or arrays.
    """
    return np.exp(-((x - x_a) ** 2) / 4.0 - ((y - y_a) ** 2) / 4.0)


@dataclass(frozen=True)
class InequalityTrace:
    """Intermediate quantities of the criterion chain for one budget.

    ``cv_product`` is the shared left side of both no-violation conditions:
    ``cv_product >= measurement_product`` is the r-given-m condition and
    ``cv_product >= reconstruction_product`` the m-given-r one.  ``n_value``
    is the minimized slack term of the chain (nonnegative by construction)
    and ``n_product`` the final noise product the chain bounds below by 1.
    """

    budget: NoiseBudget
    v_Cx: float
    v_Cy: float
    cv_product: float
    measurement_product: float
    reconstruction_product: float
    identity_rel_error: float
    n_value: float
    n_product: float


def inequality_trace(b: NoiseBudget) -> InequalityTrace:
    """Evaluate the chain's intermediate quantities from the budget scalars.

    The factorization identity is checked in floating point; its relative
    error is measured against the largest term of the expansion, since the
    expansion cancels almost completely for near-singular budgets.
    """
    cx, cy = b.c_XmXr, b.c_YmYr
    v_cx = b.v_Xm * b.v_Xr - cx * cx
    v_cy = b.v_Ym * b.v_Yr - cy * cy
    lhs = v_cx * v_cy

    p, d = b.v_Xr + b.v_Xm, b.v_Xr - b.v_Xm
    q, e = b.v_Yr + b.v_Ym, b.v_Yr - b.v_Ym
    t1 = (p + 2 * cx) * (p - 2 * cx) * (q + 2 * cy) * (q - 2 * cy) / 16.0
    t2 = d * d * v_cy / 4.0
    t3 = e * e * v_cx / 4.0
    t4 = d * d * e * e / 16.0
    rhs = t1 - t2 - t3 - t4
    scale = max(abs(lhs), abs(t1), abs(t2), abs(t3), abs(t4))
    rel_err = abs(lhs - rhs) / scale if scale > 0.0 else 0.0

    de = (b.v_Xm - b.v_Xr) * (b.v_Ym - b.v_Yr)
    n_x, n_y = equivalent_output_noise(b)
    return InequalityTrace(
        budget=b,
        v_Cx=v_cx,
        v_Cy=v_cy,
        cv_product=lhs,
        measurement_product=b.v_Xm * b.v_Ym,
        reconstruction_product=b.v_Xr * b.v_Yr,
        identity_rel_error=rel_err,
        n_value=de + 2.0 * abs(de),
        n_product=n_x * n_y,
    )


@dataclass(frozen=True)
class EprCriterionResult:
    products: tuple[float, float]
    violated: bool
    trace: InequalityTrace


def epr_criterion(b: NoiseBudget) -> EprCriterionResult:
    """Conditional-variance entanglement test on the budget's implied state.

    Conditional variances are computed through the Gaussian state algebra on
    the four-variable state (X_m, X_r, Y_m, Y_r).  ``products`` holds the
    reconstruction-given-measurement product first, then the reverse
    direction; ``violated`` is true when either drops below 1 by more than
    the verdict margin.
    """
    state = b.state()
    x_m, x_r, y_m, y_r = (term(lbl) for lbl in ("X_m", "X_r", "Y_m", "Y_r"))
    p_r_given_m = conditional_variance(x_r, x_m, state) * conditional_variance(
        y_r, y_m, state
    )
    p_m_given_r = conditional_variance(x_m, x_r, state) * conditional_variance(
        y_m, y_r, state
    )
    violated = (
        p_r_given_m < 1.0 - VERDICT_MARGIN or p_m_given_r < 1.0 - VERDICT_MARGIN
    )
    return EprCriterionResult(
        products=(p_r_given_m, p_m_given_r),
        violated=violated,
        trace=inequality_trace(b),
    )


def _budget_products(b: NoiseBudget) -> tuple[float, float]:
    """Scalar fast path for the criterion products.

    Evaluates the same expressions as the state-algebra route, term for
    term, so the two agree bitwise; used where budgets are screened in bulk.
    """
    cx = _clamp_edge(b.c_XmXr, b.v_Xm * b.v_Xr)
    cy = _clamp_edge(b.c_YmYr, b.v_Ym * b.v_Yr)

    def cond(v_a: float, v_b: float, c: float) -> float:
        if v_b == 0.0:
            return v_a
        v = v_a - c * c / v_b
        return v if v > 0.0 else 0.0

    return (
        cond(b.v_Xr, b.v_Xm, cx) * cond(b.v_Yr, b.v_Ym, cy),
        cond(b.v_Xm, b.v_Xr, cx) * cond(b.v_Ym, b.v_Yr, cy),
    )


def _check_chain(trace: InequalityTrace) -> None:
    if trace.identity_rel_error > IDENTITY_RTOL:
        raise VerificationError(
            f"factorization identity off by {trace.identity_rel_error:.3e} relative",
            trace=trace,
        )
    if trace.n_value < 0.0:
        raise VerificationError(
            f"minimized slack term is negative: {trace.n_value:.3e}", trace=trace
        )
    if trace.n_product < 1.0 - VERDICT_MARGIN:
        raise VerificationError(
            f"noise product {trace.n_product:.12g} below 1 for a non-violating budget",
            trace=trace,
        )


def verify_inequality_chain(b: NoiseBudget) -> InequalityTrace:
    """Recheck the chain from no-violation to the noise-product bound.

    Only meaningful for budgets that do not violate the conditional-variance
    criterion; calling it on a violating budget raises ``ValueError``.
    Numerical failures of the chain raise :class:`VerificationError` with
    the full trace attached.
    """
    result = epr_criterion(b)
    if result.violated:
        raise ValueError(
            "inequality chain applies only to budgets without a conditional-variance violation"
        )
    _check_chain(result.trace)
    return result.trace


@dataclass(frozen=True)
class CriteriaReport:
    """All criteria for one unity-gain channel, with strict verdicts.

    ``cv_products`` are the two conditional-variance products (r-given-m,
    m-given-r).  ``t_sum_applicable`` records whether the input saturates
    the uncertainty product, which is the regime where the transfer-sum
    verdict is a faithful criterion; the T values themselves are always
    reported.
    """

    N_X_out: float
    N_Y_out: float
    T_X_out: float
    T_Y_out: float
    fidelity: float
    cv_products: tuple[float, float]
    verdicts: dict[str, bool]
    t_sum_applicable: bool


def full_report(config: ChannelConfig) -> CriteriaReport:
    """Evaluate every criterion for a unity-gain channel configuration.

    Verdicts are strict: a bound counts as beaten only when cleared by more
    than the verdict margin.
    """
    budget = to_unity_gain_budget(config)
    n_x, n_y = equivalent_output_noise(budget)
    t_x, t_y = transfer_coefficients(n_x, n_y, config.input)
    fid = fidelity_general(n_x, n_y)
    crit = epr_criterion(budget)
    verdicts = {
        "fidelity_above_half": fid > FIDELITY_CLASSICAL_BOUND + VERDICT_MARGIN,
        "fidelity_above_two_thirds": fid > FIDELITY_CV_BOUND + VERDICT_MARGIN,
        "n_product_below_one": n_x * n_y < 1.0 - VERDICT_MARGIN,
        "t_sum_above_one": t_x + t_y > 1.0 + VERDICT_MARGIN,
        "epr_violation": crit.violated,
    }
    return CriteriaReport(
        N_X_out=n_x,
        N_Y_out=n_y,
        T_X_out=t_x,
        T_Y_out=t_y,
        fidelity=fid,
        cv_products=crit.products,
        verdicts=verdicts,
        t_sum_applicable=config.input.is_minimum_uncertainty,
    )


def random_budgets(count: int, seed) -> list[NoiseBudget]:
    """Draw valid random budgets, reproducibly for a fixed seed.

    Variances are log-uniform over [1e-2, 1e2]; draws whose noise pairs sit
    below the uncertainty products are rejected.  Correlations are uniform
    over the full range allowed by Cauchy-Schwarz.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = np.random.default_rng(seed)
    out: list[NoiseBudget] = []
    while len(out) < count:
        chunk = max(1024, 2 * (count - len(out)))
        v = 10.0 ** rng.uniform(-2.0, 2.0, size=(chunk, 4))
        keep = (v[:, 0] * v[:, 1] >= 1.0) & (v[:, 2] * v[:, 3] >= 1.0)
        v = v[keep]
        c_x = rng.uniform(-1.0, 1.0, size=len(v)) * np.sqrt(v[:, 0] * v[:, 2])
        c_y = rng.uniform(-1.0, 1.0, size=len(v)) * np.sqrt(v[:, 1] * v[:, 3])
        for row, cx, cy in zip(v, c_x, c_y):
            out.append(NoiseBudget(row[0], row[1], row[2], row[3], cx, cy))
            if len(out) == count:
                break
    return out


@dataclass(frozen=True)
class VerificationSummary:
    """Outcome of a randomized verification run of the criterion chain."""

    trials: int
    seed: int
    identity_max_rel_error: float
    bound_violations: int
    worst_margin: float
    budgets_drawn: int
    first_failure: InequalityTrace | None = None


def run_chain_verification(trials: int, seed: int) -> VerificationSummary:
    """Run the chain verifier over random non-violating budgets.

    The first trial is always the shot-noise budget (a fixed smoke test with
    noise product 4); the rest are random draws, skipping budgets that
    violate the conditional-variance criterion since the chain does not
    apply to them.  Returns the worst identity error and the worst margin
    ``n_product - 1`` seen.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    max_rel = 0.0
    worst_margin = np.inf
    violations = 0
    first_failure = None
    accepted = 0
    drawn = 0

    def check(b: NoiseBudget) -> None:
        nonlocal max_rel, worst_margin, violations, first_failure, accepted
        trace = inequality_trace(b)
        max_rel = max(max_rel, trace.identity_rel_error)
        worst_margin = min(worst_margin, trace.n_product - 1.0)
        bad = (
            trace.identity_rel_error > IDENTITY_RTOL
            or trace.n_value < 0.0
            or trace.n_product < 1.0 - VERDICT_MARGIN
        )
        if bad:
            violations += 1
            if first_failure is None:
                first_failure = trace
        accepted += 1

    check(shot_noise_budget())
    drawn += 1
    batch = 0
    while accepted < trials:
        budgets = random_budgets(
            min(4096, 2 * (trials - accepted)), seed=np.random.SeedSequence([seed, batch])
        )
        batch += 1
        for b in budgets:
            drawn += 1
            p1, p2 = _budget_products(b)
            if p1 < 1.0 - VERDICT_MARGIN or p2 < 1.0 - VERDICT_MARGIN:
                continue
            check(b)
            if accepted == trials:
                break
    return VerificationSummary(
        trials=accepted,
        seed=seed,
        identity_max_rel_error=max_rel,
        bound_violations=violations,
        worst_margin=float(worst_margin),
        budgets_drawn=drawn,
        first_failure=first_failure,
    )
