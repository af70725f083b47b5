"""Independent verification oracles for every closed form in the package.

Everything here recomputes a quantity by a second route — brute-force
enumeration, Monte Carlo, or dense linear algebra — and compares it against
the closed form used elsewhere.  The ``verify`` entry point runs the whole
named-check suite and returns a structured report; the CLI surfaces it.

All Monte-Carlo checks accept at 3 sigma (with a rule-of-three floor for
degenerate counts) and derive their generators from (master seed, check
name, batch index) so reruns and worker counts cannot change results.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds
from .core import (
    CycleType,
    Permutation,
    ProblemParams,
    SeedSpec,
    as_seedspec,
    cycle_decompose,
    cycle_type_count,
    enumerate_cycle_types,
    enumerate_permutations,
)
from .errors import DomainError, SizeCapError
from .gen import DatabasePair, sample_alt

#: n! enumeration cap for likelihood-ratio evaluation.
LIKELIHOOD_CAP = 8
#: cycle-type cap for the exact second moment.
SECOND_MOMENT_CAP = 10
#: cap for Monte-Carlo likelihood statistics.
MC_CAP = 6
#: largest cycle length for the circulant determinant check.
CIRCULANT_CAP = 50
#: fixed-point-set size above which subset enumeration is refused.
ENUMERATE_CAP = 12

_BATCH = 4096


@dataclass(frozen=True)
class LikelihoodSample:
    """One realized likelihood ratio, kept in both linear and log scale."""

    l_value: float
    log_l: float

    def __post_init__(self) -> None:
        if not self.l_value >= 0.0:
            raise DomainError("likelihood ratio must be nonnegative")

    @classmethod
    def from_log(cls, log_l: float) -> "LikelihoodSample":
        return cls(l_value=math.exp(log_l), log_l=log_l)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named verification check."""

    name: str
    passed: bool
    statistic: float
    reference: float
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "statistic", float(self.statistic))
        object.__setattr__(self, "reference", float(self.reference))


@dataclass(frozen=True)
class VerifyReport:
    """All check results from one ``verify`` run."""

    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)


# ---------------------------------------------------------------------------
# Likelihood ratio of the permutation mixture
# ---------------------------------------------------------------------------


def _log_ratio_matrix(x: np.ndarray, y: np.ndarray, rho: float) -> np.ndarray:
    """M[i, j] = log of the per-row density quotient when x_i pairs with y_j.

    Written in the symmetric form
    -(d/2) ln(1-rho^2) - (rho^2 (|x|^2 + |y|^2) - 2 rho <x, y>) / (2 (1-rho^2)),
    which equals the conditional-density quotient N_rho(y|x) / N(y) exactly.
    """
    d = x.shape[-1]
    u = 1.0 - rho * rho
    sx = np.sum(x * x, axis=-1)
    sy = np.sum(y * y, axis=-1)
    g = x @ np.swapaxes(y, -1, -2)
    quad = rho * rho * (sx[..., :, None] + sy[..., None, :]) - 2.0 * rho * g
    return -0.5 * d * math.log(u) - quad / (2.0 * u)


def _logsumexp(v: np.ndarray, axis=-1) -> np.ndarray:
    m = np.max(v, axis=axis, keepdims=True)
    out = m[..., 0] + np.log(np.sum(np.exp(v - m), axis=axis))
    return out


def _batched_log_l(xs: np.ndarray, ys: np.ndarray, rho: float) -> np.ndarray:
    """Vector of log likelihood ratios for a batch of (x, y) pairs."""
    n = xs.shape[-2]
    m = _log_ratio_matrix(xs, ys, rho)
    perms = enumerate_permutations(n)
    vals = m[..., np.arange(n)[None, :], perms].sum(axis=-1)
    return _logsumexp(vals, axis=-1) - math.log(math.factorial(n))


def log_likelihood_ratio(pair: DatabasePair, rho: float) -> float:
    """Log of the uniform permutation-mixture likelihood ratio, via log-sum-exp."""
    rho = float(rho)
    if not -1.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    if pair.n > LIKELIHOOD_CAP:
        raise SizeCapError(
            f"likelihood enumeration is capped at n = {LIKELIHOOD_CAP}, got {pair.n}"
        )
    return float(_batched_log_l(pair.x[None], pair.y[None], rho)[0])


def likelihood_sample(pair: DatabasePair, rho: float) -> LikelihoodSample:
    """The realized likelihood ratio at one sampled pair."""
    return LikelihoodSample.from_log(log_likelihood_ratio(pair, rho))


# ---------------------------------------------------------------------------
# Second moment via cycle types
# ---------------------------------------------------------------------------


def cycle_type_weight(t: CycleType, d: float, rho2: float) -> float:
    """Product over cycle lengths k of (1 - rho^(2k))^(-d N_k)."""
    if not 0.0 <= rho2 < 1.0:
        raise DomainError("rho2 must lie in [0, 1)")
    acc = 0.0
    for k, count in enumerate(t.counts, start=1):
        if count:
            acc += count * math.log1p(-(rho2**k))
    return math.exp(-d * acc)


def second_moment_reduction(
    type_counts, n: int, d: float, rho2: float
) -> float:
    """Shared reduction sum((count / n!) * weight) in the given sequence order.

    Both the cycle-type formula and the brute-force permutation census reduce
    through this function, so agreement between them is exact, not
    approximate.
    """
    total = math.factorial(n)
    acc = 0.0
    for t, count in type_counts:
        acc += (count / total) * cycle_type_weight(t, d, rho2)
    return acc


def exact_second_moment(n: int, d: float, rho2: float) -> float:
    """E_0 L^2 summed over cycle types with exact integer multiplicities."""
    if n > SECOND_MOMENT_CAP:
        raise SizeCapError(
            f"cycle-type second moment is capped at n = {SECOND_MOMENT_CAP}, got {n}"
        )
    types = enumerate_cycle_types(n)
    return second_moment_reduction(
        [(t, cycle_type_count(t)) for t in types], n, d, rho2
    )


def _mc_cap(n: int) -> None:
    if n > MC_CAP:
        raise SizeCapError(f"Monte-Carlo likelihood statistics are capped at n = {MC_CAP}")


def _mc_likelihood_reduce(n, d, rho, trials, seed, transform):
    """Stream batches of null draws through transform(log_l) and average."""
    spec = as_seedspec(seed, "oracle/likelihood-mc")
    total = 0.0
    total_sq = 0.0
    done = 0
    batch_index = 0
    while done < trials:
        size = min(_BATCH, trials - done)
        rng = spec.rng(batch_index)
        xs = rng.standard_normal((size, n, d))
        ys = rng.standard_normal((size, n, d))
        w = transform(_batched_log_l(xs, ys, rho))
        total += float(w.sum())
        total_sq += float((w * w).sum())
        done += size
        batch_index += 1
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    ci = 3.0 * math.sqrt(var / trials)
    return mean, ci


def mc_second_moment(n: int, d: int, rho: float, trials: int, seed):
    """Monte-Carlo E_0 L^2 with a 3-sigma sample-variance interval.

    The interval is honest only where E_0 L^4 is finite (small rho^2); see
    the caller notes in the tests for the divergence threshold.
    """
    from .core import MCEstimate

    _mc_cap(n)
    mean, ci = _mc_likelihood_reduce(
        n, d, rho, trials, seed, lambda log_l: np.exp(2.0 * log_l)
    )
    return MCEstimate(value=mean, ci_radius=ci, trials=trials)


def tv_risk_lower_bound_mc(n: int, d: int, rho: float, trials: int, seed):
    """Risk floor 1 - E_0 |L - 1| estimated by Monte Carlo."""
    from .core import MCEstimate

    _mc_cap(n)
    mean, ci = _mc_likelihood_reduce(
        n, d, rho, trials, seed, lambda log_l: np.abs(np.expm1(log_l))
    )
    return MCEstimate(value=1.0 - mean, ci_radius=ci, trials=trials)


# ---------------------------------------------------------------------------
# Gaussian quadratic-form MGFs
# ---------------------------------------------------------------------------


def _require_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12):
        raise DomainError("matrix must be symmetric")
    return a


def quadratic_mgf_check(R: np.ndarray, b: np.ndarray, trials: int, seed) -> CheckResult:
    """MC mean of exp(X'RX/2 + X'b) against the Gaussian closed form."""
    r = _require_symmetric(R)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    dim = r.shape[0]
    if b.shape[0] != dim:
        raise DomainError("b must have one entry per dimension of R")
    eye = np.eye(dim)
    try:
        np.linalg.cholesky(eye - r)
    except np.linalg.LinAlgError:
        raise DomainError("I - R must be positive definite") from None
    sign, logdet = np.linalg.slogdet(eye - r)
    closed = math.exp(0.5 * float(b @ np.linalg.solve(eye - r, b)) - 0.5 * logdet)

    spec = as_seedspec(seed, "oracle/quadratic-mgf")
    total = 0.0
    total_sq = 0.0
    done = 0
    batch = 0
    while done < trials:
        size = min(_BATCH, trials - done)
        x = spec.rng(batch).standard_normal((size, dim))
        vals = np.exp(0.5 * np.einsum("ti,ij,tj->t", x, r, x) + x @ b)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += size
        batch += 1
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    ci = 3.0 * math.sqrt(var / trials)
    return CheckResult(
        name="quadratic-mgf",
        passed=abs(mean - closed) <= ci + 1e-12,
        statistic=mean,
        reference=closed,
        detail=f"3-sigma half-width {ci:.3e} over {trials} draws",
    )


def pair_mgf_check(a: float, b: float, d: int, trials: int, seed) -> CheckResult:
    """MC and block-matrix routes to E exp(-a|X|^2 - a|Y|^2 + b X'Y).

    The closed form ((1+2a)^2 - b^2)^(-d/2) must agree with the generic
    quadratic-form formula applied to the 2d-dimensional block matrix, and
    the MC mean must agree with both.
    """
    if 1.0 + 2.0 * a <= 0.0 or abs(1.0 + 2.0 * a) <= abs(b):
        raise DomainError("need 1 + 2a > 0 and |1 + 2a| > |b| for convergence")
    closed = ((1.0 + 2.0 * a) ** 2 - b * b) ** (-0.5 * d)
    eye = np.eye(d)
    r = np.block([[-2.0 * a * eye, b * eye], [b * eye, -2.0 * a * eye]])
    inner = quadratic_mgf_check(r, np.zeros(2 * d), trials, seed)
    forms_agree = abs(inner.reference - closed) <= 1e-10 * closed
    return CheckResult(
        name="pair-mgf",
        passed=bool(inner.passed and forms_agree),
        statistic=inner.statistic,
        reference=closed,
        detail=f"block-form reference {inner.reference!r}; {inner.detail}",
    )


def circulant_det_check(cycle_len: int, rho: float) -> CheckResult:
    """Dense determinant of the cycle coupling matrix vs its closed form.

    The length-L circulant has first row (rho^2/(1-rho^4)) *
    (-2 rho^2, 1, 0, ..., 0, 1) with the two off-center entries folded
    together for L <= 2; det(I - R) must equal
    (1 - rho^(2L))^2 / (1 - rho^4)^L to 1e-8 relative.
    """
    if not 1 <= cycle_len <= CIRCULANT_CAP:
        raise SizeCapError(f"cycle length must lie in [1, {CIRCULANT_CAP}]")
    rho = float(rho)
    if not -1.0 < rho < 1.0:
        raise DomainError("|rho| must be < 1")
    r2 = rho * rho
    f = r2 / (1.0 - r2 * r2)
    length = cycle_len
    row = np.zeros(length)
    row[0] = -2.0 * r2 * f
    if length == 1:
        row[0] += 2.0 * f
    elif length == 2:
        row[1] = 2.0 * f
    else:
        row[1] = f
        row[-1] = f
    idx = (np.arange(length)[None, :] - np.arange(length)[:, None]) % length
    mat = np.eye(length) - row[idx]
    sign, logdet = np.linalg.slogdet(mat)
    target_log = 2.0 * math.log1p(-(r2**length)) - length * math.log1p(-(r2 * r2))
    rel = abs(math.expm1(logdet - target_log)) if sign > 0 else math.inf
    return CheckResult(
        name=f"circulant-det-L{cycle_len}",
        passed=rel <= 1e-8,
        statistic=float(sign * math.exp(logdet)),
        reference=math.exp(target_log),
        detail=f"relative error {rel:.3e}",
    )


# ---------------------------------------------------------------------------
# Concentration tail checks
# ---------------------------------------------------------------------------


def _tail_ci(count: int, trials: int) -> float:
    if count == 0 or count == trials:
        return 3.0 / trials
    p = count / trials
    return 3.0 * math.sqrt(p * (1.0 - p) / trials)


def laurent_massart_check(d: int, alpha, t_grid, trials: int, seed) -> CheckResult:
    """Lower-tail bound for weighted chi-square sums, on a grid of t values.

    Passes iff the empirical P(sum alpha_i (X_i^2 - 1) <= -t) never exceeds
    exp(-t^2 / (4 |alpha|_2^2)) by more than 3 sigma.
    """
    alpha = np.asarray(alpha, dtype=np.float64).reshape(-1)
    if alpha.shape[0] != d:
        raise DomainError("alpha must have d entries")
    if np.any(alpha < 0.0):
        raise DomainError("alpha entries must be nonnegative")
    ts = np.asarray(t_grid, dtype=np.float64).reshape(-1)
    if np.any(ts <= 0.0):
        raise DomainError("t grid must be positive")
    norm_sq = float(alpha @ alpha)
    spec = as_seedspec(seed, "oracle/laurent-massart")
    counts = np.zeros(ts.shape[0], dtype=np.int64)
    done = 0
    batch = 0
    while done < trials:
        size = min(_BATCH, trials - done)
        x = spec.rng(batch).standard_normal((size, d))
        s = (x * x - 1.0) @ alpha
        counts += (s[:, None] <= -ts[None, :]).sum(axis=0)
        done += size
        batch += 1
    bounds_grid = np.exp(-(ts**2) / (4.0 * norm_sq))
    worst = -math.inf
    for t, c, bnd in zip(ts, counts, bounds_grid):
        excess = c / trials - (bnd + _tail_ci(int(c), trials))
        worst = max(worst, float(excess))
    return CheckResult(
        name="tail-squares",
        passed=worst <= 0.0,
        statistic=worst,
        reference=0.0,
        detail=f"max (empirical - bound - 3sigma) over {ts.shape[0]} grid points",
    )


def aligned_cross_term_matrix(rho: float, block_dim: int) -> np.ndarray:
    """Quadratic-form matrix of the aligned inner-product deviation.

    The statistic sign(rho) sum <X_i, Y_i> over block_dim aligned
    coordinates is Z'AZ for the stacked Gaussian Z; A's off-diagonal part
    has eigenvalues +-sqrt(1-rho^2)/2, which is what its chaos tail bound
    uses.
    """
    rho = float(rho)
    if not 0.0 < abs(rho) < 1.0:
        raise DomainError("rho must be nonzero with |rho| < 1")
    u = math.sqrt(1.0 - rho * rho)
    eye = np.eye(block_dim)
    a = np.block([[2.0 * rho * eye, u * eye], [u * eye, np.zeros((block_dim, block_dim))]])
    return 0.5 * math.copysign(1.0, rho) * a


def gaussian_chaos_check(A: np.ndarray, t_grid, trials: int, seed) -> CheckResult:
    """Upper-tail bound for centered Gaussian quadratic forms on a t grid.

    The bound is 2 exp(-(t/16) min{t / (2 |alpha|_2^2), 1 / |alpha|_inf,
    t / (2 |lambda|_2^2), 1 / |lambda|_inf}) with alpha the diagonal of A
    and lambda the eigenvalues of its off-diagonal part.
    """
    a = _require_symmetric(A)
    dim = a.shape[0]
    ts = np.asarray(t_grid, dtype=np.float64).reshape(-1)
    if np.any(ts <= 0.0):
        raise DomainError("t grid must be positive")
    alpha = np.diag(a).copy()
    off = a - np.diag(alpha)
    lam = np.linalg.eigvalsh(off)

    def half_rate(v: np.ndarray, t: float) -> float:
        two_norm_sq = float(v @ v)
        inf_norm = float(np.abs(v).max()) if v.size else 0.0
        terms = []
        if two_norm_sq > 0.0:
            terms.append(t / (2.0 * two_norm_sq))
        if inf_norm > 0.0:
            terms.append(1.0 / inf_norm)
        return min(terms) if terms else math.inf

    trace = float(np.trace(a))
    spec = as_seedspec(seed, "oracle/gaussian-chaos")
    counts = np.zeros(ts.shape[0], dtype=np.int64)
    done = 0
    batch = 0
    while done < trials:
        size = min(_BATCH, trials - done)
        x = spec.rng(batch).standard_normal((size, dim))
        q = np.einsum("ti,ij,tj->t", x, a, x) - trace
        counts += (q[:, None] >= ts[None, :]).sum(axis=0)
        done += size
        batch += 1
    worst = -math.inf
    for t, c in zip(ts, counts):
        rate = min(half_rate(alpha, float(t)), half_rate(lam, float(t)))
        bnd = 0.0 if math.isinf(rate) else 2.0 * math.exp(-(float(t) / 16.0) * rate)
        excess = c / trials - (min(bnd, 1.0) + _tail_ci(int(c), trials))
        worst = max(worst, float(excess))
    return CheckResult(
        name="tail-chaos",
        passed=worst <= 0.0,
        statistic=worst,
        reference=0.0,
        detail=f"max (empirical - bound - 3sigma) over {ts.shape[0]} grid points",
    )


# ---------------------------------------------------------------------------
# Truncation event
# ---------------------------------------------------------------------------


def truncation_event_holds(
    pair: DatabasePair,
    perm: Permutation,
    schedule: "bounds.TruncationSchedule",
    rho_sign: float,
    method: str = "sorted",
    rng: np.random.Generator | None = None,
    sample_budget: int = 256,
) -> bool:
    """Whether the subset-truncation event holds at a realized pair.

    The event constrains every size-k subset (k >= k_star) of the
    permutation's fixed points: both row-norm sums must exceed w_k while the
    aligned inner-product sum stays below v_k.  ``sorted`` evaluates the
    extremal subsets exactly via sorted prefix sums; ``enumerate`` checks
    every subset (fixed-point sets up to 12); ``sample`` spot-checks random
    subsets with the supplied generator.
    """
    if rho_sign not in (1.0, -1.0, 1, -1):
        raise DomainError(f"rho_sign must be +1 or -1, got {rho_sign}")
    fixed = np.nonzero(perm.map == np.arange(perm.n))[0]
    n1 = fixed.shape[0]
    k_star = schedule.k_star
    if n1 < k_star:
        return True
    x = pair.x[fixed]
    y = pair.y[fixed]
    sx = np.sum(x * x, axis=1)
    sy = np.sum(y * y, axis=1)
    cross = float(rho_sign) * np.sum(x * y, axis=1)

    if method == "sorted":
        px = np.concatenate([[0.0], np.cumsum(np.sort(sx))])
        py = np.concatenate([[0.0], np.cumsum(np.sort(sy))])
        pc = np.concatenate([[0.0], np.cumsum(np.sort(cross)[::-1])])
        for k in range(k_star, n1 + 1):
            j = k - k_star
            if px[k] <= schedule.w[j] or py[k] <= schedule.w[j]:
                return False
            if pc[k] >= schedule.v[j]:
                return False
        return True

    if method == "enumerate":
        if n1 > ENUMERATE_CAP:
            raise SizeCapError(
                f"subset enumeration is capped at {ENUMERATE_CAP} fixed points"
            )
        for k in range(k_star, n1 + 1):
            j = k - k_star
            for subset in itertools.combinations(range(n1), k):
                idx = list(subset)
                if sx[idx].sum() <= schedule.w[j] or sy[idx].sum() <= schedule.w[j]:
                    return False
                if cross[idx].sum() >= schedule.v[j]:
                    return False
        return True

    if method == "sample":
        if rng is None:
            raise DomainError("method='sample' requires a generator")
        for k in range(k_star, n1 + 1):
            j = k - k_star
            for _ in range(sample_budget):
                idx = rng.choice(n1, size=k, replace=False)
                if sx[idx].sum() <= schedule.w[j] or sy[idx].sum() <= schedule.w[j]:
                    return False
                if cross[idx].sum() >= schedule.v[j]:
                    return False
        return True

    raise DomainError(f"unknown method {method!r}")


def truncated_first_moment_check(
    n: int,
    d: int,
    rho: float,
    k_star: int,
    margin: float,
    trials: int,
    seed,
) -> CheckResult:
    """Empirical truncation-event failure rate vs its union-bound deficit.

    Draws correlated pairs with the identity permutation planted and counts
    how often the event fails; the rate must stay below the closed-form
    deficit bound plus 3 sigma.  Requires a schedule whose rates are
    positive.
    """
    params = ProblemParams(n=n, d=d, rho=rho)
    schedule = bounds.truncation_schedule(n, d, params.rho2, k_star=k_star, margin=margin)
    rates = bounds.truncation_exponents(schedule, n, d, params.rho2)
    m = min(rates.deficit_norm, rates.deficit_cross)
    if not schedule.valid or m <= 0.0:
        return CheckResult(
            name="truncation-first-moment",
            passed=False,
            statistic=m,
            reference=0.0,
            detail="schedule preconditions failed; no deficit bound available",
        )
    deficit = 4.0 * math.exp(-k_star * m) / -math.expm1(-m)
    spec = as_seedspec(seed, "oracle/truncation-first-moment")
    identity = Permutation.identity(n)
    failures = 0
    for index in range(trials):
        pair = sample_alt(params, identity, spec.rng(index))
        if not truncation_event_holds(pair, identity, schedule, params.rho_sign):
            failures += 1
    rate = failures / trials
    ci = _tail_ci(failures, trials)
    return CheckResult(
        name="truncation-first-moment",
        passed=rate <= deficit + ci,
        statistic=rate,
        reference=deficit,
        detail=f"{failures} event failures in {trials} planted trials; 3-sigma {ci:.2e}",
    )


# ---------------------------------------------------------------------------
# Named verification suite
# ---------------------------------------------------------------------------

_REGISTRY: dict[str, object] = {}


def _check(name: str):
    def wrap(fn):
        _REGISTRY[name] = fn
        return fn

    return wrap


def _grid_excess(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """Largest violation of lhs >= rhs (positive means a violation)."""
    return float(np.max(rhs - lhs))


@_check("exponent-floor-fa")
def _chk_floor_fa(spec: SeedSpec) -> CheckResult:
    gam = np.linspace(1e-9, 1.0, 10_000)
    excess = _grid_excess(bounds.g_fa(gam), (math.sqrt(2.0) - 1.0) / 2.0 * gam)
    return CheckResult("exponent-floor-fa", excess <= 0.0, excess, 0.0,
                       "min over grid of g_fa(gamma) - (sqrt(2)-1)/2 * gamma")


@_check("exponent-floor-md")
def _chk_floor_md(spec: SeedSpec) -> CheckResult:
    r2 = np.linspace(1e-9, 1.0 - 1e-9, 10_000)
    vals = np.array([bounds.g_md(x, math.sqrt(x)) for x in r2])
    excess = _grid_excess(vals, r2 / 30.0)
    return CheckResult("exponent-floor-md", excess <= 0.0, excess, 0.0,
                       "balanced-tuning missed-detection exponent vs rho^2/30")


@_check("closed-min-quadratic")
def _chk_closed_min(spec: SeedSpec) -> CheckResult:
    rng = spec.rng(0)
    worst = 0.0
    for _ in range(100):
        d = float(rng.uniform(1.0, 200.0))
        a = float(rng.uniform(-300.0, 300.0))
        if abs(a) < 1e-3:
            continue
        gamma = (2.0 * a / d) ** 2
        closed = 0.5 * d * (math.log((math.sqrt(gamma + 1.0) + 1.0) / 2.0)
                            + 1.0 - math.sqrt(gamma + 1.0))

        def f(x: float) -> float:
            return a * x + 0.5 * d * math.log(1.0 / (1.0 - x * x))

        xs = np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, 10_000)
        vals = a * xs + 0.5 * d * np.log(1.0 / (1.0 - xs * xs))
        i = int(np.argmin(vals))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
        x_best, f_best = bounds._golden_min(f, float(lo), float(hi), rel_tol=1e-14)
        worst = max(worst, abs(f_best - closed))
    return CheckResult("closed-min-quadratic", worst <= 1e-8, worst, 0.0,
                       "closed-form minimum vs 1e4-point grid plus refinement")


@_check("sqrt-cube-envelope")
def _chk_sqrt_cube(spec: SeedSpec) -> CheckResult:
    x = np.linspace(0.0, 1.0, 10_000)
    mid = np.sqrt(1.0 + x**3) - 1.0
    lo = x**2 * (np.sqrt(1.0 + x) - 1.0)
    hi = x * (np.sqrt(1.0 + x) - 1.0)
    excess = max(_grid_excess(mid, lo), _grid_excess(hi, mid))
    return CheckResult("sqrt-cube-envelope", excess <= 1e-14, excess, 0.0,
                       "two-sided envelope of sqrt(1+x^3)-1 on [0, 1]")


@_check("balanced-tuning-slack")
def _chk_balanced_slack(spec: SeedSpec) -> CheckResult:
    x = np.linspace(1e-6, 1.0 - 1e-9, 10_000)
    lhs = (np.log((np.sqrt(1.0 - x + x * x) + 1.0 - x) / (np.sqrt(1.0 + x) + 1.0))
           + (x - np.sqrt(1.0 - x + x * x)) / (1.0 - x)
           + np.sqrt(1.0 + x))
    rhs = (math.sqrt(2.0) - 1.0) ** 2 * x
    excess = _grid_excess(rhs, lhs)
    return CheckResult("balanced-tuning-slack", excess <= 1e-12, excess, 0.0,
                       "exponent-difference envelope at gamma = rho^2")


@_check("sqrt-floor-family")
def _chk_sqrt_floor(spec: SeedSpec) -> CheckResult:
    rng = spec.rng(0)
    worst = -math.inf
    for _ in range(100):
        x0 = float(rng.uniform(1.0, 5.0))
        c = float(rng.uniform(0.0, 1.0)) * math.sqrt((x0 - 1.0) / (x0 + 1.0))
        xs = np.linspace(x0 * x0 - 1.0, x0 * x0 - 1.0 + 50.0, 100)
        worst = max(worst, _grid_excess(np.sqrt(1.0 + xs) - 1.0, c * np.sqrt(xs)))
    return CheckResult("sqrt-floor-family", worst <= 1e-12, worst, 0.0,
                       "sqrt(1+x) - 1 >= c sqrt(x) under the admissible-c condition")


@_check("chernoff-identity")
def _chk_chernoff_identity(spec: SeedSpec) -> CheckResult:
    rng = spec.rng(0)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 200))
        d = int(rng.integers(2, 2000))
        rho = float(rng.uniform(0.05, 0.95)) * (1.0 if rng.random() < 0.5 else -1.0)
        t = float(rng.uniform(0.05, 0.95)) * abs(rho) * n * d
        gamma = (2.0 * t / (d * n)) ** 2
        lam_fa, lam_md = bounds.chernoff_lambdas(t, n, d, rho)
        lhs_fa = -lam_fa * t - 0.5 * d * math.log1p(-((n * lam_fa) ** 2))
        rhs_fa = -0.5 * d * bounds.g_fa(gamma)
        lhs_md = lam_md * t + math.log(bounds.mgf_alt(-lam_md, n, d, rho))
        rhs_md = -0.5 * d * bounds.g_md(gamma, rho)
        scale = max(1.0, abs(rhs_fa), abs(rhs_md))
        worst = max(worst, abs(lhs_fa - rhs_fa) / scale, abs(lhs_md - rhs_md) / scale)
    return CheckResult("chernoff-identity", worst <= 1e-9, worst, 0.0,
                       "optimized exponential bounds equal the two closed exponents")


@_check("null-mgf-mc")
def _chk_null_mgf(spec: SeedSpec) -> CheckResult:
    n, d, lam = 3, 4, 0.05
    closed = bounds.mgf_null(lam, n, d)
    trials = 200_000
    total = 0.0
    total_sq = 0.0
    for batch in range(trials // _BATCH + 1):
        size = min(_BATCH, trials - batch * _BATCH)
        if size <= 0:
            break
        rng = spec.rng(batch)
        xs = rng.standard_normal((size, n, d))
        ys = rng.standard_normal((size, n, d))
        t_vals = np.einsum("tj,tj->t", xs.sum(axis=1), ys.sum(axis=1))
        vals = np.exp(lam * t_vals)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
    mean = total / trials
    ci = 3.0 * math.sqrt(max(total_sq / trials - mean * mean, 0.0) / trials)
    return CheckResult("null-mgf-mc", abs(mean - closed) <= ci, mean, closed,
                       f"3-sigma {ci:.2e} at lambda={lam}, n={n}, d={d}")


@_check("alt-mgf-mc")
def _chk_alt_mgf(spec: SeedSpec) -> CheckResult:
    n, d, rho, lam = 2, 3, 0.5, 0.05
    closed = bounds.mgf_alt(lam, n, d, rho)
    trials = 200_000
    total = 0.0
    total_sq = 0.0
    for batch in range(trials // _BATCH + 1):
        size = min(_BATCH, trials - batch * _BATCH)
        if size <= 0:
            break
        rng = spec.rng(batch)
        ys = rng.standard_normal((size, n, d))
        zs = rng.standard_normal((size, n, d))
        xs = rho * ys + math.sqrt(1.0 - rho * rho) * zs
        t_vals = np.einsum("tj,tj->t", xs.sum(axis=1), ys.sum(axis=1))
        vals = np.exp(lam * t_vals)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
    mean = total / trials
    ci = 3.0 * math.sqrt(max(total_sq / trials - mean * mean, 0.0) / trials)
    return CheckResult("alt-mgf-mc", abs(mean - closed) <= ci, mean, closed,
                       f"3-sigma {ci:.2e} at lambda={lam}, n={n}, d={d}, rho={rho}")


@_check("statistic-moments")
def _chk_stat_moments(spec: SeedSpec) -> CheckResult:
    params = ProblemParams(n=4, d=8, rho=0.5)
    identity = Permutation.identity(4)
    trials = 100_000
    t_null = np.empty(trials)
    t_alt = np.empty(trials)
    done = 0
    batch = 0
    while done < trials:
        size = min(_BATCH, trials - done)
        rng = spec.rng(batch)
        ys = rng.standard_normal((size, 4, 8))
        xs = rng.standard_normal((size, 4, 8))
        t_null[done:done + size] = np.einsum(
            "tj,tj->t", xs.sum(axis=1), ys.sum(axis=1))
        ys2 = rng.standard_normal((size, 4, 8))
        zs = rng.standard_normal((size, 4, 8))
        xs2 = 0.5 * ys2 + math.sqrt(0.75) * zs
        t_alt[done:done + size] = np.einsum(
            "tj,tj->t", xs2.sum(axis=1), ys2.sum(axis=1))
        done += size
        batch += 1
    n, d = 4, 8
    checks = [
        (abs(t_null.mean()), 3.0 * t_null.std() / math.sqrt(trials)),
        (abs(t_alt.mean() - abs(params.rho) * n * d),
         3.0 * t_alt.std() / math.sqrt(trials)),
        (abs(t_null.var() - n * n * d),
         3.0 * np.var((t_null - t_null.mean()) ** 2) ** 0.5 / math.sqrt(trials)),
    ]
    worst = max(stat - tol for stat, tol in checks)
    return CheckResult("statistic-moments", worst <= 0.0, worst, 0.0,
                       "null mean 0, correlated mean |rho|nd, null variance n^2 d")


@_check("likelihood-unit-mean")
def _chk_unit_mean(spec: SeedSpec) -> CheckResult:
    mean, ci = _mc_likelihood_reduce(2, 2, 0.4, 200_000, spec, np.exp)
    return CheckResult("likelihood-unit-mean", abs(mean - 1.0) <= ci, mean, 1.0,
                       f"3-sigma {ci:.2e}")


@_check("likelihood-single-row")
def _chk_single_row(spec: SeedSpec) -> CheckResult:
    rng = spec.rng(0)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 6))
        rho = float(rng.uniform(-0.9, 0.9))
        x = rng.standard_normal((1, d))
        y = rng.standard_normal((1, d))
        pair = DatabasePair(x=x, y=y)
        got = log_likelihood_ratio(pair, rho)
        u = 1.0 - rho * rho
        direct = (-0.5 * d * math.log(u)
                  - 0.5 * (float(np.sum((y - rho * x) ** 2)) / u - float(np.sum(y**2))))
        worst = max(worst, abs(got - direct) / max(1.0, abs(direct)))
    return CheckResult("likelihood-single-row", worst <= 1e-10, worst, 0.0,
                       "n=1 log ratio vs direct density quotient")


@_check("likelihood-logsumexp-naive")
def _chk_lse_naive(spec: SeedSpec) -> CheckResult:
    rng = spec.rng(0)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 5))
        d = int(rng.integers(1, 4))
        rho = float(rng.uniform(-0.7, 0.7))
        x = 0.5 * rng.standard_normal((n, d))
        y = 0.5 * rng.standard_normal((n, d))
        pair = DatabasePair(x=x, y=y)
        got = log_likelihood_ratio(pair, rho)
        m = _log_ratio_matrix(x, y, rho)
        perms = enumerate_permutations(n)
        naive = np.mean([
            math.prod(math.exp(m[i, p[i]]) for i in range(n)) for p in perms
        ])
        if naive > 0.0 and math.isfinite(naive):
            worst = max(worst, abs(math.log(naive) - got) / max(1.0, abs(got)))
    return CheckResult("likelihood-logsumexp-naive", worst <= 1e-8, worst, 0.0,
                       "log-sum-exp vs naive product evaluation where it is stable")


@_check("second-moment-census")
def _chk_second_moment_census(spec: SeedSpec) -> CheckResult:
    n, d, rho2 = 5, 3, 0.16
    via_formula = exact_second_moment(n, d, rho2)
    counts: dict[CycleType, int] = {}
    for p in enumerate_permutations(n):
        t = cycle_decompose(Permutation(p))
        counts[t] = counts.get(t, 0) + 1
    census = second_moment_reduction(
        [(t, counts[t]) for t in enumerate_cycle_types(n)], n, d, rho2
    )
    match = census == via_formula
    return CheckResult("second-moment-census", match, census, via_formula,
                       "cycle-type multiplicities from S_n census, identical reduction")


@_check("second-moment-mc")
def _chk_second_moment_mc(spec: SeedSpec) -> CheckResult:
    n, d, rho = 2, 2, 0.3
    est = mc_second_moment(n, d, rho, 100_000, spec)
    exact = exact_second_moment(n, d, rho * rho)
    return CheckResult("second-moment-mc", abs(est.value - exact) <= est.ci_radius,
                       est.value, exact, f"3-sigma {est.ci_radius:.2e}")


@_check("second-moment-dominance")
def _chk_second_moment_dom(spec: SeedSpec) -> CheckResult:
    worst = -math.inf
    for n in range(1, 11):
        for d in (1, 5, 20):
            for rho2 in (0.01, 0.1, 0.3, 0.6):
                val = exact_second_moment(n, d, rho2)
                cap = math.exp(-d * n * math.log1p(-rho2))
                worst = max(worst, (val - cap) / cap)
    return CheckResult("second-moment-dominance", worst <= 1e-12, worst, 0.0,
                       "E0 L^2 never exceeds (1-rho^2)^(-dn)")


@_check("jensen-consistency")
def _chk_jensen(spec: SeedSpec) -> CheckResult:
    n, d, rho = 3, 2, 0.3
    mean_abs, ci_abs = _mc_likelihood_reduce(
        n, d, rho, 100_000, spec, lambda log_l: np.abs(np.expm1(log_l)))
    exact = exact_second_moment(n, d, rho * rho)
    lhs = mean_abs * mean_abs
    rhs = exact - 1.0 + 5.0 * ci_abs
    return CheckResult("jensen-consistency", lhs <= rhs, lhs, rhs,
                       "(E|L-1|)^2 <= E L^2 - 1 with 5-sigma slack")


@_check("tv-vs-unconditional")
def _chk_tv_bound(spec: SeedSpec) -> CheckResult:
    n, d, rho2 = 4, 2, 0.001
    est = tv_risk_lower_bound_mc(n, d, math.sqrt(rho2), 100_000, spec)
    closed = bounds.unconditional_converse_risk(n, d, rho2)
    return CheckResult("tv-vs-unconditional", est.value >= closed - est.ci_radius,
                       est.value, closed, f"3-sigma {est.ci_radius:.2e}")


@_check("quadratic-mgf")
def _chk_quadratic_mgf(spec: SeedSpec) -> CheckResult:
    r = np.diag([0.3, -0.2])
    return quadratic_mgf_check(r, np.array([1.0, 0.0]), 400_000, spec)


@_check("pair-mgf")
def _chk_pair_mgf(spec: SeedSpec) -> CheckResult:
    return pair_mgf_check(0.2, 0.3, 3, 400_000, spec)


@_check("circulant-dets")
def _chk_circulant(spec: SeedSpec) -> CheckResult:
    worst = ""
    ok = True
    for length in (1, 2, 3, 7, 50):
        for rho in (0.3, 0.5, 0.9):
            res = circulant_det_check(length, rho)
            if not res.passed:
                ok = False
                worst = res.name
    return CheckResult("circulant-dets", ok, 0.0, 0.0,
                       worst or "all cycle lengths in {1,2,3,7,50} matched")


@_check("tail-squares")
def _chk_tail_squares(spec: SeedSpec) -> CheckResult:
    alpha = np.concatenate([np.ones(30), np.linspace(0.1, 2.0, 20)])
    return laurent_massart_check(50, alpha, [1.0, 5.0, 10.0, 20.0], 400_000, spec)


@_check("tail-chaos")
def _chk_tail_chaos(spec: SeedSpec) -> CheckResult:
    a = aligned_cross_term_matrix(0.6, 5)
    res = gaussian_chaos_check(a, [1.0, 4.0, 8.0, 16.0], 400_000, spec)
    diag = gaussian_chaos_check(
        np.diag(np.linspace(0.2, 1.0, 6)), [2.0, 6.0, 12.0], 200_000,
        spec.stream("diag"))
    passed = res.passed and diag.passed
    return CheckResult("tail-chaos", passed, max(res.statistic, diag.statistic), 0.0,
                       "cross-term block matrix and diagonal special case")


@_check("truncation-event-methods")
def _chk_trunc_methods(spec: SeedSpec) -> CheckResult:
    n, d, rho = 8, 30, 0.4
    params = ProblemParams(n=n, d=d, rho=rho)
    schedule = bounds.truncation_schedule(n, d, params.rho2, k_star=3, margin=0.5)
    # A second, artificially tightened schedule so both outcomes occur.
    tightened = dataclasses.replace(schedule, w=schedule.w * 6.0, v=schedule.v * 0.22)
    identity = Permutation.identity(n)
    disagreements = 0
    holds = 0
    for index in range(200):
        rng = spec.rng(index)
        pair = sample_alt(params, identity, rng)
        for sched in (schedule, tightened):
            a = truncation_event_holds(pair, identity, sched, 1.0, method="sorted")
            b = truncation_event_holds(pair, identity, sched, 1.0, method="enumerate")
            disagreements += int(a != b)
            holds += int(a)
    return CheckResult("truncation-event-methods", disagreements == 0,
                       float(disagreements), 0.0,
                       f"sorted vs enumerate on 200 draws ({holds}/400 events held)")


@_check("truncation-first-moment")
def _chk_trunc_first_moment(spec: SeedSpec) -> CheckResult:
    return truncated_first_moment_check(
        n=12, d=40, rho=math.sqrt(0.2), k_star=4, margin=1.0, trials=2000, seed=spec)


@_check("truncated-vs-unconditional")
def _chk_trunc_vs_uncond(spec: SeedSpec) -> CheckResult:
    worst = -math.inf
    for n in (100, 1000, 10_000):
        for d in (100, 1000):
            for rho2 in (1e-8, 1e-6, 1e-4, 1e-2):
                t = bounds.truncated_converse_risk(n, d, rho2)
                u = bounds.unconditional_converse_risk(n, d, rho2)
                worst = max(worst, u - t)
    return CheckResult("truncated-vs-unconditional", worst <= 0.0, worst, 0.0,
                       "truncated converse is never below the unconditional one")


@_check("curve-ordering")
def _chk_curve_ordering(spec: SeedSpec) -> CheckResult:
    points, notes = bounds.curve_points(
        "d", np.geomspace(100.0, 10_000.0, 5), n=10_000.0, target_risk=0.1)
    bad = 0
    for p in points:
        if p.rho2_det_ach is not None and p.rho2_det_conv is not None:
            if p.rho2_det_conv > p.rho2_det_ach:
                bad += 1
    return CheckResult("curve-ordering", bad == 0, float(bad), 0.0,
                       f"{len(points)} grid points; notes: {len(notes)}")


#: Deterministic execution order of the verification suite.
VERIFY_CHECKS: tuple[str, ...] = tuple(_REGISTRY)


def _run_named(args: tuple[str, int]) -> CheckResult:
    name, master = args
    fn = _REGISTRY[name]
    return fn(SeedSpec(master_seed=master, stream_label=f"verify/{name}"))


def verify(seed: int = 0, workers: int = 1) -> VerifyReport:
    """Run every named oracle check with generators derived from one seed.

    The report is identical for any worker count: each check seeds itself
    from (seed, its own name) and results are collected in registry order.
    """
    master = int(seed)
    tasks = [(name, master) for name in VERIFY_CHECKS]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_named, tasks))
    else:
        results = [_run_named(t) for t in tasks]
    return VerifyReport(checks=tuple(results))
