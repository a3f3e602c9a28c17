"""Analytic load thresholds for k-ary and irregular cuckoo hashing.

Placing n keys with k random candidate buckets each into m buckets is the
same problem as orienting a random k-uniform hypergraph with n hyperedges on
m nodes.  Whether that succeeds is controlled by the ell-core left over by
the peeling process, and the core in turn is controlled by a scalar Poisson
fixed point: a node of the core sees Po(beta) incident surviving hyperedges,
where beta solves

    u    = Pr[Po(beta) >= ell - 1]          (survival prob. of a member node)
    beta = c * k * u**(k-1)                  (regular, every edge has size k)
    beta = c * deriv(u)                      (irregular, deriv = Lambda'(u))

with c = n/m the overall edge density and Lambda the generating function of
the edge-size distribution.  Solving these for c as a function of beta gives
a convex curve whose minimum is the core appearance density, and the load
threshold is the density at which the core's internal edge density crosses
ell - 1.

Everything here is a pure function of its arguments; no global state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import NumericalError, SubcriticalDensityError, UnsupportedCaseError

__all__ = [
    "DegreeSpec",
    "CorePrediction",
    "ThresholdResult",
    "poisson_tail",
    "branch_density",
    "core_appearance",
    "beta_for_density",
    "predict_core",
    "orientation_threshold",
    "mixed_branch_density",
    "mixed_fixed_point",
    "mixed_core_appearance",
    "mixed_predict_core",
    "mixed_threshold",
    "optimal_distribution",
]

# Maximum edge size a DegreeSpec may carry.  Larger sizes add nothing (their
# thresholds are indistinguishable from 1 in double precision) and would blow
# up the exact-arithmetic priorities used by the orientation module.
MAX_DEGREE = 64

# Above this rate the plain pmf recurrence underflows at pmf(0) = exp(-beta),
# so the tail switches to summation of scaled terms anchored in log space.
_LOG_SCALE_CUTOFF = 700.0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# degree distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeSpec:
    """A probability distribution over edge sizes (choices per key).

    ``weights[k]`` is the probability that a key draws k candidate buckets.
    Only sizes >= 2 are allowed: keys with a single choice collide by the
    birthday paradox and are excluded from the model.
    """

    weights: Mapping[int, float]

    def __post_init__(self) -> None:
        cleaned: dict[int, float] = {}
        for k, w in self.weights.items():
            if not isinstance(k, int) or isinstance(k, bool):
                raise ValueError(f"degree {k!r} is not an integer")
            if not (2 <= k <= MAX_DEGREE):
                raise ValueError(f"degree {k} outside supported range [2, {MAX_DEGREE}]")
            if not (0.0 <= w <= 1.0) or not math.isfinite(w):
                raise ValueError(f"weight for degree {k} must lie in [0, 1], got {w}")
            if w > 0.0:
                cleaned[k] = float(w)
        if not cleaned:
            raise ValueError("degree distribution has no positive weight")
        total = math.fsum(cleaned.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total!r}, expected 1 within 1e-12")
        object.__setattr__(self, "weights", dict(sorted(cleaned.items())))

    @classmethod
    def point_mass(cls, k: int) -> "DegreeSpec":
        return cls({k: 1.0})

    @property
    def mean(self) -> float:
        """Average number of choices per key (kappa)."""
        return math.fsum(k * w for k, w in self.weights.items())

    @property
    def max_degree(self) -> int:
        return max(self.weights)

    def as_point_mass(self) -> int | None:
        """The single supported degree, or None if the support is wider."""
        if len(self.weights) == 1:
            return next(iter(self.weights))
        return None

    def generating(self, x: float) -> float:
        """Lambda(x) = sum_k weight_k * x**k."""
        return math.fsum(w * x**k for k, w in self.weights.items())

    def derivative(self, x: float) -> float:
        """Lambda'(x) = sum_k k * weight_k * x**(k-1)."""
        return math.fsum(k * w * x ** (k - 1) for k, w in self.weights.items())

    def to_json(self) -> str:
        return json.dumps({"weights": {str(k): w for k, w in self.weights.items()}})

    @classmethod
    def from_json(cls, text: str) -> "DegreeSpec":
        data = json.loads(text)
        if isinstance(data, dict) and "weights" in data:
            data = data["weights"]
        if not isinstance(data, dict):
            raise ValueError("degree spec JSON must be an object of degree -> weight")
        return cls({int(k): float(w) for k, w in data.items()})


def optimal_distribution(kappa: float) -> DegreeSpec:
    """Success-maximising edge-size distribution with mean exactly ``kappa``.

    All the mass sits on floor(kappa) and floor(kappa)+1; for integral kappa
    this degenerates to a point mass.  Spreading mass any wider only hurts.
    """
    if not math.isfinite(kappa) or kappa < 2.0:
        raise ValueError(f"mean number of choices must be >= 2, got {kappa}")
    base = math.floor(kappa)
    frac = kappa - base
    if frac == 0.0:
        return DegreeSpec.point_mass(int(base))
    return DegreeSpec({int(base): 1.0 - frac, int(base) + 1: frac})


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorePrediction:
    """Asymptotic ell-core make-up at a given supercritical edge density.

    node_fraction and edge_fraction are the surviving shares of nodes and
    edges; edge_density is edges-per-node inside the core.
    """

    beta: float
    node_fraction: float
    edge_fraction: float
    edge_density: float


@dataclass(frozen=True)
class ThresholdResult:
    """Appearance point and load threshold for one parameter set.

    c_star/beta_star locate the core appearance (minimum of the density
    curve); c_threshold is where the core's edge density reaches ell - 1,
    i.e. the load threshold.  residual is the width of the final bisection
    bracket mapped into density units.
    """

    c_star: float
    beta_star: float
    c_threshold: float
    residual: float


# ---------------------------------------------------------------------------
# Poisson tails
# ---------------------------------------------------------------------------

def poisson_tail(beta: float, j: int) -> float:
    """Pr[Po(beta) >= j], accurate in relative terms even deep in the tail.

    For j <= beta the tail is Theta(1) and is formed as 1 minus the lower pmf
    sum (pmf(i+1) = pmf(i) * beta/(i+1) starting from exp(-beta)).  For
    j > beta the same recurrence is summed upward from pmf(j) instead, which
    avoids the catastrophic cancellation a complement would suffer.
    """
    if not math.isfinite(beta) or beta < 0.0:
        raise ValueError(f"poisson rate must be finite and >= 0, got {beta}")
    if not isinstance(j, int) or isinstance(j, bool):
        raise ValueError(f"tail index must be an integer, got {j!r}")
    if j < 0:
        raise ValueError(f"tail index must be >= 0, got {j}")
    if j == 0:
        return 1.0
    if beta == 0.0:
        return 0.0
    if beta > _LOG_SCALE_CUTOFF:
        return _poisson_tail_scaled(beta, j)

    if j <= beta:
        pmf = math.exp(-beta)
        cdf = pmf
        for i in range(1, j):
            pmf *= beta / i
            cdf += pmf
        return 1.0 - cdf if cdf < 1.0 else 0.0

    pmf = math.exp(-beta)
    for i in range(1, j + 1):
        pmf *= beta / i
    if pmf == 0.0:
        # true tail is below the smallest double; report 0 rather than noise
        return 0.0
    total = pmf
    term = pmf
    i = j
    while term > total * 1e-18:
        i += 1
        term *= beta / i  # beta/i < 1 here, so the series is geometric-ish
        total += term
    return total


def _poisson_tail_scaled(beta: float, j: int) -> float:
    """Tail for beta > 700: sum pmf ratios scaled by the anchor term's log."""
    if j <= beta:
        # CDF(j-1), anchored at its largest term i = j-1 (pmf rises to the mode)
        log_anchor = (j - 1) * math.log(beta) - beta - math.lgamma(j)
        total = 1.0
        term = 1.0
        for i in range(j - 1, 0, -1):
            term *= i / beta
            total += term
            if term <= total * 1e-18:
                break
        log_cdf = log_anchor + math.log(total)
        cdf = math.exp(log_cdf) if log_cdf > -745.0 else 0.0
        return 1.0 - cdf if cdf < 1.0 else 0.0
    log_anchor = j * math.log(beta) - beta - math.lgamma(j + 1)
    total = 1.0
    term = 1.0
    i = j
    while True:
        i += 1
        term *= beta / i
        total += term
        if term <= total * 1e-18:
            break
    log_tail = log_anchor + math.log(total)
    return math.exp(log_tail) if log_tail > -745.0 else 0.0


# ---------------------------------------------------------------------------
# the density-vs-beta curve, regular case
# ---------------------------------------------------------------------------

def _check_core_params(k: int, ell: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"edge size k must be an integer >= 2, got {k!r}")
    if not isinstance(ell, int) or ell < 2:
        raise ValueError(f"core order ell must be an integer >= 2, got {ell!r}")


def _check_supported(k: int, ell: int) -> None:
    _check_core_params(k, ell)
    if k + ell <= 4:
        raise UnsupportedCaseError(
            "k=2, ell=2 (2-cores of plain graphs, i.e. standard 2-ary cuckoo "
            "hashing) is outside this analysis; need k + ell > 4"
        )


def branch_density(k: int, ell: int, beta: float) -> float:
    """Edge density c at which ``beta`` solves the peeling fixed point.

    Equals beta / (k * Pr[Po(beta) >= ell-1]**(k-1)).  Convex in beta with a
    single interior minimum; its upper branch inverts to beta_for_density.
    """
    _check_core_params(k, ell)
    if not (beta > 0.0) or not math.isfinite(beta):
        raise ValueError(f"beta must be finite and > 0, got {beta}")
    u = poisson_tail(beta, ell - 1)
    denom = k * u ** (k - 1)
    if denom == 0.0:
        return math.inf
    return beta / denom


def _double_until_increasing(f, hi: float, what: str) -> float:
    while f(2.0 * hi) <= f(hi):
        hi *= 2.0
        if hi > 2.0**40:
            raise NumericalError(f"could not bracket an increasing branch of {what}")
    return 2.0 * hi


def _golden_min(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section minimum of a unimodal f on [lo, hi], bracket width tol."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def core_appearance(k: int, ell: int) -> tuple[float, float]:
    """Appearance point of the ell-core: (beta_star, c_star).

    c_star is the minimum of the density curve; below it the core is empty
    with high probability, above it the core has linear size.
    """
    _check_supported(k, ell)
    f = lambda b: branch_density(k, ell, b)
    hi = _double_until_increasing(f, 4.0, f"branch_density(k={k}, ell={ell})")
    beta_star = _golden_min(f, 1e-6, hi, tol=1e-12)
    return beta_star, f(beta_star)


def beta_for_density(k: int, ell: int, c: float) -> float:
    """The unique beta above beta_star with branch_density(...) == c.

    Only defined for supercritical densities c > c_star; the curve is
    monotone increasing on that branch, so plain bisection suffices.
    """
    beta_star, c_star = core_appearance(k, ell)
    if not (c > c_star):
        raise SubcriticalDensityError(
            f"density c={c} is not above the core appearance point "
            f"c_star={c_star:.12f} for (k={k}, ell={ell})"
        )
    f = lambda b: branch_density(k, ell, b)
    lo, hi = beta_star, max(2.0 * beta_star, 1.0)
    while f(hi) < c:
        hi *= 2.0
        if hi > 2.0**40:
            raise NumericalError(f"no upper bracket for beta at c={c} (k={k}, ell={ell})")
    for _ in range(200):
        if hi - lo <= 1e-12:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) < c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _core_edge_density(k: int, ell: int, beta: float) -> float:
    return beta * poisson_tail(beta, ell - 1) / (k * poisson_tail(beta, ell))


def predict_core(k: int, ell: int, c: float) -> CorePrediction:
    """Asymptotic ell-core sizes of a random k-uniform hypergraph at density c."""
    beta = beta_for_density(k, ell, c)
    u = poisson_tail(beta, ell - 1)
    return CorePrediction(
        beta=beta,
        node_fraction=poisson_tail(beta, ell),
        edge_fraction=u**k,
        edge_density=_core_edge_density(k, ell, beta),
    )


def _assert_nondecreasing(f, lo: float, hi: float, what: str, samples: int = 33) -> None:
    # The theory never proves the supercritical core density monotone in c;
    # bisection relies on it, so check it on the bracket instead of assuming.
    xs = [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]
    prev = f(xs[0])
    for x in xs[1:]:
        cur = f(x)
        if cur < prev - 1e-9 * max(1.0, abs(prev)):
            raise NumericalError(
                f"{what} is not monotone on the bracket: f({x})={cur} < {prev}"
            )
        prev = cur


def _threshold_from_branch(density, curve, beta_star, c_star, ell, what):
    """Shared root-solve: find beta on the upper branch with density == ell-1."""
    target = float(ell - 1)
    dens_at_min = density(beta_star)
    if dens_at_min >= target - 1e-12:
        # Degenerate boundary case: the core is born already at the critical
        # edge density (happens for mixtures rich in size-2 edges).  The
        # threshold then coincides with the appearance point.
        residual = abs(curve(2.0 * beta_star) - c_star)
        return ThresholdResult(
            c_star=c_star, beta_star=beta_star, c_threshold=c_star, residual=residual
        )
    hi = max(2.0 * beta_star, 4.0)
    while density(hi) <= target:
        hi *= 2.0
        if hi > 2.0**40:
            raise NumericalError(
                f"{what}: core density never reaches {target} "
                f"(c_star={c_star}, beta_star={beta_star})"
            )
    _assert_nondecreasing(density, beta_star, hi, f"{what}: core edge density")
    lo = beta_star
    for _ in range(300):
        if hi - lo <= 1e-13:
            break
        mid = 0.5 * (lo + hi)
        if density(mid) < target:
            lo = mid
        else:
            hi = mid
    c_lo, c_hi = curve(lo), curve(hi)
    residual = abs(c_hi - c_lo)
    if residual > 1e-10:
        raise NumericalError(
            f"{what}: bisection stalled, bracket [{c_lo}, {c_hi}] wider than 1e-10"
        )
    return ThresholdResult(
        c_star=c_star,
        beta_star=beta_star,
        c_threshold=curve(0.5 * (lo + hi)),
        residual=residual,
    )


def orientation_threshold(k: int, ell: int) -> ThresholdResult:
    """Load threshold: the density where the ell-core's edge density hits ell-1.

    For ell=2 this is the threshold for k-ary cuckoo hashing with one key per
    bucket; for larger ell it marks the same crossing for buckets of capacity
    ell-1, where simulation backs it as the placement threshold even though
    no proof is known.
    """
    beta_star, c_star = core_appearance(k, ell)
    return _threshold_from_branch(
        density=lambda b: _core_edge_density(k, ell, b),
        curve=lambda b: branch_density(k, ell, b),
        beta_star=beta_star,
        c_star=c_star,
        ell=ell,
        what=f"orientation_threshold(k={k}, ell={ell})",
    )


# ---------------------------------------------------------------------------
# irregular (mixed) edge sizes
# ---------------------------------------------------------------------------

def mixed_branch_density(spec: DegreeSpec, ell: int, beta: float) -> float:
    """Mixed-size analogue of branch_density: c = beta / Lambda'(u)."""
    if not isinstance(ell, int) or ell < 2:
        raise ValueError(f"core order ell must be an integer >= 2, got {ell!r}")
    if not (beta > 0.0) or not math.isfinite(beta):
        raise ValueError(f"beta must be finite and > 0, got {beta}")
    denom = spec.derivative(poisson_tail(beta, ell - 1))
    if denom == 0.0:
        return math.inf
    return beta / denom


def mixed_core_appearance(spec: DegreeSpec, ell: int) -> tuple[float, float]:
    """Appearance point (beta_star, c_star) for a mixed-size hypergraph.

    With size-2 edges present and ell=2 the minimum can sit at beta -> 0
    (the core grows continuously from nothing); the tiny positive bracket
    edge stands in for that boundary.
    """
    f = lambda b: mixed_branch_density(spec, ell, b)
    hi = _double_until_increasing(f, 4.0, f"mixed_branch_density(ell={ell})")
    beta_star = _golden_min(f, 1e-10, hi, tol=1e-12)
    return beta_star, f(beta_star)


def _mixed_core_edge_density(spec: DegreeSpec, ell: int, beta: float) -> float:
    u = poisson_tail(beta, ell - 1)
    return beta * spec.generating(u) / (spec.derivative(u) * poisson_tail(beta, ell))


def mixed_predict_core(spec: DegreeSpec, ell: int, c: float) -> CorePrediction:
    """Asymptotic ell-core sizes for a mixed-size hypergraph at density c."""
    beta_star, c_star = mixed_core_appearance(spec, ell)
    if not (c > c_star):
        raise SubcriticalDensityError(
            f"density c={c} is not above the appearance point c_star={c_star:.12f}"
        )
    f = lambda b: mixed_branch_density(spec, ell, b)
    lo, hi = beta_star, max(2.0 * beta_star, 1.0)
    while f(hi) < c:
        hi *= 2.0
        if hi > 2.0**40:
            raise NumericalError(f"no upper bracket for beta at c={c}")
    for _ in range(200):
        if hi - lo <= 1e-12:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) < c:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    u = poisson_tail(beta, ell - 1)
    return CorePrediction(
        beta=beta,
        node_fraction=poisson_tail(beta, ell),
        edge_fraction=spec.generating(u),
        edge_density=_mixed_core_edge_density(spec, ell, beta),
    )


def mixed_fixed_point(spec: DegreeSpec, c: float, ell: int) -> float:
    """Limit deletion probability p of the peeling process, by plain iteration.

    Iterates p <- Pr[Po(c * Lambda'(1-p)) <= ell-2] from p=0; the iterates
    increase monotonically towards the smallest fixed point.  Returns 1.0
    once 1-p drops below 1e-13 (the graph peels away completely).
    """
    if not (c > 0.0) or not math.isfinite(c):
        raise ValueError(f"edge density c must be finite and > 0, got {c}")
    if not isinstance(ell, int) or ell < 1:
        raise ValueError(f"ell must be an integer >= 1, got {ell!r}")
    p = 0.0
    for _ in range(10**6):
        lam = c * spec.derivative(1.0 - p)
        p_next = 1.0 - poisson_tail(lam, ell - 1)
        if p_next < p - 1e-15:
            raise NumericalError(
                f"fixed-point iterates decreased: {p_next} after {p} (c={c}, ell={ell})"
            )
        if 1.0 - p_next < 1e-13:
            return 1.0
        if abs(p_next - p) < 1e-13:
            return p_next
        p = p_next
    return p


def mixed_threshold(spec: DegreeSpec, ell: int) -> ThresholdResult:
    """Load threshold for an irregular choice distribution.

    Same crossing condition as orientation_threshold but with the mixture's
    generating function in place of the pure power.  The root is found on
    the supercritical beta branch, where the map is smooth and monotone;
    this stays exact even in the boundary regime (mean close to 2) where
    the plain fixed-point iteration slows down beyond usefulness.
    """
    if ell == 2 and spec.mean <= 2.0:
        raise UnsupportedCaseError(
            f"mean number of choices must exceed 2 for ell=2, got {spec.mean}; "
            "a pure size-2 mixture is standard cuckoo hashing, outside this analysis"
        )
    k = spec.as_point_mass()
    if k is not None:
        _check_supported(k, ell)
    beta_star, c_star = mixed_core_appearance(spec, ell)
    return _threshold_from_branch(
        density=lambda b: _mixed_core_edge_density(spec, ell, b),
        curve=lambda b: mixed_branch_density(spec, ell, b),
        beta_star=beta_star,
        c_star=c_star,
        ell=ell,
        what=f"mixed_threshold(mean={spec.mean}, ell={ell})",
    )
