"""Failure-rate sweeps across an edge-density grid, plus the sigmoid fit.

A sweep fixes (m, edge-size law, ell), walks a grid of densities c around a
point of interest (normally an analytic threshold), runs `trials` random
instances per grid point, and tabulates per-method failure rates:

* selfless  - greedy orientation fails
* matching  - no orientation exists at all (exact matching)
* xorsat    - the induced random XOR system is unsatisfiable
* peel      - the ell-core is non-empty (appearance sweeps)

All methods at one (grid, trial) coordinate see the *same* hypergraph: the
instance seed is mix64-derived from (master_seed, grid_index, trial_index)
only, so method curves are paired.  Fitting 1/(1+exp(-(c-a)/b)) to a rate
curve then estimates the empirical transition point a.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Iterable, Sequence

from . import _kernels
from .hypergraph import Hypergraph, peel, sample_mixed, sample_regular
from .orientation import matching_orient, selfless_orient
from .seeding import mix64
from .thresholds import DegreeSpec
from .xorsat import from_hypergraph, rank_and_solve

__all__ = [
    "METHODS",
    "SweepConfig",
    "SweepRecord",
    "SweepResult",
    "SigmoidFit",
    "instance_seed",
    "mix64",
    "run_sweep",
    "sigmoid",
    "fit_sigmoid",
    "format_records_csv",
    "parse_records_csv",
]

METHODS = ("selfless", "matching", "xorsat", "peel")

CSV_HEADER = "c,n,method,trials,failures,rate,millis"

# Domain tags folded into the instance seed so that the greedy tie-break
# stream and the XOR right-hand sides are independent of each other while
# still being functions of (master_seed, grid, trial) alone.
_TAG_SELFLESS = 0x53454C46  # "SELF"
_TAG_XORSAT = 0x584F5253  # "XORS"


def instance_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    """Seed of the instance at one sweep coordinate: chained mix64 calls.

    seed = mix64(mix64(mix64(master_seed) ^ grid_index) ^ trial_index)
    """
    return mix64(mix64(mix64(master_seed) ^ grid_index) ^ trial_index)


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep; every run is a pure function of this.

    Exactly one of k (regular) or spec (mixed sizes) must be given.  The
    grid has floor(2*half_width/step)+1 points centred on `center`; each
    point uses n = round(c*m) edges.
    """

    m: int
    ell: int
    center: float
    half_width: float
    step: float
    trials: int
    master_seed: int
    k: int | None = None
    spec: DegreeSpec | None = None
    methods: tuple[str, ...] = ("selfless",)
    jobs: int = 1

    def __post_init__(self) -> None:
        if (self.k is None) == (self.spec is None):
            raise ValueError("exactly one of k or spec must be set")
        if self.k is not None and self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.ell < 1:
            raise ValueError(f"ell must be >= 1, got {self.ell}")
        if not (self.step > 0.0):
            raise ValueError(f"step must be > 0, got {self.step}")
        if self.half_width < 0.0:
            raise ValueError(f"half_width must be >= 0, got {self.half_width}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if not self.methods:
            raise ValueError("at least one method required")
        bad = [meth for meth in self.methods if meth not in METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}; choose from {METHODS}")
        object.__setattr__(self, "methods", tuple(self.methods))

    def grid(self) -> list[float]:
        count = math.floor(2.0 * self.half_width / self.step + 1e-9) + 1
        return [self.center - self.half_width + i * self.step for i in range(count)]

    def edges_for(self, c: float) -> int:
        return int(round(c * self.m))


@dataclass(frozen=True)
class SweepRecord:
    """One (grid point, method) cell of a sweep."""

    c: float
    n: int
    method: str
    trials: int
    failures: int
    rate: float
    millis: float


@dataclass(frozen=True)
class SweepResult:
    """All records of a sweep in grid order, plus paired-run diagnostics.

    dominance_violations counts instances where the greedy succeeded while
    exact matching failed -- impossible if both are correct, so it should
    always be 0; it is None when the sweep did not run both methods.
    """

    records: list[SweepRecord]
    dominance_violations: int | None = None


def _sample(cfg: SweepConfig, n: int, seed: int) -> Hypergraph:
    if cfg.k is not None:
        return sample_regular(cfg.m, n, cfg.k, seed)
    return sample_mixed(cfg.m, n, cfg.spec, seed)


def _run_grid_point(cfg: SweepConfig, grid_index: int, c: float):
    n = cfg.edges_for(c)
    failures = {meth: 0 for meth in cfg.methods}
    millis = {meth: 0.0 for meth in cfg.methods}
    paired = "selfless" in cfg.methods and "matching" in cfg.methods
    violations = 0
    for trial in range(cfg.trials):
        seed = instance_seed(cfg.master_seed, grid_index, trial)
        g = _sample(cfg, n, seed)
        failed: dict[str, bool] = {}
        for meth in cfg.methods:
            t0 = time.perf_counter()
            if meth == "selfless":
                ok = selfless_orient(g, cfg.ell, mix64(seed ^ _TAG_SELFLESS)).success
            elif meth == "matching":
                ok = matching_orient(g, cfg.ell).success
            elif meth == "xorsat":
                system = from_hypergraph(g, mix64(seed ^ _TAG_XORSAT))
                ok = rank_and_solve(system)[1]
            else:  # peel: "failure" = the ell-core is non-empty
                ok = peel(g, cfg.ell)[0].core_edges == 0
            millis[meth] += (time.perf_counter() - t0) * 1e3
            failed[meth] = not ok
            if not ok:
                failures[meth] += 1
        if paired and not failed["selfless"] and failed["matching"]:
            violations += 1
    records = [
        SweepRecord(
            c=c,
            n=n,
            method=meth,
            trials=cfg.trials,
            failures=failures[meth],
            rate=failures[meth] / cfg.trials,
            millis=millis[meth],
        )
        for meth in cfg.methods
    ]
    return grid_index, records, (violations if paired else None)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Run the sweep; records come back in grid order, methods in cfg order.

    With jobs > 1 grid points run in forked worker processes; scheduling
    cannot change any record because every point derives its seeds from
    (master_seed, grid_index, trial_index) alone.  Wall-clock millis are,
    of course, not reproducible; everything else is.
    """
    grid = cfg.grid()
    tasks = list(enumerate(grid))
    if cfg.jobs > 1:
        _kernels.warm_up()  # compile before forking so workers inherit the JIT
        with ProcessPoolExecutor(
            max_workers=cfg.jobs, mp_context=get_context("fork")
        ) as pool:
            raw = list(pool.map(_point_task, [(cfg, gi, c) for gi, c in tasks]))
    else:
        raw = [_run_grid_point(cfg, gi, c) for gi, c in tasks]
    raw.sort(key=lambda item: item[0])
    records: list[SweepRecord] = []
    violations: int | None = None
    for _, recs, viol in raw:
        records.extend(recs)
        if viol is not None:
            violations = (violations or 0) + viol
    return SweepResult(records=records, dominance_violations=violations)


def _point_task(args):
    cfg, gi, c = args
    return _run_grid_point(cfg, gi, c)


# ---------------------------------------------------------------------------
# CSV records
# ---------------------------------------------------------------------------

def format_records_csv(records: Iterable[SweepRecord]) -> str:
    """CSV with header, LF endings, %.10g reals."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.c:.10g},{r.n},{r.method},{r.trials},{r.failures},"
            f"{r.rate:.10g},{r.millis:.10g}"
        )
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str) -> list[SweepRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    records = []
    for ln in lines[1:]:
        c, n, method, trials, failures, rate, millis = ln.split(",")
        records.append(
            SweepRecord(
                c=float(c),
                n=int(n),
                method=method,
                trials=int(trials),
                failures=int(failures),
                rate=float(rate),
                millis=float(millis),
            )
        )
    return records


# ---------------------------------------------------------------------------
# sigmoid fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmoidFit:
    """Least-squares fit of 1/(1+exp(-(c-a)/b)); a estimates the threshold."""

    a: float
    b: float
    sum_res: float
    iterations: int
    converged: bool


def sigmoid(c: float, a: float, b: float) -> float:
    """The fitted transition curve 1/(1+exp(-(c-a)/b)); requires b > 0."""
    if not (b > 0.0):
        raise ValueError(f"width b must be > 0, got {b}")
    z = (c - a) / b
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def fit_sigmoid(points: Sequence[tuple[float, float]]) -> SigmoidFit:
    """Damped Gauss-Newton least squares of the sigmoid on (c, rate) pairs.

    a starts at the first grid point whose rate reaches 0.5 (grid midpoint
    if none), b at twice the grid spacing; convergence is parameter updates
    below 1e-10, capped at 500 iterations.  All-zero or all-one rate data
    has no crossing to locate and raises ValueError.
    """
    if len(points) < 2:
        raise ValueError(f"need at least 2 points, got {len(points)}")
    cs = [float(c) for c, _ in points]
    ys = [float(y) for _, y in points]
    if any(not (0.0 <= y <= 1.0) for y in ys):
        raise ValueError("rates must lie in [0, 1]")
    if all(y == 0.0 for y in ys) or all(y == 1.0 for y in ys):
        raise ValueError("degenerate fit: all rates equal, no crossing to locate")

    order = sorted(range(len(cs)), key=lambda i: cs[i])
    cs = [cs[i] for i in order]
    ys = [ys[i] for i in order]
    step = min(
        (c2 - c1 for c1, c2 in zip(cs, cs[1:]) if c2 > c1),
        default=1.0,
    )
    a = next((c for c, y in zip(cs, ys) if y >= 0.5), 0.5 * (cs[0] + cs[-1]))
    b = 2.0 * step

    def ssr(aa: float, bb: float) -> float:
        return math.fsum((y - sigmoid(c, aa, bb)) ** 2 for c, y in zip(cs, ys))

    current = ssr(a, b)
    converged = False
    iterations = 0
    for iterations in range(1, 501):
        saa = sab = sbb = ra = rb = 0.0
        for c, y in zip(cs, ys):
            s = sigmoid(c, a, b)
            d = s * (1.0 - s)
            z = (c - a) / b
            da = -d / b  # ds/da
            db = -d * z / b  # ds/db
            r = y - s
            saa += da * da
            sab += da * db
            sbb += db * db
            ra += da * r
            rb += db * r
        det = saa * sbb - sab * sab
        lam = 0.0
        if det <= 1e-30 * max(saa * sbb, 1e-300):
            lam = 1e-8 * (saa + sbb) + 1e-300
            det = (saa + lam) * (sbb + lam) - sab * sab
        delta_a = ((sbb + lam) * ra - sab * rb) / det
        delta_b = ((saa + lam) * rb - sab * ra) / det

        scale = 1.0
        improved = False
        for _ in range(60):
            na = a + scale * delta_a
            nb = b + scale * delta_b
            if nb > 0.0:
                trial = ssr(na, nb)
                if trial <= current:
                    a, b, current = na, nb, trial
                    improved = True
                    break
            scale *= 0.5
        if not improved:
            converged = True  # no direction of descent left at double precision
            break
        if max(abs(scale * delta_a), abs(scale * delta_b)) < 1e-10:
            converged = True
            break
    return SigmoidFit(a=a, b=b, sum_res=current, iterations=iterations, converged=converged)
