"""Monte Carlo estimation of the dependence probability theta_q(r, c, w).

Each trial synthesises a decoder at state (r, c) inside a c-column window,
then draws one more vector whose support lies on the covered columns and
checks whether it raises the rank.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import List, Optional, Sequence

import numpy as np

from models import ThetaGrid, ThetaSample
from src.codec import CodingVector, DecoderState, generate_coding_vector
from src.exceptions import ParameterError, SynthesisError
from src.field.factory import FieldFactory

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 10000
# Redraws allowed for one rank step before the whole state is rebuilt.
STEP_RETRIES = 64
# Uniform in-window attempts before falling back to a column plan.
WINDOW_DRAWS = 32


def is_reachable(w: int, c: int, r: int, q: int = 0) -> bool:
    """Whether a decoder can hold rank r with c covered columns.

    Over GF(2) (q=1) a w-support carries a single vector, so c == w only
    admits r = 1, and an even w never reaches r = c. q=0 skips field-specific checks.
    """
    if r < 1 or c < w or r > c:
        return False
    if r == 1:
        return c == w
    if q == 1 and c == w:
        return False
    if q == 1 and w % 2 == 0 and r == c:
        # Even-weight vectors over GF(2) span at most c - 1 dimensions.
        return False
    return c <= r * w


def _column_plan(w: int, c: int, r: int, rng: np.random.Generator) -> List[int]:
    """New-column counts for rank steps 2..r, each in [0, w], summing to c - w"""
    remaining = c - w
    plan = []
    for steps_left in range(r - 1, 0, -1):
        low = max(0, remaining - w * (steps_left - 1))
        high = min(w, remaining)
        j = int(rng.integers(low, high + 1))
        plan.append(j)
        remaining -= j
    return [int(j) for j in rng.permutation(plan)] if plan else []


def _raise_synthesis(q: int, w: int, c: int, r: int, max_attempts: int):
    raise SynthesisError(f"could not reach (r={r}, c={c}) for q={q}, w={w} in {max_attempts} attempts")


def _draw_in_window(w: int, c: int, r: int, field, rng: np.random.Generator) -> Optional[DecoderState]:
    """Uniform w-supports on the window, kept when innovative, until rank r.

    Returns None unless all c columns end up covered.
    """
    state = DecoderState(c, field)
    misses = 0
    while state.rank < r:
        if (r - state.rank) * w < c - state.c:
            return None
        if state.ingest(generate_coding_vector(c, w, field, rng)).innovative:
            misses = 0
            continue
        misses += 1
        if misses >= STEP_RETRIES:
            return None
    return state if state.c == c else None


def synthesize_state(q: int, w: int, c: int, r: int, rng: np.random.Generator,
                     max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> DecoderState:
    """Random decoder holding rank r with exactly c covered columns (columns 0..c-1).

    The first WINDOW_DRAWS attempts draw uniform supports inside the window
    and keep a state that covers every column, which is the distribution a
    decoder meets in transit. States that rarely cover the window that way
    (r close to c / w) fall back to a random column plan: rank steps that add
    new columns are always innovative, steps that reuse covered columns are
    redrawn, and after STEP_RETRIES misses the state is rebuilt.
    """
    if not is_reachable(w, c, r, q):
        raise ParameterError(f"state (r={r}, c={c}) is not reachable with w={w}")
    field = FieldFactory.create_field(q)
    failures = 0
    for _ in range(min(WINDOW_DRAWS, max_attempts)):
        state = _draw_in_window(w, c, r, field, rng)
        if state is not None:
            return state
        failures += 1
    if failures >= max_attempts:
        _raise_synthesis(q, w, c, r, max_attempts)

    window = np.arange(c)
    while True:
        state = DecoderState(c, field)
        state.ingest(generate_coding_vector(c, w, field, rng))
        complete = True
        for new_columns in _column_plan(w, c, r, rng):
            misses = 0
            while True:
                covered = np.array(sorted(state.covered))
                fresh = np.setdiff1d(window, covered)
                support = np.concatenate((
                    rng.choice(fresh, size=new_columns, replace=False),
                    rng.choice(covered, size=w - new_columns, replace=False),
                ))
                coefficients = [1] * w if q == 1 else rng.integers(1, field.order, size=w).tolist()
                vector = CodingVector.from_support(c, support.tolist(), coefficients)
                if state.ingest(vector).innovative:
                    break
                failures += 1
                if failures >= max_attempts:
                    _raise_synthesis(q, w, c, r, max_attempts)
                misses += 1
                if state.rank == state.c or misses >= STEP_RETRIES:
                    complete = False
                    break
            if not complete:
                break
        if complete and state.rank == r and state.c == c:
            return state
        failures += 1
        if failures >= max_attempts:
            _raise_synthesis(q, w, c, r, max_attempts)


def estimate_theta(q: int, w: int, c: int, r: int, trials: int, rng: np.random.Generator,
                   max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> ThetaSample:
    if trials < 1:
        raise ParameterError("trials must be at least 1")
    if w > c or r > c:
        raise ParameterError(f"need w <= c and r <= c, got w={w}, c={c}, r={r}")
    field = FieldFactory.create_field(q)
    dependent = 0
    if r == c:
        dependent = trials
    else:
        for _ in range(trials):
            state = synthesize_state(q, w, c, r, rng, max_attempts)
            candidate = generate_coding_vector(c, w, field, rng)
            if not state.is_innovative(candidate):
                dependent += 1
    return ThetaSample(q=q, w=w, c=c, r=r, trials=trials, dependent_count=dependent)


def exact_theta_q1(state: DecoderState, w: int) -> float:
    """Exact fraction of w-supports on the covered columns that are dependent.

    Over GF(2) a support fixes the vector, so all C(c, w) supports are checked.
    """
    if state.field.q != 1:
        raise ParameterError("exact enumeration is only defined over GF(2)")
    covered = sorted(state.covered)
    if w > len(covered):
        raise ParameterError(f"density w={w} exceeds the {len(covered)} covered columns")
    supports = list(combinations(covered, w))
    dependent = sum(
        not state.is_innovative(CodingVector.from_support(state.k, list(support))) for support in supports
    )
    return dependent / len(supports)


def enumerate_theta_q1(w: int, c: int, r: int, states: int, rng: np.random.Generator,
                       max_attempts: int = DEFAULT_MAX_ATTEMPTS):
    """Average of exact_theta_q1 over synthesised states. Returns (mean, stderr)."""
    fractions = [exact_theta_q1(synthesize_state(1, w, c, r, rng, max_attempts), w)
                 for _ in range(states)]
    values = np.array(fractions)
    stderr = float(values.std(ddof=1) / math.sqrt(states)) if states > 1 else 0.0
    return float(values.mean()), stderr


def rank_grid(w: int, c: int, points: int, q: int = 0) -> List[int]:
    """About ``points`` evenly spaced reachable ranks for c covered columns, ending at r = c"""
    low = 1 if c == w else max(2, math.ceil(c / w))
    ranks = np.unique(np.round(np.linspace(low, c, max(points, 2))).astype(int))
    return [int(r) for r in ranks if r == c or is_reachable(w, c, int(r), q)]


def _estimate_task(args):
    q, w, c, r, trials, seed_seq, max_attempts = args
    try:
        return estimate_theta(q, w, c, r, trials, np.random.default_rng(seed_seq), max_attempts)
    except SynthesisError as e:
        logger.warning("Skipping grid point c=%d r=%d: %s", c, r, e)
        return None


def estimate_theta_grid(q: int, w: int, c_values: Sequence[int], r_points: int, trials: int,
                        seed: int, threads: int = 1,
                        max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> ThetaGrid:
    """Sample theta over a (c, r) grid; each grid point has its own RNG stream.

    Points whose state cannot be synthesised are reported in ``skipped``
    instead of aborting the grid.
    """
    points = [(c, r) for c in c_values if c >= w for r in rank_grid(w, c, r_points, q)]
    streams = np.random.SeedSequence(seed).spawn(len(points))
    tasks = [(q, w, c, r, trials, s, max_attempts) for (c, r), s in zip(points, streams)]
    logger.info("Estimating theta on %d grid points (q=%d, w=%d, trials=%d)", len(tasks), q, w, trials)
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_estimate_task, tasks))
    else:
        results = [_estimate_task(t) for t in tasks]
    grid = ThetaGrid(samples=[s for s in results if s is not None])
    grid.skipped = [point for point, s in zip(points, results) if s is None]
    if grid.skipped:
        logger.warning("Synthesis failed on %d of %d grid points: %s", len(grid.skipped), len(points),
                       ', '.join(f"(c={c}, r={r})" for c, r in grid.skipped))
    return grid
