"""Reproducible experiment harness: length curves, Monte-Carlo
feasibility grids, and distortion studies.

Randomness comes from the counter-based Philox generator with one
substream per cell, keyed by (seed, purpose, cell coordinates, trial).
Trials are therefore independent of execution order and the grids can be
filled by a process pool without affecting a single byte of the output.

Bank distributions follow the two uniform laws used throughout:
zero-mean variance-100 (support [-sqrt(300), sqrt(300)]) for the
feasibility grid, and zero-mean unit variance (support [-sqrt(3),
sqrt(3)]) for the distortion population study.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleConfigError
from .fb_core import FilterBank, ceil_div
from .feasibility import (DEFAULT_TOL, _taps_any_delay_feasible,
                          design_synthesis, distortion,
                          pr_feasible_any_delay)
from .lengths import (counting_length, length_bounds, length_report,
                      necessary_length, sufficient_length)

UNIFORM_VAR100 = "uniform_var100"
UNIFORM_UNIT_VAR = "uniform_unit_var"
_HALF_WIDTH = {UNIFORM_VAR100: np.sqrt(300.0), UNIFORM_UNIT_VAR: np.sqrt(3.0)}

# purpose tags keep substreams of different experiments disjoint
_TAG_MC, _TAG_SWEEP, _TAG_SWEEP_INPUT, _TAG_BOX, _TAG_BOX_INPUT = range(1, 6)


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent counter-based generator for one cell of one experiment."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed,) + key)))


def draw_bank(rng: np.random.Generator, C: int, D: int, m_h: int,
              distribution: str = UNIFORM_VAR100) -> FilterBank:
    half = _HALF_WIDTH[distribution]
    return FilterBank.analysis(rng.uniform(-half, half, (C, m_h)), D)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return repr(float(x))


def rows_to_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


# -- length-functional curves -------------------------------------------------


def run_length_curves(D_list, m_h_list, C_max: int):
    """Length functionals over a (D, m_h, C) product grid.

    Cells with C <= D are skipped entirely; cells with D < C < 2D carry
    whatever functionals are defined there (blank otherwise).  On the
    fully valid cells the ordering chain is asserted as a side effect.
    Returns (header, rows).
    """
    rows = []
    for D in D_list:
        for m_h in m_h_list:
            for C in range(D + 1, C_max + 1):
                if C >= 2 * D and m_h > D:
                    rep = length_report(C, D, m_h)
                    rows.append((C, D, m_h, rep.mv_L, rep.mv_N, rep.mv_C,
                                 rep.mv_S, rep.mv_U))
                    continue
                cells = {"mv_C": counting_length(C, D, m_h)}
                for name, fn in (("mv_S", sufficient_length),
                                 ("mv_N", necessary_length)):
                    try:
                        cells[name] = fn(C, D, m_h)
                    except InfeasibleConfigError:
                        cells[name] = None
                try:
                    cells["mv_L"], cells["mv_U"] = length_bounds(C, D, m_h)
                except DomainError:
                    cells["mv_L"] = cells["mv_U"] = None
                rows.append((C, D, m_h, cells["mv_L"], cells["mv_N"],
                             cells["mv_C"], cells["mv_S"], cells["mv_U"]))
    return ("C", "D", "m_h", "mv_L", "mv_N", "mv_C", "mv_S", "mv_U"), rows


# -- Monte-Carlo feasibility grid ---------------------------------------------


@dataclass(frozen=True)
class ExperimentGrid:
    """Success counts of the feasibility Monte-Carlo over a (C, m_v) grid.

    ``counts[i, j]`` is the number of trial banks with channel count
    C_values[i] admitting PR at some scanned delay with synthesis length
    mv_values[j]; -1 marks cells whose configuration is invalid.
    """

    C_values: tuple[int, ...]
    D: int
    m_h: int
    mv_values: tuple[int, ...]
    trials: int
    seed: int
    distribution: str
    delay_step: int
    counts: np.ndarray

    def count(self, C: int, m_v: int) -> int:
        return int(self.counts[self.C_values.index(C), self.mv_values.index(m_v)])

    def to_csv(self) -> str:
        header = ("C", "m_v", "successes", "trials", "mv_C", "mv_S")
        rows = []
        for i, C in enumerate(self.C_values):
            mv_C = counting_length(C, self.D, self.m_h) if C > self.D else None
            try:
                mv_S = sufficient_length(C, self.D, self.m_h)
            except (DomainError, InfeasibleConfigError):
                mv_S = None
            for j, m_v in enumerate(self.mv_values):
                n = int(self.counts[i, j])
                rows.append((C, m_v, None if n < 0 else n,
                             self.trials, mv_C, mv_S))
        return rows_to_csv(header, rows)

    def boundaries(self):
        """Per channel count, the smallest m_v with full success (or None)."""
        out = []
        for i, C in enumerate(self.C_values):
            hit = None
            for j, m_v in enumerate(self.mv_values):
                if self.counts[i, j] == self.trials:
                    hit = m_v
                    break
            out.append((C, hit))
        return out


def _mc_cell(args):
    seed, C, D, m_h, m_v, trials, tol, step = args
    count = 0
    for t in range(trials):
        rng = substream(seed, _TAG_MC, C, m_v, t)
        taps = rng.uniform(-_HALF_WIDTH[UNIFORM_VAR100], _HALF_WIDTH[UNIFORM_VAR100],
                           (C, m_h))
        if _taps_any_delay_feasible(taps, D, m_v, tol, step):
            count += 1
    return C, m_v, count


def run_feasibility_mc(C_values, D: int, m_h: int, mv_values,
                       trials: int = 200, seed: int = 0,
                       tol: float = DEFAULT_TOL, all_delays: bool = False,
                       workers: int | None = None) -> ExperimentGrid:
    """Fill the feasibility phase-transition grid.

    By default only multiple-of-D delays are scanned; ``all_delays``
    widens the scan to the full admissible range.  Invalid cells
    (m_v < D or C < 1) are marked absent.  The result is bit-identical
    for a given seed regardless of ``workers``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    C_values = tuple(int(c) for c in C_values)
    mv_values = tuple(int(m) for m in mv_values)
    step = 1 if all_delays else D
    counts = np.full((len(C_values), len(mv_values)), -1, dtype=np.int64)
    cells = []
    for i, C in enumerate(C_values):
        for j, m_v in enumerate(mv_values):
            if C >= 1 and m_v >= D:
                cells.append((seed, C, D, m_h, m_v, trials, tol, step))
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_mc_cell, cells, chunksize=4))
    else:
        results = [_mc_cell(c) for c in cells]
    index = {(C, m): (i, j) for i, C in enumerate(C_values)
             for j, m in enumerate(mv_values)}
    for C, m_v, count in results:
        counts[index[(C, m_v)]] = count
    counts.flags.writeable = False
    return ExperimentGrid(
        C_values=C_values, D=D, m_h=m_h, mv_values=mv_values,
        trials=trials, seed=seed, distribution=UNIFORM_VAR100,
        delay_step=step, counts=counts,
    )


# -- distortion studies -------------------------------------------------------


def _anchor_delay(bank: FilterBank, tol: float) -> int:
    """One delay for a whole distortion study of this bank.

    The systems are solved at a single fixed delay so that shortening the
    synthesis filters shows the raw cost of inconsistency rather than the
    best approximation over all delays.  The anchor is the smallest
    multiple-of-D delay at which the bank achieves PR at the counting
    length (generically the feasibility knee), falling back to the
    sufficient length and finally to D itself.
    """
    D = bank.subsampling
    C, m_h = bank.channels, bank.filter_length
    candidates = [counting_length(C, D, m_h)]
    try:
        candidates.append(sufficient_length(C, D, m_h))
    except InfeasibleConfigError:
        pass  # below two-fold oversampling only the counting anchor exists
    for m_v in candidates:
        n0 = pr_feasible_any_delay(bank, m_v, tol, step=D)
        if n0 is not None:
            return n0
    return D


def run_distortion_sweep(C: int, D: int, m_h: int, mv_values,
                         seed: int = 0, tol: float = DEFAULT_TOL):
    """Distortion of one fixed random bank as the synthesis length varies.

    Every length is inverted at the bank's anchor delay (see
    :func:`_anchor_delay`) and the reconstruction error is reported for
    two probes: a random length-100 input and the unit pulse.  Returns
    (header, rows) with rows (m_v, n0, distortion_random, distortion_pulse).
    """
    bank = draw_bank(substream(seed, _TAG_SWEEP), C, D, m_h, UNIFORM_VAR100)
    x_rand = substream(seed, _TAG_SWEEP_INPUT).uniform(
        -_HALF_WIDTH[UNIFORM_UNIT_VAR], _HALF_WIDTH[UNIFORM_UNIT_VAR], 100)
    pulse = np.zeros(100)
    pulse[0] = 1.0
    n0 = _anchor_delay(bank, tol)
    rows = []
    for m_v in mv_values:
        if m_v < D:
            continue
        design = design_synthesis(bank, m_v, n0, tol)
        d_rand = distortion(bank, design.bank, x_rand, n0).percent
        d_pulse = distortion(bank, design.bank, pulse, n0).percent
        rows.append((int(m_v), n0, d_rand, d_pulse))
    return ("m_v", "n0", "distortion_random_pct", "distortion_pulse_pct"), rows


def boxplot_synthesis_length(C: int, D: int, m_h: int) -> int:
    """Synthesis length for the population study: about 10% below the
    counting length, always strictly below it and never below D."""
    mv_C = counting_length(C, D, m_h)
    return max(D, min(ceil_div(9 * mv_C, 10), mv_C - 1))


def run_distortion_boxplot(C_values, D: int, m_h: int, trials: int = 200,
                           seed: int = 0, tol: float = DEFAULT_TOL):
    """Distortion population per channel count at a too-short length.

    Each trial draws a unit-variance bank, inverts it at its anchor delay
    with the length from :func:`boxplot_synthesis_length`, and measures
    distortion on one fixed random length-100 input.  Rows carry the
    five-number summary with 1.5*IQR whiskers, the outlier count, and the
    fraction of trials below 1% distortion.
    """
    x = substream(seed, _TAG_BOX_INPUT).uniform(
        -_HALF_WIDTH[UNIFORM_UNIT_VAR], _HALF_WIDTH[UNIFORM_UNIT_VAR], 100)
    rows = []
    for C in C_values:
        if C <= D:
            continue
        m_v = boxplot_synthesis_length(C, D, m_h)
        vals = np.empty(trials)
        for t in range(trials):
            bank = draw_bank(substream(seed, _TAG_BOX, C, t), C, D, m_h,
                             UNIFORM_UNIT_VAR)
            n0 = _anchor_delay(bank, tol)
            design = design_synthesis(bank, m_v, n0, tol)
            vals[t] = distortion(bank, design.bank, x, n0).percent
        q1, med, q3 = np.percentile(vals, [25.0, 50.0, 75.0])
        iqr = q3 - q1
        inliers = vals[(vals >= q1 - 1.5 * iqr) & (vals <= q3 + 1.5 * iqr)]
        rows.append((int(C), m_v, med, q1, q3,
                     float(inliers.min()), float(inliers.max()),
                     int(trials - len(inliers)),
                     float(np.mean(vals < 1.0))))
    header = ("C", "m_v", "median_pct", "q1_pct", "q3_pct",
              "whisker_lo_pct", "whisker_hi_pct", "outliers", "frac_below_1pct")
    return header, rows
