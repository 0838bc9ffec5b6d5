"""PR feasibility tests, synthesis design, and time-domain verification.

Feasibility of delayed perfect reconstruction with a length-m_v bank is a
range condition: for every phase p the unit target delta_{kappa(p, n0)}
must lie in the column space of the phase system H_p.  Numerically the
test solves the per-phase least-squares problem and inspects the
residual, which for generic banks clusters sharply at 0 (feasible) or
near 1 (infeasible), so the verdict is insensitive to the tolerance.

Design takes the minimum-norm solution of each phase system (truncated
SVD pseudoinverse) and interleaves the D per-phase solutions into the
synthesis filters.  ``simulate`` runs the actual bank structure
(filter, subsample, upsample, filter, sum) by direct convolution and is
the independent oracle everything else is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SolverFailure
from .fb_core import FilterBank, ceil_div, delay_range, interleave
from .polyphase_matrix import hp_entries, kappa_or_none

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class FeasibilityResult:
    """Per-phase residuals and the verdict for one (m_v, n0) candidate."""

    m_v: int
    delay: int
    residuals: tuple[float, ...]
    feasible: bool
    tol: float


@dataclass(frozen=True)
class SynthesisBank:
    """A designed synthesis bank tagged with its provenance.

    ``designed_for`` is (analysis bank digest, delay).  When ``feasible``
    is False the filters are the least-squares approximation, not an
    exact reconstructor.
    """

    bank: FilterBank
    designed_for: tuple[str, int]
    residuals: tuple[float, ...]
    feasible: bool
    tol: float


@dataclass(frozen=True)
class DistortionReport:
    """Normalized reconstruction distortion after delay alignment."""

    input_len: int
    delay: int
    percent: float
    errors: np.ndarray


def _svd(matrix: np.ndarray):
    try:
        return np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SolverFailure(f"SVD did not converge on shape {matrix.shape}") from exc


def _numeric_rank(s: np.ndarray, shape: tuple[int, int]) -> int:
    if s.size == 0:
        return 0
    cutoff = max(shape) * np.finfo(np.float64).eps * s[0]
    return int(np.count_nonzero(s > cutoff))


def _phase_tables(taps: np.ndarray, D: int, m_v: int, need_solver: bool):
    """SVD data per distinct block width (at most two widths arise).

    Returns {width: (res_norms, U, s, Vh, rank)}; res_norms[k] is the
    least-squares residual for a unit target at row k, computed as the
    k-th column norm of I - U_r U_r^H.  Forming the complement
    entrywise before taking norms avoids the cancellation that
    sqrt(1 - |U_r[k,:]|^2) suffers when the residual is tiny.
    """
    tables = {}
    for p in range(D):
        w = ceil_div(m_v - p, D)
        if w in tables:
            continue
        M = hp_entries(taps, D, w)
        U, s, Vh = _svd(M)
        rank = _numeric_rank(s, M.shape)
        Ur = U[:, :rank]
        comp = -(Ur @ Ur.conj().T)
        comp[np.diag_indices(comp.shape[0])] += 1.0
        res_norms = np.linalg.norm(comp, axis=0)
        tables[w] = (res_norms, Ur if need_solver else None,
                     s[:rank] if need_solver else None,
                     Vh[:rank] if need_solver else None, rank)
    return tables


def _phase_residuals(taps, D, m_v, n0, tables) -> list[float]:
    """Residuals of the D phase equations for delay n0.

    A phase whose target is not representable contributes residual 1.0
    (the full miss of an unreachable unit pulse).
    """
    m_h = taps.shape[1]
    out = []
    for p in range(D):
        w = ceil_div(m_v - p, D)
        k = kappa_or_none(p, n0, m_h, m_v, D)
        if k is None:
            out.append(1.0)
            continue
        out.append(float(tables[w][0][k]))
    return out


def pr_feasible(bank: FilterBank, m_v: int, n0: int,
                tol: float = DEFAULT_TOL) -> FeasibilityResult:
    """Test delayed-PR feasibility at one delay.

    Solver breakdown raises; it is never reported as infeasibility.
    """
    D = bank.subsampling
    if m_v < D:
        raise DomainError(f"synthesis length {m_v} must be >= subsampling {D}")
    if n0 not in delay_range(bank.filter_length, m_v, D):
        raise DomainError(f"delay {n0} outside the admissible range")
    tables = _phase_tables(bank.taps, D, m_v, need_solver=False)
    residuals = _phase_residuals(bank.taps, D, m_v, n0, tables)
    return FeasibilityResult(
        m_v=m_v, delay=n0, residuals=tuple(residuals),
        feasible=all(r <= tol for r in residuals), tol=tol,
    )


def pr_feasible_any_delay(bank: FilterBank, m_v: int,
                          tol: float = DEFAULT_TOL, step: int = 1) -> int | None:
    """Smallest feasible delay in the admissible range, or None.

    ``step=1`` scans every delay; ``step=D`` restricts to multiples of
    the subsampling factor.
    """
    D = bank.subsampling
    if m_v < D:
        raise DomainError(f"synthesis length {m_v} must be >= subsampling {D}")
    tables = _phase_tables(bank.taps, D, m_v, need_solver=False)
    for n0 in delay_range(bank.filter_length, m_v, D)[::step]:
        residuals = _phase_residuals(bank.taps, D, m_v, n0, tables)
        if all(r <= tol for r in residuals):
            return n0
    return None


def _taps_any_delay_feasible(taps: np.ndarray, D: int, m_v: int,
                             tol: float, step: int) -> bool:
    """Hot-path feasibility scan on a raw tap array (Monte-Carlo inner loop)."""
    m_h = taps.shape[1]
    bound = m_h // D + m_v // D - 2
    if bound < 0:
        return False
    tables = _phase_tables(taps, D, m_v, need_solver=False)
    for n0 in range(0, D * bound + 1, step):
        for p in range(D):
            k = kappa_or_none(p, n0, m_h, m_v, D)
            if k is None:
                break
            w = ceil_div(m_v - p, D)
            if tables[w][0][k] > tol:
                break
        else:
            return True
    return False


def design_synthesis(bank: FilterBank, m_v: int, n0: int,
                     tol: float = DEFAULT_TOL) -> SynthesisBank:
    """Minimum-norm synthesis design for delay n0.

    Solves each phase system with the truncated-SVD pseudoinverse and
    interleaves the solutions.  When some phase is infeasible the result
    is the least-squares approximation, flagged via ``feasible=False``.
    """
    D = bank.subsampling
    if m_v < D:
        raise DomainError(f"synthesis length {m_v} must be >= subsampling {D}")
    if n0 not in delay_range(bank.filter_length, m_v, D):
        raise DomainError(f"delay {n0} outside the admissible range")
    C, m_h = bank.channels, bank.filter_length
    tables = _phase_tables(bank.taps, D, m_v, need_solver=True)
    components: list[list[np.ndarray]] = [[] for _ in range(C)]
    residuals = []
    for p in range(D):
        w = ceil_div(m_v - p, D)
        res_norms, Ur, s, Vh, rank = tables[w]
        k = kappa_or_none(p, n0, m_h, m_v, D)
        if k is None:
            residuals.append(1.0)
            sol = np.zeros(C * w, dtype=bank.taps.dtype)
        else:
            residuals.append(float(res_norms[k]))
            coeff = Ur[k].conj() / s
            sol = coeff @ Vh.conj()
        for i in range(C):
            components[i].append(sol[i * w:(i + 1) * w])
    taps = np.vstack([interleave(comp, D) for comp in components])
    return SynthesisBank(
        bank=FilterBank.synthesis(taps, D),
        designed_for=(bank.digest(), n0),
        residuals=tuple(residuals),
        feasible=all(r <= tol for r in residuals),
        tol=tol,
    )


def simulate(analysis: FilterBank, synthesis: FilterBank, x) -> np.ndarray:
    """Run the bank end to end by direct convolution.

    Output sample n is sum_i (v_i * upsample(downsample(x * h_i)))[n];
    the output is long enough to contain the input shifted by any
    admissible delay.
    """
    if analysis.channels != synthesis.channels:
        raise DomainError("analysis and synthesis banks must share the channel count")
    if analysis.subsampling != synthesis.subsampling:
        raise DomainError("analysis and synthesis banks must share the subsampling factor")
    D = analysis.subsampling
    x = np.atleast_1d(np.asarray(x))
    if x.ndim != 1 or x.size == 0:
        raise DomainError("input signal must be a nonempty 1-D sequence")
    m_x, m_h, m_v = len(x), analysis.filter_length, synthesis.filter_length
    n_y = (m_x + m_h - 2) // D + 1
    out_len = (n_y - 1) * D + m_v
    dtype = np.result_type(x.dtype, analysis.taps.dtype, synthesis.taps.dtype, float)
    acc = np.zeros(out_len, dtype=dtype)
    for i in range(analysis.channels):
        y = np.convolve(x, analysis.taps[i])[::D]
        up = np.zeros((len(y) - 1) * D + 1, dtype=dtype)
        up[::D] = y
        acc += np.convolve(up, synthesis.taps[i])
    return acc


def polyphase_predict(analysis: FilterBank, synthesis: FilterBank, x,
                      out_len: int | None = None) -> np.ndarray:
    """Predict the bank output from the phase system products alone.

    Splits the input into its D residue subsequences, pushes each phase's
    synthesis components through H_p, and reassembles the output from the
    resulting block sequences.  Agreement with :func:`simulate` certifies
    the matrix layout, the target-row mapping, and the interleaving
    convention in one shot.
    """
    if analysis.channels != synthesis.channels:
        raise DomainError("analysis and synthesis banks must share the channel count")
    if analysis.subsampling != synthesis.subsampling:
        raise DomainError("analysis and synthesis banks must share the subsampling factor")
    D = analysis.subsampling
    x = np.atleast_1d(np.asarray(x))
    m_x, m_h, m_v = len(x), analysis.filter_length, synthesis.filter_length
    if out_len is None:
        out_len = ((m_x + m_h - 2) // D) * D + m_v
    dtype = np.result_type(x.dtype, analysis.taps.dtype, synthesis.taps.dtype, float)
    out = np.zeros(out_len, dtype=dtype)
    x_sub = [x[s::D] for s in range(D)]
    for p in range(D):
        w = ceil_div(m_v - p, D)
        vec = np.concatenate([synthesis.taps[i, p::D]
                              for i in range(analysis.channels)])
        z = hp_entries(analysis.taps, D, w) @ vec
        # split the stacked product into its per-block sequences
        blocks = []
        r0 = 0
        for m_ell in (ceil_div(m_h - l, D) for l in range(D)):
            blocks.append(z[r0:r0 + m_ell + w - 1])
            r0 += m_ell + w - 1
        # output phase p: contribution of input residue s enters through
        # block (D - s) mod D, delayed by one step for s >= 1
        terms = []
        if len(x_sub[0]):
            terms.append(np.convolve(x_sub[0], blocks[0]))
        for s in range(1, D):
            if len(x_sub[s]) and len(blocks[D - s]):
                conv = np.convolve(x_sub[s], blocks[D - s])
                terms.append(np.concatenate(([0.0], conv)))
        if not terms:
            continue
        acc_len = max(len(t) for t in terms)
        acc = np.zeros(acc_len, dtype=dtype)
        for t in terms:
            acc[:len(t)] += t
        slots = out[p::D]
        n = min(len(slots), acc_len)
        slots[:n] = acc[:n]
    return out


def distortion(analysis: FilterBank, synthesis: FilterBank, x,
               n0: int) -> DistortionReport:
    """Percent reconstruction distortion after aligning by n0 samples.

    Compares the reconstruction to the input on the input's support;
    trailing samples beyond it are ignored.
    """
    x = np.atleast_1d(np.asarray(x))
    norm = np.linalg.norm(x)
    if norm == 0:
        raise DomainError("distortion needs a nonzero input")
    if n0 < 0:
        raise DomainError("delay must be nonnegative")
    xh = simulate(analysis, synthesis, x)
    aligned = np.zeros(len(x), dtype=xh.dtype)
    seg = xh[n0:n0 + len(x)]
    aligned[:len(seg)] = seg
    errors = aligned - x
    percent = float(100.0 * np.linalg.norm(errors) / norm)
    return DistortionReport(input_len=len(x), delay=n0,
                            percent=percent, errors=errors)
