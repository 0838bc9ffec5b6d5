"""Convolution matrices and the stacked per-phase system matrices.

For an analysis bank {h_i} and a candidate synthesis length m_v, the
phase-p reconstruction equation is a single linear system

    H_p  vec[v_{1,p}, ..., v_{C,p}]  =  delta_{kappa(p, n0)},

where H_p stacks, block-row by block-row, the convolution matrices of the
D polyphase components of every channel, each acting on an unknown of
length m_{v;p} = ceil((m_v - p) / D).  Block-row ell holds the components
with tap indices congruent to ell mod D; block-column i holds channel i.
The right-hand side is a unit pulse whose row index kappa encodes the
reconstruction delay.

The kappa mapping used here is the one certified by the time-domain
oracle (see tests): the nonzero entry of the phase-p target for delay n0
sits in block-row (n0 - p) mod D at offset floor((n0 - p) / D).  Delays
with n0 < p cannot be represented at phase p (the pulse would fall on a
structurally zero position); such (p, n0) pairs are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fb_core import FilterBank, ceil_div, delay_range, format_scalar, polyphase_lengths


@dataclass(frozen=True)
class ConvMatrix:
    """Dense Toeplitz matrix of full linear convolution by ``kernel``.

    entries[r, c] = kernel[r - c] for 0 <= r - c < len(kernel), else a
    structural zero; shape is (len(kernel) + input_len - 1, input_len).
    """

    kernel: np.ndarray
    input_len: int
    entries: np.ndarray


def conv_matrix(kernel, input_len: int) -> ConvMatrix:
    kernel = np.atleast_1d(np.asarray(kernel))
    if kernel.size == 0:
        raise DomainError("kernel must be nonempty")
    if input_len < 1:
        raise DomainError("input_len must be >= 1")
    m = len(kernel)
    entries = np.zeros((m + input_len - 1, input_len), dtype=kernel.dtype)
    for c in range(input_len):
        entries[c:c + m, c] = kernel
    entries.flags.writeable = False
    return ConvMatrix(kernel=kernel, input_len=input_len, entries=entries)


def stacked_conv(kernels, input_len: int) -> np.ndarray:
    """Horizontal stack [Conv(k_1) Conv(k_2) ... Conv(k_C)].

    All kernels must have the same length.
    """
    kernels = [np.atleast_1d(np.asarray(k)) for k in kernels]
    if not kernels:
        raise DomainError("need at least one kernel")
    lens = {len(k) for k in kernels}
    if len(lens) != 1:
        raise DomainError(f"kernels have mixed lengths {sorted(lens)}")
    return np.hstack([conv_matrix(k, input_len).entries for k in kernels])


def hp_entries(taps: np.ndarray, D: int, width: int) -> np.ndarray:
    """Raw phase-system matrix for a (C, m_h) tap array and block width.

    Equivalent to stacking stacked_conv over the D polyphase component
    rows, but filled in one pass.  ``width`` is the per-channel unknown
    length m_{v;p}.
    """
    C, m_h = taps.shape
    rows = m_h + D * width - D
    out = np.zeros((rows, C * width), dtype=taps.dtype)
    cols = np.arange(C) * width
    r0 = 0
    for ell in range(D):
        K = taps[:, ell::D]          # (C, m_ell) component kernels
        m_ell = K.shape[1]
        for c in range(width):
            out[r0 + c:r0 + c + m_ell, cols + c] = K.T
        r0 += m_ell + width - 1
    return out


def block_row_offsets(m_h: int, D: int, width: int) -> tuple[int, ...]:
    """Start row of each of the D block-rows, plus the total row count."""
    offs = [0]
    for m_ell in polyphase_lengths(m_h, D):
        offs.append(offs[-1] + m_ell + width - 1)
    return tuple(offs)


@dataclass(frozen=True)
class PolyphaseMatrix:
    """Phase-p system matrix with its block layout.

    ``block_rows`` holds the D+1 row offsets delimiting the block-rows,
    ``block_cols`` the C+1 column offsets delimiting the block-columns.
    """

    phase: int
    entries: np.ndarray
    block_rows: tuple[int, ...]
    block_cols: tuple[int, ...]

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def width(self) -> int:
        return self.block_cols[1]


def build_Hp(bank: FilterBank, m_v: int, p: int) -> PolyphaseMatrix:
    """Assemble the phase-p system matrix for synthesis length m_v.

    The result has m_h + D*m_{v;p} - D rows and C*m_{v;p} columns.
    Requires m_v >= D so that no polyphase component is empty.
    """
    D = bank.subsampling
    if bank.role != "analysis":
        raise DomainError("phase systems are built from an analysis bank")
    if m_v < D:
        raise DomainError(f"synthesis length {m_v} must be >= subsampling {D}")
    if not 0 <= p < D:
        raise DomainError(f"phase must lie in 0..{D - 1}")
    width = ceil_div(m_v - p, D)
    entries = hp_entries(bank.taps, D, width)
    entries.flags.writeable = False
    return PolyphaseMatrix(
        phase=p,
        entries=entries,
        block_rows=block_row_offsets(bank.filter_length, D, width),
        block_cols=tuple(range(0, (bank.channels + 1) * width, width)),
    )


def kappa_or_none(p: int, n0: int, m_h: int, m_v: int, D: int) -> int | None:
    """Target row for (phase, delay), or None when not representable.

    None means the delay-n0 pulse falls outside the finite support of the
    phase-p equation (only possible for n0 < p); perfect reconstruction
    with that delay is then impossible regardless of the filters.
    """
    if n0 < p:
        return None
    width = ceil_div(m_v - p, D)
    e, ell = divmod(n0 - p, D)   # block-row = residue, offset = quotient
    offs = block_row_offsets(m_h, D, width)
    if e > offs[ell + 1] - offs[ell] - 1:
        return None
    return offs[ell] + e


def kappa(p: int, n0: int, m_h: int, m_v: int, D: int) -> int:
    """Row index of the 1 in the phase-p target vector for delay n0.

    Raises on delays outside :func:`delay_range` and on (p, n0) pairs the
    finite system cannot represent.
    """
    if n0 not in delay_range(m_h, m_v, D):
        raise DomainError(f"delay {n0} outside the admissible range")
    k = kappa_or_none(p, n0, m_h, m_v, D)
    if k is None:
        raise DomainError(
            f"delay {n0} is not representable at phase {p} "
            "(target falls on a structurally zero position)"
        )
    return k


@dataclass(frozen=True)
class TargetVector:
    """Unit vector delta_kappa on the right-hand side of a phase equation."""

    phase: int
    delay: int
    kappa: int
    entries: np.ndarray


def target_vector(p: int, n0: int, bank: FilterBank, m_v: int) -> TargetVector:
    D = bank.subsampling
    m_h = bank.filter_length
    k = kappa(p, n0, m_h, m_v, D)
    rows = m_h + D * ceil_div(m_v - p, D) - D
    entries = np.zeros(rows)
    entries[k] = 1.0
    entries.flags.writeable = False
    return TargetVector(phase=p, delay=n0, kappa=k, entries=entries)


def write_matrix_csv(entries: np.ndarray, path) -> None:
    """Debug export: one CSV row per matrix row, full precision scalars."""
    entries = np.asarray(entries)
    with open(path, "w") as fh:
        for row in np.atleast_2d(entries):
            fh.write(",".join(format_scalar(x) for x in row) + "\n")
