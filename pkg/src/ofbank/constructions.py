"""Certificate banks witnessing generic rank of the phase systems.

Because every entry of a phase system matrix is a degree-<=1 polynomial in
the analysis taps, exhibiting a single tap assignment with full rank
proves the rank property for almost every bank.  Two cursor automata
build such 0/1 witnesses over the block-Toeplitz structure:

* ``algorithm1_bank``: assigns one diagonal of ones per block-column so
  that every column has at most one nonzero and every row at least one,
  which forces full row rank.  Succeeds whenever the synthesis length is
  at least the sufficient length.
* ``algorithm2_bank``: starts the first diagonal one block below the top
  band and marches strictly downward, so each row has at most one nonzero
  and each column at least one, forcing full column rank; a final
  top-diagonal assignment makes the delay target provably independent of
  the column space.  Succeeds whenever the synthesis length is below the
  necessary length.

Both automata walk a cursor over (block-row, start offset) states; a
start offset is admissible in block-row ell only while it indexes an
actual kernel entry (offset <= m_{h;ell} - 1), everything below being
structurally zero.  Verification uses exact rational elimination, never
floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DomainError
from .fb_core import FilterBank, ceil_div, polyphase_lengths, read_bank, write_bank
from .lengths import necessary_length
from .polyphase_matrix import build_Hp, kappa

ROW_RANK_CERT = "row_rank_cert"
COL_RANK_CERT = "col_rank_cert"


@dataclass(frozen=True)
class CertificateBank:
    """A 0/1 analysis bank together with its construction metadata.

    ``assignments[i]`` lists the tap indices set to one in channel i+1
    (at most one, except the doubly-assigned channel of a column-rank
    certificate).  ``phase`` is the phase whose system the construction
    certifies; row-rank certificates built at the narrowest phase hold
    for every phase.
    """

    bank: FilterBank
    kind: str
    m_v: int
    phase: int
    n0: int | None
    assignments: tuple[tuple[int, ...], ...]


def _delta_bank(C: int, D: int, m_h: int,
                assignments: list[list[int]]) -> FilterBank:
    taps = np.zeros((C, m_h))
    for i, idxs in enumerate(assignments):
        for t in idxs:
            taps[i, t] = 1.0
    return FilterBank.analysis(taps, D)


def _pre(C: int, D: int, m_h: int, m_v: int) -> None:
    if C < 2 * D:
        raise DomainError(f"certificate constructions need C >= 2D (C={C}, D={D})")
    if m_h < D:
        raise DomainError("analysis length must be >= subsampling factor")
    if m_v < D:
        raise DomainError("synthesis length must be >= subsampling factor")


def algorithm1_bank(C: int, D: int, m_h: int, m_v: int) -> CertificateBank | None:
    """Build a full-row-rank witness, or None when the last row stays
    uncovered (only possible below the sufficient length).

    The construction runs on the narrowest phase geometry
    w = floor(m_v / D); the produced bank then covers every phase, since
    wider blocks only lengthen each assigned diagonal.
    """
    _pre(C, D, m_h, m_v)
    w = m_v // D
    mh = polyphase_lengths(m_h, D)
    p0 = m_v % D
    assignments: list[list[int]] = [[] for _ in range(C)]
    ell = 0        # block-row being covered
    r_next = 0     # next uncovered offset inside block-row ell
    in_row = 0     # diagonals spent on block-row ell
    last_state = (-1, -1)
    for k in range(C):
        if ell >= D:
            break  # all rows covered; remaining channels stay zero
        if r_next <= mh[ell] - 1:
            q = r_next                 # extend the running diagonal
        else:
            q = mh[ell] - 1            # restart just above the structural zeros
        assert (ell, q) > last_state, "cursor must never revisit a block-row"
        last_state = (ell, q)
        assignments[k].append(q * D + ell)
        in_row += 1
        if q == mh[ell] - 1:           # diagonal reaches the block-row bottom
            expect = ceil_div(mh[ell] + w - 1, w)
            assert in_row == expect, (
                f"block-row {ell} consumed {in_row} columns, expected {expect}")
            ell += 1
            r_next = 0
            in_row = 0
        else:
            r_next = q + w
    if ell < D:
        return None
    return CertificateBank(
        bank=_delta_bank(C, D, m_h, assignments),
        kind=ROW_RANK_CERT, m_v=m_v, phase=p0, n0=None,
        assignments=tuple(tuple(a) for a in assignments),
    )


def algorithm2_bank(C: int, D: int, m_h: int, m_v: int,
                    n0: int) -> CertificateBank | None:
    """Build a witness that the delay-n0 target escapes the column space
    of the narrowest phase system, or None when the downward march runs
    out of free entries.

    Requires m_v below the necessary length, which guarantees the first
    assignment (offset w in the top block-row) indexes a real kernel
    entry and, counting-wise, that the march never fails.
    """
    _pre(C, D, m_h, m_v)
    if m_h <= D:
        raise DomainError("needs analysis length > subsampling factor")
    mv_N = necessary_length(C, D, m_h)
    if m_v >= mv_N:
        raise DomainError(f"m_v={m_v} must be below the necessary length {mv_N}")
    p0 = m_v % D
    w = m_v // D
    mh = polyphase_lengths(m_h, D)
    krow = kappa(p0, n0, m_h, m_v, D)    # validates the delay as well
    assert mh[0] > w, "top component too short for the off-band start"

    assignments: list[list[int]] = [[] for _ in range(C)]
    covers: list[tuple[int, int, int]] = []   # (channel, block-row, offset)
    ell, q = 0, w
    assignments[0].append(q * D + ell)
    covers.append((0, ell, q))
    in_row = 1
    for k in range(1, C):
        if q + w <= mh[ell] - 1:
            q = q + w                   # extend the running diagonal
            in_row += 1
        else:
            # structural zeros block the extension; the block-row is
            # exhausted, restart at the top of the next one
            expect = (mh[0] - 1) // w if ell == 0 else (mh[ell] + w - 1) // w
            assert in_row == expect, (
                f"block-row {ell} hosted {in_row} columns, expected {expect}")
            ell += 1
            q = 0
            in_row = 1
            if ell >= D:
                return None             # no free entries left
        assignments[k].append(q * D + ell)
        covers.append((k, ell, q))

    # Locate the block-column holding a nonzero in the target row; give
    # that channel an extra one on the top diagonal, pinning the target
    # outside the column space.  A bare target row needs no extra.
    offs = [0]
    for m_ell in mh:
        offs.append(offs[-1] + m_ell + w - 1)
    c_star = None
    for ch, l, qq in covers:
        if offs[l] + qq <= krow <= offs[l] + qq + w - 1:
            c_star = ch
            break
    if c_star is not None:
        assignments[c_star].append(0)
    return CertificateBank(
        bank=_delta_bank(C, D, m_h, assignments),
        kind=COL_RANK_CERT, m_v=m_v, phase=p0, n0=n0,
        assignments=tuple(tuple(a) for a in assignments),
    )


def exact_rank(matrix) -> int:
    """Rank over the rationals by exact Gaussian elimination.

    Entries must be integral (certificate matrices are 0/1).
    """
    arr = np.asarray(matrix)
    if arr.size == 0:
        return 0
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise DomainError("exact rank expects integral entries")
        arr = arr.real
    if np.any(arr != np.round(arr)):
        raise DomainError("exact rank expects integral entries")
    rows = [[Fraction(int(x)) for x in row] for row in arr.astype(np.int64)]
    n, m = len(rows), len(rows[0])
    rank = 0
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        for i in range(r + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        rank += 1
        r += 1
        if r == n:
            break
    return rank


@dataclass(frozen=True)
class RankCheck:
    phase: int
    rank: int
    expected: int
    shape: tuple[int, int]

    @property
    def ok(self) -> bool:
        return self.rank == self.expected


@dataclass(frozen=True)
class CertificateReport:
    kind: str
    checks: tuple[RankCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[str]:
        return [f"phase {c.phase}: rank {c.rank} < expected {c.expected} "
                f"on shape {c.shape}" for c in self.checks if not c.ok]


def verify_certificate(cert: CertificateBank) -> CertificateReport:
    """Certify a certificate by exact rank computation.

    Row-rank witnesses must give full row rank at every phase;
    column-rank witnesses must give a full-column-rank augmented system
    [H | delta] at the certified phase.
    """
    bank = cert.bank
    D = bank.subsampling
    checks = []
    if cert.kind == ROW_RANK_CERT:
        for p in range(D):
            H = build_Hp(bank, cert.m_v, p)
            rank = exact_rank(H.entries)
            checks.append(RankCheck(p, rank, H.rows, (H.rows, H.cols)))
    elif cert.kind == COL_RANK_CERT:
        p = cert.phase
        H = build_Hp(bank, cert.m_v, p)
        k = kappa(p, cert.n0, bank.filter_length, cert.m_v, D)
        aug = np.zeros((H.rows, H.cols + 1))
        aug[:, :-1] = H.entries.real
        aug[k, -1] = 1.0
        rank = exact_rank(aug)
        checks.append(RankCheck(p, rank, H.cols + 1, (H.rows, H.cols + 1)))
    else:
        raise DomainError(f"unknown certificate kind {cert.kind!r}")
    return CertificateReport(kind=cert.kind, checks=tuple(checks))


def save_certificate(cert: CertificateBank, path) -> None:
    """Write the bank in the text format plus a JSON assignment sidecar."""
    path = Path(path)
    write_bank(cert.bank, path)
    sidecar = {
        "kind": cert.kind,
        "m_v": cert.m_v,
        "phase": cert.phase,
        "n0": cert.n0,
        "assignments": [list(a) for a in cert.assignments],
    }
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(sidecar, indent=2) + "\n")


def load_certificate(path) -> CertificateBank:
    path = Path(path)
    bank = read_bank(path)
    meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    return CertificateBank(
        bank=bank,
        kind=meta["kind"],
        m_v=meta["m_v"],
        phase=meta["phase"],
        n0=meta["n0"],
        assignments=tuple(tuple(a) for a in meta["assignments"]),
    )
