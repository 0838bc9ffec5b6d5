"""Core filter-bank data model.

A C-channel filter bank with D-fold subsampling is stored as a (C, m)
tap matrix plus a role tag (analysis or synthesis).  This module owns the
polyphase splitting of tap sequences (index residues modulo D), the
admissible reconstruction-delay range, and the plain-text serialization
format shared by the CLI tools.

Conventions
-----------
* All filters are causal with support [0, m).  Every channel has the same
  length; shorter filters must be zero-padded by the caller.
* The p-th polyphase component of a length-m filter f collects the taps
  with index congruent to p modulo D, i.e. f_p[n] = f[nD + p].  Its length
  is ceil((m - p) / D).  This convention is used for both analysis and
  synthesis banks and is certified end to end by the time-domain
  reconstruction oracle in :mod:`ofbank.feasibility`.
* Scalars live in the complex field.  Real-valued banks are the zero
  imaginary-part embedding and are stored compactly as float64.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

ROLES = ("analysis", "synthesis")


def ceil_div(a: int, b: int) -> int:
    """Exact integer ceil(a / b) for b > 0."""
    return -(a // -b)


@dataclass(frozen=True)
class FilterBank:
    """Immutable bank of C equal-length causal FIR filters.

    Parameters
    ----------
    taps : ndarray, shape (C, filter_length)
        One row of filter coefficients per channel.  Real input is kept
        as float64, anything else is promoted to complex128.
    subsampling : int
        The subsampling factor D shared by all channels.
    role : {"analysis", "synthesis"}
        Which side of the bank structure the filters sit on.
    """

    taps: np.ndarray
    subsampling: int
    role: str = "analysis"

    def __post_init__(self):
        taps = np.asarray(self.taps)
        if taps.ndim != 2 or taps.size == 0:
            raise DomainError("taps must be a nonempty (channels, length) array")
        if np.iscomplexobj(taps):
            taps = taps.astype(np.complex128)
        else:
            taps = taps.astype(np.float64)
        taps = np.ascontiguousarray(taps)
        taps.flags.writeable = False
        object.__setattr__(self, "taps", taps)
        if self.role not in ROLES:
            raise DomainError(f"role must be one of {ROLES}, got {self.role!r}")
        D = self.subsampling
        if not isinstance(D, (int, np.integer)) or D < 1:
            raise DomainError("subsampling factor must be a positive integer")
        object.__setattr__(self, "subsampling", int(D))
        if self.filter_length < D:
            # A filter shorter than D leaves an empty polyphase component.
            raise DomainError(
                f"filter length {self.filter_length} must be >= subsampling {D}"
            )

    @classmethod
    def analysis(cls, taps, subsampling: int) -> "FilterBank":
        return cls(taps, subsampling, "analysis")

    @classmethod
    def synthesis(cls, taps, subsampling: int) -> "FilterBank":
        return cls(taps, subsampling, "synthesis")

    @property
    def channels(self) -> int:
        return self.taps.shape[0]

    @property
    def filter_length(self) -> int:
        return self.taps.shape[1]

    def scaled(self, factor: complex) -> "FilterBank":
        """Same bank with every tap multiplied by a nonzero scalar."""
        if factor == 0:
            raise DomainError("scale factor must be nonzero")
        return FilterBank(self.taps * factor, self.subsampling, self.role)

    def digest(self) -> str:
        """Short content hash, used to tag designs with their input bank."""
        h = hashlib.sha256()
        h.update(f"{self.channels} {self.subsampling} "
                 f"{self.filter_length} {self.role}".encode())
        h.update(np.ascontiguousarray(self.taps).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class PolyphaseComponent:
    """One polyphase branch of one channel.

    ``channel`` is the 1-based channel index, ``phase`` the residue class
    p, and ``taps`` the subsequence f[p], f[p+D], ... of length
    ceil((m - p) / D).
    """

    channel: int
    phase: int
    taps: np.ndarray


def polyphase_lengths(m_alpha: int, D: int) -> tuple[int, ...]:
    """Component lengths (ceil((m_alpha - p) / D) for p = 0..D-1).

    The lengths sum to m_alpha, each lies in {floor(m_alpha/D),
    ceil(m_alpha/D)}, and the floor is always attained.
    """
    if m_alpha < 1 or D < 1:
        raise DomainError("m_alpha and D must be positive")
    return tuple(ceil_div(m_alpha - p, D) for p in range(D))


def polyphase_split(taps: np.ndarray, D: int) -> list[np.ndarray]:
    """Split one tap sequence into its D residue subsequences."""
    return [taps[p::D] for p in range(D)]


def polyphase_decompose(bank: FilterBank) -> list[list[PolyphaseComponent]]:
    """Decompose every channel; result is indexed as [phase][channel-1]."""
    D = bank.subsampling
    grid = []
    for p in range(D):
        row = []
        for i in range(bank.channels):
            comp = bank.taps[i, p::D].copy()
            comp.flags.writeable = False
            row.append(PolyphaseComponent(channel=i + 1, phase=p, taps=comp))
        grid.append(row)
    return grid


def interleave(components: list[np.ndarray], D: int) -> np.ndarray:
    """Inverse of :func:`polyphase_split`: reassemble a tap sequence.

    ``components[p]`` supplies the taps at indices congruent to p mod D.
    Component lengths must form a valid polyphase profile.
    """
    if len(components) != D:
        raise DomainError(f"expected {D} components, got {len(components)}")
    m = sum(len(c) for c in components)
    if polyphase_lengths(m, D) != tuple(len(c) for c in components):
        raise DomainError("component lengths are not a polyphase profile")
    dtype = np.result_type(*[np.asarray(c).dtype for c in components])
    out = np.zeros(m, dtype=dtype)
    for p, comp in enumerate(components):
        out[p::D] = comp
    return out


def delay_range(m_h: int, m_v: int, D: int) -> range:
    """Admissible reconstruction delays n0 for given filter lengths.

    All n0 >= 0 with ceil(n0 / D) <= floor(m_h/D) + floor(m_v/D) - 2.
    May be empty.  Larger delays would need zero-padded filters.
    """
    if m_h < D:
        raise DomainError("analysis length must be >= subsampling factor")
    if m_v < 1 or D < 1:
        raise DomainError("m_v and D must be positive")
    bound = m_h // D + m_v // D - 2
    if bound < 0:
        return range(0)
    return range(0, D * bound + 1)


# -- plain-text bank format -------------------------------------------------
#
# Header line: "C D m_len role", then C lines of m_len whitespace-separated
# scalars, each "re" or "re+imJ".


def format_scalar(x: complex) -> str:
    x = complex(x)
    if x.imag == 0.0:
        return repr(x.real)
    sign = "+" if x.imag >= 0 else "-"
    return f"{x.real!r}{sign}{abs(x.imag)!r}J"


def parse_scalar(token: str) -> complex:
    try:
        return complex(token.replace("J", "j"))
    except ValueError as exc:
        raise DomainError(f"bad scalar token {token!r}") from exc


def dumps_bank(bank: FilterBank) -> str:
    lines = [f"{bank.channels} {bank.subsampling} {bank.filter_length} {bank.role}"]
    for i in range(bank.channels):
        lines.append(" ".join(format_scalar(x) for x in bank.taps[i]))
    return "\n".join(lines) + "\n"


def loads_bank(text: str) -> FilterBank:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty bank file")
    head = lines[0].split()
    if len(head) != 4:
        raise DomainError("header must be 'C D m_len role'")
    try:
        C, D, m_len = int(head[0]), int(head[1]), int(head[2])
    except ValueError as exc:
        raise DomainError("non-integer field in header") from exc
    role = head[3]
    if len(lines) - 1 != C:
        raise DomainError(f"expected {C} tap lines, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [parse_scalar(tok) for tok in ln.split()]
        if len(row) != m_len:
            raise DomainError(f"expected {m_len} taps per line, got {len(row)}")
        rows.append(row)
    taps = np.array(rows, dtype=np.complex128)
    if np.all(taps.imag == 0.0):
        taps = taps.real.copy()
    return FilterBank(taps, D, role)


def write_bank(bank: FilterBank, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_bank(bank))


def read_bank(path) -> FilterBank:
    with open(path) as fh:
        return loads_bank(fh.read())
