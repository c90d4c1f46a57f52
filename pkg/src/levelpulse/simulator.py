"""Product unitaries, permutation verification, populations and spectra.

A pi_y pulse on one transition is the identity except for the 2x2 block
(0, 1 / -1, 0) on its two levels, with the +1 in the upper triangle of
the label-ordered basis.  Products are taken in application order with
the first pulse leftmost, so the realized permutation is read along
rows: the single unit-modulus entry of row j sits in the column the
amplitude of level j moves to, and its sign is the residual controlled
phase.  Verification is therefore phase tolerant; phases are reported,
never judged.

Populations use the high-temperature deviation model with equal unit
steps per spin flip, which keeps every equilibrium and final population
an exact small integer (or half-integer for odd N).  A stick spectrum
assigns each transition the population difference across its edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .labeler import LabelingScheme
from .permutation import Permutation
from .synthesizer import Pulse, PulseSequence
from .topology import QUADRUPOLAR_CHAIN, Labeling, Topology

__all__ = [
    "pulse_unitary",
    "sequence_unitary",
    "is_unitary",
    "Verdict",
    "verify_permutation",
    "equilibrium_populations",
    "final_populations",
    "Stick",
    "stick_spectrum",
    "serialize_spectrum",
]

TOLERANCE = 1e-9


def pulse_unitary(pulse: "Pulse | tuple[int, int]", dim: int) -> np.ndarray:
    """Matrix of one transition-selective pi_y pulse.

    The +1 entry sits in the row of the level carrying the lower label
    (for bare level pairs the labels default to the levels themselves).
    Applying the pulse twice leaves a -1 phase on both levels (a 2 pi
    rotation) and the identity elsewhere.
    """
    if isinstance(pulse, Pulse):
        a, b = pulse.levels
        lo, hi = (a, b) if pulse.label_a < pulse.label_b else (b, a)
    else:
        a, b = pulse
        lo, hi = min(a, b), max(a, b)
    if a == b:
        raise ValueError("pulse levels must differ")
    if not (0 <= min(a, b) and max(a, b) < dim):
        raise ValueError("pulse levels ({}, {}) out of range for dim {}".format(a, b, dim))
    m = np.eye(dim, dtype=complex)
    m[lo, lo] = m[hi, hi] = 0.0
    m[lo, hi] = 1.0
    m[hi, lo] = -1.0
    return m


def sequence_unitary(
    seq: "PulseSequence | Iterable[Pulse | tuple[int, int]]", dim: int | None = None
) -> np.ndarray:
    """Product of a pulse sequence in application order.

    The first pulse is the leftmost factor; an empty sequence gives the
    identity.
    """
    if isinstance(seq, PulseSequence):
        pulses: Sequence = seq.pulses
        dim = 1 << seq.n_qubits
    else:
        pulses = list(seq)
        if dim is None:
            raise ValueError("dim is required when passing a bare pulse list")
    u = np.eye(dim, dtype=complex)
    for pulse in pulses:
        u = u @ pulse_unitary(pulse, dim)
    return u


def is_unitary(u: np.ndarray, tol: float = TOLERANCE) -> bool:
    dim = u.shape[0]
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(dim))) <= tol)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a phase-tolerant permutation check.

    ``realized`` is the level permutation actually implemented (largest
    entry per row) and ``phases`` the diagonal phase picked up by each
    input state.  ``problems`` lists the mismatches on failure.
    """

    passed: bool
    realized: tuple[int, ...]
    phases: tuple[complex, ...]
    problems: tuple[str, ...] = ()


def verify_permutation(
    u: np.ndarray,
    p: Permutation,
    scheme: LabelingScheme,
    tol: float = TOLERANCE,
) -> Verdict:
    """Check that a product unitary realizes a truth table up to phases.

    Every row must hold exactly one entry of modulus 1 (within ``tol``,
    all others below ``tol``), located at the level the scheme maps the
    row's output label to.
    """
    labeling = scheme.labeling
    dim = u.shape[0]
    if dim != p.size:
        raise ValueError("unitary dimension {} does not match 2^N = {}".format(dim, p.size))
    realized = []
    phases = []
    problems = []
    for row in range(dim):
        mags = np.abs(u[row])
        col = int(np.argmax(mags))
        realized.append(col)
        phases.append(complex(u[row, col]))
        expected = labeling.level_of(p(labeling.label_of(row)))
        others = np.delete(mags, col)
        if abs(mags[col] - 1.0) > tol or (others.size and np.max(others) > tol):
            problems.append("row {} is not a pure transposition entry".format(row))
        elif col != expected:
            problems.append(
                "level {} maps to level {}, expected {}".format(row, col, expected)
            )
    return Verdict(not problems, tuple(realized), tuple(phases), tuple(problems))


def equilibrium_populations(t: Topology, scheme: LabelingScheme | None = None) -> np.ndarray:
    """Deviation populations at thermal equilibrium.

    Each level's population counts its spin-up content: N/2 minus the
    number of set bits in the level index, so one spin flip changes the
    value by exactly 1 and the populations sum to zero.  The labeling
    scheme does not enter; populations are physical per level.
    """
    n = t.n_qubits
    return np.array([n / 2 - bin(level).count("1") for level in range(t.level_count)])


def _induced(p: Permutation, labeling: Labeling) -> list[int]:
    return [labeling.level_of(p(labeling.label_of(lv))) for lv in range(p.size)]


def final_populations(
    eq: np.ndarray, p: Permutation, scheme: LabelingScheme
) -> np.ndarray:
    """Populations after the operation: each one moves with its state.

    The level ending up with output label y holds the population that
    started on the level carrying the input label mapped to y.
    """
    sigma = _induced(p, scheme.labeling)
    inv = [0] * len(sigma)
    for src, dst in enumerate(sigma):
        inv[dst] = src
    return np.array([eq[inv[lv]] for lv in range(len(sigma))])


@dataclass(frozen=True)
class Stick:
    """One transition line: flipped spin, spectator label and intensity.

    For the chain the spin index is 0 and the transition is named by its
    magnetic quantum number pair.
    """

    spin: int
    transition: str
    level_a: int
    level_b: int
    intensity: int


def _fmt_m(m: Fraction) -> str:
    return ("+{}" if m >= 0 else "{}").format(m)


def stick_spectrum(
    pop: np.ndarray, t: Topology, scheme: LabelingScheme | None = None
) -> tuple[Stick, ...]:
    """One stick per transition, intensity = population difference.

    The lower-index endpoint comes first.  Hypercube sticks are grouped
    by flipped spin (1..N, spin 1 the most significant bit) and ordered
    by spectator state; chain sticks follow the level order.
    """
    sticks = []
    if t.kind == QUADRUPOLAR_CHAIN:
        for a in range(t.level_count - 1):
            b = a + 1
            name = "{}->{}".format(
                _fmt_m(t.magnetic_quantum_number(a)), _fmt_m(t.magnetic_quantum_number(b))
            )
            sticks.append(Stick(0, name, a, b, _as_int(pop[a] - pop[b])))
        return tuple(sticks)
    n = t.n_qubits
    for spin in range(1, n + 1):
        bit = 1 << (n - spin)
        for a in range(t.level_count):
            if a & bit:
                continue
            b = a | bit
            spectator = "".join(
                str((a >> (n - s)) & 1) for s in range(1, n + 1) if s != spin
            )
            sticks.append(Stick(spin, spectator, a, b, _as_int(pop[a] - pop[b])))
    return tuple(sticks)


def _as_int(x: float) -> int:
    r = round(float(x))
    if abs(x - r) > 1e-12:
        raise ValueError("stick intensity {} is not integral".format(x))
    return int(r)


def serialize_spectrum(sticks: Sequence[Stick], ascii_bars: bool = False) -> str:
    """Text table of a stick spectrum, one transition per line."""
    lines = ["spin  transition  intensity"]
    for s in sticks:
        spin = "I{}".format(s.spin) if s.spin else "q"
        row = "{}  {}  {:+d}".format(spin, s.transition, s.intensity)
        if ascii_bars:
            bar = ("#" * s.intensity) if s.intensity > 0 else ("-" * (-s.intensity))
            row = "{}  |{}".format(row, bar)
        lines.append(row)
    return "\n".join(lines)
