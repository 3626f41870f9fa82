"""gnu and shifted-gnu codewords and code-level predicates.

A (g, n, u, s) code lives on N = g*n*u + s qubits and supports its codewords
on the weight lattice {g*k + s : k = 0..n}; logical zero (one) carries the
even-k (odd-k) half of a binomial profile.  The code distance is min(g, n).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from symsense.symcore import SymState, as_fraction, binom


class Label(Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class GnuParams:
    """Code parameters (g, n, u, s) with derived qubit count N = g n u + s.

    ``u`` is kept as an exact rational so integrality of N is checked in
    integer arithmetic; a non-integer N is rejected at construction.
    """

    g: int
    n: int
    u: Fraction = Fraction(1)
    s: int = 0

    def __post_init__(self):
        object.__setattr__(self, "u", as_fraction(self.u))
        if self.g < 1 or self.n < 1:
            raise ValueError("g and n must be positive integers")
        if self.u < 1:
            raise ValueError("u must be >= 1")
        if self.s < 0:
            raise ValueError("shift s must be non-negative")
        gnu = self.g * self.n * self.u
        if gnu.denominator != 1:
            raise ValueError(f"g*n*u = {gnu} is not an integer")

    @property
    def n_qubits(self) -> int:
        return int(self.g * self.n * self.u) + self.s

    def distance(self) -> int:
        return min(self.g, self.n)

    def weight_lattice(self) -> np.ndarray:
        """Weights g*k + s for k = 0..n."""
        return self.s + self.g * np.arange(self.n + 1)

    def with_shift(self, s: int, n_qubits: int) -> "GnuParams":
        """Same (g, n) code on a different qubit count / shift (e.g. after deletions)."""
        gnu = n_qubits - s
        if gnu <= 0:
            raise ValueError("shift too large for the requested qubit count")
        return GnuParams(self.g, self.n, Fraction(gnu, self.g * self.n), s)


@dataclass(frozen=True)
class LogicalState:
    params: GnuParams
    label: Label
    state: SymState


def _binomial_profile(params: GnuParams) -> np.ndarray:
    n = params.n
    return np.array([math.sqrt(binom(n, k)) for k in range(n + 1)]) * 2.0 ** (-(n - 1) / 2)


def make_logical(params: GnuParams, label: Label | str) -> LogicalState:
    """Construct a logical codeword of the shifted gnu code.

    Zero/One carry the even-k/odd-k binomial amplitudes on weights g*k+s;
    Plus and Minus are their sum and difference over sqrt(2).  Minus is
    provided because the protocol readout measures in the plus-minus basis.
    """
    if isinstance(label, str):
        label = Label(label.lower())
    N = params.n_qubits
    profile = _binomial_profile(params)
    amps = np.zeros(N + 1, dtype=complex)
    lattice = params.weight_lattice()
    if label is Label.ZERO:
        sel = np.arange(params.n + 1) % 2 == 0
        amps[lattice[sel]] = profile[sel]
    elif label is Label.ONE:
        sel = np.arange(params.n + 1) % 2 == 1
        amps[lattice[sel]] = profile[sel]
    else:
        signs = np.ones(params.n + 1)
        if label is Label.MINUS:
            signs[1::2] = -1.0
        amps[lattice] = profile * signs / math.sqrt(2.0)
    return LogicalState(params, label, SymState(N, amps))


def logical_pair(params: GnuParams) -> tuple[SymState, SymState]:
    """(|0_L>, |1_L>) as plain states."""
    return make_logical(params, Label.ZERO).state, make_logical(params, Label.ONE).state


def code_projector_overlap(params: GnuParams, state: SymState) -> tuple[float, float, float]:
    """(p_plus, p_minus, p_other) for a normalized state against this code.

    p_other is the leakage out of the span of the logical plus/minus pair and
    can be a small negative float-noise number, bounded below by -1e-12.
    """
    plus = make_logical(params, Label.PLUS).state
    minus = make_logical(params, Label.MINUS).state
    p_plus = abs(plus.inner(state)) ** 2
    p_minus = abs(minus.inner(state)) ** 2
    return p_plus, p_minus, 1.0 - p_plus - p_minus


def codeword_to_json(logical: LogicalState) -> str:
    """Serialize a codeword as {g,n,u:"p/q",s,label,amps:[{w,re,im}]}."""
    p = logical.params
    amps = [
        {"w": int(w), "re": float(a.real), "im": float(a.imag)}
        for w, a in enumerate(logical.state.amps)
        if a != 0
    ]
    doc = {
        "g": p.g,
        "n": p.n,
        "u": f"{p.u.numerator}/{p.u.denominator}",
        "s": p.s,
        "label": logical.label.value,
        "amps": amps,
    }
    return json.dumps(doc)


def codeword_from_json(text: str) -> LogicalState:
    doc = json.loads(text)
    params = GnuParams(doc["g"], doc["n"], Fraction(doc["u"]), doc["s"])
    amps = np.zeros(params.n_qubits + 1, dtype=complex)
    for entry in doc["amps"]:
        amps[entry["w"]] = entry["re"] + 1j * entry["im"]
    return LogicalState(params, Label(doc["label"]), SymState(params.n_qubits, amps))
