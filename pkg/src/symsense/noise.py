"""Deletion and amplitude-damping channels on symmetric states, in block form.

Both channels map a pure symmetric state to a mixture of pure symmetric states
on fewer qubits: deletions produce t+1 branches labelled by the weight shift a,
amplitude damping produces N+1 branches labelled by the damped-excitation
count x (insertion positions are traced out, which is harmless because every
downstream quantity depends only on the branch states).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from symsense.codes import GnuParams
from symsense.symcore import SymEnsemble, SymState, log_binom, sqrt_binom_ratio, binom

PRUNE_EPS = 1e-15


class BranchList(list):
    """Channel branches plus the total probability mass pruned as negligible."""

    def __init__(self, items=(), pruned_mass: float = 0.0):
        super().__init__(items)
        self.pruned_mass = pruned_mass

    def as_ensemble(self) -> SymEnsemble:
        """The block-diagonal mixture the channel produced."""
        return SymEnsemble(tuple((br.weight, br.state) for br in self))


@dataclass(frozen=True)
class DeletionOutcome:
    """One branch of the t-deletion channel: weight = C(t,a) * <psi_a|psi_a>."""

    shift: int
    weight: float
    state: SymState  # normalized


@dataclass(frozen=True)
class ADOutcome:
    """One branch of the amplitude-damping channel: weight = <phi_x|phi_x>."""

    damped: int
    weight: float
    state: SymState  # normalized


def delete(state: SymState, t: int) -> list[DeletionOutcome]:
    """Trace out t unknown qubits of a normalized symmetric state.

    Branch a (a = 0..t) keeps amplitude
    ``a_w * sqrt(C(N-t, w-a) / C(N, w))`` at the new weight w - a; the branch
    probabilities C(t,a) <psi_a|psi_a> sum to one.  Branches below the pruning
    threshold are dropped and their mass is reported on the surviving ones'
    ``weight`` total (diagnosed by the caller via the sum).
    """
    N = state.n_qubits
    if not 1 <= t <= N:
        raise ValueError(f"deletion count t={t} outside 1..{N}")
    M = N - t
    outcomes = BranchList()
    for a in range(t + 1):
        amps = np.zeros(M + 1, dtype=complex)
        for w in range(a, M + a + 1):
            if state.amps[w] != 0:
                amps[w - a] = state.amps[w] * sqrt_binom_ratio(M, w - a, N, w)
        nsq = float(np.vdot(amps, amps).real)
        weight = binom(t, a) * nsq
        if weight <= PRUNE_EPS:
            outcomes.pruned_mass += weight
            continue
        outcomes.append(DeletionOutcome(a, weight, SymState(M, amps / math.sqrt(nsq))))
    return outcomes


def amplitude_damp(state: SymState, gamma_ad: float) -> list[ADOutcome]:
    """Amplitude-damping channel with per-qubit decay probability gamma.

    Branch x carries ``|phi_x> = sum_w a_w sqrt(p_w(x)) |D^{N-x}_{w-x}>`` with
    ``p_w(x) = C(w,x) gamma^x (1-gamma)^(w-x)``; branch weights sum to one.
    """
    if not 0.0 <= gamma_ad <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma_ad}")
    N = state.n_qubits
    outcomes = BranchList()
    for x in range(N + 1):
        amps = np.zeros(N - x + 1, dtype=complex)
        for w in range(x, N + 1):
            if state.amps[w] == 0:
                continue
            # p_w(x) in log space: C(w,x) can be huge while p_w(x) is tiny
            if gamma_ad == 0.0:
                if x != 0:
                    continue
                pwx = 1.0 * (1.0 - gamma_ad) ** w
            elif gamma_ad == 1.0:
                pwx = 1.0 if x == w else 0.0
            else:
                log_p = (
                    log_binom(w, x)
                    + x * math.log(gamma_ad)
                    + (w - x) * math.log1p(-gamma_ad)
                )
                pwx = math.exp(log_p)
            if pwx > 0.0:
                amps[w - x] = state.amps[w] * math.sqrt(pwx)
        nsq = float(np.vdot(amps, amps).real)
        if nsq <= PRUNE_EPS:
            outcomes.pruned_mass += nsq
            continue
        outcomes.append(ADOutcome(x, nsq, SymState(N - x, amps / math.sqrt(nsq))))
    return outcomes


def deletion_qfi(params: GnuParams, t: int) -> float:
    """QFI of the logical plus probe after t deletions, by the branch formula.

    Valid for g, n >= t+1, where the branches are supported on distinct
    weights modulo g and the QFI is the convex combination
    ``4 sum_a C(t,a) n_a v_a`` of per-branch variances.
    """
    if t == 0:
        return float(params.g**2 * params.n)
    if params.g < t + 1 or params.n < t + 1:
        raise ValueError(
            f"branch orthogonality needs g, n >= t+1; got g={params.g}, n={params.n}, t={t}"
        )
    N = params.n_qubits
    M = N - t
    n = params.n
    total = 0.0
    for a in range(t + 1):
        # subnormalized branch of |+_L>: amplitude 2^{-n/2} sqrt(C(n,k)) * ratio
        probs = np.zeros(n + 1)
        wts = np.zeros(n + 1)
        for k in range(n + 1):
            w = params.s + params.g * k
            r = sqrt_binom_ratio(M, w - a, N, w)
            probs[k] = 2.0**-n * binom(n, k) * r * r
            wts[k] = w - a
        na = probs.sum()
        if na <= 0.0:
            continue
        p = probs / na
        m1 = float(p @ wts)
        va = float(p @ wts**2) - m1 * m1
        total += binom(t, a) * na * va
    return 4.0 * total


def ad_qfi_bound(params: GnuParams, gamma_ad: float) -> float:
    """Convexity upper bound ``4 sum_x n_x q_x`` on the post-damping QFI.

    n_x and the per-branch variances q_x are evaluated from the closed-form
    damping weights p_w(x) on the code lattice, independently of the
    :func:`amplitude_damp` channel decomposition (which the tests replay
    against this formula).
    """
    if not 0.0 <= gamma_ad <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma_ad}")
    if gamma_ad == 0.0:
        return float(params.g**2 * params.n)
    g, n, s = params.g, params.n, params.s
    N = params.n_qubits
    total = 0.0
    for x in range(N + 1):
        probs = []
        wts = []
        for k in range(n + 1):
            w = s + g * k
            if x > w:
                continue
            if gamma_ad == 1.0:
                pwx = 1.0 if x == w else 0.0
            else:
                pwx = math.exp(
                    log_binom(w, x) + x * math.log(gamma_ad) + (w - x) * math.log1p(-gamma_ad)
                )
            probs.append(2.0**-n * binom(n, k) * pwx)
            wts.append(float(w - x))
        if not probs:
            continue
        probs = np.array(probs)
        wts = np.array(wts)
        nx = probs.sum()
        if nx <= 0.0:
            continue
        p = probs / nx
        m1 = float(p @ wts)
        qx = float(p @ wts**2) - m1 * m1
        total += nx * qx
    return 4.0 * total
