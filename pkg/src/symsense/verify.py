"""Small-N oracle verification suite behind the `verify` CLI subcommand.

Each check pits a scalable Dicke-block computation against an independent
brute-force construction (full 2^N vectors, Kraus strings, dense partial
traces, explicit projectors).  Prints one pass/fail line per check and
returns the list of failures.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from symsense.codes import GnuParams, Label, logical_pair, make_logical
from symsense.fullspace import (
    DenseState,
    embed_sym,
    enumerate_syt,
    general_qec_smallN,
    kl_check,
    partial_trace_first,
    pauli_op,
    sequential_j2_measure,
    signal_unitary_dense,
)
from symsense.metrology import qfi_pure
from symsense.noise import amplitude_damp, delete
from symsense.qec import pflag_closed_form, qec_sense_probabilities
from symsense.symcore import SymState, apply_signal, binom


def _dense_from_branches(branches, N: int, t: int) -> np.ndarray:
    rho = np.zeros((2 ** (N - t), 2 ** (N - t)), dtype=complex)
    for br in branches:
        v = embed_sym(br.state).vec
        rho += br.weight * np.outer(v, v.conj())
    return rho


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(a - b)
    return 0.5 * float(np.sum(np.abs(evals)))


def check_deletion_oracle(rng) -> float:
    worst = 0.0
    for _ in range(12):
        N = int(rng.integers(3, 9))
        t = int(rng.integers(1, min(3, N - 1) + 1))
        psi = SymState.random(N, rng)
        dense = embed_sym(psi).vec
        rho_full = np.outer(dense, dense.conj())
        rho_traced = partial_trace_first(rho_full, N, t)
        rho_rec = _dense_from_branches(delete(psi, t), N, t)
        worst = max(worst, _trace_distance(rho_traced, rho_rec))
    return worst


def _ad_kraus_brute(psi: SymState, gamma: float) -> np.ndarray:
    N = psi.n_qubits
    vec = embed_sym(psi).vec
    rho = np.outer(vec, vec.conj())
    a0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    a1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    out = np.zeros_like(rho)
    for string in range(2**N):
        K = np.array([[1.0 + 0j]])
        for pos in range(N):
            K = np.kron(K, a1 if (string >> (N - 1 - pos)) & 1 else a0)
        out += K @ rho @ K.conj().T
    return out


def _ad_insertion_reconstruction(psi: SymState, gamma: float) -> np.ndarray:
    from itertools import combinations

    from symsense.fullspace import insert_zeros

    N = psi.n_qubits
    out = np.zeros((2**N, 2**N), dtype=complex)
    for br in amplitude_damp(psi, gamma):
        x = br.damped
        small = embed_sym(br.state).vec * math.sqrt(br.weight)
        for positions in combinations(range(1, N + 1), x):
            big = insert_zeros(small, N - x, positions)
            out += np.outer(big, big.conj()) / binom(N, x)
    return out


def check_ad_oracle(rng) -> float:
    worst = 0.0
    for gamma in (0.05, 0.3, 0.9):
        N = 6
        psi = SymState.random(N, rng)
        brute = _ad_kraus_brute(psi, gamma)
        rec = _ad_insertion_reconstruction(psi, gamma)
        worst = max(worst, _trace_distance(brute, rec))
    return worst


def check_schur_dimension() -> int:
    bad = 0
    for N in range(1, 13):
        total = sum(d.syt_count() * d.ssyt_count() for d in enumerate_syt(N))
        if total != 2**N:
            bad += 1
    return bad


def check_syt_counts() -> int:
    bad = 0
    for N in range(1, 13):
        for diagram, tabs in enumerate_syt(N).items():
            if len(tabs) != diagram.syt_count() or len(tabs) != diagram.syt_count_hooks():
                bad += 1
    return bad


def check_sequential_split(rng) -> float:
    # |01> splits 1/2 triplet (post = |D^2_1>), 1/2 singlet
    vec = np.zeros(4, dtype=complex)
    vec[1] = 1.0
    hits = {2: 0, 0: 0}
    for k in range(400):
        tab, post = sequential_j2_measure(DenseState(2, vec), np.random.default_rng(k))
        hits[tab.j_total_doubled] += 1
        if tab.j_total_doubled == 2:
            want = np.zeros(4, dtype=complex)
            want[1] = want[2] = 1.0 / math.sqrt(2.0)
            if abs(abs(np.vdot(want, post.vec)) - 1.0) > 1e-10:
                return 1.0
    return abs(hits[2] / 400.0 - 0.5)


def check_kl_gnu() -> float:
    params = GnuParams(3, 3, Fraction(1), 0)
    cw0, cw1 = logical_pair(params)
    report = kl_check([embed_sym(cw0), embed_sym(cw1)], t=1)
    theta_rot = 0.7
    u = signal_unitary_dense(params.n_qubits, theta_rot)
    rot = [DenseState(9, u @ embed_sym(cw).vec) for cw in (cw0, cw1)]
    report_rot = kl_check(rot, t=1)
    return max(report["max_violation"], report_rot["max_violation"])


def check_general_qec() -> float:
    params = GnuParams(3, 3, Fraction(1), 0)
    cw0, cw1 = logical_pair(params)
    kraus = [
        np.eye(2**9, dtype=complex),
        0.5 * pauli_op(9, (1,), ("X",)),
        0.5 * pauli_op(9, (1,), ("Z",)),
    ]
    norm = math.sqrt(1.0 + 0.25 + 0.25)
    kraus = [K / norm for K in kraus]
    rep = general_qec_smallN([embed_sym(cw0), embed_sym(cw1)], kraus, max_weight=1)
    return 1.0 - rep["entanglement_fidelity"]


def check_pflag() -> float:
    worst = 0.0
    rng = np.random.default_rng(5)
    for n in (3, 5):
        params = GnuParams(3, n, Fraction(2), 1)
        cw0, cw1 = logical_pair(params)
        for x in np.linspace(0.05, 1.4, 8):
            delta = 2.0 * x / params.g
            a = rng.random()
            b = math.sqrt(1.0 - a * a)
            psi = SymState(params.n_qubits, a * cw0.amps + b * cw1.amps)
            evolved = apply_signal(psi, delta)
            p0, p1, pf = qec_sense_probabilities(evolved, params)
            c0, c1, cf = pflag_closed_form(n, x)
            worst = max(worst, abs(p0 - c0), abs(p1 - c1), abs(pf - cf))
    return worst


def check_deletion_qfi_monotone() -> list:
    violations = []
    for g, n in ((5, 5), (7, 4), (4, 7)):
        params = GnuParams(g, n, Fraction(2), 3)
        prev = None
        from symsense.noise import deletion_qfi

        for t in range(0, min(g, n) - 1):
            val = deletion_qfi(params, t)
            if prev is not None and val > prev * (1 + 1e-12):
                violations.append((g, n, t, prev, val))
            prev = val
    return violations


def run_verification(verbose: bool = True) -> list[str]:
    rng = np.random.default_rng(2024)
    results: list[tuple[str, bool, str]] = []

    def record(name, ok, detail):
        results.append((name, ok, detail))

    worst = check_deletion_oracle(rng)
    record("deletion block form vs dense partial trace", worst <= 1e-10, f"max dist {worst:.2e}")
    worst = check_ad_oracle(rng)
    record("damping block form vs Kraus strings", worst <= 1e-10, f"max dist {worst:.2e}")
    bad = check_schur_dimension()
    record("sum syt*ssyt = 2^N for N <= 12", bad == 0, f"{bad} mismatches")
    bad = check_syt_counts()
    record("tableau counts vs hook lengths", bad == 0, f"{bad} mismatches")
    dev = check_sequential_split(rng)
    record("sequential J^2 split of |01>", dev <= 0.1, f"freq offset {dev:.3f}")
    viol = check_kl_gnu()
    record("Knill-Laflamme for the (3,3,1) code", viol <= 1e-10, f"max violation {viol:.2e}")
    infid = check_general_qec()
    record("general QEC entanglement fidelity", abs(infid) <= 1e-8, f"infidelity {infid:.2e}")
    worst = check_pflag()
    record("projection probabilities closed form", worst <= 1e-10, f"max dev {worst:.2e}")
    mono = check_deletion_qfi_monotone()
    record(
        "deletion QFI monotone in t (report only)",
        True,
        f"{len(mono)} counterexample(s)" + (f": {mono}" if mono else ""),
    )
    params = GnuParams(4, 4, Fraction(1), 0)
    qfi = qfi_pure(make_logical(params, Label.PLUS).state)
    record("plus-probe QFI = g^2 n", abs(qfi - 64.0) <= 1e-10, f"value {qfi}")

    failures = [name for name, ok, _ in results if not ok]
    if verbose:
        width = max(len(name) for name, _, _ in results)
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
        print(f"{len(results) - len(failures)}/{len(results)} checks passed")
    return failures
