"""Dense small-N certification: tableaux, sequential measurement, KL, recovery.

Everything the scalable Dicke-block code claims is re-derived here on full
2^N vectors: Schur-Weyl dimension counting, the sequential total-angular-
momentum measurement, the Knill-Laflamme residuals of a distance-3 code (and
its signal-rotated images), and an end-to-end project-and-recover QEC round.
"""

import math
from fractions import Fraction

import numpy as np

from symsense.codes import GnuParams, logical_pair
from symsense.fullspace import (
    DenseState,
    embed_sym,
    enumerate_syt,
    general_qec_smallN,
    kl_check,
    pauli_op,
    sequential_j2_measure,
    signal_unitary_dense,
)

print("Schur-Weyl bookkeeping (two-row diagrams):")
for N in (2, 6, 10, 12):
    tabs = enumerate_syt(N)
    total = sum(len(v) * d.ssyt_count() for d, v in tabs.items())
    print(f"  N={N:2d}: {len(tabs)} diagrams, sum syt*ssyt = {total} = 2^{N}")

print("\nsequential J^2 measurement of |01>:")
vec = np.zeros(4, dtype=complex)
vec[1] = 1.0
outcomes = {0: 0, 2: 0}
for seed in range(2000):
    tab, post = sequential_j2_measure(DenseState(2, vec), np.random.default_rng(seed))
    outcomes[tab.j_total_doubled] += 1
print(f"  triplet : singlet = {outcomes[2]} : {outcomes[0]} (expected 1:1)")

params = GnuParams(3, 3, Fraction(1), 0)
cw0, cw1 = logical_pair(params)
states = [embed_sym(cw0), embed_sym(cw1)]
print(f"\nKnill-Laflamme for the (g=3, n=3) code on N = 9, weight <= 2 errors:")
print(f"  max violation: {kl_check(states, t=1)['max_violation']:.2e}")
u = signal_unitary_dense(9, 0.7)
rotated = [DenseState(9, u @ s.vec) for s in states]
print(f"  after signal rotation theta = 0.7: "
      f"{kl_check(rotated, t=1)['max_violation']:.2e} (QEC data is rotation invariant)")

print("\nproject-and-recover QEC for a single-qubit X/Z channel (symmetrized):")
kraus = [
    np.eye(2**9, dtype=complex) / math.sqrt(1.5),
    0.5 * pauli_op(9, (1,), ("X",)) / math.sqrt(1.5),
    0.5 * pauli_op(9, (1,), ("Z",)) / math.sqrt(1.5),
]
rep = general_qec_smallN(states, kraus, max_weight=1)
print(f"  entanglement fidelity: {rep['entanglement_fidelity']:.12f}")
for block in rep["blocks"]:
    print(f"  block j-path {block['j_path']}: r_T = {block['r_T']} "
          f"<= (2j+1)/M = {block['bound']:.1f}")
