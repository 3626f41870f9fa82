"""Small-N full-Hilbert-space verification layer.

Everything here is dense and deliberately simple: this module exists to
certify the scalable Dicke-block code paths against brute force, not to
scale itself.  Qubit 1 is the most significant bit of the basis index, so
"the first k qubits" are the high bits and the nested subsets [k] of the
sequential angular-momentum measurement are prefixes of the index.

Two-row Young diagrams (r1, r2) label the Schur-Weyl blocks of N qubits;
standard tableaux of a diagram are in bijection with the admissible
total-angular-momentum paths j_1, ..., j_N (j_1 = 1/2, steps of +-1/2,
never negative), which is exactly how the sequential measurement walks
them.  j values are stored doubled (integers) throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from symsense.symcore import SymState, binom

MAX_DENSE_QUBITS = 12


@dataclass(frozen=True)
class DenseState:
    """Full 2^N state vector; N is capped to keep everything honest but small."""

    n_qubits: int
    vec: np.ndarray

    def __post_init__(self):
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise ValueError(f"dense layer is capped at N = {MAX_DENSE_QUBITS}")
        vec = np.asarray(self.vec, dtype=complex)
        if vec.shape != (2**self.n_qubits,):
            raise ValueError("vector dimension must be 2^N")
        object.__setattr__(self, "vec", vec)


# ---------------------------------------------------------------------------
# embeddings and dense operators
# ---------------------------------------------------------------------------


def embed_sym(state: SymState) -> DenseState:
    """Embed a Dicke-basis symmetric state into the full 2^N space."""
    N = state.n_qubits
    vec = np.zeros(2**N, dtype=complex)
    for idx in range(2**N):
        w = idx.bit_count()
        if state.amps[w] != 0:
            vec[idx] = state.amps[w] / math.sqrt(binom(N, w))
    return DenseState(N, vec)


def project_sym(dense: DenseState) -> SymState:
    """Overlap of a dense state with each Dicke state (no normalization)."""
    N = dense.n_qubits
    amps = np.zeros(N + 1, dtype=complex)
    for idx in range(2**N):
        amps[idx.bit_count()] += dense.vec[idx]
    for w in range(N + 1):
        amps[w] /= math.sqrt(binom(N, w))
    return SymState(N, amps)


_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_op(N: int, positions: tuple[int, ...], kinds: tuple[str, ...]) -> np.ndarray:
    """Dense N-qubit Pauli with the given letters at 1-based positions."""
    ops = ["I"] * N
    for pos, kind in zip(positions, kinds):
        ops[pos - 1] = kind
    out = np.array([[1.0 + 0j]])
    for name in ops:
        out = np.kron(out, _PAULI[name])
    return out


def enumerate_paulis(N: int, max_weight: int):
    """All Pauli operators (as (positions, kinds) labels) of weight 0..max_weight."""
    yield (), ()
    for w in range(1, max_weight + 1):
        for positions in itertools.combinations(range(1, N + 1), w):
            for kinds in itertools.product("XYZ", repeat=w):
                yield positions, kinds


def jz_dense(N: int) -> np.ndarray:
    diag = np.array([0.5 * N - idx.bit_count() for idx in range(2**N)])
    return np.diag(diag.astype(complex))


def j2_dense(N: int, k: int) -> np.ndarray:
    """Total angular momentum squared of the first k qubits, on all N."""
    dim = 2**N
    out = 0.75 * k * np.eye(dim, dtype=complex)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for kind in "XYZ":
                out += 0.5 * pauli_op(N, (i, j), (kind, kind))
    return out


def signal_unitary_dense(N: int, theta: float) -> np.ndarray:
    diag = np.exp(-1j * theta * np.array([0.5 * N - idx.bit_count() for idx in range(2**N)]))
    return np.diag(diag)


def partial_trace_first(rho: np.ndarray, N: int, t: int) -> np.ndarray:
    """Trace out the first t qubits (the high bits) of an N-qubit density matrix."""
    d_keep = 2 ** (N - t)
    r = rho.reshape(2**t, d_keep, 2**t, d_keep)
    return np.einsum("abad->bd", r)


def insert_zeros(vec: np.ndarray, n_small: int, positions: tuple[int, ...]) -> np.ndarray:
    """Insert |0> qubits at the given 1-based positions of the enlarged register."""
    n_big = n_small + len(positions)
    pos_set = set(positions)
    small_slots = [p for p in range(1, n_big + 1) if p not in pos_set]
    out = np.zeros(2**n_big, dtype=complex)
    for idx in range(2**n_small):
        big = 0
        for bit_i, slot in enumerate(small_slots):
            if (idx >> (n_small - 1 - bit_i)) & 1:
                big |= 1 << (n_big - slot)
        out[big] = vec[idx]
    return out


# ---------------------------------------------------------------------------
# two-row Young diagrams, SYTs, and j-paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class YoungDiagram2:
    r1: int
    r2: int

    def __post_init__(self):
        if self.r1 < self.r2 or self.r2 < 0:
            raise ValueError("need r1 >= r2 >= 0")

    @property
    def n_boxes(self) -> int:
        return self.r1 + self.r2

    @property
    def j_total_doubled(self) -> int:
        return self.r1 - self.r2

    def syt_count(self) -> int:
        """Number of standard tableaux: C(N, r1) (2 r1 - N + 1) / (r1 + 1)."""
        N = self.n_boxes
        num = binom(N, self.r1) * (2 * self.r1 - N + 1)
        assert num % (self.r1 + 1) == 0
        return num // (self.r1 + 1)

    def syt_count_hooks(self) -> int:
        """Hook-length formula evaluated box by box (independent of the closed form)."""
        hooks = []
        for col in range(self.r1):
            arm = self.r1 - col - 1
            leg = 1 if col < self.r2 else 0
            hooks.append(arm + leg + 1)
        for col in range(self.r2):
            hooks.append(self.r2 - col)
        prod = math.prod(hooks)
        assert math.factorial(self.n_boxes) % prod == 0
        return math.factorial(self.n_boxes) // prod

    def ssyt_count(self) -> int:
        """Semistandard fillings with entries {1, 2}: r1 - r2 + 1."""
        return self.r1 - self.r2 + 1


@dataclass(frozen=True)
class StandardTableau:
    """A two-row SYT, stored as the row-1 labels and the running j_k path (doubled)."""

    n_boxes: int
    row1: tuple[int, ...]
    j_path_doubled: tuple[int, ...]

    @property
    def row2(self) -> tuple[int, ...]:
        in_row1 = set(self.row1)
        return tuple(k for k in range(1, self.n_boxes + 1) if k not in in_row1)

    @property
    def diagram(self) -> YoungDiagram2:
        return YoungDiagram2(len(self.row1), self.n_boxes - len(self.row1))

    @property
    def j_total_doubled(self) -> int:
        return self.j_path_doubled[-1]


def enumerate_syt(N: int) -> dict[YoungDiagram2, list[StandardTableau]]:
    """All two-row SYTs with N boxes, grouped by diagram.

    Generated as admissible angular-momentum paths: label k goes to row 1 on a
    +1/2 step and to row 2 on a -1/2 step; never letting j dip below zero is
    the column-strictness constraint.
    """
    out: dict = {}
    stack = [((1,), (1,))]  # (row1 labels, doubled-j path) after one box
    while stack:
        row1, path = stack.pop()
        if len(path) == N:
            tab = StandardTableau(N, row1, path)
            out.setdefault(tab.diagram, []).append(tab)
            continue
        k = len(path) + 1
        j2 = path[-1]
        stack.append((row1 + (k,), path + (j2 + 1,)))
        if j2 > 0:
            stack.append((row1, path + (j2 - 1,)))
    return out


# ---------------------------------------------------------------------------
# sequential Clebsch-Gordan (Schur) basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchurBlock:
    """One (path, j) block: vectors[m_idx] is |m_T> with m = j - m_idx (doubled js)."""

    j_path_doubled: tuple[int, ...]
    vectors: np.ndarray  # shape (2j+1, 2^N), rows ordered m = +j .. -j

    @property
    def j_doubled(self) -> int:
        return self.j_path_doubled[-1]


@lru_cache(maxsize=8)
def schur_blocks(N: int) -> tuple[SchurBlock, ...]:
    """Sequentially coupled angular-momentum basis of N qubits.

    Built by one Clebsch-Gordan step per qubit; each block is labelled by its
    j-path (equivalently a two-row SYT) and spans the 2j+1 magnetic states.
    """
    if N > 10:
        raise ValueError("Schur basis construction capped at N = 10")
    up = np.array([1.0, 0.0], dtype=complex)  # |0>, m = +1/2
    down = np.array([0.0, 1.0], dtype=complex)
    # block state: path, dict m_doubled -> vector on k qubits
    blocks = [((1,), {1: up, -1: down})]
    for _ in range(1, N):
        new_blocks = []
        for path, vecs in blocks:
            j2 = path[-1]
            # couple with the next qubit: j' = j + 1/2 and (if j > 0) j' = j - 1/2
            for j2_new in (j2 + 1, j2 - 1):
                if j2_new < 0:
                    continue
                new_vecs = {}
                for m2 in range(j2_new, -j2_new - 1, -2):
                    # CG for (j) x (1/2) -> j'; m = m_old + (+-1/2)
                    vec = None
                    for half, qubit in ((1, up), (-1, down)):
                        m2_old = m2 - half
                        if abs(m2_old) > j2 or m2_old not in vecs:
                            continue
                        if j2_new == j2 + 1:
                            coeff = math.sqrt((j2 + half * m2 + 1) / (2.0 * (j2 + 1)))
                        else:
                            coeff = -half * math.sqrt((j2 - half * m2 + 1) / (2.0 * (j2 + 1)))
                        term = coeff * np.kron(vecs[m2_old], qubit)
                        vec = term if vec is None else vec + term
                    new_vecs[m2] = vec
                new_blocks.append((path + (j2_new,), new_vecs))
        blocks = new_blocks
    out = []
    for path, vecs in blocks:
        j2 = path[-1]
        mat = np.array([vecs[m2] for m2 in range(j2, -j2 - 1, -2)])
        out.append(SchurBlock(path, mat))
    return tuple(out)


def sequential_j2_measure(
    state: DenseState, rng: np.random.Generator
) -> tuple[StandardTableau, DenseState]:
    """Measure J^2 on the nested prefixes [1], [2], ..., [N] sequentially.

    Implemented in the sequentially coupled basis, where all the prefix
    operators are simultaneously diagonal; the recorded j-path is the tableau.
    Verified against dense eigenprojectors of J^2_[k] in the test suite.
    """
    N = state.n_qubits
    blocks = schur_blocks(N)
    probs = []
    for blk in blocks:
        coeffs = blk.vectors.conj() @ state.vec
        probs.append(float(np.sum(np.abs(coeffs) ** 2)))
    probs = np.array(probs)
    idx = rng.choice(len(blocks), p=probs / probs.sum())
    blk = blocks[idx]
    coeffs = blk.vectors.conj() @ state.vec
    post = (coeffs @ blk.vectors) / math.sqrt(probs[idx])
    row1 = tuple(
        k + 1 for k in range(N) if blk.j_path_doubled[k] > (blk.j_path_doubled[k - 1] if k else 0)
    )
    tab = StandardTableau(N, row1, blk.j_path_doubled)
    return tab, DenseState(N, post)


# ---------------------------------------------------------------------------
# symmetrizing channel
# ---------------------------------------------------------------------------


def _transposition_perm(N: int, i: int, k: int) -> np.ndarray:
    """Basis-index permutation swapping qubits i and k (1-based)."""
    idx = np.arange(2**N)
    bit_i = (idx >> (N - i)) & 1
    bit_k = (idx >> (N - k)) & 1
    swapped = idx & ~(1 << (N - i)) & ~(1 << (N - k))
    swapped |= bit_k << (N - i)
    swapped |= bit_i << (N - k)
    return swapped


def symmetrize_channel(rho: np.ndarray, N: int) -> np.ndarray:
    """Average over all qubit permutations: rho -> (1/N!) sum_sigma P rho P^dag.

    Evaluated by the coset recursion (average over S_k built from the S_{k-1}
    average and k transpositions), so the cost is O(N^2) conjugations instead
    of N! terms.
    """
    out = rho.astype(complex)
    for k in range(2, N + 1):
        acc = out.copy()  # i = k term (identity)
        for i in range(1, k):
            perm = _transposition_perm(N, i, k)
            acc += out[np.ix_(perm, perm)]
        out = acc / k
    return out


# ---------------------------------------------------------------------------
# Knill-Laflamme checks
# ---------------------------------------------------------------------------


def kl_check(code_states: list[DenseState], t: int) -> dict:
    """Knill-Laflamme residuals for all Pauli errors of weight <= 2t.

    For codewords |i>, |j> the criterion demands <i|E|j> = c_E delta_ij.
    Returns the worst deviation and the offending Pauli label.
    """
    N = code_states[0].n_qubits
    vecs = [cs.vec for cs in code_states]
    M = len(vecs)
    worst = 0.0
    worst_label = None
    for positions, kinds in enumerate_paulis(N, 2 * t):
        op = pauli_op(N, positions, kinds)
        applied = [op @ v for v in vecs]
        c = sum(np.vdot(vecs[i], applied[i]) for i in range(M)) / M
        dev = 0.0
        for i in range(M):
            for j in range(M):
                val = np.vdot(vecs[i], applied[j])
                dev = max(dev, abs(val - (c if i == j else 0.0)))
        if dev > worst:
            worst, worst_label = dev, (positions, kinds)
    return {"max_violation": worst, "worst_pauli": worst_label}


# ---------------------------------------------------------------------------
# general QEC on tiny instances
# ---------------------------------------------------------------------------


def _block_projector_coeffs(blk: SchurBlock, vec: np.ndarray) -> np.ndarray:
    return blk.vectors.conj() @ vec


def general_qec_smallN(
    code_states: list[DenseState],
    kraus_ops: list[np.ndarray],
    max_weight: int,
) -> dict:
    """Project-and-recover QEC in the sequentially coupled basis.

    The corrupted input is first symmetrized (permutation averaging keeps
    weight-limited errors correctible), then per angular-momentum block the
    correctible subspaces are spanned by Gram-Schmidt vectors built from
    Pauli errors of weight <= max_weight applied to the codewords; recovery
    maps each orthonormal error copy of the code back to it.

    Returns the entanglement fidelity of recover(symmetrize(channel(.)))
    on the maximally mixed code state, together with per-block subspace
    counts r_T and their (2 j_T + 1)/M ceilings.
    """
    N = code_states[0].n_qubits
    M = len(code_states)
    vecs = [cs.vec for cs in code_states]
    blocks = schur_blocks(N)

    # spanning error set: all Paulis of weight <= max_weight
    errors = [pauli_op(N, pos, kinds) for pos, kinds in enumerate_paulis(N, max_weight)]

    recovery = []  # Kraus operators of the recovery channel
    covered = np.zeros((2**N, 2**N), dtype=complex)
    r_report = []
    for blk in blocks:
        # coefficients of Pi^T E |j_L> in the block's magnetic basis
        coeffs_per_j = []
        for j in range(M):
            rows = np.array([_block_projector_coeffs(blk, E @ vecs[j]) for E in errors])
            coeffs_per_j.append(rows)
        gram = coeffs_per_j[0] @ coeffs_per_j[0].conj().T
        # KL equality of Gram matrices across j is what makes one coefficient
        # matrix serve all codewords
        evals, evecs = np.linalg.eigh(gram)
        keep = evals > 1e-10
        r_t = int(np.sum(keep))
        if r_t == 0:
            continue
        dim_block = blk.vectors.shape[0]
        r_report.append({"j_path": blk.j_path_doubled, "r_T": r_t, "bound": dim_block / M})
        # orthonormalizing combinations: columns v with v^dag Gram v = delta
        combo = evecs[:, keep] / np.sqrt(evals[keep])
        for k in range(r_t):
            kraus = np.zeros((2**N, 2**N), dtype=complex)
            basis_vecs = []
            for j in range(M):
                v = (combo[:, k].conj() @ coeffs_per_j[j]) @ blk.vectors
                basis_vecs.append(v)
            for j in range(M):
                kraus += np.outer(vecs[j], basis_vecs[j].conj())
            recovery.append(kraus)
            for v in basis_vecs:
                covered += np.outer(v, v.conj())
    # complete the recovery channel on the uncovered remainder
    recovery.append(np.eye(2**N) - covered)

    rho_in = sum(np.outer(v, v.conj()) for v in vecs) / M

    def channel(x):
        return sum(K @ x @ K.conj().T for K in kraus_ops)

    def recover(x):
        return sum(R @ x @ R.conj().T for R in recovery)

    # entanglement fidelity F_e = (1/M^2) sum_{jk} <j|Phi(|j><k|)|k>
    fid = 0.0 + 0.0j
    for j in range(M):
        for k in range(M):
            x = np.outer(vecs[j], vecs[k].conj())
            y = recover(symmetrize_channel(channel(x), N))
            fid += np.vdot(vecs[j], y @ vecs[k])
    fid = float(fid.real) / (M * M)
    trace_out = float(np.trace(recover(symmetrize_channel(channel(rho_in), N))).real)
    return {"entanglement_fidelity": fid, "blocks": r_report, "output_trace": trace_out}
