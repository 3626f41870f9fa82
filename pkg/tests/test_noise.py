"""Deletion and amplitude-damping channels against brute-force oracles."""

import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from symsense.codes import GnuParams, Label, make_logical
from symsense.fullspace import embed_sym, partial_trace_first
from symsense.noise import amplitude_damp, delete, deletion_qfi, ad_qfi_bound
from symsense.symcore import SymState, jz_moments


def test_delete_single_dicke_by_hand():
    # one deletion of |D^2_1>: branches a=0 -> |D^1_1>, a=1 -> |D^1_0>, each 1/2
    outs = delete(SymState.from_weight(2, 1), 1)
    assert len(outs) == 2
    for br in outs:
        assert abs(br.weight - 0.5) < 1e-14
        expected_weight_index = 1 - br.shift
        assert abs(abs(br.state.amps[expected_weight_index]) - 1.0) < 1e-14


def test_delete_all_zeros_product_state():
    outs = delete(SymState.from_weight(8, 0), 1)
    assert len(outs) == 1
    assert outs[0].shift == 0
    assert abs(outs[0].weight - 1.0) < 1e-14
    assert abs(outs[0].state.amps[0] - 1.0) < 1e-14


def test_delete_branches_orthogonal_mod_g():
    params = GnuParams(4, 4, Fraction(1), 3)
    plus = make_logical(params, Label.PLUS).state
    outs = delete(plus, 2)
    assert abs(sum(o.weight for o in outs) - 1.0) < 1e-12
    for i, a in enumerate(outs):
        for b in outs[i + 1 :]:
            assert abs(a.state.inner(b.state)) < 1e-14
            # supports are disjoint residue classes mod g
            ra = set(np.nonzero(np.abs(a.state.amps) > 0)[0] % params.g)
            rb = set(np.nonzero(np.abs(b.state.amps) > 0)[0] % params.g)
            assert ra.isdisjoint(rb)


def _trace_distance(x, y):
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(x - y))))


def _reconstruct(branches, dim):
    rho = np.zeros((dim, dim), dtype=complex)
    for br in branches:
        v = embed_sym(br.state).vec
        rho += br.weight * np.outer(v, v.conj())
    return rho


def test_delete_matches_dense_partial_trace():
    rng = np.random.default_rng(31)
    for _ in range(15):
        N = int(rng.integers(3, 9))
        t = int(rng.integers(1, 4))
        if t >= N:
            continue
        psi = SymState.random(N, rng)
        dense = embed_sym(psi).vec
        want = partial_trace_first(np.outer(dense, dense.conj()), N, t)
        got = _reconstruct(delete(psi, t), 2 ** (N - t))
        assert _trace_distance(want, got) < 1e-12


def test_delete_rejects_bad_t():
    with pytest.raises(ValueError):
        delete(SymState.from_weight(3, 1), 4)
    with pytest.raises(ValueError):
        delete(SymState.from_weight(3, 1), 0)


def test_ad_gamma_zero_identity():
    rng = np.random.default_rng(1)
    psi = SymState.random(6, rng)
    outs = amplitude_damp(psi, 0.0)
    assert len(outs) == 1
    assert outs[0].damped == 0
    assert np.allclose(outs[0].state.amps, psi.amps)


def test_ad_gamma_one_full_decay():
    outs = amplitude_damp(SymState.from_weight(1, 1), 1.0)
    assert len(outs) == 1
    assert outs[0].damped == 1
    assert abs(outs[0].state.amps[0] - 1.0) < 1e-14


def test_ad_small_system_kraus_weights():
    # gamma = 0.3 on (|D2_0> + |D2_2>)/sqrt 2: branch weights by direct Kraus sums
    gamma = 0.3
    amps = np.zeros(3, dtype=complex)
    amps[0] = amps[2] = 1 / math.sqrt(2)
    outs = amplitude_damp(SymState(2, amps), gamma)
    # x=0: |phi_0> = (|D2_0> + (1-gamma)|D2_2>)/sqrt 2, weight (1+(1-g)^2)/2
    # x=1: amplitude sqrt(C(2,1) g (1-g))/sqrt2 on |D1_1>; x=2: gamma^2/2
    by_x = {o.damped: o for o in outs}
    assert abs(by_x[0].weight - 0.5 * (1 + 0.49)) < 1e-12
    assert abs(by_x[1].weight - 0.5 * (2 * 0.3 * 0.7)) < 1e-12
    assert abs(by_x[2].weight - 0.5 * 0.09) < 1e-12
    assert abs(sum(o.weight for o in outs) - 1.0) < 1e-12


def test_deletion_qfi_t0_and_precondition():
    params = GnuParams(5, 7, Fraction(1), 2)
    assert deletion_qfi(params, 0) == 25 * 7
    with pytest.raises(ValueError):
        deletion_qfi(GnuParams(3, 5, Fraction(1), 0), 3)
    with pytest.raises(ValueError):
        deletion_qfi(GnuParams(5, 3, Fraction(1), 0), 3)


def test_deletion_qfi_compositional_oracle():
    # closed-form branch sums vs delete() + jz_moments recomposition
    params = GnuParams(4, 4, Fraction(1), 0)
    plus = make_logical(params, Label.PLUS).state
    for t in (1, 2, 3):
        want = 4.0 * sum(br.weight * jz_moments(br.state)[2] for br in delete(plus, t))
        got = deletion_qfi(params, t)
        assert abs(got - want) < 1e-9 * max(1.0, want)


def test_deletion_qfi_monotonicity_report():
    # monotonicity in t is plausible but not guaranteed; report, never hide
    violations = []
    for g, n, s in ((5, 5, 4), (8, 4, 10), (4, 9, 2)):
        params = GnuParams(g, n, Fraction(2), s)
        values = [deletion_qfi(params, t) for t in range(min(g, n) - 1)]
        for t in range(1, len(values)):
            if values[t] > values[t - 1] * (1 + 1e-12):
                violations.append((g, n, s, t, values[t - 1], values[t]))
    if violations:
        warnings.warn(f"deletion QFI non-monotone at {violations}")


def test_ad_qfi_bound_limits():
    params = GnuParams(3, 3, Fraction(2), 1)
    assert ad_qfi_bound(params, 0.0) == 27.0
    assert abs(ad_qfi_bound(params, 1.0)) < 1e-12
    with pytest.raises(ValueError):
        ad_qfi_bound(params, 1.5)


def test_ad_qfi_bound_compositional_oracle():
    params = GnuParams(3, 3, Fraction(1), 0)
    plus = make_logical(params, Label.PLUS).state
    for gamma in (0.1, 0.35):
        want = 4.0 * sum(br.weight * jz_moments(br.state)[2] for br in amplitude_damp(plus, gamma))
        got = ad_qfi_bound(params, gamma)
        assert abs(got - want) < 1e-9 * max(1.0, want)


def test_channel_probability_conservation():
    rng = np.random.default_rng(8)
    for _ in range(10):
        N = int(rng.integers(2, 12))
        psi = SymState.random(N, rng)
        outs = delete(psi, 1)
        assert abs(sum(o.weight for o in outs) + outs.pruned_mass - 1.0) < 1e-12
        outs = amplitude_damp(psi, float(rng.uniform(0.05, 0.95)))
        assert abs(sum(o.weight for o in outs) + outs.pruned_mass - 1.0) < 1e-12


def test_channel_ensemble_view():
    from symsense.symcore import SymEnsemble

    psi = SymState.from_weight(4, 2)
    ens = delete(psi, 2).as_ensemble()
    assert isinstance(ens, SymEnsemble)
    assert abs(ens.total_probability() - 1.0) < 1e-12
    for prob, state in ens:
        assert state.is_normalized()
