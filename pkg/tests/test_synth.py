import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from conftest import grid_modes, haar, naive_stack, single_output
from oam_optics.analysis import count_netlist, n_x
from oam_optics.blocks import exchanger_elements, exchanger_inv_elements, sorter, sorter_inv
from oam_optics.elements import (BeamSplitter, DovePrism, Hologram, Mirror, Netlist,
                                 PathPermutation, PhaseShifter, block_transfer, transfer_matrix)
from oam_optics.exceptions import NotUnitaryError, RegimeError
from oam_optics.modes import Mode, ModeWindow
from oam_optics.numerics import dft, matrix_power, pauli_x, pauli_z, phase_aligned_distance
from oam_optics.synth import (GateSpec, controlled_u, controlled_u_spaced, cz_gate, parallelize,
                              path_controlled, reck_decompose, simplify, synthesize,
                              target_matrix, universal_oam, xk_gate, z_gate)

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def distance_to_target(netlist, spec):
    target = target_matrix(spec)
    return phase_aligned_distance(block_transfer(netlist, target.modes), target.matrix)


def test_reck_of_identity_is_empty():
    assert len(reck_decompose(np.eye(4))) == 0


def test_reck_of_permutation_is_a_routing():
    netlist = reck_decompose(pauli_x(4))
    assert count_netlist(netlist).beam_splitters == 0
    assert np.allclose(block_transfer(netlist, grid_modes(1, 4)), pauli_x(4))


def test_reck_of_hadamard():
    netlist = reck_decompose(HADAMARD)
    assert count_netlist(netlist).beam_splitters == 1
    assert phase_aligned_distance(block_transfer(netlist, grid_modes(1, 2)), HADAMARD) < 1e-10


@pytest.mark.parametrize('d, seed', [(3, 0), (5, 1), (8, 2), (8, 3)])
def test_reck_of_haar_unitary(d, seed):
    u = haar(d, seed)
    netlist = reck_decompose(u)
    assert count_netlist(netlist).beam_splitters <= d * (d - 1) // 2
    assert phase_aligned_distance(block_transfer(netlist, grid_modes(1, d)), u) < 1e-8


def test_reck_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        reck_decompose(np.ones((2, 2)))


@pytest.mark.parametrize('d', [2, 4, 8])
def test_universal_scheme_on_haar_unitaries(d):
    for seed in range(20):
        u = haar(d, 100 * d + seed)
        spec = GateSpec('universal', d, u=u)
        assert distance_to_target(synthesize(spec), spec) <= 1e-8


def test_universal_scheme_examples():
    identity = universal_oam(np.eye(4), 4)
    assert len(identity) == 0
    x8 = universal_oam(pauli_x(8), 8)
    assert single_output(x8, Mode(7, 0))[0] == Mode(0, 0)
    assert phase_aligned_distance(block_transfer(x8, grid_modes(8)), pauli_x(8)) < 1e-9
    f4 = universal_oam(dft(4), 4)
    assert phase_aligned_distance(block_transfer(f4, grid_modes(4)), dft(4)) < 1e-8
    with pytest.raises(RegimeError):
        universal_oam(np.eye(3), 3)


@pytest.mark.parametrize('k, expected', [(1, 12), (2, 20), (3, 24), (4, 28)])
def test_xk_beam_splitter_counts_for_d8(k, expected):
    assert count_netlist(xk_gate(8, k)).beam_splitters == expected


@pytest.mark.parametrize('d', [4, 8, 16])
def test_xk_counts_match_closed_form(d):
    for k in range(1, d // 2 + 1):
        netlist = xk_gate(d, k)
        assert count_netlist(netlist).beam_splitters == n_x(d, k)
        assert netlist.annotations['construction'] == 'xk'


@pytest.mark.parametrize('d', [2, 4, 8, 16])
def test_xk_is_a_cyclic_shift_and_inverse_law_holds(d):
    for k in range(1, d):
        gate = xk_gate(d, k)
        assert phase_aligned_distance(block_transfer(gate, grid_modes(d)), pauli_x(d, k)) <= 1e-9
        if d <= 8:
            roundtrip = gate + xk_gate(d, d - k)
            assert phase_aligned_distance(block_transfer(roundtrip, grid_modes(d)),
                                          np.eye(d)) <= 1e-9


def test_xk_power_out_of_range():
    with pytest.raises(RegimeError):
        xk_gate(8, 0)
    with pytest.raises(RegimeError):
        xk_gate(8, 8)
    with pytest.raises(RegimeError):
        xk_gate(6, 1)


@pytest.mark.parametrize('d, k', [(4, 1), (2, 1), (8, 3), (4, 0)])
def test_z_gate(d, k):
    netlist = z_gate(d, k)
    assert phase_aligned_distance(block_transfer(netlist, grid_modes(d)), pauli_z(d, k)) < 1e-12
    assert count_netlist(netlist).beam_splitters == 0


def test_z_gate_phases_for_d4():
    phases = np.diag(block_transfer(z_gate(4), grid_modes(4)))
    assert np.allclose(phases / phases[0], [1, 1j, -1, -1j])
    assert [type(e) for e in z_gate(4, 0).elements] == [Mirror, Mirror]


@pytest.mark.parametrize('n', [2, 4, 8])
@pytest.mark.parametrize('d', [2, 4, 8])
def test_controlled_u(n, d):
    for u in (pauli_z(n), pauli_x(n), haar(n, n + d)):
        spec = GateSpec('controlled_u', d, u=u)
        assert distance_to_target(synthesize(spec), spec) <= 1e-8


def test_controlled_z_uses_only_dove_prisms():
    netlist = controlled_u(pauli_z(4), 4)
    counts = count_netlist(netlist)
    assert counts.beam_splitters == 0
    # Dove prism angles are defined modulo pi
    angles = sorted(e.alpha % math.pi for e in netlist.elements if isinstance(e, DovePrism))
    assert np.allclose(angles, [math.pi / 4, math.pi / 2, 3 * math.pi / 4])


def test_controlled_not_with_oam_control():
    netlist = controlled_u(pauli_x(2), 4)
    for k in range(4):
        for p in range(2):
            mode, amplitude = single_output(netlist, Mode(k, p))
            assert mode == Mode(k, p ^ (k % 2))
            assert abs(amplitude) == pytest.approx(1)


def test_controlled_u_spaced():
    spaced = controlled_u_spaced(pauli_z(2), 2, 2)
    assert single_output(spaced, Mode(2, 1))[1] == pytest.approx(-1)
    assert single_output(spaced, Mode(2, 0))[1] == pytest.approx(1)
    assert single_output(spaced, Mode(0, 1))[1] == pytest.approx(1)
    assert controlled_u_spaced(pauli_x(2), 4, 1).elements == controlled_u(pauli_x(2), 4).elements
    u = haar(4, 5)
    spec = GateSpec('controlled_u_spaced', 4, m=3, u=u)
    assert distance_to_target(synthesize(spec), spec) <= 1e-8
    with pytest.raises(RegimeError):
        controlled_u_spaced(u, 4, 0)


@pytest.mark.parametrize('n', [2, 4, 8])
def test_cz(n):
    netlist = cz_gate(n)
    counts = count_netlist(netlist)
    assert counts.dove_prisms == n
    assert counts.beam_splitters == 0
    spec = GateSpec('cz', n, n=n)
    assert distance_to_target(netlist, spec) <= 1e-10


@pytest.mark.parametrize('n, d, swap_mode', [(2, 2, 'ideal'), (4, 4, 'ideal'), (8, 8, 'ideal'),
                                             (2, 2, 'expanded'), (4, 4, 'expanded'),
                                             (2, 4, 'ideal'), (8, 4, 'ideal')])
def test_path_controlled(n, d, swap_mode):
    u = haar(d, 7 * n + d)
    spec = GateSpec('path_controlled', d, n=n, u=u, swap_mode=swap_mode)
    assert distance_to_target(synthesize(spec), spec) <= 1e-8


def test_path_controlled_not_and_identity():
    netlist = path_controlled(pauli_x(2), 2)
    assert single_output(netlist, Mode(0, 1))[0] == Mode(1, 1)
    assert single_output(netlist, Mode(1, 0))[0] == Mode(1, 0)
    identity = path_controlled(np.eye(4), 4)
    assert phase_aligned_distance(block_transfer(identity, grid_modes(4, 4)), np.eye(16)) < 1e-12


def test_path_controlled_matches_naive_stack():
    u = haar(4, 11)
    stacked = naive_stack([block_transfer(universal_oam(matrix_power(u, p), 4), grid_modes(4))
                           for p in range(4)])
    netlist = path_controlled(u, 4)
    assert phase_aligned_distance(block_transfer(netlist, grid_modes(4, 4)), stacked) <= 1e-8


@pytest.mark.parametrize('d', [2, 4, 8])
@pytest.mark.parametrize('swap_mode', ['ideal', 'expanded'])
def test_parallelized_gate(d, swap_mode):
    u = haar(d, 3 * d)
    spec = GateSpec('parallelized', d, n=d, u=u, swap_mode=swap_mode)
    netlist = synthesize(spec)
    assert distance_to_target(netlist, spec) <= 1e-8
    single = block_transfer(universal_oam(u, d), grid_modes(d))
    stacked = naive_stack([single] * d)
    assert phase_aligned_distance(block_transfer(netlist, grid_modes(d, d)), stacked) <= 1e-8


def test_parallelized_cyclic_shift_in_every_path():
    netlist = parallelize(pauli_x(4), 4)
    for p in range(4):
        for q in range(4):
            assert single_output(netlist, Mode(q, p))[0] == Mode((q + 1) % 4, p)


def test_parallelized_with_more_paths_than_oam_values():
    netlist = parallelize(pauli_x(4), 8)
    for p in range(8):
        for q in range(4):
            assert single_output(netlist, Mode(2 * q, p))[0] == Mode(2 * ((q + 1) % 4), p)
    assert np.allclose(block_transfer(parallelize(np.eye(2), 2), grid_modes(2, 2)), np.eye(4))


def test_gate_spec_validation():
    with pytest.raises(RegimeError):
        GateSpec('toffoli', 4)
    with pytest.raises(RegimeError):
        GateSpec('universal', 4, swap_mode='teleport')
    with pytest.raises(NotUnitaryError):
        GateSpec('universal', 2, u=np.ones((2, 2)))
    with pytest.raises(RegimeError):
        target_matrix(GateSpec('universal', 4))


def test_simplify_examples():
    assert len(simplify(sorter(8) + sorter_inv(8))) == 0
    raw = universal_oam(pauli_x(8), 8, simplified=False)
    assert count_netlist(raw).beam_splitters == 28
    assert count_netlist(simplify(raw)).beam_splitters == 12
    once = simplify(raw)
    assert simplify(once).elements == once.elements


N_PATHS = 4


def random_piece(rng):
    "A short element sequence on N_PATHS paths."
    kind = rng.integers(7)
    a, b = (int(p) for p in rng.choice(N_PATHS, size=2, replace=False))
    if kind == 0:
        k = int(rng.choice([1, 2]))
        return list(exchanger_elements(k, a, b) if rng.random() < 0.5 else exchanger_inv_elements(k, a, b))
    if kind == 1:
        return [BeamSplitter(a, b, float(rng.uniform(-np.pi, np.pi)), float(rng.uniform(-np.pi, np.pi)))]
    if kind == 2:
        return [PhaseShifter(a, float(rng.uniform(-np.pi, np.pi)))]
    if kind == 3:
        return [Hologram(a, int(rng.integers(-2, 3)))]
    if kind == 4:
        return [DovePrism(a, float(rng.choice([0.0, np.pi / 4, rng.uniform(-1, 1)])))]
    if kind == 5:
        return [Mirror(a)]
    return [PathPermutation(tuple(int(p) for p in rng.permutation(N_PATHS)))]


def random_composition(seed):
    "Blocks, a core and the inverses of the blocks."
    rng = np.random.default_rng(seed)
    window = ModeWindow(-2, 2, N_PATHS)
    blocks = Netlist('blocks', window, [e for _ in range(rng.integers(1, 6)) for e in random_piece(rng)])
    core = Netlist('core', window, [e for _ in range(rng.integers(0, 3)) for e in random_piece(rng)])
    return blocks + core + blocks.inverse()


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_simplify_preserves_transfer_and_is_idempotent(seed):
    netlist = random_composition(seed)
    simplified = simplify(netlist)
    assert len(simplified) <= len(netlist)
    window = ModeWindow(-2, 2, N_PATHS)
    before = transfer_matrix(netlist, window, leakage_tol=np.inf)
    after = transfer_matrix(simplified, window, leakage_tol=np.inf)
    assert np.allclose(before, after, rtol=0, atol=1e-10)
    assert simplify(simplified).elements == simplified.elements
