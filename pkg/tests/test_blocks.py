import math
import numpy as np
import pytest
from conftest import propagate, single_output
from oam_optics.analysis import count_netlist
from oam_optics.blocks import (exchanger, exchanger_inv, leach, routing, sorter, sorter_inv,
                               swap_expanded, swap_ideal)
from oam_optics.elements import swap_forward, transfer_matrix
from oam_optics.exceptions import RegimeError
from oam_optics.modes import Mode, ModeWindow


def test_leach_sorts_parity():
    netlist = leach(0.0, math.pi / 2)
    for m in range(-4, 5):
        mode, amplitude = single_output(netlist, Mode(m, 0))
        assert mode.path == (0 if m % 2 else 1)
        assert mode.oam == m
        assert abs(amplitude) == pytest.approx(1)


def test_leach_without_dove_rotation_ignores_oam():
    netlist = leach(0.7, 0.0)
    outputs = [propagate(netlist, Mode(m, 0)) for m in range(-3, 4)]
    weights = [abs(out.get(Mode(m, 1), 0)) for m, out in zip(range(-3, 4), outputs)]
    assert np.allclose(weights, weights[0])


def test_leach_is_unitary_on_symmetric_window():
    window = ModeWindow(-3, 3, 2)
    matrix = transfer_matrix(leach(0.4, 0.3), window)
    assert np.allclose(matrix.conj().T @ matrix, np.eye(window.size))


@pytest.mark.parametrize('k', [1, 2, 4])
def test_exchanger_contract(k):
    netlist = exchanger(k)
    for j in range(-4, 8):
        m = j * k
        t = (m // k) % 2
        for p in (0, 1):
            mode, amplitude = single_output(netlist, Mode(m, p))
            assert mode == Mode(m - t * k + p * k, t)
            assert amplitude == pytest.approx(1, abs=1e-10)


def test_exchanger_examples():
    assert single_output(exchanger(1), Mode(5, 0))[0] == Mode(4, 1)
    assert single_output(exchanger(2), Mode(6, 0))[0] == Mode(4, 1)


@pytest.mark.parametrize('k', [1, 2, 4, 8])
def test_exchanger_then_inverse_is_identity(k):
    netlist = exchanger(k) + exchanger_inv(k)
    for m in range(-2 * k, 3 * k):
        for p in (0, 1):
            mode, amplitude = single_output(netlist, Mode(m, p))
            assert mode == Mode(m, p)
            assert amplitude == pytest.approx(1, abs=1e-10)


def test_exchanger_order_must_be_power_of_two():
    with pytest.raises(RegimeError):
        exchanger(3)
    with pytest.raises(RegimeError):
        exchanger_inv(0)


@pytest.mark.parametrize('d', [2, 4, 8, 16])
def test_sorter_modulo_property(d):
    netlist = sorter(d)
    for m in range(-2 * d, 4 * d):
        mode, amplitude = single_output(netlist, Mode(m, 0))
        assert mode == Mode(d * (m // d), m % d)
        assert amplitude == pytest.approx(1, abs=1e-10)


def test_sorter_examples_and_counts():
    assert single_output(sorter(8), Mode(5, 0))[0] == Mode(0, 5)
    assert single_output(sorter(4), Mode(6, 0))[0] == Mode(4, 2)
    for d in (2, 4, 8, 16):
        assert count_netlist(sorter(d)).beam_splitters == 2 * (d - 1)
    with pytest.raises(RegimeError):
        sorter(6)
    with pytest.raises(RegimeError):
        sorter(1)


def test_spaced_sorter_on_offset_paths():
    netlist = sorter(4, spacing=2, offset=3)
    for m in range(-4, 12):
        mode, _ = single_output(netlist, Mode(2 * m, 3))
        assert mode == Mode(8 * (m // 4), 3 + m % 4)


@pytest.mark.parametrize('d', [2, 4, 8])
def test_sorter_inverse(d):
    netlist = sorter(d) + sorter_inv(d)
    for m in range(-d, 2 * d):
        mode, amplitude = single_output(netlist, Mode(m, 0))
        assert mode == Mode(m, 0)
        assert amplitude == pytest.approx(1, abs=1e-10)


def test_swap_ideal_is_a_single_block():
    netlist = swap_ideal(4, 4)
    assert len(netlist) == 1
    assert single_output(netlist, Mode(3, 1))[0] == Mode(1, 3)


def test_routing_fills_free_targets():
    assert routing({0: 2}, 3).map == (2, 0, 1)


@pytest.mark.parametrize('n, d', [(2, 2), (4, 4), (8, 8), (2, 4), (4, 2), (2, 8), (8, 2),
                                  (4, 8), (8, 4)])
def test_expanded_swap_matches_ideal_swap(n, d):
    netlist = swap_expanded(n, d)
    step = max(1, n // d)
    for m in range(0, 2 * max(n, d) * step, step):
        for p in range(n):
            mode, amplitude = single_output(netlist, Mode(m, p))
            oam, path = swap_forward(n, d, m, p)
            assert mode == Mode(oam, path)
            assert amplitude == pytest.approx(1, abs=1e-9)
