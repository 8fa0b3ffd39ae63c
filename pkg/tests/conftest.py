"Shared fixtures and oracles"
import numpy as np
import pytest
from scipy.linalg import block_diag
from scipy.stats import unitary_group
from oam_optics.elements import apply_netlist
from oam_optics.modes import Mode, ModeWindow, basis_state, required_window


def haar(d, seed):
    "Haar-random d x d unitary."
    return unitary_group.rvs(d, random_state=seed)


def grid_modes(d, n=1, spacing=1, offset=0):
    "Basis ordered (path, oam) with OAM values offset + spacing * q."
    return [Mode(offset + spacing * q, p) for p in range(n) for q in range(d)]


def naive_stack(blocks):
    "Block-diagonal matrix, one block per path."
    return block_diag(*blocks).astype(complex)


def propagate(netlist, mode):
    "Sparse output state of a single basis mode."
    window = ModeWindow(mode.oam, mode.oam, max(netlist.window_hint.n_paths, mode.path + 1))
    state = apply_netlist(netlist, basis_state(required_window(netlist, window), mode))
    return {m: a for m, a in state.amplitudes.items() if abs(a) > 1e-9}


def single_output(netlist, mode):
    "The only output mode of a basis mode, with its amplitude."
    support = propagate(netlist, mode)
    assert len(support) == 1, support
    return next(iter(support.items()))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
