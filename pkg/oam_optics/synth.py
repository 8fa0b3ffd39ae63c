"""Gate compiler: lowers gate specifications to netlists and removes redundant
elements with a peephole pass."""
import logging
import math
from dataclasses import dataclass
from typing import Optional
import numpy as np
from scipy.linalg import block_diag
from oam_optics.blocks import sorter, sorter_inv, swap_expanded, swap_ideal
from oam_optics.configuration import SIMULATION_CONFIG
from oam_optics.elements import (BeamSplitter, DovePrism, HalfWavePlate, Hologram, IdealSwap,
                                 Mirror, Netlist, PathPermutation, PhaseShifter, PolSplitter)
from oam_optics.exceptions import RegimeError, ShapeError
from oam_optics.modes import Mode, ModeWindow
from oam_optics.numerics import (as_cmatrix, check_unitary, eig_unitary, matrix_power, pauli_x,
                                 pauli_z)
from oam_optics.utils import check_power_of_two


LOGGER = logging.getLogger('oam_optics')
GATE_KINDS = ('universal', 'pauli_x_power', 'pauli_z_power', 'controlled_u',
              'controlled_u_spaced', 'cz', 'path_controlled', 'parallelized')
SWAP_MODES = ('ideal', 'expanded')


@dataclass(frozen=True, eq=False)
class GateSpec:
    "Gate to synthesize."
    kind: str
    d: int
    n: int = 1
    k: int = 1
    m: int = 1
    u: Optional[np.ndarray] = None
    swap_mode: str = 'ideal'

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise RegimeError('Unknown gate kind {0!r}, expected one of {1}'
                              .format(self.kind, ', '.join(GATE_KINDS)))
        if self.swap_mode not in SWAP_MODES:
            raise RegimeError('Unknown swap mode {!r}'.format(self.swap_mode))
        if self.d < 1 or self.n < 1 or self.m < 1:
            raise RegimeError('Dimensions must be positive, got d={0}, n={1}, m={2}'
                              .format(self.d, self.n, self.m))
        if self.u is not None:
            object.__setattr__(self, 'u', check_unitary(self.u, 'u'))


@dataclass(frozen=True, eq=False)
class TargetBlock:
    "Ideal action of a gate on the basis modes it is specified on."
    modes: tuple
    matrix: np.ndarray

    @property
    def paths(self):
        return max(m.path for m in self.modes) + 1

    @property
    def d(self):
        return len(self.modes) // self.paths

    @property
    def oam_step(self):
        return self.modes[1].oam - self.modes[0].oam if self.d > 1 else 1


def _check_square(u, size, name):
    if u.shape != (size, size):
        raise ShapeError('{0} must be {1}x{1}, got shape {2}'.format(name, size, u.shape))


def _null(value, tol=SIMULATION_CONFIG['null_angle_tol']):
    return abs(math.remainder(value, 2 * math.pi)) <= tol


def _monomial(u, tol):
    "Target path and phase of every column when u is a phased permutation."
    magnitudes = np.abs(u)
    targets = []
    for column in range(u.shape[1]):
        row = int(np.argmax(magnitudes[:, column]))
        if abs(magnitudes[row, column] - 1) > tol:
            return None
        targets.append((row, float(np.angle(u[row, column]))))
    return targets


def reck_decompose(u, tol=1e-12):
    """Triangular beam-splitter mesh realizing u on paths 0..d-1.
    Parameters
    ----------
    u : np.ndarray
        d x d unitary acting on the path register
    tol : float
        magnitude below which a matrix entry counts as already nulled
    Returns
    -------
    netlist : Netlist
        beam splitters and phase shifters (or one path permutation when u is a
        phased permutation) whose transfer equals u
    """
    u = check_unitary(u, 'u')
    dim = u.shape[0]
    window = ModeWindow(0, 0, dim)
    monomial = _monomial(u, tol)
    if monomial is not None:
        elements = [PhaseShifter(p, phase) for p, (_, phase) in enumerate(monomial)
                    if not _null(phase)]
        permutation = PathPermutation(tuple(target for target, _ in monomial))
        if not permutation.is_identity:
            elements.append(permutation)
        return Netlist('reck', window, elements, {'construction': 'reck', 'd': dim})

    work = np.array(u, dtype=complex)
    elements = []
    for i in range(dim - 1, 0, -1):
        for j in range(i):
            x, y = work[i, j], work[i, j + 1]
            if abs(x) <= tol:
                continue
            theta = math.atan2(abs(x), abs(y))
            alpha = float(np.angle(x) - np.angle(y) - math.pi / 2)
            # column operation P^dagger B^dagger on (j, j + 1)
            c, s = math.cos(theta), math.sin(theta)
            column_op = np.array([[np.exp(-1j * alpha) * c, -1j * s * np.exp(-1j * alpha)],
                                  [-1j * s, c]])
            work[:, [j, j + 1]] = work[:, [j, j + 1]] @ column_op
            work[i, j] = 0.0
            if not _null(alpha):
                elements.append(PhaseShifter(j, alpha))
            elements.append(BeamSplitter(j, j + 1, theta, 0.0))
    for p in range(dim):
        phase = float(np.angle(work[p, p]))
        if not _null(phase):
            elements.append(PhaseShifter(p, phase))
    LOGGER.debug('Reck mesh of a %sx%s unitary: %s elements', dim, dim, len(elements))
    return Netlist('reck', window, elements, {'construction': 'reck', 'd': dim})


def universal_oam(u, d, simplified=True):
    "S_d^-1 . U_P . S_d: the path unitary u applied to OAM 0..d-1 on path 0."
    check_power_of_two('OAM dimension d', d)
    if d < 2:
        raise RegimeError('Universal scheme needs d >= 2, got {}'.format(d))
    u = check_unitary(u, 'u')
    _check_square(u, d, 'u')
    netlist = Netlist('universal_{}'.format(d), ModeWindow(0, d - 1, d),
                      sorter(d).elements + reck_decompose(u).elements + sorter_inv(d).elements,
                      {'construction': 'universal', 'd': d})
    return simplify(netlist) if simplified else netlist


def xk_gate(d, k):
    "X^k on OAM 0..d-1: the permutation scheme after redundant exchangers are removed."
    check_power_of_two('OAM dimension d', d)
    if d < 2 or not 1 <= k <= d - 1:
        raise RegimeError('Power k must lie in 1..{0} for d={1}, got {2}'.format(d - 1, d, k))
    if k > d // 2:
        netlist = xk_gate(d, d - k).inverse('xk_{0}_{1}'.format(d, k))
    else:
        netlist = simplify(Netlist('xk_{0}_{1}'.format(d, k), ModeWindow(0, d - 1, d),
                                   universal_oam(pauli_x(d, k), d, simplified=False).elements))
    netlist = netlist.with_elements(netlist.elements, construction='xk', d=d, k=k)
    LOGGER.info('Synthesized X^%s for d=%s: %s elements', k, d, len(netlist))
    return netlist


def z_gate(d, k=1):
    "Clock gate Z^k: one Dove prism at -k pi/d and a mirror undoing the OAM sign flip."
    if d < 2:
        raise RegimeError('Z gate needs d >= 2, got {}'.format(d))
    if k % d == 0:
        elements = (Mirror(0), Mirror(0))
    else:
        elements = (DovePrism(0, -k * math.pi / d), Mirror(0))
    return Netlist('z_{0}_{1}'.format(d, k), ModeWindow(0, d - 1, 1), elements,
                   {'construction': 'z', 'd': d, 'k': k})


def _controlled(u_path, d, spacing, name):
    u_path = check_unitary(u_path, 'u_path')
    n = u_path.shape[0]
    decomposition = eig_unitary(u_path)
    elements = list(reck_decompose(decomposition.m).elements)
    for path, phase in enumerate(decomposition.phases):
        if _null(phase):
            continue
        elements.extend((DovePrism(path, phase / (2 * spacing)), Mirror(path)))
    elements.extend(reck_decompose(decomposition.m.conj().T).elements)
    netlist = Netlist(name, ModeWindow(0, spacing * (d - 1), n), elements,
                      {'construction': name, 'd': d, 'n': n, 'm': spacing})
    LOGGER.info('Synthesized %s on %s paths: %s elements', name, n, len(netlist))
    return netlist


def controlled_u(u_path, d):
    """OAM-controlled path unitary |k>_O|p>_P -> |k>_O (u^k |p>)_P.
    u = M^dagger diag(exp(-i phi)) M; each eigenpath gets a Dove prism at phi_j / 2."""
    return _controlled(u_path, d, 1, 'controlled_u')


def controlled_u_spaced(u_path, d, m):
    "Same as controlled_u with control values carried by OAM m k (Dove prisms at phi_j / 2m)."
    if m < 1:
        raise RegimeError('OAM spacing must be at least 1, got {}'.format(m))
    return _controlled(u_path, d, m, 'controlled_u_spaced')


def cz_gate(n, d=None):
    "Controlled-Z between OAM and path: Dove prism at -pi p / n and a mirror on path p."
    d = d or n
    elements = []
    for p in range(n):
        elements.extend((DovePrism(p, -math.pi * p / n), Mirror(p)))
    return Netlist('cz_{}'.format(n), ModeWindow(0, d - 1, n), elements,
                   {'construction': 'cz', 'n': n, 'd': d})


def _swap(n, d, swap_mode):
    return swap_ideal(n, d) if swap_mode == 'ideal' else swap_expanded(n, d)


def _sandwich(core, n, d, swap_mode, name):
    swap = _swap(n, d, swap_mode)
    width = swap.window_hint.n_paths
    core = core.embed(0, width)
    return Netlist(name, ModeWindow(0, max(n, d) - 1, width),
                   swap.elements + core.elements + swap.inverse().elements,
                   {'construction': name, 'n': n, 'd': d, 'swap_mode': swap_mode})


def path_controlled(u_oam, n, swap_mode='ideal'):
    """Path-controlled OAM unitary |k>_O|p>_P -> (u^p |k>)_O |p>_P.
    For n > d the OAM register is carried by the values k n / d."""
    u_oam = check_unitary(u_oam, 'u_oam')
    d = u_oam.shape[0]
    check_power_of_two('path count n', n)
    check_power_of_two('OAM dimension d', d)
    spacing = d // n if n <= d else 1
    core = controlled_u_spaced(u_oam, n, spacing)
    netlist = _sandwich(core, n, d, swap_mode, 'path_controlled')
    LOGGER.info('Synthesized path-controlled gate (n=%s, d=%s, %s swap): %s elements',
                n, d, swap_mode, len(netlist))
    return netlist


def parallelize(u, n, swap_mode='ideal'):
    "SWAP^-1 . U_P . SWAP: u applied to the OAM register of each of the n paths."
    u = check_unitary(u, 'u')
    d = u.shape[0]
    check_power_of_two('path count n', n)
    check_power_of_two('OAM dimension d', d)
    netlist = _sandwich(reck_decompose(u), n, d, swap_mode, 'parallelized')
    LOGGER.info('Synthesized parallelized gate (n=%s, d=%s, %s swap): %s elements',
                n, d, swap_mode, len(netlist))
    return netlist


def _support(element):
    if isinstance(element, IdealSwap):
        return None
    if isinstance(element, PathPermutation):
        return {p for p, q in enumerate(element.map) if p != q}
    return set(element.paths)


def _commute(first, second):
    "Sufficient condition for two elements to commute."
    a, b = _support(first), _support(second)
    if a is None or b is None:
        return False
    if not a & b:
        return True
    if len(a) == 1 and a == b:
        # phases are uniform over OAM, holograms are translations
        if isinstance(first, PhaseShifter) or isinstance(second, PhaseShifter):
            return True
        return isinstance(first, Hologram) and isinstance(second, Hologram)
    return False


def _bs_matrix(element, path_a):
    matrix = element.matrix()
    return matrix if element.path_a == path_a else matrix[::-1, ::-1]


def _combine(first, second):
    """Replacement of the pair (first, second), first acting first, or None
    when no rewrite applies."""
    if isinstance(first, PathPermutation) and isinstance(second, PathPermutation):
        merged = first.then(second)
        return [] if merged.is_identity else [merged]
    if _support(first) != _support(second):
        return None
    if isinstance(first, PhaseShifter) and isinstance(second, PhaseShifter):
        phi = math.remainder(first.phi + second.phi, 2 * math.pi)
        return [] if _null(phi) else [PhaseShifter(first.path, phi)]
    if isinstance(first, Hologram) and isinstance(second, Hologram):
        return [] if first.charge == -second.charge else None
    if isinstance(first, BeamSplitter) and isinstance(second, BeamSplitter):
        product = _bs_matrix(second, first.path_a) @ _bs_matrix(first, first.path_a)
        return [] if np.allclose(product, np.eye(2), rtol=0, atol=1e-12) else None
    if isinstance(first, DovePrism) and isinstance(second, DovePrism):
        return [] if _null(2 * (first.alpha - second.alpha)) else None
    if isinstance(first, Mirror) and isinstance(second, DovePrism):
        return [DovePrism(second.path, -second.alpha), Mirror(second.path)]
    for involution in (Mirror, PolSplitter, HalfWavePlate):
        if isinstance(first, involution) and isinstance(second, involution):
            return []
    return None


def _is_null(element):
    if isinstance(element, PhaseShifter):
        return _null(element.phi)
    if isinstance(element, BeamSplitter):
        return _null(element.theta)
    if isinstance(element, Hologram):
        return element.charge == 0
    if isinstance(element, PathPermutation):
        return element.is_identity
    return False


def _push_permutations(elements, n_paths):
    """Move path permutations towards the end by relabeling the elements that
    follow them; ideal swaps stop the motion."""
    output = []
    pending = None

    def flush():
        if pending is not None and not pending.is_identity:
            output.append(pending)

    for element in elements:
        if isinstance(element, IdealSwap):
            flush()
            pending = None
            output.append(element)
        elif isinstance(element, PathPermutation):
            pending = element if pending is None else pending.then(element)
        elif pending is not None:
            inverse_map = pending.inverse().map
            path_map = inverse_map + tuple(range(len(inverse_map), n_paths))
            output.append(element.relabel(path_map))
        else:
            output.append(element)
    flush()
    return output


def _peephole(elements):
    output = []
    for element in elements:
        if _is_null(element):
            continue
        merged = False
        for index in range(len(output) - 1, -1, -1):
            candidate = output[index]
            replacement = _combine(candidate, element)
            if replacement is not None:
                output[index:index + 1] = replacement
                merged = True
                break
            if not _commute(candidate, element):
                break
        if not merged:
            output.append(element)
    return output


def simplify(netlist):
    """Remove redundant elements without changing the transfer: inverse pairs
    (exchangers against their inverses, opposite holograms, mirror pairs,
    equal Dove prisms), merged phases and null rotations. Elements on disjoint
    paths are reordered to expose the pairs."""
    elements = _push_permutations(netlist.elements,
                                  max(netlist.window_hint.n_paths,
                                      max((len(e.map) for e in netlist.elements
                                           if isinstance(e, PathPermutation)), default=0)))
    while True:
        reduced = _peephole(elements)
        if reduced == elements:
            break
        elements = reduced
    LOGGER.info('Simplified %s: %s -> %s elements', netlist.name, len(netlist), len(elements))
    return netlist.with_elements(elements)


def _block_modes(n_paths, d, spacing=1):
    return tuple(Mode(spacing * q, p) for p in range(n_paths) for q in range(d))


def _require_u(spec):
    if spec.u is None:
        raise RegimeError('Gate kind {!r} needs a unitary'.format(spec.kind))
    return spec.u


def target_matrix(spec):
    "Ideal block of a gate specification on the basis modes it acts on."
    d, n = spec.d, spec.n
    if spec.kind in ('universal', 'pauli_x_power', 'pauli_z_power'):
        matrix = {'universal': lambda: _require_u(spec),
                  'pauli_x_power': lambda: pauli_x(d, spec.k),
                  'pauli_z_power': lambda: pauli_z(d, spec.k)}[spec.kind]()
        return TargetBlock(_block_modes(1, d), as_cmatrix(matrix))
    if spec.kind in ('controlled_u', 'controlled_u_spaced'):
        u = _require_u(spec)
        n = u.shape[0]
        spacing = spec.m if spec.kind == 'controlled_u_spaced' else 1
        modes = _block_modes(n, d, spacing)
        matrix = np.zeros((n * d, n * d), dtype=complex)
        for q in range(d):
            power = matrix_power(u, q)
            matrix[q::d, q::d] = power
        return TargetBlock(modes, as_cmatrix(matrix))
    if spec.kind == 'cz':
        phases = [np.exp(2j * np.pi * q * p / n) for p in range(n) for q in range(d)]
        return TargetBlock(_block_modes(n, d), as_cmatrix(np.diag(phases)))
    u = _require_u(spec)
    d = u.shape[0]
    spacing = n // d if n > d else 1
    if spec.kind == 'path_controlled':
        blocks = [matrix_power(u, p) for p in range(n)]
    else:
        blocks = [u] * n
    return TargetBlock(_block_modes(n, d, spacing), as_cmatrix(block_diag(*blocks)))


def synthesize(spec):
    "Netlist of a gate specification."
    LOGGER.info('Synthesizing %s (d=%s, n=%s, k=%s, m=%s, %s swap)',
                spec.kind, spec.d, spec.n, spec.k, spec.m, spec.swap_mode)
    if spec.kind == 'universal':
        return universal_oam(_require_u(spec), spec.d)
    if spec.kind == 'pauli_x_power':
        return xk_gate(spec.d, spec.k)
    if spec.kind == 'pauli_z_power':
        return z_gate(spec.d, spec.k)
    if spec.kind == 'controlled_u':
        return controlled_u(_require_u(spec), spec.d)
    if spec.kind == 'controlled_u_spaced':
        return controlled_u_spaced(_require_u(spec), spec.d, spec.m)
    if spec.kind == 'cz':
        return cz_gate(spec.n, spec.d)
    if spec.kind == 'path_controlled':
        return path_controlled(_require_u(spec), spec.n, spec.swap_mode)
    return parallelize(_require_u(spec), spec.n, spec.swap_mode)
