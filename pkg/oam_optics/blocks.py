"""Building blocks generated as netlists: Leach interferometer, OAM exchanger,
binary-tree OAM sorter and the OAM/path swap."""
import logging
import math
from oam_optics.elements import (BeamSplitter, DovePrism, Hologram, IdealSwap, Mirror, Netlist,
                                 PathPermutation, PhaseShifter)
from oam_optics.exceptions import RegimeError
from oam_optics.modes import ModeWindow
from oam_optics.utils import check_power_of_two, log2_int


LOGGER = logging.getLogger('oam_optics')


def leach(alpha, dove_alpha):
    """Mach-Zehnder interferometer with a Dove prism (and its compensating
    mirror) in arm 0 and a phase shifter alpha in arm 1."""
    elements = (BeamSplitter(0, 1), DovePrism(0, dove_alpha), Mirror(0),
                PhaseShifter(1, alpha), BeamSplitter(0, 1))
    return Netlist('leach', ModeWindow(0, 1, 2), elements,
                   {'block': 'leach', 'alpha': alpha, 'dove_alpha': dove_alpha})


def exchanger_elements(k, path_a, path_b):
    """Elements of E_k with port 0 on path_a and port 1 on path_b.
    For OAM values that are multiples of k, with t = (m // k) % 2:
    |m>|p> -> |m - t k + p k>|t>, without any phase."""
    quarter = math.pi / 4
    return (Hologram(path_b, k), PhaseShifter(path_b, math.pi / 2),
            BeamSplitter(path_a, path_b, quarter, 0.0),
            DovePrism(path_a, math.pi / (2 * k)), Mirror(path_a), PhaseShifter(path_a, math.pi),
            BeamSplitter(path_a, path_b, quarter, 0.0),
            PhaseShifter(path_a, math.pi), PhaseShifter(path_b, -math.pi / 2),
            Hologram(path_b, -k))


def exchanger_inv_elements(k, path_a, path_b):
    "Elements of the inverse exchanger; the Dove prism is rotated through -pi/(2k)."
    quarter = math.pi / 4
    return (Hologram(path_b, k), PhaseShifter(path_b, math.pi / 2),
            PhaseShifter(path_a, -math.pi),
            BeamSplitter(path_a, path_b, -quarter, 0.0),
            DovePrism(path_a, -math.pi / (2 * k)), Mirror(path_a), PhaseShifter(path_a, -math.pi),
            BeamSplitter(path_a, path_b, -quarter, 0.0),
            PhaseShifter(path_b, -math.pi / 2), Hologram(path_b, -k))


def _check_order(k):
    if not isinstance(k, int) or k < 1:
        raise RegimeError('Exchanger order must be a positive integer, got {}'.format(k))
    check_power_of_two('exchanger order k', k)


def exchanger(k, paths=(0, 1), n_paths=None):
    _check_order(k)
    n_paths = n_paths or max(paths) + 1
    return Netlist('exchanger_{}'.format(k), ModeWindow(0, 2 * k - 1, n_paths),
                   exchanger_elements(k, *paths), {'block': 'exchanger', 'k': k})


def exchanger_inv(k, paths=(0, 1), n_paths=None):
    _check_order(k)
    n_paths = n_paths or max(paths) + 1
    return Netlist('exchanger_inv_{}'.format(k), ModeWindow(0, 2 * k - 1, n_paths),
                   exchanger_inv_elements(k, *paths), {'block': 'exchanger_inv', 'k': k})


def _sorter_stages(d, spacing, offset):
    for level in range(log2_int(d)):
        k = 1 << level
        for r in range(k):
            yield spacing * k, offset + r, offset + r + k


def _check_sorter(d, spacing):
    check_power_of_two('sorter dimension d', d)
    if d < 2:
        raise RegimeError('Sorter dimension must be at least 2, got {}'.format(d))
    check_power_of_two('sorter spacing', spacing)


def sorter(d, spacing=1, offset=0, n_paths=None):
    """Binary-tree OAM sorter on paths offset..offset+d-1:
    |spacing m>_O |offset>_P -> |spacing d (m // d)>_O |offset + m % d>_P."""
    _check_sorter(d, spacing)
    elements = []
    for k, path_a, path_b in _sorter_stages(d, spacing, offset):
        elements.extend(exchanger_elements(k, path_a, path_b))
    n_paths = n_paths or offset + d
    return Netlist('sorter_{}'.format(d), ModeWindow(0, spacing * d - 1, n_paths), elements,
                   {'block': 'sorter', 'd': d, 'spacing': spacing})


def sorter_inv(d, spacing=1, offset=0, n_paths=None):
    _check_sorter(d, spacing)
    elements = []
    for k, path_a, path_b in reversed(list(_sorter_stages(d, spacing, offset))):
        elements.extend(exchanger_inv_elements(k, path_a, path_b))
    n_paths = n_paths or offset + d
    return Netlist('sorter_inv_{}'.format(d), ModeWindow(0, spacing * d - 1, n_paths), elements,
                   {'block': 'sorter_inv', 'd': d, 'spacing': spacing})


def swap_ideal(n, d):
    check_power_of_two('path count n', n)
    check_power_of_two('OAM dimension d', d)
    width = max(n, d)
    return Netlist('swap_ideal_{0}_{1}'.format(n, d), ModeWindow(0, width - 1, width),
                   (IdealSwap(n, d),), {'block': 'swap_ideal', 'n': n, 'd': d})


def routing(targets, n_paths):
    """Permutation sending each source path in targets to its target; the
    remaining paths fill the free targets in increasing order."""
    mapping = [None] * n_paths
    for source, target in targets.items():
        mapping[source] = target
    free = iter(sorted(set(range(n_paths)) - set(targets.values())))
    return PathPermutation(tuple(next(free) if target is None else target for target in mapping))


def swap_expanded(n, d):
    """Element-level swap on n*d paths: every input path is sorted by its own
    OAM sorter, the sorter outputs are regrouped by residue and every group is
    recombined by an inverse sorter."""
    check_power_of_two('path count n', n)
    check_power_of_two('OAM dimension d', d)
    width = n * d
    elements = [routing({p: p * d for p in range(n)}, width)]
    if d > 1:
        for p in range(n):
            elements.extend(sorter(d, max(1, n // d), p * d, width).elements)
    elements.append(routing({p * d + r: r * n + p for p in range(n) for r in range(d)}, width))
    if n > 1:
        for r in range(d):
            elements.extend(sorter_inv(n, max(1, d // n), r * n, width).elements)
    elements.append(routing({r * n: r for r in range(d)}, width))
    LOGGER.debug('Expanded swap(%s, %s): %s elements on %s paths', n, d, len(elements), width)
    return Netlist('swap_expanded_{0}_{1}'.format(n, d), ModeWindow(0, max(n, d) - 1, width),
                   elements, {'block': 'swap_expanded', 'n': n, 'd': d})
