"""Resource accounting, closed-form element counts, scaling ratios, loss
model and OAM periodicity checks."""
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
import numpy as np
import pandas as pd
from oam_optics.configuration import XK_TABLE_CONFIG
from oam_optics.elements import (BeamSplitter, DovePrism, HalfWavePlate, Hologram, IdealSwap,
                                 Mirror, PhaseShifter, PolSplitter, block_transfer)
from oam_optics.exceptions import RationalityError, RegimeError
from oam_optics.modes import Mode, basis_state, required_window
from oam_optics.numerics import phase_aligned_distance
from oam_optics.utils import check_power_of_two, log2_int


LOGGER = logging.getLogger('oam_optics')


@dataclass
class ResourceReport:
    "Element tally of a netlist."
    beam_splitters: int = 0
    phase_shifters: int = 0
    dove_prisms: int = 0
    holograms: int = 0
    mirrors: int = 0
    pbs: int = 0
    hwp: int = 0
    formula_derived: bool = False

    def to_dict(self):
        return asdict(self)


@dataclass
class LossReport:
    "Transmittance of a scheme when every loss-bearing element transmits T."
    T: float
    scheme: str
    d: int
    exponent: int
    per_photon_depths: tuple
    all_photon_transmittance: float
    per_photon_penalty_factor: float

    def to_dict(self):
        document = asdict(self)
        document['per_photon_depths'] = list(self.per_photon_depths)
        return document


@dataclass
class PeriodicityReport:
    "Distance of every OAM subspace block to the block of subspace 0."
    d: int
    distances: dict = field(default_factory=dict)

    @property
    def max_distance(self):
        return max(self.distances.values(), default=0.0)

    def to_dict(self):
        return {'d': self.d, 'max_distance': self.max_distance,
                'distances': {str(a): value for a, value in sorted(self.distances.items())}}


@dataclass(frozen=True)
class PeriodBound:
    "Period of a controlled gate: the certified lcm and the product bound."
    certified: int
    product: int


_TALLY = {BeamSplitter: 'beam_splitters', PhaseShifter: 'phase_shifters',
          DovePrism: 'dove_prisms', Hologram: 'holograms', Mirror: 'mirrors',
          PolSplitter: 'pbs', HalfWavePlate: 'hwp'}


def count_netlist(netlist):
    """Tally the elements of a netlist. An ideal swap has no element-level
    realization here; it contributes the closed-form beam-splitter count
    of a swap and marks the report as formula-derived.

    Every Dove prism is tallied with the steering mirror that realigns its
    displaced output beam. The steering mirror is part of the prism mount and
    has no separate action, so it appears in the mirror count only."""
    report = ResourceReport()
    for element in netlist.elements:
        if isinstance(element, IdealSwap):
            report.beam_splitters += n_swap(element.n_in, element.d_out)
            report.formula_derived = True
            continue
        attribute = _TALLY.get(type(element))
        if attribute is not None:
            setattr(report, attribute, getattr(report, attribute) + 1)
    report.mirrors += report.dove_prisms
    LOGGER.debug('Counts of %s: %s', netlist.name, report)
    return report


def _log2(name, value):
    check_power_of_two(name, value)
    return log2_int(value)


def _reduced_power(d, k):
    "Power in 1..d/2 equivalent to k (X^k is the inverse of X^(d-k))."
    if not 1 <= k <= d - 1:
        raise RegimeError('Power k must lie in 1..{0} for d={1}, got {2}'.format(d - 1, d, k))
    return d - k if k > d // 2 else k


def n_sorter(d):
    _log2('d', d)
    return 2 * (d - 1)


def n_reck(d):
    return d * (d - 1) // 2


def n_universal(d):
    return n_reck(d) + 2 * n_sorter(d)


def n_x(d, k=1):
    """Beam splitters retained in the simplified X^k scheme,
    4 (k log2(d / 2^(m+1)) + 2^(m+1) - 1) with 2^m <= k < 2^(m+1)."""
    big_m = _log2('d', d)
    if d < 2:
        raise RegimeError('X gate needs d >= 2, got {}'.format(d))
    k = _reduced_power(d, k)
    m = k.bit_length() - 1
    return 4 * (k * (big_m - m - 1) + 2 ** (m + 1) - 1)


def n_swap(n, d):
    log_n = _log2('n', n)
    log_d = _log2('d', d)
    if n <= d:
        total = Fraction(n, 2) * log_n + d * log_n - 3 * n + 2 * d + 1
    else:
        total = Fraction(n, 2) * log_n + d * log_d + n - 2 * d + 1
    return int(total)


def n_universal_par(n, d):
    return n_reck(d) + 2 * n_swap(n, d)


def _require_paths_cover(n, d):
    if n < d:
        raise RegimeError('Formula assumes n >= d, got n={0}, d={1}'.format(n, d))


def n_x_par(n, d, k=1):
    """Beam splitters of the parallelized X^k scheme,
    n log2 n + 2n - 4k + 2 + 2d (k / 2^m + m - 1)."""
    log_n = _log2('n', n)
    _log2('d', d)
    _require_paths_cover(n, d)
    k = _reduced_power(d, k)
    m = k.bit_length() - 1
    total = n * log_n + 2 * n - 4 * k + 2 + 2 * d * (Fraction(k, 2 ** m) + m - 1)
    if total.denominator != 1:
        raise RegimeError('Non-integer count for n={0}, d={1}, k={2}'.format(n, d, k))
    return int(total)


def n_x_naive(n, d, k=1):
    return n * n_x(d, k)


FORMULAS = {
    'sorter': n_sorter,
    'reck': n_reck,
    'universal': n_universal,
    'x': n_x,
    'xk': n_x,
    'swap': n_swap,
    'universal_par': n_universal_par,
    'x_par': n_x_par,
    'xk_par': n_x_par,
    'xk_naive': n_x_naive,
    'cu_unfolded': lambda n: controlled_counts(n).beam_splitters,
    'cu_folded': lambda n: controlled_counts(n, folded=True).beam_splitters}


def formula_counts(kind, *params):
    "Closed-form beam-splitter count of a scheme."
    if kind not in FORMULAS:
        raise RegimeError('Unknown formula {0!r}, expected one of {1}'
                          .format(kind, ', '.join(sorted(FORMULAS))))
    return FORMULAS[kind](*params)


def controlled_counts(n, folded=False):
    """Element counts of the OAM-controlled path unitary on n paths. The folded
    variant routes the photon back through the eigenbasis module with
    polarizing beam splitters."""
    if folded:
        return ResourceReport(beam_splitters=n * (n + 3) // 2, phase_shifters=n * (n - 1) // 2,
                              dove_prisms=n, mirrors=2 * n, formula_derived=True)
    return ResourceReport(beam_splitters=n * (n - 1), phase_shifters=n * (n - 1),
                          dove_prisms=n, mirrors=2 * n, formula_derived=True)


@dataclass(frozen=True)
class Ratio:
    exact: float
    asymptotic: float


def ratio(kind, n, d, k=None):
    """Parallelized over naive beam-splitter count, exact and asymptotic.
    Parameters
    ----------
    kind : str
        'reck' (general unitary), 'perm' (permutation), 'x', 'xk' or 'xk_half' (k = d/2)
    n : int
        number of paths
    d : int
        OAM dimension
    k : int
        power of the X gate for kind 'xk'
    Returns
    -------
    ratio : Ratio
    """
    log_n, log_d = _log2('n', n), _log2('d', d)
    if kind == 'reck':
        exact = Fraction(n_universal_par(n, d), n * n_universal(d))
        asymptotic = 1 / n + 2 * log_n / d ** 2
    elif kind == 'perm':
        exact = Fraction(2 * n_swap(n, d), n * 2 * n_sorter(d))
        asymptotic = log_d / (2 * n) + log_n / (4 * d)
    elif kind == 'x':
        exact = Fraction(n_x_par(n, d), n_x_naive(n, d))
        asymptotic = log_n / (4 * log_d)
    elif kind in ('xk', 'xk_half'):
        if kind == 'xk_half':
            k = d // 2
        elif k is None:
            raise RegimeError('Ratio xk needs the power k')
        exact = Fraction(n_x_par(n, d, k), n_x_naive(n, d, k))
        if kind == 'xk_half':
            asymptotic = 3 * log_n / (4 * d)
        else:
            asymptotic = log_n / (4 * _reduced_power(d, k) * log_d)
    else:
        raise RegimeError('Unknown ratio kind {!r}'.format(kind))
    return Ratio(float(exact), float(asymptotic))


def universal_depth(d):
    "Loss-bearing elements traversed in the universal scheme, d + 10 log2 d."
    return d + 10 * _log2('d', d)


def loss_model(d, T, scheme='parallelized', n=None):
    """Transmittance of d photons (one per path) or of a single photon
    through a scheme, with transmittance T per loss-bearing element."""
    if not 0 < T <= 1:
        raise RegimeError('Transmittance must lie in (0, 1], got {}'.format(T))
    log_d = _log2('d', d)
    n = d if n is None else n
    depth = universal_depth(d)
    if scheme == 'universal':
        exponent, depths, penalty = depth, (depth,), 1.0
    elif scheme in ('naive_parallel', 'parallelized'):
        if n != d:
            raise RegimeError('Parallel loss exponents assume n = d, got n={0}, d={1}'.format(n, d))
        if scheme == 'naive_parallel':
            exponent, penalty = d * d + 10 * d * log_d, 1.0
        else:
            exponent, penalty = d * d + 12 * d * log_d, T ** (2 * log_d)
        depths = (Fraction(exponent, d),) * d
    else:
        raise RegimeError('Unknown loss scheme {!r}'.format(scheme))
    return LossReport(T=T, scheme=scheme, d=d, exponent=exponent,
                      per_photon_depths=tuple(float(x) for x in depths),
                      all_photon_transmittance=T ** exponent, per_photon_penalty_factor=penalty)


def measured_depths(netlist, window, inputs=None):
    """Expected number of loss-bearing elements each input photon traverses:
    every element adds the probability found on its paths."""
    inputs = window.modes if inputs is None else tuple(inputs)
    simulation = required_window(netlist, window)
    depths = {}
    for mode in inputs:
        amplitudes = basis_state(simulation, mode).amplitudes
        depth = 0.0
        for element in netlist.elements:
            if element.lossy:
                touched = element.paths
                depth += sum(abs(a) ** 2 for m, a in amplitudes.items()
                             if touched is None or m.path in touched)
            amplitudes = element.apply(amplitudes, simulation)
        depths[mode] = depth
    return depths


def subspace_modes(d, a, paths=1, oam_step=1):
    "Basis of the OAM subspace a: values a d .. a d + d - 1 (times oam_step) on every path."
    return tuple(Mode(oam_step * (a * d + q), p) for p in range(paths) for q in range(d))


def check_periodicity(netlist, d, a_lo, a_hi, paths=1, oam_step=1):
    """Compare the transfer block of every OAM subspace a_lo..a_hi with the
    block of subspace 0. Amplitude leaving a subspace shows up as distance."""
    check_power_of_two('d', d)
    reference = block_transfer(netlist, subspace_modes(d, 0, paths, oam_step), leakage_tol=np.inf)
    report = PeriodicityReport(d)
    for a in range(a_lo, a_hi + 1):
        block = block_transfer(netlist, subspace_modes(d, a, paths, oam_step), leakage_tol=np.inf)
        report.distances[a] = phase_aligned_distance(block, reference)
    LOGGER.info('Periodicity of %s over subspaces %s..%s: max distance %.3e',
                netlist.name, a_lo, a_hi, report.max_distance)
    return report


def _as_fraction(phase):
    if isinstance(phase, Fraction):
        return phase
    if isinstance(phase, tuple) and len(phase) == 2:
        return Fraction(*phase)
    if isinstance(phase, int) and not isinstance(phase, bool):
        return Fraction(phase)
    if isinstance(phase, str):
        return Fraction(phase)
    raise RationalityError('Eigenphase {!r} is not given as a rational multiple of 2 pi'
                           .format(phase))


def controlled_period_bound(phases):
    """Period of the OAM-controlled gate with eigenphases 2 pi a_k / b_k.
    Returns the lcm of the reduced denominators together with their product."""
    denominators = [_as_fraction(phase).denominator for phase in phases]
    return PeriodBound(certified=math.lcm(*denominators) if denominators else 1,
                       product=math.prod(denominators))


def xk_table(n=XK_TABLE_CONFIG['n'], dims=XK_TABLE_CONFIG['dims']):
    "Naive and parallelized beam-splitter counts of X^k for every d and 1 <= k <= d - 1."
    rows = []
    for d in dims:
        for k in range(1, d):
            try:
                rows.append({'n': n, 'd': d, 'k': k, 'naive': n_x_naive(n, d, k),
                             'parallelized': n_x_par(n, d, k), 'note': ''})
            except RegimeError as error:
                rows.append({'n': n, 'd': d, 'k': k, 'naive': None, 'parallelized': None,
                             'note': str(error)})
    return pd.DataFrame(rows, columns=['n', 'd', 'k', 'naive', 'parallelized', 'note'])


def ratio_table(kind, ns, dims, k=None):
    rows = []
    for n in ns:
        for d in dims:
            try:
                value = ratio(kind, n, d, k)
                rows.append({'n': n, 'd': d, 'exact': value.exact,
                             'asymptotic': value.asymptotic, 'note': ''})
            except RegimeError as error:
                rows.append({'n': n, 'd': d, 'exact': None, 'asymptotic': None,
                             'note': str(error)})
    return pd.DataFrame(rows, columns=['n', 'd', 'exact', 'asymptotic', 'note'])


def loss_table(T, dims):
    rows = []
    for d in dims:
        naive = loss_model(d, T, 'naive_parallel')
        parallel = loss_model(d, T, 'parallelized')
        rows.append({'d': d, 'universal_depth': universal_depth(d),
                     'naive_exponent': naive.exponent, 'parallelized_exponent': parallel.exponent,
                     'per_photon_penalty': parallel.per_photon_penalty_factor})
    return pd.DataFrame(rows)


def table_records(frame):
    "JSON-ready rows of a table (missing cells become null)."
    return [{key: (None if isinstance(value, float) and math.isnan(value) else
                   value.item() if hasattr(value, 'item') else value)
             for key, value in row.items()}
            for row in frame.astype(object).to_dict(orient='records')]


def format_table(frame):
    return frame.to_string(index=False, float_format=lambda x: '{:.6g}'.format(x))
