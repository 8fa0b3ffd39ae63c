"""OAM x path (x polarization) basis, finite simulation windows and sparse
photon state vectors."""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional
import numpy as np
from oam_optics.exceptions import WindowError, WindowMismatchError


LOGGER = logging.getLogger('oam_optics')
POLARIZATIONS = ('H', 'V')


@dataclass(frozen=True, order=True)
class Mode:
    "Basis label |oam>_O |path>_P (|pol>)."
    oam: int
    path: int
    pol: Optional[str] = None

    def __post_init__(self):
        if self.path < 0:
            raise WindowError('Path index must be non-negative, got {}'.format(self.path))
        if self.pol is not None and self.pol not in POLARIZATIONS:
            raise WindowError('Unknown polarization {}'.format(self.pol))

    def moved(self, oam=None, path=None, pol=None):
        return Mode(self.oam if oam is None else oam,
                    self.path if path is None else path,
                    self.pol if pol is None else pol)

    def __str__(self):
        label = '|{0}>_O|{1}>_P'.format(self.oam, self.path)
        if self.pol is not None:
            label += '|{}>'.format(self.pol)
        return label


@dataclass(frozen=True)
class ModeWindow:
    """Finite window oam_lo..oam_hi (inclusive) on n_paths paths, enumerated in
    lexicographic (path, oam, pol) order."""
    oam_lo: int
    oam_hi: int
    n_paths: int
    with_pol: bool = False

    def __post_init__(self):
        if self.oam_lo > self.oam_hi:
            raise WindowError('Empty OAM range {0}..{1}'.format(self.oam_lo, self.oam_hi))
        if self.n_paths < 1:
            raise WindowError('A window needs at least one path')

    @cached_property
    def modes(self):
        pols = POLARIZATIONS if self.with_pol else (None,)
        return tuple(Mode(oam, path, pol) for path in range(self.n_paths)
                     for oam in range(self.oam_lo, self.oam_hi + 1) for pol in pols)

    @cached_property
    def _index(self):
        return {mode: i for i, mode in enumerate(self.modes)}

    @property
    def size(self):
        return len(self.modes)

    def __contains__(self, mode):
        return mode in self._index

    def index(self, mode):
        try:
            return self._index[mode]
        except KeyError:
            raise WindowError('Mode {0} is outside the window {1}'.format(mode, self)) from None

    def hull(self, other):
        "Smallest window containing both windows."
        return ModeWindow(min(self.oam_lo, other.oam_lo), max(self.oam_hi, other.oam_hi),
                          max(self.n_paths, other.n_paths), self.with_pol or other.with_pol)

    def covers(self, other):
        return (self.oam_lo <= other.oam_lo and self.oam_hi >= other.oam_hi
                and self.n_paths >= other.n_paths and (self.with_pol or not other.with_pol))

    def to_dict(self):
        return {'oam_lo': self.oam_lo, 'oam_hi': self.oam_hi,
                'n_paths': self.n_paths, 'pol': self.with_pol}

    def __str__(self):
        return 'window(oam {0}..{1}, {2} paths{3})'.format(
            self.oam_lo, self.oam_hi, self.n_paths, ', pol' if self.with_pol else '')


@dataclass(frozen=True)
class StateVector:
    "Sparse photon state: a map Mode -> complex amplitude inside a window."
    window: ModeWindow
    amplitudes: dict = field(default_factory=dict)

    def __post_init__(self):
        for mode in self.amplitudes:
            if mode not in self.window:
                raise WindowError('Mode {0} is outside {1}'.format(mode, self.window))

    def norm(self):
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))

    def amplitude(self, mode):
        return self.amplitudes.get(mode, 0j)

    def to_dense(self, window=None):
        "Dense amplitude vector in the enumeration order of window."
        window = self.window if window is None else window
        vector = np.zeros(window.size, dtype=complex)
        for mode, amplitude in self.amplitudes.items():
            if mode in window:
                vector[window.index(mode)] += amplitude
        return vector

    def in_window(self, window):
        "Same state expressed in a window that contains all of its modes."
        return StateVector(window, dict(self.amplitudes))

    def pruned(self, tol=0.0):
        return StateVector(self.window, {m: a for m, a in self.amplitudes.items() if abs(a) > tol})


def basis_state(window, mode):
    if mode not in window:
        raise WindowError('Mode {0} is outside {1}'.format(mode, window))
    return StateVector(window, {mode: 1.0 + 0j})


def superposition(window, weights):
    "Normalized state from a mapping Mode -> weight."
    norm = np.sqrt(sum(abs(w) ** 2 for w in weights.values()))
    return StateVector(window, {mode: complex(w) / norm for mode, w in weights.items()})


def inner(a, b):
    "<a|b> over the sparse supports."
    if a.window != b.window:
        raise WindowMismatchError('States live in different windows: {0} vs {1}'
                                  .format(a.window, b.window))
    if len(a.amplitudes) > len(b.amplitudes):
        return complex(sum(np.conj(a.amplitude(m)) * amp for m, amp in b.amplitudes.items()))
    return complex(sum(np.conj(amp) * b.amplitude(m) for m, amp in a.amplitudes.items()))


def required_window(netlist, input_window):
    """Window that contains every OAM value reachable while the netlist acts on
    input_window. Each path carries an interval that every element transforms
    (holograms shift it, mirrors and Dove prisms negate it, path-mixing
    elements merge the intervals of the paths they couple)."""
    n_paths = max(input_window.n_paths, netlist.window_hint.n_paths)
    intervals = {path: (input_window.oam_lo, input_window.oam_hi) for path in range(n_paths)}
    lo, hi = input_window.oam_lo, input_window.oam_hi
    for element in netlist.elements:
        intervals = element.propagate_interval(intervals)
        for low, high in intervals.values():
            lo, hi = min(lo, low), max(hi, high)
    with_pol = input_window.with_pol or netlist.window_hint.with_pol
    window = ModeWindow(lo, hi, n_paths, with_pol)
    LOGGER.debug('Required window for %s on %s: %s', netlist.name, input_window, window)
    return window
