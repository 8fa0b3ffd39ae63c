"""Optical elements, the netlist IR and the exact transfer-matrix simulation.

Every element acts on a sparse amplitude map Mode -> complex. Conventions:

- beam splitter on (path_a, path_b): [[cos t, i sin t e^{i phi}], [i sin t e^{-i phi}, cos t]],
  identical for every OAM value (the two compensating mirrors are part of the device);
- phase shifter: e^{i phi} on its path;
- Dove prism rotated through alpha: |k> -> e^{-2ik alpha} |-k>;
- hologram of charge q: |k> -> |k + q>;
- mirror: |k> -> |-k>;
- ideal swap: the modulo-form exchange of OAM and path labels.
"""
import cmath
import json
import logging
import math
from dataclasses import dataclass, field, replace
from typing import ClassVar, Tuple
import numpy as np
from oam_optics.configuration import SIMULATION_CONFIG
from oam_optics.exceptions import (LeakageError, NetlistError, SchemaError,
                                   SwapDomainError, WindowError)
from oam_optics.modes import ModeWindow, StateVector, basis_state, required_window
from oam_optics.numerics import as_cmatrix
from oam_optics.utils import canonical_json, is_power_of_two


LOGGER = logging.getLogger('oam_optics')
SCHEMA_VERSION = '1'


def _hull(*intervals):
    return (min(i[0] for i in intervals), max(i[1] for i in intervals))


def _accumulate(output, mode, amplitude, window):
    if mode not in window:
        raise WindowError('Image {0} escapes {1}'.format(mode, window))
    output[mode] = output.get(mode, 0j) + amplitude


class Element:
    "Common interface of all optical elements."
    TAG: ClassVar[str] = ''
    lossy: ClassVar[bool] = True

    @property
    def paths(self):
        "Paths the element acts on; None means every path."
        raise NotImplementedError

    def act(self, mode, amplitude):
        "Yield (mode, amplitude) images of a single basis component."
        raise NotImplementedError

    def inverse(self):
        raise NotImplementedError

    def relabel(self, path_map):
        raise NotImplementedError

    def propagate_interval(self, intervals):
        return intervals

    def to_dict(self):
        raise NotImplementedError

    def validate(self, n_paths):
        for path in self.paths or ():
            if not 0 <= path < n_paths:
                raise NetlistError('{0} uses path {1} outside 0..{2}'
                                   .format(self.TAG, path, n_paths - 1))

    def apply(self, amplitudes, window):
        output = {}
        touched = self.paths
        for mode, amplitude in amplitudes.items():
            if touched is not None and mode.path not in touched:
                _accumulate(output, mode, amplitude, window)
                continue
            for image, value in self.act(mode, amplitude):
                _accumulate(output, image, value, window)
        return output


class SinglePathElement(Element):

    @property
    def paths(self):
        return (self.path,)

    def relabel(self, path_map):
        return replace(self, path=path_map[self.path])


@dataclass(frozen=True)
class BeamSplitter(Element):
    TAG: ClassVar[str] = 'bs'
    path_a: int
    path_b: int
    theta: float = math.pi / 4
    phi: float = 0.0

    def __post_init__(self):
        if self.path_a == self.path_b:
            raise NetlistError('Beam splitter needs two distinct paths, got {}'.format(self.path_a))

    @property
    def paths(self):
        return (self.path_a, self.path_b)

    def matrix(self):
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, 1j * s * cmath.exp(1j * self.phi)],
                         [1j * s * cmath.exp(-1j * self.phi), c]])

    def act(self, mode, amplitude):
        c, s = math.cos(self.theta), math.sin(self.theta)
        if mode.path == self.path_a:
            yield mode, c * amplitude
            yield mode.moved(path=self.path_b), 1j * s * cmath.exp(-1j * self.phi) * amplitude
        else:
            yield mode.moved(path=self.path_a), 1j * s * cmath.exp(1j * self.phi) * amplitude
            yield mode, c * amplitude

    def inverse(self):
        return replace(self, theta=-self.theta)

    def relabel(self, path_map):
        return replace(self, path_a=path_map[self.path_a], path_b=path_map[self.path_b])

    def propagate_interval(self, intervals):
        merged = _hull(intervals[self.path_a], intervals[self.path_b])
        return {**intervals, self.path_a: merged, self.path_b: merged}

    def to_dict(self):
        return {'type': self.TAG, 'paths': [self.path_a, self.path_b],
                'theta': self.theta, 'phi': self.phi}


@dataclass(frozen=True)
class PhaseShifter(SinglePathElement):
    TAG: ClassVar[str] = 'phase'
    lossy: ClassVar[bool] = False
    path: int
    phi: float

    def act(self, mode, amplitude):
        yield mode, cmath.exp(1j * self.phi) * amplitude

    def inverse(self):
        return replace(self, phi=-self.phi)

    def to_dict(self):
        return {'type': self.TAG, 'path': self.path, 'phi': self.phi}


@dataclass(frozen=True)
class DovePrism(SinglePathElement):
    TAG: ClassVar[str] = 'dove'
    path: int
    alpha: float

    def act(self, mode, amplitude):
        yield mode.moved(oam=-mode.oam), cmath.exp(-2j * mode.oam * self.alpha) * amplitude

    def inverse(self):
        return self

    def propagate_interval(self, intervals):
        low, high = intervals[self.path]
        return {**intervals, self.path: (-high, -low)}

    def to_dict(self):
        return {'type': self.TAG, 'path': self.path, 'alpha': self.alpha}


@dataclass(frozen=True)
class Hologram(SinglePathElement):
    TAG: ClassVar[str] = 'holo'
    path: int
    charge: int

    def act(self, mode, amplitude):
        yield mode.moved(oam=mode.oam + self.charge), amplitude

    def inverse(self):
        return replace(self, charge=-self.charge)

    def propagate_interval(self, intervals):
        low, high = intervals[self.path]
        return {**intervals, self.path: (low + self.charge, high + self.charge)}

    def to_dict(self):
        return {'type': self.TAG, 'path': self.path, 'charge': self.charge}


@dataclass(frozen=True)
class Mirror(SinglePathElement):
    TAG: ClassVar[str] = 'mirror'
    path: int

    def act(self, mode, amplitude):
        yield mode.moved(oam=-mode.oam), amplitude

    def inverse(self):
        return self

    def propagate_interval(self, intervals):
        low, high = intervals[self.path]
        return {**intervals, self.path: (-high, -low)}

    def to_dict(self):
        return {'type': self.TAG, 'path': self.path}


@dataclass(frozen=True)
class PathPermutation(Element):
    "Routes path p to path map[p]; paths beyond len(map) are untouched."
    TAG: ClassVar[str] = 'perm'
    lossy: ClassVar[bool] = False
    map: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'map', tuple(int(p) for p in self.map))
        if sorted(self.map) != list(range(len(self.map))):
            raise NetlistError('Path permutation {} is not a bijection'.format(list(self.map)))

    @property
    def paths(self):
        return tuple(range(len(self.map)))

    @property
    def is_identity(self):
        return all(p == q for p, q in enumerate(self.map))

    def act(self, mode, amplitude):
        yield mode.moved(path=self.map[mode.path]), amplitude

    def inverse(self):
        inverse_map = [0] * len(self.map)
        for source, target in enumerate(self.map):
            inverse_map[target] = source
        return PathPermutation(tuple(inverse_map))

    def then(self, other):
        "Permutation equal to self followed by other."
        size = max(len(self.map), len(other.map))
        first = self.map + tuple(range(len(self.map), size))
        second = other.map + tuple(range(len(other.map), size))
        return PathPermutation(tuple(second[first[p]] for p in range(size)))

    def relabel(self, path_map):
        moved = {path_map[source]: path_map[target] for source, target in enumerate(self.map)}
        size = max(moved) + 1 if moved else 0
        return PathPermutation(tuple(moved.get(p, p) for p in range(size)))

    def propagate_interval(self, intervals):
        output = dict(intervals)
        for source, target in enumerate(self.map):
            output[target] = intervals[source]
        return output

    def to_dict(self):
        return {'type': self.TAG, 'map': list(self.map)}


def swap_forward(n, d, oam, path):
    "Image of |oam>_O|path>_P under the ideal swap with n input and d output paths."
    if not 0 <= path < n:
        raise SwapDomainError('Swap({0},{1}) is not defined on input path {2}'.format(n, d, path))
    if n <= d:
        return (d // n) * (n * (oam // d) + path), oam % d
    ratio = n // d
    if oam % ratio:
        raise SwapDomainError('Swap({0},{1}) needs input OAM multiple of {2}, got {3}'
                              .format(n, d, ratio, oam))
    m = oam // ratio
    return n * (m // d) + path, m % d


def swap_backward(n, d, oam, path):
    "Image under the inverse of the ideal swap."
    if not 0 <= path < d:
        raise SwapDomainError('Inverse swap({0},{1}) is not defined on path {2}'.format(n, d, path))
    if n <= d:
        ratio = d // n
        if oam % ratio:
            raise SwapDomainError('Inverse swap({0},{1}) needs OAM multiple of {2}, got {3}'
                                  .format(n, d, ratio, oam))
        block, source = divmod(oam // ratio, n)
        return block * d + path, source
    block, source = divmod(oam, n)
    return (n // d) * (block * d + path), source


@dataclass(frozen=True)
class IdealSwap(Element):
    "Semantic swap block, evaluated directly from its modulo-form action."
    TAG: ClassVar[str] = 'ideal_swap'
    n_in: int
    d_out: int
    inverse_: bool = False

    def __post_init__(self):
        if not (is_power_of_two(self.n_in) and is_power_of_two(self.d_out)):
            raise NetlistError('Ideal swap dimensions must be powers of two, got n={0}, d={1}'
                               .format(self.n_in, self.d_out))

    @property
    def width(self):
        return max(self.n_in, self.d_out)

    @property
    def paths(self):
        return tuple(range(self.width))

    def act(self, mode, amplitude):
        step = swap_backward if self.inverse_ else swap_forward
        oam, path = step(self.n_in, self.d_out, mode.oam, mode.path)
        yield mode.moved(oam=oam, path=path), amplitude

    def inverse(self):
        return replace(self, inverse_=not self.inverse_)

    def relabel(self, path_map):
        if any(path_map[p] != p for p in self.paths):
            raise NetlistError('An ideal swap cannot be moved to other paths')
        return self

    def propagate_interval(self, intervals):
        n, d = self.n_in, self.d_out
        sources = range(d) if self.inverse_ else range(n)
        low, high = _hull(*(intervals[p] for p in sources))
        if self.inverse_:
            if n <= d:
                ratio = d // n
                corners = [divmod(o // ratio, n)[0] * d + q for o in (low, high) for q in (0, d - 1)]
            else:
                corners = [(n // d) * ((o // n) * d + q) for o in (low, high) for q in (0, d - 1)]
            targets = range(n)
        else:
            if n <= d:
                corners = [(d // n) * (n * (o // d) + p) for o in (low, high) for p in (0, n - 1)]
            else:
                corners = [n * ((o // (n // d)) // d) + p for o in (low, high) for p in (0, n - 1)]
            targets = range(d)
        image = (min(corners + [low]), max(corners + [high]))
        output = dict(intervals)
        for path in self.paths:
            output[path] = image if path in targets else _hull(intervals[path], image)
        return output

    def to_dict(self):
        document = {'type': self.TAG, 'n': self.n_in, 'd': self.d_out}
        if self.inverse_:
            document['inverse'] = True
        return document


def _require_pol(mode, tag):
    if mode.pol is None:
        raise WindowError('{0} needs a window with polarization, got mode {1}'.format(tag, mode))


@dataclass(frozen=True)
class PolSplitter(Element):
    "Transmits H and exchanges V between its two paths."
    TAG: ClassVar[str] = 'pbs'
    path_a: int
    path_b: int

    @property
    def paths(self):
        return (self.path_a, self.path_b)

    def act(self, mode, amplitude):
        _require_pol(mode, self.TAG)
        if mode.pol == 'H':
            yield mode, amplitude
        else:
            other = self.path_b if mode.path == self.path_a else self.path_a
            yield mode.moved(path=other), amplitude

    def inverse(self):
        return self

    def relabel(self, path_map):
        return replace(self, path_a=path_map[self.path_a], path_b=path_map[self.path_b])

    def propagate_interval(self, intervals):
        merged = _hull(intervals[self.path_a], intervals[self.path_b])
        return {**intervals, self.path_a: merged, self.path_b: merged}

    def to_dict(self):
        return {'type': self.TAG, 'paths': [self.path_a, self.path_b]}


@dataclass(frozen=True)
class HalfWavePlate(SinglePathElement):
    "Exchanges H and V on its path."
    TAG: ClassVar[str] = 'hwp'
    path: int

    def act(self, mode, amplitude):
        _require_pol(mode, self.TAG)
        yield mode.moved(pol='V' if mode.pol == 'H' else 'H'), amplitude

    def inverse(self):
        return self

    def to_dict(self):
        return {'type': self.TAG, 'path': self.path}


@dataclass(frozen=True)
class Netlist:
    "Ordered element sequence; the first element acts first."
    name: str
    window_hint: ModeWindow
    elements: tuple = ()
    annotations: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'elements', tuple(self.elements))
        for element in self.elements:
            element.validate(self.window_hint.n_paths)

    def __len__(self):
        return len(self.elements)

    def __add__(self, other):
        return self.concat(other)

    def with_elements(self, elements, **annotations):
        return Netlist(self.name, self.window_hint, tuple(elements),
                       {**self.annotations, **annotations})

    def concat(self, other, name=None):
        window = self.window_hint.hull(other.window_hint)
        return Netlist(name or self.name, window, self.elements + other.elements,
                       dict(self.annotations))

    def inverse(self, name=None):
        return Netlist(name or self.name + '_inv', self.window_hint,
                       tuple(e.inverse() for e in reversed(self.elements)),
                       {**self.annotations, 'inverted': not self.annotations.get('inverted', False)})

    def relabel(self, path_map, n_paths=None):
        "Move every element to the paths given by path_map (a sequence or dict)."
        n_paths = n_paths or self.window_hint.n_paths
        window = replace(self.window_hint, n_paths=n_paths)
        return Netlist(self.name, window, tuple(e.relabel(path_map) for e in self.elements),
                       dict(self.annotations))

    def embed(self, offset, n_paths):
        "Shift every path index by offset inside a window of n_paths paths."
        path_map = {p: p + offset for p in range(self.window_hint.n_paths)}
        return self.relabel(path_map, n_paths)

    def to_dict(self):
        window = self.window_hint.to_dict()
        return {'version': SCHEMA_VERSION, 'name': self.name, 'window': window,
                'annotations': dict(self.annotations),
                'elements': [element.to_dict() for element in self.elements]}


def apply_element(element, psi):
    return StateVector(psi.window, element.apply(psi.amplitudes, psi.window))


def apply_netlist(netlist, psi):
    amplitudes = psi.amplitudes
    for element in netlist.elements:
        amplitudes = element.apply(amplitudes, psi.window)
    return StateVector(psi.window, amplitudes)


def transfer_matrix(netlist, window, inputs=None, out_window=None,
                    leakage_tol=SIMULATION_CONFIG['leakage_tol']):
    """Transfer matrix of the netlist.
    Parameters
    ----------
    netlist : Netlist
    window : ModeWindow
        window whose basis modes are the inputs
    inputs : list of Mode
        (optional) subset of basis modes, one column each; default all modes of window
    out_window : ModeWindow
        (optional) window whose modes label the rows; default window
    Returns
    -------
    matrix : np.ndarray
        out_window.size x len(inputs) complex matrix
    """
    inputs = window.modes if inputs is None else tuple(inputs)
    out_window = window if out_window is None else out_window
    simulation = required_window(netlist, window).hull(out_window)
    matrix = np.zeros((out_window.size, len(inputs)), dtype=complex)
    for column, mode in enumerate(inputs):
        if mode not in window:
            raise WindowError('Input {0} is outside {1}'.format(mode, window))
        output = apply_netlist(netlist, basis_state(simulation, mode))
        vector = output.to_dense(out_window)
        norm = np.linalg.norm(vector)
        if norm < 1 - leakage_tol:
            raise LeakageError(mode, norm)
        matrix[:, column] = vector
    LOGGER.debug('Transfer matrix of %s: %s columns on %s', netlist.name, len(inputs), out_window)
    return as_cmatrix(matrix)


def block_transfer(netlist, modes, leakage_tol=SIMULATION_CONFIG['leakage_tol']):
    "Transfer matrix restricted to the span of the given basis modes (rows and columns)."
    modes = tuple(modes)
    window = ModeWindow(min(m.oam for m in modes), max(m.oam for m in modes),
                        max(m.path for m in modes) + 1, any(m.pol is not None for m in modes))
    matrix = transfer_matrix(netlist, window, inputs=modes, leakage_tol=leakage_tol)
    rows = [window.index(mode) for mode in modes]
    return as_cmatrix(matrix[rows, :])


def serialize(netlist):
    return canonical_json(netlist.to_dict())


def _require(document, key, kind, path):
    if not isinstance(document, dict):
        raise SchemaError(path, 'expected an object')
    if key not in document:
        raise SchemaError('{0}.{1}'.format(path, key), 'missing field')
    value = document[key]
    if kind is float:
        valid = isinstance(value, (int, float)) and not isinstance(value, bool)
        value = float(value) if valid else value
    elif kind is int:
        valid = isinstance(value, int) and not isinstance(value, bool)
    else:
        valid = isinstance(value, kind)
    if not valid:
        raise SchemaError('{0}.{1}'.format(path, key), 'expected {0}, got {1!r}'
                          .format(kind.__name__, value))
    return value


def _path_pair(document, path):
    pair = _require(document, 'paths', list, path)
    if len(pair) != 2 or not all(isinstance(p, int) and not isinstance(p, bool) for p in pair):
        raise SchemaError(path + '.paths', 'expected two integer paths, got {!r}'.format(pair))
    return pair


def element_from_dict(document, path='element'):
    tag = _require(document, 'type', str, path)
    try:
        if tag == BeamSplitter.TAG:
            a, b = _path_pair(document, path)
            return BeamSplitter(a, b, _require(document, 'theta', float, path),
                                _require(document, 'phi', float, path))
        if tag == PhaseShifter.TAG:
            return PhaseShifter(_require(document, 'path', int, path),
                                _require(document, 'phi', float, path))
        if tag == DovePrism.TAG:
            return DovePrism(_require(document, 'path', int, path),
                             _require(document, 'alpha', float, path))
        if tag == Hologram.TAG:
            return Hologram(_require(document, 'path', int, path),
                            _require(document, 'charge', int, path))
        if tag == Mirror.TAG:
            return Mirror(_require(document, 'path', int, path))
        if tag == PathPermutation.TAG:
            mapping = _require(document, 'map', list, path)
            if not all(isinstance(p, int) and not isinstance(p, bool) for p in mapping):
                raise SchemaError(path + '.map', 'expected integer paths, got {!r}'.format(mapping))
            return PathPermutation(tuple(mapping))
        if tag == IdealSwap.TAG:
            inverse = document.get('inverse', False)
            if not isinstance(inverse, bool):
                raise SchemaError(path + '.inverse', 'expected bool')
            return IdealSwap(_require(document, 'n', int, path),
                             _require(document, 'd', int, path), inverse)
        if tag == PolSplitter.TAG:
            a, b = _path_pair(document, path)
            return PolSplitter(a, b)
        if tag == HalfWavePlate.TAG:
            return HalfWavePlate(_require(document, 'path', int, path))
    except NetlistError as error:
        raise SchemaError(path, str(error)) from error
    raise SchemaError(path + '.type', 'unknown element tag {!r}'.format(tag))


def deserialize(data):
    try:
        document = json.loads(data)
    except (ValueError, UnicodeDecodeError) as error:
        raise SchemaError('$', 'not a JSON document ({})'.format(error)) from error
    version = _require(document, 'version', str, '$')
    if version != SCHEMA_VERSION:
        raise SchemaError('$.version', 'unsupported version {!r}'.format(version))
    name = _require(document, 'name', str, '$')
    window_doc = _require(document, 'window', dict, '$')
    try:
        window = ModeWindow(_require(window_doc, 'oam_lo', int, '$.window'),
                            _require(window_doc, 'oam_hi', int, '$.window'),
                            _require(window_doc, 'n_paths', int, '$.window'),
                            _require(window_doc, 'pol', bool, '$.window'))
    except WindowError as error:
        raise SchemaError('$.window', str(error)) from error
    annotations = _require(document, 'annotations', dict, '$')
    elements = [element_from_dict(e, '$.elements[{}]'.format(i))
                for i, e in enumerate(_require(document, 'elements', list, '$'))]
    try:
        return Netlist(name, window, tuple(elements), annotations)
    except NetlistError as error:
        raise SchemaError('$.elements', str(error)) from error
