"Compiler and exact simulator for single-photon OAM/path optical setups"
from oam_optics.elements import Netlist, deserialize, serialize, transfer_matrix
from oam_optics.synth import GateSpec, simplify, synthesize, target_matrix

__version__ = '1.0'
