"Simple script to synthesize a gate, verify it and print its element counts"
import argparse
import logging
from oam_optics.analysis import check_periodicity, count_netlist
from oam_optics.cli import add_gate_arguments, gate_spec
from oam_optics.elements import block_transfer, serialize
from oam_optics.numerics import phase_aligned_distance
from oam_optics.synth import synthesize, target_matrix
from oam_optics.utils import create_log


if __name__ == "__main__":

    PARSER = argparse.ArgumentParser()

    add_gate_arguments(PARSER, positional=True)
    PARSER.add_argument('--out', '-o', type=str, default=None,
                        help=('Path of the netlist JSON file. If not provided, the netlist '
                              'is not saved.'))
    PARSER.add_argument('--subspaces', type=int, nargs=2, default=[-2, 2],
                        help=('First and last OAM subspace used to check the periodicity '
                              'of the synthesized gate. Default is -2 2.'))
    PARSER.add_argument('--log-dir', type=str, default=None,
                        help=('Directory where to store the log file. If not provided, '
                              'messages are only reported on the console.'))

    ARGS = PARSER.parse_args()

    LOGGER = create_log(ARGS.log_dir, logging.INFO)

    SPEC = gate_spec(ARGS)
    NETLIST = synthesize(SPEC)
    if ARGS.out is not None:
        with open(ARGS.out, 'wb') as f:
            f.write(serialize(NETLIST))
        LOGGER.info('Netlist saved to %s', ARGS.out)

    TARGET = target_matrix(SPEC)
    DISTANCE = phase_aligned_distance(block_transfer(NETLIST, TARGET.modes), TARGET.matrix)
    LOGGER.info('Distance to the target gate: %.3e', DISTANCE)
    REPORT = check_periodicity(NETLIST, TARGET.d, ARGS.subspaces[0], ARGS.subspaces[1],
                               TARGET.paths, TARGET.oam_step)
    for A, VALUE in sorted(REPORT.distances.items()):
        LOGGER.info('Subspace %s: distance %.3e', A, VALUE)
    LOGGER.info('Element counts: %s', count_netlist(NETLIST).to_dict())
