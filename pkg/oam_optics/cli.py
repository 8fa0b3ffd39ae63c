"Command-line front end: synthesize, simulate, verify, count and tabulate"
import argparse
import logging
import sys
import numpy as np
from scipy.stats import unitary_group
from oam_optics.analysis import (check_periodicity, count_netlist, format_table, loss_table,
                                 ratio_table, table_records, xk_table)
from oam_optics.configuration import LOSS_CONFIG, VERIFY_CONFIG, XK_TABLE_CONFIG
from oam_optics.elements import apply_netlist, block_transfer, deserialize, serialize
from oam_optics.exceptions import OAMOpticsError, RegimeError, VerificationError
from oam_optics.modes import Mode, ModeWindow, basis_state, required_window
from oam_optics.numerics import dft, pauli_x, pauli_z, phase_aligned_distance
from oam_optics.synth import GateSpec, synthesize, target_matrix
from oam_optics.utils import canonical_json, create_log


LOGGER = logging.getLogger('oam_optics')
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GATES = {'universal': 'universal', 'xk': 'pauli_x_power', 'z': 'pauli_z_power',
         'cu': 'controlled_u', 'cu-spaced': 'controlled_u_spaced', 'cz': 'cz',
         'path-controlled': 'path_controlled', 'parallel': 'parallelized'}
UNITARIES = ('identity', 'x', 'z', 'dft', 'haar')
# gates whose unitary acts on the path register
PATH_UNITARY_GATES = ('controlled_u', 'controlled_u_spaced')


def named_unitary(name, size, seed=None, power=1):
    if name == 'identity':
        return np.eye(size, dtype=complex)
    if name == 'x':
        return pauli_x(size, power)
    if name == 'z':
        return pauli_z(size, power)
    if name == 'dft':
        return dft(size)
    if name == 'haar':
        return unitary_group.rvs(size, random_state=seed)
    raise RegimeError('Unknown unitary {!r}'.format(name))


def gate_spec(args, annotations=None):
    """GateSpec described by the gate flags of a parsed command line. Missing
    --dim and --paths are taken from the annotations of a netlist if given."""
    kind = GATES[args.gate]
    annotations = annotations or {}
    d = args.dim if args.dim is not None else annotations.get('d')
    n = args.paths if args.paths is not None else annotations.get('n', 1)
    if d is None:
        raise RegimeError('Gate {} needs --dim'.format(args.gate))
    u = None
    if kind not in ('pauli_x_power', 'pauli_z_power', 'cz'):
        size = n if kind in PATH_UNITARY_GATES else d
        if args.unitary_file:
            u = np.load(args.unitary_file)
        else:
            u = named_unitary(args.unitary, size, args.seed)
    return GateSpec(kind=kind, d=d, n=n, k=args.power, m=args.spacing, u=u,
                    swap_mode=args.swap)


def add_gate_arguments(parser, positional):
    if positional:
        parser.add_argument('gate', choices=sorted(GATES), help='Gate to synthesize.')
    else:
        parser.add_argument('--target', dest='gate', choices=sorted(GATES), required=True,
                            help='Gate the netlist is compared with.')
    parser.add_argument('--dim', '--oam-dim', dest='dim', type=int, default=None,
                        help='OAM dimension d (number of control values for cu/cz).')
    parser.add_argument('--power', '-k', type=int, default=1,
                        help='Power k of the X or Z gate. Default is 1.')
    parser.add_argument('--paths', '-n', type=int, default=None,
                        help='Number of paths n. Default is 1, or the annotated value for verify.')
    parser.add_argument('--spacing', '-m', type=int, default=1,
                        help='OAM spacing m of the control values (cu-spaced). Default is 1.')
    parser.add_argument('--unitary', '-u', choices=UNITARIES, default='x',
                        help='Named unitary used by universal, cu and parallel gates. '
                        'Default is "x".')
    parser.add_argument('--unitary-file', type=str, default=None,
                        help='.npy file holding the unitary; overrides --unitary.')
    parser.add_argument('--seed', type=int, default=0,
                        help='Seed of the Haar-random unitary. Default is 0.')
    parser.add_argument('--swap', choices=['ideal', 'expanded'], default='ideal',
                        help='Swap realization of the parallelized gates. Default is "ideal".')


def parse_subspaces(text):
    try:
        low, high = (int(x) for x in text.split(':'))
    except ValueError:
        raise argparse.ArgumentTypeError('Expected LOW:HIGH, got {!r}'.format(text)) from None
    return low, high


def build_parser():
    parser = argparse.ArgumentParser(prog='oam-optics',
                                     description='Compiler and simulator of OAM/path photonic gates.')
    parser.add_argument('--log-dir', type=str, default=None,
                        help='Directory where a timestamped log file will be written.')
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Report debug messages on the console.')
    commands = parser.add_subparsers(dest='command', required=True)

    synth = commands.add_parser('synth', help='Synthesize a gate into a netlist.')
    add_gate_arguments(synth, positional=True)
    synth.add_argument('--out', '-o', type=str, default=None,
                       help='Netlist JSON file. If not provided, the netlist is printed.')

    sim = commands.add_parser('sim', help='Propagate one basis mode through a netlist.')
    sim.add_argument('netlist', type=str)
    sim.add_argument('--oam', type=int, required=True)
    sim.add_argument('--path', type=int, default=0)
    sim.add_argument('--pol', choices=['H', 'V'], default=None)
    sim.add_argument('--threshold', type=float, default=1e-12,
                     help='Amplitudes below this magnitude are not printed.')

    verify = commands.add_parser('verify', help='Compare a netlist with a target gate.')
    verify.add_argument('netlist', type=str)
    add_gate_arguments(verify, positional=False)
    verify.add_argument('--tol', type=float, default=VERIFY_CONFIG['tol'],
                        help='Distance tolerance. Default is {}.'.format(VERIFY_CONFIG['tol']))
    verify.add_argument('--subspaces', type=parse_subspaces, default=None,
                        help='OAM subspaces LOW:HIGH checked for periodicity.')

    count = commands.add_parser('count', help='Element counts of a netlist.')
    count.add_argument('netlist', type=str)

    formulas = commands.add_parser('formulas', help='Closed-form resource tables.')
    formulas.add_argument('--fig6', '--xk-table', dest='xk_table', action='store_true',
                          help='Naive and parallelized X^k counts, n={0}, d in {1}.'
                          .format(XK_TABLE_CONFIG['n'], XK_TABLE_CONFIG['dims']))
    formulas.add_argument('--ratios', choices=['reck', 'perm', 'x', 'xk', 'xk_half'],
                          default=None, help='Parallelized over naive ratio table.')
    formulas.add_argument('--grid-paths', type=int, nargs='+', default=[2, 4, 8, 16, 32])
    formulas.add_argument('--grid-dims', type=int, nargs='+', default=[2, 4, 8, 16, 32])
    formulas.add_argument('--power', '-k', type=int, default=None)
    formulas.add_argument('--loss', action='store_true', help='Loss exponents and penalty.')
    formulas.add_argument('--T', type=float, default=LOSS_CONFIG['T'],
                          help='Transmittance per element. Default is {}.'.format(LOSS_CONFIG['T']))
    formulas.add_argument('--dim', type=int, nargs='+', default=[LOSS_CONFIG['dim']])
    formulas.add_argument('--json', action='store_true', help='Canonical JSON instead of text.')

    periodicity = commands.add_parser('periodicity', help='OAM subspace periodicity report.')
    periodicity.add_argument('netlist', type=str)
    periodicity.add_argument('--dim', type=int, required=True)
    periodicity.add_argument('--subspaces', type=parse_subspaces,
                             default=VERIFY_CONFIG['subspaces'])
    periodicity.add_argument('--paths', '-n', type=int, default=1)
    periodicity.add_argument('--oam-step', type=int, default=1)
    return parser


def _load(path):
    with open(path, 'rb') as f:
        return deserialize(f.read())


def _emit(document, stream=None):
    (stream or sys.stdout).write(canonical_json(document).decode('utf-8'))


def run_synth(args):
    netlist = synthesize(gate_spec(args))
    data = serialize(netlist)
    if args.out:
        with open(args.out, 'wb') as f:
            f.write(data)
        LOGGER.info('Netlist written to %s', args.out)
        _emit(count_netlist(netlist).to_dict())
    else:
        sys.stdout.write(data.decode('utf-8'))
    return EXIT_PASS


def run_sim(args):
    netlist = _load(args.netlist)
    mode = Mode(args.oam, args.path, args.pol)
    window = ModeWindow(args.oam, args.oam, max(args.path + 1, netlist.window_hint.n_paths),
                        args.pol is not None)
    simulation = required_window(netlist, window)
    output = apply_netlist(netlist, basis_state(simulation, mode))
    amplitudes = [{'oam': m.oam, 'path': m.path, 'pol': m.pol,
                   're': float(a.real), 'im': float(a.imag)}
                  for m, a in sorted(output.amplitudes.items()) if abs(a) > args.threshold]
    _emit({'input': str(mode), 'norm': output.norm(), 'output': amplitudes})
    return EXIT_PASS


def run_verify(args):
    netlist = _load(args.netlist)
    if args.dim is None and 'd' not in netlist.annotations:
        raise VerificationError('Cannot infer the OAM dimension of {}: pass --dim'
                                .format(args.netlist))
    target = target_matrix(gate_spec(args, netlist.annotations))
    distance = phase_aligned_distance(block_transfer(netlist, target.modes), target.matrix)
    subspace_distances = {}
    if args.subspaces is not None:
        report = check_periodicity(netlist, target.d, args.subspaces[0], args.subspaces[1],
                                   target.paths, target.oam_step)
        subspace_distances = report.to_dict()['distances']
    passed = distance <= args.tol and all(v <= args.tol for v in subspace_distances.values())
    LOGGER.info('Verification of %s against %s: distance %.3e (%s)', args.netlist, args.gate,
                distance, 'pass' if passed else 'fail')
    _emit({'target': args.gate, 'distance': distance, 'tol': args.tol, 'pass': passed,
           'subspace_distances': subspace_distances,
           'counts': count_netlist(netlist).to_dict()})
    return EXIT_PASS if passed else EXIT_FAIL


def run_count(args):
    _emit(count_netlist(_load(args.netlist)).to_dict())
    return EXIT_PASS


def run_formulas(args):
    tables = {}
    if args.xk_table:
        tables['xk_counts'] = xk_table()
    if args.ratios:
        tables['ratios_' + args.ratios] = ratio_table(args.ratios, args.grid_paths,
                                                      args.grid_dims, args.power)
    if args.loss:
        tables['loss'] = loss_table(args.T, args.dim)
    if not tables:
        raise RegimeError('Nothing to tabulate: choose --fig6, --ratios or --loss')
    if args.json:
        _emit({name: table_records(frame) for name, frame in tables.items()})
    else:
        for name, frame in tables.items():
            sys.stdout.write('# {}\n{}\n'.format(name, format_table(frame)))
    return EXIT_PASS


def run_periodicity(args):
    report = check_periodicity(_load(args.netlist), args.dim, args.subspaces[0],
                               args.subspaces[1], args.paths, args.oam_step)
    _emit(report.to_dict())
    return EXIT_PASS


COMMANDS = {'synth': run_synth, 'sim': run_sim, 'verify': run_verify, 'count': run_count,
            'formulas': run_formulas, 'periodicity': run_periodicity}


def main(argv=None):
    args = build_parser().parse_args(argv)
    create_log(args.log_dir, logging.DEBUG if args.verbose else logging.WARNING)
    LOGGER.info('Running %s with %s', args.command, vars(args))
    try:
        return COMMANDS[args.command](args)
    except (OAMOpticsError, OSError, ValueError) as error:
        LOGGER.error('%s: %s', type(error).__name__, error)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
