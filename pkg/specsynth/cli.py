"""
Command-line driver.

    specsynth infer --file set.c --modifier insert --out contract.json
    specsynth se --file set.c --modifier insert --dot tree.dot
    specsynth check --file set.c --modifier insert [--contract c.json]
    specsynth export-smt --file set.c --modifier insert --smt2-dir out/

Exit status is 0 on success, 1 on diagnostics, bad input or a failed
check, and 2 when symbolic execution hits its safety net.
"""

import argparse
import json
import logging
import os
import sys

from specsynth import __version__, inference, lang, render, settings
from specsynth.concrete import describe
from specsynth.constraints import emit_smtlib
from specsynth.errors import CallError, DiagnosticError, SafetyNetError
from specsynth.state import render_config
from specsynth.symbolic import CallPattern, explore

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ABORT = 2

_LEVELS = [logging.WARNING, logging.INFO, logging.DEBUG]


class UsageError(Exception):
    pass


def _common(parser):
    parser.add_argument('--file', required=True,
            help='C source file to analyse')
    parser.add_argument('--modifier', default='all',
            help='function to infer a contract for, or all')
    parser.add_argument('--seed', type=int, default=None,
            help='seed for test generation (SPECSYNTH_SEED overrides)')
    parser.add_argument('-v', '--verbose', action='count', default=0,
            help='more logging, repeat for debug output')


def _tuning(parser):
    parser.add_argument('--test-budget', dest='test_budget', type=int,
            default=None, help='random tests per candidate axiom')
    parser.add_argument('--value-domain', dest='value_domain', type=int,
            nargs=2, metavar=('LO', 'HI'), default=None,
            help='range of generated int values')
    parser.add_argument('--max-list-len', dest='max_list_len', type=int,
            default=None, help='longest generated chain')
    parser.add_argument('--max-unroll', dest='max_unroll', type=int,
            default=None, help='safety net for folded exploration')


def build_parser():
    parser = argparse.ArgumentParser(prog='specsynth',
            description='Infer contracts of heap-manipulating C functions.')
    parser.add_argument('--version', action='version',
            version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', required=True)

    infer = commands.add_parser('infer', help='infer contracts')
    _common(infer)
    _tuning(infer)
    infer.add_argument('--out', default='-',
            help='contract JSON destination (default stdout)')
    infer.add_argument('--text', default=None,
            help='also write the text report here (- for stdout)')
    infer.add_argument('--dot', default=None,
            help='also write the exploration tree as DOT')
    infer.add_argument('--smt2-dir', dest='smt2_dir', default=None,
            help='also export leaf path conditions to this directory')
    infer.add_argument('--timestamp', action='store_true',
            help='record the wall-clock time in the provenance')

    se = commands.add_parser('se', help='explore and print the leaves')
    _common(se)
    se.add_argument('--unroll', type=int, default=None,
            help='plain bounded exploration with this many unrollings '
            'instead of folding')
    se.add_argument('--max-unroll', dest='max_unroll', type=int,
            default=None, help='safety net for folded exploration')
    se.add_argument('--dot', default=None,
            help='write the exploration tree as DOT')

    check = commands.add_parser('check',
            help='check contracts by exhaustive bounded testing')
    _common(check)
    _tuning(check)
    check.add_argument('--contract', default=None,
            help='contract JSON to check (default: infer afresh)')

    export = commands.add_parser('export-smt',
            help='write leaf path conditions as SMT-LIB 2')
    _common(export)
    export.add_argument('--max-unroll', dest='max_unroll', type=int,
            default=None, help='safety net for folded exploration')
    export.add_argument('--smt2-dir', dest='smt2_dir', required=True,
            help='destination directory')
    return parser


def _modifiers(program, name):
    if name == 'all':
        return list(program.function_names)
    if not program.has_function(name):
        message = 'unknown modifier %s'
        raise UsageError(message % name)
    return [name]


def _write(path, text):
    if path == '-':
        sys.stdout.write(text)
        return
    try:
        with open(path, 'w', encoding='utf-8') as out:
            out.write(text)
    except OSError as error:
        message = 'cannot write %s: %s'
        raise UsageError(message % (path, error.strerror or error))


def _suffixed(path, modifier, several):
    if not several:
        return path
    stem, extension = os.path.splitext(path)
    return '%s-%s%s' % (stem, modifier, extension)


def _tree(program, modifier, options, unroll=None):
    call = CallPattern.fresh(program, modifier)
    if unroll is not None:
        return explore(program, call, max_unroll=unroll)
    return explore(program, call, abstract=True,
            safety_net=options.max_unroll)


def export_smt(program, modifier, tree, directory):
    """
    One .smt2 file per leaf of tree, named <modifier>-leaf<n>.smt2.
    """
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as error:
        message = 'cannot create %s: %s'
        raise UsageError(message % (directory, error.strerror or error))
    paths = []
    for index, leaf in enumerate(tree.leaves):
        comment = '%s leaf %d (%s%s)' % (modifier, index, leaf.status,
                ', aSubFlag' if leaf.asub else '')
        path = os.path.join(directory, '%s-leaf%d.smt2' % (modifier, index))
        _write(path, emit_smtlib(leaf.path, comment))
        paths.append(path)
    return paths


def run_infer(program, args, options):
    modifiers = _modifiers(program, args.modifier)
    several = len(modifiers) > 1
    contracts = []
    for modifier in modifiers:
        contracts.append(inference.infer(program, modifier, options))
        if args.dot or args.smt2_dir:
            tree = _tree(program, modifier, options)
            if args.dot:
                _write(_suffixed(args.dot, modifier, several),
                        render.tree_dot(tree))
            if args.smt2_dir:
                export_smt(program, modifier, tree, args.smt2_dir)
    document = render.document(contracts, options, args.timestamp)
    _write(args.out, render.dumps(document))
    if args.text:
        _write(args.text, ''.join(render.render_text(c) for c in contracts))
    return EXIT_OK


def run_se(program, args, options):
    modifiers = _modifiers(program, args.modifier)
    several = len(modifiers) > 1
    for modifier in modifiers:
        tree = _tree(program, modifier, options, args.unroll)
        print('%s: %d leaves, %d folds' % (modifier, len(tree.leaf_ids),
                len(tree.folds)))
        for index, leaf in enumerate(tree.leaves):
            print('-- leaf %d' % index)
            print(render_config(leaf))
        if args.dot:
            _write(_suffixed(args.dot, modifier, several),
                    render.tree_dot(tree))
    return EXIT_OK


def run_check(program, args, options):
    if args.contract:
        try:
            with open(args.contract, encoding='utf-8') as source:
                contracts = render.load_contracts(program, json.load(source))
        except (OSError, ValueError, KeyError) as error:
            message = 'cannot read contract %s: %s'
            raise UsageError(message % (args.contract, error))
        if args.modifier != 'all':
            contracts = [c for c in contracts if c.function == args.modifier]
    else:
        contracts = [inference.infer(program, m, options)
                for m in _modifiers(program, args.modifier)]
    status = EXIT_OK
    for contract in contracts:
        report = inference.check_contract(program, contract, options)
        print('%s: %d inputs, %d violations' % (contract.function,
                report.inputs, len(report.violations)))
        for axiom, description in report.violations:
            print('  %s fails on %s' % (axiom, describe(description)))
            status = EXIT_FAILURE
    return status


def run_export(program, args, options):
    for modifier in _modifiers(program, args.modifier):
        tree = _tree(program, modifier, options)
        for path in export_smt(program, modifier, tree, args.smt2_dir):
            print(path)
    return EXIT_OK


_COMMANDS = {
    'infer': run_infer,
    'se': run_se,
    'check': run_check,
    'export-smt': run_export,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = _LEVELS[min(args.verbose, len(_LEVELS) - 1)]
    logging.basicConfig(level=level,
            format='%(levelname)s %(name)s: %(message)s')
    try:
        args.seed = settings.seed_from_environment(args.seed)
        options = settings.InferenceOptions(args)
        program = lang.load_program(args.file)
        return _COMMANDS[args.command](program, args, options)
    except DiagnosticError as error:
        for diagnostic in error.diagnostics:
            sys.stderr.write('%s:%s\n' % (args.file, diagnostic))
        return EXIT_FAILURE
    except SafetyNetError as error:
        sys.stderr.write('aborted: %s\n' % error)
        return EXIT_ABORT
    except (UsageError, CallError, ValueError) as error:
        sys.stderr.write('error: %s\n' % error)
        return EXIT_FAILURE
    except OSError as error:
        sys.stderr.write('error: %s: %s\n' % (error.filename or args.file,
                error.strerror or error))
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
