#!/usr/bin/env python3
"""
W-Algebra Levels - Command Line Interface
Classifies levels, runs the verification suites and dumps structure constants.
"""
import re
import sys
import logging
import argparse

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _config(args):
    """Build the validated run configuration from parsed arguments."""
    from wlevels.settings import RunConfig

    values = {
        'command': args.command,
        'specs': list(getattr(args, 'specs', None) or []),
        'output_format': args.format,
        'out': args.out,
        'verbosity': args.verbose,
        'regenerate_goldens': args.regenerate_goldens,
    }
    if args.jobs is not None:
        values['jobs'] = args.jobs
    if args.seed is not None:
        values['seed'] = args.seed
    if args.golden_dir:
        values['golden_dir'] = args.golden_dir
    config = RunConfig(**values)
    if config.log_level is not None:
        logging.getLogger().setLevel(config.log_level)
    return config


def _emit(report, config):
    """Print a report, or write it to --out."""
    from wlevels.exporter import write_report

    text = write_report(report, config.output_format, str(config.out) if config.out else None)
    if config.out:
        print(f"✓ Report written to {config.out}")
    else:
        print(text)


def cmd_classify(args):
    """Classify the levels of one or more algebras."""
    from wlevels.catalog import parse_algebra
    from wlevels.exporter import Report
    from wlevels.suites import classification_record

    config = _config(args)
    rows = [classification_record(parse_algebra(spec)) for spec in config.specs]
    _emit(Report(title='classify', rows=rows, summary={'algebras': len(rows)}), config)
    return EXIT_OK


def cmd_catalog(args):
    """List every catalog entry of the sweep."""
    from wlevels.catalog import get_catalog
    from wlevels.exporter import Report
    from wlevels.levels import classify

    config = _config(args)
    rows = []
    for alg in get_catalog().sweep():
        forms = get_catalog().closed_forms(alg)
        cls = classify(alg)
        rows.append({
            'algebra': str(alg),
            'h_vee': forms.h_vee,
            'sdim': forms.sdim,
            'p_of_k': str(forms.p_of_k),
            'g_natural': ' + '.join(c.label for c in cls.components) or '0',
            'collapsing': cls.collapsing,
            'conformal_noncollapsing': cls.conformal_noncollapsing,
        })
    _emit(Report(title='catalog', rows=rows, summary={'entries': len(rows)}), config)
    return EXIT_OK


def cmd_verify(args):
    """Run a verification suite."""
    from wlevels.suites import run_suite

    config = _config(args)
    result = run_suite(args.suite, config)
    _emit(result.report, config)

    golden = result.golden
    if golden and golden.diff:
        print(golden.diff, file=sys.stderr)
    summary = result.report.summary
    mark = "✓" if result.passed else "✗"
    print(f"{mark} {args.suite}: {summary['passed']}/{summary['checked']} passed "
          f"(golden: {golden.status.value if golden else 'n/a'})", file=sys.stderr)
    for failure in result.failures:
        print(f"  • {failure}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_chain(args):
    """Follow the collapse chain from a collapsing level."""
    from wlevels.catalog import parse_algebra
    from wlevels.exactmath import format_scalar, parse_scalar
    from wlevels.levels import collapse_chain

    _config(args)
    chain = collapse_chain(parse_algebra(args.spec), parse_scalar(args.level))
    for i, step in enumerate(chain.steps):
        prefix = '  ' if i == 0 else '  → '
        print(f"{prefix}W_k({step.algebra}) at k = {format_scalar(step.level)}")
    line = f"Endpoint: {chain.endpoint}"
    if chain.central_charge is not None:
        line += f" (c = {format_scalar(chain.central_charge)})"
    if chain.detail:
        line += f" [{chain.detail}]"
    print(line)
    return EXIT_OK


def cmd_realize(args):
    """Check the free-field realization for a given n."""
    from wlevels.suites import suite_report

    config = _config(args)
    report = suite_report(f"realize-{args.n}", config)
    _emit(report, config)
    return EXIT_OK if report.summary['failed'] == 0 else EXIT_FAILED


def cmd_dump(args):
    """Dump the nonzero structure constants of a realized algebra."""
    from wlevels.catalog import parse_algebra
    from wlevels.matrixalg import dump_structure_constants, realize

    config = _config(args)
    lines = dump_structure_constants(realize(parse_algebra(args.spec)))
    text = '\n'.join(lines) + '\n'
    if config.out:
        with open(config.out, 'w', encoding='utf-8') as f:
            f.write(text)
        print(f"✓ {len(lines)} structure constants written to {config.out}")
    else:
        print(text, end='')
    return EXIT_OK


def _run(args):
    """Run a command and map errors to exit codes."""
    from pydantic import ValidationError
    from wlevels.errors import VerificationFailure, WLevelsError

    try:
        return args.func(args)
    except VerificationFailure as e:
        print(f"✗ Verification failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (WLevelsError, ValidationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    """Main CLI entry point."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', default='yaml', choices=['yaml', 'csv', 'markdown', 'html'],
                        help='Report format')
    common.add_argument('--out', help='Write the report to this file')
    common.add_argument('--jobs', type=int, help='Worker threads (default $WLEVELS_JOBS or 1)')
    common.add_argument('--seed', type=int, help='Seed for sampled Jacobi checks')
    common.add_argument('--golden-dir', help='Golden report directory (default $WLEVELS_GOLDEN_DIR)')
    common.add_argument('--regenerate-goldens', action='store_true', help='Rewrite golden reports')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')

    parser = argparse.ArgumentParser(
        description='Minimal W-algebra level classification',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # classify command
    classify_parser = subparsers.add_parser('classify', parents=[common], help='Classify levels')
    classify_parser.add_argument('specs', nargs='+', metavar='SPEC', help='Algebra, e.g. "sl(4|1)"')
    classify_parser.set_defaults(func=cmd_classify)

    # catalog command
    catalog_parser = subparsers.add_parser('catalog', parents=[common], help='List catalog entries')
    catalog_parser.set_defaults(func=cmd_catalog)

    # verify command
    verify_parser = subparsers.add_parser('verify', parents=[common], help='Run a verification suite')
    verify_parser.add_argument('suite', help='table4, tables123, lemma31, prop34, props45to47, '
                                             'cor48, properties, classification or realize-N')
    verify_parser.set_defaults(func=cmd_verify)

    # chain command
    chain_parser = subparsers.add_parser('chain', parents=[common], help='Follow a collapse chain')
    chain_parser.add_argument('spec', metavar='SPEC', help='Algebra')
    chain_parser.add_argument('level', metavar='K', help='Collapsing level, e.g. -3/2')
    chain_parser.set_defaults(func=cmd_chain)

    # realize command
    realize_parser = subparsers.add_parser('realize', parents=[common], help='Check the free-field realization')
    realize_parser.add_argument('n', type=int, help='n >= 4, n != 5')
    realize_parser.set_defaults(func=cmd_realize)

    # dump command
    dump_parser = subparsers.add_parser('dump', parents=[common], help='Dump structure constants')
    dump_parser.add_argument('spec', metavar='SPEC', help='Algebra')
    dump_parser.set_defaults(func=cmd_dump)

    # argparse reads "-3/2" as an option; a unicode minus keeps it positional
    argv = sys.argv[1:] if argv is None else list(argv)
    argv = ['\u2212' + a[1:] if re.fullmatch(r'-\d+/\d+', a) else a for a in argv]
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    return _run(args)


if __name__ == '__main__':
    sys.exit(main())
