"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Command line entry point.
"""

import argparse
import json
import logging
import os
import sys
from collections import OrderedDict

import wlrewrite as wr
from wlrewrite.errors import WlrewriteError, UnknownPredicateError


def _load_program(fname, derived=False):
    if wr.io.infer_format(fname) == wr.io.Format.RLOR:
        return wr.rlor.compile(wr.io.load_ontology(fname))
    return wr.io.load_program(fname, derived=derived)


def _predicates(p, names):
    """Predicates of p named in a comma separated list."""
    by_name = dict((q.name, q) for q in p.predicates())
    out = set()
    for n in [n.strip() for n in names.split(',') if n.strip()]:
        if n not in by_name:
            raise UnknownPredicateError('Predicate {} does not occur in the program'.format(n))
        out.add(by_name[n])
    return out


def _emit(args, text):
    if getattr(args, 'output', None):
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _names(preds):
    return '{' + ','.join(sorted(q.name for q in preds)) + '}'


def cmd_validate(args):
    fmt = wr.io.infer_format(args.file)
    if fmt == wr.io.Format.FACTS:
        d = wr.io.load_dataset(args.file)
        print('ok: {} facts'.format(len(d)))
    else:
        p = _load_program(args.file, derived=args.derived)
        print('ok: {} rules'.format(len(p.user_rules)))


def cmd_classify(args):
    p = _load_program(args.file, derived=args.derived)
    c = wr.analysis.classify_predicates(p)
    wl = wr.analysis.is_wl(p, c)
    linear = wr.analysis.is_linear(p)
    user = lambda qs: set(q for q in qs if not q.is_builtin)
    if args.dot:
        _emit(args, wr.analysis.export_dot(wr.analysis.dependency_graph(p), c))
    elif args.json:
        _emit(args, json.dumps(OrderedDict([
            ('wl', bool(wl)),
            ('linear', bool(linear)),
            ('datalog', p.is_datalog()),
            ('category', wr.analysis.program_category(p, c)),
            ('offenders', [rid for rid, _ in wl.offenders]),
            ('predicates', c.to_dict()),
        ]), indent=2) + '\n')
    else:
        lines = ['WL: {}; linear: {}; disjunctive: {}; datalog: {}'.format(
            'yes' if wl else 'no', 'yes' if linear else 'no',
            _names(user(c.disjunctive)), _names(user(c.datalog)))]
        for rid, atoms in wl.offenders:
            lines.append('not WL: rule {} has disjunctive body atoms {}'.format(rid, ', '.join(str(a) for a in atoms)))
        lines.append(wr.io.render_summary(wr.analysis.classification_frame(c)))
        _emit(args, '\n'.join(lines) + '\n')


def _rewrite(args, p):
    """Returns (program, json report) for the selected mode."""
    report = OrderedDict([('mode', args.mode)])
    if args.mode == 'psi':
        q, theta = wr.psi.psi(p)
        report['renaming'] = OrderedDict((k.name, v.name) for k, v in theta.items())
        return q, report
    if args.mode == 'auto':
        q, trace = wr.unfold.rewrite(p, max_steps=args.max_unfold_steps, strategy=args.strategy,
                                     max_rules=args.max_rules)
        report.update(trace.to_dict())
        if not trace.success:
            raise WlrewriteError('Rewriting failed: {} after {} unfoldings'.format(trace.outcome, len(trace)))
        out = trace.output
        goals = set(trace.renaming(q_) for q_ in _predicates(p, args.goal)) if args.goal else None
    else:
        out = wr.xi.xi(p) if args.mode == 'xi' else wr.xi.xi_prime(p)
        goals = _predicates(p, args.goal) if args.goal else None
    report['provenance'] = OrderedDict((rid, [src, str(case)]) for rid, (src, case) in out.provenance.items())
    if goals is not None:
        return wr.xi.prune_for_goals(out, goals), report
    return out.program, report


def cmd_rewrite(args):
    p = _load_program(args.file)
    q, report = _rewrite(args, p)
    text = wr.io.print_program(q)
    if args.json:
        report['program'] = text
        text = json.dumps(report, indent=2) + '\n'
    _emit(args, text)
    if args.mode == 'auto':
        logging.info('Rewriting took {} unfoldings'.format(report['unfoldings']))


def cmd_prune(args):
    args.mode = 'xi-prime'
    cmd_rewrite(args)


def cmd_eval(args):
    p = _load_program(args.program, derived=True)
    d = wr.io.load_dataset(args.data)
    if args.oracle:
        result = wr.oracle.cautious_eval(p, d, max_clauses=args.max_clauses, max_atoms=args.max_atoms)
    else:
        result = wr.engine.evaluate(p, d)
    if args.trace:
        for i, n in enumerate(result.deltas):
            logging.info('iteration {}: {} new facts'.format(i, n))
    facts = sorted(f for f in result.facts if f.predicate != wr.model.TOP)
    if args.json:
        _emit(args, json.dumps(OrderedDict([('status', result.status),
                                            ('facts', [str(f) for f in facts])]), indent=2) + '\n')
    elif result.unsat:
        _emit(args, 'bot.\n')
    else:
        _emit(args, ''.join('{}.\n'.format(f) for f in facts))


def cmd_entail(args):
    p = _load_program(args.program, derived=True)
    d = wr.io.load_dataset(args.data)
    phi = wr.io.parse_disjunction(args.fact)
    if args.oracle or not p.is_datalog() or len(phi) != 1:
        ok = wr.oracle.entails_oracle(p, d, phi, max_clauses=args.max_clauses, max_atoms=args.max_atoms)
    else:
        ok = bool(wr.engine.entails(p, d, next(iter(phi))))
    print('yes' if ok else 'no')


def cmd_derive(args):
    p = _load_program(args.program, derived=True)
    d = wr.io.load_dataset(args.data)
    phi = wr.io.parse_disjunction(args.fact)
    deriv = wr.oracle.find_derivation(p, d, phi, max_depth=args.depth)
    if deriv is None:
        raise WlrewriteError('No derivation found within depth {}'.format(args.depth))
    if args.dot:
        _emit(args, wr.io.derivation_to_dot(deriv))
    else:
        _emit(args, wr.io.print_derivation(deriv))


def cmd_rlor_compile(args):
    _emit(args, wr.io.print_program(wr.rlor.compile(wr.io.load_ontology(args.file))))


def cmd_check_equiv(args):
    p = _load_program(args.source)
    q = _load_program(args.rewriting, derived=True)
    theta = wr.model.idb_expansion(p.with_equality())[1] if args.primed else None
    s = _predicates(p, args.goal) if args.goal else None
    report = wr.harness.check_rewriting(
        p, q, theta, s, exhaustive=not args.samples, max_facts=args.max_facts,
        max_constants=args.max_constants, samples=args.samples or 0, seed=args.seed,
        evaluator=args.evaluator, max_clauses=args.max_clauses, max_atoms=args.max_atoms)
    cex = report.counterexample
    if args.json:
        _emit(args, json.dumps(OrderedDict([
            ('passed', report.passed),
            ('datasets_tested', report.datasets_tested),
            ('skipped', report.skipped),
            ('elapsed', report.elapsed),
            ('max_facts', args.max_facts),
            ('max_constants', args.max_constants),
            ('counterexample', None if cex is None else OrderedDict([
                ('dataset', [str(f) for f in cex.dataset]),
                ('missing', [str(f) for f in sorted(cex.missing)]),
                ('extra', [str(f) for f in sorted(cex.extra)]),
            ])),
        ]), indent=2) + '\n')
    else:
        lines = ['{}: {} datasets tested, {} skipped (<= {} facts, {} constants), {:.2f}s'.format(
            'PASS' if report.passed else 'FAIL', report.datasets_tested, report.skipped,
            args.max_facts, args.max_constants, report.elapsed)]
        if cex is not None:
            lines.append('dataset: {}'.format(' '.join('{}.'.format(f) for f in cex.dataset)))
            lines.append('missing: {}'.format(' '.join(str(f) for f in sorted(cex.missing))))
            lines.append('extra: {}'.format(' '.join(str(f) for f in sorted(cex.extra))))
        _emit(args, '\n'.join(lines) + '\n')
    return 0 if report.passed else 1


def cmd_gen(args):
    cfg = wr.harness.GenConfig(num_predicates=args.predicates, max_arity=args.max_arity,
                               num_rules=args.rules, max_body=args.max_body,
                               disjunctive_prob=args.disjunctive_prob, bot_prob=args.bot_prob,
                               seed=args.seed)
    _emit(args, wr.io.print_program(wr.harness.random_program(cfg, filter=args.filter)))


def cmd_survey(args):
    mh = wr.metrics.create()
    with wr.unfold.set_default_strategy(args.strategy or wr.unfold.default_strategy):
        programs = [_load_program(f) for f in args.files]
        names = [os.path.basename(f) for f in args.files]
        summary = mh.compute_many(programs, metrics=wr.metrics.survey_metrics, names=names)
    if args.json:
        _emit(args, summary.to_json(orient='index', indent=2) + '\n')
    else:
        _emit(args, wr.io.render_summary(summary, formatters=mh.formatters,
                                         namemap=wr.io.survey_metric_names) + '\n')


def cmd_metrics(args):
    print(wr.metrics.create().list_metrics_markdown())


def cmd_fragment(args):
    p = _load_program(args.file)
    _emit(args, wr.io.print_program(wr.analysis.datalog_fragment(p)))


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description="""
Rewrite disjunctive datalog programs into datalog.

Programs (.dl) are written `head1 | head2 :- body1, body2.`, datasets (.facts)
hold one ground fact per line, ontologies (.rlor) one normalised axiom per line.""",
                                     formatter_class=argparse.RawTextHelpFormatter)
    parser.add_argument('--loglevel', type=str, help='Log level', default='info')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    def add(name, fnc, helpstr, output=True):
        p = sub.add_parser(name, help=helpstr)
        p.set_defaults(fnc=fnc)
        if output:
            p.add_argument('-o', '--output', type=str, help='Write results to file')
        return p

    def caps(p):
        p.add_argument('--max-clauses', type=int, help='Oracle clause cap')
        p.add_argument('--max-atoms', type=int, help='Oracle atom cap')

    p = add('validate', cmd_validate, 'Check a program, dataset or ontology', output=False)
    p.add_argument('file')
    p.add_argument('--derived', action='store_true', help='Accept derived predicate names')

    p = add('classify', cmd_classify, 'Classify predicates and test linearity')
    p.add_argument('file')
    p.add_argument('--derived', action='store_true', help='Accept derived predicate names')
    p.add_argument('--json', action='store_true')
    p.add_argument('--dot', action='store_true', help='Print the dependency graph')

    for name, fnc, helpstr in [('rewrite', cmd_rewrite, 'Rewrite a program'),
                               ('prune', cmd_prune, 'Rewrite a WL program for a set of goal predicates')]:
        p = add(name, fnc, helpstr)
        p.add_argument('file')
        if name == 'rewrite':
            p.add_argument('--mode', choices=['xi', 'xi-prime', 'psi', 'auto'], default='auto')
        p.add_argument('--goal', type=str, required=(name == 'prune'), help='Comma separated goal predicates')
        p.add_argument('--max-unfold-steps', type=int, default=wr.unfold.default_max_steps)
        p.add_argument('--strategy', choices=wr.unfold.available_strategies)
        p.add_argument('--max-rules', type=int, help='Program size at which unfolding gives up')
        p.add_argument('--json', action='store_true')

    p = add('eval', cmd_eval, 'Evaluate a program over a dataset')
    p.add_argument('program')
    p.add_argument('data')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--engine', action='store_true', help='Datalog engine (default)')
    group.add_argument('--oracle', action='store_true', help='Disjunctive oracle')
    p.add_argument('--trace', action='store_true', help='Log facts derived per iteration')
    p.add_argument('--json', action='store_true')
    caps(p)

    p = add('entail', cmd_entail, 'Decide entailment of a fact or disjunction', output=False)
    p.add_argument('program')
    p.add_argument('data')
    p.add_argument('fact', help='e.g. "b(a)" or "b(a) | g(a)"')
    p.add_argument('--oracle', action='store_true')
    caps(p)

    p = add('derive', cmd_derive, 'Search a hyperresolution derivation')
    p.add_argument('program')
    p.add_argument('data')
    p.add_argument('fact')
    p.add_argument('--depth', type=int, default=8)
    p.add_argument('--dot', action='store_true')

    p = add('rlor-compile', cmd_rlor_compile, 'Translate an ontology into a program')
    p.add_argument('file')

    p = add('check-equiv', cmd_check_equiv, 'Test a rewriting against its source on small datasets')
    p.add_argument('source')
    p.add_argument('rewriting')
    p.add_argument('--primed', action='store_true', help='Compare under the IDB expansion renaming')
    p.add_argument('--goal', type=str, help='Comma separated predicates to compare')
    p.add_argument('--exhaustive', action='store_true', help='Enumerate all datasets (default)')
    p.add_argument('--samples', type=int, help='Draw this many random datasets instead')
    p.add_argument('--max-facts', type=int, default=6)
    p.add_argument('--max-constants', type=int, default=3)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--evaluator', choices=['auto', 'engine', 'oracle'], default='auto')
    p.add_argument('--json', action='store_true')
    caps(p)

    p = add('gen', cmd_gen, 'Print a random program')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--filter', choices=list(wr.harness.FILTERS))
    p.add_argument('--predicates', type=int, default=4)
    p.add_argument('--max-arity', type=int, default=2)
    p.add_argument('--rules', type=int, default=6)
    p.add_argument('--max-body', type=int, default=3)
    p.add_argument('--disjunctive-prob', type=float, default=0.3)
    p.add_argument('--bot-prob', type=float, default=0.1)

    p = add('survey', cmd_survey, 'Tabulate metrics of many programs')
    p.add_argument('files', nargs='+')
    p.add_argument('--strategy', choices=wr.unfold.available_strategies)
    p.add_argument('--json', action='store_true')

    add('metrics', cmd_metrics, 'List available program metrics', output=False)

    p = add('fragment', cmd_fragment, 'Print the datalog fragment of a program')
    p.add_argument('file')

    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)

    loglevel = getattr(logging, args.loglevel.upper(), None)
    if not isinstance(loglevel, int):
        raise ValueError('Invalid log level: {} '.format(args.loglevel))
    logging.basicConfig(level=loglevel, format='%(asctime)s %(levelname)s - %(message)s', datefmt='%I:%M:%S')

    try:
        return args.fnc(args) or 0
    except (WlrewriteError, OSError, ValueError) as e:
        logging.error(str(e))
        return 1


if __name__ == '__main__':
    sys.exit(main())
