"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Walks through the rewriting of a small colouring program.
"""

import wlrewrite as wr

if __name__ == '__main__':

    # Vertices are coloured blue or green, neighbours of a green vertex are
    # blue and neighbours of a blue one green.
    p = wr.io.parse_program("""
        b(X) | g(X) :- v(X).
        b(X) :- g(Y), e(X,Y).
        g(X) :- b(Y), e(X,Y).
    """)

    c = wr.analysis.classify_predicates(p)
    print(wr.io.render_summary(wr.analysis.classification_frame(c)))
    print('linear: {}, weakly linear: {}'.format(bool(wr.analysis.is_linear(p)), bool(wr.analysis.is_wl(p, c))))

    # The program is linear, so Xi applies.
    out = wr.xi.xi(p)
    print(wr.io.print_program(out.program))
    print(out.provenance_frame())

    d1 = wr.io.parse_dataset('v(a). v(b). v(c). e(a,b). e(b,c). e(a,c).')
    result = wr.engine.evaluate(out.program, d1)
    print(' '.join(str(f) for f in sorted(result.restrict(p.predicates()))))

    # The same fact from the disjunctive program, with a proof.
    b_a = wr.io.parse_atom('b(a)')
    print('oracle: {}'.format(wr.oracle.entails_oracle(p, d1, frozenset([b_a]))))
    derivation = wr.oracle.find_derivation(p, d1, frozenset([b_a]))
    print(wr.io.print_derivation(derivation))

    # Compare the rewriting against its source on all small datasets.
    report = wr.harness.check_rewriting(p, out.program, max_facts=3, max_constants=2)
    print(report.events.head())
    print('passed: {} on {} datasets'.format(report.passed, report.datasets_tested))

    # Statistics as reported by the survey command.
    mh = wr.metrics.create()
    summary = mh.compute(p, metrics=wr.metrics.survey_metrics, name='colouring')
    print(wr.io.render_summary(summary, formatters=mh.formatters, namemap=wr.io.survey_metric_names))
