import wlrewrite as wr
from wlrewrite.model import Predicate
import pytest
import io
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), '../data')


def test_parse_disjunctive_rule():
    p = wr.io.parse_program('b(X) | g(X) :- v(X).')
    r = p[0]
    assert [a.predicate.name for a in r.head] == ['b', 'g']
    assert [a.predicate.name for a in r.body] == ['v']
    assert r.is_disjunctive


def test_load_dataset():
    d = wr.io.loadtxt(os.path.join(DATA_DIR, 'd1.facts'))
    assert len(d) == 6
    assert wr.io.parse_atom('e(a, c)') in d
    assert d.predicates() == set([Predicate('v', 1), Predicate('e', 2)])


def test_print_program():
    p = wr.io.load_program(os.path.join(DATA_DIR, 'p1.dl'))
    text = wr.io.print_program(p)
    assert text.splitlines()[0] == 'b(X) | g(X) :- v(X).'
    assert len(text.splitlines()) == 3
    q = wr.io.parse_program(text)
    assert [r.canonical() for r in q] == [r.canonical() for r in p]
    assert wr.io.print_program(q) == text


def test_print_dataset():
    d = wr.io.parse_dataset('e(b, c). v(a).')
    assert wr.io.print_dataset(d) == 'e(b, c).\nv(a).\n'


def test_comments_and_equality():
    p = wr.io.parse_program('% comment\nX = Y :- r(X, Y). % trailing\n')
    assert p.uses_equality()
    assert wr.io.print_program(p) == 'X = Y :- r(X, Y).\n'


def test_parse_errors():
    with pytest.raises(wr.errors.ParseError) as e:
        wr.io.parse_program('b(X) :- v(X)\n')
    assert e.value.span.line == 2
    with pytest.raises(wr.errors.ParseError):
        wr.io.parse_program('b(X) :- v(X) & g(X).')
    with pytest.raises(wr.errors.NonGroundFactError):
        wr.io.parse_dataset('v(X).')
    with pytest.raises(wr.errors.ParseError):
        wr.io.parse_dataset('b(a) :- v(a).')
    with pytest.raises(wr.errors.BuiltinPlacementError):
        wr.io.parse_dataset('top(a).')


def test_parse_disjunction():
    phi = wr.io.parse_disjunction('b(a) | g(a)')
    assert sorted(str(a) for a in phi) == ['b(a)', 'g(a)']
    assert wr.io.format_disjunction(phi) == 'b(a) | g(a)'
    assert wr.io.format_disjunction(frozenset()) == '[]'


def test_derived_names():
    p = wr.io.parse_program("b^{g}(X, Y) :- top(X), top(Y). b'(X) :- b(X).", derived=True)
    assert set(q.name for q in p.predicates()) == set(['b^{g}', 'top', "b'", 'b'])
    with pytest.raises(wr.errors.ParseError):
        wr.io.parse_program('b^{g(X) :- v(X).', derived=True)


def test_infer_format():
    assert wr.io.infer_format('a/p1.dl') == wr.io.Format.DL
    assert wr.io.infer_format('d1.facts') == wr.io.Format.FACTS
    assert wr.io.infer_format('o.rlor') == wr.io.Format.RLOR
    with pytest.raises(ValueError):
        wr.io.infer_format('notes.txt')


def test_load_ontology():
    axioms = wr.io.loadtxt(os.path.join(DATA_DIR, 'three_colour.rlor'))
    assert len(axioms) == 11
    assert all(isinstance(ax, wr.rlor.RlorAxiom) for ax in axioms)


def test_render_summary():
    p = wr.io.load_program(os.path.join(DATA_DIR, 'p1.dl'))
    mh = wr.metrics.create()
    summary = mh.compute(p, metrics=['num_rules', 'datalog_ratio'], name='p1')
    buf = io.StringIO()
    wr.io.render_summary(summary, formatters=mh.formatters, namemap=wr.io.survey_metric_names, buf=buf)
    text = buf.getvalue()
    assert 'p1' in text
    assert '50.0%' in text


def test_print_derivation():
    p = wr.io.load_program(os.path.join(DATA_DIR, 'p1.dl'))
    d = wr.io.load_dataset(os.path.join(DATA_DIR, 'd1.facts'))
    deriv = wr.oracle.find_derivation(p, d, [wr.io.parse_atom('b(a)')])
    text = wr.io.print_derivation(deriv)
    assert text.splitlines()[0].startswith('b(a)')
    assert '[dataset]' in text
    dot = wr.io.derivation_to_dot(deriv)
    assert dot.startswith('digraph derivation {')
    assert dot.count('->') == len(list(deriv.nodes())) - 1
