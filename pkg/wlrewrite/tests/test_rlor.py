import wlrewrite as wr
from wlrewrite.rlor import RlorAxiom
import pytest
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), '../data')


def compile_text(text):
    return wr.rlor.compile(wr.rlor.parse_ontology(text))


def test_parse_forms():
    text = '''
    maxCard(a, r, b).
    subClassOf(and(a, b), c).
    subClassOf(some(r, a), b).
    subPropertyOf(r, s).
    subPropertyOf(chain(r, s), t).
    subClassOf(a, self(r)).
    subClassOf(self(r), a).
    subPropertyOf(r, inverse(s)).
    subClassOf(a, nominal(i)).
    subClassOf(nominal(i), a).
    subClassOf(a, or(b, c)).
    '''
    axioms = wr.rlor.parse_ontology(text)
    assert [ax.kind for ax in axioms] == list(range(1, 12))
    assert [str(ax) for ax in axioms] == [l.strip().rstrip('.') for l in text.strip().splitlines()]


def test_parse_disjunction():
    assert wr.rlor.parse_ontology('disjunction(v, b, g)') == [RlorAxiom(11, ['v', 'b', 'g'])]
    assert wr.rlor.parse_ontology('subClassOf(a, b)') == [RlorAxiom(2, ['a', 'top', 'b'])]
    assert wr.rlor.parse_ontology('') == []
    assert wr.rlor.parse_ontology('% nothing here\n') == []


def test_parse_rejects():
    with pytest.raises(wr.errors.OntologyError):
        wr.rlor.parse_ontology('subClassOf(or(a, b), c)')
    with pytest.raises(wr.errors.OntologyError):
        wr.rlor.parse_ontology('subClassOf(and(some(r, a), b), c)')
    with pytest.raises(wr.errors.OntologyError):
        wr.rlor.parse_ontology('equivalentClasses(a, b)')
    with pytest.raises(wr.errors.ParseError):
        wr.rlor.parse_ontology('subClassOf(a, b')


def test_normalise():
    axioms = wr.rlor.parse_ontology('disjunction(v, r, g, b)')
    assert axioms == [RlorAxiom(11, ['v', 'r', 'v_u1']), RlorAxiom(11, ['v_u1', 'g', 'b'])]
    axioms = wr.rlor.parse_ontology('disjunction(v, r, g, b). subClassOf(v_u1, w).')
    assert axioms[0] == RlorAxiom(11, ['v', 'r', 'v_u2'])


def test_compile_disjunction():
    p = wr.rlor.compile([RlorAxiom(11, ['v', 'b', 'g'])])
    assert wr.io.print_program(p) == 'b(X) | g(X) :- v(X).\n'
    assert p[0].id == 'ax1'


def test_compile_forms():
    assert wr.io.print_program(compile_text('subClassOf(a, nominal(boss))')) == 'X = boss :- a(X).\n'
    assert wr.io.print_program(compile_text('subClassOf(nominal(acme), org)')) == 'org(acme).\n'
    assert wr.io.print_program(compile_text('subPropertyOf(r, inverse(s))')) == 's(Y, X) :- r(X, Y).\n'
    assert wr.io.print_program(compile_text('subClassOf(and(a, b), bot)')) == 'bot :- a(X), b(X).\n'
    assert wr.io.print_program(compile_text('subClassOf(some(r, a), b)')) == 'b(Y) :- a(X), r(Y, X).\n'
    p = compile_text('maxCard(a, r, b)')
    assert p.user_rules[0].head[0].predicate == wr.model.EQ
    assert len(p.user_rules[0].body) == 5


def test_compile_equality_axioms():
    p = compile_text('subClassOf(a, nominal(boss))')
    assert p.uses_equality()
    assert any(r.origin == wr.model.Rule.EQ for r in p)


def test_compile_skips_tautologies():
    p = compile_text('subClassOf(a, top). subClassOf(nominal(i), top). subClassOf(a, or(b, top)). subClassOf(a, b).')
    assert [r.id for r in p] == ['ax4']


def test_compile_rejects_bot_on_left():
    with pytest.raises(wr.errors.OntologyError):
        compile_text('subClassOf(and(bot, a), c)')
    with pytest.raises(wr.errors.OntologyError):
        compile_text('subClassOf(nominal(i), bot)')
    with pytest.raises(wr.errors.OntologyError):
        compile_text('subPropertyOf(top, r)')


def test_three_colour():
    p = wr.rlor.compile(wr.io.load_ontology(os.path.join(DATA_DIR, 'three_colour.rlor')))
    assert len(p.user_rules) == 11
    assert not wr.analysis.is_wl(p)
    k4 = wr.io.load_dataset(os.path.join(DATA_DIR, 'k4.facts'))
    triangle = wr.io.load_dataset(os.path.join(DATA_DIR, 'triangle.facts'))
    assert wr.oracle.cautious_eval(p, k4).unsat
    assert not wr.oracle.cautious_eval(p, triangle).unsat


def test_small_ontology_round_trip():
    p = wr.rlor.compile(wr.io.load_ontology(os.path.join(DATA_DIR, 'small.rlor')))
    assert wr.analysis.is_wl(p)
    assert not p.is_datalog()
    out = wr.xi.xi_prime(p)
    assert out.program.is_datalog()
    report = wr.harness.check_rewriting(p, out.program, exhaustive=False, samples=25,
                                        max_facts=3, max_constants=2, seed=7)
    assert report.passed, report.counterexample
    assert report.datasets_tested + report.skipped == 25
