import wlrewrite as wr
from wlrewrite.engine import BOT_FACT
from wlrewrite.oracle import Solver, Derivation
import pytest
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), '../data')


def load(name):
    return wr.io.load_program(os.path.join(DATA_DIR, name))


def data(name):
    return wr.io.load_dataset(os.path.join(DATA_DIR, name))


def atom(text):
    return wr.io.parse_atom(text)


def test_solver():
    assert Solver([[1, 2], [-1], [-2, 3]]).solve() == set([2, 3])
    assert Solver([[1], [-1]]).solve() is None
    assert Solver([[1, 2]]).solve([-1, -2]) is None
    assert Solver([[]]).solve() is None
    assert Solver([]).solve() == set()


def test_solver_backtracks():
    # forces the false-first branch on 1 to fail
    clauses = [[1, 2], [1, -2], [-1, 3], [-3, 4, 5], [-4], [-5, 6]]
    model = Solver(clauses).solve()
    assert model is not None
    assert set([1, 3, 5, 6]) <= model
    assert 4 not in model


def test_ground_instance_counts():
    g = wr.oracle.ground(load('p1.dl'), data('d1.facts'))
    assert g.instance_counts['r1'] == 3
    assert g.instance_counts['r2'] == 9
    assert g.instance_counts['r3'] == 9


def test_ground_units():
    g = wr.oracle.ground(wr.model.Program(), wr.io.parse_dataset('a(c).'))
    assert len(g) == 3
    assert sorted(str(g.atom(n)) for n in range(1, len(g.atoms) + 1)) == ['a(c)', 'bot', 'top(c)']


def test_ground_caps():
    with pytest.raises(wr.errors.ResourceCapExceeded):
        wr.oracle.ground(load('p1.dl'), data('d1.facts'), max_clauses=10)
    with pytest.raises(wr.errors.ResourceCapExceeded):
        wr.oracle.cautious_eval(load('p1.dl'), data('d1.facts'), max_atoms=3)


def test_relevant_grounding_is_smaller():
    full = wr.oracle.ground(load('p1.dl'), data('d1.facts'))
    relevant = wr.oracle.ground(load('p1.dl'), data('d1.facts'), relevant=True)
    assert len(relevant) < len(full)


def test_cautious_eval_p1():
    result = wr.oracle.cautious_eval(load('p1.dl'), data('d1.facts'))
    assert not result.unsat
    assert atom('b(a)') in result.facts
    assert atom('g(b)') not in result.facts


def test_cautious_eval_disjunction_only():
    d = wr.io.parse_dataset('v(a).')
    result = wr.oracle.cautious_eval(load('p1.dl'), d)
    assert result.facts == frozenset([atom('v(a)'), atom('top(a)')])
    result = wr.oracle.cautious_eval(load('p1.dl'), d, predicates=[wr.model.Predicate('b', 1)])
    assert result.facts == frozenset()


def test_entails_oracle():
    p, d = load('p1.dl'), wr.io.parse_dataset('v(a).')
    assert wr.oracle.entails_oracle(p, d, [atom('b(a)'), atom('g(a)')])
    assert not wr.oracle.entails_oracle(p, d, [atom('b(a)')])
    assert not wr.oracle.entails_oracle(p, d, [atom('b(z)')])
    assert wr.oracle.entails_oracle(load('p1.dl'), data('d1.facts'), [atom('b(a)')])


def test_three_colouring():
    p = wr.rlor.compile(wr.io.load_ontology(os.path.join(DATA_DIR, 'three_colour.rlor')))
    assert wr.oracle.cautious_eval(p, data('k4.facts')).unsat
    assert not wr.oracle.cautious_eval(p, data('triangle.facts')).unsat
    assert wr.oracle.entails_oracle(p, data('k4.facts'), [BOT_FACT])


def test_find_derivation_p1():
    p, d = load('p1.dl'), data('d1.facts')
    deriv = wr.oracle.find_derivation(p, d, [atom('b(a)')])
    assert deriv is not None
    assert deriv.label == frozenset([atom('b(a)')])
    ok, reason = wr.oracle.check_derivation(p, d, deriv)
    assert ok, reason
    assert deriv.rule_applications() >= 3
    assert any(n.rule_id == 'r1' for n in deriv.nodes())


def test_find_derivation_xi_p1():
    q, d = wr.xi.xi(load('p1.dl')).program, data('d1.facts')
    deriv = wr.oracle.find_derivation(q, d, [atom('b(a)')], max_depth=20)
    assert deriv is not None
    ok, reason = wr.oracle.check_derivation(q, d, deriv)
    assert ok, reason
    assert all(len(n.label) == 1 for n in deriv.nodes())


def test_find_derivation_bot():
    p = wr.rlor.compile(wr.io.load_ontology(os.path.join(DATA_DIR, 'three_colour.rlor')))
    d = wr.io.parse_dataset('b(n1). g(n1).')
    deriv = wr.oracle.find_derivation(p, d, [BOT_FACT])
    assert deriv is not None
    assert wr.oracle.check_derivation(p, d, deriv)[0]


def test_find_derivation_not_entailed():
    assert wr.oracle.find_derivation(load('p1.dl'), wr.io.parse_dataset('v(a).'), [atom('b(a)')]) is None


def test_check_derivation_rejects():
    p, d = load('p1.dl'), data('d1.facts')
    deriv = wr.oracle.find_derivation(p, d, [atom('b(a)')])
    forged = deriv._replace(label=frozenset([atom('b(b)')]))
    ok, reason = wr.oracle.check_derivation(p, d, forged)
    assert not ok
    assert reason
    leaf = Derivation([atom('b(c)')])
    assert not wr.oracle.check_derivation(p, d, leaf)[0]
    unknown = Derivation([atom('b(a)')], 'r9', (), [leaf])
    assert wr.oracle.check_derivation(p, d, unknown) == (False, 'unknown rule r9')


def test_check_derivation_rejection_reasons():
    p, d = load('p1.dl'), data('d1.facts')
    table = wr.oracle.rule_table(p, d)
    x = table['r1'].variables()[0]
    s = table['top:v:0'].body[0].args[0]
    a, zzz = wr.model.Const('a'), wr.model.Const('zzz')
    top = lambda c: wr.model.ground_atom(wr.model.TOP, c)
    check = lambda deriv: wr.oracle.check_derivation(p, d, deriv)

    stub = Derivation([top('a')], 'top:v:0', [(s, a)], [Derivation([atom('v(a)')])])
    assert check(stub) == (True, '')

    ok, reason = check(Derivation([top('zzz')], 'top:v:0', [(s, zzz)], [Derivation([atom('v(zzz)')])]))
    assert not ok
    assert 'not a dataset fact' in reason

    inner = Derivation([atom('v(a)')], 'r1', [(x, a)], [Derivation([atom('v(a)')])])
    assert check(Derivation([top('a')], 'top:v:0', [(s, a)], [inner])) == \
        (False, 'top-stub premises must be dataset facts')

    bad = Derivation([atom('v(a)'), top('a')])
    assert check(Derivation([atom('b(a)'), atom('g(a)'), top('a')], 'r1', [(x, a)], [bad])) == \
        (False, 'top occurs outside a top-stub')

    assert check(Derivation([atom('b(a)'), atom('g(a)')], 'r1', [(x, a)], [])) == \
        (False, 'rule r1 needs 1 premises, got 0')
    assert check(Derivation([atom('b(a)'), atom('g(a)')], 'r1', [], [Derivation([atom('v(a)')])])) == \
        (False, 'substitution does not ground rule r1')

    ok, reason = check(Derivation([atom('b(a)'), atom('g(a)')], 'r1', [(x, a)], [Derivation([atom('v(b)')])]))
    assert not ok
    assert reason.startswith('premise')


def test_possible_facts_cap():
    p = wr.io.parse_program('p(X, Z) :- p(X, Y), p(Y, Z).')
    seed = wr.engine.FactIndex()
    for i in range(5):
        seed.add(wr.model.Predicate('p', 2), ('c{}'.format(i), 'c{}'.format(i + 1)))
    assert len(wr.oracle.possible_facts(p.user_rules, seed)) == 15
    with pytest.raises(wr.errors.ResourceCapExceeded):
        wr.oracle.possible_facts(p.user_rules, seed, max_atoms=8)
