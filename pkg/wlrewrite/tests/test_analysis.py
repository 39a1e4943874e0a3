import wlrewrite as wr
from wlrewrite.model import Predicate
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), '../data')


def load(name):
    return wr.io.load_program(os.path.join(DATA_DIR, name))


def named_edges(g):
    return set((a.name, b.name) for a, b in g.edges)


def test_dependency_graph_p3():
    g = wr.analysis.dependency_graph(load('p3.dl'))
    assert named_edges(g) == set([
        ('v', 'b'), ('v', 'g'), ('e', 'b'), ('e', 'g'), ('g', 'b'), ('b', 'g'), ('e', 'e')])
    assert len(g) == 7
    v, b, e = Predicate('v', 1), Predicate('b', 1), Predicate('e', 2)
    assert g.labels(v, b) == set(['r1'])
    assert g.labels(e, e) == set(['r4'])
    assert g.labels(b, v) == set()


def test_dependency_graph_ignores_top_rules():
    p = wr.model.augment_top(load('p1.dl'))
    g = wr.analysis.dependency_graph(p)
    assert 'top' not in set(q.name for q in g.vertices)
    assert len(g) == 6


def test_classify_p3():
    c = wr.analysis.classify_predicates(load('p3.dl'))
    assert set(q.name for q in c.disjunctive) == set(['b', 'g'])
    assert set(q.name for q in c.datalog) == set(['e', 'v'])
    w = c.witnesses[Predicate('g', 1)]
    assert w.rule == 'r1'
    assert w.path[0] == Predicate('v', 1)
    assert w.path[-1] == Predicate('g', 1)
    assert c.to_dict()['e']['class'] == 'datalog'


def test_classify_p4():
    c = wr.analysis.classify_predicates(load('p4.dl'))
    assert set(q.name for q in c.disjunctive) == set(['a', 'b', 'c', 'd', 'f'])
    assert set(q.name for q in c.datalog) == set(['e', 'r'])


def test_witness_paths_follow_edges():
    p = load('p4.dl')
    g = wr.analysis.dependency_graph(p)
    c = wr.analysis.classify_predicates(p, g)
    for q, w in c.witnesses.items():
        r = p.rule(w.rule)
        assert r.is_disjunctive
        assert w.path[-1] == q
        for a, b in zip(w.path, w.path[1:]):
            assert (a, b) in g.edges


def test_is_linear():
    assert wr.analysis.is_linear(load('p1.dl'))
    check = wr.analysis.is_linear(load('p3.dl'))
    assert not check
    assert [rid for rid, _ in check.offenders] == ['r2', 'r3']


def test_is_wl():
    assert wr.analysis.is_wl(load('p1.dl'))
    assert wr.analysis.is_wl(load('p3.dl'))
    check = wr.analysis.is_wl(load('p4.dl'))
    assert not check
    assert len(check.offenders) == 1
    rid, atoms = check.offenders[0]
    assert rid == 'r1'
    assert [a.predicate.name for a in atoms] == ['a', 'b']


def test_is_wl_counts_atoms():
    p = wr.io.parse_program('b(X) | g(X) :- v(X). q(X) :- b(X), b(Y), e(X, Y).')
    assert not wr.analysis.is_wl(p)


def test_program_category():
    assert wr.analysis.program_category(load('p2.dl')) == 'datalog'
    assert wr.analysis.program_category(load('p1.dl')) == 'linear'
    assert wr.analysis.program_category(load('p3.dl')) == 'wl'
    assert wr.analysis.program_category(load('p4.dl')) == 'non-wl'


def test_datalog_fragment():
    f = wr.analysis.datalog_fragment(load('p3.dl'))
    assert wr.io.print_program(f) == 'e(Y, X) :- e(X, Y).\n'


def test_classification_frame():
    df = wr.analysis.classification_frame(wr.analysis.classify_predicates(load('p3.dl')))
    assert df.index.tolist() == ['b', 'e', 'g', 'v']
    assert df.loc['b', 'Class'] == 'disjunctive'
    assert df.loc['b', 'Rule'] == 'r1'
    assert df.loc['e', 'Arity'] == 2


def test_export_dot():
    p3 = load('p3.dl')
    dot = wr.analysis.export_dot(wr.analysis.dependency_graph(p3), wr.analysis.classify_predicates(p3))
    assert dot.count('->') == 7
    assert '"e" -> "e" [label="r4"];' in dot
    assert '"b" [shape=box' in dot
    dot = wr.analysis.export_dot(wr.analysis.dependency_graph(load('p1.dl')))
    assert dot.count('->') == 6
