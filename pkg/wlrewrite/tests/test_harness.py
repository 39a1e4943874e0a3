from hypothesis import given, settings, strategies as st
import wlrewrite as wr
import pytest
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), '../data')


def load(name):
    return wr.io.load_program(os.path.join(DATA_DIR, name))


def test_random_program_is_deterministic():
    cfg = wr.harness.GenConfig(seed=3)
    a = wr.harness.random_program(cfg)
    b = wr.harness.random_program(cfg)
    assert wr.io.print_program(a) == wr.io.print_program(b)
    assert len(a.user_rules) == cfg.num_rules


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100000))
def test_random_program_filters(seed):
    cfg = wr.harness.GenConfig(num_predicates=3, num_rules=4, max_body=2, seed=seed)
    p = wr.harness.random_program(cfg, filter='datalog')
    assert p.is_datalog()
    p = wr.harness.random_program(cfg, filter='wl')
    assert wr.analysis.is_wl(p)
    for r in p.user_rules:
        assert not r.unsafe_variables()


def test_filter_starvation():
    with pytest.raises(wr.errors.FilterStarvation):
        wr.harness.random_program(wr.harness.GenConfig(), filter='linear', max_attempts=0)


def test_enumerate_datasets():
    p = wr.io.parse_program('p(X) :- p(X).')
    sig = p.signature()
    assert len(list(wr.harness.enumerate_datasets(sig, 3, 1))) == 2
    assert len(list(wr.harness.enumerate_datasets(sig, 2, 2))) == 4
    assert wr.harness.dataset_count(sig, 2, 2) == 4

    p = wr.io.parse_program('q(X) :- p(X).')
    sig = p.signature()
    datasets = list(wr.harness.enumerate_datasets(sig, 4, 2))
    assert len(datasets) == 16
    assert wr.harness.dataset_count(sig, 4, 2) == 16
    assert len(set(datasets)) == 16
    assert [len(d) for d in datasets] == sorted(len(d) for d in datasets)
    assert wr.harness.dataset_count(sig, 1, 2) == 5


def test_dataset_constants():
    p = wr.io.parse_program('q(X) :- p(X, a).')
    assert wr.harness.dataset_constants(p.signature(), 3) == ['a', 'c0', 'c1']
    assert wr.harness.dataset_constants(p.signature(), 1) == ['a']


def test_sample_datasets():
    sig = load('p1.dl').signature()
    a = list(wr.harness.sample_datasets(sig, 3, 2, 10, seed=5))
    b = list(wr.harness.sample_datasets(sig, 3, 2, 10, seed=5))
    assert a == b
    assert len(a) == 10
    assert all(len(d) <= 3 for d in a)


def test_rewriting_passes():
    p = load('p1.dl')
    q = wr.xi.xi(p).program
    report = wr.harness.check_rewriting(p, q, max_facts=3, max_constants=2)
    assert report.passed
    assert report.counterexample is None
    assert report.skipped == 0
    assert report.datasets_tested == wr.harness.dataset_count(p.signature(), 3, 2)
    assert (report.events.Type == 'MATCH').all()
    assert wr.harness.replay(report, p, q) is None


def test_reflexive():
    p = load('p4.dl')
    report = wr.harness.check_rewriting(p, p, max_facts=2, max_constants=2)
    assert report.passed


def test_counterexample():
    p = load('p1.dl')
    q = p.replace_rules([r for r in p if r.id != 'r2'])
    report = wr.harness.check_rewriting(p, q, max_facts=3, max_constants=2)
    assert not report.passed
    cex = report.counterexample
    assert cex.missing and not cex.extra
    assert cex.fact.predicate.name == 'b'
    assert report.events.Type.iloc[-1] == 'MISMATCH'
    assert (report.events.Type.iloc[:-1] == 'MATCH').all()
    assert report.datasets_tested == len(report.events)

    again = wr.harness.replay(report, p, q)
    assert again == cex
    assert wr.harness.compare(p, q, cex.dataset, wr.Renaming(), set([wr.model.Predicate('b', 1)]),
                              wr.oracle.cautious_eval) is not None


def test_renamed_rewriting():
    p = load('p1.dl')
    pe, theta = wr.model.idb_expansion(p)
    report = wr.harness.check_rewriting(p, pe, theta=theta, max_facts=2, max_constants=2)
    assert report.passed

    report = wr.harness.check_rewriting(p, p, theta=theta, max_facts=2, max_constants=2)
    assert not report.passed


def test_skipped_on_caps():
    p = load('p1.dl')
    report = wr.harness.check_rewriting(p, p, max_facts=2, max_constants=2, evaluator='oracle', max_clauses=1)
    assert report.passed
    assert report.skipped > 0
    assert report.datasets_tested + report.skipped == wr.harness.dataset_count(p.signature(), 2, 2)
    assert (report.events.Type != 'MISMATCH').all()


def test_events_frame():
    acc = wr.harness.EquivAccumulator()
    assert len(acc.events) == 0
    assert acc.events.columns.values.tolist() == ['Type', 'Facts', 'Missing', 'Extra', 'Seconds']
    d = wr.io.parse_dataset('v(a).')
    acc.update(d, 'MATCH')
    acc.update(d, 'MISMATCH', missing=[wr.io.parse_atom('b(a)')])
    df = acc.events
    assert df.index.names == ['Dataset', 'Event']
    assert df.Type.tolist() == ['MATCH', 'MISMATCH']
    assert df.Facts.iloc[0] == 'v(a).'
    assert df.Missing.iloc[1] == 'b(a)'
    acc.reset()
    assert len(acc.events) == 0
