from pytest import approx
import numpy as np
import pandas as pd
import wlrewrite as wr
import pytest
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), '../data')


def load(name):
    return wr.io.load_program(os.path.join(DATA_DIR, name))


def test_dependencies_by_argument_name():
    m = wr.metrics.MetricsHost()
    m.register(lambda p: len(p.user_rules), name='a')
    m.register(lambda p: 2, name='b')
    m.register(lambda p, a, b: a + b, name='add')
    m.register(lambda p, a, b: a - b, name='sub')
    m.register(lambda p, add, sub: add * sub, name='mul')
    assert m.metrics['mul'].deps == ['add', 'sub']

    summary = m.compute(load('p1.dl'), metrics=['mul', 'add'], name='p1')
    assert summary.columns.values.tolist() == ['mul', 'add']
    assert summary.index.tolist() == ['p1']
    assert summary.iloc[0]['mul'] == 5
    assert summary.iloc[0]['add'] == 5


def test_values_keep_intermediates():
    calls = []

    def rules(p):
        """Number of rules
        of p."""
        calls.append('rules')
        return len(p.user_rules)

    def twice(p, rules):
        return 2 * rules

    def both(p, rules, twice):
        return rules + twice

    m = wr.metrics.MetricsHost()
    m.register(rules)
    m.register(twice)
    m.register(both)
    assert m.metrics['rules'].help == 'Number of rules of p.'
    assert m.metrics['twice'].help == ''

    values = m.values(load('p2.dl'), 'both')
    assert list(values) == ['rules', 'twice', 'both']
    assert values['both'] == 3
    assert calls == ['rules']


def test_unknown_dependency():
    m = wr.metrics.MetricsHost()
    m.register(lambda p, nothing: 1, name='a')
    with pytest.raises(KeyError):
        m.compute(wr.Program(), metrics='a')
    with pytest.raises(KeyError):
        m.compute(wr.Program(), metrics='missing')


def test_program_metrics():
    mh = wr.metrics.create()
    values = mh.values(load('p1.dl'), ['category', 'datalog_ratio', 'num_rules'])

    assert values['num_rules'] == 3
    assert values['num_predicates'] == 4
    assert values['num_disjunctive'] == 2
    assert values['datalog_ratio'] == approx(0.5)
    assert values['linear']
    assert values['weakly_linear']
    assert not values['is_datalog']
    assert values['category'] == 'linear'
    assert 'rewrite_trace' not in values

    row = mh.compute(load('p1.dl'), metrics=['num_disjunctive_rules', 'max_arity', 'num_idb']).iloc[0]
    assert row['num_disjunctive_rules'] == 1
    assert row['max_arity'] == 2
    assert row['num_idb'] == 2


def test_categories():
    mh = wr.metrics.create()
    cats = [mh.values(load(f), 'category')['category'] for f in ['p1.dl', 'p2.dl', 'p4.dl']]
    assert cats == ['linear', 'datalog', 'non-wl']


def test_rewrite_metrics():
    mh = wr.metrics.create()
    values = mh.values(load('p4.dl'), ['rewrite_outcome', 'unfold_steps', 'rewritten_rules'])
    assert values['rewrite_outcome'] == 'success'
    assert values['unfold_steps'] == 1
    assert values['rewritten_rules'] > 0

    assert mh.values(load('p2.dl'), 'unfold_steps')['unfold_steps'] == 0


def test_survey_files():
    names = ['p1.dl', 'p2.dl', 'p4.dl']
    programs = [load(n) for n in names]

    mh = wr.metrics.create()
    summary = mh.compute_many(programs, metrics=wr.metrics.survey_metrics, names=names)

    print()
    print(wr.io.render_summary(summary, namemap=wr.io.survey_metric_names, formatters=mh.formatters))

    assert summary.index.tolist() == names
    assert summary.columns.values.tolist() == wr.metrics.survey_metrics
    expected = pd.DataFrame([
        [3, 1, 4, 2, 2, 0.5],
        [1, 0, 2, 3, 0, 1.0],
    ], index=names[:2], columns=wr.metrics.survey_metrics[:6])
    np.testing.assert_allclose(summary.iloc[:2, :6].astype(float), expected.astype(float))
    assert summary['rewrite_outcome'].tolist() == ['success', 'success', 'success']


def test_list_metrics():
    mh = wr.metrics.create()
    df = mh.list_metrics()
    assert df.columns.values.tolist() == ['Name', 'Description', 'Dependencies']
    assert df.set_index('Name').loc['datalog_ratio', 'Dependencies'] == 'num_predicates, num_disjunctive'
    lines = mh.list_metrics_markdown().splitlines()
    assert lines[0] == '| Name | Description | Dependencies |'
    assert lines[1] == '| :--- | :--- | :--- |'
    assert len(lines) == len(mh.names) + 2
    assert '| num_rules | Number of rules, system rules excluded. |  |' in lines
