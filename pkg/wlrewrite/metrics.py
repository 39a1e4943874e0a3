"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Named statistics over programs.

A statistic is a function of a program. Any further parameters name other
statistics it is computed from, so `datalog_ratio(p, num_predicates,
num_disjunctive)` is evaluated after the two counts and reuses them.
"""

from __future__ import division
from collections import namedtuple, OrderedDict
import inspect

import numpy as np
import pandas as pd

from wlrewrite.model import idb_predicates
from wlrewrite import analysis, unfold


class Metric(namedtuple('Metric', ['name', 'fnc', 'deps', 'help', 'formatter'])):
    """A registered statistic; `deps` are the names of the statistics it reads."""
    __slots__ = ()


class MetricsHost(object):
    """Registry of program statistics, evaluated on demand with shared intermediates."""

    def __init__(self):
        self.metrics = OrderedDict()

    def register(self, fnc, name=None, formatter=None):
        """Register `fnc(p, dep1, dep2, ...)` under `name` (default: its function name).

        The docstring, folded onto one line, becomes the description.
        """
        name = name or fnc.__name__
        deps = list(inspect.signature(fnc).parameters)[1:]
        helpstr = ' '.join((inspect.getdoc(fnc) or '').split())
        self.metrics[name] = Metric(name, fnc, deps, helpstr, formatter)

    @property
    def names(self):
        return list(self.metrics)

    @property
    def formatters(self):
        """Formatters by metric name, for `io.render_summary`."""
        return dict((m.name, m.formatter) for m in self.metrics.values() if m.formatter is not None)

    def values(self, p, metrics=None):
        """Evaluate metrics of p with their dependencies.

        Returns
        -------
        OrderedDict
            Every statistic that had to be evaluated, in evaluation order.
        """
        metrics = self.names if metrics is None else metrics
        if isinstance(metrics, str):
            metrics = [metrics]
        done = OrderedDict()
        for name in metrics:
            self._evaluate(p, name, done, ())
        return done

    def _evaluate(self, p, name, done, path):
        if name in done:
            return done[name]
        if name not in self.metrics:
            raise KeyError('Unknown metric {}{}'.format(name, ' needed by ' + path[-1] if path else ''))
        assert name not in path, 'Metric {} depends on itself'.format(name)
        m = self.metrics[name]
        args = [self._evaluate(p, dep, done, path + (name,)) for dep in m.deps]
        done[name] = m.fnc(p, *args)
        return done[name]

    def compute(self, p, metrics=None, name=0):
        """One-row DataFrame of the requested metrics of p, indexed by `name`."""
        metrics = self.names if metrics is None else metrics
        if isinstance(metrics, str):
            metrics = [metrics]
        values = self.values(p, metrics)
        return pd.DataFrame([[values[m] for m in metrics]], index=[name], columns=metrics)

    def compute_many(self, programs, metrics=None, names=None):
        """One row per program; rows are named by `names` or numbered."""
        names = range(len(programs)) if names is None else names
        assert len(names) == len(programs), 'Need one name per program'
        return pd.concat([self.compute(p, metrics, name) for p, name in zip(programs, names)])

    def list_metrics(self):
        """DataFrame with name, description and dependencies of every metric."""
        return pd.DataFrame([(m.name, m.help, ', '.join(m.deps)) for m in self.metrics.values()],
                            columns=['Name', 'Description', 'Dependencies'])

    def list_metrics_markdown(self):
        """`list_metrics` as a markdown table."""
        df = self.list_metrics()
        lines = ['| ' + ' | '.join(df.columns) + ' |', '|' + ' :--- |' * len(df.columns)]
        for row in df.itertuples(index=False):
            lines.append('| ' + ' | '.join(row) + ' |')
        return '\n'.join(lines)


def num_rules(p):
    """Number of rules, system rules excluded."""
    return len(p.user_rules)


def num_disjunctive_rules(p):
    """Number of rules with more than one head atom."""
    return sum(1 for r in p.user_rules if r.is_disjunctive)


def predicates(p):
    """Predicates other than builtins."""
    return set(q for q in p.predicates() if not q.is_builtin)


def num_predicates(p, predicates):
    return len(predicates)


def max_arity(p, predicates):
    """Largest arity of a predicate."""
    return max([q.arity for q in predicates] or [0])


def idb(p):
    """Predicates occurring in rule heads, builtins excluded."""
    return set(q for q in idb_predicates(p) if not q.is_builtin)


def num_idb(p, idb):
    return len(idb)


def classification(p):
    return analysis.classify_predicates(p)


def disjunctive_predicates(p, classification):
    return set(q for q in classification.disjunctive if not q.is_builtin)


def num_disjunctive(p, disjunctive_predicates):
    """Number of disjunctive predicates."""
    return len(disjunctive_predicates)


def datalog_ratio(p, num_predicates, num_disjunctive):
    """Share of predicates that are datalog."""
    if num_predicates == 0:
        return 1.
    return (num_predicates - num_disjunctive) / num_predicates


def linear(p):
    """At most one IDB body atom per rule."""
    return bool(analysis.is_linear(p))


def weakly_linear(p, classification):
    """At most one disjunctive body atom per rule."""
    return bool(analysis.is_wl(p, classification))


def is_datalog(p):
    """No rule has more than one head atom."""
    return p.is_datalog()


def category(p, is_datalog, linear, weakly_linear):
    """First of datalog, linear, wl and non-wl that applies."""
    if is_datalog:
        return 'datalog'
    if linear:
        return 'linear'
    if weakly_linear:
        return 'wl'
    return 'non-wl'


def rewrite_trace(p):
    return unfold.rewrite(p)[1]


def rewrite_outcome(p, rewrite_trace):
    """Outcome of rewriting by unfolding."""
    return rewrite_trace.outcome


def unfold_steps(p, rewrite_trace):
    """Unfolding steps taken while rewriting."""
    return len(rewrite_trace.steps)


def rewritten_rules(p, rewrite_trace):
    """Size of the datalog rewriting, NaN when rewriting failed."""
    if not rewrite_trace.success:
        return np.nan
    return len(rewrite_trace.output.program)


def create():
    """Creates a MetricsHost and populates it with default metrics."""
    m = MetricsHost()

    m.register(num_rules, formatter='{:d}'.format)
    m.register(num_disjunctive_rules, formatter='{:d}'.format)
    m.register(predicates)
    m.register(num_predicates, formatter='{:d}'.format)
    m.register(max_arity, formatter='{:d}'.format)
    m.register(idb)
    m.register(num_idb, formatter='{:d}'.format)
    m.register(classification)
    m.register(disjunctive_predicates)
    m.register(num_disjunctive, formatter='{:d}'.format)
    m.register(datalog_ratio, formatter='{:.1%}'.format)
    m.register(linear)
    m.register(weakly_linear)
    m.register(is_datalog)
    m.register(category)

    m.register(rewrite_trace)
    m.register(rewrite_outcome)
    m.register(unfold_steps, formatter='{:d}'.format)
    m.register(rewritten_rules, formatter='{:.0f}'.format)

    return m


survey_metrics = [
    'num_rules',
    'num_disjunctive_rules',
    'num_predicates',
    'max_arity',
    'num_disjunctive',
    'datalog_ratio',
    'category',
    'rewrite_outcome',
    'unfold_steps',
    'rewritten_rules',
]
"""Metrics reported by the survey command."""
