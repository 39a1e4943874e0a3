"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Random programs, dataset enumeration and bounded equivalence checks of
rewritings.
"""

from collections import namedtuple, OrderedDict
from itertools import count, combinations, product
import logging
import time

import numpy as np
import pandas as pd
from scipy.special import comb

from wlrewrite.model import (Atom, Rule, Predicate, Var, Const, Dataset, Renaming, BOT,
                             validate_program)
from wlrewrite.analysis import is_linear, is_wl
from wlrewrite import engine, oracle
from wlrewrite.errors import FilterStarvation, ResourceCapExceeded

logger = logging.getLogger(__name__)


class GenConfig(namedtuple('GenConfig', ['num_predicates', 'max_arity', 'num_rules', 'max_body',
                                         'disjunctive_prob', 'bot_prob', 'num_constants', 'seed'])):
    """Parameters of `random_program`; derive variants with `_replace`."""
    __slots__ = ()

    def __new__(cls, num_predicates=4, max_arity=2, num_rules=6, max_body=3,
                disjunctive_prob=0.3, bot_prob=0.1, num_constants=3, seed=0):
        assert num_predicates > 0 and max_arity > 0 and num_rules > 0 and max_body > 0, \
            'Generation bounds must be positive'
        return super(GenConfig, cls).__new__(cls, num_predicates, max_arity, num_rules, max_body,
                                             disjunctive_prob, bot_prob, num_constants, seed)


FILTERS = OrderedDict([
    ('datalog', lambda p: p.is_datalog()),
    ('linear', lambda p: bool(is_linear(p))),
    ('wl', lambda p: bool(is_wl(p))),
])


def _random_rule(rng, cfg, preds, i):
    nbody = rng.randint(1, cfg.max_body + 1)
    pool = [Var('X{}'.format(k)) for k in range(cfg.max_body * cfg.max_arity)]
    body = []
    for _ in range(nbody):
        q = preds[rng.randint(len(preds))]
        body.append(Atom(q, [pool[rng.randint(len(pool))] for _ in range(q.arity)]))
    bound = sorted(set(t for a in body for t in a.args))

    if rng.rand() < cfg.bot_prob:
        return Rule('r{}'.format(i + 1), body, [Atom(BOT)])
    nhead = 2 if rng.rand() < cfg.disjunctive_prob else 1
    head = []
    for _ in range(nhead):
        q = preds[rng.randint(len(preds))]
        if q.arity > 0 and not bound:
            continue
        head.append(Atom(q, [bound[rng.randint(len(bound))] for _ in range(q.arity)]))
    return Rule('r{}'.format(i + 1), body, head or [Atom(BOT)])


def random_program(cfg, filter=None, max_attempts=1000):
    """Generate a random safe program.

    The result is a pure function of `cfg`. With a filter, programs are drawn
    until one passes.

    Params
    ------
    cfg : GenConfig

    Kwargs
    ------
    filter : str, optional
        One of `'datalog'`, `'linear'`, `'wl'`.
    max_attempts : int, optional
        Draws before giving up.

    Returns
    -------
    Program

    Raises
    ------
    FilterStarvation
    """
    accept = FILTERS[filter] if filter else (lambda p: True)
    if filter == 'datalog':
        cfg = cfg._replace(disjunctive_prob=0.)
    rng = np.random.RandomState(cfg.seed)
    names = ['p{}'.format(k) for k in range(cfg.num_predicates)]
    for _ in range(max_attempts):
        preds = [Predicate(n, rng.randint(1, cfg.max_arity + 1)) for n in names]
        p = validate_program([_random_rule(rng, cfg, preds, i) for i in range(cfg.num_rules)])
        if accept(p):
            return p
    raise FilterStarvation('No program passed filter {} in {} attempts'.format(filter, max_attempts))


def dataset_constants(sig, max_constants):
    """The first `max_constants` constants of a signature, padded with fresh ones."""
    consts = sorted(sig.constants)[:max_constants]
    k = count()
    while len(consts) < max_constants:
        c = 'c{}'.format(next(k))
        if c not in sig.constants:
            consts.append(c)
    return consts


def candidate_facts(sig, max_constants):
    """All ground facts over the user predicates of a signature."""
    consts = dataset_constants(sig, max_constants)
    facts = []
    for q in sorted(sig.user_predicates):
        for tup in product(consts, repeat=q.arity):
            facts.append(Atom(q, [Const(c) for c in tup]))
    return facts


def dataset_count(sig, max_facts, max_constants):
    """Number of datasets `enumerate_datasets` yields for the same bounds."""
    n = len(candidate_facts(sig, max_constants))
    return sum(comb(n, k, exact=True) for k in range(min(n, max_facts) + 1))


def enumerate_datasets(sig, max_facts, max_constants):
    """Yield every dataset of at most `max_facts` facts over `max_constants` constants.

    Facts range over every user predicate of the signature, IDB ones
    included; datasets come in order of size.
    """
    facts = candidate_facts(sig, max_constants)
    for k in range(min(len(facts), max_facts) + 1):
        for subset in combinations(facts, k):
            yield Dataset(subset)


def sample_datasets(sig, max_facts, max_constants, samples, seed=0):
    """Yield `samples` random datasets within the bounds."""
    facts = candidate_facts(sig, max_constants)
    rng = np.random.RandomState(seed)
    for _ in range(samples):
        k = rng.randint(0, min(len(facts), max_facts) + 1)
        idx = rng.choice(len(facts), k, replace=False) if k else []
        yield Dataset([facts[i] for i in idx])


class Counterexample(namedtuple('Counterexample', ['dataset', 'missing', 'extra'])):
    """A dataset on which a rewriting disagrees with its source.

    `missing` holds facts (renamed) the source entails and the rewriting does
    not, `extra` the converse.
    """
    __slots__ = ()

    @property
    def fact(self):
        return sorted(self.missing | self.extra)[0]


class EquivAccumulator(object):
    """Collect per-dataset comparison events.

    Events are kept in a DataFrame indexed by (`Dataset`, `Event`) with columns
        - `Type` one of `('MATCH', 'MISMATCH', 'SKIP')`
        - `Facts` the dataset
        - `Missing`, `Extra` the differing facts of a mismatch
        - `Seconds` time spent on the dataset
    """

    TYPES = ['MATCH', 'MISMATCH', 'SKIP']

    def __init__(self):
        self.reset()

    def reset(self):
        self._events = []
        self._indices = []
        self.dirty_events = True
        self.cached_events_df = None

    def update(self, dataset, kind, missing=(), extra=(), seconds=0.):
        assert kind in EquivAccumulator.TYPES, 'Unknown event type {}'.format(kind)
        self.dirty_events = True
        did = self._indices[-1][0] + 1 if self._indices else 0
        self._indices.append((did, 0))
        self._events.append([kind, ' '.join('{}.'.format(f) for f in dataset),
                             ' '.join(str(f) for f in sorted(missing)),
                             ' '.join(str(f) for f in sorted(extra)), seconds])
        return did

    @property
    def events(self):
        if self.dirty_events:
            self.cached_events_df = EquivAccumulator.new_event_dataframe_with_data(self._indices, self._events)
            self.dirty_events = False
        return self.cached_events_df

    @staticmethod
    def new_event_dataframe_with_data(indices, events):
        tevents = list(zip(*events)) or [[] for _ in range(5)]
        series = [
            pd.Series(pd.Categorical(tevents[0], categories=EquivAccumulator.TYPES), name='Type'),
            pd.Series(tevents[1], dtype=object, name='Facts'),
            pd.Series(tevents[2], dtype=object, name='Missing'),
            pd.Series(tevents[3], dtype=object, name='Extra'),
            pd.Series(tevents[4], dtype=float, name='Seconds'),
        ]
        df = pd.concat(series, axis=1)
        df.index = pd.MultiIndex.from_tuples(indices, names=['Dataset', 'Event']) if indices else \
            pd.MultiIndex.from_arrays([[], []], names=['Dataset', 'Event'])
        return df


EquivReport = namedtuple('EquivReport', ['passed', 'datasets_tested', 'skipped', 'counterexample', 'elapsed', 'events'])
"""Outcome of `check_rewriting`; `events` is the DataFrame of an EquivAccumulator."""


def _evaluator(kind, max_clauses=None, max_atoms=None):
    def run(p, d):
        if kind == 'engine' or (kind == 'auto' and p.is_datalog()):
            return engine.evaluate(p, d)
        return oracle.cautious_eval(p, d, max_clauses=max_clauses, max_atoms=max_atoms)
    assert kind in ('auto', 'engine', 'oracle'), 'Unknown evaluator {}'.format(kind)
    return run


def compare(p, q, d, theta, s, evaluate):
    """Differences between eval(p, d) restricted to s, renamed, and eval(q, d) restricted to s renamed.

    Returns
    -------
    Counterexample or None
    """
    left = frozenset(theta.apply(f) for f in evaluate(p, d).restrict(s))
    right = evaluate(q, d).restrict(theta.apply_set(s))
    if left == right:
        return None
    return Counterexample(d, left - right, right - left)


def check_rewriting(p, q, theta=None, s=None, exhaustive=True, max_facts=3, max_constants=2,
                    samples=100, seed=0, evaluator='auto', max_clauses=None, max_atoms=None):
    """Bounded test that q is a rewriting of p w.r.t. s under theta.

    Bot is always compared; top facts never are. Stops at the first
    counterexample. Datasets whose evaluation exceeds the oracle caps are
    skipped and counted.

    Params
    ------
    p : Program
        Source program; datasets range over its signature.
    q : Program
        Candidate rewriting.

    Kwargs
    ------
    theta : Renaming, optional
        Defaults to the identity.
    s : set of Predicate, optional
        Defaults to the predicates of p.
    exhaustive : bool, optional
        Enumerate every dataset within the bounds, or draw `samples` random ones.
    max_facts, max_constants : int, optional
        Dataset bounds.
    evaluator : str, optional
        `'engine'`, `'oracle'` or `'auto'` (engine for datalog programs).

    Returns
    -------
    EquivReport
    """
    theta = Renaming() if theta is None else theta
    s = set(q_ for q_ in p.predicates() if not q_.is_builtin) if s is None else set(s)
    s.add(BOT)
    evaluate = _evaluator(evaluator, max_clauses, max_atoms)
    sig = p.signature()
    if exhaustive:
        datasets = enumerate_datasets(sig, max_facts, max_constants)
    else:
        datasets = sample_datasets(sig, max_facts, max_constants, samples, seed)

    acc = EquivAccumulator()
    start = time.time()
    tested, skipped, cex = 0, 0, None
    for d in datasets:
        t0 = time.time()
        try:
            cex = compare(p, q, d, theta, s, evaluate)
        except ResourceCapExceeded as e:
            logger.warning('Skipping dataset {}: {}'.format(d, e))
            acc.update(d, 'SKIP', seconds=time.time() - t0)
            skipped += 1
            continue
        tested += 1
        if cex is None:
            acc.update(d, 'MATCH', seconds=time.time() - t0)
            continue
        acc.update(d, 'MISMATCH', cex.missing, cex.extra, time.time() - t0)
        logger.info('Counterexample on {}: {}'.format(d, cex.fact))
        break

    elapsed = time.time() - start
    logger.info('Checked {} datasets ({} skipped) in {:.2f}s'.format(tested, skipped, elapsed))
    return EquivReport(cex is None, tested, skipped, cex, elapsed, acc.events)


def replay(report, p, q, theta=None, s=None, evaluator='auto'):
    """Recompute the counterexample of a report; None if the report passed."""
    if report.counterexample is None:
        return None
    theta = Renaming() if theta is None else theta
    s = set(q_ for q_ in p.predicates() if not q_.is_builtin) if s is None else set(s)
    s.add(BOT)
    return compare(p, q, report.counterexample.dataset, theta, s, _evaluator(evaluator))
