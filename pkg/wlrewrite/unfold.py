"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Unification, unfolding and the unfolding-based rewriting driver.

Rewriting proceeds on the IDB expansion of a program: while some rule has
more than one disjunctive body atom, one such atom is unfolded, replacing the
rule by its resolvents with every rule whose head mentions the atom's
predicate. Once the program is weakly linear its datalog rewriting is
returned. The driver is incomplete by nature; failure carries no information
about rewritability.
"""

from collections import namedtuple, OrderedDict
from contextlib import contextmanager
import itertools
import json
import logging
import pandas as pd

from wlrewrite.model import Rule, Program, Var, idb_predicates, idb_expansion
from wlrewrite.analysis import classify_predicates, is_wl
from wlrewrite.xi import xi_prime
from wlrewrite.errors import NotUnifiable, AtomNotInRule, AtomNotIDB, UnfoldError

logger = logging.getLogger(__name__)

default_max_steps = 1000
"""Unfolding steps before `rewrite` gives up."""

default_rule_factor = 10
"""`rewrite` gives up once a program grows beyond this many times the size of the IDB expansion."""


class Substitution(object):
    """Idempotent mapping from variables to terms."""

    def __init__(self, mapping=None):
        self.map = dict(mapping or {})

    def __call__(self, term):
        if term.is_var:
            return self.map.get(term, term)
        return term

    def __len__(self):
        return len(self.map)

    def __contains__(self, var):
        return var in self.map

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.map == other.map

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '{{{}}}'.format(', '.join('{}->{}'.format(k, v) for k, v in self.items()))

    def items(self):
        return sorted(self.map.items())

    def atom(self, a):
        return a.substitute(self.map)

    def rule(self, r, id=None):
        return r.substitute(self.map, id)

    def compose(self, other):
        """Substitution applying self first, then other."""
        out = dict((v, other(t)) for v, t in self.map.items())
        for v, t in other.map.items():
            out.setdefault(v, t)
        return Substitution(dict((v, t) for v, t in out.items() if v != t))

    def is_idempotent(self):
        return all(not t.is_var or t not in self.map for t in self.map.values())


def mgu(a, b):
    """Most general unifier of two function-free atoms, or None.

    Variables of `a` are bound to terms of `b` whenever both are variables,
    which makes the representative deterministic.
    """
    if a.predicate != b.predicate:
        return None
    m = {}

    def walk(t):
        while t.is_var and t in m:
            t = m[t]
        return t

    for s, t in zip(a.args, b.args):
        s, t = walk(s), walk(t)
        if s == t:
            continue
        if s.is_var:
            m[s] = t
        elif t.is_var:
            m[t] = s
        else:
            return None
    return Substitution(dict((v, walk(v)) for v in m))


class _Fresh(object):
    """Renames rules apart from a fixed set of variables."""

    def __init__(self, avoid):
        self.avoid = set(v.name for v in avoid)
        self.counter = itertools.count()

    def var(self):
        while True:
            name = 'U{}'.format(next(self.counter))
            if name not in self.avoid:
                return Var(name)

    def apart(self, rule, atoms=()):
        mapping = dict((v, self.var()) for v in rule.variables())
        return rule.substitute(mapping), [a.substitute(mapping) for a in atoms]


def _resolve(r, alpha, s, beta, theta, id):
    body = [a for a in r.body if a != alpha] + list(s.body)
    head = list(r.head) + [b for b in s.head if b != beta]
    return Rule(id, [theta.atom(a) for a in body], [theta.atom(a) for a in head])


def elem_unfold(r, alpha, s, beta, id=None):
    """Resolve the body atom `alpha` of r with the head atom `beta` of s.

    Params
    ------
    r : Rule
    alpha : Atom
        Body atom of r.
    s : Rule
        Rule sharing no variables with r.
    beta : Atom
        Head atom of s.

    Returns
    -------
    (Rule, Substitution)
        The resolvent, with duplicate atoms collapsed, and the unifier used.

    Raises
    ------
    NotUnifiable
    """
    if alpha not in r.body:
        raise AtomNotInRule('{} is not a body atom of rule {}'.format(alpha, r.id))
    assert beta in s.head, '{} is not a head atom of rule {}'.format(beta, s.id)
    assert not set(r.variables()) & set(s.variables()), \
        'Rules {} and {} are not standardised apart'.format(r.id, s.id)
    theta = mgu(alpha, beta)
    if theta is None:
        raise NotUnifiable('{} does not unify with {}'.format(alpha, beta))
    return _resolve(r, alpha, s, beta, theta, r.id if id is None else id), theta


def _canonical_program(rules):
    seen = set()
    out = []
    for r in rules:
        key = r.canonical()
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def unfold(p, r, alpha):
    """Replace rule r by all its unfoldings at the body atom alpha.

    Each round resolves r at alpha with one tracked head atom of every pending
    rule; the remaining head atoms of that rule that unified with alpha are
    carried over to the resolvent and resolved in the next round. All
    resolvents of all rounds are kept, the fully resolved ones included.

    Params
    ------
    p : Program
    r : Rule
        A rule of p.
    alpha : Atom
        An IDB body atom of r.

    Returns
    -------
    Program
        `(p - {r}) + resolvents`, duplicates removed; resolvents of r are
        numbered `<r.id>/u1, <r.id>/u2, ...`.

    Raises
    ------
    AtomNotInRule
    AtomNotIDB
    """
    if r not in p.rules:
        raise UnfoldError('Rule {} is not part of the program'.format(r.id))
    if alpha not in r.body:
        raise AtomNotInRule('{} is not a body atom of rule {}'.format(alpha, r.id))
    if alpha.predicate not in idb_predicates(p):
        raise AtomNotIDB('{} is not an IDB atom'.format(alpha))

    fresh = _Fresh(r.variables())
    level = []
    for s in p:
        if s.origin == Rule.TOP:
            continue
        s, head = fresh.apart(s, s.head)
        tracked = [b for b in head if mgu(alpha, b) is not None]
        if tracked:
            level.append((s, tracked))

    produced = []
    ids = itertools.count(1)
    while level:
        following = []
        for s, tracked in level:
            for beta in tracked:
                theta = mgu(alpha, beta)
                if theta is None:
                    continue
                resolvent = _resolve(r, alpha, s, beta, theta, '{}/u{}'.format(r.id, next(ids)))
                produced.append(resolvent)
                rest = [theta.atom(b) for b in tracked if b != beta]
                if rest:
                    renamed, rest = fresh.apart(resolvent, rest)
                    following.append((renamed, rest))
        level = following

    rules = _canonical_program([q for q in p if q != r and q.origin != Rule.TOP] + produced)
    logger.debug('Unfolded {} at {}: {} resolvents'.format(r.id, alpha, len(produced)))
    return Program(rules, Program.DERIVED)


def select_first(p, offenders, classification):
    """First offending rule, first of its disjunctive body atoms."""
    rid, atoms = offenders[0]
    return p.rule(rid), atoms[0]


def select_fewest_defs(p, offenders, classification):
    """First offending rule; the disjunctive atom whose predicate heads the fewest rules."""
    rid, atoms = offenders[0]
    defs = dict((q, 0) for q in set(a.predicate for a in atoms))
    for r in p:
        for q in set(a.predicate for a in r.head):
            if q in defs:
                defs[q] += 1
    best = min(range(len(atoms)), key=lambda i: (defs[atoms[i].predicate], i))
    return p.rule(rid), atoms[best]


def init_standard_strategies():
    global available_strategies, default_strategy, strategy_map

    strategies = [
        ('fewest-defs', select_fewest_defs),
        ('first', select_first),
    ]
    strategy_map = OrderedDict(strategies)
    available_strategies = [s[0] for s in strategies]
    default_strategy = available_strategies[0]


init_standard_strategies()


@contextmanager
def set_default_strategy(newstrategy):
    """Change the default selection strategy within context.

        with unfold.set_default_strategy('first'):
            program, trace = unfold.rewrite(p)

    Params
    ------
    newstrategy : callable or str
        Strategy name or a callable `(program, offenders, classification) -> (rule, atom)`.
    """
    global default_strategy

    old = default_strategy
    try:
        default_strategy = newstrategy
        yield
    finally:
        default_strategy = old


def _resolve_strategy(strategy):
    strategy = strategy or default_strategy
    name = strategy if isinstance(strategy, str) else getattr(strategy, '__name__', 'custom')
    if isinstance(strategy, str):
        strategy = strategy_map.get(strategy, None)
    assert callable(strategy), 'Invalid selection strategy.'
    return name, strategy


UnfoldStep = namedtuple('UnfoldStep', ['step', 'rule', 'atom', 'produced', 'size'])
"""One unfolding: the rule and atom selected, ids of the rules produced and the resulting program size."""


class RewriteTrace(object):
    """Record of a `rewrite` run.

    `outcome` is `'success'`, `'step-limit'` or `'blow-up'`. On success
    `wl_program` holds the weakly linear program handed to the datalog
    rewriting and `output` its RewriteOutput.
    """

    SUCCESS = 'success'
    STEP_LIMIT = 'step-limit'
    BLOW_UP = 'blow-up'

    def __init__(self, strategy, renaming):
        self.strategy = strategy
        self.renaming = renaming
        self.steps = []
        self.outcome = None
        self.wl_program = None
        self.output = None

    @property
    def success(self):
        return self.outcome == RewriteTrace.SUCCESS

    def __len__(self):
        return len(self.steps)

    def frame(self):
        rows = [(s.step, s.rule, str(s.atom), ' '.join(s.produced), s.size) for s in self.steps]
        df = pd.DataFrame(rows, columns=['Step', 'Rule', 'Atom', 'Produced', 'Size'])
        return df.set_index('Step')

    def to_dict(self):
        return OrderedDict([
            ('outcome', self.outcome),
            ('strategy', self.strategy),
            ('unfoldings', len(self.steps)),
            ('renaming', OrderedDict((k.name, v.name) for k, v in self.renaming.items())),
            ('steps', [OrderedDict([('rule', s.rule), ('atom', str(s.atom)),
                                    ('produced', list(s.produced)), ('size', s.size)]) for s in self.steps]),
        ])

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def rewrite(p, max_steps=None, strategy=None, max_rules=None):
    """Try to rewrite a disjunctive program into datalog by unfolding.

    Params
    ------
    p : Program

    Kwargs
    ------
    max_steps : int, optional
        Unfolding steps before giving up. Defaults to `default_max_steps`.
    strategy : str or callable, optional
        Selection strategy. Defaults to `default_strategy`.
    max_rules : int, optional
        Program size before giving up. Defaults to `default_rule_factor`
        times the size of the IDB expansion.

    Returns
    -------
    (Program or None, RewriteTrace)
        The datalog rewriting over the primed predicates of the expansion
        (see `trace.renaming`), or None if a limit was hit.
    """
    max_steps = default_max_steps if max_steps is None else max_steps
    name, select = _resolve_strategy(strategy)
    current, theta = idb_expansion(p.with_equality())
    max_rules = max_rules or default_rule_factor * max(len(current), 1)
    trace = RewriteTrace(name, theta)

    while True:
        c = classify_predicates(current)
        check = is_wl(current, c)
        if check:
            trace.outcome = RewriteTrace.SUCCESS
            trace.wl_program = current
            trace.output = xi_prime(current, c)
            logger.info('Rewriting succeeded after {} unfoldings'.format(len(trace.steps)))
            return trace.output.program, trace
        if len(trace.steps) >= max_steps:
            trace.outcome = RewriteTrace.STEP_LIMIT
            logger.info('Rewriting stopped after {} unfoldings'.format(max_steps))
            return None, trace
        r, alpha = select(current, check.offenders, c)
        before = set(q.id for q in current)
        current = unfold(current, r, alpha)
        produced = sorted(q.id for q in current if q.id not in before)
        trace.steps.append(UnfoldStep(len(trace.steps) + 1, r.id, alpha, produced, len(current)))
        logger.debug('Step {}: unfolded {} at {}, {} rules'.format(len(trace.steps), r.id, alpha, len(current)))
        if len(current) > max_rules:
            trace.outcome = RewriteTrace.BLOW_UP
            logger.info('Rewriting stopped, program grew to {} rules'.format(len(current)))
            return None, trace
