"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Datalog rewritings of linear and weakly linear disjunctive programs.

Both rewritings introduce, for every pair (P, R) of predicates in a set
Sigma, an auxiliary predicate P^R whose facts P^R(s, y) read "proving P(s)
suffices to prove R(y)". Every rule mentioning Sigma is flipped: atoms over
Sigma move from head to body and vice versa while being replaced by their
auxiliary counterparts.
"""

from collections import namedtuple, OrderedDict
import itertools
import pandas as pd

from wlrewrite.model import Atom, Rule, Program, Predicate, Var, TOP, BOT, EQ, idb_predicates
from wlrewrite.analysis import classify_predicates, is_linear, is_wl
from wlrewrite.errors import NotLinear, NotWL, UnknownPredicateError


EQ_BASE = 'eq^{=}'
"""Printed base of equality in auxiliary names; marked so no user predicate can take it."""


class AuxPredicate(namedtuple('AuxPredicate', ['base', 'goal'])):
    """Auxiliary predicate P^Q for a base predicate P and a goal Q.

    The printed name `P^{Q}` cannot be written in user programs.
    """
    __slots__ = ()

    @property
    def name(self):
        base = EQ_BASE if self.base == EQ else self.base.name
        return '{}^{{{}}}'.format(base, self.goal.name)

    @property
    def arity(self):
        return self.base.arity + self.goal.arity

    @property
    def predicate(self):
        return Predicate(self.name, self.arity)


class RewriteOutput(namedtuple('RewriteOutput', ['program', 'sigma', 'aux', 'provenance', 'source'])):
    """Result of a datalog rewriting.

    `provenance` maps output rule ids to `(source_rule_id, case)`, where case
    is 1 (initialisation), 2 (flip of a rule with a body atom over Sigma),
    3 (flip of a rule without one), 4 (collection) or `'verbatim'`.
    """
    __slots__ = ()

    def aux_of(self, pred):
        """The AuxPredicate behind a predicate of the output, or None."""
        for a in self.aux:
            if a.predicate == pred:
                return a
        return None

    def provenance_frame(self):
        rows = [(rid, src, str(case)) for rid, (src, case) in self.provenance.items()]
        df = pd.DataFrame(rows, columns=['Rule', 'Source', 'Case'])
        return df.set_index('Rule')


def _goal_vars(pred, prefix):
    return [Var('{}{}'.format(prefix, i)) for i in range(pred.arity)]


def _aux_atom(atom, goal, ys, aux):
    a = AuxPredicate(atom.predicate, goal)
    aux.add(a)
    return Atom(a.predicate, list(atom.args) + ys)


def _make_safe(body, head):
    """Add top(v) for every head variable missing from the body."""
    bound = set(t for a in body for t in a.args if t.is_var)
    missing = OrderedDict()
    for a in head:
        for t in a.args:
            if t.is_var and t not in bound:
                missing[t] = None
    return [Atom(TOP, [v]) for v in missing] + list(body)


class _Rewriter(object):

    def __init__(self, sigma):
        self.sigma = sorted(sigma)
        self.aux = set()
        self.rules = []
        self.provenance = OrderedDict()

    def emit(self, rid, body, head, source, case, origin=Rule.USER):
        self.rules.append(Rule(rid, _make_safe(body, head), head, origin))
        self.provenance[rid] = (source, case)

    def initialise(self):
        for r in self.sigma:
            ys = _goal_vars(r, 'Y')
            self.emit('init:{}'.format(r.name), [], [_aux_atom(Atom(r, ys), r, ys, self.aux)], None, 1)

    def flip(self, rule):
        """Cases 2 and 3 for one rule and every goal in Sigma."""
        sig = set(self.sigma)
        chi = [a for a in rule.body if a.predicate not in sig]
        inner = [a for a in rule.body if a.predicate in sig]
        assert len(inner) <= 1, 'Rule {} has several body atoms over Sigma'.format(rule.id)
        assert all(a.predicate in sig for a in rule.head), 'Rule {} has heads outside Sigma'.format(rule.id)
        for r in self.sigma:
            ys = _goal_vars(r, 'Y')
            flipped = [_aux_atom(a, r, ys, self.aux) for a in rule.head]
            if inner:
                head = [_aux_atom(inner[0], r, ys, self.aux)]
                self.emit('{}:{}'.format(rule.id, r.name), chi + flipped, head, rule.id, 2)
            else:
                self.emit('{}:{}'.format(rule.id, r.name), chi + flipped, [Atom(r, ys)], rule.id, 3)

    def collect(self, bases):
        for q, r in itertools.product(sorted(bases), self.sigma):
            zs, ys = _goal_vars(q, 'Z'), _goal_vars(r, 'Y')
            body = [Atom(q, zs), _aux_atom(Atom(q, zs), r, ys, self.aux)]
            self.emit('collect:{}:{}'.format(q.name, r.name), body, [Atom(r, ys)], None, 4)

    def output(self, source):
        program = Program(self.rules, Program.DERIVED)
        return RewriteOutput(program, frozenset(self.sigma), frozenset(self.aux), self.provenance, source)


def _transform(p, sigma):
    rw = _Rewriter(sigma)
    rw.initialise()
    for rule in p:
        if rule.origin == Rule.TOP:
            continue
        if not rule.predicates() & sigma:
            rw.rules.append(rule)
            rw.provenance[rule.id] = (rule.id, 'verbatim')
            continue
        rw.flip(rule)
    if BOT in sigma:
        rw.flip(Rule('bot', [Atom(BOT)], []))
    rw.collect(sigma)
    return rw.output(p)


def xi(p):
    """Rewrite a linear disjunctive program into datalog.

    Sigma is the set of IDB predicates; EDB atoms of a rule stay in place and
    its (at most one) IDB body atom is flipped into the head.

    Params
    ------
    p : Program
        A linear program.

    Returns
    -------
    RewriteOutput

    Raises
    ------
    NotLinear
    """
    p = p.with_equality()
    check = is_linear(p)
    if not check:
        raise NotLinear(check.offenders)
    return _transform(p, idb_predicates(p))


def xi_prime(p, classification=None):
    """Rewrite a weakly linear program into datalog.

    Sigma is the set of disjunctive predicates; all datalog atoms of a rule,
    IDB or not, stay in place, and rules without disjunctive predicates are
    copied unchanged.

    Raises
    ------
    NotWL
    """
    p = p.with_equality()
    c = classify_predicates(p) if classification is None else classification
    check = is_wl(p, c)
    if not check:
        raise NotWL(check.offenders)
    return _transform(p, set(c.disjunctive))


def prune_for_goals(out, goals):
    """Drop every rule mentioning an auxiliary predicate X^R with R outside `goals`.

    Bot is always kept as a goal. The result is a rewriting of the source
    program with respect to `goals`.

    Raises
    ------
    UnknownPredicateError
        If a goal does not occur in the source program.
    """
    known = out.source.predicates()
    goals = set(goals)
    for q in goals:
        if q not in known:
            raise UnknownPredicateError('Predicate {} does not occur in the program'.format(q.name))
    goals.add(BOT)
    by_pred = dict((a.predicate, a) for a in out.aux)

    def keep(rule):
        for q in rule.predicates():
            a = by_pred.get(q)
            if a is not None and a.goal not in goals:
                return False
        return True

    return Program([r for r in out.program if keep(r)], Program.DERIVED)


SizeReport = namedtuple('SizeReport', ['rules', 'rule_bound', 'arity', 'arity_bound'])


def _max_arity(p):
    return max([q.arity for q in p.predicates()] or [0])


def check_size_bounds(out):
    """Assert the rule-count and arity bounds of a Xi rewriting.

    The input size counts the rules the rewriting consumed, the implicit
    `bot ->` rule included when bot is in Sigma.

    Returns
    -------
    SizeReport
    """
    p = out.source
    n = len([r for r in p if r.origin != Rule.TOP]) + (1 if BOT in out.sigma else 0)
    s = len(out.sigma)
    report = SizeReport(len(out.program), n * (s + 2) + s * s,
                        _max_arity(out.program), 2 * max(_max_arity(p), 1))
    assert report.rules <= report.rule_bound, \
        'Rewriting has {} rules, bound is {}'.format(report.rules, report.rule_bound)
    assert report.arity <= report.arity_bound, \
        'Rewriting has arity {}, bound is {}'.format(report.arity, report.arity_bound)
    return report
