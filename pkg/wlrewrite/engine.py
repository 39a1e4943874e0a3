"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Semi-naive bottom-up evaluation of datalog programs.
"""

from collections import namedtuple
import logging

from wlrewrite.model import Atom, Const, TOP, BOT
from wlrewrite.errors import NotDatalog

logger = logging.getLogger(__name__)

BOT_FACT = Atom(BOT)
"""The nullary fact standing for unsatisfiability."""


class EvalResult(namedtuple('EvalResult', ['status', 'facts', 'deltas'])):
    """Evaluation of a program over a dataset.

    `status` is `'unsat'` or `'consistent'`; `facts` is empty when unsat.
    `deltas` holds the number of new facts per iteration.
    """
    __slots__ = ()

    UNSAT = 'unsat'
    CONSISTENT = 'consistent'

    def __new__(cls, status, facts=frozenset(), deltas=()):
        if status == EvalResult.UNSAT:
            facts = frozenset()
        return super(EvalResult, cls).__new__(cls, status, frozenset(facts), tuple(deltas))

    @property
    def unsat(self):
        return self.status == EvalResult.UNSAT

    def __contains__(self, fact):
        if self.unsat:
            return True
        return fact in self.facts

    def restrict(self, predicates):
        """Facts over `predicates`, or just the bot fact when unsat. Top facts are dropped."""
        if self.unsat:
            return frozenset([BOT_FACT])
        predicates = set(predicates)
        return frozenset(f for f in self.facts if f.predicate in predicates and f.predicate.builtin != 'top')


class Entailment(namedtuple('Entailment', ['entailed', 'unsat'])):
    __slots__ = ()

    def __bool__(self):
        return bool(self.entailed)

    __nonzero__ = __bool__


class FactIndex(object):
    """Ground facts per predicate with lazily built hash indexes on bound positions.

    Facts are stored as tuples of constant names.
    """

    def __init__(self):
        self.rel = {}
        self._indexes = {}

    def __contains__(self, key):
        pred, tup = key
        return tup in self.rel.get(pred, ())

    def __len__(self):
        return sum(len(v) for v in self.rel.values())

    def predicates(self):
        return set(self.rel)

    def add(self, pred, tup):
        """Add a fact; returns False if it was present."""
        s = self.rel.setdefault(pred, set())
        if tup in s:
            return False
        s.add(tup)
        for (p, positions), idx in self._indexes.items():
            if p == pred:
                idx.setdefault(tuple(tup[i] for i in positions), []).append(tup)
        return True

    def lookup(self, pred, bound):
        """Tuples of pred agreeing with `bound`, a list of (position, constant)."""
        s = self.rel.get(pred)
        if not s:
            return ()
        if not bound:
            return s
        positions = tuple(i for i, _ in bound)
        key = (pred, positions)
        idx = self._indexes.get(key)
        if idx is None:
            idx = {}
            for tup in s:
                idx.setdefault(tuple(tup[i] for i in positions), []).append(tup)
            self._indexes[key] = idx
        return idx.get(tuple(v for _, v in bound), ())

    def atoms(self):
        return set(Atom(p, [Const(c) for c in tup]) for p, s in self.rel.items() for tup in s)


def plan_body(body, first=None):
    """Order body atoms so that each step binds as many arguments as possible.

    `first`, if given, is the position of the atom to start with. Ties keep
    the original order so plans are deterministic.
    """
    remaining = list(range(len(body)))
    order = []
    bound = set()
    if first is not None:
        remaining.remove(first)
        order.append(first)
        bound.update(body[first].variables())
    while remaining:
        def score(i):
            return sum(1 for t in body[i].args if not t.is_var or t in bound)
        best = max(remaining, key=lambda i: (score(i), -i))
        remaining.remove(best)
        order.append(best)
        bound.update(body[best].variables())
    return order


def match_body(atoms, sources, binding=None):
    """Yield variable bindings (var -> constant name) matching `atoms` in order.

    `sources[i]` is the FactIndex that atom i is matched against.
    """
    binding = {} if binding is None else binding
    if not atoms:
        yield binding
        return
    a, src = atoms[0], sources[0]
    bound = []
    for pos, t in enumerate(a.args):
        if not t.is_var:
            bound.append((pos, t.name))
        elif t in binding:
            bound.append((pos, binding[t]))
    for tup in src.lookup(a.predicate, bound):
        b = dict(binding)
        for pos, t in enumerate(a.args):
            if t.is_var:
                v = b.get(t)
                if v is None:
                    b[t] = tup[pos]
                elif v != tup[pos]:
                    break
            elif t.name != tup[pos]:
                break
        else:
            for result in match_body(atoms[1:], sources[1:], b):
                yield result


def instantiate(atom, binding):
    return tuple(binding[t] if t.is_var else t.name for t in atom.args)


def _prepare(p, d):
    if not p.is_datalog():
        raise NotDatalog([(r.id, r.head) for r in p if len(r.head) > 1])
    p = p.with_equality(d.predicates())
    full = FactIndex()
    for c in sorted(p.constants() | d.constants()):
        full.add(TOP, (c,))
    for f in d.facts:
        full.add(f.predicate, tuple(t.name for t in f.args))
    rules = [r for r in p if r.origin != 'top']
    return rules, full


def evaluate(p, d):
    """Least fixpoint of a datalog program over a dataset, computed semi-naively.

    P_top is realised by seeding top(a) for every constant of p and d; the
    congruence axioms are added when equality occurs in p or d. Evaluation
    stops as soon as bot is derived.

    Params
    ------
    p : Program
        A datalog program (at most one head atom per rule).
    d : Dataset

    Returns
    -------
    EvalResult
    """
    rules, full = _prepare(p, d)
    if (BOT, ()) in full:
        return EvalResult(EvalResult.UNSAT)

    delta = FactIndex()
    for pred, s in full.rel.items():
        for tup in s:
            delta.add(pred, tup)
    for r in rules:
        if not r.body:
            tup = instantiate(r.head[0], {})
            if full.add(r.head[0].predicate, tup):
                delta.add(r.head[0].predicate, tup)
    if (BOT, ()) in full:
        return EvalResult(EvalResult.UNSAT, deltas=[len(delta)])

    plans = {}
    for r in rules:
        for i in range(len(r.body)):
            order = plan_body(r.body, first=i)
            plans[(r.id, i)] = [r.body[j] for j in order]

    deltas = [len(delta)]
    while len(delta) > 0:
        new = FactIndex()
        active = delta.predicates()
        for r in rules:
            h = r.head[0]
            for i, a in enumerate(r.body):
                if a.predicate not in active:
                    continue
                atoms = plans[(r.id, i)]
                sources = [delta] + [full] * (len(atoms) - 1)
                for b in match_body(atoms, sources):
                    tup = instantiate(h, b)
                    if (h.predicate, tup) not in full:
                        new.add(h.predicate, tup)
        for pred, s in new.rel.items():
            for tup in s:
                full.add(pred, tup)
        deltas.append(len(new))
        logger.debug('Iteration {}: {} new facts'.format(len(deltas) - 1, len(new)))
        if (BOT, ()) in new:
            logger.debug('Derived bot, input is unsatisfiable')
            return EvalResult(EvalResult.UNSAT, deltas=deltas)
        delta = new

    return EvalResult(EvalResult.CONSISTENT, full.atoms(), deltas)


def naive_evaluate(p, d):
    """Reference evaluator re-scanning every rule against all facts until nothing changes."""
    rules, full = _prepare(p, d)
    deltas = []
    changed = True
    while changed and (BOT, ()) not in full:
        new = []
        for r in rules:
            h = r.head[0]
            for b in match_body(list(r.body), [full] * len(r.body)):
                tup = instantiate(h, b)
                if (h.predicate, tup) not in full:
                    new.append((h.predicate, tup))
        added = sum(1 for pred, tup in new if full.add(pred, tup))
        deltas.append(added)
        changed = added > 0
    if (BOT, ()) in full:
        return EvalResult(EvalResult.UNSAT, deltas=deltas)
    return EvalResult(EvalResult.CONSISTENT, full.atoms(), deltas)


def entails(p, d, fact):
    """Decide p + d |= fact for a datalog program.

    Returns
    -------
    Entailment
        Truthy iff entailed; `unsat` flags that p + d is unsatisfiable, in
        which case every fact is entailed.
    """
    result = evaluate(p, d)
    if result.unsat:
        return Entailment(True, True)
    return Entailment(fact in result.facts, False)
