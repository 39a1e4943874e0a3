"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Ground-and-search cautious entailment for disjunctive programs, and
hyperresolution derivations.

The oracle grounds a program over the constants of the program and the
dataset and decides entailment of a (disjunction of) fact(s) by checking that
the ground clauses together with the negated facts are unsatisfiable. The
propositional search is a plain DPLL procedure: unit propagation plus
chronological backtracking, no learning.
"""

from collections import namedtuple, OrderedDict, defaultdict
import itertools
import logging

from wlrewrite.model import Atom, Const, Rule, TOP, BOT, augment_top
from wlrewrite.engine import EvalResult, FactIndex, match_body, instantiate, BOT_FACT
from wlrewrite.errors import ResourceCapExceeded

logger = logging.getLogger(__name__)

default_max_clauses = 200000
"""Upper bound on ground clauses before grounding is refused."""

default_max_atoms = 5000
"""Upper bound on distinct ground atoms before grounding is refused."""

BOT_RULE = Rule('bot', [BOT_FACT], [], 'bot')
"""The implicit rule `bot ->`."""


class GroundClauseSet(object):
    """Propositional clauses over an indexed universe of ground atoms.

    Atoms are numbered from 1. Each clause is a pair `(neg, pos)` of frozensets
    of atom numbers read as `not neg_1 or ... or pos_1 or ...`.
    `instance_counts` maps rule ids to the number of ground instances produced.
    """

    def __init__(self):
        self.atoms = []
        self.index = {}
        self.clauses = []
        self.instance_counts = OrderedDict()

    def number(self, pred, tup):
        key = (pred, tup)
        n = self.index.get(key)
        if n is None:
            self.atoms.append(key)
            n = self.index[key] = len(self.atoms)
        return n

    def atom(self, n):
        pred, tup = self.atoms[n - 1]
        return Atom(pred, [Const(c) for c in tup])

    def lookup(self, fact):
        """Number of a ground Atom or None if it is not in the universe."""
        return self.index.get((fact.predicate, tuple(t.name for t in fact.args)))

    def add_clause(self, neg, pos):
        self.clauses.append((frozenset(neg), frozenset(pos)))

    def literal_clauses(self):
        return [[-n for n in sorted(neg)] + sorted(pos) for neg, pos in self.clauses]

    def __len__(self):
        return len(self.clauses)


class Solver(object):
    """DPLL over integer literals.

    Propagation follows occurrence lists of the literal that just became
    false; branching picks the first unassigned literal of the first clause
    not yet satisfied and tries `false` first, which steers the search towards
    small models of positive programs.
    """

    def __init__(self, clauses):
        self.clauses = [tuple(c) for c in clauses]
        self.occurs = defaultdict(list)
        for ci, c in enumerate(self.clauses):
            for lit in c:
                self.occurs[lit].append(ci)
        self.units = [c[0] for c in self.clauses if len(c) == 1]
        self.empty = any(len(c) == 0 for c in self.clauses)

    def _assign(self, lit, assign, trail, queue):
        v, val = abs(lit), lit > 0
        cur = assign.get(v)
        if cur is not None:
            return cur == val
        assign[v] = val
        trail.append(v)
        queue.append(lit)
        return True

    def _propagate(self, assign, trail, queue):
        while queue:
            lit = queue.pop()
            for ci in self.occurs.get(-lit, ()):
                free, nfree = None, 0
                for l in self.clauses[ci]:
                    val = assign.get(abs(l))
                    if val is None:
                        free, nfree = l, nfree + 1
                    elif val == (l > 0):
                        break
                else:
                    if nfree == 0:
                        del queue[:]
                        return False
                    if nfree == 1 and not self._assign(free, assign, trail, queue):
                        del queue[:]
                        return False
        return True

    def _pick(self, assign):
        for c in self.clauses:
            free = None
            for l in c:
                val = assign.get(abs(l))
                if val is None:
                    if free is None:
                        free = l
                elif val == (l > 0):
                    break
            else:
                if free is not None:
                    return abs(free)
        return None

    @staticmethod
    def _undo(assign, trail, size):
        while len(trail) > size:
            del assign[trail.pop()]

    def solve(self, assumptions=()):
        """Return the set of true atom numbers of some model, or None if unsatisfiable."""
        if self.empty:
            return None
        assign, trail, queue = {}, [], []
        for lit in itertools.chain(self.units, assumptions):
            if not self._assign(lit, assign, trail, queue):
                return None
        if not self._propagate(assign, trail, queue):
            return None

        stack = []
        while True:
            v = self._pick(assign)
            if v is None:
                return set(k for k, val in assign.items() if val)
            stack.append([len(trail), v, False])
            ok = self._assign(-v, assign, trail, queue) and self._propagate(assign, trail, queue)
            while not ok:
                while stack and stack[-1][2]:
                    stack.pop()
                if not stack:
                    return None
                frame = stack[-1]
                self._undo(assign, trail, frame[0])
                frame[2] = True
                ok = self._assign(frame[1], assign, trail, queue) and self._propagate(assign, trail, queue)


def _rules(p, d):
    """Rules of p outside P_top, with congruence axioms when needed."""
    return [r for r in p.with_equality(d.predicates()) if r.origin != Rule.TOP]


def _seed(p, d):
    idx = FactIndex()
    consts = sorted(p.constants() | d.constants())
    for c in consts:
        idx.add(TOP, (c,))
    for f in d.facts:
        idx.add(f.predicate, tuple(t.name for t in f.args))
    return idx, consts


def possible_facts(rules, seed, max_atoms=None):
    """Least model of the rules with every head read as a conjunction.

    Every minimal model of the disjunctive program lies inside this set.
    Raises ResourceCapExceeded as soon as it grows past `max_atoms`.
    """
    poss = FactIndex()
    for pred, s in seed.rel.items():
        for tup in s:
            poss.add(pred, tup)
    size = len(poss)
    changed = True
    while changed:
        changed = False
        for r in rules:
            for b in list(match_body(list(r.body), [poss] * len(r.body))):
                for h in r.head:
                    if poss.add(h.predicate, instantiate(h, b)):
                        changed = True
                        size += 1
                        if max_atoms and size > max_atoms:
                            raise ResourceCapExceeded('Possible facts exceeded {} atoms'.format(max_atoms))
    return poss


def relevant_instances(rules, poss):
    """Yield `(rule, binding)` for instances whose body atoms are all possible."""
    for r in rules:
        for b in match_body(list(r.body), [poss] * len(r.body)):
            yield r, b


def full_instances(rules, consts):
    for r in rules:
        vs = r.variables()
        for values in itertools.product(consts, repeat=len(vs)):
            yield r, dict(zip(vs, values))


def ground(p, d, relevant=False, max_clauses=None, max_atoms=None):
    """Ground a program and dataset into propositional clauses.

    Params
    ------
    p : Program
    d : Dataset

    Kwargs
    ------
    relevant : bool, optional
        Only produce instances whose body atoms are possibly true. Defaults to
        False, i.e. every instance over the active domain.
    max_clauses : int, optional
        Defaults to `default_max_clauses`.
    max_atoms : int, optional
        Defaults to `default_max_atoms`.

    Returns
    -------
    GroundClauseSet
        Includes unit clauses for the dataset and the top facts of every
        constant, and the clause `not bot`.
    """
    max_clauses = max_clauses or default_max_clauses
    max_atoms = max_atoms or default_max_atoms
    rules = _rules(p, d)
    seed, consts = _seed(p, d)

    if relevant:
        instances = relevant_instances(rules, possible_facts(rules, seed, max_atoms))
    else:
        total = sum(len(consts) ** len(r.variables()) for r in rules)
        if total + len(seed) + 1 > max_clauses:
            raise ResourceCapExceeded('Grounding needs {} clauses, cap is {}'.format(total, max_clauses))
        instances = full_instances(rules, consts)

    g = GroundClauseSet()
    for pred in sorted(seed.rel):
        for tup in sorted(seed.rel[pred]):
            g.add_clause((), [g.number(pred, tup)])
    g.add_clause([g.number(BOT, ())], ())

    for r, b in instances:
        neg = [g.number(a.predicate, instantiate(a, b)) for a in r.body]
        pos = [g.number(a.predicate, instantiate(a, b)) for a in r.head]
        g.add_clause(neg, pos)
        g.instance_counts[r.id] = g.instance_counts.get(r.id, 0) + 1
        if len(g.clauses) > max_clauses:
            raise ResourceCapExceeded('Grounding exceeded {} clauses'.format(max_clauses))
        if len(g.atoms) > max_atoms:
            raise ResourceCapExceeded('Grounding exceeded {} atoms'.format(max_atoms))

    logger.debug('Grounded {} clauses over {} atoms'.format(len(g.clauses), len(g.atoms)))
    return g


def satisfiable(clause_set, assumptions=()):
    """A model (set of true ground Atoms) of the clauses and assumed literals, or None."""
    model = Solver(clause_set.literal_clauses()).solve(assumptions)
    if model is None:
        return None
    return set(clause_set.atom(n) for n in model)


def cautious_eval(p, d, predicates=None, max_clauses=None, max_atoms=None):
    """Facts true in every model of p and d.

    A first model bounds the candidates; each candidate a is entailed iff the
    clauses together with `not a` are unsatisfiable, and every model found on
    the way removes the candidates it falsifies.

    Kwargs
    ------
    predicates : set of Predicate, optional
        Only decide facts over these predicates.

    Returns
    -------
    EvalResult
    """
    g = ground(p, d, relevant=True, max_clauses=max_clauses, max_atoms=max_atoms)
    solver = Solver(g.literal_clauses())
    model = solver.solve()
    if model is None:
        return EvalResult(EvalResult.UNSAT)

    if predicates is not None:
        predicates = set(predicates)
        model = set(n for n in model if g.atoms[n - 1][0] in predicates)
    candidates = set(model)
    entailed = set()
    for n in sorted(model):
        if n not in candidates:
            continue
        other = solver.solve([-n])
        if other is None:
            entailed.add(n)
        else:
            candidates &= other | entailed
    return EvalResult(EvalResult.CONSISTENT, [g.atom(n) for n in entailed])


def entails_oracle(p, d, disjunction, max_clauses=None, max_atoms=None):
    """Decide p + d |= f_1 or ... or f_n for ground facts f_i.

    The bot fact as a disjunct makes the query true on unsatisfiable input.
    """
    g = ground(p, d, relevant=True, max_clauses=max_clauses, max_atoms=max_atoms)
    assumptions = []
    for f in disjunction:
        n = g.lookup(f)
        if n is not None:
            assumptions.append(-n)
    return Solver(g.literal_clauses()).solve(assumptions) is None


class Derivation(namedtuple('Derivation', ['label', 'rule_id', 'substitution', 'children'])):
    """A hyperresolution derivation tree.

    `label` is a frozenset of ground facts read as a disjunction. Leaves from
    the dataset have `rule_id` None. Internal nodes record the rule and the
    ground substitution, as sorted `(Var, Const)` pairs, and have one child per
    body atom of the rule in body order.
    """
    __slots__ = ()

    def __new__(cls, label, rule_id=None, substitution=(), children=()):
        return super(Derivation, cls).__new__(cls, frozenset(label), rule_id, tuple(substitution), tuple(children))

    def nodes(self):
        yield self
        for c in self.children:
            for n in c.nodes():
                yield n

    def rule_applications(self):
        """Number of internal nodes using a rule outside P_top."""
        return sum(1 for n in self.nodes() if n.rule_id is not None and not n.rule_id.startswith('top'))

    def depth(self):
        return 1 + max([c.depth() for c in self.children] or [0])


def rule_table(p, d):
    """Rules usable in derivations from p and d, keyed by rule id."""
    prog = augment_top(p.with_equality(d.predicates()))
    table = OrderedDict((r.id, r) for r in prog)
    table[BOT_RULE.id] = BOT_RULE
    return table


def _ground(atom, sub):
    return Atom(atom.predicate, [sub[t] if t.is_var else t for t in atom.args])


def _top_stubs(table, d):
    """One top-stub derivation of top(c) for every constant c."""
    stubs = {}
    for f in sorted(d.facts):
        for i, t in enumerate(f.args):
            label = frozenset([Atom(TOP, [t])])
            if label in stubs:
                continue
            r = table.get('top:{}:{}'.format(f.predicate.name, i))
            if r is None:
                continue
            sub = dict(zip(r.body[0].args, f.args))
            stubs[label] = Derivation(label, r.id, sorted(sub.items()), [Derivation([f])])
    for rid, r in table.items():
        if r.origin == Rule.TOP and not r.body:
            label = frozenset(r.head)
            if label not in stubs:
                stubs[label] = Derivation(label, rid)
    return stubs


def find_derivation(p, d, disjunction, max_depth=8, max_labels=20000, max_combinations=2000):
    """Bounded search for a normal hyperresolution derivation.

    Derivable disjunctions are saturated level by level, discarding any
    disjunction subsumed by one already known, until one contained in the
    target appears.

    Params
    ------
    p : Program
    d : Dataset
    disjunction : iterable of ground Atom
        Target disjunction; a derivation of a non-empty subset is returned.

    Kwargs
    ------
    max_depth : int, optional
        Number of saturation rounds.
    max_labels : int, optional
        Bound on derived disjunctions.
    max_combinations : int, optional
        Bound on premise combinations tried per ground rule instance.

    Returns
    -------
    Derivation or None
        None when the bounds are exhausted; this is not a disproof.
    """
    target = frozenset(disjunction)
    table = rule_table(p, d)
    rules = [r for r in table.values() if r.origin != Rule.TOP]

    known = OrderedDict()
    by_atom = defaultdict(list)

    def add(node):
        known[node.label] = node
        for a in node.label:
            by_atom[a].append(node.label)

    def hit(label):
        return label and label <= target

    for f in sorted(d.facts):
        add(Derivation([f]))
    for node in _top_stubs(table, d).values():
        add(node)
    for label, node in known.items():
        if hit(label):
            return node

    seed, _ = _seed(p, d)
    poss = possible_facts(rules, seed)
    instances = list(relevant_instances(rules, poss))

    for level in range(max_depth):
        grew = False
        for r, b in instances:
            sub = dict((v, Const(c)) for v, c in b.items())
            body = [_ground(a, sub) for a in r.body]
            head = frozenset(_ground(a, sub) for a in r.head)
            choices = [list(by_atom.get(a, ())) for a in body]
            if any(not c for c in choices):
                continue
            for combo in itertools.islice(itertools.product(*choices), max_combinations):
                label = set(head)
                for a, premise in zip(body, combo):
                    label |= premise - {a}
                label = frozenset(label)
                if label in known or any(k <= label for k in known):
                    continue
                node = Derivation(label, r.id, sorted(sub.items()), [known[c] for c in combo])
                add(node)
                grew = True
                if hit(label):
                    logger.debug('Derivation found at level {}'.format(level))
                    return node
                if len(known) >= max_labels:
                    logger.info('Derivation search hit the label bound')
                    return None
        if not grew:
            break
    return None


def check_derivation(p, d, derivation):
    """Validate a derivation node by node.

    Every internal node must be the hyperresolvent of its rule under its
    ground substitution with the labels of its children, leaves must be
    dataset facts, and every node whose label mentions top must be a top-stub.

    Returns
    -------
    (bool, str)
        Validity and the reason of the first failure (empty when valid).
    """
    table = rule_table(p, d)

    def check(node):
        has_top = any(a.predicate == TOP for a in node.label)
        if node.rule_id is None:
            if node.children or len(node.label) != 1 or next(iter(node.label)) not in d:
                return 'leaf {} is not a dataset fact'.format(sorted(node.label))
            if has_top:
                return 'top occurs outside a top-stub'
            return ''
        r = table.get(node.rule_id)
        if r is None:
            return 'unknown rule {}'.format(node.rule_id)
        sub = dict(node.substitution)
        if any(v not in sub for v in r.variables()) or any(t.is_var for t in sub.values()):
            return 'substitution does not ground rule {}'.format(r.id)
        if len(node.children) != len(r.body):
            return 'rule {} needs {} premises, got {}'.format(r.id, len(r.body), len(node.children))
        label = set(_ground(a, sub) for a in r.head)
        for a, child in zip(r.body, node.children):
            ga = _ground(a, sub)
            if ga not in child.label:
                return 'premise {} lacks {}'.format(sorted(child.label), ga)
            label |= child.label - {ga}
        if frozenset(label) != node.label:
            return 'label of {} node is not the hyperresolvent'.format(r.id)
        if r.origin == Rule.TOP:
            if any(c.rule_id is not None for c in node.children):
                return 'top-stub premises must be dataset facts'
        elif has_top:
            return 'top occurs outside a top-stub'
        for child in node.children:
            reason = check(child)
            if reason:
                return reason
        return ''

    reason = check(derivation)
    return (not reason, reason)
