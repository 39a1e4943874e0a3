"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Abstract syntax of function-free disjunctive rules, programs and datasets.
"""

from collections import namedtuple, OrderedDict
import itertools

from wlrewrite.errors import (UnsafeRuleError, ArityMismatchError, ReservedNameError,
                              BuiltinPlacementError, NonGroundFactError)


class Term(namedtuple('Term', ['kind', 'name'])):
    """A variable or a constant. Variables and constants never compare equal."""
    __slots__ = ()

    VAR = 'var'
    CONST = 'const'

    def __new__(cls, kind, name):
        assert kind in (Term.VAR, Term.CONST), 'Unknown term kind {}'.format(kind)
        assert name, 'Term names must be non-empty'
        return super(Term, cls).__new__(cls, kind, name)

    @property
    def is_var(self):
        return self.kind == Term.VAR

    def __str__(self):
        return self.name


def Var(name):
    return Term(Term.VAR, name)


def Const(name):
    return Term(Term.CONST, name)


class Predicate(namedtuple('Predicate', ['name', 'arity', 'builtin'])):
    """A predicate symbol.

    `builtin` is one of `''`, `'top'`, `'bot'` or `'eq'`.
    """
    __slots__ = ()

    def __new__(cls, name, arity, builtin=''):
        return super(Predicate, cls).__new__(cls, name, arity, builtin)

    @property
    def is_builtin(self):
        return self.builtin != ''

    def __str__(self):
        return '{}/{}'.format(self.name, self.arity)


TOP = Predicate('top', 1, 'top')
BOT = Predicate('bot', 0, 'bot')
EQ = Predicate('=', 2, 'eq')

RESERVED_NAMES = frozenset(['top', 'bot'])
"""Predicate names only builtins may use."""

PRIME = "'"
AUX_MARK = '^'


def is_derived_name(name):
    """True for names produced by priming or auxiliary naming."""
    return PRIME in name or AUX_MARK in name


def primed(pred):
    """Fresh predicate Q' for an IDB predicate Q."""
    assert not pred.is_builtin, 'Builtins are never primed'
    return Predicate(pred.name + PRIME, pred.arity)


class Atom(namedtuple('Atom', ['predicate', 'args'])):
    __slots__ = ()

    def __new__(cls, predicate, args=()):
        args = tuple(args)
        assert len(args) == predicate.arity, \
            'Atom {} expects {} arguments, got {}'.format(predicate.name, predicate.arity, len(args))
        return super(Atom, cls).__new__(cls, predicate, args)

    @property
    def is_ground(self):
        return all(not t.is_var for t in self.args)

    def variables(self):
        return [t for t in self.args if t.is_var]

    def substitute(self, mapping):
        """Apply a variable -> term mapping."""
        return Atom(self.predicate, [mapping.get(t, t) if t.is_var else t for t in self.args])

    def rename(self, renaming):
        """Apply a predicate renaming."""
        return Atom(renaming(self.predicate), self.args)

    def __str__(self):
        p = self.predicate
        if p.builtin == 'eq':
            return '{} = {}'.format(self.args[0], self.args[1])
        if p.arity == 0:
            return p.name
        return '{}({})'.format(p.name, ', '.join(str(t) for t in self.args))


def _shape(atom):
    return (atom.predicate, tuple((t.kind, '' if t.is_var else t.name) for t in atom.args))


class Rule(namedtuple('Rule', ['id', 'body', 'head', 'origin'])):
    """A rule `body -> head`; body is a conjunction, head a disjunction.

    Body and head are stored as sorted tuples of distinct atoms. `origin` tags
    system rules: `'user'` for ordinary rules, `'top'` for members of P_top and
    `'eq'` for congruence axioms.
    """
    __slots__ = ()

    USER = 'user'
    TOP = 'top'
    EQ = 'eq'

    def __new__(cls, id, body, head, origin='user'):
        return super(Rule, cls).__new__(cls, id, tuple(sorted(set(body))), tuple(sorted(set(head))), origin)

    @property
    def is_system(self):
        return self.origin != Rule.USER

    @property
    def is_disjunctive(self):
        return len(self.head) > 1

    def variables(self):
        """Variables in order of first occurrence, body first."""
        seen = OrderedDict()
        for a in itertools.chain(self.body, self.head):
            for t in a.args:
                if t.is_var:
                    seen[t] = None
        return list(seen)

    def body_variables(self):
        return set(t for a in self.body for t in a.args if t.is_var)

    def unsafe_variables(self):
        bv = self.body_variables()
        return [t for a in self.head for t in a.args if t.is_var and t not in bv]

    def constants(self):
        return set(t.name for a in itertools.chain(self.body, self.head) for t in a.args if not t.is_var)

    def predicates(self):
        return set(a.predicate for a in itertools.chain(self.body, self.head))

    def substitute(self, mapping, id=None):
        return Rule(self.id if id is None else id,
                    [a.substitute(mapping) for a in self.body],
                    [a.substitute(mapping) for a in self.head],
                    self.origin)

    def rename(self, renaming, id=None):
        return Rule(self.id if id is None else id,
                    [a.rename(renaming) for a in self.body],
                    [a.rename(renaming) for a in self.head],
                    self.origin)

    def with_id(self, id):
        return self._replace(id=id)

    def canonical(self, max_orderings=5040):
        """Key invariant under variable renaming.

        Atoms with the same shape (predicate and constant positions) are tried
        in every relative order; variables are numbered by first occurrence and
        the least resulting key wins.
        """
        def groups(atoms):
            by_shape = OrderedDict()
            for a in sorted(atoms, key=_shape):
                by_shape.setdefault(_shape(a), []).append(a)
            return list(by_shape.values())

        parts = groups(self.body) + groups(self.head)
        orderings = itertools.product(*[itertools.permutations(g) for g in parts])
        best = None
        for ordering in itertools.islice(orderings, max_orderings):
            names = {}
            for group in ordering:
                for a in group:
                    for t in a.args:
                        if t.is_var and t not in names:
                            names[t] = Var('V{}'.format(len(names)))
            key = (tuple(sorted(a.substitute(names) for a in self.body)),
                   tuple(sorted(a.substitute(names) for a in self.head)))
            if best is None or key < best:
                best = key
        return best

    def __str__(self):
        head = ' | '.join(str(a) for a in self.head) if self.head else 'bot'
        if not self.body:
            return '{}.'.format(head)
        return '{} :- {}.'.format(head, ', '.join(str(a) for a in self.body))


class Signature(namedtuple('Signature', ['predicates', 'constants'])):
    __slots__ = ()

    def __new__(cls, predicates=(), constants=()):
        return super(Signature, cls).__new__(cls, frozenset(predicates), frozenset(constants))

    def union(self, other):
        return Signature(self.predicates | other.predicates, self.constants | other.constants)

    @property
    def user_predicates(self):
        return frozenset(p for p in self.predicates if not p.is_builtin)


def standardise_apart(rules):
    """Rename variables so that rule i only uses `V<i>_<k>`."""
    out = []
    for i, r in enumerate(rules):
        mapping = dict((v, Var('V{}_{}'.format(i, k))) for k, v in enumerate(r.variables()))
        out.append(r.substitute(mapping))
    return out


class Program(object):
    """An ordered collection of rules with pairwise distinct variables.

    Programs are immutable; every transformation returns a new instance.
    `provenance` is `'original'` for user input and `'derived'` for the
    output of a transformation.
    """

    ORIGINAL = 'original'
    DERIVED = 'derived'

    def __init__(self, rules=(), provenance='original'):
        assert provenance in (Program.ORIGINAL, Program.DERIVED)
        self._rules = tuple(standardise_apart(rules))
        self.provenance = provenance
        self._by_id = None

    @property
    def rules(self):
        return self._rules

    @property
    def user_rules(self):
        """Rules outside P_top and the congruence axioms."""
        return tuple(r for r in self._rules if not r.is_system)

    def __iter__(self):
        return iter(self._rules)

    def __len__(self):
        return len(self._rules)

    def __getitem__(self, i):
        return self._rules[i]

    def __eq__(self, other):
        return isinstance(other, Program) and self._rules == other._rules and self.provenance == other.provenance

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._rules, self.provenance))

    def __repr__(self):
        return 'Program({} rules, {})'.format(len(self._rules), self.provenance)

    def rule(self, rid):
        if self._by_id is None:
            self._by_id = dict((r.id, r) for r in self._rules)
        return self._by_id[rid]

    def predicates(self):
        return set(p for r in self._rules for p in r.predicates())

    def constants(self):
        return set(c for r in self._rules for c in r.constants())

    def signature(self):
        return Signature(self.predicates(), self.constants())

    def replace_rules(self, rules):
        return Program(rules, self.provenance)

    def is_datalog(self):
        return all(len(r.head) <= 1 for r in self._rules)

    def uses_equality(self):
        return EQ in self.predicates()

    def with_equality(self, extra_predicates=()):
        """Program plus congruence axioms for its signature if equality occurs.

        `extra_predicates` (e.g. those of a dataset) take part in the check and
        in the signature. Idempotent.
        """
        rules = [r for r in self._rules if r.origin != Rule.EQ]
        preds = set(p for r in rules for p in r.predicates()) | set(extra_predicates)
        if EQ not in preds:
            return self if len(rules) == len(self._rules) else Program(rules, self.provenance)
        axioms = equality_axioms(Signature(preds))
        return Program(rules + axioms, self.provenance)

    def without_system_rules(self):
        return Program(self.user_rules, self.provenance)


class Dataset(object):
    """A finite set of ground facts."""

    def __init__(self, facts=()):
        facts = frozenset(facts)
        for f in facts:
            if not f.is_ground:
                raise NonGroundFactError('Fact {} is not ground'.format(f))
        self.facts = facts

    def __iter__(self):
        return iter(sorted(self.facts))

    def __len__(self):
        return len(self.facts)

    def __contains__(self, fact):
        return fact in self.facts

    def __eq__(self, other):
        return isinstance(other, Dataset) and self.facts == other.facts

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.facts)

    def __repr__(self):
        return 'Dataset({})'.format(', '.join(str(f) for f in self))

    def union(self, facts):
        return Dataset(self.facts | frozenset(facts))

    def predicates(self):
        return set(f.predicate for f in self.facts)

    def constants(self):
        return set(t.name for f in self.facts for t in f.args)

    def signature(self):
        return Signature(self.predicates(), self.constants())


class Renaming(object):
    """Injective, arity-preserving predicate renaming.

    Predicates outside the domain are mapped to themselves.
    """

    def __init__(self, mapping=None):
        mapping = dict(mapping or {})
        assert len(set(mapping.values())) == len(mapping), 'Renaming is not injective'
        for k, v in mapping.items():
            assert k.arity == v.arity, 'Renaming {} -> {} changes arity'.format(k, v)
        self.map = mapping

    def __call__(self, pred):
        return self.map.get(pred, pred)

    def __len__(self):
        return len(self.map)

    def __eq__(self, other):
        return isinstance(other, Renaming) and self.map == other.map

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'Renaming({})'.format(', '.join('{} -> {}'.format(k.name, v.name) for k, v in sorted(self.map.items())))

    def items(self):
        return sorted(self.map.items())

    def inverse(self):
        return Renaming(dict((v, k) for k, v in self.map.items()))

    def apply(self, fact):
        return fact.rename(self)

    def apply_set(self, predicates):
        return set(self(p) for p in predicates)


def validate_program(rules, provenance='original'):
    """Check well-formedness and build a Program.

    Params
    ------
    rules : iterable of Rule
        Rules in program order. Rules with id None are numbered `r1, r2, ...`.

    Kwargs
    ------
    provenance : str, optional
        `'original'` enforces the user-rule restrictions (no top in heads, no bot
        or equality in bodies, no empty heads, no reserved or derived names);
        `'derived'` only enforces safety and arity consistency.

    Returns
    -------
    Program
        The program with variables standardised apart and rule order preserved.
    """
    rules = [r.with_id('r{}'.format(i + 1)) if r.id is None else r for i, r in enumerate(rules)]
    arities = {}
    for r in rules:
        for a in itertools.chain(r.body, r.head):
            p = a.predicate
            prev = arities.setdefault(p.name, p)
            if prev.arity != p.arity:
                raise ArityMismatchError('Predicate {} used with arities {} and {} (rule {})'.format(
                    p.name, prev.arity, p.arity, r.id))
        if r.origin == Rule.TOP:
            continue
        unsafe = r.unsafe_variables()
        if unsafe:
            raise UnsafeRuleError(r, unsafe[0])
        if provenance != Program.ORIGINAL or r.origin != Rule.USER:
            continue
        if not r.head:
            raise BuiltinPlacementError('Rule {} has an empty head'.format(r.id))
        for a in r.head:
            if a.predicate.builtin == 'top':
                raise BuiltinPlacementError('Rule {} has top in its head'.format(r.id))
        for a in r.body:
            if a.predicate.builtin == 'bot':
                raise BuiltinPlacementError('Rule {} has bot in its body'.format(r.id))
            if a.predicate.builtin == 'eq':
                raise BuiltinPlacementError('Rule {} has an equality atom in its body'.format(r.id))
        for a in itertools.chain(r.body, r.head):
            p = a.predicate
            if not p.is_builtin and (p.name in RESERVED_NAMES or is_derived_name(p.name)):
                raise ReservedNameError('Rule {} uses reserved predicate name {}'.format(r.id, p.name))
    ids = [r.id for r in rules]
    assert len(set(ids)) == len(ids), 'Duplicate rule ids'
    return Program(rules, provenance)


def augment_top(p):
    """Return p together with the rules of P_top, tagged as such.

    For every predicate Q of positive arity (top excluded) and position i this
    adds Q(x1,...,xn) -> top(xi); for every constant a it adds -> top(a).
    """
    rules = [r for r in p if r.origin != Rule.TOP]
    preds = set(q for r in rules for q in r.predicates() if q.builtin != 'top' and q.arity > 0)
    consts = set(c for r in rules for c in r.constants())
    extra = []
    for q in sorted(preds):
        xs = [Var('X{}'.format(i)) for i in range(q.arity)]
        for i in range(q.arity):
            extra.append(Rule('top:{}:{}'.format(q.name, i), [Atom(q, xs)], [Atom(TOP, [xs[i]])], Rule.TOP))
    for c in sorted(consts):
        extra.append(Rule('top:{}'.format(c), [], [Atom(TOP, [Const(c)])], Rule.TOP))
    return Program(rules + extra, p.provenance)


def idb_predicates(p):
    """Predicates heading some rule outside P_top; top is never IDB."""
    return set(a.predicate for r in p if r.origin != Rule.TOP for a in r.head if a.predicate.builtin != 'top')


def edb_predicates(p):
    return p.predicates() - idb_predicates(p)


def idb_expansion(p):
    """Compute the IDB expansion P^e.

    Every IDB predicate Q other than the builtins bot and equality is renamed
    to Q' throughout, and a bridging rule Q(x) -> Q'(x) is added.

    Returns
    -------
    (Program, Renaming)
        P^e and the renaming Q -> Q'.
    """
    theta = Renaming(dict((q, primed(q)) for q in idb_predicates(p) if not q.is_builtin))
    rules = [r.rename(theta) for r in p if r.origin != Rule.TOP]
    for q, qp in theta.items():
        xs = [Var('X{}'.format(i)) for i in range(q.arity)]
        rules.append(Rule('bridge:{}'.format(q.name), [Atom(q, xs)], [Atom(qp, xs)]))
    return Program(rules, Program.DERIVED), theta


def equality_axioms(sig):
    """Congruence axioms for equality over a signature.

    Reflexivity over top, symmetry, transitivity and one replacement rule per
    argument position of every non-builtin predicate. Empty if the signature
    does not use equality.
    """
    if EQ not in sig.predicates:
        return []
    x, y, z = Var('X'), Var('Y'), Var('Z')
    rules = [
        Rule('eq:refl', [Atom(TOP, [x])], [Atom(EQ, [x, x])], Rule.EQ),
        Rule('eq:sym', [Atom(EQ, [x, y])], [Atom(EQ, [y, x])], Rule.EQ),
        Rule('eq:trans', [Atom(EQ, [x, y]), Atom(EQ, [y, z])], [Atom(EQ, [x, z])], Rule.EQ),
    ]
    for q in sorted(p for p in sig.predicates if not p.is_builtin):
        xs = [Var('X{}'.format(i)) for i in range(q.arity)]
        for i in range(q.arity):
            ys = list(xs)
            ys[i] = Var('Y')
            rules.append(Rule('eq:{}:{}'.format(q.name, i), [Atom(q, xs), Atom(EQ, [xs[i], Var('Y')])],
                              [Atom(q, ys)], Rule.EQ))
    return rules


def ground_atom(pred, *constants):
    """Convenience constructor for facts."""
    return Atom(pred, [Const(c) for c in constants])
