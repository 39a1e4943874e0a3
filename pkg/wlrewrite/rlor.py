"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Normalised OWL 2 RL ontologies extended with binary disjunctions, and their
translation into disjunctive rules.

Axioms are written one per line in a small functional syntax; concept names
are unary predicates, role names binary ones, `top` and `bot` the builtin
concepts.

    form  syntax                               rule
    1     maxCard(a, r, b)                     a(z), r(z,x1), b(x1), r(z,x2), b(x2) -> x1 = x2
    2     subClassOf(and(a, b), c)             a(x), b(x) -> c(x)
    3     subClassOf(some(r, a), b)            r(x,y), a(y) -> b(x)
    4     subPropertyOf(r, s)                  r(x1,x2) -> s(x1,x2)
    5     subPropertyOf(chain(r, s), t)        r(x1,z), s(z,x2) -> t(x1,x2)
    6     subClassOf(a, self(r))               a(x) -> r(x,x)
    7     subClassOf(self(r), a)               r(x,x) -> a(x)
    8     subPropertyOf(r, inverse(s))         r(x,y) -> s(y,x)
    9     subClassOf(a, nominal(i))            a(x) -> x = i
    10    subClassOf(nominal(i), a)            a(i)
    11    subClassOf(a, or(b, c))              a(x) -> b(x) | c(x)

`subClassOf(a, b)` abbreviates `subClassOf(and(a, top), b)` and
`disjunction(a, b, c, ...)` abbreviates `subClassOf(a, or(b, c, ...))`.
Unions of more than two concepts are split into binary ones over fresh
concept names.
"""

from collections import namedtuple
import logging

from wlrewrite.model import Atom, Rule, Predicate, Var, Const, TOP, BOT, EQ, validate_program
from wlrewrite.io import tokenize
from wlrewrite.errors import OntologyError, ParseError

logger = logging.getLogger(__name__)


class RlorAxiom(namedtuple('RlorAxiom', ['kind', 'args'])):
    """A normalised axiom; `kind` is the form number 1 to 11, `args` its names in syntax order."""
    __slots__ = ()

    def __new__(cls, kind, args):
        assert 1 <= kind <= 11, 'Unknown axiom form {}'.format(kind)
        return super(RlorAxiom, cls).__new__(cls, kind, tuple(args))

    def __str__(self):
        a = self.args
        return {
            1: 'maxCard({}, {}, {})',
            2: 'subClassOf(and({}, {}), {})',
            3: 'subClassOf(some({}, {}), {})',
            4: 'subPropertyOf({}, {})',
            5: 'subPropertyOf(chain({}, {}), {})',
            6: 'subClassOf({}, self({}))',
            7: 'subClassOf(self({}), {})',
            8: 'subPropertyOf({}, inverse({}))',
            9: 'subClassOf({}, nominal({}))',
            10: 'subClassOf(nominal({}), {})',
            11: 'subClassOf({}, or({}))',
        }[self.kind].format(*(a if self.kind != 11 else (a[0], ', '.join(a[1:]))))


Expr = namedtuple('Expr', ['head', 'args', 'span'])
"""Parsed functional term; names are Exprs without arguments."""


def _parse_exprs(text, fname):
    tokens = tokenize(text, fname)
    pos = [0]

    def expr():
        t = tokens[pos[0]]
        if t.kind not in ('NAME', 'VAR', 'NUM'):
            raise ParseError('Expected a name but found {!r}'.format(t.text or 'end of input'), t.span)
        pos[0] += 1
        args = []
        if tokens[pos[0]].text == '(':
            pos[0] += 1
            args.append(expr())
            while tokens[pos[0]].text == ',':
                pos[0] += 1
                args.append(expr())
            if tokens[pos[0]].text != ')':
                raise ParseError('Expected \')\'', tokens[pos[0]].span)
            pos[0] += 1
        return Expr(t.text, tuple(args), t.span)

    out = []
    while tokens[pos[0]].kind != 'EOF':
        out.append(expr())
        if tokens[pos[0]].text == '.':
            pos[0] += 1
    return out


def _name(e):
    if e.args:
        raise OntologyError('{}: expected a name, found {}(...)'.format(e.span, e.head))
    return e.head


def _is(e, head, n=None):
    return e.head == head and e.args and (n is None or len(e.args) == n)


def _axiom(e):
    bad = OntologyError('{}: not a normalised axiom: {}'.format(e.span, e.head))
    if e.head == 'maxCard' and len(e.args) == 3:
        return RlorAxiom(1, [_name(x) for x in e.args])
    if e.head == 'disjunction' and len(e.args) >= 2:
        return RlorAxiom(11, [_name(x) for x in e.args])
    if e.head == 'subPropertyOf' and len(e.args) == 2:
        lhs, rhs = e.args
        if _is(lhs, 'chain', 2):
            return RlorAxiom(5, [_name(lhs.args[0]), _name(lhs.args[1]), _name(rhs)])
        if _is(rhs, 'inverse', 1):
            return RlorAxiom(8, [_name(lhs), _name(rhs.args[0])])
        return RlorAxiom(4, [_name(lhs), _name(rhs)])
    if e.head != 'subClassOf' or len(e.args) != 2:
        raise bad
    lhs, rhs = e.args
    if _is(lhs, 'and', 2):
        return RlorAxiom(2, [_name(lhs.args[0]), _name(lhs.args[1]), _name(rhs)])
    if _is(lhs, 'some', 2):
        return RlorAxiom(3, [_name(lhs.args[0]), _name(lhs.args[1]), _name(rhs)])
    if _is(lhs, 'self', 1):
        return RlorAxiom(7, [_name(lhs.args[0]), _name(rhs)])
    if _is(lhs, 'nominal', 1):
        return RlorAxiom(10, [_name(lhs.args[0]), _name(rhs)])
    if lhs.args:
        raise bad
    if _is(rhs, 'self', 1):
        return RlorAxiom(6, [_name(lhs), _name(rhs.args[0])])
    if _is(rhs, 'nominal', 1):
        return RlorAxiom(9, [_name(lhs), _name(rhs.args[0])])
    if _is(rhs, 'or') and len(rhs.args) >= 2:
        return RlorAxiom(11, [_name(lhs)] + [_name(x) for x in rhs.args])
    if rhs.args:
        raise bad
    return RlorAxiom(2, [_name(lhs), 'top', _name(rhs)])


def normalise(axioms):
    """Split unions of more than two concepts into binary ones over fresh names.

    `a <= b1 | ... | bn` becomes `a <= b1 | a_u1`, `a_u1 <= b2 | a_u2`, ... ;
    fresh names avoid every name of the ontology.
    """
    used = set(n for ax in axioms for n in ax.args)
    out = []
    for ax in axioms:
        if ax.kind != 11 or len(ax.args) <= 3:
            out.append(ax)
            continue
        lhs, disjuncts = ax.args[0], list(ax.args[1:])
        k = 0
        while len(disjuncts) > 2:
            k += 1
            fresh = '{}_u{}'.format(ax.args[0], k)
            while fresh in used:
                k += 1
                fresh = '{}_u{}'.format(ax.args[0], k)
            used.add(fresh)
            out.append(RlorAxiom(11, [lhs, disjuncts.pop(0), fresh]))
            lhs = fresh
        out.append(RlorAxiom(11, [lhs] + disjuncts))
    return out


def parse_ontology(text, fname=None):
    """Parse normalised axioms; `%` starts a comment.

    Returns
    -------
    list of RlorAxiom
        Binary unions only, see `normalise`.

    Raises
    ------
    OntologyError
        For unknown or non-normalised forms.
    """
    return normalise([_axiom(e) for e in _parse_exprs(text, fname)])


def _concept(name):
    if name == 'top':
        return TOP
    if name == 'bot':
        return BOT
    return Predicate(name, 1)


def _role(name):
    if name in ('top', 'bot'):
        raise OntologyError('{} is not a role'.format(name))
    return Predicate(name, 2)


def _catom(name, var):
    c = _concept(name)
    return Atom(c) if c == BOT else Atom(c, [var])


def _rule(ax, i):
    """Translate one axiom, or return None for axioms with no content."""
    rid = 'ax{}'.format(i + 1)
    a = ax.args
    x, y, z, x1, x2 = Var('X'), Var('Y'), Var('Z'), Var('X1'), Var('X2')
    k = ax.kind
    left = {1: (0, 2), 2: (0, 1), 3: (1,), 6: (0,), 9: (0,), 11: (0,)}.get(k, ())
    if any(a[j] == 'bot' for j in left):
        raise OntologyError('bot may only occur on the right of axiom {}'.format(ax))
    if k == 1:
        r, b = _role(a[1]), _concept(a[2])
        body = [_catom(a[0], z), Atom(r, [z, x1]), Atom(b, [x1]), Atom(r, [z, x2]), Atom(b, [x2])]
        return Rule(rid, body, [Atom(EQ, [x1, x2])])
    if k == 2:
        if a[2] == 'top':
            return None
        return Rule(rid, [_catom(a[0], x), _catom(a[1], x)], [_catom(a[2], x)])
    if k == 3:
        if a[2] == 'top':
            return None
        return Rule(rid, [Atom(_role(a[0]), [x, y]), _catom(a[1], y)], [_catom(a[2], x)])
    if k == 4:
        return Rule(rid, [Atom(_role(a[0]), [x1, x2])], [Atom(_role(a[1]), [x1, x2])])
    if k == 5:
        return Rule(rid, [Atom(_role(a[0]), [x1, z]), Atom(_role(a[1]), [z, x2])], [Atom(_role(a[2]), [x1, x2])])
    if k == 6:
        return Rule(rid, [_catom(a[0], x)], [Atom(_role(a[1]), [x, x])])
    if k == 7:
        if a[1] == 'top':
            return None
        return Rule(rid, [Atom(_role(a[0]), [x, x])], [_catom(a[1], x)])
    if k == 8:
        return Rule(rid, [Atom(_role(a[0]), [x, y])], [Atom(_role(a[1]), [y, x])])
    if k == 9:
        return Rule(rid, [_catom(a[0], x)], [Atom(EQ, [x, Const(a[1])])])
    if k == 10:
        if a[1] == 'top':
            return None
        if a[1] == 'bot':
            raise OntologyError('bot may only occur on the right of axiom {}'.format(ax))
        return Rule(rid, [], [_catom(a[1], x).substitute({x: Const(a[0])})])
    if 'top' in a[1:]:
        return None
    head = [_catom(c, x) for c in a[1:] if c != 'bot'] or [Atom(BOT)]
    return Rule(rid, [_catom(a[0], x)], head)


def compile(axioms):
    """Translate axioms into a program, one rule per axiom.

    Axioms whose right-hand side is top are tautologies and are skipped.
    Congruence axioms are appended when equality occurs.

    Returns
    -------
    Program
    """
    rules = []
    for i, ax in enumerate(axioms):
        r = _rule(ax, i)
        if r is None:
            logger.warning('Skipping tautological axiom {}'.format(ax))
            continue
        rules.append(r)
    return validate_program(rules).with_equality()
