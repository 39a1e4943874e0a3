# -- coding: utf-8 --

"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Surface syntax for programs, datasets and reports.

Programs are written in logic-programming order, `head :- body.`, which reads
as the rule `body -> head`. Heads are `|`-separated disjunctions, bodies are
`,`-separated conjunctions. Variables start with an uppercase letter or `_`,
constants and predicates with a lowercase letter (constants may also be
numerals). `top(X)` denotes the top predicate, `bot` the nullary bottom
predicate and `X = Y` equality. Comments run from `%` to the end of the line.

    b(X) | g(X) :- v(X).
    bot :- b(X), g(X).
    a(c).

Derived programs additionally use primed names (`b'`) and auxiliary names
(`b^{g}`); these are only accepted when parsing with `derived=True`.
"""

from collections import namedtuple
from enum import Enum
import pandas as pd

from wlrewrite.model import (Atom, Rule, Predicate, Dataset, Program, Var, Const,
                             TOP, BOT, EQ, validate_program)
from wlrewrite.errors import ParseError, NonGroundFactError, BuiltinPlacementError


class Format(Enum):
    """Enumerates supported file formats."""

    DL = 'dl'
    """Disjunctive datalog program."""

    FACTS = 'facts'
    """Dataset, one ground fact per line."""

    RLOR = 'rlor'
    """Normalised ontology axioms, one per line."""


class SourceSpan(namedtuple('SourceSpan', ['file', 'line', 'column', 'end_line', 'end_column'])):
    """1-based line/column range of a piece of source text."""
    __slots__ = ()

    def __new__(cls, file, line, column, end_line=None, end_column=None):
        end_line = line if end_line is None else end_line
        end_column = column if end_column is None else end_column
        assert line >= 0 and column >= 0
        assert (end_line, end_column) >= (line, column)
        return super(SourceSpan, cls).__new__(cls, file, line, column, end_line, end_column)

    def __str__(self):
        return '{}:{}:{}'.format(self.file or '<text>', self.line, self.column)


Token = namedtuple('Token', ['kind', 'text', 'span'])

PUNCT = [':-', '(', ')', ',', '.', '|', '=']


def _scan_marks(text, i):
    """Consume primes and `^{...}` suffixes of a derived name starting at i."""
    n = len(text)
    while i < n:
        if text[i] == "'":
            i += 1
        elif text[i] == '^' and i + 1 < n and text[i + 1] == '{':
            depth = 0
            j = i + 1
            while j < n:
                if text[j] == '{':
                    depth += 1
                elif text[j] == '}':
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if depth != 0:
                return i, False
            i = j + 1
        else:
            break
    return i, True


def tokenize(text, fname=None):
    """Split text into tokens of kind NAME, VAR, NUM, PUNCT and EOF."""
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == '\n':
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c == '%':
            while i < n and text[i] != '\n':
                i += 1
            continue
        start = i
        if c.isalpha() or c == '_':
            while i < n and (text[i].isalnum() or text[i] == '_'):
                i += 1
            if c.isupper() or c == '_':
                kind = 'VAR'
            else:
                kind = 'NAME'
                i, ok = _scan_marks(text, i)
                if not ok:
                    raise ParseError('Unbalanced braces in name', SourceSpan(fname, line, col))
        elif c.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            kind = 'NUM'
        else:
            for p in PUNCT:
                if text.startswith(p, i):
                    i += len(p)
                    kind = 'PUNCT'
                    break
            else:
                raise ParseError('Unexpected character {!r}'.format(c), SourceSpan(fname, line, col))
        tokens.append(Token(kind, text[start:i], SourceSpan(fname, line, col, line, col + i - start)))
        col += i - start
    tokens.append(Token('EOF', '', SourceSpan(fname, line, col)))
    return tokens


class _Parser(object):

    def __init__(self, text, fname=None):
        self.tokens = tokenize(text, fname)
        self.pos = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def peek(self, k=1):
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def accept(self, text):
        if self.tok.kind == 'PUNCT' and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise ParseError('Expected {!r} but found {!r}'.format(text, self.tok.text or 'end of input'), self.tok.span)

    def term(self):
        t = self.tok
        self.pos += 1
        if t.kind == 'VAR':
            return Var(t.text)
        if t.kind in ('NAME', 'NUM'):
            return Const(t.text)
        raise ParseError('Expected a term but found {!r}'.format(t.text or 'end of input'), t.span)

    def literal(self):
        t = self.tok
        if t.kind in ('VAR', 'NUM') or (t.kind == 'NAME' and self.peek().text == '=' and self.peek().kind == 'PUNCT'):
            lhs = self.term()
            self.expect('=')
            return Atom(EQ, [lhs, self.term()])
        if t.kind != 'NAME':
            raise ParseError('Expected an atom but found {!r}'.format(t.text or 'end of input'), t.span)
        self.pos += 1
        args = []
        if self.accept('('):
            args.append(self.term())
            while self.accept(','):
                args.append(self.term())
            self.expect(')')
        if t.text == 'bot':
            if args:
                raise ParseError('bot takes no arguments', t.span)
            return Atom(BOT)
        if t.text == 'top':
            if len(args) != 1:
                raise ParseError('top takes exactly one argument', t.span)
            return Atom(TOP, args)
        return Atom(Predicate(t.text, len(args)), args)

    def rule(self):
        span = self.tok.span
        head = [self.literal()]
        while self.accept('|'):
            head.append(self.literal())
        body = []
        if self.accept(':-'):
            body.append(self.literal())
            while self.accept(','):
                body.append(self.literal())
        self.expect('.')
        return head, body, span

    def rules(self):
        out = []
        while self.tok.kind != 'EOF':
            out.append(self.rule())
        return out


def parse_program(text, derived=False, fname=None):
    """Parse program text.

    Params
    ------
    text : str
        Program source.

    Kwargs
    ------
    derived : bool, optional
        Accept primed/auxiliary names and equality in bodies, as produced by
        the transformations. Defaults to False.
    fname : str, optional
        File name reported in error spans.

    Returns
    -------
    Program
        Validated program; rules are numbered `r1, r2, ...` in source order.
    """
    parsed = _Parser(text, fname).rules()
    rules = [Rule('r{}'.format(i + 1), body, head) for i, (head, body, _) in enumerate(parsed)]
    return validate_program(rules, Program.DERIVED if derived else Program.ORIGINAL)


def parse_dataset(text, fname=None):
    """Parse a dataset: ground facts `p(a, b).`, top and bot excluded."""
    facts = []
    for head, body, span in _Parser(text, fname).rules():
        if body or len(head) != 1:
            raise ParseError('Datasets contain facts only', span)
        fact = head[0]
        if fact.predicate.builtin in ('top', 'bot'):
            raise BuiltinPlacementError('{}: top and bot cannot be supplied as facts'.format(span))
        if not fact.is_ground:
            raise NonGroundFactError('{}: fact {} is not ground'.format(span, fact))
        facts.append(fact)
    return Dataset(facts)


def parse_atom(text):
    """Parse a single ground atom such as `b(a)`; a trailing dot is optional."""
    text = text.strip()
    if not text.endswith('.'):
        text += '.'
    p = _Parser(text)
    head, body, span = p.rule()
    if body or len(head) != 1 or p.tok.kind != 'EOF':
        raise ParseError('Expected a single atom', span)
    if not head[0].is_ground:
        raise NonGroundFactError('{} is not ground'.format(head[0]))
    return head[0]


def parse_disjunction(text):
    """Parse `a(c) | b(c)` into a frozenset of ground atoms."""
    text = text.strip()
    if not text.endswith('.'):
        text += '.'
    p = _Parser(text)
    head, body, span = p.rule()
    if body or p.tok.kind != 'EOF':
        raise ParseError('Expected a disjunction of atoms', span)
    for a in head:
        if not a.is_ground:
            raise NonGroundFactError('{} is not ground'.format(a))
    return frozenset(head)


def _pretty_var(k):
    letters = 'XYZUVW'
    return letters[k % 6] + (str(k // 6) if k >= 6 else '')


def format_rule(rule):
    """Canonical text of a single rule."""
    body, head = rule.canonical()
    names = {}
    for a in body + head:
        for t in a.args:
            if t.is_var and t not in names:
                names[t] = Var(_pretty_var(len(names)))
    body = [str(a.substitute(names)) for a in body]
    head = [str(a.substitute(names)) for a in head] or ['bot']
    if not body:
        return '{}.'.format(' | '.join(head))
    return '{} :- {}.'.format(' | '.join(head), ', '.join(body))


def print_program(p):
    """Canonical text of a program; system rules (P_top, congruence axioms) are omitted."""
    return ''.join(format_rule(r) + '\n' for r in p.user_rules)


def print_dataset(d):
    return ''.join('{}.\n'.format(f) for f in sorted(d.facts))


def format_disjunction(label):
    if not label:
        return '[]'
    return ' | '.join(str(a) for a in sorted(label))


def print_derivation(derivation, indent='  '):
    """Indented text of a derivation tree, root first."""
    lines = []

    def visit(node, depth):
        how = 'dataset' if node.rule_id is None else node.rule_id
        lines.append('{}{}    [{}]'.format(indent * depth, format_disjunction(node.label), how))
        for child in node.children:
            visit(child, depth + 1)

    visit(derivation, 0)
    return '\n'.join(lines) + '\n'


def derivation_to_dot(derivation):
    """Graphviz DOT text of a derivation tree; edges point from premises to conclusions."""
    lines = ['digraph derivation {', '  node [shape=box];']
    counter = [0]

    def visit(node):
        nid = 'n{}'.format(counter[0])
        counter[0] += 1
        how = 'dataset' if node.rule_id is None else node.rule_id
        lines.append('  {} [label="{}\\n[{}]"];'.format(nid, format_disjunction(node.label).replace('"', '\\"'), how))
        for child in node.children:
            cid = visit(child)
            lines.append('  {} -> {};'.format(cid, nid))
        return nid

    visit(derivation)
    lines.append('}')
    return '\n'.join(lines) + '\n'


def load_program(fname, derived=False):
    with open(fname, encoding='utf-8') as f:
        return parse_program(f.read(), derived=derived, fname=fname)


def load_dataset(fname):
    with open(fname, encoding='utf-8') as f:
        return parse_dataset(f.read(), fname=fname)


def load_ontology(fname):
    from wlrewrite.rlor import parse_ontology
    with open(fname, encoding='utf-8') as f:
        return parse_ontology(f.read(), fname=fname)


def infer_format(fname):
    ext = fname.rsplit('.', 1)[-1].lower() if '.' in fname else ''
    try:
        return Format(ext)
    except ValueError:
        raise ValueError('Cannot infer format of {}'.format(fname))


def loadtxt(fname, fmt=None, **kwargs):
    """Load data from any known format; the format defaults to the file extension."""
    fmt = infer_format(fname) if fmt is None else Format(fmt)

    switcher = {
        Format.DL: load_program,
        Format.FACTS: load_dataset,
        Format.RLOR: load_ontology,
    }
    func = switcher.get(fmt)
    return func(fname, **kwargs)


def render_summary(summary, formatters=None, namemap=None, buf=None):
    """Render a report to console friendly tabular output.

    Params
    ------
    summary : pd.DataFrame
        Dataframe containing one report per row.

    Kwargs
    ------
    buf : StringIO-like, optional
        Buffer to write to
    formatters : dict, optional
        Dicionary defining custom formatters for individual columns.
        I.e `{'datalog_ratio': '{:.1%}'.format}`. You can get preset formatters
        from MetricsHost.formatters
    namemap : dict, optional
        Dictionary defining new column names for display. I.e
        `{'num_rules': 'Rules'}`.

    Returns
    -------
    string
        Formatted string
    """

    if not namemap is None:
        summary = summary.rename(columns=namemap)
        if not formatters is None:
            formatters = dict([(namemap[c], f) if c in namemap else (c, f) for c, f in formatters.items()])

    output = summary.to_string(
        buf=buf,
        formatters=formatters,
    )

    return output


survey_metric_names = {
    'num_rules': 'Rules',
    'num_disjunctive_rules': 'DisjRules',
    'num_predicates': 'Preds',
    'max_arity': 'Arity',
    'num_disjunctive': 'Disj',
    'datalog_ratio': 'Datalog%',
    'category': 'Class',
    'rewrite_outcome': 'Rewrite',
    'unfold_steps': 'Steps',
    'rewritten_rules': 'Out',
}
"""Short column names used when rendering a program survey."""
