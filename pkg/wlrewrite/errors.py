"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Exception hierarchy shared by all modules.
"""


class WlrewriteError(Exception):
    """Base class of all errors raised by wlrewrite."""


class ProgramError(WlrewriteError, ValueError):
    """Malformed program, dataset or ontology input."""


class ParseError(ProgramError):
    """Lexical or syntax error. `span` locates the offending text."""

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = '{}: {}'.format(span, message)
        super(ParseError, self).__init__(message)


class UnsafeRuleError(ProgramError):
    """A head variable does not occur in the body."""

    def __init__(self, rule, variable):
        self.rule = rule
        self.variable = variable
        super(UnsafeRuleError, self).__init__(
            'Rule {} is unsafe: variable {} does not occur in the body'.format(rule.id, variable))


class ArityMismatchError(ProgramError):
    pass


class ReservedNameError(ProgramError):
    pass


class BuiltinPlacementError(ProgramError):
    """top in a head, bot in a body or equality in a user body."""


class NonGroundFactError(ProgramError):
    pass


class UnknownPredicateError(ProgramError):
    pass


class OntologyError(ProgramError):
    """Unknown or non-normalised ontology axiom."""


class ClassError(WlrewriteError, ValueError):
    """The program is not of the class an operation requires.

    `offenders` lists `(rule_id, atoms)` pairs as reported by `analysis`.
    """

    kind = 'class'

    def __init__(self, offenders=()):
        self.offenders = list(offenders)
        desc = ', '.join(rid for rid, _ in self.offenders) or 'n/a'
        super(ClassError, self).__init__('Program is not {} (offending rules: {})'.format(self.kind, desc))


class NotLinear(ClassError):
    kind = 'linear'


class NotWL(ClassError):
    kind = 'weakly linear'


class NotDatalog(ClassError):
    kind = 'datalog'


class UnfoldError(WlrewriteError, ValueError):
    pass


class NotUnifiable(UnfoldError):
    pass


class AtomNotInRule(UnfoldError):
    pass


class AtomNotIDB(UnfoldError):
    pass


class ResourceCapExceeded(WlrewriteError, RuntimeError):
    """Grounding exceeded a configured clause or atom cap."""


class FilterStarvation(WlrewriteError, RuntimeError):
    """Random generation did not produce a program passing the filter."""
