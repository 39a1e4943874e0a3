"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Rewriting of datalog programs into linear disjunctive programs.
"""

from wlrewrite.model import Atom, Rule, TOP, BOT, idb_expansion, idb_predicates, edb_predicates
from wlrewrite.xi import SizeReport, _Rewriter, _aux_atom, _goal_vars, _max_arity
from wlrewrite.errors import NotDatalog


def psi(p):
    """Rewrite a datalog program into a linear disjunctive program.

    The rewriting works on the IDB expansion P^e, so that every predicate of
    p is EDB and every goal R ranges over the primed predicates (and bot if
    some rule derives it). A rule `P_1(s_1), ..., P_n(s_n) -> Q(t)` becomes
    `Q^R(t, y) -> P_1^R(s_1, y) | ... | P_n^R(s_n, y)`; a fact rule yields
    bot on the right.

    Params
    ------
    p : Program
        A datalog program.

    Returns
    -------
    (Program, Renaming)
        The linear program and the renaming Q -> Q' of the IDB expansion.

    Raises
    ------
    NotDatalog
    """
    if not p.is_datalog():
        raise NotDatalog([(r.id, r.head) for r in p if len(r.head) > 1])
    pe, theta = idb_expansion(p.with_equality())
    goals = idb_predicates(pe)

    rw = _Rewriter(goals)
    for rule in pe:
        if rule.origin == Rule.TOP or not rule.head:
            continue
        head = rule.head[0]
        for r in rw.sigma:
            ys = _goal_vars(r, 'Y')
            flipped = [_aux_atom(a, r, ys, rw.aux) for a in rule.body]
            if head.predicate == BOT:
                rw.emit('{}:{}'.format(rule.id, r.name), [], flipped or [Atom(BOT)], rule.id, 2)
            else:
                body = [_aux_atom(head, r, ys, rw.aux)]
                rw.emit('{}:{}'.format(rule.id, r.name), body, flipped or [Atom(BOT)], rule.id, 1)
    for r in rw.sigma:
        ys = _goal_vars(r, 'Y')
        rw.emit('init:{}'.format(r.name), [], [_aux_atom(Atom(r, ys), r, ys, rw.aux)], None, 3)
    rw.collect(edb_predicates(pe) | set([TOP]))
    return rw.output(pe).program, theta


def check_size_bounds(p, q):
    """Assert the rule-count and arity bounds of `q = psi(p)[0]`.

    With m goals over an expansion of n rules and k EDB predicates the
    rewriting has at most m * (n + k + 1) rules.

    Returns
    -------
    SizeReport
    """
    pe, _ = idb_expansion(p.with_equality())
    rules = [r for r in pe if r.origin != Rule.TOP]
    m, k = len(idb_predicates(pe)), len(edb_predicates(pe) | set([TOP]))
    report = SizeReport(len(q), m * (len(rules) + k + 1),
                        _max_arity(q), 2 * max(_max_arity(p), 1))
    assert report.rules <= report.rule_bound, \
        'Rewriting has {} rules, bound is {}'.format(report.rules, report.rule_bound)
    assert report.arity <= report.arity_bound, \
        'Rewriting has arity {}, bound is {}'.format(report.arity, report.arity_bound)
    return report
