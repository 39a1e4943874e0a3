"""wlrewrite - datalog rewritings of disjunctive datalog programs.

Dependency graph, predicate classification and the linear / weakly linear
program tests.
"""

from collections import namedtuple, OrderedDict
import networkx as nx
import pandas as pd

from wlrewrite.model import Program, Rule, idb_predicates


class Check(namedtuple('Check', ['ok', 'offenders'])):
    """Outcome of a syntactic program test.

    `offenders` lists `(rule_id, atoms)` pairs; the instance is truthy iff the
    test passed.
    """
    __slots__ = ()

    def __bool__(self):
        return bool(self.ok)

    __nonzero__ = __bool__


class DependencyGraph(object):
    """Edge-labelled predicate graph.

    There is an edge P -> Q labelled r whenever P occurs in the body and Q in
    the head of a rule r outside P_top. The underlying `networkx.DiGraph`
    keeps the labels in the `rules` edge attribute.
    """

    def __init__(self, graph=None):
        self.graph = nx.DiGraph() if graph is None else graph

    @property
    def vertices(self):
        return set(self.graph.nodes)

    @property
    def edges(self):
        return set(self.graph.edges)

    def labels(self, p, q):
        if not self.graph.has_edge(p, q):
            return set()
        return set(self.graph.edges[p, q]['rules'])

    def __len__(self):
        return self.graph.number_of_edges()


def dependency_graph(p):
    """Compute the dependency graph of a program; P_top rules are excluded."""
    g = nx.DiGraph()
    for r in p:
        if r.origin == Rule.TOP:
            continue
        for q in sorted(r.predicates()):
            g.add_node(q)
        for b in r.body:
            for h in r.head:
                if not g.has_edge(b.predicate, h.predicate):
                    g.add_edge(b.predicate, h.predicate, rules=set())
                g.edges[b.predicate, h.predicate]['rules'].add(r.id)
    return DependencyGraph(g)


Witness = namedtuple('Witness', ['rule', 'path'])
"""Disjunctive rule a predicate depends on and a graph path proving it."""


class PredicateClassification(object):
    """Per-predicate `'datalog'` / `'disjunctive'` tags with witnesses."""

    DATALOG = 'datalog'
    DISJUNCTIVE = 'disjunctive'

    def __init__(self, tags, witnesses):
        self.tags = tags
        self.witnesses = witnesses

    def __getitem__(self, pred):
        return self.tags.get(pred, PredicateClassification.DATALOG)

    def is_disjunctive(self, pred):
        return self[pred] == PredicateClassification.DISJUNCTIVE

    @property
    def disjunctive(self):
        return set(q for q, t in self.tags.items() if t == PredicateClassification.DISJUNCTIVE)

    @property
    def datalog(self):
        return set(q for q, t in self.tags.items() if t == PredicateClassification.DATALOG)

    def to_dict(self):
        out = OrderedDict()
        for q in sorted(self.tags):
            w = self.witnesses.get(q)
            out[q.name] = OrderedDict([
                ('class', self.tags[q]),
                ('rule', None if w is None else w.rule),
                ('path', None if w is None else [x.name for x in w.path]),
            ])
        return out


def classify_predicates(p, graph=None):
    """Tag every predicate of p as datalog or disjunctive.

    A predicate is disjunctive if it heads a disjunctive rule r or is reachable
    in the dependency graph from a head predicate of such an r. For rules with
    a non-empty body this is exactly the existence of a path ending in the
    predicate through an r-labelled edge; heads of body-less disjunctive rules
    are disjunctive as well.

    Params
    ------
    p : Program

    Kwargs
    ------
    graph : DependencyGraph, optional
        Precomputed dependency graph of p.

    Returns
    -------
    PredicateClassification
    """
    g = dependency_graph(p) if graph is None else graph
    h = nx.DiGraph()
    h.add_edges_from(g.graph.edges)
    h.add_nodes_from(g.graph.nodes)

    sources = []
    rules = OrderedDict()
    for r in p:
        if r.origin == Rule.TOP or not r.is_disjunctive:
            continue
        src = ('rule', r.id)
        rules[src] = r
        sources.append(src)
        for a in r.head:
            h.add_edge(src, a.predicate)

    paths = nx.multi_source_dijkstra_path(h, sources) if sources else {}

    tags, witnesses = {}, {}
    for q in g.graph.nodes:
        path = paths.get(q)
        if path is None:
            tags[q] = PredicateClassification.DATALOG
            continue
        r = rules[path[0]]
        preds = list(path[1:])
        if r.body:
            preds = [r.body[0].predicate] + preds
        tags[q] = PredicateClassification.DISJUNCTIVE
        witnesses[q] = Witness(r.id, tuple(preds))
    return PredicateClassification(tags, witnesses)


def is_linear(p):
    """True iff every rule has at most one IDB body atom; offenders list the IDB atoms."""
    idb = idb_predicates(p)
    offenders = []
    for r in p:
        if r.origin == Rule.TOP:
            continue
        atoms = tuple(a for a in r.body if a.predicate in idb)
        if len(atoms) > 1:
            offenders.append((r.id, atoms))
    return Check(not offenders, offenders)


def is_wl(p, classification=None):
    """True iff every rule body has at most one atom over a disjunctive predicate.

    Occurrences are counted per atom, so two atoms over the same disjunctive
    predicate violate the condition.
    """
    c = classify_predicates(p) if classification is None else classification
    offenders = []
    for r in p:
        if r.origin == Rule.TOP:
            continue
        atoms = tuple(a for a in r.body if c.is_disjunctive(a.predicate))
        if len(atoms) > 1:
            offenders.append((r.id, atoms))
    return Check(not offenders, offenders)


def program_category(p, classification=None):
    """First of `datalog`, `linear`, `wl`, `non-wl` that applies to p."""
    if p.is_datalog():
        return 'datalog'
    if is_linear(p):
        return 'linear'
    if is_wl(p, classification):
        return 'wl'
    return 'non-wl'


def datalog_fragment(p, classification=None):
    """Rules of p whose head predicates are all datalog.

    Datalog predicates only depend on these rules, so on every dataset on which
    p is consistent the fragment entails exactly the datalog facts p entails.
    """
    c = classify_predicates(p) if classification is None else classification
    rules = [r for r in p.user_rules if all(not c.is_disjunctive(a.predicate) for a in r.head)]
    return Program(rules, p.provenance).with_equality()


def classification_frame(c):
    """One row per predicate with its class and witness."""
    rows = []
    for q in sorted(c.tags):
        w = c.witnesses.get(q)
        rows.append((q.name, q.arity, c.tags[q],
                     None if w is None else w.rule,
                     None if w is None else ' -> '.join(x.name for x in w.path)))
    df = pd.DataFrame(rows, columns=['Predicate', 'Arity', 'Class', 'Rule', 'Path'])
    return df.set_index('Predicate')


def _quote(s):
    return '"{}"'.format(s.replace('\\', '\\\\').replace('"', '\\"'))


def export_dot(g, c=None):
    """Graphviz DOT text; edges carry rule ids, disjunctive predicates are boxed."""
    lines = ['digraph dependencies {']
    for q in sorted(g.graph.nodes):
        if c is not None and c.is_disjunctive(q):
            style = 'shape=box, style=filled, fillcolor=lightgrey'
        else:
            style = 'shape=ellipse'
        lines.append('  {} [{}];'.format(_quote(q.name), style))
    for a, b in sorted(g.graph.edges):
        label = ', '.join(sorted(g.graph.edges[a, b]['rules']))
        lines.append('  {} -> {} [label={}];'.format(_quote(a.name), _quote(b.name), _quote(label)))
    lines.append('}')
    return '\n'.join(lines) + '\n'
