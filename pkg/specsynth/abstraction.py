"""
Shape abstraction and state subsumption.

alpha collapses maximal chains of at least two list nodes that can only
be reached by walking the chain into a summary node. A summary keeps the
disjunction of its members' values and the constraints every member
satisfies, restated over the summary's own field symbol. Subsumption
matches the heap of the subsuming state against the subsumed one root
by root and then asks the solver whether the subsumed state constraint
implies the (instantiated) subsuming one.
"""

import logging
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Tuple

from specsynth.constraints import Formula, Lin, TRUE, Validity, cmp, implies
from specsynth.state import (NULL, UNINIT, HeapObject, SymAddr,
        field_symbol, location_symbol, state_constraint)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlainNode:
    addr: SymAddr
    obj: HeapObject

    @property
    def struct(self):
        return self.obj.struct


@dataclass(frozen=True)
class Summary:
    """
    At least min_count list nodes collapsed into one, keyed by the
    address of the first member.
    """
    addr: SymAddr
    struct: str
    link: str
    members: Tuple[SymAddr, ...]
    min_count: int
    next: object
    symbols: Tuple[Tuple[str, str], ...]
    value_clauses: Formula
    template: Formula
    others: Tuple[Tuple[str, object], ...] = ()

    def symbol(self, name):
        return dict(self.symbols)[name]

    def instantiate(self, values):
        """
        The template with every summary symbol replaced by the value
        given for its field.
        """
        return self.template.substitute({s: values[f]
                for f, s in self.symbols if f in values})


def summary_symbol(addr, name):
    return 'e:%s.%s' % (addr.label, name)


@dataclass(frozen=True)
class AbstractHeap:
    nodes: MappingProxyType
    roots: Tuple[Tuple[str, object], ...]

    def summaries(self):
        return [n for n in self.nodes.values() if isinstance(n, Summary)]


@dataclass(frozen=True)
class AbstractState:
    """
    Program counter, abstract heap and constraint. The constraint is
    split into the part that survives abstraction, the templates of the
    summaries and their value clauses, so matching can drop templates
    that are discharged member by member.
    """
    pc: object
    heap: AbstractHeap
    base: Formula
    templates: MappingProxyType = field(
            default_factory=lambda: MappingProxyType({}))
    refused: bool = False
    scalars: Tuple[Tuple[str, Lin], ...] = ()

    @property
    def constraint(self):
        values = [s.value_clauses for s in self.heap.summaries()]
        return self.base.conjoin(*self.templates.values(), *values)


def _link_fields(heap):
    # per struct, the first field that points to another object of the
    # same struct somewhere in the heap
    links = {}
    for addr in sorted(heap, key=str):
        obj = heap[addr]
        for name, value in obj.fields:
            if isinstance(value, SymAddr) and value in heap and \
                    heap[value].struct == obj.struct:
                links.setdefault(obj.struct, [])
                if name not in links[obj.struct]:
                    links[obj.struct].append(name)
    return {s: names[0] for s, names in links.items()}


def _cyclic(heap, links):
    for start in heap:
        link = links.get(heap[start].struct)
        if link is None:
            continue
        seen = {start}
        current = heap[start].get(link)
        while isinstance(current, SymAddr) and current in heap:
            if current in seen:
                return True
            seen.add(current)
            link = links.get(heap[current].struct)
            if link is None:
                break
            current = heap[current].get(link)
    return False


def _references(config):
    counts = {}
    predecessors = {}
    for addr in sorted(config.heap, key=str):
        for name, value in config.heap[addr].fields:
            if isinstance(value, SymAddr) and not value.is_null:
                counts[value] = counts.get(value, 0) + 1
                predecessors[value] = (addr, name)
    held = {v for _, v in config.pointer_bindings() if not v.is_null}
    return counts, predecessors, held


def _owned(addr, obj):
    """
    Renaming of the member's own value and location symbols by field.
    """
    owned = {}
    for name, value in obj.fields:
        if isinstance(value, Lin):
            own = field_symbol(addr, name)
            if value == Lin.sym(own):
                owned[own] = name
            owned[location_symbol(addr, name)] = name
    return owned


def alpha(state, summarize=True):
    """
    Abstracts a ProgState. With summarize=False the heap is only
    re-labelled as an AbstractHeap of plain nodes.
    """
    config = state.config
    heap = config.heap
    roots = tuple(config.pointer_bindings())
    scalars = tuple(config.scalar_bindings())
    constraint = state_constraint(config)
    plain = {a: PlainNode(a, o) for a, o in heap.items()}
    if not summarize:
        return AbstractState(state.pc, AbstractHeap(MappingProxyType(plain),
                roots), constraint, scalars=scalars)

    links = _link_fields(heap)
    if _cyclic(heap, links):
        log.warning('cyclic heap at %s: not abstracted', state.pc)
        return AbstractState(state.pc, AbstractHeap(MappingProxyType(plain),
                roots), constraint, refused=True, scalars=scalars)

    counts, predecessors, held = _references(config)

    def collapsible(addr):
        if not isinstance(addr, SymAddr) or addr not in heap:
            return False
        obj = heap[addr]
        link = links.get(obj.struct)
        if link is None or addr in held or counts.get(addr, 0) != 1:
            return False
        for name, value in obj.fields:
            if name != link and isinstance(value, SymAddr) and \
                    not value.is_null:
                return False
        return True

    chains = []
    for addr in sorted(heap, key=str):
        if not collapsible(addr):
            continue
        struct = heap[addr].struct
        link = links[struct]
        before, via = predecessors[addr]
        if via == link and heap[before].struct == struct and \
                collapsible(before):
            continue
        chain = [addr]
        current = heap[addr].get(link)
        while collapsible(current) and heap[current].struct == struct:
            chain.append(current)
            current = heap[current].get(link)
        if len(chain) >= 2:
            chains.append(chain)

    nodes = dict(plain)
    member_of = {}
    summaries = []
    for chain in chains:
        for addr in chain:
            del nodes[addr]
            member_of[addr] = chain[0]
    for chain in chains:
        summaries.append(_summarize(chain, heap, links, constraint,
                member_of))
    for summary in summaries:
        nodes[summary.addr] = summary

    kept = []
    for clause in constraint.sorted_clauses():
        if not _mentions(clause, heap, member_of):
            kept.append(clause)
    templates = {s.addr: s.template for s in summaries}
    if summaries:
        log.debug('abstraction at %s: %d summaries', state.pc, len(summaries))
    return AbstractState(state.pc, AbstractHeap(MappingProxyType(nodes),
            roots), Formula(kept).normalized(), MappingProxyType(templates),
            scalars=scalars)


def _mentions(clause, heap, member_of):
    symbols = set()
    for atom in clause:
        symbols |= atom.symbols()
        if atom.addresses() & set(member_of):
            return True
    for addr in member_of:
        if symbols & set(_owned(addr, heap[addr])):
            return True
    return False


def _summarize(chain, heap, links, constraint, member_of):
    first = chain[0]
    struct = heap[first].struct
    link = links[struct]
    scalar_fields = [n for n, v in heap[first].fields if isinstance(v, Lin)]
    symbols = tuple((n, summary_symbol(first, n)) for n in scalar_fields)
    e = dict(symbols)

    value_clauses = Formula([[cmp(Lin.sym(e[n]), '=', heap[m].get(n))
            for m in chain] for n in scalar_fields]).normalized()

    common = None
    for member in chain:
        owned = _owned(member, heap[member])
        renaming = {s: e[n] for s, n in owned.items() if n in e}
        others = set(member_of) - {member}
        atoms = set()
        for clause in constraint.sorted_clauses():
            symbols_in = set()
            addresses_in = set()
            for atom in clause:
                symbols_in |= atom.symbols()
                addresses_in |= atom.addresses()
            if addresses_in & set(member_of):
                continue
            if not symbols_in & set(owned):
                continue
            if any(symbols_in & set(_owned(o, heap[o])) for o in others):
                continue
            templated = Formula([clause]).rename(renaming)
            if not templated.is_false:
                atoms.update(templated.clauses)
        common = atoms if common is None else common & atoms
    template = Formula(common or ()).normalized()

    others = []
    for name, _ in heap[first].fields:
        if name == link or name in e:
            continue
        values = {heap[m].get(name) for m in chain}
        others.append((name, values.pop() if len(values) == 1 else UNINIT))
    return Summary(first, struct, link, tuple(chain), len(chain),
            heap[chain[-1]].get(link), symbols, value_clauses, template,
            tuple(others))


# matching

@dataclass(frozen=True)
class Match:
    """
    A way of reading the subsumed heap h2 as an instance of h1.

    addresses maps h2 node addresses to h1 ones, summaries maps h2
    summary symbols to h1 ones, instantiation gives h2 terms for h1
    value symbols, equalities are further (h1 term, h2 term) pairs and
    obligations (summary, values) require the summary template to hold
    for each consumed h2 node.
    """
    addresses: MappingProxyType
    summaries: MappingProxyType
    instantiation: MappingProxyType
    equalities: Tuple[Tuple[Lin, Lin], ...] = ()
    obligations: Tuple[Tuple[Summary, MappingProxyType], ...] = ()
    consumed: frozenset = frozenset()
    matched_summaries: frozenset = frozenset()

    @classmethod
    def empty(cls):
        return cls(MappingProxyType({}), MappingProxyType({}),
                MappingProxyType({}))

    def map(self, addr2, addr1):
        addresses = dict(self.addresses)
        addresses[addr2] = addr1
        return replace(self, addresses=MappingProxyType(addresses))

    def equate(self, term1, term2):
        if len(term1.terms) == 1 and term1.terms[0][1] == 1 and \
                term1.const == 0 and term1.terms[0][0] not in \
                self.instantiation:
            instantiation = dict(self.instantiation)
            instantiation[term1.terms[0][0]] = term2
            return replace(self,
                    instantiation=MappingProxyType(instantiation))
        return replace(self, equalities=self.equalities + ((term1, term2),))


def _unknown(value, nodes):
    return value is UNINIT or (isinstance(value, SymAddr) and
            not value.is_null and value not in nodes)


def _match_pair(h1, h2, match, v1, v2):
    """
    Yields (match, pending pairs) for every way v2 can instantiate v1.
    """
    if _unknown(v1, h1.nodes):
        yield match, []
        return
    if isinstance(v1, Lin):
        if isinstance(v2, Lin):
            yield match.equate(v1, v2), []
        return
    if v1 == NULL:
        if v2 == NULL:
            yield match, []
        return
    if not isinstance(v2, SymAddr) or v2.is_null or v2 not in h2.nodes or \
            v2 in match.consumed:
        return
    if v2 in match.addresses:
        if match.addresses[v2] == v1:
            yield match, []
        return
    if v1 in match.addresses.values():
        return

    n1, n2 = h1.nodes[v1], h2.nodes[v2]
    if n1.struct != n2.struct:
        return
    if isinstance(n1, PlainNode):
        if not isinstance(n2, PlainNode):
            return
        pending = [(value, n2.obj.get(name)) for name, value in n1.obj.fields]
        yield match.map(v2, v1), pending
        return

    if isinstance(n2, Summary):
        if n2.min_count < n1.min_count or n2.link != n1.link:
            return
        summaries = dict(match.summaries)
        for name, symbol in n2.symbols:
            summaries[symbol] = n1.symbol(name)
        matched = replace(match.map(v2, v1),
                summaries=MappingProxyType(summaries),
                matched_summaries=match.matched_summaries | {n1.addr})
        pending = [(value, dict(n2.others).get(name, UNINIT))
                for name, value in n1.others]
        yield matched, pending + [(n1.next, n2.next)]
        return

    # summary against a chain of plain nodes
    chain = []
    current = v2
    while isinstance(current, SymAddr) and current in h2.nodes and \
            isinstance(h2.nodes[current], PlainNode) and \
            h2.nodes[current].struct == n1.struct and \
            current not in match.addresses and \
            current not in match.consumed and current not in chain:
        chain.append(current)
        current = h2.nodes[current].obj.get(n1.link)
        if len(chain) < n1.min_count:
            continue
        consumed = match.map(chain[0], v1)
        consumed = replace(consumed, consumed=match.consumed |
                frozenset(chain[1:]))
        obligations = []
        pending = []
        for addr in chain:
            obj = h2.nodes[addr].obj
            values = {n: obj.get(n) for n, _ in n1.symbols}
            if not all(isinstance(v, Lin) for v in values.values()):
                break
            obligations.append((n1, MappingProxyType(values)))
            pending += [(value, obj.get(name)) for name, value in n1.others]
        else:
            consumed = replace(consumed, obligations=match.obligations +
                    tuple(obligations))
            yield consumed, pending + [(n1.next, current)]


def _match_all(h1, h2, match, pending):
    if not pending:
        yield match
        return
    (v1, v2), rest = pending[0], pending[1:]
    for matched, extra in _match_pair(h1, h2, match, v1, v2):
        yield from _match_all(h1, h2, matched, list(extra) + list(rest))


def match_heaps(h1, h2):
    """
    Yields every Match of h2 against h1, matching the variables'
    pointers root by root.
    """
    roots1, roots2 = dict(h1.roots), dict(h2.roots)
    if set(roots1) != set(roots2):
        return
    pending = [(roots1[name], roots2[name]) for name in sorted(roots1)]
    yield from _match_all(h1, h2, Match.empty(), pending)


def _apart(prefix, symbol):
    if symbol.startswith(('$', '&', 'e:')):
        return symbol
    return prefix + symbol


def _term_symbols(term):
    return term.symbols() if isinstance(term, Lin) else frozenset()


class _Renaming(object):
    """
    Moves h2's vocabulary onto h1's: matched addresses and summary
    symbols take h1's names, everything else is renamed apart.
    """

    def __init__(self, a2, match):
        self.addresses = {}
        self.symbols = {}
        nodes = a2.heap.nodes
        for addr, node in nodes.items():
            members = node.members if isinstance(node, Summary) else (addr,)
            for member in members:
                target = match.addresses.get(member)
                if target is None:
                    target = SymAddr('2|' + member.root, member.path)
                self.addresses[member] = target
        for addr, target in list(self.addresses.items()):
            for name in _field_names(nodes, addr):
                self.symbols[location_symbol(addr, name)] = \
                    location_symbol(target, name)
        self.summaries = dict(match.summaries)

    def symbol(self, name):
        if name in self.symbols:
            return self.symbols[name]
        if name in self.summaries:
            return self.summaries[name]
        if name.startswith('e:') or name.startswith('&'):
            return '2|' + name
        return _apart('2|', name)

    def mapping(self, symbols):
        return {s: self.symbol(s) for s in symbols}

    def term(self, term):
        return term.rename(self.mapping(term.symbols()))

    def formula(self, formula):
        addresses = {a: self.addresses.get(a, SymAddr('2|' + a.root, a.path))
                for a in formula.addresses()}
        return formula.rename(self.mapping(formula.symbols()), addresses)


def _field_names(nodes, addr):
    for node in nodes.values():
        if isinstance(node, PlainNode) and node.addr == addr:
            return node.obj.field_names
    return ()


def _check(a1, a2, match):
    renaming = _Renaming(a2, match)
    h1_terms = [t for t, _ in match.equalities]
    symbols1 = set(a1.constraint.symbols()) | set(match.instantiation)
    for term in h1_terms:
        symbols1 |= term.symbols()
    for summary, _ in match.obligations:
        symbols1 |= summary.template.symbols()
    own = {s: _apart('1|', s) for s in symbols1}
    instantiation = {own[s]: renaming.term(t)
            for s, t in match.instantiation.items()}

    def left(formula):
        return formula.rename(own).substitute(instantiation)

    templates = [t for addr, t in a1.templates.items()
            if addr in match.matched_summaries]
    required = left(a1.base.conjoin(*templates))
    extra = []
    for term1, term2 in match.equalities:
        extra.append(cmp(term1.rename(own).substitute(instantiation), '=',
                renaming.term(term2)))
    for summary, values in match.obligations:
        bound = {n: renaming.term(v) for n, v in values.items()}
        extra.append(left(summary.template).substitute(
                {s: bound[n] for n, s in summary.symbols}))
    required = required.conjoin(*extra)
    given = renaming.formula(a2.constraint)
    return implies(given, required) is Validity.VALID


def _with_scalars(a1, a2, match):
    # int variables are matched by name, like the pointer roots
    values1, values2 = dict(a1.scalars), dict(a2.scalars)
    if set(values1) != set(values2):
        return None
    for name in sorted(values1):
        match = match.equate(values1[name], values2[name])
    return match


def _subsumes(a1, a2):
    if a1.pc != a2.pc or a1.refused or a2.refused:
        return False
    for match in match_heaps(a1.heap, a2.heap):
        match = _with_scalars(a1, a2, match)
        if match is not None and _check(a1, a2, match):
            return True
    return False


def heap_subsumes(h1, h2, constraint=TRUE):
    """
    True when h1 covers h2 structurally and the value obligations of
    the match follow from constraint (over h2's vocabulary).
    """
    empty = MappingProxyType({})
    a1 = AbstractState(None, h1, TRUE, empty)
    a2 = AbstractState(None, h2, constraint, empty)
    return _subsumes(a1, a2)


def subsumes(s1, s2):
    """
    s1 subsumes s2: same program counter, the plain heap of s1 covers
    the heap of s2 and SC(s2) implies SC(s1).
    """
    return _subsumes(alpha(s1, summarize=False), alpha(s2, summarize=False))


def abstract_subsumes(s1, s2):
    """
    s1 abstractly subsumes s2: subsumption between alpha(s1) and
    alpha(s2). A solver answer of unknown counts as failure.
    """
    return _subsumes(alpha(s1), alpha(s2))
