"""
Renderings of exploration trees, abstract heaps and contracts: DOT
through graphviz, a plain text report and the versioned JSON document.
"""

import datetime
import json
import logging

from graphviz import Digraph

from specsynth import __version__
from specsynth.abstraction import Summary
from specsynth.constraints import Lin
from specsynth.inference import Axiom, Contract, Equation, ObserverCall, \
        compact
from specsynth.state import NULL, RETURNED, UNINIT, SymAddr, format_value

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


# DOT

def _node_label(node):
    config = node.state.config
    lines = ['%d @ %s' % (node.id, node.state.pc)]
    if config.is_leaf:
        if config.status == RETURNED:
            lines.append('ret %s' % ('void' if config.result is None
                    else format_value(config.result)))
        else:
            lines.append(config.status)
        if config.asub:
            lines.append('aSubFlag')
    return '\\n'.join(lines)


def tree_dot(tree):
    """
    DOT source of an exploration tree. Fold edges are dashed and point
    from the folded state to the recorded state that subsumed it.
    """
    graph = Digraph('se', node_attr={'shape': 'box', 'fontsize': '10'})
    leaves = set(tree.leaf_ids)
    for node in tree.nodes:
        attrs = {}
        if node.id in leaves:
            attrs['peripheries'] = '2'
        graph.node(str(node.id), _node_label(node), **attrs)
    for parent, child, label in tree.edges:
        graph.edge(str(parent), str(child), label=label)
    for folded, recorded in tree.folds:
        graph.edge(str(folded), str(recorded), label='fold',
                style='dashed', constraint='false')
    return graph.source


def _heap_target(graph, value, names):
    if isinstance(value, SymAddr) and value.is_null:
        name = 'null%d' % len(names)
        graph.node(name, 'NULL', shape='ellipse')
    elif value is UNINIT or not isinstance(value, SymAddr):
        name = 'uninit%d' % len(names)
        graph.node(name, 'uninit', shape='egg', style='dashed')
    else:
        return names.get(value)
    names[name] = name
    return name


def heap_dot(abstract):
    """
    DOT source of an abstract state's heap: boxes for nodes, double
    boxes for summaries, ellipses for NULL and dashed eggs for
    uninitialized pointers.
    """
    graph = Digraph('heap', node_attr={'fontsize': '10'})
    names = {}
    nodes = abstract.heap.nodes
    for index, addr in enumerate(sorted(nodes, key=str)):
        names[addr] = 'n%d' % index
    for addr in sorted(nodes, key=str):
        node = nodes[addr]
        if isinstance(node, Summary):
            label = '%s\\n>= %d %s' % (addr, node.min_count, node.struct)
            for clause in node.value_clauses.sorted_clauses():
                label += '\\n' + ' ∨ '.join(sorted(str(a) for a in clause))
            graph.node(names[addr], label, shape='box', peripheries='2')
            edges = [(node.link, node.next)] + list(node.others)
        else:
            fields = ['%s: %s' % (n, format_value(v))
                    for n, v in node.obj.fields if not isinstance(v, SymAddr)
                    and v is not UNINIT]
            graph.node(names[addr], '\\n'.join([str(addr)] + fields),
                    shape='box')
            edges = [(n, v) for n, v in node.obj.fields
                    if isinstance(v, SymAddr) or v is UNINIT]
        for name, value in edges:
            target = _heap_target(graph, value, names)
            if target is not None:
                graph.edge(names[addr], target, label=name)
    for name, value in abstract.heap.roots:
        graph.node('var_' + name, name, shape='plaintext')
        target = _heap_target(graph, value, names)
        if target is not None:
            graph.edge('var_' + name, target)
    return graph.source


# text

def render_text(contract):
    """
    Human-readable report: the compacted axioms of Q by origin, then the
    assignable locations and any candidates left unresolved.
    """
    lines = ['contract for %s' % contract.function]
    axioms = sorted(contract.postcondition, key=lambda a: a.origin)
    if not axioms:
        lines.append('  no axioms')
    for axiom in axioms:
        lines.append('  %s' % compact(axiom, axioms))
    if contract.assignable:
        lines.append('  assignable: %s' % ', '.join(contract.assignable))
    for candidate in contract.candidates:
        lines.append('  candidate: %s' % candidate)
    return '\n'.join(lines) + '\n'


# JSON

def _value_document(rhs):
    if isinstance(rhs, SymAddr):
        return {'pointer': str(rhs)}
    return {'const': rhs.const, 'terms': [list(t) for t in rhs.terms]}


def equation_document(equation):
    document = {
        'text': str(equation),
        'observer': None if equation.is_ret else equation.call.name,
        'args': [] if equation.is_ret else list(equation.call.args),
        'primed': equation.primed,
        'value': _value_document(equation.rhs),
    }
    return document


def axiom_document(axiom, axioms=None):
    document = {
        'antecedent': [equation_document(e) for e in axiom.antecedent],
        'consequent': [equation_document(e) for e in axiom.consequent],
        'status': axiom.status,
        'origin': axiom.origin,
        'text': str(axiom),
    }
    if axioms is not None:
        document['display'] = str(compact(axiom, axioms))
    return document


def contract_document(contract):
    postcondition = sorted(contract.postcondition, key=lambda a: a.origin)
    return {
        'function': contract.function,
        'precondition': [[equation_document(e) for e in antecedent]
                for antecedent in contract.precondition],
        'postcondition': [axiom_document(a, postcondition)
                for a in postcondition],
        'assignable': list(contract.assignable),
        'candidates': [axiom_document(a) for a in contract.candidates],
    }


def document(contracts, options, timestamp=False):
    """
    The top-level JSON document for a run. The wall-clock time is only
    recorded when asked for, so equal runs give equal bytes.
    """
    provenance = {
        'tool': 'specsynth',
        'version': __version__,
        'seed': options.seed,
        'config': options.as_dict(),
    }
    if timestamp:
        provenance['timestamp'] = datetime.datetime.now(
                datetime.timezone.utc).isoformat()
    return {
        'schemaVersion': SCHEMA_VERSION,
        'contracts': [contract_document(c) for c in contracts],
        'provenance': provenance,
    }


def dumps(value):
    return json.dumps(value, sort_keys=True, indent=2,
            ensure_ascii=False) + '\n'


# reading contracts back

def _load_value(value):
    if 'pointer' in value:
        if value['pointer'] == 'NULL':
            return NULL
        label = value['pointer'].lstrip('&').split('.')
        return SymAddr(label[0], tuple(label[1:]))
    return Lin(value['const'], (tuple(t) for t in value['terms']))


def load_equation(program, modifier, document):
    if document['observer'] is None:
        return Equation(None, _load_value(document['value']),
                document['primed'])
    definition = program.function(modifier)
    names = definition.param_names
    types = dict(definition.params)
    args = tuple(document['args'])
    try:
        positions = tuple(names.index(a) for a in args)
    except ValueError:
        message = '%s: equation %s names an unknown argument'
        raise ValueError(message % (modifier, document['text']))
    call = ObserverCall(document['observer'], args, positions,
            tuple(types[a].is_pointer for a in args))
    return Equation(call, _load_value(document['value']), document['primed'])


def load_axiom(program, modifier, document):
    return Axiom(tuple(load_equation(program, modifier, e)
            for e in document['antecedent']),
            tuple(load_equation(program, modifier, e)
            for e in document['consequent']),
            document['status'], document['origin'])


def load_contracts(program, value):
    """
    Contracts of a JSON document written by document().
    """
    version = value.get('schemaVersion')
    if version != SCHEMA_VERSION:
        message = 'unsupported contract schema version %r'
        raise ValueError(message % version)
    contracts = []
    for entry in value['contracts']:
        modifier = entry['function']
        contracts.append(Contract(modifier,
                [tuple(load_equation(program, modifier, e) for e in p)
                    for p in entry['precondition']],
                [load_axiom(program, modifier, a)
                    for a in entry['postcondition']],
                list(entry['assignable']),
                [load_axiom(program, modifier, a)
                    for a in entry['candidates']]))
    return contracts
