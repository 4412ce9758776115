"""
Symbolic execution of the C fragment.

Configurations are explored depth first, one work item per step. The
baseline engine (se) unrolls every loop a bounded number of times; the
abstract engine (se_abstract) records the state at every loop guard and
recursive call and folds the path as soon as a recorded ancestor state
abstractly subsumes the current one. Unknown heap memory is handled by
lazy initialization: the first use of an address splits the path into
an object case and a null case.
"""

import itertools
import logging
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Dict, List, Optional, Tuple

from specsynth import lang
from specsynth.abstraction import abstract_subsumes
from specsynth.concrete import (ConcreteObject, ConcreteState, NO_VALUE, Ref,
        run as run_concrete)
from specsynth.constraints import (TRUE, Formula, Lin, NonLinearError, Sat,
        addr_eq, addr_neq, cmp, is_satisfiable)
from specsynth.errors import ReplayRejected, SafetyNetError
from specsynth.state import (BOUNDED, ERROR, NULL, RETURNED, STUCK,
        UNINIT, Frame, HeapObject, LocationId, ProgState, SymAddr,
        SymbolicConfiguration, fresh_object, record_write, root)

log = logging.getLogger(__name__)

DEFAULT_UNROLL = 4
DEFAULT_SAFETY_NET = 128


@dataclass(frozen=True)
class CallPattern:
    """
    A call f(args){path} together with the heap the call starts from.
    """
    function: str
    args: Tuple[object, ...]
    path: Formula = TRUE
    heap: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    lazy_init: bool = True

    @classmethod
    def fresh(cls, program, function, lazy_init=True):
        """
        The most general call: every pointer argument is an unknown root
        address, every int argument a symbol named after the parameter.
        """
        definition = program.function(function)
        args = []
        for name, param_type in definition.params:
            if param_type.is_pointer:
                args.append(root(name))
            else:
                args.append(Lin.sym(name))
        return cls(function, tuple(args), TRUE, MappingProxyType({}),
                lazy_init)


class NeedInit(Exception):
    """
    Evaluation touched an address that is neither NULL nor in the heap.
    """
    def __init__(self, addr):
        super(NeedInit, self).__init__(str(addr))
        self.addr = addr


class _Fault(Exception):
    pass


@dataclass
class SENode:
    id: int
    state: ProgState
    parent: Optional[int]
    label: str = ''


@dataclass
class SETree:
    """
    The explored tree: nodes in creation order, parent/child edges with
    branch labels, fold edges from a folded state to the recorded state
    that subsumed it, and the leaves in exploration order.
    """
    call: CallPattern
    nodes: List[SENode] = field(default_factory=list)
    folds: List[Tuple[int, int]] = field(default_factory=list)
    leaf_ids: List[int] = field(default_factory=list)

    def add(self, parent, config, label=''):
        node = SENode(len(self.nodes), _prog_state(config), parent, label)
        self.nodes.append(node)
        return node.id

    @property
    def root(self):
        return self.nodes[0] if self.nodes else None

    def config(self, node_id):
        return self.nodes[node_id].state.config

    @property
    def edges(self):
        return [(n.parent, n.id, n.label) for n in self.nodes
                if n.parent is not None]

    def children(self, node_id):
        return [n.id for n in self.nodes if n.parent == node_id]

    @property
    def leaves(self):
        return [self.config(i) for i in self.leaf_ids]

    def final(self):
        """
        Normally terminated leaves.
        """
        return [c for c in self.leaves if c.status == RETURNED]


def _prog_state(config):
    if config.is_leaf or not config.stack:
        return ProgState(config, 'return')
    frame = config.frame
    if not frame.work:
        return ProgState(config, 'return')
    return ProgState(config, getattr(frame.work[0], 'sid', frame.work[0]))


def initial_config(program, call):
    definition = program.function(call.function)
    if len(call.args) != len(definition.params):
        message = '%s expects %d arguments, got %d'
        raise ValueError(message % (call.function, len(definition.params),
                len(call.args)))
    roots = {}
    heap = {}
    init_heap = {}
    for addr, obj in call.heap.items():
        if obj is None:
            init_heap[addr] = None
            continue
        heap[addr] = obj
        init_heap[addr] = obj
        if not addr.path:
            roots[addr.root] = obj.struct
    env = {}
    locations = set()
    for value, (name, param_type) in zip(call.args, definition.params):
        if param_type.is_pointer:
            if isinstance(value, SymAddr) and not value.is_null and \
                    not value.path:
                roots.setdefault(value.root, param_type.struct)
            locations.add(LocationId.variable(name))
        env[name] = value
    frame = Frame(call.function, (definition.body,), MappingProxyType(env),
            ('root',))
    return SymbolicConfiguration(stack=(frame,), path=call.path,
            locations=frozenset(locations)).replace(heap=heap,
            init_heap=init_heap, roots=roots)


def feasible(formula):
    return is_satisfiable(formula) is not Sat.UNSAT


class SymbolicExecutor(object):
    """
    Explores call under program. With abstract=True loops and
    recursion are folded by abstract subsumption and safety_net bounds
    the unrollings; otherwise they are cut after max_unroll rounds.
    """

    def __init__(self, program, call, max_unroll=DEFAULT_UNROLL,
            abstract=False, safety_net=DEFAULT_SAFETY_NET):
        if max_unroll < 1:
            raise ValueError('max_unroll must be at least 1, got %r' %
                    max_unroll)
        self.program = program
        self.call = call
        self.max_unroll = max_unroll
        self.abstract = abstract
        self.safety_net = safety_net

    def run(self):
        tree = SETree(self.call)
        config = initial_config(self.program, self.call)
        if not feasible(config.path):
            log.info('%s: infeasible initial path condition',
                    self.call.function)
            return tree
        todo = [tree.add(None, config)]
        while todo:
            node_id = todo.pop()
            config = tree.config(node_id)
            if config.is_leaf:
                tree.leaf_ids.append(node_id)
                continue
            children = self.step(config, node_id, tree)
            ids = [tree.add(node_id, c, label) for label, c in children]
            todo.extend(reversed(ids))
        log.info('%s: %d nodes, %d leaves, %d folds', self.call.function,
                len(tree.nodes), len(tree.leaf_ids), len(tree.folds))
        return tree

    # steps

    def step(self, config, node_id, tree):
        frame = config.frame
        if not frame.work:
            return [('', c) for c in self._return(config, None)]
        item, rest = frame.work[0], frame.work[1:]
        try:
            return self._execute(config, item, rest, node_id, tree)
        except NeedInit as need:
            return self._initialize(config, need.addr, item)
        except _Fault as fault:
            leaf = config.replace(status=ERROR, error=str(fault),
                    result=UNINIT, final_env=config.env)
            return [('error', leaf)]

    def _initialize(self, config, addr, item):
        if self.call.lazy_init:
            return lazy_init_split(self.program, config, addr)
        pc = getattr(item, 'sid', item)
        leaf = config.replace(status=STUCK, result=UNINIT,
                stuck_at=(pc, addr, dict(config.env)),
                final_env=config.env)
        return [('stuck', leaf)]

    def _execute(self, config, item, rest, node_id, tree):
        sid = item.sid

        if isinstance(item, lang.Block):
            return [('', _advance(config, item.stmts + rest).executed(sid))]

        if isinstance(item, lang.Decl):
            if item.init is None:
                default = NULL if item.type.is_pointer else Lin.of(0)
                after = _advance(config, rest).executed(sid)
                return [('', _bind(after, item.name, default))]
            return self._assign(config, rest, sid, item.name, item.init)

        if isinstance(item, lang.Assign):
            return self._assign(config, rest, sid, item.target, item.value)

        if isinstance(item, lang.FieldWrite):
            children = []
            for c, base in self._eval(config, item.base):
                self._object(c, base)
                c = _advance(c, rest).executed(sid)
                value = item.value
                if isinstance(value, lang.Call):
                    children += self._call(c, value, ('field', base,
                            item.field), sid, item.value.name)
                elif isinstance(value, lang.Alloc):
                    c, addr = self._allocate(c, value.struct, value.struct)
                    children.append(('', _write_field(c, base, item.field,
                            addr)))
                else:
                    for c2, v in self._eval(c, value):
                        children.append(('', _write_field(c2, base,
                                item.field, v)))
            return children

        if isinstance(item, lang.If):
            children = []
            for c, truth in self._conditions(config, item.cond):
                c = c.executed(sid)
                if truth:
                    children.append(('then', _advance(c, (item.then,) + rest)))
                elif item.orelse is not None:
                    children.append(('else',
                            _advance(c, (item.orelse,) + rest)))
                else:
                    children.append(('else', _advance(c, rest)))
            return children

        if isinstance(item, lang.While):
            return self._loop(config, item, rest, node_id, tree)

        if isinstance(item, lang.Return):
            if item.value is None:
                return [('', c) for c in
                        self._return(_advance(config, rest).executed(sid),
                            None)]
            if isinstance(item.value, lang.Call):
                c = _advance(config, rest).executed(sid)
                return self._call(c, item.value, ('return',), sid,
                        item.value.name)
            if isinstance(item.value, lang.Alloc):
                c = _advance(config, rest).executed(sid)
                c, addr = self._allocate(c, item.value.struct,
                        item.value.struct)
                return [('', r) for r in self._return(c, addr)]
            children = []
            for c, value in self._eval(config, item.value):
                c = _advance(c, rest).executed(sid)
                children += [('', r) for r in self._return(c, value)]
            return children

        if isinstance(item, lang.ExprStmt):
            c = _advance(config, rest).executed(sid)
            return self._call(c, item.expr, ('discard',), sid, item.expr.name)

        raise TypeError('not a statement: %r' % (item,))

    def _assign(self, config, rest, sid, name, value):
        if isinstance(value, lang.Call):
            c = _advance(config, rest).executed(sid)
            return self._call(c, value, ('var', name), sid, value.name)
        if isinstance(value, lang.Alloc):
            c = _advance(config, rest).executed(sid)
            c, addr = self._allocate(c, value.struct, name)
            return [('', _assign_var(c, name, addr))]
        children = []
        for c, v in self._eval(config, value):
            c = _advance(c, rest).executed(sid)
            children.append(('', _assign_var(c, name, v)))
        return children

    def _loop(self, config, item, rest, node_id, tree):
        sid = item.sid
        results = self._conditions(config, item.cond)
        frame = config.frame
        count = frame.loop_counts.get(sid, 0)
        key = (len(config.stack), sid)

        if self.abstract:
            current = ProgState(config, sid)
            for recorded_id, recorded in config.recorded.get(key, ()):
                if abstract_subsumes(recorded, current):
                    log.debug('%s: guard %d folded onto node %d',
                            self.call.function, sid, recorded_id)
                    tree.folds.append((node_id, recorded_id))
                    c = _exit_loop(config.executed(sid), rest, sid, key)
                    return [('fold', c.replace(asub=True))]
            if count >= self.safety_net:
                message = '%s: loop %d unrolled %d times without folding'
                raise SafetyNetError(message % (self.call.function, sid,
                        count))
            recorded = dict(config.recorded)
            recorded[key] = recorded.get(key, ()) + ((node_id, current),)
            results = [(c.replace(recorded=recorded), t) for c, t in results]

        children = []
        for c, truth in results:
            c = c.executed(sid)
            if not truth:
                children.append(('else', _exit_loop(c, rest, sid, key)))
                continue
            if not self.abstract and count >= self.max_unroll:
                leaf = c.replace(status=BOUNDED, result=UNINIT,
                        final_env=c.env)
                children.append(('bounded', leaf))
                continue
            counts = dict(frame.loop_counts)
            counts[sid] = count + 1
            body = replace(c.frame, work=(item.body, item) + rest,
                    loop_counts=MappingProxyType(counts))
            children.append(('then', c.with_frame(body)))
        return children

    def _call(self, config, call, resume, sid, name):
        callee = self.program.function(name)
        children = []
        for c, values in self._eval_all(config, call.args):
            if any(f.function == name for f in c.stack):
                c, outcome = self._recursion(c, name, resume)
                if outcome:
                    children += outcome
                    continue
            env = dict(zip(callee.param_names, values))
            frame = Frame(name, (callee.body,), MappingProxyType(env),
                    resume, call_sid=sid)
            c = c.replace(stack=c.stack + (frame,))
            for param, param_type in callee.params:
                if param_type.is_pointer:
                    c = record_write(c, LocationId.variable(param))
            children.append(('call', c))
        return children

    def _recursion(self, config, name, resume):
        """
        Checks a recursive call to name. Returns the configuration the
        call proceeds from and the children replacing the call, if any.
        """
        depth = sum(1 for f in config.stack if f.function == name)
        key = ('call', name)
        if not self.abstract:
            if depth > self.max_unroll:
                leaf = config.replace(status=BOUNDED, result=UNINIT,
                        final_env=config.env)
                return config, [('bounded', leaf)]
            return config, []
        current = ProgState(config, key)
        for _, recorded in config.recorded.get(key, ()):
            if abstract_subsumes(recorded, current):
                log.debug('%s: recursive call to %s folded',
                        self.call.function, name)
                folded = config.replace(asub=True)
                return config, [('fold', c) for c in
                        _deliver(folded, resume, UNINIT)]
        if depth > self.safety_net:
            message = '%s: recursion into %s %d deep without folding'
            raise SafetyNetError(message % (self.call.function, name, depth))
        recorded = dict(config.recorded)
        recorded[key] = recorded.get(key, ()) + ((None, current),)
        return config.replace(recorded=recorded), []

    def _return(self, config, value):
        return _return(config, value)

    def _allocate(self, config, struct, name):
        struct_def = self.program.struct(struct)
        label = name
        suffix = 1
        taken = set(config.roots) | {a.root for a in config.heap} | \
            {a.root for a in config.init_heap}
        while label in taken:
            suffix += 1
            label = '%s#%d' % (name, suffix)
        addr = root(label)
        obj = HeapObject.build(struct, {n: (NULL if t.is_pointer
                else Lin.of(0)) for n, t in struct_def.fields})
        roots = dict(config.roots)
        roots[label] = struct
        config = config.with_object(addr, obj).replace(roots=roots,
                allocations=config.allocations + (addr,))
        return config, addr

    # evaluation

    def _object(self, config, addr):
        if not isinstance(addr, SymAddr):
            raise _Fault('dereference of an uninitialized pointer')
        if addr.is_null:
            raise _Fault('null dereference')
        if addr not in config.heap:
            raise NeedInit(addr)
        return config.heap[addr]

    def _read(self, config, base, name):
        obj = self._object(config, base)
        value = obj.get(name)
        if value is UNINIT:
            struct_def = self.program.struct(obj.struct)
            if struct_def.field_type(name).is_pointer:
                return base.field(name)
        return value

    def _eval_all(self, config, exprs):
        results = [(config, ())]
        for expr in exprs:
            extended = []
            for c, values in results:
                for c2, v in self._eval(c, expr):
                    extended.append((c2, values + (v,)))
            results = extended
        return results

    def _conditions(self, config, expr):
        results = []
        for c, value in self._eval(config, expr):
            results += self._truth(c, value)
        return results

    def _truth(self, config, value):
        if value is UNINIT:
            return [(config, True), (config, False)]
        if isinstance(value, SymAddr):
            return [(config, not value.is_null)]
        return self._branch(config, cmp(value, '!=', 0))

    def _branch(self, config, atom):
        truth = atom.truth
        if truth is not None:
            return [(config, truth)]
        results = []
        for outcome, assumed in ((True, atom), (False, atom.negate())):
            c = config.assume(assumed)
            if feasible(c.path):
                results.append((c, outcome))
        return results

    def _eval(self, config, expr):
        if isinstance(expr, lang.IntLit):
            return [(config, Lin.of(expr.value))]
        if isinstance(expr, lang.Null):
            return [(config, NULL)]
        if isinstance(expr, lang.Var):
            return [(config, config.env[expr.name])]
        if isinstance(expr, lang.Field):
            return [(c, self._read(c, base, expr.field))
                    for c, base in self._eval(config, expr.base)]
        if isinstance(expr, lang.Unary):
            results = []
            for c, value in self._eval(config, expr.operand):
                if value is UNINIT:
                    results.append((c, UNINIT))
                elif expr.op == '-':
                    results.append((c, -value))
                else:
                    results += [(c2, Lin.of(int(not t)))
                            for c2, t in self._truth(c, value)]
            return results
        if isinstance(expr, lang.Logical):
            results = []
            for c, truth in self._conditions(config, expr.left):
                if (expr.op == '&&') != truth:
                    results.append((c, Lin.of(int(truth))))
                    continue
                results += [(c2, Lin.of(int(t)))
                        for c2, t in self._conditions(c, expr.right)]
            return results
        if isinstance(expr, lang.Binary):
            results = []
            for c, left in self._eval(config, expr.left):
                for c2, right in self._eval(c, expr.right):
                    results += self._binary(c2, expr.op, left, right)
            return results
        if isinstance(expr, (lang.Call, lang.Alloc)):
            raise TypeError('call in expression position: %r' % (expr,))
        raise TypeError('not an expression: %r' % (expr,))

    def _binary(self, config, op, left, right):
        if left is UNINIT or right is UNINIT:
            if op in ('+', '-', '*'):
                return [(config, UNINIT)]
            return [(config, Lin.of(1)), (config, Lin.of(0))]
        if isinstance(left, SymAddr) or isinstance(right, SymAddr):
            for addr in (left, right):
                if not addr.is_null and addr not in config.heap:
                    raise NeedInit(addr)
            same = left == right
            return [(config, Lin.of(int(same == (op == '=='))))]
        if op == '+':
            return [(config, left + right)]
        if op == '-':
            return [(config, left - right)]
        if op == '*':
            try:
                return [(config, left * right)]
            except NonLinearError as error:
                raise _Fault(str(error))
        atom = cmp(left, '=' if op == '==' else op, right)
        return [(c, Lin.of(int(t))) for c, t in self._branch(config, atom)]


# transitions

def _advance(config, work):
    return config.with_frame(replace(config.frame, work=tuple(work)))


def _bind(config, name, value):
    return config.with_frame(config.frame.with_env(name, value))


def _assign_var(config, name, value):
    return record_write(_bind(config, name, value), LocationId.variable(name))


def _write_field(config, addr, name, value):
    obj = config.heap[addr].set(name, value)
    return record_write(config.with_object(addr, obj),
            LocationId.field_of(addr, name))


def _exit_loop(config, rest, sid, key):
    frame = config.frame
    counts = dict(frame.loop_counts)
    counts.pop(sid, None)
    frame = replace(frame, work=tuple(rest),
            loop_counts=MappingProxyType(counts))
    recorded = dict(config.recorded)
    recorded.pop(key, None)
    return config.with_frame(frame).replace(recorded=recorded)


def _return(config, value):
    frame = config.frame
    if len(config.stack) == 1:
        return [config.replace(stack=(), status=RETURNED, result=value,
                final_env=frame.env)]
    caller = config.replace(stack=config.stack[:-1])
    return _deliver(caller, frame.resume, value)


def _deliver(config, resume, value):
    kind = resume[0]
    if kind == 'var':
        return [_assign_var(config, resume[1], value)]
    if kind == 'field':
        return [_write_field(config, resume[1], resume[2], value)]
    if kind == 'return':
        return _return(config, value)
    return [config]


# lazy initialization

def _struct_of(program, config, addr):
    parent = addr.parent
    if parent is None:
        return config.roots[addr.root]
    base, name = parent
    obj = config.heap.get(base) or config.init_heap.get(base)
    return program.struct(obj.struct).field_type(name).struct


def _link(heap, base, name, value):
    obj = heap.get(base)
    if obj is not None and obj.get(name) is UNINIT:
        heap[base] = obj.set(name, value)
    return heap


def lazy_init_split(program, config, addr):
    """
    Returns the labelled successors of config for the first use of addr:
    the object case, where addr holds a fresh object, and the null case,
    where addr is NULL. Infeasible cases are dropped; an address that is
    NULL or already initialized yields config itself.
    """
    if addr.is_null or addr in config.heap:
        return [('', config)]
    struct = _struct_of(program, config, addr)
    obj = fresh_object(program.struct(struct), addr)
    parent = addr.parent

    heap = dict(config.heap)
    heap[addr] = obj
    init_heap = dict(config.init_heap)
    init_heap[addr] = obj
    if parent is not None:
        _link(heap, parent[0], parent[1], addr)
        _link(init_heap, parent[0], parent[1], addr)
    object_case = config.replace(heap=heap, init_heap=init_heap).assume(
            addr_neq(addr, NULL))

    def swap(value):
        return NULL if value == addr else value

    heap = {a: o.map_values(swap) for a, o in config.heap.items()}
    stack = tuple(replace(f, env=MappingProxyType({n: swap(v)
            for n, v in f.env.items()})) for f in config.stack)
    init_heap = dict(config.init_heap)
    if parent is not None:
        _link(heap, parent[0], parent[1], NULL)
        _link(init_heap, parent[0], parent[1], NULL)
    else:
        init_heap[addr] = None
    null_case = config.replace(stack=stack, heap=heap,
            init_heap=init_heap).assume(addr_eq(addr, NULL))

    children = []
    for label, child in (('lazyInit-object', object_case),
            ('lazyInit-null', null_case)):
        if feasible(child.path):
            children.append((label, child))
    log.debug('lazy initialization of %s: %d cases', addr, len(children))
    return children


def lazy_init(program, state, addr):
    """
    ProgState form of lazy_init_split: one or two successor states with
    the same program counter.
    """
    return [ProgState(c, state.pc)
            for _, c in lazy_init_split(program, state.config, addr)]


# drivers

def explore(program, call, max_unroll=DEFAULT_UNROLL, abstract=False,
        safety_net=DEFAULT_SAFETY_NET):
    return SymbolicExecutor(program, call, max_unroll, abstract,
            safety_net).run()


def se(program, call, max_unroll=DEFAULT_UNROLL):
    """
    Bounded symbolic execution; returns every leaf configuration.
    """
    return explore(program, call, max_unroll).leaves


def se_abstract(program, call, safety_net=DEFAULT_SAFETY_NET):
    """
    Symbolic execution with loops and recursion folded by abstract
    subsumption; returns every leaf configuration.
    """
    return explore(program, call, abstract=True,
            safety_net=safety_net).leaves


# concretization and replay

@dataclass
class Concretization:
    state: ConcreteState
    args: List[object]
    refs: Dict[SymAddr, Ref]
    model: Dict[object, int]

    def value(self, value, value_type=None):
        return _concrete(value, self.model, self.refs, value_type)


@dataclass
class Replay:
    """
    Outcome of running a leaf's concrete instance: the concrete result
    and every disagreement with the symbolic leaf.
    """
    result: object
    mismatches: List[str]

    @property
    def agrees(self):
        return not self.mismatches


def _concrete(value, model, refs, value_type=None):
    if isinstance(value, Lin):
        return value.evaluate(model)
    if isinstance(value, SymAddr):
        return refs.get(value)
    if value is UNINIT and value_type is not None and \
            not value_type.is_pointer:
        return 0
    return None


def leaf_symbols(call, leaf):
    symbols = set(leaf.path.symbols())
    values = list(call.args)
    for heap in (leaf.heap, leaf.init_heap):
        for obj in heap.values():
            if obj is not None:
                values.extend(v for _, v in obj.fields)
    values.append(leaf.result)
    for value in values:
        if isinstance(value, Lin):
            symbols |= value.symbols()
    return symbols


def concretize(program, call, leaf, model):
    """
    Instantiates the leaf's initial heap and the call's arguments under
    model. Symbols missing from model default to 0; initial objects get
    references 1..n in address order.
    """
    ints = {s: 0 for s in leaf_symbols(call, leaf)}
    ints.update((k, v) for k, v in model.items() if isinstance(k, str))
    objects = sorted((a for a, o in leaf.init_heap.items() if o is not None),
            key=str)
    state = ConcreteState()
    refs = {}
    for addr in objects:
        refs[addr] = Ref(state.next_ref)
        state.next_ref += 1
    for addr in objects:
        obj = leaf.init_heap[addr]
        struct_def = program.struct(obj.struct)
        state.heap[refs[addr]] = ConcreteObject(obj.struct,
                {n: _concrete(v, ints, refs, struct_def.field_type(n))
                    for n, v in obj.fields})
    definition = program.function(call.function)
    args = []
    for value, (name, param_type) in zip(call.args, definition.params):
        concrete = _concrete(value, ints, refs, param_type)
        state.env[name] = concrete
        args.append(concrete)
    full = dict(ints)
    for addr in leaf.path.addresses():
        full[addr] = refs[addr].id if addr in refs else 0
    return Concretization(state, args, refs, full)


def concretize_and_replay(program, call, leaf, model):
    """
    Runs the concrete instance of leaf under model and compares trace,
    return value and final heap with the symbolic leaf.
    """
    if leaf.asub:
        raise ReplayRejected('leaf was folded by abstraction')
    if leaf.status != RETURNED:
        raise ReplayRejected('leaf ended with status %s' % leaf.status)
    instance = concretize(program, call, leaf, model)
    if not leaf.path.evaluate(instance.model):
        message = 'model %r does not satisfy the path condition %s'
        raise ReplayRejected(message % (model, leaf.path))
    result = run_concrete(program, call.function, instance.args,
            instance.state)
    refs = dict(instance.refs)
    next_ref = instance.state.next_ref
    for addr in leaf.allocations:
        refs[addr] = Ref(next_ref)
        next_ref += 1

    mismatches = []
    if result.trace != list(leaf.trace):
        mismatches.append('trace %s != %s' % (result.trace, list(leaf.trace)))
    if leaf.result is None:
        expected = NO_VALUE
    else:
        expected = _concrete(leaf.result, instance.model, refs)
    if result.return_value != expected:
        mismatches.append('return %r != %r' % (result.return_value,
                expected))
    for addr, obj in sorted(leaf.heap.items(), key=lambda i: str(i[0])):
        actual = result.final_state.heap.get(refs.get(addr))
        if actual is None:
            mismatches.append('no object for %s' % addr)
            continue
        for name, value in obj.fields:
            if value is UNINIT:
                continue
            want = _concrete(value, instance.model, refs)
            if actual.fields.get(name) != want:
                mismatches.append('%s.%s: %r != %r' % (addr, name,
                        actual.fields.get(name), want))
    return Replay(result, mismatches)


def leaf_models(program, call, leaf, int_range=(0, 3), limit=None):
    """
    Yields, in a fixed order, the assignments of the leaf's symbols to
    ints in int_range whose concretization satisfies the path condition.
    """
    lo, hi = int_range
    symbols = sorted(leaf_symbols(call, leaf))
    found = 0
    for values in itertools.product(range(lo, hi + 1), repeat=len(symbols)):
        model = dict(zip(symbols, values))
        if leaf.path.evaluate(concretize(program, call, leaf, model).model):
            yield model
            found += 1
            if limit is not None and found >= limit:
                return
