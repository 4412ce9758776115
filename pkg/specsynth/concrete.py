"""
Reference interpreter for the C fragment over concrete heaps.

Used to run modifiers on generated test inputs during refinement, to
evaluate observers on concrete states and as the oracle the symbolic
engine is replayed against. Null dereferences and exhausted step
budgets are reported as statuses of the result, never raised.
"""

import copy
import enum
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from specsynth import lang
from specsynth.errors import CallError

log = logging.getLogger(__name__)

DEFAULT_STEP_LIMIT = 100000
# nested calls deeper than this are reported like an exhausted step budget
MAX_CALL_DEPTH = 100


class Status(enum.Enum):
    OK = 'ok'
    NULL_DEREF = 'nullDeref'
    STEP_LIMIT = 'stepLimit'


@dataclass(frozen=True, order=True)
class Ref:
    """
    Reference to a concrete heap object. NULL is represented by None.
    """
    id: int

    def __str__(self):
        return '#%d' % self.id


class _NoValue(object):
    def __repr__(self):
        return 'NO_VALUE'


# return value of void functions
NO_VALUE = _NoValue()


@dataclass
class ConcreteObject:
    struct: str
    fields: Dict[str, object]

    def __str__(self):
        inner = ', '.join('%s=%s' % (n, _format(v))
                for n, v in self.fields.items())
        return '%s(%s)' % (self.struct, inner)


@dataclass
class ConcreteState:
    """
    Variable bindings of the caller, the heap and the allocation counter.
    """
    env: Dict[str, object] = field(default_factory=dict)
    heap: Dict[Ref, ConcreteObject] = field(default_factory=dict)
    next_ref: int = 1

    def allocate(self, struct_def):
        ref = Ref(self.next_ref)
        self.next_ref += 1
        # fields of fresh objects read as zero/NULL
        self.heap[ref] = ConcreteObject(struct_def.name,
                {n: (None if t.is_pointer else 0)
                    for n, t in struct_def.fields})
        return ref

    def copy(self):
        return copy.deepcopy(self)

    def __str__(self):
        env = ', '.join('%s=%s' % (n, _format(v))
                for n, v in sorted(self.env.items()))
        heap = ', '.join('%s:%s' % (r, o)
                for r, o in sorted(self.heap.items()))
        return '{%s | %s}' % (env, heap)


@dataclass
class ConcreteResult:
    return_value: object
    final_state: ConcreteState
    trace: List[int]
    status: Status
    steps: int = 0

    @property
    def ok(self):
        return self.status is Status.OK


def _format(value):
    if value is None:
        return 'NULL'
    return str(value)


class _NullDereference(Exception):
    pass


class _StepLimit(Exception):
    pass


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _Interpreter(object):
    def __init__(self, program, state, step_limit):
        self.program = program
        self.state = state
        self.step_limit = step_limit
        self.steps = 0
        self.depth = 0
        self.trace = []

    def tick(self, sid):
        self.steps += 1
        if self.steps > self.step_limit:
            raise _StepLimit()
        self.trace.append(sid)

    def call(self, name, args):
        function = self.program.function(name)
        env = dict(zip(function.param_names, args))
        if self.depth >= MAX_CALL_DEPTH:
            raise _StepLimit()
        self.depth += 1
        try:
            self.execute(function.body, env)
        except _Return as returned:
            return returned.value
        finally:
            self.depth -= 1
        return NO_VALUE

    def execute(self, stmt, env):
        self.tick(stmt.sid)
        if isinstance(stmt, lang.Block):
            for inner in stmt.stmts:
                self.execute(inner, env)
        elif isinstance(stmt, lang.Decl):
            if stmt.init is not None:
                env[stmt.name] = self.rhs(stmt.init, env)
            else:
                env[stmt.name] = None if stmt.type.is_pointer else 0
        elif isinstance(stmt, lang.Assign):
            env[stmt.target] = self.rhs(stmt.value, env)
        elif isinstance(stmt, lang.FieldWrite):
            ref = self.evaluate(stmt.base, env)
            value = self.rhs(stmt.value, env)
            self.deref(ref).fields[stmt.field] = value
        elif isinstance(stmt, lang.If):
            if self.evaluate(stmt.cond, env):
                self.execute(stmt.then, env)
            elif stmt.orelse is not None:
                self.execute(stmt.orelse, env)
        elif isinstance(stmt, lang.While):
            while self.evaluate(stmt.cond, env):
                self.execute(stmt.body, env)
                # every guard evaluation is a step of its own
                self.tick(stmt.sid)
        elif isinstance(stmt, lang.Return):
            value = NO_VALUE
            if stmt.value is not None:
                value = self.rhs(stmt.value, env)
            raise _Return(value)
        elif isinstance(stmt, lang.ExprStmt):
            self.rhs(stmt.expr, env)
        else:
            raise TypeError('not a statement: %r' % (stmt,))

    def deref(self, ref):
        if ref is None:
            raise _NullDereference()
        return self.state.heap[ref]

    def rhs(self, expr, env):
        if isinstance(expr, lang.Call):
            args = [self.evaluate(a, env) for a in expr.args]
            return self.call(expr.name, args)
        if isinstance(expr, lang.Alloc):
            return self.state.allocate(self.program.struct(expr.struct))
        return self.evaluate(expr, env)

    def evaluate(self, expr, env):
        if isinstance(expr, lang.IntLit):
            return expr.value
        if isinstance(expr, lang.Null):
            return None
        if isinstance(expr, lang.Var):
            return env[expr.name]
        if isinstance(expr, lang.Field):
            ref = self.evaluate(expr.base, env)
            return self.deref(ref).fields[expr.field]
        if isinstance(expr, lang.Unary):
            operand = self.evaluate(expr.operand, env)
            if expr.op == '!':
                return int(not operand)
            return -operand
        if isinstance(expr, lang.Logical):
            left = self.evaluate(expr.left, env)
            if expr.op == '&&':
                if not left:
                    return 0
            elif left:
                return 1
            return int(bool(self.evaluate(expr.right, env)))
        if isinstance(expr, lang.Binary):
            left = self.evaluate(expr.left, env)
            right = self.evaluate(expr.right, env)
            return _BINARY[expr.op](left, right)
        raise TypeError('not an expression: %r' % (expr,))


_BINARY = {
    '+': lambda a, b: a + b,
    '-': lambda a, b: a - b,
    '*': lambda a, b: a * b,
    '==': lambda a, b: int(a == b),
    '!=': lambda a, b: int(a != b),
    '<': lambda a, b: int(a < b),
    '<=': lambda a, b: int(a <= b),
    '>': lambda a, b: int(a > b),
    '>=': lambda a, b: int(a >= b),
}


def check_call(program, function, args, state):
    """
    Raises CallError unless args fit the parameters of function.
    """
    if not program.has_function(function):
        raise CallError('unknown function %s' % function)
    definition = program.function(function)
    if len(args) != len(definition.params):
        message = '%s expects %d arguments, got %d'
        raise CallError(message % (function, len(definition.params),
                len(args)))
    for value, (name, param_type) in zip(args, definition.params):
        if param_type.is_pointer:
            if value is None:
                continue
            if not isinstance(value, Ref) or value not in state.heap:
                message = 'argument %s of %s is not a heap reference: %r'
                raise CallError(message % (name, function, value))
            if state.heap[value].struct != param_type.struct:
                message = 'argument %s of %s points to struct %s, not %s'
                raise CallError(message % (name, function,
                        state.heap[value].struct, param_type.struct))
        elif isinstance(value, bool) or not isinstance(value, int):
            message = 'argument %s of %s is not an int: %r'
            raise CallError(message % (name, function, value))


def run(program, function, args, state, step_limit=DEFAULT_STEP_LIMIT):
    """
    Runs function(args) on a copy of state and returns a ConcreteResult.
    The input state is left untouched.
    """
    if step_limit <= 0:
        raise ValueError('step_limit must be positive, got %r' % step_limit)
    check_call(program, function, args, state)
    interpreter = _Interpreter(program, state.copy(), step_limit)
    status = Status.OK
    value = NO_VALUE
    try:
        value = interpreter.call(function, list(args))
    except _NullDereference:
        status = Status.NULL_DEREF
    except (_StepLimit, RecursionError):
        status = Status.STEP_LIMIT
        log.debug('%s stopped after %d steps', function, step_limit)
    return ConcreteResult(value, interpreter.state, interpreter.trace,
            status, interpreter.steps)


def heap_delta(before, after):
    """
    Lists the differences between two heaps as (ref, field, old, new)
    tuples; created objects are reported with field None.
    """
    delta = []
    for ref in sorted(set(before.heap) | set(after.heap)):
        if ref not in before.heap:
            delta.append((ref, None, None, after.heap[ref]))
            continue
        if ref not in after.heap:
            delta.append((ref, None, before.heap[ref], None))
            continue
        old, new = before.heap[ref].fields, after.heap[ref].fields
        for name in old:
            if old[name] != new.get(name):
                delta.append((ref, name, old[name], new.get(name)))
    return delta


# set-shaped states of the corpus

SET_STRUCT = 'set'
NODE_STRUCT = 'lnode'


def build_state(values=(), size=None, capacity=None, null=False, name='s'):
    """
    Builds a state binding name to a set whose elems list holds values in
    order. size defaults to the number of values and capacity to size.
    With null=True the variable is bound to NULL instead.
    """
    state = ConcreteState()
    if null:
        state.env[name] = None
        return state
    values = list(values)
    size = len(values) if size is None else size
    capacity = size if capacity is None else capacity
    head = None
    refs = []
    for _ in values:
        refs.append(Ref(state.next_ref))
        state.next_ref += 1
    set_ref = Ref(state.next_ref)
    state.next_ref += 1
    for index, ref in enumerate(refs):
        following = refs[index + 1] if index + 1 < len(refs) else None
        state.heap[ref] = ConcreteObject(NODE_STRUCT,
                {'value': values[index], 'next': following})
    if refs:
        head = refs[0]
    state.heap[set_ref] = ConcreteObject(SET_STRUCT,
            {'capacity': capacity, 'size': size, 'elems': head})
    state.env[name] = set_ref
    return state


# generic input descriptions
#
# An input is described independently of object identities: an int
# parameter by its value, a pointer parameter by None or by a chain, the
# tuple of object descriptions reached by following the struct's
# self-referential field. An object description is a tuple of
# (field, description) pairs for its remaining fields.

def self_field(struct_def):
    """
    Name of the first field of struct_def pointing to its own struct.
    """
    for name, field_type in struct_def.fields:
        if field_type.is_pointer and field_type.struct == struct_def.name:
            return name
    return None


def _chain_lengths(struct_def, max_len):
    if self_field(struct_def) is None:
        return range(0, 2)
    return range(0, max_len + 1)


def random_description(program, param_type, rng, value_domain, max_len,
        depth=0):
    lo, hi = value_domain
    if not param_type.is_pointer:
        return rng.randint(lo, hi)
    struct_def = program.struct(param_type.struct)
    length = rng.choice(list(_chain_lengths(struct_def, max_len)))
    if depth > 2:
        length = 0
    link = self_field(struct_def)
    chain = []
    for _ in range(length):
        entries = []
        for name, field_type in struct_def.fields:
            if name == link:
                continue
            entries.append((name, random_description(program, field_type,
                    rng, value_domain, max_len, depth + 1)))
        chain.append(tuple(entries))
    return tuple(chain) if length else None


def enumerate_descriptions(program, param_type, values, max_len, depth=0):
    """
    Yields every description of param_type with ints drawn from values
    and chains of at most max_len objects.
    """
    if not param_type.is_pointer:
        yield from values
        return
    struct_def = program.struct(param_type.struct)
    link = self_field(struct_def)
    others = [(n, t) for n, t in struct_def.fields if n != link]
    lengths = [0] if depth > 2 else _chain_lengths(struct_def, max_len)

    def objects():
        choices = [list(enumerate_descriptions(program, t, values, max_len,
                depth + 1)) for _, t in others]
        for combination in itertools.product(*choices):
            yield tuple(zip((n for n, _ in others), combination))

    for length in lengths:
        if length == 0:
            yield None
            continue
        for chain in itertools.product(list(objects()), repeat=length):
            yield tuple(chain)


def enumerate_inputs(program, function, values, max_len):
    """
    Yields every input description (a tuple, one entry per parameter)
    of function within the bounds.
    """
    definition = program.function(function)
    choices = [list(enumerate_descriptions(program, t, values, max_len))
            for _, t in definition.params]
    yield from itertools.product(*choices)


def random_inputs(program, function, rng, value_domain, max_len):
    definition = program.function(function)
    return tuple(random_description(program, t, rng, value_domain, max_len)
            for _, t in definition.params)


def materialize(program, function, description):
    """
    Builds (state, args) from an input description of function. The
    state's env binds every parameter name.
    """
    definition = program.function(function)
    state = ConcreteState()
    args = []
    for (name, param_type), entry in zip(definition.params, description):
        value = _build(program, state, param_type, entry)
        state.env[name] = value
        args.append(value)
    return state, args


def _build(program, state, value_type, entry):
    if not value_type.is_pointer:
        return entry
    if entry is None:
        return None
    struct_def = program.struct(value_type.struct)
    link = self_field(struct_def)
    refs = [state.allocate(struct_def) for _ in entry]
    for index, (ref, entries) in enumerate(zip(refs, entry)):
        fields = state.heap[ref].fields
        for name, sub in entries:
            fields[name] = _build(program, state,
                    struct_def.field_type(name), sub)
        if link is not None:
            fields[link] = refs[index + 1] if index + 1 < len(refs) else None
    return refs[0]


def shrink_candidates(description):
    """
    Yields descriptions with one chain node bypassed, outermost chains
    first.
    """
    for index, entry in enumerate(description):
        for smaller in _shrink_entry(entry):
            yield description[:index] + (smaller,) + description[index + 1:]


def _shrink_entry(entry):
    if not isinstance(entry, tuple):
        return
    for position in range(len(entry)):
        rest = entry[:position] + entry[position + 1:]
        yield rest if rest else None
    for position, obj in enumerate(entry):
        for slot, (name, sub) in enumerate(obj):
            for smaller in _shrink_entry(sub):
                changed = obj[:slot] + ((name, smaller),) + obj[slot + 1:]
                yield entry[:position] + (changed,) + entry[position + 1:]


def describe(description):
    """
    Short text form of an input description for diagnostics.
    """
    return '(%s)' % ', '.join(_describe_entry(e) for e in description)


def _describe_entry(entry):
    if entry is None:
        return 'NULL'
    if not isinstance(entry, tuple):
        return str(entry)
    objects = []
    for obj in entry:
        objects.append('{%s}' % ', '.join('%s: %s' % (n, _describe_entry(v))
                for n, v in obj))
    return '[%s]' % ' -> '.join(objects)
