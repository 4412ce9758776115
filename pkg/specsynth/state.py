"""
Configuration model shared by the symbolic engine and the abstraction:
symbolic addresses and values, heap objects, call frames, symbolic
configurations (the k/env/heap/init-heap/path-condition/aSubFlag/
locations cells) and the state constraint of a program state.
"""

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Optional, Tuple

from specsynth.constraints import TRUE, Formula, Lin, addr_neq, cmp


@dataclass(frozen=True)
class SymAddr:
    """
    A symbolic heap address: NULL, a root (&s) or a field path rooted at
    one (&s.elems.next). Lazily materialized objects are named by the
    path through which they were first reached.
    """
    root: Optional[str] = None
    path: Tuple[str, ...] = ()

    @property
    def is_null(self):
        return self.root is None

    def field(self, name):
        if self.is_null:
            raise ValueError('NULL has no fields')
        return SymAddr(self.root, self.path + (name,))

    @property
    def parent(self):
        # (base address, field name) this address was read through
        if self.is_null or not self.path:
            return None
        return SymAddr(self.root, self.path[:-1]), self.path[-1]

    @property
    def label(self):
        if self.is_null:
            return 'NULL'
        return '.'.join((self.root,) + self.path)

    def __str__(self):
        if self.is_null:
            return 'NULL'
        return '&' + self.label

    def __repr__(self):
        return 'SymAddr(%s)' % self


NULL = SymAddr()


def root(name):
    return SymAddr(name)


class _Uninit(object):
    """
    The value of memory that was never written nor lazily initialized.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_Uninit, cls).__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'UNINIT'

    def __str__(self):
        return 'uninit'


UNINIT = _Uninit()


def is_pointer_value(value):
    return isinstance(value, SymAddr)


def format_value(value):
    if isinstance(value, Lin) and value.is_const():
        return 'tv(int, %d)' % value.const
    return str(value)


def field_symbol(addr, field_name):
    # symbol standing for the initial value of a lazily read scalar field
    return '%s.%s' % (addr.label, field_name)


def location_symbol(addr, field_name):
    return '&%s.%s' % (addr.label, field_name)


def variable_symbol(name):
    return '$%s' % name


def _frozen(mapping):
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class HeapObject:
    """
    One struct object of the heap cell: its tag and field values
    (Lin for int fields, SymAddr or UNINIT for pointer fields).
    """
    struct: str
    fields: Tuple[Tuple[str, object], ...]

    @classmethod
    def build(cls, struct, values):
        return cls(struct, tuple(values.items()))

    def get(self, name):
        for field_name, value in self.fields:
            if field_name == name:
                return value
        raise KeyError('%s has no field %s' % (self.struct, name))

    def set(self, name, value):
        if name not in self.field_names:
            raise KeyError('%s has no field %s' % (self.struct, name))
        return HeapObject(self.struct, tuple((n, value if n == name else v)
                for n, v in self.fields))

    @property
    def field_names(self):
        return tuple(n for n, _ in self.fields)

    def map_values(self, function):
        return HeapObject(self.struct, tuple((n, function(v))
                for n, v in self.fields))

    def __str__(self):
        inner = ', '.join('%s |-> %s' % (n, format_value(v))
                for n, v in self.fields)
        return '(%s)' % inner


def fresh_object(struct_def, addr):
    """
    Object for a lazily initialized address: scalar fields get symbols
    named by their field path, pointer fields stay uninitialized.
    """
    values = {}
    for name, field_type in struct_def.fields:
        if field_type.is_pointer:
            values[name] = UNINIT
        else:
            values[name] = Lin.sym(field_symbol(addr, name))
    return HeapObject.build(struct_def.name, values)


def blank_object(struct_def):
    return HeapObject.build(struct_def.name,
            {name: UNINIT for name in struct_def.field_names})


@dataclass(frozen=True)
class LocationId:
    """
    A written program location: a variable or a field of an object.
    """
    var: Optional[str] = None
    addr: Optional[SymAddr] = None
    field: Optional[str] = None

    @classmethod
    def variable(cls, name):
        return cls(var=name)

    @classmethod
    def field_of(cls, addr, name):
        return cls(addr=addr, field=name)

    def __str__(self):
        if self.var is not None:
            return self.var
        return '%s->%s' % (self.addr.label, self.field)


@dataclass(frozen=True)
class Frame:
    """
    One pending function activation: remaining work items, variable
    bindings, how the return value reaches the caller and the per-loop
    unrolling counters.
    """
    function: str
    work: Tuple[object, ...]
    env: MappingProxyType
    resume: Tuple[object, ...] = ('discard',)
    loop_counts: MappingProxyType = field(
            default_factory=lambda: _frozen({}))
    call_sid: Optional[int] = None

    def with_env(self, name, value):
        env = dict(self.env)
        env[name] = value
        return replace(self, env=_frozen(env))


# leaf statuses
RUNNING = 'running'
RETURNED = 'returned'
ERROR = 'error'
STUCK = 'stuck'
BOUNDED = 'bounded'


@dataclass(frozen=True)
class SymbolicConfiguration:
    """
    A pattern: continuation (call frames, or the final value once the
    root call returned), heap, initial heap assumptions, path
    condition, abstract-subsumption flag and written locations.

    Configurations are values; every transition builds a new one.
    """
    stack: Tuple[Frame, ...] = ()
    heap: MappingProxyType = field(default_factory=lambda: _frozen({}))
    init_heap: MappingProxyType = field(default_factory=lambda: _frozen({}))
    path: Formula = TRUE
    asub: bool = False
    locations: frozenset = frozenset()
    status: str = RUNNING
    result: object = None
    final_env: MappingProxyType = field(default_factory=lambda: _frozen({}))
    trace: Tuple[int, ...] = ()
    recorded: MappingProxyType = field(default_factory=lambda: _frozen({}))
    roots: MappingProxyType = field(default_factory=lambda: _frozen({}))
    allocations: Tuple[SymAddr, ...] = ()
    stuck_at: Optional[Tuple[object, ...]] = None
    error: Optional[str] = None

    @property
    def k(self):
        if self.status == RUNNING:
            return self.stack
        return self.result

    @property
    def env(self):
        if self.stack:
            return self.stack[-1].env
        return self.final_env

    @property
    def frame(self):
        return self.stack[-1]

    @property
    def is_leaf(self):
        return self.status != RUNNING

    def replace(self, **changes):
        for name in ('heap', 'init_heap', 'final_env', 'recorded', 'roots'):
            if name in changes and not isinstance(changes[name],
                    MappingProxyType):
                changes[name] = _frozen(changes[name])
        return replace(self, **changes)

    def with_frame(self, frame):
        return self.replace(stack=self.stack[:-1] + (frame,))

    def with_object(self, addr, obj):
        heap = dict(self.heap)
        heap[addr] = obj
        return self.replace(heap=heap)

    def assume(self, *atoms):
        return self.replace(path=self.path.conjoin(*atoms))

    def executed(self, sid):
        return self.replace(trace=self.trace + (sid,))

    def pointer_bindings(self):
        """
        (variable, address) pairs for every pointer held by a variable of
        any active frame (the final frame once the call returned).
        """
        frames = [f.env for f in self.stack] or [self.final_env]
        pairs = []
        for depth, env in enumerate(frames):
            prefix = '' if depth == len(frames) - 1 else '%d:' % depth
            for name, value in sorted(env.items()):
                if isinstance(value, SymAddr):
                    pairs.append((prefix + name, value))
        return pairs

    def scalar_bindings(self):
        frames = [f.env for f in self.stack] or [self.final_env]
        pairs = []
        for depth, env in enumerate(frames):
            prefix = '' if depth == len(frames) - 1 else '%d:' % depth
            for name, value in sorted(env.items()):
                if isinstance(value, Lin):
                    pairs.append((prefix + name, value))
        return pairs


@dataclass(frozen=True)
class ProgState:
    """
    A configuration tagged with the program counter of the next
    statement (or 'return' for final configurations).
    """
    config: SymbolicConfiguration
    pc: object


def prog_state(config):
    if config.is_leaf:
        return ProgState(config, 'return')
    frame = config.frame
    if frame.work:
        item = frame.work[0]
        return ProgState(config, getattr(item, 'sid', item))
    return ProgState(config, 'return')


def state_constraint(state):
    """
    SC(S): one equality per scalar variable binding and per scalar heap
    field, conjoined with the path condition. Uninitialized bindings
    contribute nothing.
    """
    config = state.config if isinstance(state, ProgState) else state
    atoms = []
    for name, value in config.scalar_bindings():
        atoms.append(cmp(Lin.sym(variable_symbol(name)), '=', value))
    for addr in sorted(config.heap, key=str):
        obj = config.heap[addr]
        for name, value in obj.fields:
            if isinstance(value, Lin):
                atoms.append(cmp(Lin.sym(location_symbol(addr, name)), '=',
                        value))
    return config.path.conjoin(Formula.of(*atoms))


def record_write(config, location):
    """
    Adds location to the locations cell.
    """
    if location in config.locations:
        return config
    return config.replace(locations=config.locations | {location})


def object_constraints(config):
    # materialized objects are not NULL
    return Formula.of(*[addr_neq(a, NULL) for a in config.heap])


def _format_heap(heap):
    parts = []
    for addr in sorted(heap, key=str):
        obj = heap[addr]
        if obj is None:
            parts.append('%s = NULL' % addr)
        else:
            parts.append('%s |-> %s' % (addr, obj))
    return ', '.join(parts)


def render_config(config):
    """
    Renders the cells of a configuration in the ⟨...⟩cell notation.
    """
    if config.status == RUNNING:
        k = ' ~> '.join('%s@%s' % (f.function,
                getattr(f.work[0], 'sid', '?') if f.work else 'end')
                for f in reversed(config.stack))
    elif config.status == RETURNED:
        k = format_value(config.result) if config.result is not None \
            else 'void'
    else:
        k = config.status
    env = ', '.join('%s |-> %s' % (n, format_value(v))
            for n, v in sorted(config.env.items()))
    lines = [
        '⟨%s⟩k' % k,
        '⟨%s⟩env' % env,
        '⟨%s⟩heap' % _format_heap(config.heap),
        '⟨%s⟩init-heap' % _format_heap(config.init_heap),
        '⟨%s⟩path-condition' % config.path,
        '⟨%s⟩aSubFlag' % ('true' if config.asub else 'false'),
        '⟨%s⟩locations' % ', '.join(sorted(str(l)
                for l in config.locations)),
    ]
    return '\n'.join(lines)
