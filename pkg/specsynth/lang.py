"""
Front-end for the supported C fragment: parsing (through pycparser),
lowering to a small typed AST, static checks, pretty-printing and the
constructor/modifier/observer classification of functions.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Optional, Tuple

from pycparser import c_ast, c_parser
from pycparser.c_parser import ParseError

from specsynth.errors import DiagnosticError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Type:
    """
    One of int, void or a pointer to a named struct.
    """
    kind: str
    struct: Optional[str] = None

    @property
    def is_pointer(self):
        return self.kind == 'ptr'

    def __str__(self):
        if self.kind == 'ptr':
            return 'struct %s *' % self.struct
        return self.kind


INT = Type('int')
VOID = Type('void')
# type of the NULL literal, compatible with every pointer type
NULL_TYPE = Type('null')


def pointer(struct):
    return Type('ptr', struct)


def _compatible(target, value):
    if target == value:
        return True
    return target.is_pointer and value == NULL_TYPE


# Expressions

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Null:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Field:
    base: object
    field: str
    struct: str


@dataclass(frozen=True)
class Alloc:
    struct: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Logical:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[object, ...]


# Statements. Every statement carries a program-counter id (sid) and
# its source line; lines do not take part in equality.

@dataclass(frozen=True)
class Decl:
    sid: int
    name: str
    type: Type
    init: Optional[object] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign:
    sid: int
    target: str
    value: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FieldWrite:
    sid: int
    base: object
    field: str
    struct: str
    value: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    sid: int
    cond: object
    then: 'Block'
    orelse: Optional['Block'] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While:
    sid: int
    cond: object
    body: 'Block'
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    sid: int
    value: Optional[object] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExprStmt:
    sid: int
    expr: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Block:
    sid: int
    stmts: Tuple[object, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class StructDef:
    name: str
    fields: Tuple[Tuple[str, Type], ...]

    def field_type(self, name):
        for field_name, field_type in self.fields:
            if field_name == name:
                return field_type
        return None

    @property
    def field_names(self):
        return tuple(n for n, _ in self.fields)


@dataclass(frozen=True)
class FunctionDef:
    name: str
    return_type: Type
    params: Tuple[Tuple[str, Type], ...]
    body: Block
    source_lines: dict = field(default_factory=dict, compare=False,
            hash=False)

    @property
    def param_names(self):
        return tuple(n for n, _ in self.params)


@dataclass(frozen=True)
class Program:
    structs: Tuple[StructDef, ...] = ()
    functions: Tuple[FunctionDef, ...] = ()

    def struct(self, name):
        for struct in self.structs:
            if struct.name == name:
                return struct
        raise KeyError('unknown struct %s' % name)

    def function(self, name):
        for function in self.functions:
            if function.name == name:
                return function
        raise KeyError('unknown function %s' % name)

    def has_function(self, name):
        return any(f.name == name for f in self.functions)

    @property
    def function_names(self):
        return tuple(f.name for f in self.functions)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    message: str

    def __str__(self):
        return 'line %d: %s' % (self.line, self.message)


@dataclass(frozen=True)
class ParseResult:
    program: Optional[Program]
    diagnostics: Tuple[Diagnostic, ...] = ()
    warnings: Tuple[Diagnostic, ...] = ()

    @property
    def ok(self):
        return self.program is not None


class _Reject(Exception):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super(_Reject, self).__init__(message)


def _line(node):
    coord = getattr(node, 'coord', None)
    return coord.line if coord else 0


def _unsupported(node, what):
    raise _Reject(_line(node), 'unsupported construct: %s' % what)


_INCLUDE = re.compile(r'^\s*#\s*include\b')
_PARSE_ERROR = re.compile(r':(\d+):(\d+): (.*)$')


def _strip_preprocessor(source):
    # include lines are blanked; line numbers stay put
    lines = []
    warnings = []
    for number, line in enumerate(source.splitlines(), 1):
        if _INCLUDE.match(line):
            message = 'ignoring preprocessor line %s' % line.strip()
            log.warning('line %d: %s', number, message)
            warnings.append(Diagnostic(number, message))
            lines.append('')
        elif line.lstrip().startswith('#'):
            raise _Reject(number,
                    'unsupported construct: preprocessor directive')
        else:
            lines.append(line)
    return '\n'.join(lines) + '\n', warnings


def parse_program(source):
    """
    Parses source text of the supported fragment.

    Returns a ParseResult: the lowered Program with statement ids
    assigned in source order, or a non-empty tuple of positioned
    diagnostics.
    """
    try:
        text, warnings = _strip_preprocessor(source)
    except _Reject as reject:
        return ParseResult(None, (Diagnostic(reject.line, reject.message),))
    try:
        ast = c_parser.CParser().parse(text, filename='<input>')
    except ParseError as error:
        match = _PARSE_ERROR.search(str(error))
        if match:
            diagnostic = Diagnostic(int(match.group(1)),
                    'syntax error %s' % match.group(3))
        else:
            diagnostic = Diagnostic(0, 'syntax error: %s' % error)
        return ParseResult(None, (diagnostic,), tuple(warnings))

    lowering = _Lowering()
    lowering.lower(ast)
    if lowering.diagnostics:
        return ParseResult(None, tuple(lowering.diagnostics), tuple(warnings))
    return ParseResult(lowering.program(), (), tuple(warnings))


def load_program(path):
    """
    Reads and parses a source file, raising DiagnosticError on failure.
    """
    with open(path, encoding='utf-8') as source:
        result = parse_program(source.read())
    if not result.ok:
        raise DiagnosticError(result.diagnostics)
    return result.program


class _Lowering(object):
    """
    Turns a pycparser AST into the dialect AST, type-checking as it goes.
    """
    def __init__(self):
        self.structs = {}
        self.signatures = {}
        self.functions = []
        self.diagnostics = []
        self._next_sid = 1

    def program(self):
        return Program(tuple(self.structs.values()), tuple(self.functions))

    def _sid(self):
        sid = self._next_sid
        self._next_sid += 1
        return sid

    def lower(self, ast):
        definitions = []
        for ext in ast.ext:
            try:
                if isinstance(ext, c_ast.Decl) and \
                        isinstance(ext.type, c_ast.Struct):
                    self._struct(ext.type)
                elif isinstance(ext, c_ast.FuncDef):
                    self._signature(ext)
                    definitions.append(ext)
                elif isinstance(ext, c_ast.Decl) and \
                        isinstance(ext.type, c_ast.FuncDecl):
                    # prototypes add nothing
                    continue
                else:
                    _unsupported(ext, 'top-level declaration')
            except _Reject as reject:
                self.diagnostics.append(Diagnostic(reject.line,
                        reject.message))
        for struct in self.structs.values():
            for name, field_type in struct.fields:
                if field_type.is_pointer and \
                        field_type.struct not in self.structs:
                    message = 'unknown identifier: struct %s (field %s.%s)'
                    message = message % (field_type.struct, struct.name, name)
                    self.diagnostics.append(Diagnostic(0, message))
        for definition in definitions:
            try:
                self.functions.append(self._function(definition))
            except _Reject as reject:
                self.diagnostics.append(Diagnostic(reject.line,
                        reject.message))

    def _struct(self, node):
        if node.decls is None:
            _unsupported(node, 'forward struct declaration')
        if node.name in self.structs:
            raise _Reject(_line(node), 'duplicate struct %s' % node.name)
        if not node.decls:
            raise _Reject(_line(node), 'struct %s has no fields' % node.name)
        fields = []
        for decl in node.decls:
            field_type = self._type(decl.type, allow_void=False)
            if decl.name in [n for n, _ in fields]:
                message = 'duplicate field %s in struct %s'
                raise _Reject(_line(decl), message % (decl.name, node.name))
            fields.append((decl.name, field_type))
        self.structs[node.name] = StructDef(node.name, tuple(fields))

    def _type(self, node, allow_void):
        if isinstance(node, c_ast.TypeDecl):
            inner = node.type
            if isinstance(inner, c_ast.IdentifierType):
                names = inner.names
                if names == ['int']:
                    return INT
                if names == ['void']:
                    if not allow_void:
                        raise _Reject(_line(node),
                                'type mismatch: void used as a value type')
                    return VOID
                _unsupported(node, 'type %s' % ' '.join(names))
            if isinstance(inner, c_ast.Struct):
                _unsupported(node, 'struct value (use a pointer)')
            _unsupported(node, 'type')
        if isinstance(node, c_ast.PtrDecl):
            inner = node.type
            if isinstance(inner, c_ast.TypeDecl) and \
                    isinstance(inner.type, c_ast.Struct):
                return pointer(inner.type.name)
            _unsupported(node, 'pointer type')
        if isinstance(node, c_ast.ArrayDecl):
            _unsupported(node, 'array')
        if isinstance(node, c_ast.FuncDecl):
            _unsupported(node, 'function pointer')
        _unsupported(node, 'type')

    def _signature(self, node):
        decl = node.decl
        name = decl.name
        if name in self.signatures:
            raise _Reject(_line(node), 'duplicate function %s' % name)
        func_type = decl.type
        return_type = self._type(func_type.type, allow_void=True)
        if return_type.is_pointer:
            self._check_struct(func_type, return_type.struct)
        params = []
        if func_type.args is not None:
            args = func_type.args.params
            if len(args) == 1 and isinstance(args[0], c_ast.Typename) and \
                    self._type(args[0].type, allow_void=True) == VOID:
                args = []
            for param in args:
                if not isinstance(param, c_ast.Decl):
                    _unsupported(param, 'unnamed parameter')
                param_type = self._type(param.type, allow_void=False)
                if param_type.is_pointer:
                    self._check_struct(param, param_type.struct)
                if param.name in [n for n, _ in params]:
                    message = 'duplicate parameter %s in %s'
                    raise _Reject(_line(param), message % (param.name, name))
                params.append((param.name, param_type))
        self.signatures[name] = (return_type, tuple(params))

    def _function(self, node):
        name = node.decl.name
        return_type, params = self.signatures[name]
        scope = dict(params)
        context = _FunctionContext(name, return_type, scope)
        body = self._block(node.body, context)
        return FunctionDef(name, return_type, params, body,
                dict(context.lines))

    def _check_struct(self, node, name):
        if name not in self.structs:
            raise _Reject(_line(node), 'unknown identifier: struct %s' % name)

    # statements

    def _block(self, node, context):
        sid = self._sid()
        context.lines[sid] = _line(node)
        stmts = []
        if isinstance(node, c_ast.Compound):
            items = node.block_items or []
        else:
            items = [node]
        # names declared in the block go out of scope at its end
        outer = context.scope
        context.scope = dict(outer)
        for item in items:
            stmt = self._stmt(item, context)
            if stmt is not None:
                stmts.append(stmt)
        context.scope = outer
        return Block(sid, tuple(stmts), _line(node))

    def _body(self, node, context):
        return self._block(node, context)

    def _stmt(self, node, context):
        if isinstance(node, c_ast.EmptyStatement):
            return None
        if isinstance(node, c_ast.Compound):
            return self._block(node, context)
        sid = self._sid()
        line = _line(node)
        context.lines[sid] = line

        if isinstance(node, c_ast.Decl):
            if isinstance(node.type, c_ast.Struct):
                _unsupported(node, 'local struct definition')
            var_type = self._type(node.type, allow_void=False)
            if var_type.is_pointer:
                self._check_struct(node, var_type.struct)
            if node.name in context.scope:
                raise _Reject(line, 'duplicate variable %s' % node.name)
            init = None
            if node.init is not None:
                init, init_type = self._rhs(node.init, context)
                self._assignable(node, var_type, init_type, node.name)
            context.scope[node.name] = var_type
            return Decl(sid, node.name, var_type, init, line)

        if isinstance(node, c_ast.Assignment):
            if node.op != '=':
                _unsupported(node, 'compound assignment %s' % node.op)
            value, value_type = self._rhs(node.rvalue, context)
            target = node.lvalue
            if isinstance(target, c_ast.ID):
                if target.name not in context.scope:
                    raise _Reject(line,
                            'unknown identifier: %s' % target.name)
                target_type = context.scope[target.name]
                self._assignable(node, target_type, value_type, target.name)
                return Assign(sid, target.name, value, line)
            if isinstance(target, c_ast.StructRef):
                base, struct, field_type = self._field_target(target, context)
                self._assignable(node, field_type, value_type,
                        '%s.%s' % (struct, target.field.name))
                return FieldWrite(sid, base, target.field.name, struct,
                        value, line)
            _unsupported(node, 'assignment target')

        if isinstance(node, c_ast.If):
            cond = self._condition(node.cond, context)
            then = self._body(node.iftrue, context)
            orelse = None
            if node.iffalse is not None:
                orelse = self._body(node.iffalse, context)
            return If(sid, cond, then, orelse, line)

        if isinstance(node, c_ast.While):
            cond = self._condition(node.cond, context)
            body = self._body(node.stmt, context)
            return While(sid, cond, body, line)

        if isinstance(node, c_ast.Return):
            if node.expr is None:
                if context.return_type != VOID:
                    message = 'type mismatch: %s must return a value'
                    raise _Reject(line, message % context.name)
                return Return(sid, None, line)
            if context.return_type == VOID:
                message = 'type mismatch: void function %s returns a value'
                raise _Reject(line, message % context.name)
            value, value_type = self._rhs(node.expr, context)
            self._assignable(node, context.return_type, value_type,
                    'return of %s' % context.name)
            return Return(sid, value, line)

        if isinstance(node, c_ast.FuncCall):
            call, _ = self._call(node, context, allow_void=True)
            return ExprStmt(sid, call, line)

        if isinstance(node, (c_ast.For, c_ast.DoWhile)):
            _unsupported(node, 'loop kind (only while is supported)')
        if isinstance(node, c_ast.Switch):
            _unsupported(node, 'switch')
        if isinstance(node, (c_ast.Goto, c_ast.Label)):
            _unsupported(node, 'goto')
        if isinstance(node, (c_ast.Break, c_ast.Continue)):
            _unsupported(node, node.__class__.__name__.lower())
        _unsupported(node, 'statement %s' % node.__class__.__name__)

    def _assignable(self, node, target, value, what):
        if not _compatible(target, value):
            message = 'type mismatch: cannot assign %s to %s (%s)'
            raise _Reject(_line(node), message % (value, target, what))

    def _field_target(self, node, context):
        if node.type != '->':
            _unsupported(node, 'struct member access with .')
        base, base_type = self._expr(node.name, context)
        if not base_type.is_pointer:
            message = 'type mismatch: field access %s on %s'
            raise _Reject(_line(node), message % (node.field.name, base_type))
        struct = self.structs.get(base_type.struct)
        if struct is None:
            raise _Reject(_line(node),
                    'unknown identifier: struct %s' % base_type.struct)
        field_type = struct.field_type(node.field.name)
        if field_type is None:
            message = 'unknown identifier: field %s of struct %s'
            raise _Reject(_line(node), message % (node.field.name,
                    struct.name))
        return base, struct.name, field_type

    def _condition(self, node, context):
        cond, cond_type = self._expr(node, context)
        if cond_type != INT:
            message = 'type mismatch: condition has type %s, not int'
            raise _Reject(_line(node), message % cond_type)
        return cond

    # expressions

    def _rhs(self, node, context):
        # calls and allocations are allowed only as a whole right-hand side
        if isinstance(node, c_ast.FuncCall):
            return self._call(node, context, allow_void=False)
        return self._expr(node, context)

    def _call(self, node, context, allow_void):
        name = node.name.name if isinstance(node.name, c_ast.ID) else None
        if name is None:
            _unsupported(node, 'function pointer call')
        args = node.args.exprs if node.args is not None else []
        if name == 'malloc':
            return self._alloc(node, args)
        if name not in self.signatures:
            raise _Reject(_line(node), 'unknown identifier: function %s' %
                    name)
        return_type, params = self.signatures[name]
        if len(args) != len(params):
            message = 'type mismatch: %s expects %d arguments, got %d'
            raise _Reject(_line(node), message % (name, len(params),
                    len(args)))
        lowered = []
        for arg, (param_name, param_type) in zip(args, params):
            value, value_type = self._expr(arg, context)
            self._assignable(arg, param_type, value_type,
                    'argument %s of %s' % (param_name, name))
            lowered.append(value)
        if return_type == VOID and not allow_void:
            message = 'type mismatch: void function %s used as a value'
            raise _Reject(_line(node), message % name)
        return Call(name, tuple(lowered)), return_type

    def _alloc(self, node, args):
        if len(args) == 1 and isinstance(args[0], c_ast.UnaryOp) and \
                args[0].op == 'sizeof' and \
                isinstance(args[0].expr, c_ast.Typename):
            target = args[0].expr.type
            if isinstance(target, c_ast.TypeDecl) and \
                    isinstance(target.type, c_ast.Struct):
                self._check_struct(node, target.type.name)
                return Alloc(target.type.name), pointer(target.type.name)
        _unsupported(node, 'allocation other than malloc(sizeof(struct T))')

    def _expr(self, node, context):
        if isinstance(node, c_ast.Constant):
            if node.type != 'int':
                _unsupported(node, '%s literal' % node.type)
            return IntLit(int(node.value.rstrip('uUlL'), 0)), INT

        if isinstance(node, c_ast.ID):
            if node.name == 'NULL':
                return Null(), NULL_TYPE
            if node.name not in context.scope:
                raise _Reject(_line(node), 'unknown identifier: %s' %
                        node.name)
            return Var(node.name), context.scope[node.name]

        if isinstance(node, c_ast.StructRef):
            base, struct, field_type = self._field_target(node, context)
            return Field(base, node.field.name, struct), field_type

        if isinstance(node, c_ast.UnaryOp):
            if node.op in ('!', '-'):
                operand, operand_type = self._expr(node.expr, context)
                if operand_type != INT:
                    message = 'type mismatch: operator %s on %s'
                    raise _Reject(_line(node), message % (node.op,
                            operand_type))
                if node.op == '-' and isinstance(operand, IntLit):
                    return IntLit(-operand.value), INT
                return Unary(node.op, operand), INT
            if node.op == '+':
                return self._expr(node.expr, context)
            if node.op in ('&', '*'):
                _unsupported(node, 'address-of/dereference operator %s' %
                        node.op)
            if node.op in ('p++', 'p--', '++', '--'):
                _unsupported(node, 'increment/decrement')
            if node.op == 'sizeof':
                _unsupported(node, 'sizeof outside malloc')
            _unsupported(node, 'unary operator %s' % node.op)

        if isinstance(node, c_ast.BinaryOp):
            left, left_type = self._expr(node.left, context)
            right, right_type = self._expr(node.right, context)
            op = node.op
            if op in ('&&', '||'):
                if left_type != INT or right_type != INT:
                    message = 'type mismatch: operands of %s must be int'
                    raise _Reject(_line(node), message % op)
                return Logical(op, left, right), INT
            if op in ('+', '-', '*'):
                if left_type != INT or right_type != INT:
                    if left_type.is_pointer or right_type.is_pointer:
                        _unsupported(node, 'pointer arithmetic')
                    message = 'type mismatch: operands of %s must be int'
                    raise _Reject(_line(node), message % op)
                return Binary(op, left, right), INT
            if op in ('==', '!='):
                if left_type == INT and right_type == INT:
                    return Binary(op, left, right), INT
                pointers = (left_type.is_pointer or left_type == NULL_TYPE) \
                    and (right_type.is_pointer or right_type == NULL_TYPE)
                if pointers and (left_type == right_type or
                        NULL_TYPE in (left_type, right_type)):
                    return Binary(op, left, right), INT
                message = 'type mismatch: cannot compare %s with %s'
                raise _Reject(_line(node), message % (left_type, right_type))
            if op in ('<', '<=', '>', '>='):
                if left_type != INT or right_type != INT:
                    message = 'type mismatch: ordering %s on %s and %s'
                    raise _Reject(_line(node), message % (op, left_type,
                            right_type))
                return Binary(op, left, right), INT
            _unsupported(node, 'operator %s' % op)

        if isinstance(node, c_ast.FuncCall):
            _unsupported(node, 'nested call')
        if isinstance(node, c_ast.Cast):
            _unsupported(node, 'cast')
        if isinstance(node, c_ast.ArrayRef):
            _unsupported(node, 'array')
        if isinstance(node, c_ast.TernaryOp):
            _unsupported(node, 'conditional expression')
        _unsupported(node, 'expression %s' % node.__class__.__name__)


class _FunctionContext(object):
    def __init__(self, name, return_type, scope):
        self.name = name
        self.return_type = return_type
        self.scope = scope
        self.lines = {}


# pretty-printer

_PRECEDENCE = {'||': 1, '&&': 2, '==': 3, '!=': 3, '<': 4, '<=': 4, '>': 4,
        '>=': 4, '+': 5, '-': 5, '*': 6}


def format_expr(expr):
    if isinstance(expr, IntLit):
        if expr.value < 0:
            return '(%d)' % expr.value
        return str(expr.value)
    if isinstance(expr, Null):
        return 'NULL'
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Field):
        return '%s->%s' % (format_expr(expr.base), expr.field)
    if isinstance(expr, Alloc):
        return 'malloc(sizeof(struct %s))' % expr.struct
    if isinstance(expr, Unary):
        return '%s(%s)' % (expr.op, format_expr(expr.operand))
    if isinstance(expr, (Binary, Logical)):
        return '(%s %s %s)' % (format_expr(expr.left), expr.op,
                format_expr(expr.right))
    if isinstance(expr, Call):
        return '%s(%s)' % (expr.name,
                ', '.join(format_expr(a) for a in expr.args))
    raise TypeError('not an expression: %r' % (expr,))


def _declarator(var_type, name):
    if var_type.is_pointer:
        return 'struct %s *%s' % (var_type.struct, name)
    return '%s %s' % (var_type, name)


def _format_stmt(stmt, indent, out):
    pad = '  ' * indent
    if isinstance(stmt, Block):
        out.append(pad + '{')
        for inner in stmt.stmts:
            _format_stmt(inner, indent + 1, out)
        out.append(pad + '}')
    elif isinstance(stmt, Decl):
        text = _declarator(stmt.type, stmt.name)
        if stmt.init is not None:
            text += ' = ' + format_expr(stmt.init)
        out.append(pad + text + ';')
    elif isinstance(stmt, Assign):
        out.append(pad + '%s = %s;' % (stmt.target, format_expr(stmt.value)))
    elif isinstance(stmt, FieldWrite):
        out.append(pad + '%s->%s = %s;' % (format_expr(stmt.base),
                stmt.field, format_expr(stmt.value)))
    elif isinstance(stmt, If):
        out.append(pad + 'if (%s)' % format_expr(stmt.cond))
        _format_stmt(stmt.then, indent, out)
        if stmt.orelse is not None:
            out.append(pad + 'else')
            _format_stmt(stmt.orelse, indent, out)
    elif isinstance(stmt, While):
        out.append(pad + 'while (%s)' % format_expr(stmt.cond))
        _format_stmt(stmt.body, indent, out)
    elif isinstance(stmt, Return):
        if stmt.value is None:
            out.append(pad + 'return;')
        else:
            out.append(pad + 'return %s;' % format_expr(stmt.value))
    elif isinstance(stmt, ExprStmt):
        out.append(pad + format_expr(stmt.expr) + ';')
    else:
        raise TypeError('not a statement: %r' % (stmt,))


def format_program(program):
    """
    Prints program back as source text of the fragment.
    """
    out = []
    for struct in program.structs:
        out.append('struct %s {' % struct.name)
        for name, field_type in struct.fields:
            out.append('  %s;' % _declarator(field_type, name))
        out.append('};')
        out.append('')
    for function in program.functions:
        if function.params:
            params = ', '.join(_declarator(t, n) for n, t in function.params)
        else:
            params = 'void'
        if function.return_type.is_pointer:
            head = 'struct %s *%s(%s)' % (function.return_type.struct,
                    function.name, params)
        else:
            head = '%s %s(%s)' % (function.return_type, function.name, params)
        out.append(head)
        _format_stmt(function.body, 0, out)
        out.append('')
    return '\n'.join(out)


def iter_statements(stmt):
    """
    Yields stmt and every statement nested in it, in source order.
    """
    yield stmt
    if isinstance(stmt, Block):
        for inner in stmt.stmts:
            yield from iter_statements(inner)
    elif isinstance(stmt, If):
        yield from iter_statements(stmt.then)
        if stmt.orelse is not None:
            yield from iter_statements(stmt.orelse)
    elif isinstance(stmt, While):
        yield from iter_statements(stmt.body)


# classification

@dataclass(frozen=True)
class Classification:
    observers: frozenset
    modifiers: frozenset
    constructors: frozenset


def classify(program):
    """
    Splits the program's functions into observers (non-void return),
    modifiers (every function) and constructors (returns a struct pointer
    without receiving one).
    """
    observers = frozenset(f.name for f in program.functions
            if f.return_type != VOID)
    modifiers = frozenset(program.function_names)
    constructors = frozenset(f.name for f in program.functions
            if f.return_type.is_pointer and
            not any(t.is_pointer for _, t in f.params))
    return Classification(observers, modifiers, constructors)


def boolean_observers(program):
    """
    Names of observers whose every return operand is the literal 0 or 1.
    """
    names = set()
    for function in program.functions:
        if function.return_type != INT:
            continue
        returns = [s for s in iter_statements(function.body)
                if isinstance(s, Return)]
        if returns and all(isinstance(r.value, IntLit) and
                r.value.value in (0, 1) for r in returns):
            names.add(function.name)
    return frozenset(names)
