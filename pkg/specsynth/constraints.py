"""
Constraint language for path conditions and state constraints.

Linear integer terms, comparison and address (dis)equality atoms,
clauses and formulas, together with a small decision procedure
(case splitting over clauses, union-find for addresses and
Fourier-Motzkin elimination with integer tightening for arithmetic),
bounded model enumeration and SMT-LIB 2 export.
"""

import enum
import itertools
import logging
import re
from dataclasses import dataclass
from functools import reduce
from math import gcd

log = logging.getLogger(__name__)

# inequality systems larger than this are answered with UNKNOWN
FM_LIMIT = 4000
# maximum number of disequality case splits per conjunction
SPLIT_LIMIT = 256
# integer gaps in systems over at most this many symbols are searched
BOX_SYMBOLS = 3
BOX_RADIUS = 8


class NonLinearError(ValueError):
    pass


class Lin(object):
    """
    A normalized linear term c0 + c1*x1 + ... + cn*xn over integer symbols.

    Terms are kept sorted by symbol name with zero coefficients removed,
    so two equal terms compare and hash equal.
    """
    __slots__ = ('const', 'terms')

    def __init__(self, const=0, terms=()):
        merged = {}
        for name, coeff in terms:
            merged[name] = merged.get(name, 0) + coeff
        self.const = const
        self.terms = tuple(sorted((n, c) for n, c in merged.items() if c))

    @classmethod
    def of(cls, value):
        return cls(value)

    @classmethod
    def sym(cls, name):
        return cls(0, ((name, 1),))

    def is_const(self):
        return not self.terms

    @property
    def value(self):
        if self.terms:
            raise ValueError('%s is not a constant' % self)
        return self.const

    def coeffs(self):
        return dict(self.terms)

    def symbols(self):
        return frozenset(n for n, _ in self.terms)

    def scale(self, k):
        return Lin(self.const * k, ((n, c * k) for n, c in self.terms))

    def __add__(self, other):
        other = _as_lin(other)
        return Lin(self.const + other.const, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-_as_lin(other))

    def __rsub__(self, other):
        return _as_lin(other) - self

    def __mul__(self, other):
        other = _as_lin(other)
        if self.is_const():
            return other.scale(self.const)
        if other.is_const():
            return self.scale(other.const)
        raise NonLinearError('non-linear product %s * %s' % (self, other))

    __rmul__ = __mul__

    def substitute(self, mapping):
        """
        Replaces symbols by linear terms (or ints) from mapping.
        """
        result = Lin(self.const)
        for name, coeff in self.terms:
            if name in mapping:
                result = result + _as_lin(mapping[name]).scale(coeff)
            else:
                result = result + Lin(0, ((name, coeff),))
        return result

    def rename(self, mapping):
        return Lin(self.const, ((mapping.get(n, n), c) for n, c in self.terms))

    def evaluate(self, model):
        return self.const + sum(c * model[n] for n, c in self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Lin(other)
        if not isinstance(other, Lin):
            return NotImplemented
        return self.const == other.const and self.terms == other.terms

    def __hash__(self):
        return hash((self.const, self.terms))

    def __repr__(self):
        return 'Lin(%s)' % self

    def __str__(self):
        parts = []
        for name, coeff in self.terms:
            if coeff == 1:
                text = name
            elif coeff == -1:
                text = '-%s' % name
            else:
                text = '%d*%s' % (coeff, name)
            parts.append(text)
        if self.const or not parts:
            parts.append(str(self.const))
        text = parts[0]
        for part in parts[1:]:
            if part.startswith('-'):
                text += ' - ' + part[1:]
            else:
                text += ' + ' + part
        return text


def _as_lin(value):
    if isinstance(value, Lin):
        return value
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError('cannot use %r as a linear term' % (value,))
    return Lin(value)


_NEGATED = {'=': '!=', '!=': '=', '<': '>=', '<=': '>', '>': '<=', '>=': '<'}
_SMT_OPS = {'=': '=', '<': '<', '<=': '<=', '>': '>', '>=': '>='}


class Cmp(object):
    """
    A comparison lhs op rhs between linear terms.

    The atom keeps the operands it was written with for display, but
    equality and hashing use a canonical key (t = 0, t != 0 or t <= 0
    with gcd-reduced integer coefficients) so that x > 3 and x >= 4 are
    the same atom.
    """
    __slots__ = ('lhs', 'op', 'rhs', 'key')

    def __init__(self, lhs, op, rhs):
        if op not in _NEGATED:
            raise ValueError('unknown comparison operator %s' % op)
        self.lhs = _as_lin(lhs)
        self.op = op
        self.rhs = _as_lin(rhs)
        self.key = _canonical(self.lhs - self.rhs, op)

    def negate(self):
        return Cmp(self.lhs, _NEGATED[self.op], self.rhs)

    @property
    def truth(self):
        # True/False for ground atoms, None otherwise
        return self.key if isinstance(self.key, bool) else None

    def symbols(self):
        return (self.lhs - self.rhs).symbols()

    def addresses(self):
        return frozenset()

    def substitute(self, mapping):
        return Cmp(self.lhs.substitute(mapping), self.op,
                self.rhs.substitute(mapping))

    def rename(self, mapping, addresses=None):
        return Cmp(self.lhs.rename(mapping), self.op, self.rhs.rename(mapping))

    def evaluate(self, model):
        left = self.lhs.evaluate(model)
        right = self.rhs.evaluate(model)
        return _compare(left, self.op, right)

    def smtlib(self):
        lhs, rhs = _smt_lin(self.lhs), _smt_lin(self.rhs)
        if self.op == '!=':
            return '(not (= %s %s))' % (lhs, rhs)
        return '(%s %s %s)' % (_SMT_OPS[self.op], lhs, rhs)

    def __eq__(self, other):
        return isinstance(other, Cmp) and self.key == other.key

    def __hash__(self):
        return hash(('cmp', self.key))

    def __repr__(self):
        return 'Cmp(%s)' % self

    def __str__(self):
        return '%s %s %s' % (self.lhs, self.op, self.rhs)


def _compare(left, op, right):
    if op == '=':
        return left == right
    if op == '!=':
        return left != right
    if op == '<':
        return left < right
    if op == '<=':
        return left <= right
    if op == '>':
        return left > right
    return left >= right


def _canonical(term, op):
    # returns True/False for ground atoms, else (kind, const, terms)
    if op == '>':
        term, op = -term, '<'
    elif op == '>=':
        term, op = -term, '<='
    if op == '<':
        term, op = term + 1, '<='
    if term.is_const():
        return _compare(term.const, op, 0)
    g = reduce(gcd, (abs(c) for _, c in term.terms))
    if op in ('=', '!='):
        if term.const % g:
            return op == '!='
        if term.terms[0][1] < 0:
            term = -term
        term = Lin(term.const // g, ((n, c // g) for n, c in term.terms))
    else:
        # integer tightening: sum(a/g x) <= -c/g  ==>  const' = ceil(c/g)
        term = Lin(-((-term.const) // g),
                ((n, c // g) for n, c in term.terms))
    return (op, term.const, term.terms)


class AddrCmp(object):
    """
    Equality or disequality between two symbolic addresses (or NULL).
    """
    __slots__ = ('left', 'right', 'equal')

    def __init__(self, left, right, equal=True):
        left, right = sorted((left, right), key=str)
        self.left = left
        self.right = right
        self.equal = equal

    def negate(self):
        return AddrCmp(self.left, self.right, not self.equal)

    @property
    def truth(self):
        if self.left == self.right:
            return self.equal
        return None

    def symbols(self):
        return frozenset()

    def addresses(self):
        return frozenset(a for a in (self.left, self.right) if not a.is_null)

    def substitute(self, mapping):
        return self

    def rename(self, mapping, addresses=None):
        if not addresses:
            return self
        return AddrCmp(addresses.get(self.left, self.left),
                addresses.get(self.right, self.right), self.equal)

    def evaluate(self, model):
        same = _addr_value(self.left, model) == _addr_value(self.right, model)
        return same == self.equal

    def smtlib(self):
        text = '(= %s %s)' % (_smt_addr(self.left), _smt_addr(self.right))
        if self.equal:
            return text
        return '(not %s)' % text

    def _key(self):
        return (str(self.left), str(self.right), self.equal)

    def __eq__(self, other):
        return isinstance(other, AddrCmp) and self._key() == other._key()

    def __hash__(self):
        return hash(('addr',) + self._key())

    def __repr__(self):
        return 'AddrCmp(%s)' % self

    def __str__(self):
        return '%s %s %s' % (self.left, '=' if self.equal else '!=',
                self.right)


def _addr_value(addr, model):
    if addr.is_null:
        return 0
    return model[addr]


def cmp(lhs, op, rhs):
    return Cmp(lhs, op, rhs)


def addr_eq(left, right):
    return AddrCmp(left, right, True)


def addr_neq(left, right):
    return AddrCmp(left, right, False)


class Clause(frozenset):
    """
    A non-empty disjunction of atoms.
    """
    def __str__(self):
        atoms = sorted(str(a) for a in self)
        if len(atoms) == 1:
            return atoms[0]
        return '(%s)' % ' ∨ '.join(atoms)


class Formula(object):
    """
    A conjunction of clauses. The empty conjunction is true; a formula
    holding the empty clause is the canonical false marker.
    """
    __slots__ = ('clauses',)

    def __init__(self, clauses=()):
        self.clauses = frozenset(Clause(c) for c in clauses)

    @classmethod
    def of(cls, *atoms):
        return cls([a] for a in atoms).normalized()

    @classmethod
    def false(cls):
        return cls([()])

    @property
    def is_false(self):
        return any(not c for c in self.clauses)

    @property
    def is_true(self):
        return not self.clauses

    def normalized(self):
        # drop true atoms/clauses, false atoms, duplicates and
        # clauses that are supersets of others
        kept = set()
        for clause in self.clauses:
            atoms = set()
            satisfied = False
            for atom in clause:
                truth = atom.truth
                if truth is True:
                    satisfied = True
                    break
                if truth is None:
                    atoms.add(atom)
            if satisfied:
                continue
            if not atoms:
                return Formula.false()
            kept.add(frozenset(atoms))
        minimal = [c for c in kept if not any(o < c for o in kept)]
        return Formula(minimal)

    def conjoin(self, *others):
        clauses = set(self.clauses)
        for other in others:
            if isinstance(other, Formula):
                clauses.update(other.clauses)
            else:
                clauses.add(frozenset([other]))
        return Formula(clauses).normalized()

    __and__ = conjoin

    def atoms(self):
        return frozenset(a for c in self.clauses for a in c)

    def symbols(self):
        return frozenset(s for a in self.atoms() for s in a.symbols())

    def addresses(self):
        return frozenset(s for a in self.atoms() for s in a.addresses())

    def unit_atoms(self):
        return [next(iter(c)) for c in self.sorted_clauses() if len(c) == 1]

    def sorted_clauses(self):
        return sorted(self.clauses, key=str)

    def without(self, clause):
        return Formula(c for c in self.clauses if c != clause)

    def substitute(self, mapping):
        return Formula([a.substitute(mapping) for a in c]
                for c in self.clauses).normalized()

    def rename(self, symbols=None, addresses=None):
        symbols = symbols or {}
        return Formula([a.rename(symbols, addresses) for a in c]
                for c in self.clauses).normalized()

    def evaluate(self, model):
        return all(any(a.evaluate(model) for a in c) for c in self.clauses)

    def __eq__(self, other):
        return isinstance(other, Formula) and self.clauses == other.clauses

    def __hash__(self):
        return hash(self.clauses)

    def __iter__(self):
        return iter(self.sorted_clauses())

    def __len__(self):
        return len(self.clauses)

    def __repr__(self):
        return 'Formula(%s)' % self

    def __str__(self):
        if self.is_false:
            return 'false'
        if not self.clauses:
            return 'true'
        return ' ∧ '.join(str(c) for c in self.sorted_clauses())


TRUE = Formula()


class Sat(enum.Enum):
    SAT = 'sat'
    UNSAT = 'unsat'
    UNKNOWN = 'unknown'


class Validity(enum.Enum):
    VALID = 'valid'
    INVALID = 'invalid'
    UNKNOWN = 'unknown'


def is_satisfiable(formula):
    """
    Decides satisfiability; SAT and UNSAT answers are both sound.
    """
    return solve(formula)[0]


def solve(formula):
    """
    Returns (Sat, model) where model is a witnessing assignment when
    the answer is SAT and None otherwise. Address symbols map to object
    numbers, NULL being 0.
    """
    if formula.is_false:
        return Sat.UNSAT, None
    units = []
    disjunctive = []
    for clause in formula.sorted_clauses():
        if len(clause) == 1:
            units.append(next(iter(clause)))
        else:
            disjunctive.append(sorted(clause, key=str))
    status, model = _split(units, disjunctive)
    if model is not None:
        model = _complete(model, formula.symbols(), formula.addresses())
    return status, model


def _complete(model, symbols, addresses):
    # symbols the model leaves open only occur in atoms it does not rely
    # on: integers default to 0, addresses to fresh objects
    model = dict(model)
    for name in sorted(symbols):
        model.setdefault(name, 0)
    numbers = [v for k, v in model.items() if not isinstance(k, str)]
    following = max(numbers, default=0) + 1
    for addr in sorted(addresses, key=str):
        if addr not in model:
            model[addr] = following
            following += 1
    return model


def _split(units, disjunctive):
    status, model = _solve_conjunction(units)
    if status is Sat.UNSAT or not disjunctive:
        return status, model
    if model is not None:
        symbols, addresses = set(), set()
        for clause in disjunctive:
            for atom in clause:
                symbols.update(atom.symbols())
                addresses.update(atom.addresses())
        model = _complete(model, symbols, addresses)
        if all(any(a.evaluate(model) for a in c) for c in disjunctive):
            return Sat.SAT, model
    head, rest = disjunctive[0], disjunctive[1:]
    unknown = False
    for atom in head:
        status, model = _split(units + [atom], rest)
        if status is Sat.SAT:
            return status, model
        if status is Sat.UNKNOWN:
            unknown = True
    return (Sat.UNKNOWN if unknown else Sat.UNSAT), None


def _solve_conjunction(atoms):
    int_atoms = []
    addr_atoms = []
    for atom in atoms:
        truth = atom.truth
        if truth is False:
            return Sat.UNSAT, None
        if truth is True:
            continue
        if isinstance(atom, AddrCmp):
            addr_atoms.append(atom)
        else:
            int_atoms.append(atom)

    addr_model = _solve_addresses(addr_atoms)
    if addr_model is None:
        return Sat.UNSAT, None

    inequalities = []
    disequalities = []
    for atom in int_atoms:
        op, const, terms = atom.key
        if op == '<=':
            inequalities.append((dict(terms), const))
        elif op == '=':
            inequalities.append((dict(terms), const))
            inequalities.append(({n: -c for n, c in terms}, -const))
        else:
            disequalities.append((dict(terms), const))

    budget = [SPLIT_LIMIT]
    status, int_model = _solve_integers(inequalities, disequalities, budget)
    if status is not Sat.SAT:
        return status, None
    model = dict(int_model)
    model.update(addr_model)
    if not all(a.evaluate(model) for a in atoms):
        log.debug('model check failed for %s', atoms)
        return Sat.UNKNOWN, None
    return Sat.SAT, model


def _solve_addresses(atoms):
    # union-find over address equalities; returns an object numbering
    # or None when a disequality is violated
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        # keep NULL as the representative of its class
        if rb.is_null:
            ra, rb = rb, ra
        parent[rb] = ra

    for atom in atoms:
        find(atom.left)
        find(atom.right)
        if atom.equal:
            union(atom.left, atom.right)
    for atom in atoms:
        if not atom.equal and find(atom.left) == find(atom.right):
            return None

    numbering = {}
    model = {}
    for addr in sorted(parent, key=str):
        if addr.is_null:
            continue
        root = find(addr)
        if root.is_null:
            model[addr] = 0
        else:
            if root not in numbering:
                numbering[root] = len(numbering) + 1
            model[addr] = numbering[root]
    return model


def _tighten(coeffs, const):
    coeffs = {n: c for n, c in coeffs.items() if c}
    if not coeffs:
        return coeffs, const
    g = reduce(gcd, (abs(c) for c in coeffs.values()))
    if g > 1:
        coeffs = {n: c // g for n, c in coeffs.items()}
        const = -((-const) // g)
    return coeffs, const


def _solve_integers(inequalities, disequalities, budget):
    status, model = _fourier_motzkin(inequalities, disequalities)
    if status is not Sat.SAT:
        return status, model
    for coeffs, const in disequalities:
        value = const + sum(c * model[n] for n, c in coeffs.items())
        if value != 0:
            continue
        budget[0] -= 1
        if budget[0] < 0:
            return Sat.UNKNOWN, None
        rest = [d for d in disequalities if d != (coeffs, const)]
        # t != 0  ==>  t <= -1  or  -t <= -1
        below = _tighten(coeffs, const + 1)
        above = _tighten({n: -c for n, c in coeffs.items()}, -const + 1)
        unknown = False
        for extra in (below, above):
            status, model = _solve_integers(inequalities + [extra], rest,
                    budget)
            if status is Sat.SAT:
                return status, model
            if status is Sat.UNKNOWN:
                unknown = True
        return (Sat.UNKNOWN if unknown else Sat.UNSAT), None
    return Sat.SAT, model


def _fourier_motzkin(inequalities, disequalities):
    # each row (coeffs, const) means sum(coeffs[x] * x) + const <= 0
    rows = set()
    for coeffs, const in inequalities:
        coeffs, const = _tighten(coeffs, const)
        rows.add((tuple(sorted(coeffs.items())), const))
    original = list(rows)
    names = set()
    for coeffs, _ in list(inequalities) + list(disequalities):
        names.update(n for n, c in coeffs.items() if c)

    eliminated = []
    for name in sorted(names):
        upper, lower, rest = [], [], set()
        for row in rows:
            coeff = dict(row[0]).get(name, 0)
            if coeff > 0:
                upper.append(row)
            elif coeff < 0:
                lower.append(row)
            else:
                rest.add(row)
        for up in upper:
            a = dict(up[0])[name]
            for low in lower:
                b = -dict(low[0])[name]
                combined = {}
                for n, c in up[0]:
                    combined[n] = combined.get(n, 0) + b * c
                for n, c in low[0]:
                    combined[n] = combined.get(n, 0) + a * c
                combined.pop(name, None)
                coeffs, const = _tighten(combined, b * up[1] + a * low[1])
                if not coeffs:
                    if const > 0:
                        return Sat.UNSAT, None
                    continue
                rest.add((tuple(sorted(coeffs.items())), const))
        if len(rest) > FM_LIMIT:
            log.debug('Fourier-Motzkin blow-up eliminating %s', name)
            return Sat.UNKNOWN, None
        eliminated.append((name, upper, lower))
        rows = rest
    for coeffs, const in rows:
        if not coeffs and const > 0:
            return Sat.UNSAT, None

    model = {}
    for name, upper, lower in reversed(eliminated):
        hi = None
        lo = None
        for coeffs, const in upper:
            coeffs = dict(coeffs)
            a = coeffs.pop(name)
            rest = const + sum(c * model[n] for n, c in coeffs.items())
            bound = (-rest) // a
            hi = bound if hi is None else min(hi, bound)
        for coeffs, const in lower:
            coeffs = dict(coeffs)
            b = -coeffs.pop(name)
            rest = const + sum(c * model[n] for n, c in coeffs.items())
            bound = -((-rest) // b)
            lo = bound if lo is None else max(lo, bound)
        if lo is not None and hi is not None and lo > hi:
            return _box_search(original, sorted(names))
        model[name] = _closest_to_zero(lo, hi)
    return Sat.SAT, model


def _box_search(rows, names):
    # integer gap left by back-substitution: small systems are searched
    # exhaustively in [-BOX_RADIUS, BOX_RADIUS]
    if len(names) > BOX_SYMBOLS:
        return Sat.UNKNOWN, None
    values = range(-BOX_RADIUS, BOX_RADIUS + 1)
    for point in itertools.product(values, repeat=len(names)):
        model = dict(zip(names, point))
        if all(const + sum(c * model[n] for n, c in coeffs) <= 0
                for coeffs, const in rows):
            return Sat.SAT, model
    return Sat.UNKNOWN, None


def _closest_to_zero(lo, hi):
    if lo is not None and lo > 0:
        return lo
    if hi is not None and hi < 0:
        return hi
    return 0


def negate_clause(clause):
    """
    Returns the conjunction of the negated atoms of clause.
    """
    return Formula.of(*[a.negate() for a in clause])


def implies(f2, f1):
    """
    Decides f2 => f1 clause by clause: VALID when f2 and the negation of
    every clause of f1 are unsatisfiable, INVALID with a witness model
    otherwise (see counter_model), UNKNOWN when the procedure cannot tell.
    """
    return _implies(f2, f1)[0]


def counter_model(f2, f1):
    """
    Returns a model of f2 that falsifies f1, or None.
    """
    return _implies(f2, f1)[1]


def _implies(f2, f1):
    if f1.is_false and not f2.is_false:
        status, model = solve(f2)
        if status is Sat.SAT:
            return Validity.INVALID, model
        if status is Sat.UNSAT:
            return Validity.VALID, None
        return Validity.UNKNOWN, None
    unknown = False
    for clause in f1.sorted_clauses():
        if clause in f2.clauses:
            continue
        status, model = solve(f2.conjoin(negate_clause(clause)))
        if status is Sat.SAT:
            return Validity.INVALID, model
        if status is Sat.UNKNOWN:
            unknown = True
    if unknown:
        return Validity.UNKNOWN, None
    return Validity.VALID, None


def simplify(formula):
    """
    Returns an equivalent formula with constants folded, equalities to
    constants propagated, duplicates, tautologies and implied clauses
    removed. Unsatisfiable input yields the false marker.

    Dropping a clause can drop the last occurrence of a symbol; compare
    model sets with enumerate_models(..., symbols=formula.symbols()).
    """
    formula = formula.normalized()
    if formula.is_false or is_satisfiable(formula) is Sat.UNSAT:
        return Formula.false()

    bindings = {}
    for atom in formula.unit_atoms():
        if isinstance(atom, Cmp) and atom.op == '=':
            term = atom.lhs - atom.rhs
            if len(term.terms) == 1 and abs(term.terms[0][1]) == 1:
                name, coeff = term.terms[0]
                bindings.setdefault(name, Lin(-term.const * coeff))
    if bindings:
        clauses = []
        for clause in formula.clauses:
            if len(clause) == 1:
                atom = next(iter(clause))
                if isinstance(atom, Cmp) and atom.op == '=' and \
                        atom.symbols() <= set(bindings) and \
                        len(atom.symbols()) == 1:
                    clauses.append(clause)
                    continue
            clauses.append([a.substitute(bindings) for a in clause])
        formula = Formula(clauses).normalized()

    changed = True
    while changed:
        changed = False
        for clause in formula.sorted_clauses():
            rest = formula.without(clause)
            if implies(rest, Formula([clause])) is Validity.VALID:
                formula = rest
                changed = True
                break
    return formula


def enumerate_models(formula, int_range, max_addr_objects=0, symbols=None,
        addresses=None):
    """
    Yields, in a deterministic order, every assignment of integers in
    int_range to the formula's integer symbols and of object numbers
    (0 = NULL, 1..max_addr_objects) to its address symbols that
    satisfies the formula.

    symbols and addresses widen the enumerated key set; passing the
    symbols of the original formula makes the models of its simplified
    form comparable key for key.
    """
    lo, hi = int_range
    if lo > hi:
        raise ValueError('empty integer range [%d, %d]' % (lo, hi))
    if max_addr_objects < 0:
        raise ValueError('negative object bound %d' % max_addr_objects)
    if formula.is_false:
        return
    symbols = sorted(set(formula.symbols()) | set(symbols or ()))
    addresses = sorted(set(formula.addresses()) | set(addresses or ()),
            key=str)
    values = range(lo, hi + 1)
    objects = range(0, max_addr_objects + 1)
    for ints in itertools.product(values, repeat=len(symbols)):
        for addrs in itertools.product(objects, repeat=len(addresses)):
            model = dict(zip(symbols, ints))
            model.update(zip(addresses, addrs))
            if formula.evaluate(model):
                yield model


_SIMPLE_NAME = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


def smt_name(name):
    name = str(name)
    if _SIMPLE_NAME.match(name):
        return name
    return '|%s|' % name.replace('|', '_').replace('\\', '_')


def _smt_int(value):
    if value < 0:
        return '(- %d)' % -value
    return str(value)


def _smt_lin(term):
    parts = []
    for name, coeff in term.terms:
        if coeff == 1:
            parts.append(smt_name(name))
        elif coeff == -1:
            parts.append('(- %s)' % smt_name(name))
        else:
            parts.append('(* %s %s)' % (_smt_int(coeff), smt_name(name)))
    if term.const or not parts:
        parts.append(_smt_int(term.const))
    if len(parts) == 1:
        return parts[0]
    return '(+ %s)' % ' '.join(parts)


def _smt_addr(addr):
    if addr.is_null:
        return '0'
    return smt_name(addr)


def emit_smtlib(formula, comment=None):
    """
    Renders formula as an SMT-LIB 2 script over sort Int: addresses are
    integer constants with NULL encoded as 0, one assert per clause.
    """
    lines = []
    if comment:
        for line in comment.splitlines():
            lines.append('; %s' % line)
    lines.append('(set-logic QF_LIA)')
    for name in sorted(formula.symbols()):
        lines.append('(declare-const %s Int)' % smt_name(name))
    for addr in sorted(formula.addresses(), key=str):
        lines.append('(declare-const %s Int)' % smt_name(addr))
    if formula.is_false:
        lines.append('(assert false)')
    for clause in formula.sorted_clauses():
        atoms = sorted(clause, key=str)
        if len(atoms) == 1:
            lines.append('(assert %s)' % atoms[0].smtlib())
        elif atoms:
            lines.append('(assert (or %s))' %
                    ' '.join(a.smtlib() for a in atoms))
    lines.append('(check-sat)')
    return '\n'.join(lines) + '\n'
