"""
Contract inference.

A modifier is run symbolically from its most general call. Every final
configuration yields one axiom: its antecedent describes the initial
state through the values the observers return on it, its consequent
describes the final state the same way plus the return value. Axioms
from folded branches are candidates; refine tests them on generated
concrete states, promotes the ones that survive, specializes the
refuted ones on their fresh symbols and finally purges axioms that a
more general one subsumes.
"""

import logging
import random
import re
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Dict, List, Optional, Set, Tuple

from specsynth import concrete, lang
from specsynth.constraints import Formula, Lin, Validity, cmp, implies
from specsynth.errors import CallError
from specsynth.settings import InferenceOptions
from specsynth.state import NULL, RETURNED, STUCK, BOUNDED, SymAddr, UNINIT
from specsynth.symbolic import CallPattern, explore

log = logging.getLogger(__name__)

VERIFIED = 'verified'
CANDIDATE = 'candidate'
REFUTED = 'refuted'
SPECIALIZED = 'specialized'

_FRESH = re.compile(r'^_[vi]\d*$')

# exhaustive checking bounds
CHECK_VALUES = (0, 1, 2)
CHECK_MAX_LEN = 3


def is_fresh(symbol):
    return bool(_FRESH.match(symbol))


@dataclass(frozen=True)
class ObserverCall:
    """
    An observer applied to some of the modifier's arguments, named by
    the modifier's parameter names.
    """
    name: str
    args: Tuple[str, ...]
    positions: Tuple[int, ...]
    pointers: Tuple[bool, ...]

    def render(self, primed=False):
        names = [a + "'" if primed and p else a
                for a, p in zip(self.args, self.pointers)]
        return '%s(%s)' % (self.name, ','.join(names))

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class Equation:
    """
    call(args) = rhs, or ret = rhs when call is None. rhs is a linear
    term over fresh symbols and the modifier's int parameters, or a
    pointer (NULL or an allocated address) for ret.
    """
    call: Optional[ObserverCall]
    rhs: object
    primed: bool = False

    @property
    def is_ret(self):
        return self.call is None

    @property
    def lhs(self):
        if self.call is None:
            return 'ret'
        return self.call.render(self.primed)

    def symbols(self):
        if isinstance(self.rhs, Lin):
            return self.rhs.symbols()
        return frozenset()

    def fresh_symbols(self):
        return frozenset(s for s in self.symbols() if is_fresh(s))

    def rename(self, mapping):
        if isinstance(self.rhs, Lin):
            return replace(self, rhs=self.rhs.rename(mapping))
        return self

    def substitute(self, mapping):
        if isinstance(self.rhs, Lin):
            return replace(self, rhs=self.rhs.substitute(mapping))
        return self

    def atom(self):
        rhs = self.rhs
        if isinstance(rhs, SymAddr):
            rhs = Lin.of(0) if rhs.is_null else Lin.sym(str(rhs))
        return cmp(Lin.sym(self.lhs), '=', rhs)

    def __str__(self):
        if isinstance(self.rhs, Lin):
            return '%s=%s' % (self.lhs, str(self.rhs).replace(' ', ''))
        return '%s=%s' % (self.lhs, self.rhs)


@dataclass(frozen=True)
class Axiom:
    antecedent: Tuple[Equation, ...]
    consequent: Tuple[Equation, ...]
    status: str = VERIFIED
    origin: int = 0

    @property
    def ret(self):
        for equation in self.consequent:
            if equation.is_ret:
                return equation
        return None

    def fresh_symbols(self):
        symbols = set()
        for equation in self.antecedent + self.consequent:
            symbols |= equation.fresh_symbols()
        return symbols

    def key(self):
        return (tuple(sorted(str(e) for e in self.antecedent)),
                tuple(sorted(str(e) for e in self.consequent)))

    def with_status(self, status):
        return replace(self, status=status)

    def instantiate(self, symbol, value):
        """
        The axiom with fresh symbol fixed to value, renamed canonically.
        """
        mapping = {symbol: value}
        return canonical(replace(self,
                antecedent=tuple(e.substitute(mapping)
                    for e in self.antecedent),
                consequent=tuple(e.substitute(mapping)
                    for e in self.consequent)))

    def __str__(self):
        left = ' ∧ '.join(str(e) for e in self.antecedent) or 'true'
        right = ' ∧ '.join(str(e) for e in self.consequent) or 'true'
        return '%s ⟹ %s' % (left, right)


def canonical(axiom):
    """
    Renames fresh symbols in order of appearance: booleans _v, _v2, ...
    and integers _i1, _i2, ...
    """
    order = []
    for equation in axiom.antecedent + axiom.consequent:
        for symbol in sorted(equation.fresh_symbols()):
            if symbol not in order:
                order.append(symbol)
    temporary = {s: '#%d' % i for i, s in enumerate(order)}
    final = {}
    counts = {'v': 0, 'i': 0}
    for symbol in order:
        kind = 'v' if symbol.startswith('_v') else 'i'
        counts[kind] += 1
        if kind == 'v':
            name = '_v' if counts[kind] == 1 else '_v%d' % counts[kind]
        else:
            name = '_i%d' % counts[kind]
        final[temporary[symbol]] = name

    def rename(equation):
        return equation.rename(temporary).rename(final)

    return replace(axiom, antecedent=tuple(rename(e)
            for e in axiom.antecedent), consequent=tuple(rename(e)
            for e in axiom.consequent))


@dataclass
class Contract:
    """
    ⟨P, Q, L⟩ for one modifier, with the refinement bookkeeping.
    """
    function: str
    precondition: List[Tuple[Equation, ...]]
    postcondition: List[Axiom]
    assignable: List[str]
    candidates: List[Axiom] = field(default_factory=list)
    axioms: List[Axiom] = field(default_factory=list)
    refuted: List[Axiom] = field(default_factory=list)
    leaves: int = 0
    folds: int = 0
    errors: List[str] = field(default_factory=list)


# observer calls

def observers_for(program, modifier):
    """
    The observers of program, in source order, that may explain states
    of modifier: the modifier itself and observers returning a pointer
    are left out, equations only relate integers.
    """
    observers = lang.classify(program).observers
    return [f.name for f in program.functions if f.name in observers
            and f.name != modifier and f.return_type == lang.INT]


def observer_calls(program, modifier, observers=None):
    """
    Every observer applied to each type-compatible injective choice of
    the modifier's arguments, keeping order-preserving choices when
    there are several.
    """
    definition = program.function(modifier)
    names = definition.param_names
    types = [t for _, t in definition.params]
    if observers is None:
        observers = observers_for(program, modifier)
    calls = []
    for name in observers:
        observer = program.function(name)
        wanted = [t for _, t in observer.params]
        choices = list(_assignments(types, wanted, ()))
        ordered = [c for c in choices if list(c) == sorted(c)]
        for choice in (ordered or choices):
            calls.append(ObserverCall(name, tuple(names[i] for i in choice),
                    tuple(choice),
                    tuple(types[i].is_pointer for i in choice)))
    return calls


def _assignments(types, wanted, used):
    if not wanted:
        yield used
        return
    for index, arg_type in enumerate(types):
        if index not in used and arg_type == wanted[0]:
            yield from _assignments(types, wanted[1:], used + (index,))


# explain

@dataclass(frozen=True)
class Pattern:
    """
    The heap, path condition and argument values observers run from.
    """
    heap: MappingProxyType
    path: Formula
    args: Tuple[object, ...]


def _resolve(args, init_heap):
    resolved = []
    for value in args:
        if isinstance(value, SymAddr) and value in init_heap and \
                init_heap[value] is None:
            value = NULL
        resolved.append(value)
    return tuple(resolved)


def pre_pattern(call, leaf):
    heap = {a: o for a, o in leaf.init_heap.items() if o is not None}
    return Pattern(MappingProxyType(heap), leaf.path,
            _resolve(call.args, leaf.init_heap))


def post_pattern(call, leaf):
    return Pattern(leaf.heap, leaf.path, _resolve(call.args, leaf.init_heap))


@dataclass(frozen=True)
class Observed:
    value: object = None
    stuck: Optional[tuple] = None
    omitted: bool = False


def observe(program, observer_call, pattern, options):
    """
    Runs one observer call from pattern without lazy initialization.
    """
    args = tuple(pattern.args[i] for i in observer_call.positions)
    call = CallPattern(observer_call.name, args, pattern.path,
            pattern.heap, lazy_init=False)
    leaves = explore(program, call, max_unroll=options.explain_unroll).leaves
    if any(leaf.status == BOUNDED for leaf in leaves):
        log.warning('%s: observer exceeded %d unrollings, omitted',
                observer_call, options.explain_unroll)
        return Observed(omitted=True)
    if len(leaves) == 1 and leaves[0].status == STUCK:
        return Observed(stuck=leaves[0].stuck_at)
    results = {leaf.result for leaf in leaves if leaf.status == RETURNED}
    if leaves and len(results) == 1 and \
            all(leaf.status == RETURNED for leaf in leaves):
        value = results.pop()
        if value is not UNINIT:
            return Observed(value=value)
    return Observed()


def explain(program, calls, pattern, options):
    """
    Observes every call from the same pattern, independently of the
    others. Returns (call, Observed) pairs; omitted observers are left
    out.
    """
    outcomes = []
    for observer_call in calls:
        outcome = observe(program, observer_call, pattern, options)
        if not outcome.omitted:
            outcomes.append((observer_call, outcome))
    return outcomes


def _stuck_difference(before, after):
    # constant offset between two runs stuck at the same place
    pc1, addr1, env1 = before
    pc2, addr2, env2 = after
    if pc1 != pc2 or addr1 != addr2:
        return None
    offsets = []
    for name in sorted(set(env1) & set(env2)):
        v1, v2 = env1[name], env2[name]
        if isinstance(v1, Lin) and isinstance(v2, Lin):
            delta = v2 - v1
            if not delta.is_const():
                return None
            if delta.const:
                offsets.append(delta.const)
    if len(offsets) > 1:
        return None
    return offsets[0] if offsets else 0


class _Assembler(object):
    """
    Turns the observations of one leaf into an axiom, naming values that
    mention internal symbols with fresh symbols.
    """

    def __init__(self, program, modifier, booleans):
        definition = program.function(modifier)
        self.arg_symbols = {n for n, t in definition.params
                if not t.is_pointer}
        self.booleans = booleans
        self.count = 0
        self.terms = {}

    def fresh(self, boolean):
        self.count += 1
        return Lin.sym('%s%d' % ('_v' if boolean else '_i', self.count))

    def name(self, value, boolean):
        if not isinstance(value, Lin) or \
                value.symbols() <= self.arg_symbols:
            return value
        for term, symbol in self.terms.items():
            delta = value - term
            if delta.is_const():
                return symbol + delta.const
        symbol = self.fresh(boolean)
        self.terms[value] = symbol
        return symbol

    def antecedent(self, outcomes):
        equations = []
        for call, outcome in outcomes:
            boolean = call.name in self.booleans
            if outcome.value is not None:
                rhs = self.name(outcome.value, boolean)
            else:
                rhs = self.fresh(boolean)
            equations.append(Equation(call, rhs))
        return equations

    def consequent(self, outcomes, before, leaf):
        earlier = {e.call: (e, o) for e, o in before}
        equations = []
        for call, outcome in outcomes:
            boolean = call.name in self.booleans
            rhs = None
            if outcome.value is not None:
                rhs = self.name(outcome.value, boolean)
            elif outcome.stuck is not None and call in earlier:
                pre_equation, pre_outcome = earlier[call]
                if pre_outcome.stuck is not None:
                    delta = _stuck_difference(pre_outcome.stuck,
                            outcome.stuck)
                    if delta is not None:
                        rhs = pre_equation.rhs + delta
            if rhs is None:
                rhs = self.fresh(boolean)
            equations.append(Equation(call, rhs, primed=True))
        if leaf.result is not None:
            if leaf.result is UNINIT:
                rhs = self.fresh(False)
            else:
                rhs = self.name(leaf.result, False)
            equations.append(Equation(None, rhs, primed=True))
        return equations


def assemble(program, call, leaf, calls, options, index=0, booleans=None):
    """
    The axiom of one final configuration.
    """
    if booleans is None:
        booleans = lang.boolean_observers(program)
    assembler = _Assembler(program, call.function, booleans)
    pre = explain(program, calls, pre_pattern(call, leaf), options)
    antecedent = assembler.antecedent(pre)
    paired = list(zip(antecedent, [o for _, o in pre]))
    post = explain(program, calls, post_pattern(call, leaf), options)
    consequent = assembler.consequent(post, paired, leaf)

    linked = set()
    for equation in antecedent:
        linked |= equation.fresh_symbols()
    consequent = [e for e in consequent
            if e.is_ret or e.fresh_symbols() <= linked]
    status = CANDIDATE if leaf.asub else VERIFIED
    return canonical(Axiom(tuple(antecedent), tuple(consequent), status,
            index))


# concrete evaluation of axioms

@dataclass
class Trial:
    description: tuple
    values: Dict[str, object]
    model: Dict[str, int]
    ok: bool


class _Harness(object):
    """
    Runs the observers before and after the modifier on concrete inputs.
    """

    def __init__(self, program, modifier, calls, options):
        self.program = program
        self.modifier = modifier
        self.calls = calls
        self.options = options
        definition = program.function(modifier)
        self.params = definition.params
        self.impure = set()

    def _observe(self, state, args, primed, values):
        for call in self.calls:
            observed = concrete.run(self.program, call.name,
                    [args[i] for i in call.positions], state,
                    self.options.step_limit)
            if observed.ok and call.name not in self.impure and \
                    concrete.heap_delta(state, observed.final_state):
                log.warning('%s: observer %s changes the heap', self.modifier,
                        call.name)
                self.impure.add(call.name)
            values[call.render(primed)] = observed.return_value \
                if observed.ok else None

    def trial(self, description):
        state, args = concrete.materialize(self.program, self.modifier,
                description)
        values = {}
        self._observe(state, args, False, values)
        result = concrete.run(self.program, self.modifier, args, state,
                self.options.step_limit)
        model = {n: v for (n, t), v in zip(self.params, args)
                if not t.is_pointer}
        if not result.ok:
            return Trial(description, values, model, False)
        values['ret'] = result.return_value
        self._observe(result.final_state, args, True, values)
        return Trial(description, values, model, True)


def _matches(equation, actual, bindings):
    """
    Returns the bindings extended so that equation holds for actual, or
    None.
    """
    rhs = equation.rhs
    if isinstance(rhs, SymAddr):
        if rhs.is_null:
            return bindings if actual is None else None
        return bindings if isinstance(actual, concrete.Ref) else None
    if isinstance(actual, bool) or not isinstance(actual, int):
        return None
    unbound = [s for s in rhs.symbols() if s not in bindings]
    if not unbound:
        return bindings if rhs.evaluate(bindings) == actual else None
    if len(unbound) == 1 and abs(rhs.coeffs()[unbound[0]]) == 1:
        symbol = unbound[0]
        coeff = rhs.coeffs()[symbol]
        rest = rhs - Lin(0, ((symbol, coeff),))
        extended = dict(bindings)
        extended[symbol] = (actual - rest.evaluate(bindings)) * coeff
        return extended
    return None


def bind_antecedent(axiom, trial):
    bindings = dict(trial.model)
    for equation in axiom.antecedent:
        bindings = _matches(equation, trial.values.get(equation.lhs),
                bindings)
        if bindings is None:
            return None
    return bindings


def consequent_holds(axiom, trial, bindings):
    for equation in axiom.consequent:
        unbound = [s for s in equation.symbols() if s not in bindings]
        if unbound:
            continue
        if _matches(equation, trial.values.get(equation.lhs),
                bindings) is None:
            return False
    return True


@dataclass
class Falsification:
    counterexample: Optional[tuple] = None
    confirmed: int = 0
    satisfied: int = 0
    observed: Dict[str, set] = field(default_factory=dict)
    impure: Set[str] = field(default_factory=set)

    @property
    def inconclusive(self):
        return self.satisfied == 0

    @property
    def refuted(self):
        return self.counterexample is not None


def _fails(axiom, trial):
    if not trial.ok:
        return False
    bindings = bind_antecedent(axiom, trial)
    return bindings is not None and not consequent_holds(axiom, trial,
            bindings)


def minimize(harness, axiom, description):
    """
    Bypasses chain nodes of a failing input while it keeps failing.
    """
    changed = True
    while changed:
        changed = False
        for candidate in concrete.shrink_candidates(description):
            if _fails(axiom, harness.trial(candidate)):
                description = candidate
                changed = True
                break
    return description


def falsify(program, modifier, axiom, options=None, seed=None, calls=None):
    """
    Tests axiom on up to test_budget random inputs of modifier. Returns
    the first (minimized) input whose run satisfies the antecedent but
    not the consequent, together with the counts and the fresh symbol
    values seen on inputs satisfying the antecedent.
    """
    options = options or InferenceOptions()
    if calls is None:
        calls = observer_calls(program, modifier)
    rng = random.Random(options.seed if seed is None else seed)
    harness = _Harness(program, modifier, calls, options)
    outcome = Falsification()
    fresh = sorted(s for e in axiom.antecedent for s in e.fresh_symbols())
    for _ in range(options.test_budget):
        description = concrete.random_inputs(program, modifier, rng,
                options.value_domain, options.max_list_len)
        trial = harness.trial(description)
        if not trial.ok:
            continue
        bindings = bind_antecedent(axiom, trial)
        if bindings is None:
            continue
        outcome.satisfied += 1
        for symbol in fresh:
            outcome.observed.setdefault(symbol, set()).add(bindings[symbol])
        if consequent_holds(axiom, trial, bindings):
            outcome.confirmed += 1
            continue
        outcome.counterexample = minimize(harness, axiom, description)
        log.info('%s: axiom refuted by %s', modifier,
                concrete.describe(outcome.counterexample))
        break
    if outcome.inconclusive:
        log.warning('%s: no input satisfies %s within %d tests', modifier,
                axiom, options.test_budget)
    outcome.impure = set(harness.impure)
    return outcome


def specialize(program, modifier, axiom, falsification, options=None,
        calls=None):
    """
    Splits a refuted axiom on its first fresh antecedent symbol
    (booleans first) and keeps the instances that survive testing.
    Instances that are still refuted are dropped as overly general.
    """
    options = options or InferenceOptions()
    candidates = [e for e in axiom.antecedent if len(e.fresh_symbols()) == 1
            and e.rhs == Lin.sym(next(iter(e.fresh_symbols())))]
    candidates.sort(key=lambda e: not e.rhs.terms[0][0].startswith('_v'))
    if not candidates:
        log.info('%s: %s has no fresh symbol to split, refuted', modifier,
                axiom)
        return []
    symbol = candidates[0].rhs.terms[0][0]
    if symbol.startswith('_v'):
        domain = [0, 1]
    else:
        domain = sorted(falsification.observed.get(symbol, ()))
    instances = []
    for value in domain:
        instance = axiom.instantiate(symbol, value).with_status(CANDIDATE)
        outcome = falsify(program, modifier, instance, options, calls=calls)
        if outcome.refuted:
            log.info('%s: instance %s refuted, dropped', modifier, instance)
        elif outcome.confirmed:
            instances.append(instance.with_status(SPECIALIZED))
    return instances


# subsumption between axioms

def _formula(equations, mapping=None):
    atoms = [e.atom() for e in equations]
    formula = Formula.of(*atoms)
    if mapping:
        formula = formula.substitute(mapping)
    return formula


def axiom_subsumes(general, specific):
    """
    True when general's antecedent is implied by specific's and, under
    specific's antecedent, general's consequent implies specific's.
    Fresh symbols of general are bound to the matching right-hand
    sides of specific.
    """
    apart = {s: 'g.' + s for s in general.fresh_symbols()}
    gen_ante = [e.rename(apart) for e in general.antecedent]
    gen_cons = [e.rename(apart) for e in general.consequent]
    specific_rhs = {e.lhs: e.rhs for e in specific.antecedent}
    binding = {}
    for equation in gen_ante:
        symbols = [s for s in equation.symbols() if s.startswith('g.')]
        if len(symbols) != 1 or equation.lhs not in specific_rhs:
            continue
        symbol = symbols[0]
        if symbol in binding:
            continue
        coeff = equation.rhs.coeffs()[symbol]
        if abs(coeff) != 1:
            continue
        target = specific_rhs[equation.lhs]
        if not isinstance(target, Lin):
            continue
        rest = equation.rhs - Lin(0, ((symbol, coeff),))
        binding[symbol] = (target - rest).scale(coeff)
    given = _formula(specific.antecedent)
    if implies(given, _formula(gen_ante, binding)) is not Validity.VALID:
        return False
    given = given.conjoin(_formula(gen_cons, binding))
    return implies(given, _formula(specific.consequent)) is Validity.VALID


def purge(axioms):
    """
    Drops every axiom subsumed by another one; of two equivalent axioms
    the earlier is kept.
    """
    kept = []
    for index, axiom in enumerate(axioms):
        subsumed = False
        for other_index, other in enumerate(axioms):
            if other_index == index or not axiom_subsumes(other, axiom):
                continue
            if axiom_subsumes(axiom, other) and other_index > index:
                continue
            subsumed = True
            break
        if not subsumed:
            kept.append(axiom)
    return kept


@dataclass
class Refinement:
    q: List[Axiom]
    candidates: List[Axiom] = field(default_factory=list)
    refuted: List[Axiom] = field(default_factory=list)


def refine(program, modifier, q, q_sharp, options=None, calls=None):
    """
    Tests the candidates in q_sharp: survivors join q, refuted ones are
    specialized, inconclusive ones are reported. q is then purged of
    subsumed axioms.
    """
    options = options or InferenceOptions()
    if calls is None:
        calls = observer_calls(program, modifier)
    verified = list(q)
    reported = []
    refuted = []
    for candidate in q_sharp:
        outcome = falsify(program, modifier, candidate, options, calls=calls)
        if outcome.inconclusive:
            reported.append(candidate)
        elif not outcome.refuted:
            verified.append(candidate.with_status(VERIFIED))
        else:
            instances = specialize(program, modifier, candidate, outcome,
                    options, calls)
            if instances:
                verified += instances
            else:
                refuted.append(candidate.with_status(REFUTED))
    verified.sort(key=lambda a: a.origin)
    kept = purge(verified)
    log.info('%s: refinement kept %d of %d axioms, %d candidates reported',
            modifier, len(kept), len(verified), len(reported))
    return Refinement(kept, reported, refuted)


def dedupe(axioms):
    seen = set()
    unique = []
    for axiom in axioms:
        key = (axiom.key(), axiom.status)
        if key not in seen:
            seen.add(key)
            unique.append(axiom)
    return unique


def infer(program, modifier, options=None):
    """
    Infers the contract ⟨P, Q, L⟩ of modifier.
    """
    options = options or InferenceOptions()
    if not program.has_function(modifier):
        message = 'unknown modifier %s'
        raise CallError(message % modifier)
    call = CallPattern.fresh(program, modifier)
    tree = explore(program, call, abstract=True,
            safety_net=options.max_unroll)
    leaves = tree.final()
    errors = [leaf.error for leaf in tree.leaves if leaf.status != RETURNED]
    log.info('%s: %d final configurations, %d other leaves', modifier,
            len(leaves), len(errors))

    calls = observer_calls(program, modifier)
    booleans = lang.boolean_observers(program)
    axioms = dedupe([assemble(program, call, leaf, calls, options, index,
            booleans) for index, leaf in enumerate(leaves)])
    q = [a for a in axioms if a.status == VERIFIED]
    q_sharp = [a for a in axioms if a.status == CANDIDATE]
    log.info('%s: %d axioms, %d candidates', modifier, len(q), len(q_sharp))

    locations = set()
    for leaf in leaves:
        locations |= {str(l) for l in leaf.locations}
    refinement = refine(program, modifier, q, q_sharp, options, calls)
    return Contract(modifier, [a.antecedent for a in axioms],
            refinement.q, sorted(locations), refinement.candidates, axioms,
            refinement.refuted, len(tree.leaf_ids), len(tree.folds),
            [e for e in errors if e])


# display form

def _definite(equation):
    return isinstance(equation.rhs, Lin) and equation.rhs.is_const()


def _contradicts(equations, other):
    values = {e.lhs: e.rhs for e in other.antecedent if _definite(e)}
    return any(_definite(e) and e.lhs in values and values[e.lhs] != e.rhs
            for e in equations)


def compact(axiom, others):
    """
    Display form of axiom among the axioms of Q: the antecedent keeps
    the equations needed to tell it apart from every other axiom, plus
    fresh equations the consequent refers to; the consequent keeps ret,
    the observers of the compact antecedent and the changed values.
    """
    rivals = [o for o in others if o is not axiom and o.key() != axiom.key()]
    used = set()
    for equation in axiom.consequent:
        used |= equation.fresh_symbols()
    antecedent = [e for e in axiom.antecedent
            if not e.fresh_symbols() or e.fresh_symbols() & used]
    for equation in list(antecedent):
        if equation.fresh_symbols():
            continue
        rest = [e for e in antecedent if e is not equation]
        if all(_contradicts(rest, r) for r in rivals):
            antecedent = rest
    before = {e.call: e.rhs for e in axiom.antecedent}
    kept_calls = {e.call for e in antecedent}
    consequent = [e for e in axiom.consequent if e.is_ret or
            e.call in kept_calls or before.get(e.call) != e.rhs]
    return replace(axiom, antecedent=tuple(antecedent),
            consequent=tuple(consequent))


# exhaustive checking

@dataclass
class CheckReport:
    inputs: int = 0
    applicable: Dict[int, int] = field(default_factory=dict)
    violations: List[Tuple[Axiom, tuple]] = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations


def check_contract(program, contract, options=None, values=CHECK_VALUES,
        max_len=CHECK_MAX_LEN):
    """
    Checks every axiom of Q on all inputs of the modifier with chains of
    at most max_len objects and ints drawn from values.
    """
    options = options or InferenceOptions()
    modifier = contract.function
    calls = observer_calls(program, modifier)
    harness = _Harness(program, modifier, calls, options)
    report = CheckReport()
    for description in concrete.enumerate_inputs(program, modifier, values,
            max_len):
        trial = harness.trial(description)
        report.inputs += 1
        if not trial.ok:
            continue
        for index, axiom in enumerate(contract.postcondition):
            bindings = bind_antecedent(axiom, trial)
            if bindings is None:
                continue
            report.applicable[index] = report.applicable.get(index, 0) + 1
            if not consequent_holds(axiom, trial, bindings):
                report.violations.append((axiom, description))
    log.info('%s: checked %d inputs, %d violations', modifier,
            report.inputs, len(report.violations))
    return report
