import itertools
import random
import unittest
from types import MappingProxyType

from hypothesis import given, settings, strategies as st

from specsynth.abstraction import Summary, alpha, abstract_subsumes, subsumes
from specsynth.constraints import Formula, Lin, Sat, cmp, is_satisfiable
from specsynth.state import (NULL, Frame, HeapObject, ProgState,
	SymbolicConfiguration, root)
from specsynth.symbolic import CallPattern, explore
from specsynth.tests import corpus


def chain_state(length, pc=7):
	"""
	s points to a set whose elems list has length nodes; n is bound to
	NULL.
	"""
	s = root('s')
	heap = {}
	addr = s.field('elems')
	heap[s] = HeapObject.build('set', {'capacity': Lin.sym('s.capacity'),
		'size': Lin.sym('s.size'), 'elems': addr if length else NULL})
	for index in range(length):
		following = addr.field('next')
		heap[addr] = HeapObject.build('lnode', {'value': Lin.sym(addr.label + '.value'),
			'next': following if index + 1 < length else NULL})
		addr = following
	frame = Frame('insert', (), MappingProxyType({'s': s, 'n': NULL,
		'x': Lin.sym('x')}))
	config = SymbolicConfiguration(stack=(frame,)).replace(heap=heap)
	return ProgState(config, pc)


def list_state(values, x=None, apart=()):
	"""
	s points to a set whose elems list holds values, None entries (and a
	None x) standing for symbols; apart lists the nodes whose value is
	known to differ from x.
	"""
	s = root('s')
	heap = {s: HeapObject.build('set', {'elems': s.field('elems') if values else NULL})}
	addr = s.field('elems')
	terms = []
	for index, value in enumerate(values):
		term = Lin.sym(addr.label + '.value') if value is None else Lin.of(value)
		following = addr.field('next')
		heap[addr] = HeapObject.build('lnode', {'value': term,
			'next': following if index + 1 < len(values) else NULL})
		terms.append(term)
		addr = following
	xterm = Lin.sym('x') if x is None else Lin.of(x)
	path = Formula.of(*[cmp(terms[i], '!=', xterm) for i in apart])
	frame = Frame('insert', (), MappingProxyType({'s': s, 'x': xterm}))
	config = SymbolicConfiguration(stack=(frame,)).replace(heap=heap, path=path)
	return ProgState(config, 7)


def random_list_state(rng, values=None, x=None):
	if values is None:
		values = [rng.choice([None, None, 0, 1, 2]) for _ in range(rng.randint(0, 4))]
		x = rng.choice([None, None, 0, 1])
	apart = [i for i, v in enumerate(values)
		if (v is None or x is None) and rng.random() < 0.5]
	return list_state(values, x, apart), (values, x)


def refined(rng, values, x):
	# fills in some symbols and may append nodes
	values = [rng.choice([None, 0, 1, 2]) if v is None else v for v in values]
	values += [rng.choice([None, 0, 1, 2]) for _ in range(rng.randint(0, 4 - len(values)))]
	return values, x


def concretes(state):
	"""
	Every (list values, x) the state stands for with symbols in {0, 1, 2}.
	"""
	config = state.config
	x = config.env['x']
	symbols = set(config.path.symbols()) | set(x.symbols())
	for obj in config.heap.values():
		for _, value in obj.fields:
			if isinstance(value, Lin):
				symbols |= value.symbols()
	symbols = sorted(symbols)
	for point in itertools.product(range(3), repeat=len(symbols)):
		model = dict(zip(symbols, point))
		if not config.path.evaluate(model):
			continue
		values = []
		current = config.heap[root('s')].get('elems')
		while current != NULL:
			values.append(config.heap[current].get('value').evaluate(model))
			current = config.heap[current].get('next')
		yield tuple(values), x.evaluate(model)


def covers(abstract, concrete):
	"""
	Whether the concrete list belongs to the abstract state: plain nodes
	take one value each, a summary takes the rest (at least its minimum)
	with its template holding for every value.
	"""
	values, x = concrete
	nodes = abstract.heap.nodes
	equations = [cmp(dict(abstract.scalars)['x'], '=', x)]
	obligations = []
	index = 0
	current = nodes[root('s')].obj.get('elems')
	while current != NULL:
		node = nodes[current]
		if isinstance(node, Summary):
			rest = values[index:]
			if len(rest) < node.min_count or node.next != NULL:
				return False
			obligations += [node.instantiate({'value': Lin.of(v)}) for v in rest]
			index = len(values)
			break
		if index == len(values):
			return False
		equations.append(cmp(node.obj.get('value'), '=', values[index]))
		index += 1
		current = node.obj.get('next')
	if index != len(values):
		return False
	formula = abstract.base.conjoin(Formula.of(*equations), *obligations)
	return not formula.is_false and is_satisfiable(formula) is not Sat.UNSAT


class AlphaTests(unittest.TestCase):
	"""
	Tests summarization of list segments.
	"""

	def testShortChainIsKept(self):
		abstract = alpha(chain_state(1))
		self.assertEqual(abstract.heap.summaries(), [])
		self.assertFalse(abstract.refused)

	def testChainIsSummarized(self):
		abstract = alpha(chain_state(3))
		summaries = abstract.heap.summaries()
		self.assertEqual(len(summaries), 1)
		self.assertEqual(summaries[0].min_count, 3)
		self.assertEqual(summaries[0].link, 'next')
		self.assertEqual(summaries[0].next, NULL)
		self.assertEqual(len(abstract.heap.nodes), 2)

	def testValueClause(self):
		abstract = alpha(chain_state(2))
		summary = abstract.heap.summaries()[0]
		e = Lin.sym(summary.symbol('value'))
		clause = Formula([[cmp(e, '=', Lin.sym('s.elems.value')),
			cmp(e, '=', Lin.sym('s.elems.next.value'))]]).normalized()
		self.assertEqual(summary.value_clauses, clause)
		self.assertTrue(clause.clauses <= abstract.constraint.clauses)

	def testPlainView(self):
		abstract = alpha(chain_state(3), summarize=False)
		self.assertEqual(abstract.heap.summaries(), [])
		self.assertEqual(len(abstract.heap.nodes), 4)

	def testCycleIsRefused(self):
		state = chain_state(1)
		node = root('s').field('elems')
		config = state.config.with_object(node,
			state.config.heap[node].set('next', node))
		abstract = alpha(ProgState(config, state.pc))
		self.assertTrue(abstract.refused)
		looped = ProgState(config, state.pc)
		self.assertFalse(abstract_subsumes(looped, looped))


class SubsumptionTests(unittest.TestCase):
	"""
	Tests plain and abstract subsumption.
	"""

	def testReflexive(self):
		for length in (0, 1, 2):
			state = chain_state(length)
			self.assertTrue(subsumes(state, state), length)

	def testProgramCounter(self):
		self.assertFalse(subsumes(chain_state(1, pc=7), chain_state(1, pc=8)))

	def testPlainLengthsDiffer(self):
		self.assertFalse(subsumes(chain_state(1), chain_state(2)))
		self.assertFalse(subsumes(chain_state(2), chain_state(1)))

	def testLongerSummaryIsCovered(self):
		self.assertTrue(abstract_subsumes(chain_state(2), chain_state(3)))
		self.assertFalse(abstract_subsumes(chain_state(3), chain_state(2)))

	def testTemplateIsRequired(self):
		everywhere = list_state([None, None], apart=[0, 1])
		partly = list_state([None, None, None], apart=[0, 1])
		longer = list_state([None, None, None], apart=[0, 1, 2])
		self.assertFalse(abstract_subsumes(everywhere, partly))
		self.assertTrue(abstract_subsumes(everywhere, longer))
		self.assertTrue(abstract_subsumes(partly, longer))

	def testFoldOfInsert(self):
		program = corpus()
		tree = explore(program, CallPattern.fresh(program, 'insert'), abstract=True)
		folded, recorded = tree.folds[0]
		later = tree.nodes[folded].state
		earlier = tree.nodes[recorded].state
		self.assertEqual(later.pc, earlier.pc)
		self.assertTrue(abstract_subsumes(earlier, later))
		self.assertFalse(abstract_subsumes(later, earlier))

	@settings(max_examples=40, derandomize=True, deadline=None)
	@given(st.integers(0, 5), st.integers(0, 5))
	def testSubsumedLengthsAreCovered(self, k1, k2):
		if abstract_subsumes(chain_state(k1), chain_state(k2)):
			self.assertTrue(k1 == k2 or 2 <= k1 <= k2, (k1, k2))

	def testConcreteInclusion(self):
		rng = random.Random(11)
		checked = 0
		for index in range(250):
			s1, (values, x) = random_list_state(rng)
			if index % 3 == 0:
				s2 = s1
			elif index % 3 == 1:
				s2, _ = random_list_state(rng, *refined(rng, values, x))
			else:
				s2, _ = random_list_state(rng)
			if not abstract_subsumes(s1, s2):
				continue
			checked += 1
			a1 = alpha(s1)
			for concrete in concretes(s2):
				self.assertTrue(covers(a1, concrete), (values, x, concrete))
		self.assertGreater(checked, 80)
