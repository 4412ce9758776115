import functools
import unittest

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from specsynth import lang
from specsynth.constraints import Lin, Sat, is_satisfiable
from specsynth.errors import ReplayRejected, SafetyNetError
from specsynth.state import BOUNDED, NULL, RETURNED, root, state_constraint
from specsynth.symbolic import (CallPattern, concretize, concretize_and_replay,
	explore, initial_config, lazy_init_split, leaf_models, leaf_symbols, se,
	se_abstract)
from specsynth.tests import corpus

COUNTER = 'int f(int a) { int i; i = 0; while (i < a) { i = i + 1; } return i; }\n'
RESET = 'int f(int a) { while (a > 0) { a = 0; } return a; }\n'


def fresh(program, name):
	return CallPattern.fresh(program, name)


@functools.lru_cache(maxsize=None)
def insert_leaves():
	program = corpus()
	call = fresh(program, 'insert')
	return call, [l for l in se(program, call, max_unroll=2) if l.status == RETURNED]


class AbstractTreeTests(unittest.TestCase):
	"""
	Tests folded exploration of insert.
	"""

	@classmethod
	def setUpClass(cls):
		cls.program = corpus()
		cls.tree = explore(cls.program, fresh(cls.program, 'insert'), abstract=True)

	def testLeaves(self):
		leaves = self.tree.leaves
		self.assertEqual(len(leaves), 10)
		self.assertTrue(all(leaf.status == RETURNED for leaf in leaves))
		self.assertEqual(self.tree.final(), leaves)

	def testSingleFold(self):
		self.assertEqual(len(self.tree.folds), 1)
		self.assertEqual([i for i, leaf in enumerate(self.tree.leaves) if leaf.asub],
			[4])

	def testReturnValues(self):
		results = [leaf.result for leaf in self.tree.leaves]
		self.assertEqual(results[0], Lin.of(0))
		self.assertEqual(results[4], Lin.of(1))
		self.assertEqual(results[8], Lin.of(1))
		self.assertEqual(results[9], Lin.of(0))

	def testNullLeafIsLast(self):
		last = self.tree.leaves[-1]
		self.assertIsNone(last.init_heap[root('s')])
		self.assertEqual(last.trace[-1], self.tree.leaves[0].trace[-1])

	def testFoldedLeafIsNotReplayed(self):
		folded = self.tree.leaves[4]
		with self.assertRaises(ReplayRejected):
			concretize_and_replay(self.program, self.tree.call, folded, {})

	def testFoldAfterThreeIterations(self):
		loop = [s for s in lang.iter_statements(self.program.function('insert').body)
			if isinstance(s, lang.While)][0]
		folded, recorded = self.tree.folds[0]
		self.assertEqual(self.tree.nodes[folded].state.config.trace.count(loop.sid), 3)
		self.assertEqual(self.tree.nodes[recorded].state.config.trace.count(loop.sid), 2)

	def testSeAbstract(self):
		leaves = se_abstract(self.program, fresh(self.program, 'insert'))
		self.assertEqual(len(leaves), 10)


class BoundedTests(unittest.TestCase):
	"""
	Tests the unrolling baseline.
	"""

	def setUp(self):
		self.program = corpus()

	def testBoundedLeaves(self):
		leaves = se(self.program, fresh(self.program, 'insert'), max_unroll=2)
		statuses = set(leaf.status for leaf in leaves)
		self.assertEqual(statuses, set([RETURNED, BOUNDED]))
		self.assertFalse(any(leaf.asub for leaf in leaves))

	def testObserversTerminate(self):
		for name in ('isnull', 'isempty', 'isfull'):
			leaves = se(self.program, fresh(self.program, name))
			self.assertTrue(all(leaf.status == RETURNED for leaf in leaves), name)

	def testUnrollMustBePositive(self):
		with self.assertRaises(ValueError):
			se(self.program, fresh(self.program, 'insert'), max_unroll=0)


class LazyInitTests(unittest.TestCase):
	"""
	Tests the object/null split.
	"""

	def setUp(self):
		self.program = corpus()
		self.config = initial_config(self.program, fresh(self.program, 'length'))

	def testSplit(self):
		children = lazy_init_split(self.program, self.config, root('s'))
		self.assertEqual([label for label, _ in children],
			['lazyInit-object', 'lazyInit-null'])
		present, absent = children[0][1], children[1][1]
		self.assertEqual(present.heap[root('s')].struct, 'set')
		self.assertIsNone(absent.init_heap[root('s')])
		self.assertEqual(absent.env['s'], NULL)

	def testNothingToSplit(self):
		self.assertEqual(lazy_init_split(self.program, self.config, NULL),
			[('', self.config)])


class FoldTests(unittest.TestCase):
	"""
	Tests folding and the safety net on int loops.
	"""

	def testResetLoopFolds(self):
		program = lang.parse_program(RESET).program
		tree = explore(program, fresh(program, 'f'), abstract=True)
		self.assertEqual(len(tree.folds), 1)
		self.assertEqual([leaf.asub for leaf in tree.leaves], [True, False])

	def testCounterHitsSafetyNet(self):
		program = lang.parse_program(COUNTER).program
		with self.assertRaises(SafetyNetError):
			explore(program, fresh(program, 'f'), abstract=True, safety_net=5)


class ReplayTests(unittest.TestCase):
	"""
	Replays the concrete instances of every finished leaf.
	"""

	def testCorpusLeavesAgree(self):
		program = corpus()
		for name in program.function_names:
			call = fresh(program, name)
			for leaf in se_abstract(program, call):
				if leaf.asub or leaf.status != RETURNED:
					continue
				for model in leaf_models(program, call, leaf, int_range=(0, 3)):
					replay = concretize_and_replay(program, call, leaf, model)
					self.assertTrue(replay.agrees, '%s: %s' % (name, replay.mismatches))

	def testToolFormulasAreDecided(self):
		program = corpus()
		formulas = []
		for name in program.function_names:
			tree = explore(program, fresh(program, name), abstract=True)
			formulas += [state_constraint(node.state) for node in tree.nodes]
		unknown = [f for f in formulas if is_satisfiable(f) is Sat.UNKNOWN]
		self.assertLess(len(unknown) * 10, len(formulas))

	def testModelOutsidePathIsRejected(self):
		program = corpus()
		call = fresh(program, 'isfull')
		leaf = [l for l in se(program, call) if l.result == Lin.of(1)][0]
		with self.assertRaises(ReplayRejected):
			concretize_and_replay(program, call, leaf, {'s.size': 0, 's.capacity': 3})

	@settings(max_examples=100, derandomize=True, deadline=None,
		suppress_health_check=[HealthCheck.filter_too_much])
	@given(st.data())
	def testRandomModelsAgree(self, data):
		program = corpus()
		call, leaves = insert_leaves()
		leaf = data.draw(st.sampled_from(leaves))
		model = {s: data.draw(st.integers(-3, 3))
			for s in sorted(leaf_symbols(call, leaf))}
		assume(leaf.path.evaluate(concretize(program, call, leaf, model).model))
		replay = concretize_and_replay(program, call, leaf, model)
		self.assertTrue(replay.agrees, replay.mismatches)
