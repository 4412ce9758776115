import random
import unittest

from specsynth import concrete, lang
from specsynth.concrete import (ConcreteState, NO_VALUE, Ref, Status,
	build_state, heap_delta, run)
from specsynth.errors import CallError
from specsynth.tests import corpus

ONE_NODE = ((('capacity', 2), ('size', 1), ('elems', ((('value', 7),),))),)


class RunTests(unittest.TestCase):
	"""
	Tests the reference interpreter on the set corpus.
	"""

	def setUp(self):
		self.program = corpus()

	def observe(self, state, name, *extra):
		return run(self.program, name, [state.env['s']] + list(extra),
			state).return_value

	def testInsert(self):
		state = build_state([1, 2], capacity=5)
		result = run(self.program, 'insert', [state.env['s'], 3], state)
		self.assertTrue(result.ok)
		self.assertEqual(result.return_value, 1)
		after = result.final_state
		self.assertEqual(self.observe(after, 'length'), 3)
		self.assertEqual(self.observe(after, 'contains', 3), 1)
		self.assertEqual(self.observe(state, 'length'), 2)

	def testInsertPresent(self):
		state = build_state([1, 2], capacity=5)
		result = run(self.program, 'insert', [state.env['s'], 2], state)
		self.assertEqual(result.return_value, 0)
		self.assertEqual(heap_delta(state, result.final_state), [])

	def testInsertFull(self):
		state = build_state([1])
		result = run(self.program, 'insert', [state.env['s'], 4], state)
		self.assertEqual(result.return_value, 0)
		self.assertEqual(self.observe(state, 'isfull'), 1)

	def testObserversOnNull(self):
		state = build_state(null=True)
		self.assertEqual(self.observe(state, 'isnull'), 1)
		self.assertEqual(self.observe(state, 'isempty'), 0)
		self.assertEqual(self.observe(state, 'length'), 0)
		result = run(self.program, 'isnull', [None], state)
		self.assertEqual(result.trace[0], self.program.function('isnull').body.sid)

	def testHeapDelta(self):
		state = build_state([], capacity=1)
		result = run(self.program, 'insert', [state.env['s'], 9], state)
		delta = heap_delta(state, result.final_state)
		self.assertEqual(delta[0], (Ref(1), 'size', 0, 1))
		self.assertEqual(delta[1], (Ref(1), 'elems', None, Ref(2)))
		self.assertEqual(delta[2][:3], (Ref(2), None, None))
		self.assertEqual(delta[2][3].fields, {'value': 9, 'next': None})

	def testNew(self):
		result = run(self.program, 'new', [3], ConcreteState())
		obj = result.final_state.heap[result.return_value]
		self.assertEqual(obj.fields, {'capacity': 3, 'size': 0, 'elems': None})

	def testNullDereference(self):
		program = lang.parse_program('struct n { int v; struct n *next; };\n'
			'int f(struct n *p) { return p->v; }\n').program
		result = run(program, 'f', [None], ConcreteState())
		self.assertIs(result.status, Status.NULL_DEREF)
		self.assertIs(result.return_value, NO_VALUE)

	def testStepLimit(self):
		program = lang.parse_program(
			'int f(int a) { while (1) { a = a + 1; } return a; }\n').program
		result = run(program, 'f', [0], ConcreteState(), step_limit=50)
		self.assertIs(result.status, Status.STEP_LIMIT)
		self.assertFalse(result.ok)
		with self.assertRaises(ValueError):
			run(program, 'f', [0], ConcreteState(), step_limit=0)

	def testRunawayRecursion(self):
		program = lang.parse_program(
			'int f(int n) { int r = f(n + 1); return r; }\n').program
		result = run(program, 'f', [1], ConcreteState(), step_limit=1000000)
		self.assertIs(result.status, Status.STEP_LIMIT)
		self.assertIs(result.return_value, NO_VALUE)
		self.assertLess(result.steps, 1000000)

	def testBadCalls(self):
		state = build_state([1])
		with self.assertRaises(CallError):
			run(self.program, 'insert', [state.env['s']], state)
		with self.assertRaises(CallError):
			run(self.program, 'insert', [Ref(99), 1], state)
		with self.assertRaises(CallError):
			run(self.program, 'insert', [state.env['s'], True], state)
		with self.assertRaises(CallError):
			run(self.program, 'remove', [state.env['s']], state)
		node = state.heap[state.env['s']].fields['elems']
		with self.assertRaises(CallError):
			run(self.program, 'length', [node], state)


class DescriptionTests(unittest.TestCase):
	"""
	Tests input descriptions, materialization and shrinking.
	"""

	def setUp(self):
		self.program = corpus()

	def testMaterialize(self):
		state, args = concrete.materialize(self.program, 'insert', (ONE_NODE, 7))
		self.assertEqual(args[1], 7)
		self.assertEqual(state.env['x'], 7)
		self.assertEqual(state.heap[args[0]].fields['size'], 1)
		self.assertEqual(run(self.program, 'contains', args, state).return_value, 1)
		self.assertEqual(run(self.program, 'length', args[:1], state).return_value, 1)

	def testDescribe(self):
		self.assertEqual(concrete.describe((None, 3)), '(NULL, 3)')
		self.assertEqual(concrete.describe((ONE_NODE, 7)),
			'([{capacity: 2, size: 1, elems: [{value: 7}]}], 7)')

	def testShrink(self):
		candidates = list(concrete.shrink_candidates((ONE_NODE, 7)))
		self.assertEqual(candidates[0], (None, 7))
		emptied = ((('capacity', 2), ('size', 1), ('elems', None)),)
		self.assertIn((emptied, 7), candidates)

	def testEnumerate(self):
		inputs = list(concrete.enumerate_inputs(self.program, 'isnull', (0, 1), 1))
		self.assertEqual(len(inputs), 13)
		self.assertEqual(inputs[0], (None,))

	def testRandomIsSeeded(self):
		first = [concrete.random_inputs(self.program, 'insert', random.Random(7),
			(-8, 8), 4) for _ in range(5)]
		second = [concrete.random_inputs(self.program, 'insert', random.Random(7),
			(-8, 8), 4) for _ in range(5)]
		self.assertEqual(first, second)
