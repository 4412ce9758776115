import random
import unittest

from hypothesis import given, settings, strategies as st

from specsynth.constraints import (Formula, Lin, Sat, TRUE, Validity,
	addr_eq, addr_neq, cmp, counter_model, emit_smtlib, enumerate_models, implies,
	is_satisfiable, simplify, solve)
from specsynth.state import NULL, root

x = Lin.sym('x')
y = Lin.sym('y')
z = Lin.sym('z')

OPS = ['=', '!=', '<', '<=', '>', '>=']
DOMAIN = (-8, 8)


def atoms():
	names = st.sampled_from(['x', 'y', 'z'])
	term = st.builds(lambda a, n, b, m, c: Lin(c, ((n, a), (m, b))),
		st.integers(-2, 2), names, st.integers(-2, 2), names, st.integers(-4, 4))
	return st.builds(cmp, term, st.sampled_from(OPS), st.integers(-4, 4))


def formulas():
	clause = st.lists(atoms(), min_size=1, max_size=2)
	return st.lists(clause, min_size=0, max_size=4).map(lambda c: Formula(c).normalized())


def widen(model):
	# the solver leaves out symbols of the batch that a formula lacks
	model = dict(model)
	for name in ('x', 'y'):
		model.setdefault(name, 0)
	for number, addr in enumerate((root('s'), root('t')), 5):
		model.setdefault(addr, number)
	return model


def brute_force(formula):
	return any(True for _ in enumerate_models(formula, DOMAIN))


class LinTests(unittest.TestCase):
	"""
	Tests linear terms.
	"""

	def testNormalization(self):
		self.assertEqual(x + y - x, y)
		self.assertEqual(str(x + 1), 'x + 1')
		self.assertEqual(str(Lin.sym('_i1') + 1), '_i1 + 1')
		self.assertTrue((x - x).is_const())

	def testSubstitute(self):
		self.assertEqual((x + y).substitute({'x': 2}), y + 2)
		self.assertEqual((x * 3).substitute({'x': y}), y * 3)

	def testEvaluate(self):
		self.assertEqual((x * 2 + y - 1).evaluate({'x': 3, 'y': 4}), 9)


class SolverTests(unittest.TestCase):
	"""
	Tests satisfiability and implication on hand-picked formulas.
	"""

	def testTrue(self):
		self.assertIs(is_satisfiable(TRUE), Sat.SAT)

	def testContradiction(self):
		formula = Formula.of(cmp(x, '<', 3), cmp(x, '>', 5))
		self.assertIs(is_satisfiable(formula), Sat.UNSAT)

	def testDisequality(self):
		formula = Formula.of(cmp(x, '>=', 0), cmp(x, '<=', 1), cmp(x, '!=', 0),
			cmp(x, '!=', 1))
		self.assertIs(is_satisfiable(formula), Sat.UNSAT)

	def testModelIsChecked(self):
		formula = Formula.of(cmp(x + y, '=', 5), cmp(x, '>', y))
		status, model = solve(formula)
		self.assertIs(status, Sat.SAT)
		self.assertTrue(formula.evaluate(model))

	def testDisjunction(self):
		formula = Formula([[cmp(x, '=', 1), cmp(x, '=', 2)], [cmp(x, '!=', 1)]])
		status, model = solve(formula)
		self.assertIs(status, Sat.SAT)
		self.assertEqual(model['x'], 2)

	def testDisjunctionOnly(self):
		formula = Formula([[cmp(x, '=', 1), cmp(x, '=', 2)]])
		status, model = solve(formula)
		self.assertIs(status, Sat.SAT)
		self.assertIn(model['x'], (1, 2))

		formula = Formula([[cmp(x, '=', 1), cmp(x, '=', 2)],
			[cmp(y, '=', 3), cmp(z, '=', 4)]])
		status, model = solve(formula)
		self.assertIs(status, Sat.SAT)
		self.assertEqual(set(model), set(['x', 'y', 'z']))
		self.assertTrue(formula.evaluate(model))

		formula = Formula([[cmp(x, '=', 0), cmp(x, '=', 1)], [cmp(x, '>', 1)]])
		self.assertIs(is_satisfiable(formula), Sat.UNSAT)

	def testSummaryValueClause(self):
		clause = [cmp(Lin.sym('e3'), '=', Lin.sym('?v0')),
			cmp(Lin.sym('e3'), '=', Lin.sym('?v1'))]
		formula = Formula([clause, [cmp(Lin.sym('?v0'), '!=', 2)]]).conjoin(
			Formula.of(cmp(Lin.sym('e3'), '=', 2)))
		status, model = solve(formula)
		self.assertIs(status, Sat.SAT)
		self.assertEqual(model['?v1'], 2)
		self.assertIs(implies(formula, Formula([clause])), Validity.VALID)

	def testAddressDisjunction(self):
		s, t = root('s'), root('t')
		formula = Formula([[addr_eq(s, NULL), addr_eq(t, NULL)],
			[addr_neq(s, NULL)]])
		status, model = solve(formula)
		self.assertIs(status, Sat.SAT)
		self.assertEqual(model[t], 0)
		self.assertNotEqual(model[s], 0)

	def testAddresses(self):
		s = root('s')
		formula = Formula.of(addr_neq(s, NULL), addr_eq(s, NULL))
		self.assertIs(is_satisfiable(formula), Sat.UNSAT)
		self.assertIs(is_satisfiable(Formula.of(addr_neq(s, NULL))), Sat.SAT)

	def testImplies(self):
		stronger = Formula.of(cmp(x, '>', 3))
		weaker = Formula.of(cmp(x, '>', 0))
		self.assertIs(implies(stronger, weaker), Validity.VALID)
		self.assertIs(implies(weaker, stronger), Validity.INVALID)
		self.assertIs(implies(Formula.false(), stronger), Validity.VALID)

	def testSimplify(self):
		formula = Formula.of(cmp(x, '=', 2), cmp(x + y, '>', 2), cmp(x, '>', 0))
		simple = simplify(formula)
		self.assertIs(implies(simple, formula), Validity.VALID)
		self.assertIs(implies(formula, simple), Validity.VALID)
		self.assertLess(len(simple), len(formula))
		self.assertTrue(simplify(Formula.of(cmp(x, '<', 0), cmp(x, '>', 0))).is_false)

	def testSmtlib(self):
		text = emit_smtlib(Formula.of(cmp(x, '<=', 3), cmp(Lin.sym('s.size'), '>', 0)),
			'leaf 0')
		self.assertTrue(text.startswith('; leaf 0\n(set-logic QF_LIA)\n'))
		self.assertIn('(declare-const x Int)', text)
		self.assertIn('(declare-const |s.size| Int)', text)
		self.assertTrue(text.endswith('(check-sat)\n'))


class DifferentialTests(unittest.TestCase):
	"""
	Compares definite solver answers against enumeration over [-8, 8].
	"""

	@settings(max_examples=300, derandomize=True, deadline=None)
	@given(formulas())
	def testSatisfiable(self, formula):
		status = is_satisfiable(formula)
		if status is Sat.SAT:
			model = solve(formula)[1]
			self.assertTrue(formula.evaluate(model))
		elif status is Sat.UNSAT:
			self.assertFalse(brute_force(formula))

	@settings(max_examples=200, derandomize=True, deadline=None)
	@given(formulas(), formulas())
	def testImplies(self, f2, f1):
		if implies(f2, f1) is Validity.VALID:
			for model in enumerate_models(f2, (-3, 3)):
				full = {s: 0 for s in f1.symbols()}
				full.update(model)
				self.assertTrue(f1.evaluate(full))

	@settings(max_examples=200, derandomize=True, deadline=None)
	@given(formulas())
	def testSimplifyKeepsModels(self, formula):
		simple = simplify(formula)
		before = list(enumerate_models(formula, (-2, 2)))
		after = list(enumerate_models(simple, (-2, 2), symbols=formula.symbols()))
		self.assertEqual(before, after)

	def testSeededBatch(self):
		rng = random.Random(42)
		names = ['x', 'y']
		pointers = [root('s'), root('t'), NULL]

		def atom():
			if rng.random() < 0.25:
				left, right = rng.sample(pointers, 2)
				return rng.choice([addr_eq, addr_neq])(left, right)
			term = Lin(rng.randint(-8, 8), ((rng.choice(names), rng.randint(-3, 3)),
				(rng.choice(names), rng.randint(-3, 3))))
			return cmp(term, rng.choice(OPS), rng.randint(-8, 8))

		def formula():
			clauses = [[atom() for _ in range(rng.randint(1, 2))]
				for _ in range(rng.randint(1, 3))]
			return Formula(clauses).normalized()

		def models(f):
			return enumerate_models(f, DOMAIN, max_addr_objects=2,
				symbols=names, addresses=pointers[:2])

		unknown = 0
		for index in range(1000):
			f2 = formula()
			status = is_satisfiable(f2)
			if status is Sat.UNKNOWN:
				unknown += 1
			elif status is Sat.UNSAT:
				self.assertFalse(any(True for _ in models(f2)), str(f2))
			else:
				self.assertTrue(f2.evaluate(widen(solve(f2)[1])), str(f2))
			if index % 4:
				continue
			f1 = formula()
			validity = implies(f2, f1)
			if validity is Validity.VALID:
				for model in models(f2):
					self.assertTrue(f1.evaluate(model), '%s => %s' % (f2, f1))
			elif validity is Validity.INVALID:
				model = widen(counter_model(f2, f1))
				self.assertTrue(f2.evaluate(model))
				self.assertFalse(f1.evaluate(model))
		self.assertLess(unknown, 100)
