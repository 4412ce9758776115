import unittest

from specsynth import lang
from specsynth.errors import DiagnosticError
from specsynth.tests import corpus, fixture_path


class ParseTests(unittest.TestCase):
	"""
	Tests parsing and lowering of the C fragment.
	"""

	def setUp(self):
		self.program = corpus()

	def testCorpus(self):
		self.assertEqual(len(self.program.functions), 7)
		self.assertEqual([s.name for s in self.program.structs], ['lnode', 'set'])
		self.assertEqual(self.program.function_names,
			('new', 'insert', 'isnull', 'isempty', 'isfull', 'contains', 'length'))

	def testSignatures(self):
		insert = self.program.function('insert')
		self.assertEqual(insert.return_type, lang.INT)
		self.assertEqual(insert.params, (('s', lang.pointer('set')), ('x', lang.INT)))
		self.assertEqual(self.program.function('new').return_type, lang.pointer('set'))

	def testAllocationIsLowered(self):
		new = self.program.function('new')
		allocs = [s for s in lang.iter_statements(new.body)
			if isinstance(s, lang.Assign) and isinstance(s.value, lang.Alloc)]
		self.assertEqual(len(allocs), 1)
		self.assertEqual(allocs[0].value.struct, 'set')

	def testStatementIdsIncrease(self):
		sids = []
		for function in self.program.functions:
			sids += [s.sid for s in lang.iter_statements(function.body)]
		self.assertEqual(sids, sorted(sids))
		self.assertEqual(len(sids), len(set(sids)))

	def testEverySidHasALine(self):
		for function in self.program.functions:
			for stmt in lang.iter_statements(function.body):
				self.assertIn(stmt.sid, function.source_lines)

	def testEmptySource(self):
		result = lang.parse_program('')
		self.assertTrue(result.ok)
		self.assertEqual(result.program.functions, ())

	def testIncludeIsSkippedWithWarning(self):
		result = lang.parse_program('#include <stdlib.h>\nint f(void) { return 1; }\n')
		self.assertTrue(result.ok)
		self.assertEqual(len(result.warnings), 1)
		self.assertEqual(result.warnings[0].line, 1)

	def testPointerArithmetic(self):
		source = (
			'struct n { int v; struct n *next; };\n'
			'int f(struct n *p) {\n'
			'  struct n *q;\n'
			'  q = p + 1;\n'
			'  return 0;\n'
			'}\n')
		result = lang.parse_program(source)
		self.assertFalse(result.ok)
		self.assertEqual(result.diagnostics[0].line, 4)
		self.assertIn('unsupported construct: pointer arithmetic',
			result.diagnostics[0].message)

	def testSyntaxError(self):
		result = lang.parse_program('int f( { return 0; }\n')
		self.assertFalse(result.ok)
		self.assertIn('syntax error', result.diagnostics[0].message)

	def testUnknownIdentifier(self):
		result = lang.parse_program('int f(void) { return y; }\n')
		self.assertFalse(result.ok)
		self.assertIn('unknown identifier', result.diagnostics[0].message)

	def testUndeclaredStructInSignature(self):
		result = lang.parse_program('int f(struct foo *p) { return p->x; }\n')
		self.assertFalse(result.ok)
		self.assertIn('unknown identifier: struct foo', result.diagnostics[0].message)
		result = lang.parse_program(
			'struct foo *f(int a) { struct foo *p; p = NULL; return p; }\n')
		self.assertFalse(result.ok)
		self.assertIn('unknown identifier: struct foo', result.diagnostics[0].message)

	def testBlockScope(self):
		source = (
			'int f(int a) {\n'
			'  if (a) { int t; t = 1; }\n'
			'  return t;\n'
			'}\n')
		result = lang.parse_program(source)
		self.assertFalse(result.ok)
		self.assertEqual(result.diagnostics[0].line, 3)
		self.assertIn('unknown identifier', result.diagnostics[0].message)
		source = (
			'int f(int a) {\n'
			'  if (a) { int t; t = 1; a = t; } else { int t; t = 2; a = t; }\n'
			'  return a;\n'
			'}\n')
		result = lang.parse_program(source)
		self.assertTrue(result.ok, result.diagnostics)

	def testShadowingIsRejected(self):
		source = 'int f(int a) { if (a) { int a; a = 1; } return a; }\n'
		result = lang.parse_program(source)
		self.assertFalse(result.ok)
		self.assertIn('duplicate variable a', result.diagnostics[0].message)

	def testParseErrorType(self):
		from pycparser import c_parser
		self.assertIs(lang.ParseError, c_parser.ParseError)

	def testNestedCall(self):
		source = 'int g(int a) { return a; }\nint f(int b) { return g(b) + 1; }\n'
		result = lang.parse_program(source)
		self.assertFalse(result.ok)
		self.assertIn('nested call', result.diagnostics[0].message)

	def testLoadRaises(self):
		with self.assertRaises(DiagnosticError):
			lang.load_program(fixture_path('broken.c'))

	def testRoundTrip(self):
		printed = lang.format_program(self.program)
		reparsed = lang.parse_program(printed)
		self.assertTrue(reparsed.ok, reparsed.diagnostics)
		self.assertEqual(reparsed.program, self.program)


class ClassifyTests(unittest.TestCase):
	"""
	Tests the observer/modifier/constructor split.
	"""

	def testCorpus(self):
		classes = lang.classify(corpus())
		self.assertEqual(classes.observers, frozenset(
			['new', 'insert', 'isnull', 'isempty', 'isfull', 'contains', 'length']))
		self.assertEqual(classes.constructors, frozenset(['new']))
		self.assertEqual(classes.modifiers, frozenset(corpus().function_names))

	def testVoidFunction(self):
		program = lang.parse_program('void f(void) { return; }\n').program
		classes = lang.classify(program)
		self.assertEqual(classes.observers, frozenset())
		self.assertEqual(classes.modifiers, frozenset(['f']))

	def testIntFunction(self):
		program = lang.parse_program('int g(int x) { return x; }\n').program
		classes = lang.classify(program)
		self.assertEqual(classes.observers, frozenset(['g']))
		self.assertEqual(classes.modifiers, frozenset(['g']))

	def testBooleanObservers(self):
		self.assertEqual(lang.boolean_observers(corpus()),
			frozenset(['insert', 'isnull', 'isempty', 'isfull', 'contains']))
