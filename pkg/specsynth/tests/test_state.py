import unittest
from types import MappingProxyType

from specsynth.constraints import Lin
from specsynth.state import (NULL, UNINIT, Frame, HeapObject, LocationId,
	SymbolicConfiguration, _Uninit, record_write, render_config, root,
	state_constraint)
from specsynth.symbolic import CallPattern, initial_config
from specsynth.tests import corpus


class SymAddrTests(unittest.TestCase):
	"""
	Tests symbolic addresses.
	"""

	def testNull(self):
		self.assertTrue(NULL.is_null)
		self.assertEqual(str(NULL), 'NULL')
		with self.assertRaises(ValueError):
			NULL.field('next')

	def testFieldPath(self):
		addr = root('s').field('elems').field('next')
		self.assertEqual(str(addr), '&s.elems.next')
		self.assertEqual(addr.label, 's.elems.next')
		self.assertEqual(addr.parent, (root('s').field('elems'), 'next'))
		self.assertIsNone(root('s').parent)

	def testUninitIsSingleton(self):
		self.assertIs(_Uninit(), UNINIT)
		self.assertEqual(str(UNINIT), 'uninit')


class HeapObjectTests(unittest.TestCase):
	"""
	Tests heap objects and locations.
	"""

	def setUp(self):
		self.node = HeapObject.build('lnode', {'value': Lin.of(3), 'next': NULL})

	def testGetSet(self):
		changed = self.node.set('value', Lin.sym('x'))
		self.assertEqual(changed.get('value'), Lin.sym('x'))
		self.assertEqual(self.node.get('value'), Lin.of(3))
		with self.assertRaises(KeyError):
			self.node.set('size', Lin.of(0))
		with self.assertRaises(KeyError):
			self.node.get('size')

	def testLocations(self):
		self.assertEqual(str(LocationId.variable('n')), 'n')
		self.assertEqual(str(LocationId.field_of(root('new_node'), 'value')),
			'new_node->value')
		self.assertEqual(str(LocationId.field_of(root('s'), 'elems')), 's->elems')

	def testRecordWrite(self):
		config = SymbolicConfiguration()
		once = record_write(config, LocationId.variable('n'))
		self.assertIs(record_write(once, LocationId.variable('n')), once)
		self.assertEqual(once.locations, frozenset([LocationId.variable('n')]))


class ConfigurationTests(unittest.TestCase):
	"""
	Tests configurations and their rendering.
	"""

	def testInitialInsert(self):
		program = corpus()
		config = initial_config(program, CallPattern.fresh(program, 'insert'))
		self.assertEqual(config.env['s'], root('s'))
		self.assertEqual(config.env['x'], Lin.sym('x'))
		self.assertEqual(dict(config.roots), {'s': 'set'})
		text = render_config(config)
		self.assertIn('⟨false⟩aSubFlag', text)
		self.assertIn('⟨s⟩locations', text)
		self.assertTrue(text.startswith('⟨insert@'))

	def testStateConstraint(self):
		frame = Frame('f', (), MappingProxyType({'x': Lin.sym('x') + 1,
			'p': NULL}))
		config = SymbolicConfiguration(stack=(frame,))
		self.assertEqual(state_constraint(config).symbols(), frozenset(['$x', 'x']))
		self.assertEqual(config.pointer_bindings(), [('p', NULL)])

	def testReturnedRendering(self):
		config = SymbolicConfiguration(status='returned', result=Lin.of(1))
		self.assertTrue(render_config(config).startswith('⟨tv(int, 1)⟩k'))
