import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from specsynth import cli, settings
from specsynth.tests import fixture_path

SOURCE = fixture_path('setlist.c')


class CommandTests(unittest.TestCase):
	"""
	Tests the command-line driver end to end.
	"""

	def setUp(self):
		self.directory = tempfile.mkdtemp()
		environment = mock.patch.dict(os.environ)
		environment.start()
		self.addCleanup(environment.stop)
		os.environ.pop(settings.SEED_VARIABLE, None)

	def tearDown(self):
		shutil.rmtree(self.directory)

	def path(self, name):
		return os.path.join(self.directory, name)

	def main(self, *argv):
		out, err = io.StringIO(), io.StringIO()
		with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
			status = cli.main(list(argv))
		return status, out.getvalue(), err.getvalue()

	def testInferAndCheck(self):
		first, second = self.path('first.json'), self.path('second.json')
		status, _, _ = self.main('infer', '--file', SOURCE, '--modifier', 'insert',
			'--out', first, '--text', self.path('insert.txt'))
		self.assertEqual(status, cli.EXIT_OK)
		with open(first, encoding='utf-8') as source:
			value = json.load(source)
		self.assertEqual(len(value['contracts'][0]['postcondition']), 5)
		with open(self.path('insert.txt'), encoding='utf-8') as source:
			self.assertTrue(source.read().startswith('contract for insert\n'))

		self.main('infer', '--file', SOURCE, '--modifier', 'insert', '--out', second)
		with open(first, 'rb') as a, open(second, 'rb') as b:
			self.assertEqual(a.read(), b.read())

		status, out, _ = self.main('check', '--file', SOURCE, '--modifier', 'insert',
			'--contract', first)
		self.assertEqual(status, cli.EXIT_OK)
		self.assertEqual(out, 'insert: 1083 inputs, 0 violations\n')

	def testSeedFromEnvironment(self):
		os.environ[settings.SEED_VARIABLE] = '5'
		status, out, _ = self.main('infer', '--file', SOURCE, '--modifier', 'isnull',
			'--seed', '9')
		self.assertEqual(status, cli.EXIT_OK)
		self.assertEqual(json.loads(out)['provenance']['seed'], 5)

	def testSyntaxError(self):
		status, _, err = self.main('infer', '--file', fixture_path('broken.c'))
		self.assertEqual(status, cli.EXIT_FAILURE)
		self.assertIn('broken.c:line', err)

	def testUnknownModifier(self):
		status, _, err = self.main('se', '--file', SOURCE, '--modifier', 'remove')
		self.assertEqual(status, cli.EXIT_FAILURE)
		self.assertIn('unknown modifier remove', err)

	def testMissingFile(self):
		status, _, _ = self.main('se', '--file', self.path('missing.c'))
		self.assertEqual(status, cli.EXIT_FAILURE)

	def testSeDot(self):
		dot = self.path('tree.dot')
		status, out, _ = self.main('se', '--file', SOURCE, '--modifier', 'insert',
			'--dot', dot)
		self.assertEqual(status, cli.EXIT_OK)
		self.assertTrue(out.startswith('insert: 10 leaves, 1 folds\n'))
		with open(dot, encoding='utf-8') as source:
			self.assertIn('fold', source.read())

	def testSeUnrolled(self):
		status, out, _ = self.main('se', '--file', SOURCE, '--modifier', 'length',
			'--unroll', '2')
		self.assertEqual(status, cli.EXIT_OK)
		self.assertIn('bounded', out)
		self.assertIn(', 0 folds', out.splitlines()[0])

	def testExportSmt(self):
		directory = self.path('smt')
		status, out, _ = self.main('export-smt', '--file', SOURCE, '--modifier',
			'isnull', '--smt2-dir', directory)
		self.assertEqual(status, cli.EXIT_OK)
		self.assertEqual(sorted(os.listdir(directory)),
			['isnull-leaf0.smt2', 'isnull-leaf1.smt2'])
		self.assertEqual(len(out.splitlines()), 2)
		with open(os.path.join(directory, 'isnull-leaf0.smt2'), encoding='utf-8') as source:
			text = source.read()
		self.assertTrue(text.startswith('; isnull leaf 0 (returned)\n'))
		self.assertTrue(text.endswith('(check-sat)\n'))
