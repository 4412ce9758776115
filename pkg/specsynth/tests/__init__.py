import functools
import os

from specsynth import lang

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture_path(name):
	return os.path.join(FIXTURES, name)


@functools.lru_cache(maxsize=None)
def corpus():
	"""
	The set/list program every engine test runs against.
	"""
	return lang.load_program(fixture_path('setlist.c'))


@functools.lru_cache(maxsize=None)
def insert_contract():
	# shared by the inference and render suites
	from specsynth import inference
	return inference.infer(corpus(), 'insert')
