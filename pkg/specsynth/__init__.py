"""
Contract inference for heap-manipulating C functions by symbolic
execution with shape abstraction and test-based refinement.
"""

__version__ = '0.1.0'
