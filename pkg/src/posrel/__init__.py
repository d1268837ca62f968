"""Computations in the exact/regular completion of finite posets.

Subpackages by concern:

  - ``poset``: finite posets, monotone maps, finite weighted (co)limits
  - ``relation``: weakening-closed relations and their calculus
  - ``exreg``: objects-with-congruence and bimodule morphisms
  - ``equivalence``: realization functor and comparison with plain posets
  - ``harness``: randomized law suites with shrinking
  - ``formats`` / ``cli``: text formats and the command-line front end
"""

__version__ = "0.1.0"
