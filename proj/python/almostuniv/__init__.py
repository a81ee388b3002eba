"""Almost universality of ternary inhomogeneous quadratic polynomials.

Each function mirrors a command of the ``almostuniv`` tool and returns the
same JSON document, decoded into Python objects. A Gram matrix is given in
upper-triangle order (g11, g12, g13, g22, g23, g33) and the shift as
numerators over a common denominator.
"""

import json

from . import _core

__all__ = ["analyze", "local_scan", "enumerate", "hilbert"]


def analyze(gram, numerators, denominator, label="", primes=5):
    """Verdict report for the coset (numerators / denominator) + N."""
    return json.loads(_core.analyze_json(list(gram), list(numerators), denominator, label, primes))


def local_scan(gram):
    """Local universality reports at 2 and every prime dividing dN."""
    return json.loads(_core.local_scan_json(list(gram)))


def enumerate(gram, numerators, denominator, bound, gaps=False, jobs=1, budget=0):
    """Represented values up to ``bound``, or the gap list when ``gaps``."""
    return json.loads(_core.enumerate_json(list(gram), list(numerators), denominator, bound, gaps, jobs, budget))


def hilbert(a, b, q):
    """Hilbert symbol (a, b)_q; q = 0 is the real place."""
    return _core.hilbert(a, b, q)
