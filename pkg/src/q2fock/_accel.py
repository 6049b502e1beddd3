"""Pick the compiled quadrature kernel when it is importable.

Set ``Q2FOCK_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

from q2fock import quadrature as _py

integrate_family_python = _py.integrate_family

if os.environ.get("Q2FOCK_PURE_PYTHON"):
    integrate_family_compiled = None
else:
    try:
        from q2fock._kernels import integrate_family as integrate_family_compiled
    except ImportError:
        integrate_family_compiled = None

if integrate_family_compiled is not None:
    integrate_family = integrate_family_compiled
    BACKEND = "cython"
else:
    integrate_family = integrate_family_python
    BACKEND = "python"
