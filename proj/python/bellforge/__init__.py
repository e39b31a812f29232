"""Python access to the bellforge core.

Functionals are passed as JSON text or as dicts in the CLI schema
({"n_inputs", "n_outputs", "coeffs"}); structured results come back as dicts.
"""

import json

from . import _core
from ._core import BellforgeError, f_alpha

__version__ = _core.__version__

__all__ = [
    "BellforgeError",
    "chsh_game",
    "classical_value",
    "construct",
    "construction_functional",
    "dyadic_decompose",
    "entropy",
    "f_alpha",
    "iviol",
    "omega_op",
    "run_cli",
    "seesaw",
]


def _text(functional):
    return functional if isinstance(functional, str) else json.dumps(functional)


def chsh_game():
    return json.loads(_core.chsh_game())


def construction_functional(n, seed=0):
    return json.loads(_core.construction_functional(n, seed))


def construct(n, seed=0, alpha=None, distribution="bernoulli", jobs=1):
    kwargs = {} if alpha is None else {"alpha": alpha}
    return json.loads(_core.construct(n, seed, distribution=distribution, jobs=jobs, **kwargs))


def classical_value(functional, budget=1e8):
    return json.loads(_core.classical_value(_text(functional), budget))


def seesaw(functional, dim=2, restarts=8, seed=0):
    return json.loads(_core.seesaw(_text(functional), dim, restarts, seed))


def omega_op(functional, tol=1e-7):
    return json.loads(_core.omega_op(_text(functional), tol))


def entropy(alphas):
    return _core.entropy(list(alphas))


def iviol(alphas):
    return _core.iviol(list(alphas))


def dyadic_decompose(coeffs):
    return json.loads(_core.dyadic_decompose(list(coeffs)))


def run_cli(args):
    """Runs the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
