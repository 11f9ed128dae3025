"""Finite-state decision-model estimation by genetic algorithm."""

try:
    from ._gafsm import *  # noqa: F401,F403  (installed package layout)
    from ._gafsm import __version__  # noqa: F401
except ImportError:
    from _gafsm import *  # noqa: F401,F403  (build-tree layout)
    from _gafsm import __version__  # noqa: F401
