"""Graph-state merging, correction validation and protocol simulation.

The package turns the composable graph-state machinery into executable
code: GF(2) pivot decomposition and CNOT/swap synthesis, graph-state
merging (generalized entanglement swapping) with its correction validator,
executable ideal resources with a stabilizer-twirl compiler, a multiparty
GHZ verification-protocol simulator, and closed-form security-bound
calculators, all checkable against a dense state-vector oracle.
"""

__version__ = "0.1.0"
