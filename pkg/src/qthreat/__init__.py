"""Quantum-threat cost models for proof-of-work blockchains.

Modules:

- :mod:`qthreat.qec` -- surface-code distillation and code-distance overheads
- :mod:`qthreat.attack` -- Grover mining and ECDLP signature attack estimates
- :mod:`qthreat.forecast` -- hardware and network trend forecasts, crossover years
- :mod:`qthreat.hashcash`, :mod:`qthreat.momentum` -- executable proofs-of-work
- :mod:`qthreat.cli` -- the ``qthreat`` command
"""

__version__ = "0.1.0"
