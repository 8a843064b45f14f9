"""Synthesis of n-qubit fully-controlled gates into CNOT and one-qubit
gates, with brute-force unitary verification and gate-count reporting."""

from .circuit import (Circuit, CNot, ControlledU, CountReport, OneQubit,
                      Toffoli, compose, counts, dagger, emit_json, emit_qasm,
                      expand_intermediates, merge_pass, parse_json)
from .exp_synth import exp_synthesize
from .poly_synth import SynthesisError, ToffoliPolicy, poly_synthesize

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CNot", "ControlledU", "CountReport", "OneQubit", "Toffoli",
    "SynthesisError", "ToffoliPolicy", "compose", "counts", "dagger",
    "emit_json", "emit_qasm", "expand_intermediates", "exp_synthesize",
    "merge_pass", "parse_json", "poly_synthesize", "__version__",
]
