"""infinikit: exhibitable infinitesimals.

Exact Levi-Civita numbers, sequence-model hyperreals with explicit
`undecidable-without-ultrafilter` verdicts, finite operator truncations,
Dixmier-trace diagnostics and the operator-to-ultrafilter bridge.
"""

__version__ = "0.1.0"
