"""casbridge: a bidirectional bridge between a CIC-style proof kernel and a
Wolfram-style computer algebra engine, with skeptical verification tactics,
a propositional prover, and a client-server evaluation link."""

__version__ = "0.1.0"
