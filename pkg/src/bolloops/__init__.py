"""Finite loops as Cayley tables: right Bol identities, invariants,
isomorphism and isotopy, and searches for right Bol loops of order 27."""

from .loop import Loop, LoopError, parse_loop, read_loop, validate, write_loop

__all__ = ["Loop", "LoopError", "parse_loop", "read_loop", "validate", "write_loop"]
__version__ = "0.1.0"
