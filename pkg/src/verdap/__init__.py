"""verdap: a deductive verifier for the MiniVer contract language whose
symbolic execution engine is exposed branch-by-branch through the Debug
Adapter Protocol."""

__version__ = "0.1.0"
