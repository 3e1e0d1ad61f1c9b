"""Proof checker for a first-order type theory with inductively generated
covers, plus a Kleene-machine realizability backend and a finite cover
engine.  See the README for the layout and docs/ for the input formats."""

__version__ = "0.1.0"
