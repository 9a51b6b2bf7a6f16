"""
nilsoliton - exact curvature and Ricci soliton checks for Lorentz metrics on H3xR and G4
Symbolic engine with a command-line front end that re-derives and verifies every printed computation.
"""

__version__ = "1.0.0"
__author__ = "nilsoliton developers"
