"""
nsvalue - no-signaling value of two-prover one-round games
"""

__version__ = "0.1.0"
__author__ = "nsvalue developers"
__description__ = "Decide and approximate the no-signaling value of nonlocal games"
