"""
Engines built on the solvers: value decisions and the round-scaling monitor
"""
