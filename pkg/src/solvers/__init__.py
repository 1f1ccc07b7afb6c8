"""
Exact rational simplex and the mixed packing/covering solver
"""
