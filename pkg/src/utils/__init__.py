"""
Utility modules for nsvalue
"""
