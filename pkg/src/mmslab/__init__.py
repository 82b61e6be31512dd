"""Exact tools for nonnegative k-sums on hypergraphs: constructions, edge
families, an exact feasibility oracle, permutation averaging and sumset audits.
"""

__version__ = "0.1.0"
