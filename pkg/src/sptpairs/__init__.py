"""Exact q-series arithmetic for spt-type partition-pair generating functions."""
__version__ = "0.1.0"
