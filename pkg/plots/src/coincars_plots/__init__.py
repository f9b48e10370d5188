"""Figure rendering for coincars data products.

Standalone scripts over the CSV/JSON files the coincars CLI writes; no
coupling to the simulator beyond those file contracts.
"""

__version__ = "0.1.0"
