"""Preprocessing toolkit for multi-server web access logs.

Turns raw CLF/ECLF log files into cleaned, user-attributed, sessionized
relational tables (TSV + JSON report + summary figures).
"""

__version__ = "0.1.0"
