"""Cox rings of rational elliptic surfaces with torsion Mordell-Weil group."""

__version__ = "0.1.0"
