"""Weber class invariants, their resultants, and the Weil representation checks behind them."""

__version__ = "0.1.0"
