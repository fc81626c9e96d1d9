"""Profit-aware crop advisory toolkit.

Combines a from-scratch random-forest suitability classifier, an additive
trend+seasonality price forecaster, and a weighted composite score into a
ranked crop advisory, with a benchmark harness, CLI, and REST service on top.
"""

__version__ = "0.1.0"
