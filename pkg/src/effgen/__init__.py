"""Exact toric-surface MMP, section-ring generation and basket calculus."""

__version__ = "0.1.0"
