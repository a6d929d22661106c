"""Exact geometric solutions of sparse polynomial systems over the rationals."""
