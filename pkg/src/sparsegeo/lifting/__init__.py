"""Deformations, Newton lifting along T, and recovery of the curve solution."""
