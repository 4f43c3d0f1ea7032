"""Exact q-binomial combinatorics and identity verification."""
