"""Exact computations in the monogenic free inverse semigroup FI1."""
