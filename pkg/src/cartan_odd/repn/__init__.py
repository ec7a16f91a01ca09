"""Reduced enveloping algebra modules: characters, induction, irreducibility."""
