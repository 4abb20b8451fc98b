"""Positive-map and Choi-witness audit toolkit."""
