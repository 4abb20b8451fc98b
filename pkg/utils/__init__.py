"""Numeric, parsing and logging helpers shared by the services and CLI."""
