"""Utility modules for kaehlerlab."""
