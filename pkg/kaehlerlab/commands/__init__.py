"""Command modules for the kaehlerlab CLI."""
