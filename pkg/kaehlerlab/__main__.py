"""Entry point for running kaehlerlab as a module."""

from .main import app

if __name__ == "__main__":
    app()
