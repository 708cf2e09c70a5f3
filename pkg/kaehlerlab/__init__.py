"""kaehlerlab: numerical audits of curvature inequalities for submanifolds of Kaehler space forms."""

__version__ = "0.1.0"
