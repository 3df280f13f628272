"""fsde-lab: fractional SDE with Caputo dissipation and fBm forcing."""

__version__ = "0.1.0"
