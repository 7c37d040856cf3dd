"""Networked public goods experiments: server, simulator and analysis."""

__version__ = "0.1.0"
