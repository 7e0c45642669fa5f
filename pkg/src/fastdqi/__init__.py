"""Decoded quantum interferometry for polynomial intersection, simulated classically."""
