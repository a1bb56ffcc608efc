"""Spin-1 weak measurement physics: constants, spin algebra, wave packets and propagation."""
