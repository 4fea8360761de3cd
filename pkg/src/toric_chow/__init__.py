"""Chow quotients of toric varieties by one-parameter subgroups, computed exactly."""
