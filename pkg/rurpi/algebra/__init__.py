"""Exact and modular algebra kernels; everything here is pure and picklable."""
