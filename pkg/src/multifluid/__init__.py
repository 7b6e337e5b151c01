"""Numerical laboratory for mass/property transfer ("relabeling")
schemes in multi-fluid compressible Euler equations: 0-D transfer
kernels for all 20 scheme variants, a parameter-sweep analyzer that
establishes each scheme's conservation and boundedness properties
empirically, and a 2D staggered-grid semi-implicit solver that runs
rising-bubble test cases with operator-split transfers."""

__version__ = "0.1.0"
