"""Guaranteed two-sided eigenvalue bounds on polygonal domains.

Rough lower bounds come from Crouzeix-Raviart projection estimates; sharp
lower bounds from the Lehmann-Goerisch theorem with conforming trial
functions and Raviart-Thomas flux reconstructions.
"""

__version__ = "0.1.0"
