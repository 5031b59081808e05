"""Computable Orlicz-space and exponential-manifold calculus on the Gaussian space."""
