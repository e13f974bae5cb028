"""Exact verification that the cylinder and the Moebius strip have
isomorphic Loday functors, together with finite-dimensional Loday functor
tools."""

__version__ = "0.1.0"
