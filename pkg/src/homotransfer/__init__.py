"""Exact homotopy transfer for finite-dimensional DGLAs."""
