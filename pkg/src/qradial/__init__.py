"""Exact computer algebra for the GL_n double affine Hecke algebra, Macdonald
polynomials, quantum-group modules and quantum Harish-Chandra radial parts."""

__version__ = "0.1.0"
