"""Electronic structure of H2 and LiH in a static field, from STO-3G integrals to VQE."""

__version__ = "0.1.0"
