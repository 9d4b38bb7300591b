"""Exact fermionic (Grassmann) tensor networks with MPO symmetry."""
