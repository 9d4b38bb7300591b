"""Run settings shared by the verification modules and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

# Sign of the Berezin integral used for tensor-network bonds. The value
# +1 means the integral of theta theta-bar is +1; the symmetry checks
# only close with the opposite choice, so -1 is the default.
NETWORK_BEREZIN_SIGN = -1


@dataclass(frozen=True)
class Settings:
    exact: bool = True
    tol: float | None = None
    normalized: bool = True
    berezin_sign: int = NETWORK_BEREZIN_SIGN

    def __post_init__(self):
        if self.berezin_sign not in (1, -1):
            raise ValueError("berezin_sign must be +1 or -1")

    @property
    def tolerance(self) -> float:
        """Comparison tolerance: 0 in exact mode unless overridden, else 1e-9."""
        if self.tol is not None:
            return self.tol
        return 0.0 if self.exact else 1e-9

    def to_json(self) -> dict:
        return {
            "arith": "exact" if self.exact else "float",
            "tol": self.tolerance,
            "proj_norm": self.normalized,
            "berezin_sign": "+" if self.berezin_sign > 0 else "-",
        }
