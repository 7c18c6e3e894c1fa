"""Numerical tolerance knobs, collected in one frozen record.

Every decision the library makes against a threshold goes through a
:class:`ToleranceConfig`.  The defaults below are used everywhere unless the
caller passes an explicit config (the CLI exposes each field as a
``--tol-<name>`` flag).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used by the numerical kernels.

    Members
    -------
    eps_zero : float
        Relative size under which trailing polynomial coefficients are trimmed.
    delta_cluster : float
        Root-cluster radius (scaled by ``max(1, |root|)``): companion-matrix
        roots closer than this are treated as one multiple root.
    delta_boundary : float
        Half-width of the band around the unit circle inside which a point is
        classified as "boundary" rather than interior/exterior.
    tau_pole : float
        Poles must have modulus ``>= 1 + tau_pole`` for membership in the
        admissible class.
    tau_ord : float
        Relative threshold on derivative values when computing the order of
        vanishing at a point.
    tau_unit : float
        Threshold on the unit coefficient when deciding invertibility in the
        local nilpotent algebras.
    eps_bezout : float
        Maximum accepted residual of the Bezout identity ``u*p + v*q - g``.
    delta_match : float
        Pairing radius when matching the zero multisets of two symbols.
    eps_witness : float
        Relative residual accepted for a similarity witness
        (``|r o t - s| / (|s| + 1)`` on the circle).
    sigma_svd : float
        Singular values below this count as zero in truncated-kernel ranks.
    """

    eps_zero: float = 1e-12
    delta_cluster: float = 1e-7
    delta_boundary: float = 1e-9
    tau_pole: float = 1e-8
    tau_ord: float = 1e-7
    tau_unit: float = 1e-8
    eps_bezout: float = 1e-8
    delta_match: float = 1e-6
    eps_witness: float = 1e-8
    sigma_svd: float = 1e-6

    def replace(self, **kw) -> "ToleranceConfig":
        return dataclasses.replace(self, **kw)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


#: Default tolerances; treat as read-only.
DEFAULT_TOL = ToleranceConfig()


def resolve_tol(tol: ToleranceConfig | None) -> ToleranceConfig:
    """Return ``tol`` or the package default when ``tol`` is None."""
    return DEFAULT_TOL if tol is None else tol
