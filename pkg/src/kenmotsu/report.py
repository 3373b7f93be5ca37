"""Result records for pointwise identity checks.

Every check in this package evaluates some tensor identity at a list of
sample points and reports the worst absolute residual per point.  The
record keeps enough structure for the CLI to render text and JSON views
without recomputing anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PointResidual:
    """Max-abs residual of one identity at one sample point."""

    point: tuple[float, ...]
    residual: float

    def to_dict(self) -> dict:
        return {"point": list(self.point), "residual": float(self.residual)}


# status values:
#   "ok"             residual is compared against the tolerance
#   "info"           recorded for inspection only, never counts as a failure
#   "not-applicable" check is vacuous here (e.g. Weyl in dimension 3)
_STATUSES = ("ok", "info", "not-applicable")


@dataclass
class IdentityResidualReport:
    """Outcome of checking one identity over a set of sample points.

    ``extras`` carries named scalar diagnostics (signed residuals,
    contrast values, fitted coefficients) that accompany the headline
    max-abs residual.
    """

    identity: str
    tolerance: float
    points: list[PointResidual] = field(default_factory=list)
    extras: dict[str, float] = field(default_factory=dict)
    status: str = "ok"
    note: str = ""

    def __post_init__(self) -> None:
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def max_residual(self) -> float:
        if not self.points:
            return 0.0
        return max(p.residual for p in self.points)

    @property
    def passed(self) -> bool:
        """True when the worst residual is within tolerance.

        Informational and not-applicable reports never fail.
        """
        if self.status != "ok":
            return True
        return self.max_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "tolerance": float(self.tolerance),
            "max_residual": float(self.max_residual),
            "passed": self.passed,
            "status": self.status,
            "note": self.note,
            "extras": {k: float(v) for k, v in sorted(self.extras.items())},
            "points": [p.to_dict() for p in self.points],
        }
