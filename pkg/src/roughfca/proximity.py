"""Intuitionistic fuzzy proximity relations over numeric attributes.

For an attribute with admissible range [1, R] the degree of similarity
between two values x, y is the pair (mu, nu) with

    mu(x, y) = 1 - |x - y| / R          (membership)
    nu(x, y) = |x - y| / (2 (x + y))    (non-membership)

Both are symmetric, the diagonal is (1, 0), and nu < 1/2 whenever x != y.
The intuitionistic constraint mu + nu <= 1 is NOT guaranteed by these
formulas: it fails exactly when x != y and x + y < R / 2.  Violations are
therefore reported by :func:`validate_proximity` rather than clamped, and
downstream consumers decide whether to proceed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .table import InformationTable


def membership_degree(x: float, y: float, range_max: float) -> float:
    """1 - |x-y|/range_max.  Values are expected in [1, range_max]."""
    return 1.0 - abs(x - y) / range_max


def nonmembership_degree(x: float, y: float) -> float:
    """|x-y| / (2(x+y)).  Zero on the diagonal, strictly below 1/2 otherwise."""
    return abs(x - y) / (2.0 * (x + y))


@dataclass(frozen=True, eq=False)
class IFProximityRelation:
    """Dense symmetric matrix of (mu, nu) degrees for one attribute."""

    attribute: str
    objects: tuple[str, ...]
    mu: np.ndarray
    nu: np.ndarray
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.objects)
        if self.mu.shape != (n, n) or self.nu.shape != (n, n):
            raise ValueError("degree matrices must be |U| x |U|")
        self.mu.setflags(write=False)
        self.nu.setflags(write=False)
        object.__setattr__(self, "_index", {o: i for i, o in enumerate(self.objects)})

    @property
    def size(self) -> int:
        return len(self.objects)

    def degree(self, x: str, y: str) -> tuple[float, float]:
        i, j = self._index[x], self._index[y]
        return float(self.mu[i, j]), float(self.nu[i, j])


def build_proximity(table: InformationTable, attribute: str) -> IFProximityRelation:
    """Full-precision proximity matrix for one numeric attribute."""
    spec = table.spec(attribute)
    if not spec.numeric:
        raise ValueError(f"attribute {attribute!r} is nominal, proximity needs numeric values")
    vals = np.array(table.column(attribute), dtype=float)
    diff = np.abs(vals[:, None] - vals[None, :])
    mu = 1.0 - diff / spec.range_max
    nu = diff / (2.0 * (vals[:, None] + vals[None, :]))
    return IFProximityRelation(attribute, table.objects, mu, nu)


@dataclass(frozen=True)
class ProximityViolation:
    """One failed axiom: kind is "reflexivity", "symmetry" or "sum"."""

    kind: str
    pair: tuple[str, str]
    detail: str


def validate_proximity(rel: IFProximityRelation) -> list[ProximityViolation]:
    """Check reflexivity, symmetry and the constraint mu + nu <= 1 for every
    pair.  Returns an empty list iff all three hold; violations carry the
    offending pair and axiom name.
    """
    out: list[ProximityViolation] = []
    objs = rel.objects
    for i, x in enumerate(objs):
        if rel.mu[i, i] != 1.0 or rel.nu[i, i] != 0.0:
            out.append(ProximityViolation(
                "reflexivity", (x, x),
                f"diagonal is ({rel.mu[i, i]:.6g}, {rel.nu[i, i]:.6g}), expected (1, 0)"))
    for i, x in enumerate(objs):
        for j in range(i + 1, len(objs)):
            y = objs[j]
            if rel.mu[i, j] != rel.mu[j, i] or rel.nu[i, j] != rel.nu[j, i]:
                out.append(ProximityViolation(
                    "symmetry", (x, y),
                    f"({rel.mu[i, j]:.6g}, {rel.nu[i, j]:.6g}) vs "
                    f"({rel.mu[j, i]:.6g}, {rel.nu[j, i]:.6g})"))
            total = rel.mu[i, j] + rel.nu[i, j]
            if total > 1.0:
                out.append(ProximityViolation(
                    "sum", (x, y),
                    f"mu + nu = {total:.6g} > 1"))
    return out


def round_half_up(x: float, places: int = 3) -> float:
    """Decimal round-half-up, the convention used in emitted reports."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def proximity_to_csv(rel: IFProximityRelation) -> str:
    """Render the relation as a CSV cross table with "mu,nu" cells rounded
    to three decimals (cells are quoted since they contain commas).
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([rel.attribute, *rel.objects])
    for i, x in enumerate(rel.objects):
        cells = [
            f"{round_half_up(float(rel.mu[i, j])):.3f},{round_half_up(float(rel.nu[i, j])):.3f}"
            for j in range(rel.size)
        ]
        writer.writerow([x, *cells])
    return buf.getvalue()
