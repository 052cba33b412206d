"""Order-by-order slip boundary conditions for the general linear problem.

Each record lists, for the boundary unknowns of one expansion order, the
weighted derivative terms of lower-order outer ("outer") and viscous-layer
("viscous") fields.  Derivatives are tuples of variables: 'x2' and 'y' are
wall-normal (outer and stretched), 'xi' is tangential (i = 1, 3).
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

ORDERS = ("0", "half", "one")
NORMAL = ("x2", "y")


class Term(NamedTuple):
    symbol: str        # coefficient as printed, e.g. "sqrt2*k0"
    weight: float
    field: str         # e.g. "u_i", "u_2", "theta"
    layer: str         # "outer" | "viscous"
    order: int         # expansion order of the field
    derivative: tuple

    @property
    def is_normal(self):
        return all(d in NORMAL for d in self.derivative)


@dataclass(frozen=True)
class SlipBCRecord:
    order: str
    relations: dict    # unknown -> tuple of Term; the unknown minus its wall value

    def unknowns(self):
        return tuple(self.relations)

    def terms(self):
        return [t for v in self.relations.values() for t in v]


def slip_bc_records(coeffs):
    """The no-slip, first-order and second-order boundary records."""
    s2 = math.sqrt(2)
    k0, t0, t1, k1, k2, t2 = (coeffs.k0, coeffs.t0, coeffs.t1, coeffs.k1, coeffs.k2, coeffs.t2)
    r0 = SlipBCRecord("0", {"u_i": (), "u_2": (), "theta": ()})
    r1 = SlipBCRecord("half", {
        "u_2": (),
        "u_i": (Term("sqrt2*k0", s2 * k0, "u_i", "viscous", 0, ("y",)),),
        "theta": (Term("sqrt2*t1", s2 * t1, "theta", "viscous", 0, ("y",)),),
    })
    r2 = SlipBCRecord("one", {
        "u_2": (),
        "u_i": (Term("sqrt2*k0", s2 * k0, "u_i", "outer", 0, ("x2",)),
                Term("sqrt2*k0", s2 * k0, "u_2", "outer", 0, ("xi",)),
                Term("sqrt2*k0", s2 * k0, "u_i", "viscous", 1, ("y",)),
                Term("2*t0", 2 * t0, "theta", "outer", 0, ("xi",)),
                Term("2*k2", 2 * k2, "u_i", "viscous", 0, ("y", "y"))),
        "theta": (Term("sqrt2*t1", s2 * t1, "theta", "viscous", 1, ("y",)),
                  Term("sqrt2*t1", s2 * t1, "theta", "outer", 0, ("x2",)),
                  Term("2*t2", 2 * t2, "theta", "viscous", 0, ("y", "y")),
                  Term("k1", k1, "u_2", "viscous", 1, ("y",)),
                  Term("k1", k1, "u_2", "outer", 0, ("x2",))),
    })
    return r0, r1, r2


class CouetteSlip(NamedTuple):
    """u - u_w = a1 du/dx + a2 d2u/dx2 at the wall."""
    a1: float
    a2: float


def specialize_couette(record, eps):
    """Reduce the order-one record to shear flow along x1 varying only in x2.

    Tangential derivatives, u_2 and theta drop out.  Every remaining term is a
    normal derivative of the tangential velocity; in the physical variable a
    k-th normal derivative carries eps^k.
    """
    if record.order != "one":
        raise ValueError("specialization needs the order-one record")
    a = [0.0, 0.0]
    seen = set()
    for t in record.relations["u_i"]:
        if t.field != "u_i" or not t.is_normal:
            continue
        k = len(t.derivative)
        # the outer and viscous pieces of one derivative term share a coefficient
        if (t.symbol, k) in seen:
            continue
        seen.add((t.symbol, k))
        a[k - 1] += t.weight * eps ** k
    return CouetteSlip(*a)


@dataclass(frozen=True)
class NSCoefficients:
    mu: float              # viscosity
    conductivity: float
    gamma3: float


def assemble_ns_system_coeffs(gammas):
    g1, g2, g3 = gammas
    return NSCoefficients(float(g1), float(g2), float(g3))


def record_rows(records):
    """Flat rows (order, unknown, symbol, weight, field, layer, field order, derivative)."""
    rows = []
    for r in records:
        for unknown, terms in r.relations.items():
            if not terms:
                rows.append((r.order, unknown, "0", 0.0, "", "", "", ""))
            for t in terms:
                rows.append((r.order, unknown, t.symbol, t.weight, t.field, t.layer, t.order,
                             "d/d" + " d/d".join(t.derivative)))
    return rows
