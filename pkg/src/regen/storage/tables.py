"""Rate and size comparison against product-matrix baselines.

All sizes are in bits (``q = 2`` for the nearly-optimal codes); the baselines
are concatenated with themselves until ``n, k, d, alpha, beta`` agree, and
EPM sizes count information bits only.  Values are exact fractions.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .. import nmbr, nmsr

UNITS = {"KB": 8 * 10**3, "MB": 8 * 10**6, "GB": 8 * 10**9, "TB": 8 * 10**12}


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


@dataclass(frozen=True)
class Printed:
    """A value as printed in a published table, e.g. ``Printed("2.5", "GB")``."""

    text: str
    unit: str | None = None

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)

    @property
    def decimals(self) -> int:
        return len(self.text.split(".")[1]) if "." in self.text else 0

    def in_bits(self) -> Fraction:
        return self.value * UNITS[self.unit] if self.unit else self.value

    def matches(self, computed: Fraction) -> bool:
        """``computed`` lies within one unit of the last printed digit."""
        scaled = computed / UNITS[self.unit] if self.unit else computed
        return abs(scaled - self.value) < Fraction(1, 10**self.decimals)

    def __str__(self) -> str:
        return f"{self.text}{self.unit or ''}"


@dataclass(frozen=True)
class Row:
    scheme: str
    n: int
    k: int
    d: int
    b: int
    q: int
    beta: Fraction
    alpha: Fraction
    B: Fraction
    rate: Fraction
    published_B: Printed | None = None
    published_rate: Printed | None = None


def nmbr_rows(n: int, k: int, d: int, b: int) -> list[Row]:
    """NMBR over GF(2) next to PM-MBR over GF(2^ceil(log n)) and EPM-MBR."""
    p = nmbr.validate_params(n, k, d, 2, b)
    met = nmbr.metrics(p)
    lg = ceil_log2(n)
    beta, alpha = Fraction(met["beta"]), Fraction(met["alpha"])
    C = met["C"]
    pm_rate = Fraction(k * k, d * n) * (Fraction(d, k) - Fraction(k - 1, 2 * k))
    assert C / (alpha * n) == pm_rate
    return [
        Row("NMBR", n, k, d, b, 2, beta, alpha, Fraction(met["B"]), met["rate"]),
        Row("PM-MBR", n, k, d, b, 2**lg, beta, alpha, C, pm_rate),
        Row("EPM-MBR", n, k, d, b, 2, beta, alpha, C / lg, pm_rate / lg),
    ]


def nmsr_rows(n: int, k: int, b: int) -> list[Row]:
    """NMSR over GF(2) next to PM-MSR over GF(2^ceil(log n(k-1))) and EPM-MSR."""
    p = nmsr.validate_params(n, k, 2, b, select=False)
    met = nmsr.metrics(p)
    lg = ceil_log2(n * (k - 1))
    d = p.d
    beta, alpha = Fraction(met["beta"]), Fraction(met["alpha"])
    pm_B = alpha * k
    return [
        Row("NMSR", n, k, d, b, 2, beta, alpha, Fraction(met["B"]), met["rate"]),
        Row("PM-MSR", n, k, d, b, 2**lg, beta, alpha, pm_B, Fraction(k, n)),
        Row("EPM-MSR", n, k, d, b, 2, beta, alpha, pm_B / lg, Fraction(k, n * lg)),
    ]


def _with_published(rows: list[Row], printed: list[tuple[Printed, Printed]]) -> list[Row]:
    return [Row(**{**r.__dict__, "published_B": pb, "published_rate": pr}) for r, (pb, pr) in zip(rows, printed)]


# (n, k, d, b) and the printed (B, rate) for the NMBR, PM-MBR, EPM-MBR rows
TABLE2 = [
    ((30, 20, 20, 10000 * 20),
     [(Printed("2.5", "GB"), Printed("0.33")), (Printed("2.625", "GB"), Printed("0.35")),
      (Printed("0.525", "GB"), Printed("0.07"))]),
    ((26, 22, 24, 16750 * 22),
     [(Printed("10.03", "GB"), Printed("0.4583")), (Printed("10.41", "GB"), Printed("0.4759")),
      (Printed("2.8", "GB"), Printed("0.095"))]),
    ((260, 220, 240, 16749 * 220),
     [(Printed("1.002", "TB"), Printed("0.4583")), (Printed("1.006", "TB"), Printed("0.4601")),
      (Printed("0.11", "TB"), Printed("0.05"))]),
    ((2600, 2200, 2400, 16752 * 2200),
     [(Printed("100.32", "TB"), Printed("0.4583")), (Printed("100.36", "TB"), Printed("0.4585")),
      (Printed("8.36", "TB"), Printed("0.038"))]),
]

# (n, k, b) and the printed (B, rate) for the NMSR, PM-MSR, EPM-MSR rows
TABLE4 = [
    ((20, 10, 200 * 10),
     [(Printed("405.225", "KB"), Printed("0.45025")), (Printed("450", "KB"), Printed("0.5")),
      (Printed("56.25", "KB"), Printed("0.0625"))]),
    ((100, 40, 1200 * 40),
     [(Printed("0.27", "GB"), Printed("0.39")), (Printed("0.28", "GB"), Printed("0.4")),
      (Printed("0.02", "GB"), Printed("0.033"))]),
    ((100, 40, 6000 * 40),
     [(Printed("6.84", "GB"), Printed("0.39")), (Printed("7.02", "GB"), Printed("0.4")),
      (Printed("0.585", "GB"), Printed("0.033"))]),
    ((1000, 400, 190 * 400),
     [(Printed("0.718", "GB"), Printed("0.39")), (Printed("0.72", "GB"), Printed("0.4")),
      (Printed("37.9", "MB"), Printed("0.02"))]),
]

TABLE1 = [
    ("q", "2", "2^ceil(log n)", "2"),
    ("beta", "b^2/k^2", "b^2/k^2 bits", "b^2/k^2 bits"),
    ("alpha", "(b^2/k^2)*d", "(b^2/k^2)*d", "(b^2/k^2)*d"),
    ("B", "b(b+1)/2 + b^2(d/k - 1)", "(b^2/k)(d - (k-1)/2)", "(b^2/(k ceil(log n)))(d - (k-1)/2)"),
    ("rate", "(k^2/(dn))(d/k - 1/2 + 1/(2b))", "(k^2/(dn))(d/k - (k-1)/(2k))",
     "(k^2/(dn ceil(log n)))(d/k - (k-1)/(2k))"),
]
TABLE3 = [
    ("q", "2", "2^ceil(log n(k-1))", "2"),
    ("beta", "b^2/k^2", "b^2/k^2 bits", "b^2/k^2 bits"),
    ("alpha", "(b^2/k^2)(k-1)", "(b^2/k^2)(k-1)", "(b^2/k^2)(k-1)"),
    ("B", "(b^2(k-1)/k)(1 - 1/k + 1/b)", "b^2(k-1)/k", "b^2(k-1)/(k ceil(log n(k-1)))"),
    ("rate", "(k/n)(1 - 1/k + 1/b)", "k/n", "k/(n ceil(log n(k-1)))"),
]


def table2() -> list[Row]:
    return [r for params, printed in TABLE2 for r in _with_published(nmbr_rows(*params), printed)]


def table4() -> list[Row]:
    return [r for params, printed in TABLE4 for r in _with_published(nmsr_rows(*params), printed)]


FIELDS = ["scheme", "n", "k", "d", "b", "q", "beta", "alpha", "B", "rate", "published_B", "published_rate"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{float(x):.6g}"
    return str(x)


def to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in rows:
        w.writerow([_fmt(getattr(r, f)) for f in FIELDS])
    return buf.getvalue()


def to_text(rows: list[Row]) -> str:
    cells = [FIELDS] + [[_fmt(getattr(r, f)) for f in FIELDS] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(FIELDS))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells) + "\n"


def formula_text(table: list[tuple[str, str, str, str]], names: tuple[str, str, str]) -> str:
    cells = [("",) + names] + table
    widths = [max(len(row[i]) for row in cells) for i in range(4)]
    return "\n".join(" | ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells) + "\n"


def cmd_tables(preset: str, *, kind: str = "nmbr", n: int | None = None, k: int | None = None,
               d: int | None = None, b: int | None = None, fmt: str = "text") -> str:
    """Render a preset (``table1`` .. ``table4``) or a ``custom`` parameter row."""
    if preset == "table1":
        return formula_text(TABLE1, ("NMBR", "PM-MBR", "EPM-MBR"))
    if preset == "table3":
        return formula_text(TABLE3, ("NMSR", "PM-MSR", "EPM-MSR"))
    if preset == "table2":
        rows = table2()
    elif preset == "table4":
        rows = table4()
    elif preset == "custom":
        if None in (n, k, b) or (kind.startswith("nmbr") and d is None):
            raise ValueError("custom tables need --n --k --b (and --d for NMBR)")
        rows = nmbr_rows(n, k, d, b) if kind.startswith("nmbr") else nmsr_rows(n, k, b)
    else:
        raise ValueError(f"unknown preset {preset!r}; choose table1..table4 or custom")
    return to_csv(rows) if fmt == "csv" else to_text(rows)
