"""One construction entry point for every code kind the storage tools handle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .. import nmbr, nmsr
from ..errors import ParameterError

KINDS = ("nmbr", "nmbr-systematic", "nmsr", "nmsr-punctured")
CLI_ALIASES = {"nmbr": "nmbr", "nmbr-sys": "nmbr-systematic", "nmsr": "nmsr", "nmsr-punct": "nmsr-punctured"}


@dataclass(frozen=True, eq=False)
class Codec:
    """A built code plus the parameters a manifest records.

    ``impl`` exposes ``encode``, ``repair_helper``, ``repair_assemble`` and
    ``reconstruct`` with node ids ``1..n``.
    """

    kind: str
    n: int
    k: int
    d: int
    q: int
    b: int
    B: int
    alpha: int
    beta: int
    poly: tuple[int, ...]
    exponents: tuple[int, ...]
    impl: Any
    share_rows: int = 0

    @property
    def share_shape(self) -> tuple[int, int]:
        """Shape of one node's per-stripe share matrix."""
        return self.share_rows, self.alpha // self.share_rows

    def encode(self, symbols):
        return self.impl.encode(symbols)

    def repair_helper(self, share, target_id):
        return self.impl.repair_helper(share, target_id)

    def repair_assemble(self, packets):
        return self.impl.repair_assemble(packets)

    def reconstruct(self, shares):
        return self.impl.reconstruct(shares)


def build_codec(kind: str, n: int, k: int, d: int | None, q: int, b: int) -> Codec:
    """Validate parameters for ``kind`` and build the code.

    For ``nmsr`` the repair degree is fixed at ``2k - 2``; for
    ``nmsr-punctured`` the parameters describe the punctured code itself
    (``d = 2k - 1``) and the parent is ``(n + 1, k + 1)``.
    """
    kind = CLI_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ParameterError(f"unknown code kind {kind!r}; choose from {', '.join(KINDS)}")
    if kind in ("nmbr", "nmbr-systematic"):
        if d is None:
            raise ParameterError("NMBR codes need --d")
        enc = nmbr.SYSTEMATIC if kind == "nmbr-systematic" else nmbr.PLAIN
        p = nmbr.validate_params(n, k, d, q, b, encoding=enc)
        code = nmbr.NmbrCode(p)
        return Codec(kind, n, k, d, q, b, p.B, p.alpha, p.beta, code.rep.poly, p.exponents, code, p.m)
    if kind == "nmsr":
        if d is not None and d != 2 * k - 2:
            raise ParameterError(f"NMSR codes have d = 2k-2 = {2 * k - 2}, got d={d}")
        p = nmsr.validate_params(n, k, q, b)
        code = nmsr.NmsrCode(p)
        return Codec(kind, n, k, p.d, q, b, p.B, p.alpha, p.beta, code.rep.poly, p.indices, code, p.m)
    if d is not None and d != 2 * k - 1:
        raise ParameterError(f"punctured NMSR codes have d = 2k-1 = {2 * k - 1}, got d={d}")
    parent = nmsr.validate_params(n + 1, k + 1, q, b)
    child = nmsr.puncture(parent)
    return Codec(kind, n, k, child.d, q, b, child.B, child.alpha, child.beta, child.code.rep.poly,
                 parent.indices, child, parent.m)
