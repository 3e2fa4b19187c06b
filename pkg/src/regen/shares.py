"""Per-node payloads exchanged by the codecs."""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import GfMatrix


@dataclass(frozen=True)
class NodeShare:
    """What node ``node_id`` stores: its block row of the encoding matrix times the data matrix."""

    node_id: int
    payload: GfMatrix

    @property
    def symbols(self) -> int:
        return self.payload.rows * self.payload.cols


@dataclass(frozen=True)
class RepairPacket:
    """The ``beta`` symbols one helper sends to rebuild ``target_id``."""

    helper_id: int
    target_id: int
    payload: GfMatrix

    @property
    def symbols(self) -> int:
        return self.payload.rows * self.payload.cols
