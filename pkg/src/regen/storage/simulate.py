"""In-memory storage cluster driven by a failure script.

Script lines (``#`` starts a comment)::

    fail 3
    repair 3 from 1,2,4
    reconstruct from 1,2

Every event is executed even if an earlier one failed; failures are recorded
in the report rather than raised.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import RegenError
from .codecs import Codec
from .files import BandwidthLedger

_FAIL = re.compile(r"^fail\s+(\d+)$")
_REPAIR = re.compile(r"^repair\s+(\d+)\s+from\s+([\d,\s]+)$")
_RECON = re.compile(r"^reconstruct\s+from\s+([\d,\s]+)$")


@dataclass(frozen=True)
class Event:
    op: str
    node: int | None = None
    nodes: tuple[int, ...] = ()

    def __str__(self) -> str:
        ids = ",".join(map(str, self.nodes))
        if self.op == "fail":
            return f"fail {self.node}"
        if self.op == "repair":
            return f"repair {self.node} from {ids}"
        return f"reconstruct from {ids}"


def _ids(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in re.split(r"[,\s]+", text.strip()) if x)


def parse_script(lines: Iterable[str]) -> list[Event]:
    events = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip().lower()
        if not line:
            continue
        if m := _FAIL.match(line):
            events.append(Event("fail", int(m.group(1))))
        elif m := _REPAIR.match(line):
            events.append(Event("repair", int(m.group(1)), _ids(m.group(2))))
        elif m := _RECON.match(line):
            events.append(Event("reconstruct", None, _ids(m.group(1))))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return events


def random_script(n: int, k: int, d: int, events: int, seed: int) -> list[Event]:
    """A valid script: repairs always have ``d`` live helpers, at least ``d`` nodes stay alive."""
    rng = random.Random(seed)
    alive = set(range(1, n + 1))
    dead: set[int] = set()
    out = []
    while len(out) < events:
        choice = rng.random()
        if dead and (choice < 0.4 or len(alive) <= d):
            node = rng.choice(sorted(dead))
            helpers = tuple(sorted(rng.sample(sorted(alive), d)))
            out.append(Event("repair", node, helpers))
            dead.discard(node)
            alive.add(node)
        elif choice < 0.75 and len(alive) > d:
            node = rng.choice(sorted(alive))
            out.append(Event("fail", node))
            alive.discard(node)
            dead.add(node)
        else:
            out.append(Event("reconstruct", None, tuple(sorted(rng.sample(sorted(alive), k)))))
    return out


@dataclass
class EventResult:
    event: str
    ok: bool
    symbols: int = 0
    error: str | None = None


@dataclass
class SimulationReport:
    results: list[EventResult] = field(default_factory=list)
    ledger: BandwidthLedger = field(default_factory=BandwidthLedger)
    stripes: int = 1

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "stripes": self.stripes,
            "events": [r.__dict__ for r in self.results],
            "repair_symbols": self.ledger.total("repair"),
            "reconstruct_symbols": self.ledger.total("reconstruct"),
            "total_symbols": self.ledger.total(),
        }


class Cluster:
    """``n`` nodes holding the shares of a random file of ``stripes`` stripes."""

    def __init__(self, codec: Codec, stripes: int = 1, seed: int = 0) -> None:
        self.codec = codec
        rng = np.random.default_rng(seed)
        self.file = rng.integers(0, codec.q, size=(stripes, codec.B))
        encoded = [codec.encode(s) for s in self.file]
        self.original = {j: [enc[j - 1] for enc in encoded] for j in range(1, codec.n + 1)}
        self.nodes: dict[int, list | None] = dict(self.original)
        self.stripes = stripes

    def alive(self) -> list[int]:
        return [j for j, s in self.nodes.items() if s is not None]

    def _require_alive(self, ids: Sequence[int]) -> None:
        for j in ids:
            if j not in self.nodes:
                raise ValueError(f"no node {j}")
            if self.nodes[j] is None:
                raise ValueError(f"node {j} is dead")

    def apply(self, ev: Event, ledger: BandwidthLedger) -> EventResult:
        c = self.codec
        try:
            if ev.op == "fail":
                self._require_alive([ev.node])
                self.nodes[ev.node] = None
                return EventResult(str(ev), True)
            if ev.op == "repair":
                if ev.node not in self.nodes:
                    raise ValueError(f"no node {ev.node}")
                if self.nodes[ev.node] is not None:
                    raise ValueError(f"node {ev.node} is alive")
                if ev.node in ev.nodes:
                    raise ValueError(f"node {ev.node} cannot help repair itself")
                self._require_alive(ev.nodes)
                if len(set(ev.nodes)) != c.d:
                    raise ValueError(f"repair needs d={c.d} distinct helpers, got {len(set(ev.nodes))}")
                rebuilt, moved = [], 0
                for s in range(self.stripes):
                    packets = [c.repair_helper(self.nodes[h][s], ev.node) for h in ev.nodes]
                    moved += sum(pk.symbols for pk in packets)
                    rebuilt.append(c.repair_assemble(packets))
                ledger.record("repair", (ev.node, *ev.nodes), moved)
                if rebuilt != self.original[ev.node]:
                    raise RegenError(f"repaired share of node {ev.node} differs from the original")
                self.nodes[ev.node] = rebuilt
                return EventResult(str(ev), True, moved)
            self._require_alive(ev.nodes)
            if len(set(ev.nodes)) != c.k:
                raise ValueError(f"reconstruction needs k={c.k} distinct nodes, got {len(set(ev.nodes))}")
            moved = 0
            for s in range(self.stripes):
                shares = [self.nodes[j][s] for j in ev.nodes]
                moved += sum(sh.symbols for sh in shares)
                if not np.array_equal(c.reconstruct(shares), self.file[s]):
                    raise RegenError(f"stripe {s} reconstructed incorrectly")
            ledger.record("reconstruct", ev.nodes, moved)
            return EventResult(str(ev), True, moved)
        except (ValueError, RegenError) as exc:
            return EventResult(str(ev), False, 0, str(exc))


def cmd_simulate(codec: Codec, script: Sequence[Event], stripes: int = 1, seed: int = 0) -> SimulationReport:
    cluster = Cluster(codec, stripes, seed)
    report = SimulationReport(stripes=stripes)
    for ev in script:
        report.results.append(cluster.apply(ev, report.ledger))
    return report
