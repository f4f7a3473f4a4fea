"""Charging-coordination engine: priority scoring and capacity-constrained selection.

Every time slot, each EV reports its state of charge (SoC) and a normalized
time-to-charge-completion deadline (TCC). The coordinator scores each request,
ranks requests by priority per unit of demanded energy, and greedily admits
them until the station's per-slot energy cap is reached. All functions here are
pure and deterministic, so the same batch always produces the same allocation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class ChargingRequest:
    """One EV's report for one time slot.

    soc and tcc are both fractions in [0, 1]; tcc = 0 means the deadline is
    now, tcc = 1 means the deadline is a full horizon away.
    """

    ev_id: int
    soc: float
    tcc: float
    slot: int = 0

    def __post_init__(self):
        if not 0.0 <= self.soc <= 1.0:
            raise ValueError(f"soc must be in [0, 1], got {self.soc}")
        if not 0.0 <= self.tcc <= 1.0:
            raise ValueError(f"tcc must be in [0, 1], got {self.tcc}")
        if self.slot < 0:
            raise ValueError(f"slot must be >= 0, got {self.slot}")


@dataclass(frozen=True)
class Priority:
    """Urgency score and energy demand derived from one request."""

    omega: float
    demand_kwh: float


@dataclass(frozen=True)
class Allocation:
    """Coordinator output for one slot: admitted EVs and granted energy."""

    selected: frozenset[int]
    granted_kwh: dict[int, float]
    total_kwh: float

    def as_rows(self) -> list[tuple[int, int, float]]:
        """Stable (ev_id, selected, granted_kwh) rows sorted by ev_id."""
        ids = sorted(self.granted_kwh)
        return [(i, int(i in self.selected), self.granted_kwh[i]) for i in ids]


@dataclass(frozen=True)
class StationConfig:
    """Station parameters: per-slot energy cap P, pack size B, and the
    urgency weight that trades SoC deficit against deadline proximity."""

    capacity_kwh: float = 162.0
    battery_kwh: float = 27.0
    upsilon: float = 0.5
    tcc_horizon_slots: int = 48

    def __post_init__(self):
        if self.capacity_kwh <= 0:
            raise ValueError("capacity_kwh must be > 0")
        if self.battery_kwh <= 0:
            raise ValueError("battery_kwh must be > 0")
        if not 0.0 <= self.upsilon <= 1.0:
            raise ValueError("upsilon must be in [0, 1]")


def normalize_tcc(remaining_slots: float, cfg: StationConfig) -> float:
    """Map a deadline given in slots to the normalized tcc fraction."""
    h = cfg.tcc_horizon_slots
    return min(max(remaining_slots / h, 0.0), 1.0)


def priority(req: ChargingRequest, cfg: StationConfig) -> Priority:
    """Score one request: omega = upsilon*(1 - soc) + (1 - upsilon)*(1 - tcc).

    Lower SoC and a nearer deadline both raise the score. Demand is the
    energy needed to fill the pack, (1 - soc) * B.
    """
    omega = cfg.upsilon * (1.0 - req.soc) + (1.0 - cfg.upsilon) * (1.0 - req.tcc)
    demand_kwh = (1.0 - req.soc) * cfg.battery_kwh
    return Priority(omega=omega, demand_kwh=demand_kwh)


def _rank_key(req: ChargingRequest, pri: Priority) -> tuple:
    # Zero-demand requests rank first (infinite priority density), the rest
    # by omega per kWh descending; ties broken by omega desc then ev_id asc.
    if pri.demand_kwh == 0.0:
        return (0, 0.0, -pri.omega, req.ev_id)
    return (1, -pri.omega / pri.demand_kwh, -pri.omega, req.ev_id)


def schedule(requests: list[ChargingRequest], cfg: StationConfig) -> Allocation:
    """Greedy capacity-constrained selection for one slot.

    Requests are ranked by priority density (omega / demand) and admitted in
    order whenever their full demand still fits under the cap; admitted EVs
    receive exactly their demand, everyone else receives 0.

    Raises ValueError on duplicate ev_id (malformed aggregator batch).
    """
    seen: set[int] = set()
    for r in requests:
        if r.ev_id in seen:
            raise ValueError(f"duplicate ev_id {r.ev_id} in request batch")
        seen.add(r.ev_id)

    scored = [(r, priority(r, cfg)) for r in requests]
    scored.sort(key=lambda rp: _rank_key(rp[0], rp[1]))

    selected: set[int] = set()
    granted: dict[int, float] = {r.ev_id: 0.0 for r in requests}
    total = 0.0
    for req, pri in scored:
        if pri.demand_kwh == 0.0:
            selected.add(req.ev_id)
        elif total + pri.demand_kwh <= cfg.capacity_kwh:
            selected.add(req.ev_id)
            granted[req.ev_id] = pri.demand_kwh
            total += pri.demand_kwh
    return Allocation(selected=frozenset(selected), granted_kwh=granted, total_kwh=total)


def simulate_slot(
    requests: list[ChargingRequest], cfg: StationConfig
) -> tuple[Allocation, dict[int, float]]:
    """Run one slot and advance each admitted EV's SoC by its granted charge."""
    alloc = schedule(requests, cfg)
    next_soc: dict[int, float] = {}
    for req in requests:
        if req.ev_id in alloc.selected:
            nxt = req.soc + alloc.granted_kwh[req.ev_id] / cfg.battery_kwh
            next_soc[req.ev_id] = min(nxt, 1.0)
        else:
            next_soc[req.ev_id] = req.soc
    return alloc, next_soc


# ---------------------------------------------------------------------------
# CSV interfaces
# ---------------------------------------------------------------------------

REQUEST_COLUMNS = ["ev_id", "slot", "soc", "tcc"]
ALLOCATION_COLUMNS = ["ev_id", "selected", "granted_kwh"]


def read_requests_csv(path: str | Path) -> list[ChargingRequest]:
    """Read a request batch from CSV with columns ev_id,slot,soc,tcc."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(REQUEST_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"request CSV missing columns: {sorted(missing)}")
        for row in reader:
            out.append(
                ChargingRequest(
                    ev_id=int(row["ev_id"]),
                    slot=int(row["slot"]),
                    soc=float(row["soc"]),
                    tcc=float(row["tcc"]),
                )
            )
    return out


def write_allocation_csv(alloc: Allocation, path: str | Path) -> None:
    """Write an allocation as ev_id,selected,granted_kwh rows (sorted by ev_id)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ALLOCATION_COLUMNS)
        for ev_id, sel, kwh in alloc.as_rows():
            writer.writerow([ev_id, sel, repr(kwh)])
