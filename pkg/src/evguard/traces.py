"""Synthetic benign vehicle-day SoC traces and labeled dataset assembly.

The original fleet GPS recordings behind the charging datasets are not
public, so this module replaces them with a segment-based duty-cycle
generator: each vehicle-day is an alternating sequence of drive / charge /
idle segments simulated at one-minute resolution, then sampled every 30
minutes into the 48-value row format shared by every dataset in the package
(48 SoC features plus a benign/malicious label).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SLOTS_PER_DAY = 48
MINUTES_PER_DAY = 1440
SAMPLE_EVERY_MIN = 30

BENIGN = 0
MALICIOUS = 1


@dataclass(frozen=True)
class DayTrace:
    """A 48-slot SoC sequence for one vehicle-day."""

    vehicle_id: int
    day: int
    soc_seq: np.ndarray

    def __post_init__(self):
        if self.soc_seq.shape != (SLOTS_PER_DAY,):
            raise ValueError(f"soc_seq must have shape ({SLOTS_PER_DAY},)")


@dataclass(frozen=True)
class LabeledTuple:
    """One dataset row: 48 SoC features plus a benign(0)/malicious(1) label."""

    features: np.ndarray
    label: int

    def __post_init__(self):
        if self.features.shape != (SLOTS_PER_DAY,):
            raise ValueError(f"features must have shape ({SLOTS_PER_DAY},)")


@dataclass(frozen=True)
class Segment:
    """One duty-cycle segment: mode is 'drive', 'charge' or 'idle';
    rate_kw is the power drawn (charge) or spent (drive) during it."""

    mode: str
    minutes: int
    rate_kw: float


@dataclass(frozen=True)
class VehicleProfile:
    """Duty-cycle parameters for one vehicle class.

    Rates are kW; dwell bounds are minutes. mode_weights are the base odds of
    entering each mode at a segment boundary, reshaped by the current SoC so
    that low batteries charge more and drive less.
    """

    charge_rate_kw: float = 6.6
    drive_rate_kw: tuple[float, float] = (4.0, 8.0)
    battery_kwh: float = 27.0
    drive_minutes: tuple[int, int] = (20, 90)
    charge_minutes: tuple[int, int] = (30, 120)
    idle_minutes: tuple[int, int] = (15, 120)
    mode_weights: tuple[float, float, float] = (0.45, 0.25, 0.30)  # drive, charge, idle
    initial_soc: tuple[float, float] = (0.3, 0.9)

    def __post_init__(self):
        if self.charge_rate_kw <= 0 or self.drive_rate_kw[0] <= 0:
            raise ValueError("power rates must be > 0")
        if self.battery_kwh <= 0:
            raise ValueError("battery_kwh must be > 0")


def soc_after_charge(soc: float, charge_rate_kw: float, dt_h: float, battery_kwh: float) -> float:
    """SoC after charging for dt_h hours, clamped at full."""
    if min(soc, charge_rate_kw, dt_h, battery_kwh) < 0:
        raise ValueError("inputs must be >= 0")
    return min(1.0, soc + charge_rate_kw * dt_h / battery_kwh)


def soc_after_drive(soc: float, expenditure_rate_kw: float, dt_h: float, battery_kwh: float) -> float:
    """SoC after driving for dt_h hours, clamped at empty."""
    if min(soc, expenditure_rate_kw, dt_h, battery_kwh) < 0:
        raise ValueError("inputs must be >= 0")
    return max(0.0, soc - expenditure_rate_kw * dt_h / battery_kwh)


def plan_day_segments(
    profile: VehicleProfile, rng: np.random.Generator, initial_soc: float | None = None
) -> list[Segment]:
    """Draw the segment schedule for one day (exactly MINUTES_PER_DAY total).

    Mode choice at each boundary reweights the profile odds by SoC urgency,
    using a running estimate of SoC that mirrors the integrator's arithmetic.
    """
    if initial_soc is None:
        initial_soc = float(rng.uniform(*profile.initial_soc))
    dwell = {
        "drive": profile.drive_minutes,
        "charge": profile.charge_minutes,
        "idle": profile.idle_minutes,
    }
    segments: list[Segment] = []
    minutes_left = MINUTES_PER_DAY
    soc = initial_soc
    while minutes_left > 0:
        w_drive, w_charge, w_idle = profile.mode_weights
        # Low SoC discourages driving and encourages charging.
        weights = np.array([w_drive * (0.2 + soc), w_charge * (1.2 - soc), w_idle])
        weights /= weights.sum()
        mode = str(rng.choice(["drive", "charge", "idle"], p=weights))
        lo, hi = dwell[mode]
        minutes = min(int(rng.integers(lo, hi + 1)), minutes_left)
        if mode == "drive":
            rate = float(rng.uniform(*profile.drive_rate_kw))
        elif mode == "charge":
            rate = profile.charge_rate_kw
        else:
            rate = 0.0
        segments.append(Segment(mode=mode, minutes=minutes, rate_kw=rate))
        dt_h = minutes / 60.0
        if mode == "drive":
            soc = soc_after_drive(soc, rate, dt_h, profile.battery_kwh)
        elif mode == "charge":
            soc = soc_after_charge(soc, rate, dt_h, profile.battery_kwh)
        minutes_left -= minutes
    return segments


def integrate_segments(
    segments: list[Segment], initial_soc: float, battery_kwh: float
) -> np.ndarray:
    """Minute-resolution SoC curve for a segment schedule (length 1440).

    Entry t is the SoC at the start of minute t. Within a segment the rate is
    constant, so the curve is a clipped linear ramp.
    """
    out = np.empty(MINUTES_PER_DAY)
    soc = initial_soc
    pos = 0
    for seg in segments:
        t = np.arange(seg.minutes)
        sign = {"drive": -1.0, "charge": 1.0, "idle": 0.0}[seg.mode]
        ramp = soc + sign * seg.rate_kw * (t / 60.0) / battery_kwh
        out[pos : pos + seg.minutes] = np.clip(ramp, 0.0, 1.0)
        pos += seg.minutes
        soc = float(
            np.clip(soc + sign * seg.rate_kw * (seg.minutes / 60.0) / battery_kwh, 0.0, 1.0)
        )
    if pos != MINUTES_PER_DAY:
        raise ValueError(f"segments cover {pos} minutes, expected {MINUTES_PER_DAY}")
    return out


def gen_vehicle_day(
    profile: VehicleProfile, rng: np.random.Generator, vehicle_id: int = 0, day: int = 0
) -> DayTrace:
    """Simulate one vehicle-day at minute resolution and sample every 30 min."""
    initial_soc = float(rng.uniform(*profile.initial_soc))
    segments = plan_day_segments(profile, rng, initial_soc)
    minute_soc = integrate_segments(segments, initial_soc, profile.battery_kwh)
    soc_seq = minute_soc[::SAMPLE_EVERY_MIN].copy()
    return DayTrace(vehicle_id=vehicle_id, day=day, soc_seq=soc_seq)


def day_rng(seed: int, vehicle_id: int, day: int) -> np.random.Generator:
    """Derived RNG stream for one vehicle-day; identical whether days are
    generated serially or split across workers."""
    return np.random.default_rng([seed, vehicle_id, day])


def build_benign_dataset(
    n_vehicles: int,
    n_days: int,
    profile: VehicleProfile | None = None,
    seed: int = 0,
) -> list[LabeledTuple]:
    """Generate n_vehicles * n_days benign rows (one per vehicle-day)."""
    if n_vehicles < 1 or n_days < 1:
        raise ValueError("n_vehicles and n_days must be >= 1")
    profile = profile or VehicleProfile()
    out: list[LabeledTuple] = []
    for v in range(n_vehicles):
        for d in range(n_days):
            trace = gen_vehicle_day(profile, day_rng(seed, v, d), vehicle_id=v, day=d)
            out.append(LabeledTuple(features=trace.soc_seq, label=BENIGN))
    return out


# ---------------------------------------------------------------------------
# Dataset array/CSV interfaces (48 feature columns s0..s47 plus label)
# ---------------------------------------------------------------------------

FEATURE_COLUMNS = [f"s{i}" for i in range(SLOTS_PER_DAY)]


def dataset_to_arrays(tuples: list[LabeledTuple]) -> tuple[np.ndarray, np.ndarray]:
    """Stack labeled tuples into (X, y) with X of shape (n, 48)."""
    X = np.stack([t.features for t in tuples]) if tuples else np.empty((0, SLOTS_PER_DAY))
    y = np.array([t.label for t in tuples], dtype=int)
    return X, y


def arrays_to_dataset(X: np.ndarray, y: np.ndarray) -> list[LabeledTuple]:
    X = np.asarray(X, dtype=float)
    return [LabeledTuple(features=X[i].copy(), label=int(y[i])) for i in range(len(X))]


def save_dataset_csv(tuples: list[LabeledTuple], path: str | Path) -> None:
    """Write rows as s0..s47,label; floats use repr so reruns are byte-identical."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FEATURE_COLUMNS + ["label"])
        for t in tuples:
            writer.writerow([repr(float(v)) for v in t.features] + [t.label])


def load_dataset_csv(path: str | Path) -> list[LabeledTuple]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(FEATURE_COLUMNS + ["label"]) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"dataset CSV missing columns: {sorted(missing)}")
        for row in reader:
            feats = np.array([float(row[c]) for c in FEATURE_COLUMNS])
            out.append(LabeledTuple(features=feats, label=int(row["label"])))
    return out
