"""Sensing-chain mathematics.

Distance to voltage transfer, the measured-voltage calibration table, ADC
quantization, echo timing, and the astable square-wave timer formulas.
Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from smartcane.errors import DomainError, FormatError, OutOfRangeError

METERS_PER_INCH = 0.0254
ONE_METER_IN = 1.0 / METERS_PER_INCH


@dataclass(frozen=True)
class SensorSpec:
    """Physical constants of the ultrasonic ranger.

    ``beam_width_deg`` is recorded for reference only; the ranging model is
    one-dimensional and never reads it.
    """

    frequency_khz: float = 40.0
    mv_per_inch: float = 10.0
    max_range_in: float = ONE_METER_IN
    beam_width_deg: float = 2.4644
    sound_speed_m_s: float = 343.0

    def __post_init__(self):
        for name in ("frequency_khz", "mv_per_inch", "max_range_in",
                     "beam_width_deg", "sound_speed_m_s"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class CalibrationRow:
    range_in: float
    calc_mv: float
    measured_mv: float
    error_pct: float

    @property
    def error_pct_rounded(self) -> float:
        return round_pct(self.error_pct)


@dataclass(frozen=True)
class CalibrationTable:
    rows: tuple[CalibrationRow, ...]

    def __post_init__(self):
        if not self.rows:
            raise FormatError("calibration table is empty")
        if self.rows[0].range_in != 0:
            raise FormatError("calibration table must start at range 0")
        for prev, row in zip(self.rows, self.rows[1:]):
            if not row.range_in > prev.range_in:
                raise FormatError(
                    f"ranges must be strictly increasing ({prev.range_in} then {row.range_in})"
                )

    @property
    def max_range_in(self) -> float:
        return self.rows[-1].range_in

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


@dataclass(frozen=True)
class TimerConfig:
    r1_ohm: float
    r2_ohm: float
    r3_ohm: float
    c1_farad: float

    def __post_init__(self):
        for name in ("r1_ohm", "r2_ohm", "r3_ohm", "c1_farad"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class SquareWave:
    t_on: float
    t_off: float

    def __post_init__(self):
        if self.t_on < 0 or self.t_off < 0:
            raise DomainError("square wave intervals must be non-negative")
        if self.t_on == 0 and self.t_off == 0:
            raise DomainError("square wave intervals cannot both be zero")


def analog_from_range(range_in: float, spec: SensorSpec = SensorSpec()) -> float:
    """Ideal sensor output in mV for a target ``range_in`` inches away."""
    if range_in < 0:
        raise DomainError(f"range must be non-negative, got {range_in!r}")
    return range_in * spec.mv_per_inch


def measured_mv(range_in: float, table: CalibrationTable) -> float:
    """Piecewise-linear interpolation of the measured column of ``table``.

    Anchors are returned exactly. Queries outside ``[0, table.max_range_in]``
    raise :class:`OutOfRangeError`.
    """
    rows = table.rows
    if range_in < 0 or range_in > rows[-1].range_in:
        raise OutOfRangeError(
            f"range {range_in!r} outside calibration span [0, {rows[-1].range_in}]"
        )
    ranges = [r.range_in for r in rows]
    i = bisect_left(ranges, range_in)
    hi = rows[i]
    if hi.range_in == range_in:
        return hi.measured_mv
    lo = rows[i - 1]
    frac = (range_in - lo.range_in) / (hi.range_in - lo.range_in)
    return lo.measured_mv + frac * (hi.measured_mv - lo.measured_mv)


def error_percent(calc_mv: float, measured_mv: float) -> float:
    """Relative shortfall of the measurement, in percent of the calculated value."""
    if calc_mv == 0:
        raise DomainError("error percent is undefined for a zero calculated value")
    return (calc_mv - measured_mv) / calc_mv * 100.0


def round_pct(value: float) -> float:
    """Presentation rounding for error percentages (1 decimal place)."""
    return round(value, 1)


def build_calibration_table(
    spec: SensorSpec, measured: Iterable[tuple[float, float]]
) -> CalibrationTable:
    pairs = list(measured)
    if not pairs:
        raise FormatError("no calibration points given")
    rows = []
    prev = None
    for range_in, mv in pairs:
        if prev is not None and not range_in > prev:
            raise FormatError(
                f"calibration ranges must be strictly increasing ({prev} then {range_in})"
            )
        prev = range_in
        calc = analog_from_range(range_in, spec)
        # a zero calculated value has no defined relative error; it is reported as 0
        err = 0.0 if calc == 0 else error_percent(calc, mv)
        rows.append(CalibrationRow(range_in, calc, mv, err))
    return CalibrationTable(tuple(rows))


def parse_calibration(text: str) -> list[tuple[float, float]]:
    """Parse ``<range_inches> <measured_mv>`` lines; ``#`` starts a comment."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two columns, got {len(parts)}")
        try:
            range_in, mv = float(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: not a number: {line!r}") from None
        if not (math.isfinite(range_in) and math.isfinite(mv)):
            raise FormatError(f"line {lineno}: non-finite value")
        if range_in < 0:
            raise FormatError(f"line {lineno}: negative range {range_in}")
        pairs.append((range_in, mv))
    return pairs


def load_calibration(path: str | Path, spec: SensorSpec = SensorSpec()) -> CalibrationTable:
    return build_calibration_table(spec, parse_calibration(Path(path).read_text("utf-8")))


def default_calibration(spec: SensorSpec = SensorSpec()) -> CalibrationTable:
    """The bundled bench measurements (0 to 40 in, 5 in steps)."""
    text = resources.files("smartcane").joinpath("data/table2.txt").read_text("utf-8")
    return build_calibration_table(spec, parse_calibration(text))


def adc_convert(voltage_mv: float, bits: int = 10, vref_mv: float = 5000.0) -> int:
    """Quantize ``voltage_mv`` to an unsigned count, flooring then clamping."""
    if voltage_mv < 0:
        raise DomainError(f"voltage must be non-negative, got {voltage_mv!r}")
    if not 8 <= bits <= 16:
        raise DomainError(f"ADC resolution must be 8..16 bits, got {bits!r}")
    if not vref_mv > 0:
        raise DomainError(f"reference voltage must be positive, got {vref_mv!r}")
    full = 1 << bits
    count = math.floor(voltage_mv * full / vref_mv)
    return min(count, full - 1)


def echo_time(range_in: float, spec: SensorSpec = SensorSpec()) -> float:
    """Round-trip time of flight in seconds."""
    if range_in < 0:
        raise DomainError(f"range must be non-negative, got {range_in!r}")
    return 2.0 * range_in * METERS_PER_INCH / spec.sound_speed_m_s


def range_from_echo(t: float, spec: SensorSpec = SensorSpec()) -> float:
    if t < 0:
        raise DomainError(f"echo time must be non-negative, got {t!r}")
    return t * spec.sound_speed_m_s / 2.0 / METERS_PER_INCH


def square_wave_period(w: SquareWave) -> float:
    return w.t_on + w.t_off


def frequency_from_period(t: float) -> float:
    if not t > 0:
        raise DomainError(f"period must be positive, got {t!r}")
    return 1.0 / t


def astable_period(cfg: TimerConfig) -> float:
    """Oscillation period in seconds: ``0.69 * C1 * (2*R1 + R2 + R3)``."""
    return 0.69 * cfg.c1_farad * (2.0 * cfg.r1_ohm + cfg.r2_ohm + cfg.r3_ohm)


def duty_cycle(cfg: TimerConfig) -> float:
    """High fraction of the period, ``(R1+R2+R3) / (2*R1 + R2 + R3)``.

    Lies strictly between 0.5 and 1 for positive resistors and is invariant
    under uniform scaling of all three.
    """
    r23 = cfg.r2_ohm + cfg.r3_ohm
    return (cfg.r1_ohm + r23) / (2.0 * cfg.r1_ohm + r23)


def format_calibration(table: CalibrationTable) -> str:
    """CSV rendering with a header and error percentages at 1 decimal."""
    lines = ["range_in,calc_mv,measured_mv,error_pct"]
    for row in table:
        lines.append(
            f"{_num(row.range_in)},{_num(row.calc_mv)},{_num(row.measured_mv)},"
            f"{row.error_pct_rounded:.1f}"
        )
    return "\n".join(lines) + "\n"


def _num(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return f"{x:g}"


__all__ = [
    "SensorSpec", "CalibrationRow", "CalibrationTable", "TimerConfig", "SquareWave",
    "analog_from_range", "measured_mv", "error_percent", "round_pct",
    "build_calibration_table", "parse_calibration", "load_calibration",
    "default_calibration", "adc_convert", "echo_time", "range_from_echo",
    "square_wave_period", "frequency_from_period", "astable_period", "duty_cycle",
    "format_calibration", "ONE_METER_IN", "METERS_PER_INCH",
]
