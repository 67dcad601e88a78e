"""Scenario parsing, the deterministic tick loop, and CSV traces.

Scenario files are line oriented. Directives are case-insensitive and
``#`` starts a comment::

    TICK 100
    END 50
    WALKER start=0 speed=1.5
    OBSTACLE pos=60 appear=0 vanish=40
    WATER from=20 to=30 depth=0.8
    PROFILE table1_feet
    LITERAL off
    BUZZER_TIMER 5000
    CORRIDOR 120
    SENSOR realistic
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from smartcane.alert_controller import (
    PROFILE_MAX_RANGE_IN,
    PROFILES,
    ControllerConfig,
    ControllerState,
    TABLE1_FEET,
    RangeClass,
    controller_step,
    loop_delay_ms,
)
from smartcane.errors import DomainError, ScenarioError
from smartcane.sensor_models import (
    REALISTIC,
    SENSING_MODES,
    Obstacle,
    WalkerState,
    WaterPatch,
    World,
    advance_walker,
    sense_ultrasonic,
    water_depth_at,
)
from smartcane.signal_chain import (
    CalibrationTable,
    SensorSpec,
    default_calibration,
)

DEFAULT_TICK_MS = 100

CSV_HEADER = (
    "tick,time_ms,walker_pos_in,distance_in,voltage_mv,adc_count,"
    "range_class,led,motor,voice_id,buzzer,water_depth_cm"
)


@dataclass(frozen=True)
class Scenario:
    tick_ms: int = DEFAULT_TICK_MS
    end_tick: int = 0
    walker: WalkerState = WalkerState()
    world: World = World()
    profile: Optional[str] = None
    literal: Optional[bool] = None
    buzzer_timer_ms: Optional[int] = None
    sensing_mode: str = REALISTIC

    def __post_init__(self):
        if self.tick_ms <= 0:
            raise DomainError(f"tick length must be positive, got {self.tick_ms}")
        if self.end_tick < 0:
            raise DomainError(f"end tick must be non-negative, got {self.end_tick}")
        if self.profile is not None and self.profile not in PROFILES:
            raise DomainError(f"unknown profile {self.profile!r}")
        if self.sensing_mode not in SENSING_MODES:
            raise DomainError(f"unknown sensing mode {self.sensing_mode!r}")

    def controller_config(self, **overrides) -> ControllerConfig:
        kwargs = {"profile": self.profile or TABLE1_FEET}
        if self.literal is not None:
            kwargs["literal_mode"] = self.literal
        if self.buzzer_timer_ms is not None:
            kwargs["buzzer_timer_ms"] = self.buzzer_timer_ms
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return ControllerConfig(**kwargs)


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    time_ms: int
    walker_pos_in: float
    distance_in: Optional[float]
    voltage_mv: float
    adc_count: int
    range_class: RangeClass
    led: str
    motor: str
    voice_id: Optional[int]
    buzzer: bool
    water_depth_cm: float


# -- parsing ---------------------------------------------------------------

_SINGLETONS = {"TICK", "END", "WALKER", "PROFILE", "LITERAL", "BUZZER_TIMER", "CORRIDOR", "SENSOR"}


def _number(text, lineno, directive, key=None):
    label = f"{key}={text}" if key else text
    try:
        value = float(text)
    except ValueError:
        raise ScenarioError(f"not a number: {label!r}", lineno, directive) from None
    if not math.isfinite(value):
        raise ScenarioError(f"not a finite number: {label!r}", lineno, directive)
    return value


def _integer(text, lineno, directive, key=None):
    value = _number(text, lineno, directive, key)
    if not value.is_integer():
        label = f"{key}={text}" if key else text
        raise ScenarioError(f"expected an integer: {label!r}", lineno, directive)
    return int(value)


def _single_arg(args, lineno, directive):
    if len(args) != 1:
        raise ScenarioError(f"expects exactly one argument, got {len(args)}", lineno, directive)
    return args[0]


def _keywords(args, lineno, directive, required, optional=()):
    allowed = set(required) | set(optional)
    out = {}
    for arg in args:
        key, sep, value = arg.partition("=")
        key = key.lower()
        if not sep or not value:
            raise ScenarioError(f"expected key=value, got {arg!r}", lineno, directive)
        if key not in allowed:
            raise ScenarioError(f"unknown key {key!r}", lineno, directive)
        if key in out:
            raise ScenarioError(f"duplicate key {key!r}", lineno, directive)
        out[key] = value
    missing = [k for k in required if k not in out]
    if missing:
        raise ScenarioError(f"missing {', '.join(missing)}", lineno, directive)
    return out


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; errors carry the 1-based line number and directive."""
    tick_ms = DEFAULT_TICK_MS
    end_tick = None
    walker = WalkerState()
    corridor = None
    obstacles = []
    water = []
    profile = literal = buzzer_timer = None
    sensing = REALISTIC
    seen = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, *args = line.split()
        directive = directive.upper()
        if directive in _SINGLETONS:
            if directive in seen:
                raise ScenarioError("may appear only once", lineno, directive)
            seen.add(directive)

        try:
            if directive == "TICK":
                tick_ms = _integer(_single_arg(args, lineno, directive), lineno, directive)
                if tick_ms <= 0:
                    raise ScenarioError("tick length must be positive", lineno, directive)
            elif directive == "END":
                end_tick = _integer(_single_arg(args, lineno, directive), lineno, directive)
                if end_tick < 0:
                    raise ScenarioError("end tick must be non-negative", lineno, directive)
            elif directive == "WALKER":
                kw = _keywords(args, lineno, directive, ("start",), ("speed",))
                walker = WalkerState(
                    _number(kw["start"], lineno, directive, "start"),
                    _number(kw.get("speed", "0"), lineno, directive, "speed"),
                )
            elif directive == "OBSTACLE":
                kw = _keywords(args, lineno, directive, ("pos",), ("appear", "vanish"))
                vanish = kw.get("vanish")
                obstacles.append(Obstacle(
                    _number(kw["pos"], lineno, directive, "pos"),
                    _integer(kw.get("appear", "0"), lineno, directive, "appear"),
                    None if vanish is None else _integer(vanish, lineno, directive, "vanish"),
                ))
            elif directive == "WATER":
                kw = _keywords(args, lineno, directive, ("from", "to", "depth"))
                water.append(WaterPatch(
                    _number(kw["from"], lineno, directive, "from"),
                    _number(kw["to"], lineno, directive, "to"),
                    _number(kw["depth"], lineno, directive, "depth"),
                ))
            elif directive == "PROFILE":
                profile = _single_arg(args, lineno, directive).lower()
                if profile not in PROFILES:
                    raise ScenarioError(
                        f"unknown profile {profile!r}; expected {' or '.join(PROFILES)}",
                        lineno, directive,
                    )
            elif directive == "LITERAL":
                value = _single_arg(args, lineno, directive).lower()
                if value not in ("on", "off"):
                    raise ScenarioError(f"expected on or off, got {value!r}", lineno, directive)
                literal = value == "on"
            elif directive == "BUZZER_TIMER":
                buzzer_timer = _integer(_single_arg(args, lineno, directive), lineno, directive)
                if buzzer_timer < 0:
                    raise ScenarioError("buzzer timer must be non-negative", lineno, directive)
            elif directive == "CORRIDOR":
                corridor = _number(_single_arg(args, lineno, directive), lineno, directive)
            elif directive == "SENSOR":
                sensing = _single_arg(args, lineno, directive).lower()
                if sensing not in SENSING_MODES:
                    raise ScenarioError(f"unknown sensing mode {sensing!r}", lineno, directive)
            else:
                raise ScenarioError(f"unknown directive {directive!r}", lineno)
        except DomainError as exc:
            raise ScenarioError(str(exc), lineno, directive) from None

    if end_tick is None:
        raise ScenarioError("missing END directive")

    if corridor is None:
        extent = [walker.pos_in, walker.pos_in + max(walker.speed_in_per_tick, 0.0) * end_tick]
        extent += [ob.pos_in for ob in obstacles] + [w.to_in for w in water]
        corridor = max(extent) or 1.0
    elif walker.pos_in > corridor:
        raise ScenarioError("walker starts beyond the corridor end", directive="CORRIDOR")
    try:
        world = World(tuple(obstacles), tuple(water), corridor)
    except DomainError as exc:
        raise ScenarioError(str(exc), directive="CORRIDOR") from None

    return Scenario(
        tick_ms=tick_ms,
        end_tick=end_tick,
        walker=walker,
        world=world,
        profile=profile,
        literal=literal,
        buzzer_timer_ms=buzzer_timer,
        sensing_mode=sensing,
    )


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


# -- simulation ------------------------------------------------------------

def _motor_status(motor, now_ms, pulse_start):
    if motor.mode == "continuous":
        return "on"
    if motor.mode == "off":
        return "off"
    phase = (now_ms - pulse_start) % (motor.on_ms + motor.off_ms)
    return "pulse_on" if phase < motor.on_ms else "pulse_off"


def run_simulation(
    scenario: Scenario,
    cfg: Optional[ControllerConfig] = None,
    table: Optional[CalibrationTable] = None,
) -> list[TraceEvent]:
    """Run ``scenario`` tick by tick and return one event per tick.

    The loop samples the world, steps the controller, and renders the motor
    pattern to a per-tick status. Pulsed vibration keeps its own timeline so
    a pattern that is requested on consecutive ticks is not restarted.

    In literal mode a pass that hits a ``delay`` branch blocks the loop, so
    the following ticks hold the previous outputs without re-sampling the
    controller. World columns (position, distance, voltage, depth) still
    show what is physically there on those ticks.
    """
    if cfg is None:
        cfg = scenario.controller_config()
    spec = SensorSpec(max_range_in=PROFILE_MAX_RANGE_IN[cfg.profile])
    if table is None:
        table = default_calibration(spec)

    state = ControllerState()
    alert = None
    busy_until = 0
    pulse_start = None
    events = []
    for tick in range(scenario.end_tick + 1):
        now = tick * scenario.tick_ms
        walker = advance_walker(scenario.walker, tick, scenario.world.corridor_len_in)
        distance, mv = sense_ultrasonic(
            scenario.world, walker, tick, spec, table, scenario.sensing_mode
        )
        depth = water_depth_at(scenario.world, walker)

        voice = None
        if alert is None or now >= busy_until:
            alert, state = controller_step(
                state, None if distance is None else mv, depth, now, cfg
            )
            busy_until = now + loop_delay_ms(alert.range_class, cfg)
            voice = alert.voice

        if alert.motor.mode == "pulsed":
            if pulse_start is None or now - pulse_start >= alert.motor.duration_ms:
                pulse_start = now
        else:
            pulse_start = None

        events.append(TraceEvent(
            tick=tick,
            time_ms=now,
            walker_pos_in=walker.pos_in,
            distance_in=distance,
            voltage_mv=mv,
            adc_count=alert.adc_count,
            range_class=alert.range_class,
            led=alert.led,
            motor=_motor_status(alert.motor, now, pulse_start),
            voice_id=None if voice is None else voice.id,
            buzzer=alert.buzzer,
            water_depth_cm=depth,
        ))
    return events


# -- output ----------------------------------------------------------------

def format_real(x: float) -> str:
    """Up to four decimals, trailing zeros trimmed, at least one decimal kept."""
    text = f"{x:.4f}".rstrip("0")
    if text.endswith("."):
        text += "0"
    if text == "-0.0":
        text = "0.0"
    return text


def trace_to_csv(events: Iterable[TraceEvent]) -> str:
    lines = [CSV_HEADER]
    for e in events:
        lines.append(",".join((
            str(e.tick),
            str(e.time_ms),
            format_real(e.walker_pos_in),
            "" if e.distance_in is None else format_real(e.distance_in),
            format_real(e.voltage_mv),
            str(e.adc_count),
            str(e.range_class),
            e.led,
            e.motor,
            "" if e.voice_id is None else str(e.voice_id),
            "true" if e.buzzer else "false",
            format_real(e.water_depth_cm),
        )))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TraceSummary:
    ticks: int
    announcements: int
    buzzer_on_ticks: int

    def __str__(self):
        return (
            f"ticks={self.ticks} announcements={self.announcements} "
            f"buzzer_on_ticks={self.buzzer_on_ticks}"
        )


def summarize(events: list[TraceEvent]) -> TraceSummary:
    return TraceSummary(
        ticks=len(events),
        announcements=sum(e.voice_id is not None for e in events),
        buzzer_on_ticks=sum(e.buzzer for e in events),
    )
