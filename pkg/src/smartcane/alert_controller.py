"""Firmware model: range classification, alert outputs, voice debounce, water buzzer.

Two behaviours ship side by side. The default mode closes the gaps left by
the firmware's strict inequalities and follows the documented intent; the
literal mode (``literal_mode=True``) reproduces the original conditionals
exactly, including the unhandled boundary counts, the far branch that never
touches the motor, and a voice announcement on every loop pass.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

from smartcane.errors import DomainError
from smartcane.signal_chain import SensorSpec, adc_convert, analog_from_range

FIG2_RAW = "fig2_raw"
TABLE1_FEET = "table1_feet"
PROFILES = (FIG2_RAW, TABLE1_FEET)

FIG2_THRESHOLDS = (140, 260, 400)
# close below 3 ft, medium 3..4 ft, far 4..5 ft
TABLE1_THRESHOLDS_IN = (36.0, 48.0, 60.0)

# sensor reach paired with each profile
PROFILE_MAX_RANGE_IN = {
    FIG2_RAW: SensorSpec().max_range_in,
    TABLE1_FEET: TABLE1_THRESHOLDS_IN[-1],
}

DELAY_MS = 2000


class RangeClass(enum.Enum):
    CLOSE = "Close"
    MEDIUM = "Medium"
    FAR = "Far"
    OUT_OF_RANGE = "OutOfRange"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class VoiceMessage:
    id: int
    text: str


VOICE_MESSAGES = {
    1: VoiceMessage(1, "No object in 4 feet in front of you"),
    2: VoiceMessage(2, "Objects are between 3 to 4 feet in front of you"),
    3: VoiceMessage(3, "An object is right in front of you"),
}


@dataclass(frozen=True)
class MotorPattern:
    """Vibration drive: ``off``, ``continuous``, or ``pulsed`` on/off cycles."""

    mode: str
    on_ms: int = 0
    off_ms: int = 0
    cycles: int = 0

    def __post_init__(self):
        if self.mode not in ("off", "continuous", "pulsed"):
            raise DomainError(f"unknown motor mode {self.mode!r}")
        if self.mode == "pulsed" and min(self.on_ms, self.off_ms, self.cycles) <= 0:
            raise DomainError("pulse parameters must be positive")

    @property
    def duration_ms(self) -> int:
        return (self.on_ms + self.off_ms) * self.cycles

    def describe(self) -> str:
        if self.mode == "pulsed":
            return f"pulsed {self.on_ms}/{self.off_ms}x{self.cycles}"
        return self.mode


MOTOR_OFF = MotorPattern("off")
MOTOR_CONTINUOUS = MotorPattern("continuous")
MOTOR_PULSED = MotorPattern("pulsed", DELAY_MS, DELAY_MS, 3)


@dataclass(frozen=True)
class AlertState:
    led_red: bool = False
    led_yellow: bool = False
    led_green: bool = False
    motor: MotorPattern = MOTOR_OFF
    voice: Optional[VoiceMessage] = None
    buzzer: bool = False
    range_class: Optional[RangeClass] = None
    adc_count: int = 0

    def __post_init__(self):
        if self.led_red + self.led_yellow + self.led_green > 1:
            raise DomainError("at most one LED may be lit")

    @property
    def led(self) -> str:
        if self.led_red:
            return "red"
        if self.led_yellow:
            return "yellow"
        if self.led_green:
            return "green"
        return "off"


def profile_thresholds(profile: str, adc_bits: int = 10, vref_mv: float = 5000.0) -> tuple[int, int, int]:
    """Class boundaries in ADC counts for a named profile."""
    if profile == FIG2_RAW:
        return FIG2_THRESHOLDS
    if profile == TABLE1_FEET:
        spec = SensorSpec()
        return tuple(
            adc_convert(analog_from_range(d, spec), adc_bits, vref_mv)
            for d in TABLE1_THRESHOLDS_IN
        )
    raise DomainError(f"unknown profile {profile!r}; expected one of {PROFILES}")


@dataclass(frozen=True)
class ControllerConfig:
    """Firmware settings. The bare default is the firmware's own thresholds;
    scenarios default to the foot-based profile instead."""

    profile: str = FIG2_RAW
    literal_mode: bool = False
    thresholds: Optional[tuple[int, int, int]] = None
    debounce_min_ms: int = 3000
    buzzer_timer_ms: Optional[int] = None
    adc_bits: int = 10
    vref_mv: float = 5000.0
    announce_out_of_range: bool = True

    def __post_init__(self):
        if self.thresholds is None:
            object.__setattr__(
                self, "thresholds", profile_thresholds(self.profile, self.adc_bits, self.vref_mv)
            )
        t_close, t_medium, t_far = self.thresholds
        if not t_close < t_medium < t_far:
            raise DomainError(f"thresholds must be strictly increasing, got {self.thresholds}")
        if self.debounce_min_ms < 0:
            raise DomainError("debounce window must be non-negative")
        if self.buzzer_timer_ms is not None and self.buzzer_timer_ms < 0:
            raise DomainError("buzzer timer must be non-negative")

    @property
    def max_count(self) -> int:
        return (1 << self.adc_bits) - 1


@dataclass(frozen=True)
class ControllerState:
    last_announced_class: Optional[RangeClass] = None
    last_announce_time_ms: int = 0
    buzzer_latched: bool = False
    buzzer_on_since_ms: Optional[int] = None
    last_step_ms: Optional[int] = None
    motor_level: bool = False  # physical motor pin as the last branch left it

    def __post_init__(self):
        if (self.buzzer_on_since_ms is not None) != self.buzzer_latched:
            raise DomainError("buzzer_on_since_ms must be set exactly when latched")


def classify_range(count: int, cfg: ControllerConfig = ControllerConfig()) -> RangeClass:
    if not 0 <= count <= cfg.max_count:
        raise DomainError(f"ADC count {count} outside [0, {cfg.max_count}]")
    t_close, t_medium, t_far = cfg.thresholds
    if cfg.literal_mode:
        if count < t_close:
            return RangeClass.CLOSE
        elif count > t_close and count < t_medium:
            return RangeClass.MEDIUM
        elif count > t_medium and count < t_far:
            return RangeClass.FAR
        else:
            return RangeClass.OUT_OF_RANGE
    if count < t_close:
        return RangeClass.CLOSE
    if count < t_medium:
        return RangeClass.MEDIUM
    if count < t_far:
        return RangeClass.FAR
    return RangeClass.OUT_OF_RANGE


def outputs_for_class(
    c: RangeClass,
    cfg: ControllerConfig = ControllerConfig(),
    previous_motor: MotorPattern = MOTOR_OFF,
) -> AlertState:
    """LED and motor outputs for a class; voice and buzzer are left unset.

    ``previous_motor`` only matters in literal mode, where the far branch
    leaves the motor as it was.
    """
    if c is RangeClass.CLOSE:
        return AlertState(led_red=True, motor=MOTOR_CONTINUOUS, range_class=c)
    if c is RangeClass.MEDIUM:
        return AlertState(led_yellow=True, motor=MOTOR_PULSED, range_class=c)
    if c is RangeClass.FAR:
        motor = previous_motor if cfg.literal_mode else MOTOR_OFF
        return AlertState(led_green=True, motor=motor, range_class=c)
    return AlertState(motor=MOTOR_OFF, range_class=c)


def voice_for_class(c: RangeClass, announce_out_of_range: bool = True) -> Optional[VoiceMessage]:
    if c is RangeClass.CLOSE:
        return VOICE_MESSAGES[3]
    if c is RangeClass.MEDIUM:
        return VOICE_MESSAGES[2]
    if c is RangeClass.FAR:
        return VOICE_MESSAGES[1]
    return VOICE_MESSAGES[1] if announce_out_of_range else None


def debounce_update(
    state: ControllerState,
    c: RangeClass,
    now_ms: int,
    cfg: ControllerConfig = ControllerConfig(),
) -> tuple[Optional[VoiceMessage], ControllerState]:
    """Decide whether to speak this pass.

    Speaks on the first call, on any class change, and otherwise once the
    debounce window has elapsed since the last announcement. Literal mode
    speaks on every call.
    """
    if state.last_step_ms is not None and now_ms < state.last_step_ms:
        raise DomainError(f"clock went backwards: {now_ms} < {state.last_step_ms}")
    state = replace(state, last_step_ms=now_ms)
    message = voice_for_class(c, cfg.announce_out_of_range)
    if cfg.literal_mode:
        due = True
    else:
        due = (
            state.last_announced_class is None
            or c is not state.last_announced_class
            or now_ms - state.last_announce_time_ms >= cfg.debounce_min_ms
        )
    if not due:
        return None, state
    return message, replace(state, last_announced_class=c, last_announce_time_ms=now_ms)


def water_buzzer_update(
    state: ControllerState,
    depth_cm: float,
    now_ms: int,
    cfg: ControllerConfig = ControllerConfig(),
) -> tuple[bool, ControllerState]:
    """Latching water alarm.

    Latches once depth exceeds 0.5 cm, holds while the probe is wet at any
    depth, and releases only when it reads dry. A finite ``buzzer_timer_ms``
    silences the output after that long, though the latch itself holds.
    """
    if depth_cm < 0:
        raise DomainError(f"water depth must be non-negative, got {depth_cm}")
    if depth_cm > 0.5:
        if not state.buzzer_latched:
            state = replace(state, buzzer_latched=True, buzzer_on_since_ms=now_ms)
    elif depth_cm == 0 and state.buzzer_latched:
        state = replace(state, buzzer_latched=False, buzzer_on_since_ms=None)
    on = state.buzzer_latched
    if on and cfg.buzzer_timer_ms is not None:
        on = now_ms - state.buzzer_on_since_ms < cfg.buzzer_timer_ms
    return on, state


def controller_step(
    state: ControllerState,
    sensor_mv: Optional[float],
    water_depth_cm: float,
    now_ms: int,
    cfg: ControllerConfig = ControllerConfig(),
) -> tuple[AlertState, ControllerState]:
    """One pass of the firmware loop.

    Order: ADC conversion, classification, LED/motor outputs, voice
    (then the voice chip is reset, so nothing stays pending), water buzzer.
    ``sensor_mv=None`` means no echo and classifies as out of range directly.
    """
    if sensor_mv is None:
        count = 0
        c = RangeClass.OUT_OF_RANGE
    else:
        count = adc_convert(sensor_mv, cfg.adc_bits, cfg.vref_mv)
        c = classify_range(count, cfg)
    previous = MOTOR_CONTINUOUS if state.motor_level else MOTOR_OFF
    alert = outputs_for_class(c, cfg, previous)
    voice, state = debounce_update(state, c, now_ms, cfg)
    buzzer, state = water_buzzer_update(state, water_depth_cm, now_ms, cfg)
    # the pulse train finishes with the motor pin low
    state = replace(state, motor_level=alert.motor.mode == "continuous")
    alert = replace(alert, voice=voice, buzzer=buzzer, adc_count=count)
    return alert, state


def loop_delay_ms(c: RangeClass, cfg: ControllerConfig) -> int:
    """Time a literal-mode loop pass spends blocked in ``delay`` calls."""
    if not cfg.literal_mode:
        return 0
    if c is RangeClass.MEDIUM:
        return MOTOR_PULSED.duration_ms
    if c is RangeClass.OUT_OF_RANGE:
        return DELAY_MS
    return 0


def describe_alert(alert: AlertState) -> str:
    """One-line summary, e.g. ``Close: red, motor continuous, msg 3``."""
    msg = f"msg {alert.voice.id}" if alert.voice else "silent"
    return f"{alert.range_class}: {alert.led}, motor {alert.motor.describe()}, {msg}"
