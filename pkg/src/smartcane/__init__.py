"""Deterministic simulator for an ultrasonic obstacle-alert cane."""

from smartcane.alert_controller import (
    AlertState,
    ControllerConfig,
    ControllerState,
    MotorPattern,
    RangeClass,
    VoiceMessage,
    classify_range,
    controller_step,
    debounce_update,
    outputs_for_class,
    voice_for_class,
    water_buzzer_update,
)
from smartcane.errors import DomainError, FormatError, OutOfRangeError, ScenarioError
from smartcane.scenario_sim import Scenario, TraceEvent, parse_scenario, run_simulation, trace_to_csv
from smartcane.sensor_models import Obstacle, WalkerState, WaterPatch, World
from smartcane.signal_chain import (
    CalibrationTable,
    SensorSpec,
    SquareWave,
    TimerConfig,
    default_calibration,
)

__version__ = "0.1.0"

__all__ = [
    "AlertState", "ControllerConfig", "ControllerState", "MotorPattern", "RangeClass",
    "VoiceMessage", "classify_range", "controller_step", "debounce_update",
    "outputs_for_class", "voice_for_class", "water_buzzer_update",
    "DomainError", "FormatError", "OutOfRangeError", "ScenarioError",
    "Scenario", "TraceEvent", "parse_scenario", "run_simulation", "trace_to_csv",
    "Obstacle", "WalkerState", "WaterPatch", "World",
    "CalibrationTable", "SensorSpec", "SquareWave", "TimerConfig", "default_calibration",
]
