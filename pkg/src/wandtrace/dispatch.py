"""Mapping recognized letters to virtual GPIO pin actions.

No hardware underneath: pin writes go to an in-memory map plus an ordered
event log that can be exported as CSV or replayed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

from .dataset import label_for_letter, letter_for_label

HIGH = "HIGH"
LOW = "LOW"
DEFAULT_PIN = 17


@dataclass(frozen=True)
class PinAction:
    pin: int
    level: str

    def __post_init__(self):
        if self.pin < 0:
            raise ValueError(f"pin must be non-negative, got {self.pin}")
        if self.level not in (HIGH, LOW):
            raise ValueError(f"level must be HIGH or LOW, got {self.level!r}")


@dataclass(frozen=True)
class GpioEvent:
    seq: int
    pin: int
    level: str


class VirtualGpio:
    """Pin-state map with an append-only event log.

    Warnings (for example, dispatches of unbound letters) are kept apart
    from pin events so replaying the log always reproduces the pin map.
    """

    def __init__(self):
        self.pins: dict[int, str] = {}
        self.events: list[GpioEvent] = []
        self.warnings: list[str] = []

    def set_pin(self, pin: int, level: str) -> GpioEvent:
        action = PinAction(pin, level)  # validates
        event = GpioEvent(len(self.events) + 1, action.pin, action.level)
        self.events.append(event)
        self.pins[action.pin] = action.level
        return event

    def export_log_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        buf.write("seq,pin,level\n")
        for e in self.events:
            buf.write(f"{e.seq},{e.pin},{e.level}\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text


def replay(events) -> dict[int, str]:
    """Final pin map after applying events in order."""
    pins: dict[int, str] = {}
    for e in events:
        PinAction(e.pin, e.level)
        pins[e.pin] = e.level
    return pins


def default_bindings() -> dict[int, PinAction]:
    """A raises pin 17, C lowers it."""
    return {
        label_for_letter("A"): PinAction(DEFAULT_PIN, HIGH),
        label_for_letter("C"): PinAction(DEFAULT_PIN, LOW),
    }


def parse_bindings(text: str) -> dict[int, PinAction]:
    """Lines of "<letter> <pin> <HIGH|LOW>"; # starts a comment."""
    bindings: dict[int, PinAction] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise ValueError(f"bindings line {lineno}: expected "
                             f"'<letter> <pin> <level>', got {line!r}")
        letter, pin_text, level = parts
        try:
            label = label_for_letter(letter)
            pin = int(pin_text)
        except ValueError as exc:
            raise ValueError(f"bindings line {lineno}: {exc}") from exc
        if label in bindings:
            raise ValueError(f"bindings line {lineno}: duplicate letter {letter}")
        bindings[label] = PinAction(pin, level.upper())
    if not bindings:
        raise ValueError("bindings text defines no letters")
    return bindings


def load_bindings(path: str | Path) -> dict[int, PinAction]:
    return parse_bindings(Path(path).read_text(encoding="utf-8"))


def format_bindings(bindings: dict[int, PinAction]) -> str:
    lines = [f"{letter_for_label(label)} {a.pin} {a.level}"
             for label, a in sorted(bindings.items())]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DispatchReport:
    label: int
    letter: str
    bound: bool
    pin: int | None = None
    level: str | None = None
    warning: str | None = None


def dispatch(label: int, bindings: dict[int, PinAction],
             gpio: VirtualGpio) -> DispatchReport:
    """Apply the pin action bound to a label.

    Unbound letters leave the pins alone and record a warning instead.
    """
    letter = letter_for_label(label)
    action = bindings.get(label)
    if action is None:
        warning = f"letter {letter} has no pin binding"
        gpio.warnings.append(warning)
        return DispatchReport(label, letter, bound=False, warning=warning)
    gpio.set_pin(action.pin, action.level)
    return DispatchReport(label, letter, bound=True,
                          pin=action.pin, level=action.level)
