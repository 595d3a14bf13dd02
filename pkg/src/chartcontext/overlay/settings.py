"""Customization settings for the two interaction methods.

Every field is user-tunable; changes are applied through ``apply_setting``
so the next layout call reflects them immediately (the engine itself is
stateless).  Out-of-range values are rejected with the legal range named.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any

CORNERS = ("top-left", "top-right", "bottom-left", "bottom-right")

BLACK = (0, 0, 0, 255)

RGBA = tuple[int, int, int, int]


class SettingsError(ValueError):
    pass


def _num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _unit_open(v, _):
    return None if _num(v) and 0.0 < v <= 1.0 else "(0, 1]"


def _unit_closed(v, _):
    return None if _num(v) and 0.0 <= v <= 1.0 else "[0, 1]"


def _nonneg(v, _):
    return None if _num(v) and v >= 0 else ">= 0"


def _positive(v, _):
    return None if _num(v) and v > 0 else "> 0"


def _flag(v, _):
    return None if isinstance(v, bool) else "true or false"


def _rgba(v, _):
    ok = (
        isinstance(v, (tuple, list))
        and len(v) == 4
        and all(isinstance(c, int) and not isinstance(c, bool) and 0 <= c <= 255 for c in v)
    )
    return None if ok else "[r, g, b, a] with each channel an integer in 0..255"


def _corner(v, _):
    return None if v in CORNERS else "one of " + "|".join(CORNERS)


_OA_FIELDS = {
    "oa_width": _unit_open,
    "oa_height": _unit_open,
    "border_thickness": _nonneg,
    "border_color": _rgba,
    "outer_dimming": _flag,
    "dimming_opacity": _unit_closed,
}


def _coerce(value: Any) -> Any:
    """Normalize values arriving from JSON (colors as lists)."""
    if isinstance(value, list):
        return tuple(value)
    return value


def _validate(obj) -> None:
    rules = type(obj)._RULES
    for name, rule in rules.items():
        value = getattr(obj, name)
        bad = rule(value, name)
        if bad is not None:
            raise SettingsError(f"{name}: {value!r} out of range, expected {bad}")


@dataclass(frozen=True)
class OverlaySettings:
    """Dynamic-context settings.  Defaults follow the shipped configuration:
    outer dimming on, 2 px black border, 30% axis ratio, black crosshair
    reaching the OA edges."""

    oa_width: float = 0.3
    oa_height: float = 0.3
    border_thickness: float = 2.0
    border_color: RGBA = BLACK
    outer_dimming: bool = True
    dimming_opacity: float = 0.5
    axis_ratio: float = 0.3
    crosshair_thickness: float = 2.0
    crosshair_color: RGBA = BLACK
    crosshair_opacity: float = 1.0
    crosshair_reach: float = 1.0
    context_enabled: bool = True

    _RULES = {
        **_OA_FIELDS,
        "axis_ratio": _unit_open,
        "crosshair_thickness": _positive,
        "crosshair_color": _rgba,
        "crosshair_opacity": _unit_closed,
        "crosshair_reach": _unit_closed,
        "context_enabled": _flag,
    }

    def __post_init__(self):
        _validate(self)


@dataclass(frozen=True)
class MinimapSettings:
    """Mini-map settings.  Defaults follow the shipped configuration:
    top-right corner, map at 30% of the OA width, indicator at 15% of the
    map width with black fill."""

    oa_width: float = 0.3
    oa_height: float = 0.3
    border_thickness: float = 2.0
    border_color: RGBA = BLACK
    outer_dimming: bool = True
    dimming_opacity: float = 0.5
    corner: str = "top-right"
    map_scale: float = 0.3
    indicator_radius: float = 0.15
    indicator_fill: RGBA = BLACK
    enabled: bool = True

    _RULES = {
        **_OA_FIELDS,
        "corner": _corner,
        "map_scale": _unit_open,
        "indicator_radius": _unit_open,
        "indicator_fill": _rgba,
        "enabled": _flag,
    }

    def __post_init__(self):
        _validate(self)


def setting_names(settings) -> tuple[str, ...]:
    return tuple(type(settings)._RULES)


def apply_setting(settings, key: str, value):
    """Copy of ``settings`` with one field changed.

    Raises SettingsError for unknown keys and for out-of-range values; the
    error names the legal range so a UI can surface it inline.
    """
    rules = type(settings)._RULES
    if key not in rules:
        raise SettingsError(
            f"unknown setting {key!r}; known settings: {', '.join(rules)}"
        )
    value = _coerce(value)
    bad = rules[key](value, key)
    if bad is not None:
        raise SettingsError(f"{key}: {value!r} out of range, expected {bad}")
    return dataclasses.replace(settings, **{key: value})


def toggle_enabled(settings):
    """Left-click toggle: invert the enabled flag, leave everything else.

    Applying it twice returns the original settings.
    """
    if isinstance(settings, OverlaySettings):
        return dataclasses.replace(settings, context_enabled=not settings.context_enabled)
    if isinstance(settings, MinimapSettings):
        return dataclasses.replace(settings, enabled=not settings.enabled)
    raise TypeError(f"not a settings object: {type(settings).__name__}")


def settings_to_dict(settings) -> dict:
    out = {}
    for name in setting_names(settings):
        value = getattr(settings, name)
        out[name] = list(value) if isinstance(value, tuple) else value
    return out


def settings_from_dict(doc: dict, kind: str):
    """Build settings from a JSON document. ``kind`` is ``dynamic-context``
    or ``mini-map``; unknown fields are rejected."""
    cls = {"dynamic-context": OverlaySettings, "mini-map": MinimapSettings}.get(kind)
    if cls is None:
        raise SettingsError(f"unknown settings kind {kind!r}")
    settings = cls()
    for key, value in doc.items():
        settings = apply_setting(settings, key, value)
    return settings


def settings_to_json(settings) -> str:
    return json.dumps(settings_to_dict(settings), indent=2, sort_keys=True)
