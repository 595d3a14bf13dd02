"""Pointer-anchored overlay geometry: dynamic context and mini-map."""

from .engine import (
    AxisWindow,
    MinimapLayout,
    OverlayLayout,
    crosshair_segments,
    layout_dynamic_context,
    layout_minimap,
    layout_to_dict,
    project_axis_window,
)
from .settings import (
    CORNERS,
    MinimapSettings,
    OverlaySettings,
    SettingsError,
    apply_setting,
    settings_from_dict,
    settings_to_dict,
    toggle_enabled,
)

__all__ = [
    "AxisWindow",
    "CORNERS",
    "MinimapLayout",
    "MinimapSettings",
    "OverlayLayout",
    "OverlaySettings",
    "SettingsError",
    "apply_setting",
    "crosshair_segments",
    "layout_dynamic_context",
    "layout_minimap",
    "layout_to_dict",
    "project_axis_window",
    "settings_from_dict",
    "settings_to_dict",
    "toggle_enabled",
]
