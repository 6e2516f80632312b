import json
import os
from pathlib import Path
from typing import Any, Dict

from core.errors import BandLimitError, ConfigError, GridSpecError
from core.geodesic_flow import DEFAULT_BLOWUP_THRESHOLD, SimConfig, initial_state
from core.spectral_core import GridSpec
from utils.config_utils import PROJECT_ROOT, resolve_config_placeholders
from utils.logger import logDebug
from utils.validator import validate_run_config

PRESET_DIR = PROJECT_ROOT / "config" / "presets"


def sim_config_from_dict(raw: Dict[str, Any]) -> SimConfig:
    """Validate a RunConfig document and convert it to a SimConfig."""
    validate_run_config(raw)
    try:
        GridSpec(dimension=raw["dimension"], points_per_axis=raw["points_per_axis"])
    except GridSpecError as e:
        raise ConfigError(str(e)) from e

    initial = raw["initial"]
    config = SimConfig(
        dimension=raw["dimension"],
        points_per_axis=raw["points_per_axis"],
        dt=float(raw["dt"]),
        t_end=float(raw["t_end"]),
        output_every=raw.get("output_every", 1),
        sigma_coeffs=initial.get("sigma_coeffs"),
        rho_coeffs=initial.get("rho_coeffs"),
        preset=initial.get("preset"),
        blowup_threshold=float(raw.get("blowup_threshold", DEFAULT_BLOWUP_THRESHOLD)),
    )
    if config.preset is None:
        config.sigma_coeffs = config.sigma_coeffs or []
        config.rho_coeffs = config.rho_coeffs or []
    config.validate()
    # Coefficients are checked against the grid's dealias cutoff before any run.
    try:
        initial_state(config)
    except (GridSpecError, BandLimitError) as e:
        raise ConfigError(str(e)) from e
    return config


def load_run_config(path) -> SimConfig:
    path = Path(path)
    if not os.path.exists(path):
        raise ConfigError(f"❌ Config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"❌ Failed to parse config {path}: {e}") from e
    if isinstance(raw, dict):
        raw = resolve_config_placeholders(raw)
    logDebug(f"   Run config: {path}")
    return sim_config_from_dict(raw)


def load_preset(name: str, preset_dir: Path = PRESET_DIR) -> SimConfig:
    path = preset_dir / f"{name}.json"
    if not path.exists():
        valid = ", ".join(sorted(p.stem for p in preset_dir.glob("*.json")))
        raise ConfigError(f"❌ Unknown preset '{name}'. Valid: {valid}")
    return load_run_config(path)
