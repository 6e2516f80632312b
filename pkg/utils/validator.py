from numbers import Integral, Real
from typing import Any, Dict

from core.errors import ConfigError
from core.geodesic_flow import INITIAL_DATA_PRESETS

SCHEMA_VERSION = 1

REQUIRED_FIELDS = ["schema_version", "dimension", "points_per_axis", "dt", "t_end", "initial"]
OPTIONAL_FIELDS = ["output_every", "blowup_threshold", "seed", "tolerance", "description"]
INITIAL_FIELDS = ["preset", "sigma_coeffs", "rho_coeffs"]


def _is_int(value: Any) -> bool:
    return isinstance(value, Integral) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _validate_coeff_list(name: str, entries: Any, dimension: int) -> None:
    if not isinstance(entries, list):
        raise ConfigError(f"❌ initial.{name} must be a list of [k..., re, im] entries")
    for i, entry in enumerate(entries):
        if not isinstance(entry, list) or len(entry) != dimension + 2:
            raise ConfigError(
                f"❌ initial.{name}[{i}] must have {dimension} wavenumbers plus re, im: {entry!r}"
            )
        if not all(_is_int(k) for k in entry[:dimension]):
            raise ConfigError(f"❌ initial.{name}[{i}] wavenumbers must be integers: {entry[:dimension]!r}")
        if not all(_is_number(x) for x in entry[dimension:]):
            raise ConfigError(f"❌ initial.{name}[{i}] re/im must be numbers: {entry[dimension:]!r}")


def validate_run_config(config: Dict[str, Any]) -> bool:
    """Validate a simulation RunConfig document.

    Checks required fields, types and ranges and rejects unknown keys at every
    level. Grid checks that need GridSpec (power of two, cutoff) happen when the
    initial state is built. Returns True if validation passes.
    """
    if not isinstance(config, dict):
        raise ConfigError("❌ Run config must be a JSON object")

    missing = [key for key in REQUIRED_FIELDS if key not in config]
    if missing:
        raise ConfigError(f"❌ Missing required config fields: {', '.join(missing)}")

    unknown = sorted(set(config) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS))
    if unknown:
        raise ConfigError(f"❌ Unknown config fields: {', '.join(unknown)}")

    if config["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"❌ Unsupported schema_version {config['schema_version']!r} (expected {SCHEMA_VERSION})")

    dimension = config["dimension"]
    if dimension not in (1, 2) or not _is_int(dimension):
        raise ConfigError(f"❌ dimension must be 1 or 2, got {dimension!r}")
    if not _is_int(config["points_per_axis"]) or config["points_per_axis"] < 16:
        raise ConfigError(f"❌ points_per_axis must be an integer >= 16, got {config['points_per_axis']!r}")

    for key in ("dt", "t_end"):
        if not _is_number(config[key]) or not config[key] > 0:
            raise ConfigError(f"❌ {key} must be a positive number, got {config[key]!r}")
    if "output_every" in config and (not _is_int(config["output_every"]) or config["output_every"] < 1):
        raise ConfigError(f"❌ output_every must be an integer >= 1, got {config['output_every']!r}")
    if "blowup_threshold" in config and (
        not _is_number(config["blowup_threshold"]) or not config["blowup_threshold"] > 0
    ):
        raise ConfigError(f"❌ blowup_threshold must be a positive number, got {config['blowup_threshold']!r}")
    if "seed" in config and not _is_int(config["seed"]):
        raise ConfigError(f"❌ seed must be an integer, got {config['seed']!r}")
    if "tolerance" in config and (not _is_number(config["tolerance"]) or not config["tolerance"] > 0):
        raise ConfigError(f"❌ tolerance must be a positive number, got {config['tolerance']!r}")

    initial = config["initial"]
    if not isinstance(initial, dict):
        raise ConfigError("❌ initial must be an object with a preset or sigma_coeffs/rho_coeffs")
    unknown = sorted(set(initial) - set(INITIAL_FIELDS))
    if unknown:
        raise ConfigError(f"❌ Unknown initial fields: {', '.join(unknown)}")
    if "preset" in initial:
        if len(initial) != 1:
            raise ConfigError("❌ initial.preset cannot be combined with coefficient lists")
        if initial["preset"] not in INITIAL_DATA_PRESETS:
            raise ConfigError(
                f"❌ Unknown preset {initial['preset']!r}. Valid: {', '.join(sorted(INITIAL_DATA_PRESETS))}"
            )
    else:
        if not initial:
            raise ConfigError("❌ initial needs a preset or sigma_coeffs/rho_coeffs")
        for name in ("sigma_coeffs", "rho_coeffs"):
            if name in initial:
                _validate_coeff_list(name, initial[name], dimension)

    return True
