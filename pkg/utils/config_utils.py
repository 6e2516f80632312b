import os
import json
import re
from pathlib import Path
from typing import Any, Dict, Optional

import psutil

from core.errors import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_TOOL_CONFIG = PROJECT_ROOT / "config" / "geoflow_config.json"
DEFAULT_LOG_FILE = "logs/geoflow_{timestamp}.log"

_ENV_DEFAULT_PATTERN = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\:([^}]*)\}")


def _expand_env_with_default(value: str) -> str:
    """Expand shell-like ${VAR:default} placeholders using environment values."""
    def _replace(match: re.Match[str]) -> str:
        var_name = match.group(1)
        default_value = match.group(2)
        return os.getenv(var_name, default_value)

    return _ENV_DEFAULT_PATTERN.sub(_replace, value)


def _expand_string(value: str, variables: Dict[str, str]) -> str:
    # 1) Expand shell-like env defaults (${VAR:default}) first
    expanded = _expand_env_with_default(value)
    # 2) Expand environment variables like ${VAR}
    expanded = os.path.expandvars(expanded)
    # 3) Expand {var} placeholders using provided variables.
    # Unknown placeholders (e.g. {timestamp}) stay intact for later stages.
    class _SafeFormatDict(dict):
        def __missing__(self, key):
            return "{" + key + "}"

    try:
        expanded = expanded.format_map(_SafeFormatDict(variables))
    except (ValueError, IndexError):
        # Malformed braces: keep the best-effort expansion.
        pass
    return expanded


def _expand_obj(obj: Any, variables: Dict[str, str]) -> Any:
    if isinstance(obj, str):
        return _expand_string(obj, variables)
    if isinstance(obj, list):
        return [_expand_obj(i, variables) for i in obj]
    if isinstance(obj, dict):
        return {k: _expand_obj(v, variables) for k, v in obj.items()}
    return obj


def resolve_config_placeholders(config: Dict[str, Any]) -> Dict[str, Any]:
    """Resolve placeholders in config using project paths and environment variables.

    Priority for output_root:
    1. ENV GEOFLOW_OUTPUT_ROOT
    2. config.paths.output_root
    3. <project_root>/reports
    """
    paths = config.get("paths", {}) or {}
    variables = {"project_root": str(PROJECT_ROOT)}

    configured_root = paths.get("output_root")
    resolved_config_root = ""
    if configured_root:
        expanded_value = _expand_string(configured_root, variables)
        if expanded_value and "${" not in expanded_value:
            resolved_config_root = expanded_value

    output_root = os.getenv("GEOFLOW_OUTPUT_ROOT") or resolved_config_root or str(PROJECT_ROOT / "reports")
    variables["output_root"] = output_root

    current = _expand_obj(config, variables)
    if isinstance(current.get("paths"), dict):
        current["paths"]["output_root"] = output_root

    # Multi-pass resolution until a fixed point (at most 5 passes)
    for _ in range(5):
        extended_variables = dict(variables)
        extended_variables.update(
            {k: v for k, v in (current.get("paths") or {}).items() if isinstance(v, str)}
        )
        next_resolved = _expand_obj(current, extended_variables)
        if next_resolved == current:
            break
        current = next_resolved

    return current


def load_tool_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Read and resolve the tool config (tolerances, defaults, logging)."""
    config_path = Path(path) if path else DEFAULT_TOOL_CONFIG
    if not config_path.exists():
        raise ConfigError(f"❌ Config file not found: {config_path}")
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"❌ Failed to parse config {config_path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"❌ Config root must be a JSON object: {config_path}")
    return resolve_config_placeholders(raw)


def resolve_thread_count(tool_config: Optional[Dict[str, Any]] = None) -> int:
    """GEOFLOW_THREADS, then config survey.threads, then physical cores."""
    raw = os.getenv("GEOFLOW_THREADS")
    if raw is None:
        raw = ((tool_config or {}).get("survey", {}) or {}).get("threads")
    if raw in (None, "", "auto"):
        return psutil.cpu_count(logical=False) or 1
    try:
        threads = int(raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"❌ GEOFLOW_THREADS must be an integer, got {raw!r}") from e
    if threads < 1:
        raise ConfigError(f"❌ GEOFLOW_THREADS must be >= 1, got {threads}")
    return threads


def resolve_log_file_path(resolved_config: Optional[Dict[str, Any]], timestamp: str) -> Path:
    """Resolve the configured log path and substitute the run timestamp."""
    configured = os.getenv("GEOFLOW_LOG_FILE")
    if not configured:
        logging_cfg = (resolved_config or {}).get("logging", {}) or {}
        configured = str(logging_cfg.get("file", DEFAULT_LOG_FILE))
    log_path = Path(configured.replace("{timestamp}", timestamp))

    # Keep relative paths anchored to project root.
    if not log_path.is_absolute():
        log_path = PROJECT_ROOT / log_path
    return log_path


def fallback_log_file_path(timestamp: str) -> Path:
    return PROJECT_ROOT / DEFAULT_LOG_FILE.replace("{timestamp}", timestamp)
