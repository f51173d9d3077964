"""
Configuration loader for pwtest
Handles YAML experiment files, schema validation and environment variables
"""

import copy
from pathlib import Path
from typing import Any, Dict, Optional

import jsonschema
import yaml
from dotenv import find_dotenv, load_dotenv
from jsonschema import validate

from ..core.errors import ConfigError
from ..core.estimators import MEDIAN_HEURISTIC, MmdConfig, PwConfig

_POSITIVE_INT = {"type": "integer", "minimum": 1}

# Config schema for validation
CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "pw": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "k": _POSITIVE_INT,
                "penalty": {"type": "number", "exclusiveMinimum": 0},
                "batch_size": _POSITIVE_INT,
                "iterations": _POSITIVE_INT,
                "learning_rate": {"type": "number", "minimum": 0},
                "lr_schedule": {"type": "string", "enum": ["constant", "inverse-sqrt"]},
                "reorthonormalize_every": {"type": "integer", "minimum": 0},
                "init": {"type": "string", "enum": ["coordinate", "random"]},
                "hidden": {"type": "array", "items": _POSITIVE_INT},
                "activation": {"type": "string", "enum": ["relu", "tanh"]},
                "full_scan_limit": _POSITIVE_INT,
                "log_every": {"type": "integer", "minimum": 0},
            },
        },
        "mmd": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "bandwidth": {
                    "oneOf": [
                        {"type": "number", "exclusiveMinimum": 0},
                        {"type": "string", "enum": [MEDIAN_HEURISTIC]},
                    ]
                },
                "kernel": {"type": "string", "enum": ["gaussian"]},
            },
        },
        "tester": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"type": "string", "enum": ["pw", "mmd"]},
                "mode": {"type": "string", "enum": ["threshold", "permutation"]},
                "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "permutations": {"type": "integer", "minimum": 19},
                "trials": _POSITIVE_INT,
                "sigmoid": {"type": ["boolean", "null"]},
                "jobs": _POSITIVE_INT,
            },
        },
        "logging": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "level": {"type": "string", "enum": ["DEBUG", "INFO", "WARNING", "ERROR"]},
                "file": {"type": "string"},
            },
        },
    },
}

DEFAULT_TESTER = {
    "method": "pw",
    "mode": "threshold",
    "alpha": 0.05,
    "permutations": 199,
    "trials": 100,
    "sigmoid": None,
}


class ConfigLoader:
    """Load and validate experiment configuration files"""

    def __init__(self, config_path: str = None):
        """
        Initialize config loader

        Args:
            config_path: Path to YAML config file (optional)
        """
        self.config_path = Path(config_path) if config_path else None
        self.config = {}
        self.env_loaded = False

    def load_env(self, env_file: Optional[str] = None) -> bool:
        """
        Load PWTEST_* variables from a .env file without overriding the shell environment

        Args:
            env_file: Explicit .env path; by default the nearest .env in the working
                directory or its parents

        Returns:
            True if a file was loaded
        """
        path = env_file or find_dotenv(usecwd=True)
        self.env_loaded = bool(path) and Path(path).is_file() and load_dotenv(path, override=False)
        return self.env_loaded

    def load_config(self, config_path: str = None) -> Dict[str, Any]:
        """
        Load and validate the YAML configuration; without a file only defaults apply

        Args:
            config_path: Path to config file (overrides constructor path)

        Returns:
            Configuration dictionary

        Raises:
            FileNotFoundError: If a config path is given but doesn't exist
            ConfigError: If the config is not valid YAML or violates the schema
        """
        if config_path:
            self.config_path = Path(config_path)

        if self.config_path is None:
            self.config = {}
        else:
            if not self.config_path.exists():
                raise FileNotFoundError(f"Config file not found: {self.config_path}")
            with open(self.config_path, "r") as f:
                try:
                    self.config = yaml.safe_load(f) or {}
                except yaml.YAMLError as e:
                    raise ConfigError(f"Config file {self.config_path} is not valid YAML: {e}")

        try:
            validate(instance=self.config, schema=CONFIG_SCHEMA)
        except jsonschema.ValidationError as e:
            key = ".".join(str(p) for p in e.absolute_path) or "<root>"
            raise ConfigError(f"Invalid configuration at '{key}': {e.message}")

        # Set defaults for optional fields
        self.config.setdefault("seed", 0)
        self.config.setdefault("pw", {})
        self.config.setdefault("mmd", {})
        self.config.setdefault("logging", {})
        tester = self.config.setdefault("tester", {})
        for key, value in DEFAULT_TESTER.items():
            tester.setdefault(key, value)

        return self.config

    def get(self, key: str, default: Any = None) -> Any:
        """Dotted lookup into the loaded configuration, e.g. get("pw.penalty")"""
        value = self.config
        for part in key.split("."):
            if not isinstance(value, dict) or value.get(part) is None:
                return default
            value = value[part]
        return value

    def pw_config(self, seed: Optional[int] = None, **overrides) -> PwConfig:
        """
        PwConfig from the pw section, with non-None keyword overrides applied on top

        Raises:
            ConfigError: If the merged values are invalid
        """
        payload = copy.deepcopy(self.config.get("pw", {}))
        payload.update({k: v for k, v in overrides.items() if v is not None})
        payload["seed"] = self.get("seed", 0) if seed is None else seed
        return PwConfig.from_dict(payload)

    def mmd_config(self, **overrides) -> MmdConfig:
        payload = copy.deepcopy(self.config.get("mmd", {}))
        payload.update({k: v for k, v in overrides.items() if v is not None})
        return MmdConfig.from_dict(payload)

    def method_config(self, method: str, seed: Optional[int] = None, **overrides):
        """Resolved configuration for a test method ('pw' or 'mmd')"""
        if method == "mmd":
            return self.mmd_config()
        return self.pw_config(seed=seed, **overrides)

    def tester_setting(self, key: str, override: Any = None) -> Any:
        """Command-line value if given, else the tester section (defaults filled)"""
        if override is not None:
            return override
        return self.get(f"tester.{key}", DEFAULT_TESTER.get(key))

    def save_config(self, output_path: str = None):
        """
        Save configuration to YAML file

        Args:
            output_path: Output file path (defaults to original config_path)
        """
        output_path = Path(output_path) if output_path else self.config_path

        if not output_path:
            raise ConfigError("No output path specified")

        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, "w") as f:
            yaml.safe_dump(self.config, f, default_flow_style=False, sort_keys=False)


def load_config(config_path: str = None) -> ConfigLoader:
    """
    Convenience function to load configuration

    Args:
        config_path: Path to config file, or None for defaults only

    Returns:
        ConfigLoader instance
    """
    loader = ConfigLoader(config_path)
    loader.load_env()
    loader.load_config()
    return loader
