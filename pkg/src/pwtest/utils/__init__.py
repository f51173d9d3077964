"""Utility modules for pwtest"""

from .config_loader import CONFIG_SCHEMA, ConfigLoader, load_config
from .io_handler import (
    manifest_path,
    read_json,
    read_samples,
    samples_frame,
    to_jsonable,
    write_frame,
    write_json,
    write_samples,
)
from .logger import (
    console,
    create_progress_bar,
    print_banner,
    print_config_panel,
    print_error,
    print_info,
    print_step,
    print_success,
    print_summary_table,
    print_warning,
    resolve_level,
    setup_logger,
)

__all__ = [
    "CONFIG_SCHEMA",
    "ConfigLoader",
    "load_config",
    "manifest_path",
    "read_json",
    "read_samples",
    "samples_frame",
    "to_jsonable",
    "write_frame",
    "write_json",
    "write_samples",
    "console",
    "create_progress_bar",
    "print_banner",
    "print_config_panel",
    "print_error",
    "print_info",
    "print_step",
    "print_success",
    "print_summary_table",
    "print_warning",
    "resolve_level",
    "setup_logger",
]
