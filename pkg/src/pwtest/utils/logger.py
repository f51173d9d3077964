"""
Logging utility for pwtest
Provides consistent logging with Rich console output on stderr
"""

import logging
import os
from pathlib import Path
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn, TimeElapsedColumn
from rich.panel import Panel
from rich.table import Table
import yaml

# stdout stays free for shell pipelines
console = Console(stderr=True)

LOG_LEVEL_ENV = "PWTEST_LOG_LEVEL"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def resolve_level(level: str = None, config_level: str = None) -> str:
    """
    Pick the log level: explicit flag, then config file, then PWTEST_LOG_LEVEL, then INFO

    Args:
        level: Level from the command line
        config_level: Level from the YAML logging section

    Returns:
        Upper-case level name
    """
    for candidate in (level, config_level, os.getenv(LOG_LEVEL_ENV)):
        if candidate and str(candidate).upper() in LOG_LEVELS:
            return str(candidate).upper()
    return "INFO"


def setup_logger(name: str = "pwtest", level: str = "INFO", log_file: str = None):
    """
    Set up logger with Rich handler for console output

    Args:
        name: Logger name
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file path for logging

    Returns:
        logging.Logger: Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))

    # Remove existing handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console_handler = RichHandler(
        console=console,
        show_time=True,
        show_path=False,
        markup=False,
        rich_tracebacks=True,
    )
    console_handler.setLevel(getattr(logging, level.upper()))
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)
        # the file records DEBUG even when the console is quieter
        logger.setLevel(logging.DEBUG)

    return logger


def print_banner(version: str):
    """Print pwtest banner"""
    console.print(f"[bold blue]pwtest {version}[/bold blue] [dim]projected Wasserstein two-sample testing[/dim]")


def print_step(step_num: int, total_steps: int, description: str):
    """Print step header"""
    console.print(f"\n[bold cyan]Step {step_num}/{total_steps}:[/bold cyan] {description}")


def _status(symbol: str, style: str, message: str):
    # messages are plain text, never markup
    console.print(f"{symbol} [{style}]{escape(str(message))}[/{style}]")


def print_success(message: str):
    _status("✓", "green", message)


def print_error(message: str):
    _status("✗", "red", message)


def print_warning(message: str):
    _status("⚠", "yellow", message)


def print_info(message: str):
    _status("ℹ", "blue", message)


def create_progress_bar(auto_refresh: bool = True):
    """
    Create a Rich progress bar

    Args:
        auto_refresh: Redraw from a background thread; pass False around process pools
            and advance with refresh=True instead
    """
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
        auto_refresh=auto_refresh,
    )


def print_summary_table(data: dict, title: str = "Summary"):
    """
    Print a summary table

    Args:
        data: Dictionary of key-value pairs
        title: Table title
    """
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")

    for key, value in data.items():
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))

    console.print(table)


def print_config_panel(config: dict, title: str = "Configuration"):
    """
    Print configuration in a panel

    Args:
        config: Configuration dictionary
        title: Panel title
    """
    panel = Panel(escape(yaml.safe_dump(config, default_flow_style=False, sort_keys=True)), title=title,
                  border_style="blue")
    console.print(panel)


__all__ = [
    "LOG_LEVEL_ENV",
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
