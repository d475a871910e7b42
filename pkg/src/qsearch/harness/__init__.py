"""Command line, configuration and reporting."""

from .cli import build_parser, main
from .config import ExperimentConfig, build_instance, make_config, read_config_file
from .report import append_summary, load_records, records_csv, records_json, write_record, write_report
