"""
Observability module for per-run metrics and campaign summaries.
"""

from .metrics import (
    CSV_COLUMNS,
    NONDETERMINISTIC_COLUMNS,
    MetricsRecord,
    records_frame,
    write_metrics_csv,
    summarize,
    write_summary,
    node_count_wins,
    format_summary,
)

__all__ = [
    'CSV_COLUMNS',
    'NONDETERMINISTIC_COLUMNS',
    'MetricsRecord',
    'records_frame',
    'write_metrics_csv',
    'summarize',
    'write_summary',
    'node_count_wins',
    'format_summary',
]
