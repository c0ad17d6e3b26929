"""
Benchmark campaigns, result files and SVG rendering.
"""

from .campaign import CampaignCell, CampaignSpec, ResultCollector, run_trial, run_campaign
from .results import RESULT_VERSION, result_to_document, dump_result, write_result, parse_result, load_result
from .render import RenderOptions, render_svg, save_svg

__all__ = [
    'CampaignCell',
    'CampaignSpec',
    'ResultCollector',
    'run_trial',
    'run_campaign',
    'RESULT_VERSION',
    'result_to_document',
    'dump_result',
    'write_result',
    'parse_result',
    'load_result',
    'RenderOptions',
    'render_svg',
    'save_svg',
]
