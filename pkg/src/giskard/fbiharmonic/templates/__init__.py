from .environment import REPORTS_PATH, create_report_environment, render_report

__all__ = [
    "REPORTS_PATH",
    "create_report_environment",
    "render_report",
]
