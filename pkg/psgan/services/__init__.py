# Service layer for the pipeline
from .report_service import EvalReport, ReportService, eval_generator

__all__ = ['EvalReport', 'ReportService', 'eval_generator']
