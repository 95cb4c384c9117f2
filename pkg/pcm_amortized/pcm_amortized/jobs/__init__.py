from .experiments import case1_job, case2_job

__all__ = ["case1_job", "case2_job"]
