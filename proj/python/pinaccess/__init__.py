"""Standard-cell pin access testcell generation, routing and DRC."""

from ._pinaccess import (
    count_instances,
    library_profile,
    plan_testcells,
    run,
    run_pipeline,
    width_histogram,
)

__all__ = [
    "count_instances",
    "library_profile",
    "plan_testcells",
    "run",
    "run_pipeline",
    "width_histogram",
]
