"""Elementary-effects screening toolkit.

Thin python layer over the native core: design sampling, effect statistics,
zone classification. The command line tool and file formats are documented in
the project README.
"""

from eekit._core import (
    AnalyticModel,
    DesignPlan,
    EekitError,
    ParameterSpec,
    aggregate,
    classify_first_order,
    delta_for,
    evaluate_points,
    first_order_effect_table,
    natural_log_output,
    sample_first_order,
    sample_second_order,
    second_order_effect_tables,
    step_sign,
    __version__,
)

__all__ = [
    "AnalyticModel",
    "DesignPlan",
    "EekitError",
    "ParameterSpec",
    "aggregate",
    "classify_first_order",
    "delta_for",
    "evaluate_points",
    "first_order_effect_table",
    "natural_log_output",
    "sample_first_order",
    "sample_second_order",
    "second_order_effect_tables",
    "step_sign",
    "__version__",
]
