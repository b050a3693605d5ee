from ._core import (
    ConfigError,
    DimensionError,
    GridSpec,
    SqgParams,
    advance,
    config_hash,
    default_config_json,
    ensf_analyze,
    estimate_training_flops,
    fit_loglog_slope,
    format_sig,
    ke_spectrum,
    letkf_analyze,
    nature_run,
    run_experiment,
    vit_param_count,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "GridSpec",
    "SqgParams",
    "advance",
    "config_hash",
    "default_config_json",
    "ensf_analyze",
    "estimate_training_flops",
    "fit_loglog_slope",
    "format_sig",
    "ke_spectrum",
    "letkf_analyze",
    "nature_run",
    "run_experiment",
    "vit_param_count",
]
