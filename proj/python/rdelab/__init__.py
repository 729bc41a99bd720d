"""Population dynamics for recursive distributional equations."""

from ._rdelab import (
    apply_T,
    critical_scan,
    endogeny,
    entries,
    exact_sample,
    frozen_local_stats,
    greedy_brw_speed,
    iterate,
    ks,
    oracle_cdf,
    oracle_constant,
    oracle_sample,
    run,
    scaling_fit,
    speed_from_L,
    wasserstein,
)

__all__ = [
    "apply_T",
    "critical_scan",
    "endogeny",
    "entries",
    "exact_sample",
    "frozen_local_stats",
    "greedy_brw_speed",
    "iterate",
    "ks",
    "oracle_cdf",
    "oracle_constant",
    "oracle_sample",
    "run",
    "scaling_fit",
    "speed_from_L",
    "wasserstein",
]
