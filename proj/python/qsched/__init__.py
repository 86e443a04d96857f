"""GreedyQueue bounded-buffer packet scheduling workbench."""

from ._core import (  # noqa: F401
    BudgetExceeded,
    OfflineSchedule,
    Packet,
    ParseError,
    Trace,
    Transcript,
    adversarial_search,
    check_charging,
    check_grq_transcript,
    emit_trace,
    enumerate_feasible,
    gen_killer,
    gen_random,
    optimal_bounded,
    optimal_unbounded,
    parse_trace,
    run_experiment,
    run_grq,
    run_naive_greedy,
    verify_schedule,
)

__version__ = "0.1.0"
