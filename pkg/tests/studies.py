"""Convergence studies shared between test modules (computed once per session)."""
from functools import lru_cache
import os

from coupledgrp.harness import convergence_study, shipped_case

LEVELS = (3, 4, 5, 6)
REF_LEVEL = 8


@lru_cache(maxsize=None)
def case_study(n: int):
    jobs = min(4, os.cpu_count() or 1)
    return convergence_study(shipped_case(n), LEVELS, REF_LEVEL, "sync", jobs=jobs)
