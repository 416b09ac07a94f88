"""Prometheus metrics for computation runs."""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, Optional

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

logger = logging.getLogger(__name__)


class ComputationMetrics:
    """Per-run operation counters and timings.

    Each instance owns its registry so repeated runs in one process do not
    collide on metric names.
    """

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry or CollectorRegistry()
        self.operations = Counter(
            'rht_operations_total', 'Total number of operations run', ['operation', 'status'], registry=self.registry
        )
        self.duration = Histogram(
            'rht_operation_duration_seconds', 'Operation duration', ['operation'], registry=self.registry
        )
        self.max_matrix_dim = Gauge(
            'rht_max_matrix_dim', 'Largest ambient dimension seen in this run', registry=self.registry
        )
        self.verdicts = Counter(
            'rht_verdicts_total', 'Reported verdicts', ['operation', 'verdict'], registry=self.registry
        )
        self.counts: Dict[str, int] = {}
        self._max_dim = 0

    @contextmanager
    def track(self, operation: str) -> Iterator[None]:
        """Time an operation and count it as success or error."""
        start = time.perf_counter()
        try:
            yield
        except Exception:
            self.operations.labels(operation=operation, status='error').inc()
            raise
        else:
            self.operations.labels(operation=operation, status='success').inc()
            self.counts[operation] = self.counts.get(operation, 0) + 1
        finally:
            elapsed = time.perf_counter() - start
            self.duration.labels(operation=operation).observe(elapsed)
            logger.debug(f"{operation} took {elapsed:.4f}s")

    def record_dimension(self, dim: int) -> None:
        if dim > self._max_dim:
            self._max_dim = dim
            self.max_matrix_dim.set(dim)

    def record_verdict(self, operation: str, verdict: Optional[bool]) -> None:
        label = 'none' if verdict is None else str(verdict).lower()
        self.verdicts.labels(operation=operation, verdict=label).inc()

    def write(self, path: Path) -> None:
        """Write the registry in the Prometheus text format."""
        path.parent.mkdir(parents=True, exist_ok=True)
        write_to_textfile(str(path), self.registry)
        logger.info(f"Metrics written to {path}")
