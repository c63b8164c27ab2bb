"""
Experiment Runner
Evaluates bounded conditioning over a grid of networks, epsilons and
budgets, in parallel, and tabulates loss of mass and bound width.
"""
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from threading import Lock
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..config import Config
from ..errors import NetworkValidationError
from ..model.io import load_network, parse_query
from ..model.network import ProbNetwork
from ..probinfer.bounded import bounded_conditioning
from .random_networks import CYCLIC, SHAPES, network_suite

logger = logging.getLogger(__name__)

COLUMNS = ["network", "eps", "budget", "LM", "instances", "width", "elapsed"]


class RandomSuiteSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = None
    count: int = Field(ge=0)
    min_vars: int = Field(default=3, ge=1)
    max_vars: int = Field(default=8, ge=1)
    max_values: int = Field(default=3, ge=2)
    max_parents: int = Field(default=3, ge=0)
    shape: str = CYCLIC

    @field_validator("shape")
    @classmethod
    def known_shape(cls, value: str) -> str:
        if value not in SHAPES:
            raise ValueError(f"shape must be one of {list(SHAPES)}")
        return value

    @model_validator(mode="after")
    def consistent_sizes(self):
        if self.min_vars > self.max_vars:
            raise ValueError("min_vars exceeds max_vars")
        if self.shape == CYCLIC and (self.max_vars < 3 or self.max_parents < 2):
            raise ValueError("cyclic suites need max_vars >= 3 and max_parents >= 2")
        return self


class NetworkSpec(BaseModel):
    """Either a network file or a random suite, plus an optional query target"""
    model_config = ConfigDict(extra="forbid")

    path: Optional[str] = None
    random: Optional[RandomSuiteSpec] = None
    target: Optional[str] = None

    @model_validator(mode="after")
    def one_source(self):
        if (self.path is None) == (self.random is None):
            raise ValueError("give exactly one of 'path' or 'random'")
        return self


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    networks: List[NetworkSpec] = Field(default_factory=list)
    epsilons: List[float] = Field(default_factory=lambda: [Config.DEFAULT_EPSILON])
    budgets: List[Optional[int]] = Field(default_factory=lambda: [None])
    seed: int = Config.DEFAULT_SEED
    record_timing: bool = True

    @field_validator("epsilons")
    @classmethod
    def epsilons_in_range(cls, values: List[float]) -> List[float]:
        for eps in values:
            if not 0.0 < eps < 1.0:
                raise ValueError(f"epsilon {eps} is not in (0, 1)")
        return values

    @field_validator("budgets")
    @classmethod
    def budgets_nonnegative(cls, values: List[Optional[int]]) -> List[Optional[int]]:
        if any(budget is not None and budget < 0 for budget in values):
            raise ValueError("budgets must be nonnegative or null")
        return values


def load_config(source: Union[str, Path, Dict], base_dir: Optional[Path] = None) -> ExperimentConfig:
    """
    Read and validate an experiment config

    Relative network paths are resolved against the config file's directory.
    """
    if isinstance(source, dict):
        raw = source
    else:
        path = Path(source)
        base_dir = base_dir or path.parent
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise NetworkValidationError(f"config is not valid JSON: {e.msg}", location=f"line {e.lineno}") from None
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise NetworkValidationError(first["msg"], location=".".join(str(p) for p in first["loc"])) from None

    if base_dir is not None:
        for entry in config.networks:
            if entry.path is not None and not Path(entry.path).is_absolute():
                entry.path = str(Path(base_dir) / entry.path)
    return config


def _default_target(net: ProbNetwork) -> Dict[str, str]:
    last = net.topological_order()[-1]
    return {last: net.variable(last).values[0]}


class ExperimentJob:
    """One (network, epsilon, budget) cell of the grid"""

    def __init__(self, order: int, net: ProbNetwork, target: Dict[str, str], eps: float, budget: Optional[int]):
        self.order = order
        self.net = net
        self.target = target
        self.eps = eps
        self.budget = budget

    @property
    def sort_key(self) -> Tuple:
        return (self.order, -self.eps, self.budget is None, self.budget or 0)


class ExperimentRunner:
    """
    Grid runner over a thread pool
    """

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or Config.MAX_WORKERS
        self.lock = Lock()
        self.completed = 0

    def networks(self, config: ExperimentConfig) -> List[Tuple[ProbNetwork, Dict[str, str]]]:
        """Materialize every network the config names, in config order"""
        networks = []
        for entry in config.networks:
            if entry.path is not None:
                net = load_network(entry.path)
                if not isinstance(net, ProbNetwork):
                    raise NetworkValidationError("experiments need probability networks", location=entry.path)
                suite = [net]
            else:
                random = entry.random
                seed = config.seed if random.seed is None else random.seed
                suite = network_suite(seed, random.count, kind="prob", min_vars=random.min_vars,
                                      max_vars=random.max_vars, max_values=random.max_values,
                                      max_parents=random.max_parents, shape=random.shape)
            for net in suite:
                target = parse_query(entry.target) if entry.target else _default_target(net)
                networks.append((net, target))
        return networks

    def jobs(self, config: ExperimentConfig) -> List[ExperimentJob]:
        jobs = []
        for order, (net, target) in enumerate(self.networks(config)):
            for eps in config.epsilons:
                for budget in config.budgets:
                    jobs.append(ExperimentJob(order, net, target, eps, budget))
        return jobs

    def _run_job(self, job: ExperimentJob, record_timing: bool) -> Dict:
        started = time.perf_counter()
        result = bounded_conditioning(job.net, job.target, eps=job.eps, budget=job.budget,
                                      record_timing=record_timing)
        elapsed = time.perf_counter() - started if record_timing else 0.0
        return {
            'network': job.net.name or f"network-{job.order}",
            'eps': job.eps,
            'budget': job.budget,
            'LM': result.loss.average,
            'instances': result.evaluated,
            'width': result.bounds.width,
            'elapsed': elapsed,
        }

    def run(self, config: ExperimentConfig) -> pd.DataFrame:
        """
        Evaluate every cell of the grid

        Args:
            config: Validated experiment config

        Returns:
            DataFrame with COLUMNS, one row per cell, in config order with
            epsilons descending
        """
        jobs = self.jobs(config)
        rows: List[Tuple[Tuple, Dict]] = []
        self.completed = 0

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_job = {executor.submit(self._run_job, job, config.record_timing): job for job in jobs}
            for future in as_completed(future_to_job):
                job = future_to_job[future]
                row = future.result()
                with self.lock:
                    rows.append((job.sort_key, row))
                    self.completed += 1
                logger.info("experiment job completed", extra={
                    "network": row['network'], "eps": job.eps, "budget": job.budget,
                    "completed": self.completed, "total": len(jobs)})

        rows.sort(key=lambda item: item[0])
        frame = pd.DataFrame([row for _, row in rows], columns=COLUMNS)
        frame["budget"] = frame["budget"].astype("Int64")
        return frame


def write_table(frame: pd.DataFrame, path) -> None:
    frame.to_csv(path, index=False, lineterminator="\n")
