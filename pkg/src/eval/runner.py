"""
Batch evaluation: memory per user, retrieval + prompt + generation per case and
seed, metrics averaged over seeds.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from src.configs import AppConfig
from src.core.builder import MemoryBuilder
from src.core.exceptions import EmptyDataset, MemWeaverError, PreconditionError
from src.models import (
    CognitiveMode,
    Embedding,
    EvalCase,
    MemoryStore,
    MetricReport,
    RetrieverKind,
    TaskType,
)
from src.promptgen import TaskTemplate, answer, assemble_prompt, get_template, memory_records
from .dataset import load_dataset
from .metrics import classification_metrics, generation_metrics, regression_metrics

logger = logging.getLogger(__name__)

# scored as wrong against every label
UNPARSEABLE = "<unparseable>"


def worst_rating(gold: float) -> str:
    return "1" if abs(gold - 1) >= abs(5 - gold) else "5"


def score_predictions(
    task: TaskType,
    preds: Sequence[str],
    golds: Sequence[Union[str, float]],
    labels: Optional[Sequence[str]] = None,
    stemming: bool = False,
) -> Dict[str, float]:
    """Metrics of one seed's predictions, chosen by task."""
    if task.is_regression:
        return regression_metrics([float(p) for p in preds], [float(g) for g in golds])
    if task.is_classification:
        return classification_metrics(preds, [str(g) for g in golds], labels)
    return generation_metrics(preds, [str(g) for g in golds], stemming)


class EvalRunner:
    """
    Evaluates one dataset under one configuration.

    Memory is built once per user and shared by every seed; the walk and the
    random baseline are the only seeded stages. Provider failures and prompt
    overflows are counted and scored as wrong without aborting the run.

    Args:
        config: Resolved configuration
        builder: Memory builder; built from config when omitted
    """

    def __init__(self, config: AppConfig, builder: Optional[MemoryBuilder] = None):
        self.config = config
        self.builder = builder or MemoryBuilder(config)
        self.retriever = RetrieverKind(config.EVAL_RETRIEVER)
        self.cognitive_mode = CognitiveMode(config.EVAL_COGNITIVE_MODE)
        self.predictions: List[Dict[str, object]] = []
        self.stats = {"failed_cases": 0, "unparseable": 0}
        self._stats_lock = threading.Lock()
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _count(self, key: str) -> None:
        with self._stats_lock:
            self.stats[key] += 1

    def build_stores(self, cases: Sequence[EvalCase]) -> Dict[str, Optional[MemoryStore]]:
        """One store per user; None when building failed."""
        stores: Dict[str, Optional[MemoryStore]] = {}
        needs_graph = self.retriever in (RetrieverKind.WALK, RetrieverKind.DENSE)
        for case in cases:
            if case.user_id in stores:
                continue
            try:
                if needs_graph or self.config.EVAL_USE_COGNITIVE:
                    stores[case.user_id] = self.builder.build(case.history_ref, self.config.EVAL_USE_COGNITIVE)
                else:
                    stores[case.user_id] = MemoryStore(user_id=case.user_id, history=case.history_ref)
            except MemWeaverError as e:
                self.logger.error(f"Building memory for user '{case.user_id}' failed: {e}")
                stores[case.user_id] = None
        return stores

    def embed_queries(self, cases: Sequence[EvalCase]) -> List[Optional[Embedding]]:
        if self.retriever not in (RetrieverKind.WALK, RetrieverKind.DENSE):
            return [None] * len(cases)
        return list(self.builder.embedder.embed([case.query.text for case in cases]))

    def predict(
        self,
        case: EvalCase,
        store: Optional[MemoryStore],
        seed: int,
        query_embedding: Optional[Embedding],
    ) -> str:
        """Prediction of one case under one seed; failures become a wrong prediction."""
        task = case.query.task
        try:
            if store is None:
                raise PreconditionError(f"no memory for user '{case.user_id}'")
            memory = self.builder.retrieve(
                store, case.query, self.retriever, seed=seed, query_embedding=query_embedding
            )
            cognitive = store.cognitive if self.config.EVAL_USE_COGNITIVE else None
            bundle = assemble_prompt(
                task, case.query, memory_records(memory, store.history), cognitive,
                self.builder.generator.config, self.cognitive_mode,
            )
            result = answer(bundle, self.builder.generator)
        except MemWeaverError as e:
            self.logger.warning(f"Case '{case.query.query_id}' (seed {seed}) failed: {e}")
            self._count("failed_cases")
            return self.failure_prediction(case)

        if not result.parsed:
            self._count("unparseable")
            if task in (TaskType.LAMP_1, TaskType.LAMP_2):
                return UNPARSEABLE
        return result.prediction

    @staticmethod
    def failure_prediction(case: EvalCase) -> str:
        if case.query.task.is_regression:
            return worst_rating(float(case.gold))
        if case.query.task.is_classification:
            return UNPARSEABLE
        return ""

    def run(self, cases: Sequence[EvalCase], seeds: Optional[Sequence[int]] = None) -> MetricReport:
        """
        Evaluate cases under every seed.

        Returns:
            MetricReport: Seed-averaged metrics with per-seed values
        """
        if not cases:
            raise EmptyDataset("no evaluation cases")
        seeds = list(seeds if seeds is not None else self.config.EVAL_SEEDS)
        if not seeds:
            raise PreconditionError("at least one seed is required")

        task = cases[0].query.task
        template = get_template(task)
        stores = self.build_stores(cases)
        query_embeddings = self.embed_queries(cases)
        golds = [case.gold for case in cases]
        labels = self._label_set(cases, template)

        per_seed = []
        workers = self.config.EVAL_WORKERS
        for seed in seeds:
            jobs = [(case, stores[case.user_id], seed, emb) for case, emb in zip(cases, query_embeddings)]
            if workers <= 1:
                preds = [self.predict(*job) for job in jobs]
            else:
                with ThreadPoolExecutor(max_workers=workers) as executor:
                    preds = list(executor.map(lambda job: self.predict(*job), jobs))
            metrics = score_predictions(task, preds, golds, labels, self.config.EVAL_ROUGE_STEMMING)
            per_seed.append(metrics)
            self.predictions.extend(
                {"seed": seed, "query_id": case.query.query_id, "prediction": pred, "gold": case.gold}
                for case, pred in zip(cases, preds)
            )
            self.logger.info(f"Seed {seed}: " + ", ".join(f"{k}={v:.4f}" for k, v in metrics.items()))

        averaged = {name: float(np.mean([m[name] for m in per_seed])) for name in per_seed[0]}
        return MetricReport(
            task=task,
            n_cases=len(cases),
            metrics=averaged,
            per_seed=per_seed,
            seeds=seeds,
            failed_cases=self.stats["failed_cases"],
            unparseable=self.stats["unparseable"],
            config_snapshot=self.config.snapshot(),
        )

    @staticmethod
    def _label_set(cases: Sequence[EvalCase], template: TaskTemplate) -> Optional[List[str]]:
        if not cases[0].query.task.is_classification or cases[0].query.task.is_regression:
            return None
        labels: Dict[str, None] = {}
        for case in cases:
            for label in template.labels(case.query):
                labels.setdefault(label, None)
            labels.setdefault(str(case.gold), None)
        return list(labels)


def run_eval(
    dataset_path: Union[str, Path],
    config: AppConfig,
    seeds: Optional[Sequence[int]] = None,
    outputs_path: Optional[Union[str, Path]] = None,
    builder: Optional[MemoryBuilder] = None,
) -> MetricReport:
    """
    Evaluate a dataset file or directory.

    Args:
        dataset_path: LaMP directory / questions file, or JSON Lines cases
        config: Resolved configuration
        seeds: Seeds to average over; defaults to EVAL_SEEDS
        outputs_path: LaMP outputs file accompanying a questions file
        builder: Memory builder to reuse

    Raises:
        EmptyDataset: No cases
    """
    cases = load_dataset(dataset_path, outputs_path)
    return EvalRunner(config, builder).run(cases, seeds)
