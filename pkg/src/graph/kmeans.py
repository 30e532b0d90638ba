"""
Seeded K-means (Lloyd iterations, k-means++ initialization).

Distances are Euclidean; with ``normalize=True`` rows are L2-normalized first,
which orders pairs the same way cosine similarity does.
"""

import logging
from typing import Sequence, Union

import numpy as np

from src.core.exceptions import PreconditionError
from src.models import ClusterAssignment, Embedding

logger = logging.getLogger(__name__)

TOLERANCE = 1e-6
MAX_ITERATIONS = 100


def as_matrix(embeddings: Union[Sequence[Embedding], np.ndarray, Sequence[Sequence[float]]]) -> np.ndarray:
    if isinstance(embeddings, np.ndarray):
        return embeddings.astype(np.float64)
    rows = [e.vector if isinstance(e, Embedding) else list(e) for e in embeddings]
    dims = {len(row) for row in rows}
    if len(dims) > 1:
        raise PreconditionError(f"embeddings have mixed dimensions {sorted(dims)}")
    return np.asarray(rows, dtype=np.float64)


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def _kmeans_plus_plus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        total = closest.sum()
        if total <= 0:
            break
        index = int(rng.choice(n, p=closest / total))
        chosen.append(index)
        closest = np.minimum(closest, ((points - points[index]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _repair_empty(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Move the point farthest from its centroid (taken from a cluster of 2+ members) into each empty cluster."""
    k = len(centroids)
    for cluster in range(k):
        counts = np.bincount(labels, minlength=k)
        if counts[cluster] > 0:
            continue
        distances = ((points - centroids[labels]) ** 2).sum(axis=1)
        donors = counts[labels] > 1
        if not donors.any():
            break
        distances = np.where(donors, distances, -1.0)
        point = int(np.argmax(distances))
        labels[point] = cluster
        centroids[cluster] = points[point]
    return labels


def _update_centroids(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    updated = centroids.copy()
    for cluster in range(len(centroids)):
        members = points[labels == cluster]
        if len(members):
            updated[cluster] = members.mean(axis=0)
    return updated


def _relabel_by_first_occurrence(labels: np.ndarray, centroids: np.ndarray):
    order = list(dict.fromkeys(labels.tolist()))
    order += [cluster for cluster in range(len(centroids)) if cluster not in order]
    mapping = {old: new for new, old in enumerate(order)}
    return np.array([mapping[label] for label in labels.tolist()], dtype=int), centroids[order]


def cluster_behaviors(embeddings, k: int, seed: int, normalize: bool = True) -> ClusterAssignment:
    """
    Cluster behavior embeddings with seeded K-means.

    Args:
        embeddings: Non-empty list of Embedding (or a 2-D array) of uniform dimension
        k: Requested number of clusters; the effective k is min(k, number of distinct rows)
        seed: Seed of the k-means++ initialization
        normalize: L2-normalize rows before clustering

    Returns:
        ClusterAssignment: Labels in [0, k) numbered by first occurrence, every
        cluster non-empty, centroids in the clustered space

    Raises:
        PreconditionError: Empty input, k < 1 or mixed dimensions
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    points = as_matrix(embeddings)
    if points.ndim != 2 or len(points) == 0:
        raise PreconditionError("cluster_behaviors needs at least one embedding")
    if normalize:
        points = normalize_rows(points)

    k_eff = min(k, len(np.unique(points, axis=0)))
    rng = np.random.default_rng(seed)
    centroids = _kmeans_plus_plus(points, k_eff, rng)

    labels = np.zeros(len(points), dtype=int)
    for iteration in range(MAX_ITERATIONS):
        labels = np.argmin(_squared_distances(points, centroids), axis=1)
        labels = _repair_empty(points, centroids, labels)
        updated = _update_centroids(points, labels, centroids)
        shift = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if shift < TOLERANCE:
            logger.debug(f"K-means converged after {iteration + 1} iterations")
            break

    labels = np.argmin(_squared_distances(points, centroids), axis=1)
    labels = _repair_empty(points, centroids, labels)
    centroids = _update_centroids(points, labels, centroids)
    labels, centroids = _relabel_by_first_occurrence(labels, centroids)
    inertia = float(((points - centroids[labels]) ** 2).sum())

    return ClusterAssignment(
        k=k_eff,
        labels=labels.tolist(),
        centroids=centroids.tolist(),
        inertia=max(inertia, 0.0),
        seed=seed,
    )
