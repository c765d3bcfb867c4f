"""Bag-of-words vectorization and binary logistic regression internals.

Shared by the sentence classifier and the attribute mapper. Training is
full-batch gradient descent with L2 regularization; with zero
initialization and a fixed epoch budget it is fully deterministic.
"""
from __future__ import annotations

from collections import Counter

import numpy as np
from scipy import sparse
from scipy.special import expit

L2_STRENGTH = 1.0
LEARNING_RATE = 0.1
MAX_EPOCHS = 500
TOL = 1e-6


def sentence_tokens(sentence) -> list[str]:
    return [t.lower for t in sentence.tokens]


def build_vocabulary(token_lists) -> dict[str, int]:
    vocab = sorted({tok for tokens in token_lists for tok in tokens})
    return {tok: i for i, tok in enumerate(vocab)}


def count_matrix(token_lists, vocabulary: dict[str, int]) -> sparse.csr_matrix:
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for tokens in token_lists:
        counts = Counter(tok for tok in tokens if tok in vocabulary)
        for tok in sorted(counts):
            indices.append(vocabulary[tok])
            data.append(float(counts[tok]))
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (data, indices, indptr),
        shape=(len(token_lists), len(vocabulary)),
        dtype=np.float64,
    )


def count_vector(tokens, vocabulary: dict[str, int]) -> np.ndarray:
    vec = np.zeros(len(vocabulary))
    for tok in tokens:
        idx = vocabulary.get(tok)
        if idx is not None:
            vec[idx] += 1.0
    return vec


def fit_binary_lr(X: sparse.csr_matrix, y: np.ndarray,
                  l2: float = L2_STRENGTH,
                  learning_rate: float = LEARNING_RATE,
                  max_epochs: int = MAX_EPOCHS,
                  tol: float = TOL) -> tuple[np.ndarray, float]:
    """Fit one binary logistic regression; returns (weights, intercept).

    Loss: mean cross-entropy + l2/(2n) * ||w||^2. Stops when consecutive
    losses differ by less than ``tol`` or after ``max_epochs`` epochs.
    """
    n = X.shape[0]
    w = np.zeros(X.shape[1])
    b = 0.0
    prev_loss = np.inf
    for _ in range(max_epochs):
        p = expit(X @ w + b)
        clipped = np.clip(p, 1e-12, 1.0 - 1e-12)
        loss = (-(y * np.log(clipped) + (1.0 - y) * np.log1p(-clipped)).mean()
                + 0.5 * l2 * float(w @ w) / n)
        if abs(prev_loss - loss) < tol:
            break
        prev_loss = loss
        err = p - y
        w = w - learning_rate * (X.T @ err / n + l2 * w / n)
        b = b - learning_rate * float(err.mean())
    return w, b
