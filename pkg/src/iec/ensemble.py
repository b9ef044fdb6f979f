"""The imbalanced ensemble classifier (IEC) pipeline.

Workflow: grow an unpruned HDDT on the full feature set, keep the features it
found important, build the network input matrix from those features plus the
tree's own prediction as one extra 0/1 column, min-max scale, size the hidden
layer from the training count, and train the one-hidden-layer network.  At
prediction time the same augmentation and fitted scaling are replayed before
thresholding the network output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from iec import ann, hddt
from iec.ann import MlpModel, TrainConfig
from iec.data import (CATEGORICAL, Dataset, ScalingParams,
                      min_max_apply_matrix, min_max_fit_matrix)
from iec.hddt import HddtModel, TreeConfig


@dataclass(frozen=True, eq=False)
class IecModel:
    """Fitted tree + feature selection + scaler + network."""

    tree: HddtModel
    selected_features: tuple[int, ...]
    scaling: ScalingParams
    net: MlpModel
    d_m: int

    def __post_init__(self):
        if not self.selected_features:
            raise ValueError("selected_features cannot be empty")
        if self.net.input_dim != self.d_m:
            raise ValueError(
                f"network expects {self.net.input_dim} inputs but d_m is {self.d_m}"
            )


def expanded_width(specs, selected) -> int:
    """Network input columns contributed by the selected features (no OP)."""
    return sum(
        len(specs[j].categories) if specs[j].kind == CATEGORICAL else 1
        for j in selected
    )


def expand_features(rows: np.ndarray, specs, selected) -> np.ndarray:
    """One-hot expand the selected features into a plain numeric matrix.

    Continuous features pass through; a categorical feature with m categories
    becomes m indicator columns.  Column order follows ``selected``.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != len(specs):
        raise ValueError(f"rows must be n x {len(specs)}")
    blocks = []
    for j in selected:
        spec = specs[j]
        col = rows[:, j]
        if spec.kind == CATEGORICAL:
            idx = col.astype(np.int64)
            if not ((idx == col) & (idx >= 0) & (idx < len(spec.categories))).all():
                raise ValueError(f"invalid category index in feature {spec.name!r}")
            onehot = np.zeros((rows.shape[0], len(spec.categories)))
            onehot[np.arange(rows.shape[0]), idx] = 1.0
            blocks.append(onehot)
        else:
            blocks.append(col[:, np.newaxis])
    return np.hstack(blocks)


def augment(rows: np.ndarray, tree: HddtModel, selected) -> np.ndarray:
    """Network input matrix: expanded selected features, then the tree's
    prediction (the OP column) as a final 0/1 column.
    """
    if not selected:
        raise ValueError("feature selection cannot be empty")
    expanded = expand_features(rows, tree.specs, selected)
    op = hddt.predict(tree, rows).astype(np.float64)
    return np.hstack([expanded, op[:, np.newaxis]])


def fit(train: Dataset, tree_config: TreeConfig | None = None,
        train_config: TrainConfig | None = None) -> IecModel:
    """Fit the full IEC pipeline on a training dataset."""
    neg, pos = train.class_counts()
    if neg == 0 or pos == 0:
        raise ValueError("training data must contain both classes")

    tree = hddt.grow_tree(train, tree_config)
    selected = hddt.select_features(tree)
    if not selected:
        # Degenerate tree (single leaf): keep every raw feature; the OP column
        # is then the leaf's constant label.
        selected = list(range(train.p))

    matrix = augment(train.rows, tree, selected)
    scaling = min_max_fit_matrix(matrix)
    scaled = min_max_apply_matrix(matrix, scaling)
    d_m = matrix.shape[1]
    k = ann.hidden_neuron_count(train.n, d_m)
    net = ann.train(scaled, train.labels, k, train_config or TrainConfig())
    return IecModel(tree, tuple(selected), scaling, net, d_m)


def predict(model: IecModel, rows: np.ndarray) -> np.ndarray:
    """Predicted 0/1 labels for rows conforming to the tree's feature schema."""
    matrix = augment(rows, model.tree, model.selected_features)
    scaled = min_max_apply_matrix(matrix, model.scaling)
    return ann.classify_batch(model.net, scaled)


def model_to_dict(model: IecModel) -> dict:
    return {
        "format_version": 1,
        "kind": "iec",
        "tree": hddt.model_to_dict(model.tree),
        "selected_features": list(model.selected_features),
        "scaling": model.scaling.to_dict(),
        "net": ann.model_to_dict(model.net),
        "d_m": model.d_m,
    }


def model_from_dict(d: dict) -> IecModel:
    if d.get("format_version") != 1 or d.get("kind") != "iec":
        raise ValueError("not a supported classifier model document")
    return IecModel(
        tree=hddt.model_from_dict(d["tree"]),
        selected_features=tuple(int(j) for j in d["selected_features"]),
        scaling=ScalingParams.from_dict(d["scaling"]),
        net=ann.model_from_dict(d["net"]),
        d_m=int(d["d_m"]),
    )
