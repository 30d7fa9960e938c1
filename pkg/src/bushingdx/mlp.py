"""Feed-forward network baseline: 10 inputs, 7 hidden neurons, 1 output.

Logistic sigmoid on both layers, mean-squared-error loss, full-batch
gradient descent. Features are the ten gas concentrations scaled by the
onset of each gas's Dangerous plateau, so a value of 1.0 means "just
dangerous"; values above 1 are expected and carried as-is. A score above
0.5 classifies the bushing as Reject.
"""

import json
import math
import pathlib
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bushingdx.defuzz import Decision, REJECT_ABOVE
from bushingdx.fuzzify import GasReading, compute_tdcg
from bushingdx.membership import GasId, catalog_entry

N_INPUTS = 10
N_HIDDEN = 7
N_OUTPUTS = 1


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def dangerous_onsets() -> np.ndarray:
    """Per-gas normalization divisors: onset of each Dangerous plateau."""
    return np.array([catalog_entry(gas).dangerous_onset for gas in GasId], dtype=float)


def raw_features(reading: GasReading) -> np.ndarray:
    """Unnormalized 10-vector in canonical gas order (TDCG recomputed)."""
    tdcg = compute_tdcg(reading)
    values = [reading.value(gas) if gas is not GasId.TDCG else tdcg for gas in GasId]
    return np.array(values, dtype=float)


def normalize_features(reading: GasReading) -> np.ndarray:
    """Feature vector scaled by the catalog's dangerous-onset divisors."""
    return raw_features(reading) / dangerous_onsets()


@dataclass(eq=False)
class MlpModel:
    """Network weights plus the feature-normalization divisors."""

    w1: np.ndarray  # (10, 7)
    b1: np.ndarray  # (7,)
    w2: np.ndarray  # (7, 1)
    b2: np.ndarray  # (1,)
    norm: np.ndarray  # (10,) strictly positive divisors

    def __post_init__(self) -> None:
        self.w1 = np.asarray(self.w1, dtype=float)
        self.b1 = np.asarray(self.b1, dtype=float)
        self.w2 = np.asarray(self.w2, dtype=float)
        self.b2 = np.asarray(self.b2, dtype=float)
        self.norm = np.asarray(self.norm, dtype=float)
        expected = {
            "w1": (N_INPUTS, N_HIDDEN),
            "b1": (N_HIDDEN,),
            "w2": (N_HIDDEN, N_OUTPUTS),
            "b2": (N_OUTPUTS,),
            "norm": (N_INPUTS,),
        }
        for name, shape in expected.items():
            actual = getattr(self, name).shape
            if actual != shape:
                raise ValueError(f"{name} must have shape {shape}, got {actual}")
        for name in ("w1", "b1", "w2", "b2"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} contains non-finite weights")
        if not np.all(np.isfinite(self.norm)) or not np.all(self.norm > 0):
            raise ValueError("norm divisors must be finite and strictly positive")


def init_model(seed: int) -> MlpModel:
    """Deterministic small-weight initialization; same seed, same model."""
    rng = np.random.default_rng(seed)
    return MlpModel(
        w1=rng.uniform(-0.5, 0.5, size=(N_INPUTS, N_HIDDEN)),
        b1=rng.uniform(-0.5, 0.5, size=(N_HIDDEN,)),
        w2=rng.uniform(-0.5, 0.5, size=(N_HIDDEN, N_OUTPUTS)),
        b2=rng.uniform(-0.5, 0.5, size=(N_OUTPUTS,)),
        norm=dangerous_onsets(),
    )


def _forward_batch(model: MlpModel, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    hidden = _sigmoid(X @ model.w1 + model.b1)
    out = _sigmoid(hidden @ model.w2 + model.b2)
    return out[:, 0], hidden


def forward(model: MlpModel, features: Sequence[float]) -> float:
    """Network score in (0, 1) for one normalized feature vector."""
    x = np.asarray(features, dtype=float)
    if x.shape != (N_INPUTS,):
        raise ValueError(f"features must have shape ({N_INPUTS},), got {x.shape}")
    out, _ = _forward_batch(model, x[None, :])
    return float(out[0])


def mse_loss(model: MlpModel, X: np.ndarray, y: np.ndarray) -> float:
    """Mean squared error of the network over a batch."""
    out, _ = _forward_batch(model, X)
    return float(np.mean((out - y) ** 2))


def loss_gradients(model: MlpModel, X: np.ndarray, y: np.ndarray) -> Dict[str, np.ndarray]:
    """Backpropagated gradients of the MSE loss for every parameter array."""
    n = X.shape[0]
    out, hidden = _forward_batch(model, X)
    # d(mse)/d(out) with out = sigmoid(z2)
    delta_out = (2.0 / n) * (out - y) * out * (1.0 - out)  # (n,)
    delta_out = delta_out[:, None]  # (n, 1)
    grad_w2 = hidden.T @ delta_out
    grad_b2 = delta_out.sum(axis=0)
    delta_hidden = (delta_out @ model.w2.T) * hidden * (1.0 - hidden)  # (n, 7)
    grad_w1 = X.T @ delta_hidden
    grad_b1 = delta_hidden.sum(axis=0)
    return {"w1": grad_w1, "b1": grad_b1, "w2": grad_w2, "b2": grad_b2}


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Normalized feature rows with Accept(0)/Reject(1) labels."""

    features: np.ndarray  # (n, 10)
    labels: np.ndarray  # (n,) of 0/1
    bushing_ids: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", np.asarray(self.features, dtype=float))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=float))
        if self.features.ndim != 2 or self.features.shape[1] != N_INPUTS:
            raise ValueError(f"features must have shape (n, {N_INPUTS})")
        if self.features.shape[0] == 0:
            raise ValueError("dataset must not be empty")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must align with feature rows")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")
        if not np.all(np.isin(self.labels, (0.0, 1.0))):
            raise ValueError("labels must be 0 (Accept) or 1 (Reject)")

    def __len__(self) -> int:
        return self.features.shape[0]


def build_dataset(
    readings: Sequence[GasReading], decisions: Sequence[Decision], norm: Optional[np.ndarray] = None
) -> LabeledDataset:
    """Dataset from readings and their target decisions; Monitor is not a class."""
    if len(readings) != len(decisions):
        raise ValueError("one decision per reading required")
    for d in decisions:
        if d is Decision.MONITOR:
            raise ValueError("the network is a two-class Accept/Reject model; Monitor is not a training label")
    divisors = dangerous_onsets() if norm is None else np.asarray(norm, dtype=float)
    features = np.array([raw_features(r) / divisors for r in readings])
    labels = np.array([1.0 if d is Decision.REJECT else 0.0 for d in decisions])
    return LabeledDataset(features=features, labels=labels, bushing_ids=tuple(r.bushing_id for r in readings))


def train(
    model: MlpModel, data: LabeledDataset, epochs: int, learning_rate: float
) -> Tuple[MlpModel, List[float]]:
    """Full-batch gradient descent; returns the model and per-epoch losses.

    The loss list holds the MSE after each of the ``epochs`` updates.
    Deterministic given the initial model, data and hyperparameters.
    """
    if epochs < 1:
        raise ValueError("epochs must be at least 1")
    if not (math.isfinite(learning_rate) and learning_rate > 0):
        raise ValueError("learning_rate must be positive")
    classes = set(np.unique(data.labels))
    if classes != {0.0, 1.0}:
        raise ValueError("training data must contain both Accept and Reject examples")
    losses: List[float] = []
    for _ in range(epochs):
        grads = loss_gradients(model, data.features, data.labels)
        model.w1 -= learning_rate * grads["w1"]
        model.b1 -= learning_rate * grads["b1"]
        model.w2 -= learning_rate * grads["w2"]
        model.b2 -= learning_rate * grads["b2"]
        losses.append(mse_loss(model, data.features, data.labels))
    return model, losses


def score(model: MlpModel, reading: GasReading) -> float:
    """Network score for a raw reading, normalized with the model's divisors."""
    return forward(model, raw_features(reading) / model.norm)


def classify(model: MlpModel, reading: GasReading) -> Decision:
    """Reject when the score exceeds 0.5; a tie at exactly 0.5 accepts."""
    return Decision.REJECT if score(model, reading) > 0.5 else Decision.ACCEPT


def neuro_fuzzy_classify(rank: float) -> Decision:
    """Two-class decision over the crisp fuzzy rank (reject above 30)."""
    if not math.isfinite(rank):
        raise ValueError(f"rank must be finite, got {rank!r}")
    return Decision.REJECT if rank > REJECT_ABOVE else Decision.ACCEPT


# --- persistence ------------------------------------------------------------


def model_to_json(model: MlpModel, metadata: Optional[dict] = None) -> str:
    """Serialize a model (weights row-major) with optional training metadata."""
    doc = {
        "shapes": {
            "w1": [N_INPUTS, N_HIDDEN],
            "b1": [N_HIDDEN],
            "w2": [N_HIDDEN, N_OUTPUTS],
            "b2": [N_OUTPUTS],
        },
        "weights": {
            "w1": model.w1.flatten().tolist(),
            "b1": model.b1.tolist(),
            "w2": model.w2.flatten().tolist(),
            "b2": model.b2.tolist(),
        },
        "norm": model.norm.tolist(),
        "metadata": metadata or {},
    }
    return json.dumps(doc, indent=2) + "\n"


def model_from_json(text: str) -> Tuple[MlpModel, dict]:
    """Inverse of model_to_json; returns the model and its metadata."""
    doc = json.loads(text)
    weights = doc["weights"]
    model = MlpModel(
        w1=np.array(weights["w1"], dtype=float).reshape(N_INPUTS, N_HIDDEN),
        b1=np.array(weights["b1"], dtype=float),
        w2=np.array(weights["w2"], dtype=float).reshape(N_HIDDEN, N_OUTPUTS),
        b2=np.array(weights["b2"], dtype=float),
        norm=np.array(doc["norm"], dtype=float),
    )
    return model, doc.get("metadata", {})


def save_model(model: MlpModel, path, metadata: Optional[dict] = None) -> None:
    pathlib.Path(path).write_text(model_to_json(model, metadata), encoding="utf-8")


def load_model(path) -> Tuple[MlpModel, dict]:
    return model_from_json(pathlib.Path(path).read_text(encoding="utf-8"))
