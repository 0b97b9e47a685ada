"""Analytic ridge classifier with exemplar-free recursive task updates.

The classifier is fit in closed form on expanded features. For the first
batch the weights solve the ridge system

    W = (S'T S' + gamma I)^-1 S'T Y

and the inverse factor itself,

    A = (S'T S' + gamma I)^-1,

is carried forward as the feature autocorrelation state. Every later
batch refreshes ``A`` through the Woodbury identity using only that
batch's rows,

    A_t = A_{t-1} - A_{t-1} S'T (I + S' A_{t-1} S'T)^-1 S' A_{t-1},

then rewrites existing weight columns as ``W - A_t S'T S' W`` and appends
``A_t S'T Y`` for the batch's new classes. The result is algebraically
identical to re-solving the joint ridge problem over every batch seen so
far, without retaining any past rows; ``joint_solve`` computes that joint
solution directly and serves as the oracle in tests.

Column order follows class registration order: classes are assigned
columns in the order their batches first present them.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import (
    ClassCollisionError,
    DataError,
    InvalidRegularizerError,
    ShapeError,
    UntrainedClassifierError,
)


@dataclass(frozen=True)
class LabelMatrix:
    """One-hot targets for a batch plus the global ids its columns mean.

    Rows are strictly one-hot; columns may be all-zero (a class declared
    for registration without samples in this batch).
    """

    onehot: np.ndarray
    class_ids: tuple[int, ...]

    def __post_init__(self):
        y = np.asarray(self.onehot, dtype=np.float64)
        if y.ndim != 2:
            raise ShapeError("label matrix must be 2-D")
        if y.shape[1] != len(self.class_ids):
            raise ShapeError(
                f"{y.shape[1]} label columns but {len(self.class_ids)} class ids"
            )
        if len(set(self.class_ids)) != len(self.class_ids):
            raise ClassCollisionError("duplicate class ids within one batch")
        if y.size and not np.all((y == 0.0) | (y == 1.0)):
            raise DataError("label entries must be 0 or 1")
        if y.shape[0] and not np.all(y.sum(axis=1) == 1.0):
            raise DataError("each label row must contain exactly one 1")
        object.__setattr__(self, "onehot", y)
        object.__setattr__(self, "class_ids", tuple(int(c) for c in self.class_ids))

    @classmethod
    def from_labels(cls, labels, class_ids=None) -> "LabelMatrix":
        """Build one-hot targets from integer labels.

        ``class_ids`` fixes the column order (and may declare classes with
        no samples); by default columns follow sorted unique labels.
        """
        labels = np.asarray(labels, dtype=np.int64)
        if class_ids is None:
            class_ids = sorted(set(labels.tolist()))
        class_ids = [int(c) for c in class_ids]
        col = {c: j for j, c in enumerate(class_ids)}
        y = np.zeros((labels.shape[0], len(class_ids)))
        for i, lab in enumerate(labels.tolist()):
            if lab not in col:
                raise DataError(f"label {lab} not among declared class ids")
            y[i, col[lab]] = 1.0
        return cls(onehot=y, class_ids=tuple(class_ids))

    @property
    def rows(self) -> int:
        return self.onehot.shape[0]


@dataclass(frozen=True)
class Afam:
    """Feature autocorrelation state: the regularized inverse Gram matrix."""

    matrix: np.ndarray
    gamma: float

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class AnalyticClassifier:
    """Closed-form classifier state: weights, autocorrelation, registry."""

    weights: np.ndarray  # E x C
    afam: Afam
    class_registry: dict[int, int] = field(default_factory=dict)
    tasks_seen: int = 0

    @property
    def expansion_size(self) -> int:
        return self.weights.shape[0]

    @property
    def n_classes(self) -> int:
        return self.weights.shape[1]

    def column_classes(self) -> list[int]:
        """Global class ids in column order."""
        out = [0] * len(self.class_registry)
        for cid, col in self.class_registry.items():
            out[col] = cid
        return out

    def state_elements(self) -> int:
        """Persistent cross-task state size: E^2 + E*C + registry entries."""
        e, c = self.weights.shape
        return e * e + e * c + len(self.class_registry)


def _check_batch(s: np.ndarray, y: LabelMatrix) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2:
        raise ShapeError("feature matrix must be 2-D")
    if s.shape[0] != y.rows:
        raise ShapeError(f"{s.shape[0]} feature rows but {y.rows} label rows")
    if not np.all(np.isfinite(s)):
        raise DataError("feature matrix contains non-finite entries")
    return s


def _spd_factor(g: np.ndarray):
    return cho_factor(g, lower=True)


def _materialize_inverse(factor, size: int) -> np.ndarray:
    inv = cho_solve(factor, np.eye(size))
    return (inv + inv.T) / 2.0


def recalibrate(s0_expanded: np.ndarray, y0: LabelMatrix, gamma: float) -> AnalyticClassifier:
    """Fit the first-task ridge solution and materialize its inverse factor.

    The weight solve goes through a Cholesky factorization of the
    regularized Gram matrix; only the carried autocorrelation state is
    materialized as an explicit inverse.
    """
    if gamma <= 0:
        raise InvalidRegularizerError(f"ridge parameter must be > 0, got {gamma}")
    s = _check_batch(s0_expanded, y0)
    if s.shape[0] < 1:
        raise ShapeError("recalibration needs at least one sample")
    e = s.shape[1]
    factor = _spd_factor(s.T @ s + gamma * np.eye(e))
    weights = cho_solve(factor, s.T @ y0.onehot)
    afam = Afam(matrix=_materialize_inverse(factor, e), gamma=float(gamma))
    registry = {cid: j for j, cid in enumerate(y0.class_ids)}
    return AnalyticClassifier(weights=weights, afam=afam, class_registry=registry, tasks_seen=1)


def update(
    c: AnalyticClassifier,
    s_t_expanded: np.ndarray,
    y_t: LabelMatrix,
    allow_registered: bool = False,
) -> AnalyticClassifier:
    """Absorb one task's batch; touches no data from earlier tasks.

    Returns a new classifier whose weights equal the joint ridge solution
    over every batch seen so far. By default the batch's classes must be
    new; with ``allow_registered`` a batch may re-present registered
    classes (sample streaming), whose columns then also receive the
    batch's label correlations.
    """
    s = _check_batch(s_t_expanded, y_t)
    e = c.expansion_size
    if s.shape[1] != e:
        raise ShapeError(f"expected expanded width {e}, got {s.shape[1]}")
    seen = [cid for cid in y_t.class_ids if cid in c.class_registry]
    if seen and not allow_registered:
        raise ClassCollisionError(f"class ids already registered: {seen}")
    new_ids = [cid for cid in y_t.class_ids if cid not in c.class_registry]

    n = s.shape[0]
    if n == 0 and not new_ids:
        return c
    if n == 0:
        # Registration-only batch: no rows, so the autocorrelation and the
        # existing columns are untouched and new columns are exactly zero.
        weights = np.hstack([c.weights, np.zeros((e, len(new_ids)))])
        registry = dict(c.class_registry)
        for cid in new_ids:
            registry[cid] = len(registry)
        return replace(c, weights=weights, class_registry=registry, tasks_seen=c.tasks_seen + 1)

    a_prev = c.afam.matrix
    sa = s @ a_prev  # n x E
    k_factor = _spd_factor(np.eye(n) + sa @ s.T)
    a_new = a_prev - (sa.T @ cho_solve(k_factor, sa))
    a_new = (a_new + a_new.T) / 2.0  # bound asymmetry drift over long runs

    ast = a_new @ s.T  # E x n
    weights = c.weights - ast @ (s @ c.weights)
    correlations = ast @ y_t.onehot  # E x k, columns ordered as y_t.class_ids
    registry = dict(c.class_registry)
    new_cols = []
    for j, cid in enumerate(y_t.class_ids):
        if cid in registry:
            weights[:, registry[cid]] += correlations[:, j]
        else:
            registry[cid] = len(registry)
            new_cols.append(correlations[:, j])
    if new_cols:
        weights = np.hstack([weights, np.column_stack(new_cols)])
    return AnalyticClassifier(
        weights=weights,
        afam=Afam(matrix=a_new, gamma=c.afam.gamma),
        class_registry=registry,
        tasks_seen=c.tasks_seen + 1,
    )


def joint_solve(batches, gamma: float) -> AnalyticClassifier:
    """Solve the ridge problem over all batches at once (the oracle path).

    Targets stack block-diagonally: each batch's labels occupy its own
    classes' columns and contribute zero everywhere else, with columns
    placed by global registration order.
    """
    if gamma <= 0:
        raise InvalidRegularizerError(f"ridge parameter must be > 0, got {gamma}")
    if not batches:
        raise ShapeError("joint solve needs at least one batch")
    checked = []
    e = None
    registry: dict[int, int] = {}
    for s, y in batches:
        s = _check_batch(s, y)
        if e is None:
            e = s.shape[1]
        elif s.shape[1] != e:
            raise ShapeError(f"inconsistent expanded widths: {e} vs {s.shape[1]}")
        for cid in y.class_ids:
            if cid in registry:
                raise ClassCollisionError(f"class id {cid} appears in more than one batch")
            registry[cid] = len(registry)
        checked.append((s, y))
    gram = gamma * np.eye(e)
    rhs = np.zeros((e, len(registry)))
    for s, y in checked:
        gram += s.T @ s
        cols = [registry[cid] for cid in y.class_ids]
        rhs[:, cols] += s.T @ y.onehot
    factor = _spd_factor(gram)
    weights = cho_solve(factor, rhs)
    afam = Afam(matrix=_materialize_inverse(factor, e), gamma=float(gamma))
    return AnalyticClassifier(
        weights=weights, afam=afam, class_registry=registry, tasks_seen=len(checked)
    )


def afam_direct(batches, gamma: float, expansion_size: int | None = None) -> Afam:
    """Regularized inverse Gram over the given batches, computed directly.

    With no batches the expansion size must be given and the result is
    ``(1/gamma) I``. This is the reference the recursive updates are
    checked against.
    """
    if gamma <= 0:
        raise InvalidRegularizerError(f"ridge parameter must be > 0, got {gamma}")
    e = expansion_size
    mats = []
    for s in batches:
        s = np.asarray(s, dtype=np.float64)
        if s.ndim != 2:
            raise ShapeError("feature matrix must be 2-D")
        if e is None:
            e = s.shape[1]
        elif s.shape[1] != e:
            raise ShapeError(f"inconsistent expanded widths: {e} vs {s.shape[1]}")
        mats.append(s)
    if e is None:
        raise ShapeError("expansion size required when no batches are given")
    gram = gamma * np.eye(e)
    for s in mats:
        gram += s.T @ s
    return Afam(matrix=_materialize_inverse(_spd_factor(gram), e), gamma=float(gamma))


def predict(c: AnalyticClassifier, x_expanded: np.ndarray) -> np.ndarray:
    """Global class id of the best-scoring column per row.

    Ties resolve to the lowest column index, i.e. the earliest-registered
    class, so predictions are deterministic.
    """
    if c.n_classes < 1:
        raise UntrainedClassifierError("classifier has no registered classes")
    x = np.asarray(x_expanded, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != c.expansion_size:
        raise ShapeError(f"expected n x {c.expansion_size} features, got {x.shape}")
    cols = np.argmax(x @ c.weights, axis=1)
    ids = np.asarray(c.column_classes(), dtype=np.int64)
    return ids[cols]
