"""Pool-based batch active learning over precomputed graph embeddings.

The engine iterates fit -> score -> query -> grow: a GP is tuned on the
labeled rows, scored by Pearson correlation on the held-out test rows, and
a batch of unlabeled rows is chosen by the configured strategy. Test
labels flow through a capability wrapper that only releases them inside an
explicit scoring context, so no query strategy can touch them.

Ids are corpus row positions. All tie-breaks resolve to the lowest id and
all randomness is seeded, so runs are bit-reproducible.
"""

import csv
import json
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from . import gpr
from .errors import ConfigError, PerfalError, TestLabelLeak

logger = logging.getLogger(__name__)

STRATEGIES = ("random", "coreset", "variance", "qbc")
DEFAULT_COMMITTEE = 10


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint labeled/unlabeled/test id sets covering a corpus."""

    L: tuple
    U: tuple
    T: tuple
    iteration: int = 0

    def __post_init__(self):
        object.__setattr__(self, "L", tuple(sorted(int(i) for i in self.L)))
        object.__setattr__(self, "U", tuple(sorted(int(i) for i in self.U)))
        object.__setattr__(self, "T", tuple(sorted(int(i) for i in self.T)))
        total = len(self.L) + len(self.U) + len(self.T)
        if len(set(self.L) | set(self.U) | set(self.T)) != total:
            raise ConfigError("split parts must be disjoint")

    @property
    def pool_size(self):
        return len(self.L) + len(self.U)


class LabelStore:
    """Capability wrapper separating training labels from test labels.

    training_labels refuses test ids outright; test_labels only works
    inside a scoring() context. Read counters let callers prove that no
    test label was touched while querying.
    """

    def __init__(self, labels, test_ids):
        self._labels = np.asarray(labels, dtype=float)
        self._test = frozenset(int(i) for i in test_ids)
        self.train_reads = 0
        self.test_reads = 0
        self._scoring_depth = 0

    @contextmanager
    def scoring(self):
        self._scoring_depth += 1
        try:
            yield self
        finally:
            self._scoring_depth -= 1

    def training_labels(self, ids):
        ids = [int(i) for i in ids]
        leaked = [i for i in ids if i in self._test]
        if leaked:
            raise TestLabelLeak(f"training read of test ids {leaked[:5]}")
        self.train_reads += len(ids)
        return self._labels[ids]

    def test_labels(self, ids):
        if self._scoring_depth == 0:
            raise TestLabelLeak("test labels requested outside a scoring context")
        self.test_reads += len(ids)
        return self._labels[[int(i) for i in ids]]


def make_splits(corpus_size, test_frac, l0_size, seed):
    """Uniform seeded shuffle into test, initial-labeled, and unlabeled."""
    if not 0 < test_frac < 1:
        raise ConfigError(f"test fraction must be in (0, 1), got {test_frac}")
    if l0_size < 1:
        raise ConfigError(f"initial labeled size must be >= 1, got {l0_size}")
    if l0_size + 1 > (1.0 - test_frac) * corpus_size:
        raise ConfigError(
            f"l0={l0_size} leaves no unlabeled pool in a corpus of "
            f"{corpus_size} at test fraction {test_frac}"
        )
    test_n = int(round(test_frac * corpus_size))
    perm = np.random.default_rng(seed).permutation(corpus_size)
    return DatasetSplit(
        L=perm[test_n : test_n + l0_size],
        U=perm[test_n + l0_size :],
        T=perm[:test_n],
    )


def make_passive_split(split):
    """Fold the unlabeled pool into L: the no-querying baseline split."""
    return DatasetSplit(L=split.L + split.U, U=(), T=split.T)


def select_random(U, b, seed):
    """Uniform without-replacement batch from U, deterministic per seed."""
    U = sorted(int(i) for i in U)
    if b > len(U):
        raise ConfigError(f"batch {b} exceeds pool {len(U)}")
    if b == 0:
        return []
    rng = np.random.default_rng(seed)
    return [int(i) for i in rng.choice(U, size=b, replace=False)]


def select_coreset(X_L, X_U, b, u_ids=None):
    """Greedy k-Center batch: repeatedly take the point farthest from
    the labeled set plus everything already picked. Ties and the empty-L
    start resolve to the lowest id."""
    X_U = np.asarray(X_U, dtype=float)
    n = len(X_U)
    if u_ids is None:
        u_ids = list(range(n))
    if len(u_ids) != n:
        raise ConfigError(f"{len(u_ids)} ids for {n} rows")
    if b > n:
        raise ConfigError(f"batch {b} exceeds pool {n}")
    order = np.argsort(u_ids, kind="stable")
    X = X_U[order]
    ids = [int(u_ids[i]) for i in order]
    if X_L is not None and len(X_L):
        dmin = cdist(X, np.asarray(X_L, dtype=float)).min(axis=1)
    else:
        dmin = np.full(n, np.inf)
    picked = []
    for _ in range(b):
        j = int(np.argmax(dmin))
        picked.append(ids[j])
        dmin = np.minimum(dmin, np.linalg.norm(X - X[j], axis=1))
        dmin[j] = -1.0
    return picked


def _top_by_score(scores, u_ids, b):
    """Ids of the b largest scores, ties broken by lowest id."""
    u_ids = np.asarray(u_ids)
    order = np.lexsort((u_ids, -np.asarray(scores, dtype=float)))
    return [int(i) for i in u_ids[order[:b]]]


def select_variance(model, X_U, b, u_ids=None):
    """Batch of the b largest predictive variances."""
    X_U = np.asarray(X_U, dtype=float)
    if u_ids is None:
        u_ids = list(range(len(X_U)))
    if b > len(X_U):
        raise ConfigError(f"batch {b} exceeds pool {len(X_U)}")
    _, variances = gpr.predict(model, X_U)
    return _top_by_score(variances, u_ids, b)


def select_qbc(X_L, y_L, X_U, b, committee=DEFAULT_COMMITTEE, seed=0, u_ids=None, kernel=None):
    """Batch of the b points the bootstrap committee disagrees on most.

    Each member fits a bootstrap resample of L, reusing the caller's
    kernel hyperparameters when given. Disagreement is the variance of
    member posterior means. If fewer than two members survive degenerate
    resamples, falls back to variance selection with a logged warning.
    """
    if committee < 2:
        raise ConfigError(f"committee must be >= 2, got {committee}")
    X_L = np.asarray(X_L, dtype=float)
    y_L = np.asarray(y_L, dtype=float)
    X_U = np.asarray(X_U, dtype=float)
    if len(X_L) < 2:
        raise ConfigError("qbc needs at least 2 labeled rows")
    if u_ids is None:
        u_ids = list(range(len(X_U)))
    if b > len(X_U):
        raise ConfigError(f"batch {b} exceeds pool {len(X_U)}")
    rng = np.random.default_rng(seed)
    member_means = []
    for _ in range(committee):
        idx = rng.integers(0, len(X_L), size=len(X_L))
        if len(np.unique(X_L[idx], axis=0)) < 2:
            continue  # single-point resample carries no signal
        member = gpr.fit(X_L[idx], y_L[idx], kernel=kernel, tune=False)
        member_means.append(gpr.predict(member, X_U)[0])
    if len(member_means) < 2:
        logger.warning(
            "qbc committee degenerate (%d usable members); using variance",
            len(member_means),
        )
        model = gpr.fit(X_L, y_L, kernel=kernel, tune=kernel is None)
        return select_variance(model, X_U, b, u_ids=u_ids)
    disagreement = np.var(np.stack(member_means), axis=0)
    return _top_by_score(disagreement, u_ids, b)


@dataclass
class AlRun:
    """One active-learning trajectory: per-iteration records plus config."""

    records: list = field(default_factory=list)  # (labels_used, pearson, queried)
    config: dict = field(default_factory=dict)
    seed: int = 0
    error: str = None

    def final_pearson(self):
        return self.records[-1][1] if self.records else float("nan")

    def save(self, path):
        path = Path(path)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "labels_used", "pearson", "queried_ids"])
            for it, (used, r, queried) in enumerate(self.records):
                writer.writerow(
                    [it, used, "%.10g" % r, ";".join(str(q) for q in queried)]
                )
        sidecar = {"config": self.config, "seed": self.seed, "error": self.error}
        path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")

    @classmethod
    def load(cls, path):
        path = Path(path)
        records = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                queried = tuple(
                    int(q) for q in rec["queried_ids"].split(";") if q != ""
                )
                records.append((int(rec["labels_used"]), float(rec["pearson"]), queried))
        meta = {"config": {}, "seed": 0, "error": None}
        sidecar = path.with_suffix(".json")
        if sidecar.exists():
            meta.update(json.loads(sidecar.read_text()))
        return cls(
            records=records,
            config=meta["config"],
            seed=meta["seed"],
            error=meta["error"],
        )


def _standardize_rows(X, train_ids):
    """Per-dimension standardization from training-row statistics only."""
    mu = X[train_ids].mean(axis=0)
    sd = X[train_ids].std(axis=0)
    sd = np.where(sd == 0, 1.0, sd)
    return (X - mu) / sd


def _embedding_rows(embeddings):
    rows = getattr(embeddings, "rows", embeddings)
    return np.asarray(rows, dtype=float)


def run_active(
    embeddings,
    labels,
    split,
    strategy,
    b,
    budget=None,
    seed=0,
    committee=DEFAULT_COMMITTEE,
):
    """Run the fit/score/query loop until the label budget is spent.

    ``embeddings`` is an EmbeddingMatrix (or plain row matrix) aligned
    with corpus positions; ``labels`` a LabelStore or raw label vector;
    ``budget`` the total labels allowed (default: the whole pool). The
    returned AlRun has one record per iteration. A PerfalError mid-run is
    re-raised with the partial AlRun attached as ``partial_run``.
    """
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}")
    if b < 1:
        raise ConfigError(f"batch size must be >= 1, got {b}")
    X_all = _embedding_rows(embeddings)
    store = labels if isinstance(labels, LabelStore) else LabelStore(labels, split.T)
    L = list(split.L)
    U = list(split.U)
    T = list(split.T)
    if budget is None:
        budget = len(L) + len(U)
    budget = min(budget, len(L) + len(U))
    run = AlRun(
        config={
            "strategy": strategy,
            "batch_size": b,
            "budget": budget,
            "committee": committee if strategy == "qbc" else None,
            "l0_size": len(L),
            "test_size": len(T),
        },
        seed=seed,
    )
    iteration = 0
    while True:
        try:
            Xs = _standardize_rows(X_all, L)
            y_L = store.training_labels(L)
            model = gpr.fit(
                Xs[L], y_L, tune=True, seed=np.random.SeedSequence([seed, iteration])
            )
            preds, _ = gpr.predict(model, Xs[T])
            with store.scoring():
                score = gpr.pearson(store.test_labels(T), preds)
            batch_n = min(b, len(U), budget - len(L))
            if batch_n <= 0:
                run.records.append((len(L), score, ()))
                return run
            strat_seed = np.random.SeedSequence([seed, iteration, 1])
            if strategy == "random":
                batch = select_random(U, batch_n, strat_seed)
            elif strategy == "coreset":
                batch = select_coreset(Xs[L], Xs[U], batch_n, u_ids=U)
            elif strategy == "variance":
                batch = select_variance(model, Xs[U], batch_n, u_ids=U)
            else:
                batch = select_qbc(
                    Xs[L],
                    y_L,
                    Xs[U],
                    batch_n,
                    committee=committee,
                    seed=strat_seed,
                    u_ids=U,
                    kernel=model.kernel,
                )
            run.records.append((len(L), score, tuple(batch)))
            taken = set(batch)
            L = sorted(L + batch)
            U = [i for i in U if i not in taken]
            iteration += 1
        except PerfalError as exc:
            run.error = f"iteration {iteration}: {exc}"
            exc.partial_run = run
            raise


def run_passive(embeddings, labels, split, seed=0):
    """Single fit on L scored on T: active learning with nothing to query."""
    run = run_active(
        embeddings, labels, split, strategy="random", b=1, budget=len(split.L), seed=seed
    )
    return run.records[0][1]
