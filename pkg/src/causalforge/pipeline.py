"""Task orchestration: data source, priors, learning, post-processing, metrics.

A TaskConfig names a data source (simulated or CSV), one algorithm with its
settings, optional prior knowledge, optional lasso neighborhood selection,
and a seed. run_task executes the stages in order and packs the estimated
graphs, metrics against the truth when one is known, the convergence trace,
and a provenance copy of the config into a TaskResult. Tasks are pure
functions of their config: replaying one reproduces every output bit.

The neighborhood mask narrows NOTEARS/GOLEM supports and the PC starting
skeleton only; GES and DirectLiNGAM run unmasked because their operator
validity and ordering logic assume an unrestricted candidate set.
"""

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .exceptions import (
    CausalForgeError,
    InsufficientSamples,
    InvalidConfig,
    NumericError,
    StageError,
)
from .graphs import RandomGraphConfig, random_dag, support
from .io import load_csv, load_graph
from .metrics import MetricsReport, evaluate
from .priors import PriorKnowledge, constrain_pattern
from .simulate import NoiseSpec, simulate_iid
from .algorithms.ges import GesConfig, ges
from .algorithms.gradient import (
    GolemConfig,
    NotearsConfig,
    golem,
    notears_linear,
    threshold_and_repair,
)
from .algorithms.lingam import direct_lingam
from .algorithms.pc import PcConfig, pc

SCHEMA_VERSION = 1

ALGORITHMS = ("pc", "ges", "direct_lingam", "notears", "golem")

_LASSO_TOL = 1e-6
_LASSO_MAX_SWEEPS = 1000
_COEF_EPS = 1e-8


# ---------------------------------------------------------------------------
# neighborhood pre-selection

def _lasso_cd(A, y, lam):
    """Coordinate-descent lasso: (1/2n)||y - Ab||^2 + lam*||b||_1, b0 = 0."""
    n, p = A.shape
    z = (A * A).mean(axis=0)
    beta = np.zeros(p)
    resid = y.copy()
    for _ in range(_LASSO_MAX_SWEEPS):
        delta = 0.0
        for i in range(p):
            if z[i] == 0.0:
                continue
            rho = float(A[:, i] @ resid) / n + z[i] * beta[i]
            new = np.sign(rho) * max(abs(rho) - lam, 0.0) / z[i]
            if new != beta[i]:
                resid -= A[:, i] * (new - beta[i])
                delta = max(delta, abs(new - beta[i]))
                beta[i] = new
        if not np.isfinite(delta):
            raise NumericError("lasso coordinate descent diverged")
        if delta < _LASSO_TOL:
            break
    return beta


def neighborhood_select(X, lambda_ns):
    """Candidate-edge mask from per-node L1 regressions, symmetric-ORed."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidConfig("neighborhood_select expects an n x d matrix")
    if lambda_ns < 0:
        raise InvalidConfig("lambda_ns must be >= 0")
    n, d = X.shape
    if n <= 3:
        raise InsufficientSamples("neighborhood selection needs n > 3")
    Xc = X - X.mean(axis=0)
    mask = np.zeros((d, d), dtype=bool)
    for j in range(d):
        others = [i for i in range(d) if i != j]
        if not others:
            continue
        beta = _lasso_cd(Xc[:, others], Xc[:, j], lambda_ns)
        for k, i in enumerate(others):
            if abs(beta[k]) > _COEF_EPS:
                mask[i, j] = True
    mask |= mask.T
    return mask


# ---------------------------------------------------------------------------
# prior application

def apply_prior(obj, prior: PriorKnowledge, stage, pattern=False):
    """Adjust a candidate mask (pre) or an estimated graph (post) to a prior.

    Pre-stage: forbidden entries leave the mask, required entries enter it.
    Post-stage on a CPDAG-style pattern: delegate to constrain_pattern. Post-
    stage on a DAG-style graph: forbidden edges deleted, missing required
    edges inserted (smallest surviving |weight|, or 1 on binary graphs), then
    cycles repaired without ever deleting a required edge.
    """
    if prior is None or prior.is_empty():
        return np.array(obj, copy=True)
    d = np.asarray(obj).shape[0]
    prior.validate(d)

    if stage == "pre":
        M = np.array(obj, dtype=bool, copy=True)
        for i, j in prior.forbidden:
            M[i, j] = False
        for i, j in prior.required:
            M[i, j] = True
        np.fill_diagonal(M, False)
        return M
    if stage != "post":
        raise InvalidConfig(f"unknown prior stage {stage!r}")

    if pattern:
        return constrain_pattern(obj, prior)

    G = np.array(obj, dtype=float, copy=True)
    for i, j in prior.forbidden:
        G[i, j] = 0.0
    nonzero = np.abs(G[G != 0.0])
    fill = float(nonzero.min()) if nonzero.size else 1.0
    for i, j in prior.required:
        if G[i, j] == 0.0:
            G[i, j] = fill
    return threshold_and_repair(G, 0.0, protected=prior.required)


# ---------------------------------------------------------------------------
# task configuration

@dataclass
class SimulateSource:
    graph: RandomGraphConfig = field(default_factory=RandomGraphConfig)
    sem: str = "linear"
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    n: int = 1000

    def validate(self):
        self.graph.validate()
        self.noise.validate()
        if self.n < 1:
            raise InvalidConfig("n must be >= 1")
        return self

    def to_dict(self):
        return {
            "kind": "simulate",
            "graph": asdict(self.graph) | {"weight_range": list(self.graph.weight_range)},
            "sem": self.sem,
            "noise": asdict(self.noise),
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, obj):
        g = dict(obj.get("graph", {}))
        if "weight_range" in g:
            g["weight_range"] = tuple(g["weight_range"])
        return cls(
            graph=RandomGraphConfig(**g),
            sem=obj.get("sem", "linear"),
            noise=NoiseSpec(**obj.get("noise", {})),
            n=int(obj.get("n", 1000)),
        )


@dataclass
class CsvSource:
    path: str
    truth_path: Optional[str] = None

    def validate(self):
        if not self.path:
            raise InvalidConfig("csv source needs a path")
        return self

    def to_dict(self):
        return {"kind": "csv", "path": self.path, "truth_path": self.truth_path}

    @classmethod
    def from_dict(cls, obj):
        return cls(path=obj.get("path", ""), truth_path=obj.get("truth_path"))


_PARAM_FIELDS = {
    "pc": PcConfig,
    "ges": GesConfig,
    "notears": NotearsConfig,
    "golem": GolemConfig,
}
_LINGAM_PARAMS = ("prune_threshold",)


@dataclass
class TaskConfig:
    data_source: object = field(default_factory=SimulateSource)
    algorithm: str = "notears"
    params: dict = field(default_factory=dict)
    prior: Optional[PriorKnowledge] = None
    lambda_ns: Optional[float] = None  # None = neighborhood selection off
    threshold: Optional[float] = None
    seed: int = 0
    schema_version: int = SCHEMA_VERSION

    def validate(self):
        try:
            if self.schema_version != SCHEMA_VERSION:
                raise InvalidConfig(f"unsupported schema_version {self.schema_version}")
            if self.algorithm not in ALGORITHMS:
                raise InvalidConfig(f"unknown algorithm {self.algorithm!r}")
            self.data_source.validate()
            allowed = (
                _LINGAM_PARAMS
                if self.algorithm == "direct_lingam"
                else tuple(_PARAM_FIELDS[self.algorithm].__dataclass_fields__)
            )
            for key in self.params:
                if key not in allowed:
                    raise InvalidConfig(
                        f"parameter {key!r} does not belong to algorithm "
                        f"{self.algorithm!r}"
                    )
            self._algo_config()  # runs the algorithm config's own validation
            if self.prior is not None:
                self.prior.validate()
            if self.lambda_ns is not None and self.lambda_ns < 0:
                raise InvalidConfig("lambda_ns must be >= 0")
            if self.threshold is not None and self.threshold < 0:
                raise InvalidConfig("threshold must be >= 0")
        except CausalForgeError:
            raise
        except (TypeError, ValueError) as exc:
            # wrong-typed scalars from hand-written JSON end up here
            raise InvalidConfig(f"malformed task config: {exc}") from exc
        return self

    def _algo_config(self):
        if self.algorithm == "direct_lingam":
            return dict(self.params)
        cfg = _PARAM_FIELDS[self.algorithm](**self.params)
        if self.threshold is not None and hasattr(cfg, "omega"):
            cfg.omega = self.threshold
        return cfg.validate()

    def to_dict(self):
        ns = (
            {"mode": "off"}
            if self.lambda_ns is None
            else {"mode": "lasso", "lambda_ns": self.lambda_ns}
        )
        return {
            "schema_version": self.schema_version,
            "data_source": self.data_source.to_dict(),
            "algorithm": self.algorithm,
            "params": dict(self.params),
            "prior": None if self.prior is None else self.prior.to_dict(),
            "neighborhood_selection": ns,
            "threshold": self.threshold,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise InvalidConfig("task config must be a JSON object")
        try:
            src = obj.get("data_source") or {}
            kind = src.get("kind", "simulate")
            if kind == "simulate":
                source = SimulateSource.from_dict(src)
            elif kind == "csv":
                source = CsvSource.from_dict(src)
            else:
                raise InvalidConfig(f"unknown data source kind {kind!r}")
            ns = obj.get("neighborhood_selection") or {"mode": "off"}
            if ns.get("mode") == "lasso":
                if ns.get("lambda_ns") is None:
                    raise InvalidConfig("lasso neighborhood selection needs lambda_ns")
                lambda_ns = float(ns["lambda_ns"])
            elif ns.get("mode", "off") == "off":
                lambda_ns = None
            else:
                raise InvalidConfig(f"unknown neighborhood mode {ns.get('mode')!r}")
            prior = obj.get("prior")
            return cls(
                data_source=source,
                algorithm=obj.get("algorithm", "notears"),
                params=dict(obj.get("params") or {}),
                prior=None if prior is None else PriorKnowledge.from_dict(prior),
                lambda_ns=lambda_ns,
                threshold=obj.get("threshold"),
                seed=int(obj.get("seed", 0)),
                schema_version=int(obj.get("schema_version", SCHEMA_VERSION)),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            # malformed nesting or uncoercible scalars from hand-written JSON
            raise InvalidConfig(f"malformed task config: {exc}") from exc


@dataclass
class TaskResult:
    graph: np.ndarray
    graph_pre: np.ndarray
    truth: Optional[np.ndarray]
    metrics: Optional[MetricsReport]
    trace: list
    wall_clock: float
    provenance: dict

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "graph": np.asarray(self.graph).astype(int).tolist(),
            "graph_pre": np.asarray(self.graph_pre, dtype=float).tolist(),
            "truth": None
            if self.truth is None
            else np.asarray(self.truth).astype(int).tolist(),
            "metrics": None if self.metrics is None else self.metrics.to_dict(),
            "trace": list(self.trace),
            "wall_clock": float(self.wall_clock),
            "provenance": dict(self.provenance),
        }


# ---------------------------------------------------------------------------
# execution

def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _load_source(cfg: TaskConfig):
    """Materialize (X, truth-or-None) for the task's data source."""
    src = cfg.data_source
    if isinstance(src, SimulateSource):
        W = random_dag(src.graph)
        ds = simulate_iid(W, src.n, sem=src.sem, noise=src.noise, seed=cfg.seed)
        return ds.X, ds.B
    data = load_csv(src.path)
    truth = None
    if src.truth_path:
        truth = support(load_graph(src.truth_path))
    return data.X, truth


def _required(prior):
    return prior.required if prior is not None else frozenset()


def run_task(cfg: TaskConfig, trace=None) -> TaskResult:
    """Execute one task and return its result.

    Stage failures surface as StageError tagged with the stage name. A caller
    may pass a list as trace to observe solver progress while the task runs.
    """
    cfg.validate()
    sink = [] if trace is None else trace
    started = time.perf_counter()

    X, truth = _stage("source", _load_source, cfg)
    d = X.shape[1]
    if cfg.prior is not None:
        _stage("prior-pre", cfg.prior.validate, d)

    mask = None
    if cfg.lambda_ns is not None:
        mask = _stage("neighborhood", neighborhood_select, X, cfg.lambda_ns)
    needs_mask = cfg.algorithm in ("notears", "golem")
    if cfg.prior is not None and not cfg.prior.is_empty():
        if mask is None and needs_mask and cfg.prior.forbidden:
            mask = ~np.eye(d, dtype=bool)
        if mask is not None:
            mask = _stage("prior-pre", apply_prior, mask, cfg.prior, "pre")

    algo_cfg = cfg._algo_config()
    pattern_output = cfg.algorithm in ("pc", "ges")

    if cfg.algorithm == "pc":
        P = _stage("learn", pc, X, algo_cfg, cfg.prior, mask)
        pre, final = P, P
    elif cfg.algorithm == "ges":
        P = _stage("learn", ges, X, algo_cfg, trace=sink)
        pre = P
        final = _stage("prior-post", apply_prior, P, cfg.prior, "post", pattern=True)
    elif cfg.algorithm == "direct_lingam":
        fit = _stage("learn", direct_lingam, X, **cfg.params)
        sink.append({"causal_order": [int(v) for v in fit.causal_order]})
        pre = fit.W
        binary = (
            _stage(
                "threshold",
                threshold_and_repair,
                fit.W,
                cfg.threshold,
                protected=_required(cfg.prior),
            )
            if cfg.threshold is not None
            else support(fit.W)
        )
        final = _stage("prior-post", apply_prior, binary, cfg.prior, "post")
    else:  # notears | golem
        solver = notears_linear if cfg.algorithm == "notears" else golem
        fit = _stage("learn", solver, X, algo_cfg, support_mask=mask, trace=sink)
        pre = fit.W
        binary = _stage(
            "threshold",
            threshold_and_repair,
            fit.W,
            algo_cfg.omega,
            protected=_required(cfg.prior),
        )
        final = _stage("prior-post", apply_prior, binary, cfg.prior, "post")

    if pattern_output:
        final = np.asarray(final, dtype=np.int8)
    else:
        final = support(np.asarray(final, dtype=float))

    metrics = None
    if truth is not None:
        metrics = _stage("metrics", evaluate, final, truth)

    return TaskResult(
        graph=final,
        graph_pre=np.asarray(pre, dtype=float),
        truth=truth,
        metrics=metrics,
        trace=list(sink),
        wall_clock=time.perf_counter() - started,
        provenance=cfg.to_dict(),
    )
