"""Command orchestration: load inputs, run the library, write artifacts."""

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from treefit.common.parallel import active_settings
from treefit.config import TestSettings, TreefitSettings
from treefit.constants import DeltaModes, ErrorMessages, GeneratorKinds
from treefit.exceptions import DimensionError, InvalidGeneratorParamsError, SmoothingError
from treefit.models.distance_matrix import DistanceMatrix
from treefit.models.fit import FitConfig, FitResult
from treefit.models.graph import Graph, SbmSpec
from treefit.models.report import (
    AggregateStats,
    ConfigEcho,
    DeltaReport,
    EvalReport,
    RootResult,
    RunReport,
)
from treefit.models.smoothing import SmoothingParams
from treefit.repositories.graph_repository import GraphRepository
from treefit.repositories.matrix_repository import MatrixRepository
from treefit.repositories.report_repository import ReportRepository
from treefit.repositories.tree_repository import TreeRepository
from treefit.services import (
    ingest_service,
    metric_service,
    optimizer_service,
    smooth_delta_service,
    synthetic_service,
    tree_embed_service,
)

logger = logging.getLogger(__name__)

DEFAULT_ROOT_COUNT = 100


@dataclass(frozen=True)
class RootSelection:
    """Explicit root ids, or a count sampled with a seed."""

    explicit: tuple[int, ...] = ()
    count: int = DEFAULT_ROOT_COUNT
    seed: int = 0

    def resolve(self, n: int) -> list[int]:
        """Root ids for an n-point matrix (explicit ids keep their order)."""
        if self.explicit:
            return tree_embed_service.validate_roots(n, self.explicit)
        return tree_embed_service.sample_roots(n, self.count, self.seed)


class RunService:
    """Service behind the CLI commands."""

    def __init__(self, settings: TreefitSettings | TestSettings | None = None) -> None:
        """
        Initialize the service with settings and file repositories.

        Args:
            settings: Active settings (defaults to the installed ones).
        """
        self.settings = settings or active_settings()
        self.graph_repository = GraphRepository()
        self.matrix_repository = MatrixRepository()
        self.report_repository = ReportRepository()
        self.tree_repository = TreeRepository()

    @staticmethod
    def dataset_id(path: str | Path) -> str:
        """Dataset identifier derived from the input file name."""
        return Path(path).stem

    def load(self, path: str | Path, fmt: str | None = None) -> DistanceMatrix:
        """Load any supported input as a distance matrix."""
        D = ingest_service.load_metric(path, fmt)
        logger.info("Loaded %s: n=%d", path, D.n)
        return D

    def _exact_or_none(self, D: DistanceMatrix) -> float | None:
        """Exact hyperbolicity when n is under the guard, otherwise None."""
        if D.n > self.settings.EXACT_DELTA_MAX_N:
            logger.info("Skipping exact hyperbolicity for n=%d (guard %d)", D.n, self.settings.EXACT_DELTA_MAX_N)
            return None
        return metric_service.delta_exact(D)

    def delta(
        self,
        path: str | Path,
        *,
        fmt: str | None,
        mode: str,
        lam: float,
        k: int,
        m: int | None,
        seed: int,
        runs: int = 1,
        override_size_guard: bool = False,
    ) -> DeltaReport:
        """
        Hyperbolicity of an input in the requested mode.

        Raises:
            SizeGuardError: Exact mode above the guard without override.
        """
        if not DeltaModes.is_valid(mode):
            raise SmoothingError(ErrorMessages.UNKNOWN_MODE.format(mode=mode))
        D = self.load(path, fmt)
        base = {"dataset_id": self.dataset_id(path), "n": D.n, "mode": mode}

        if mode == DeltaModes.EXACT:
            metric_service.guard_exact_size(
                D.n,
                override=override_size_guard,
                limit=self.settings.EXACT_DELTA_MAX_N,
            )
            value = metric_service.delta_exact(D)
            return DeltaReport(**base, delta=value, relative_delta=metric_service.relative_delta(D))

        params = SmoothingParams(lam=lam)
        if mode == DeltaModes.SMOOTH:
            return DeltaReport(**base, delta=smooth_delta_service.delta_smooth(D, params), lam=lam)

        batch_size = D.n if m is None else m
        if runs > 1:
            result = smooth_delta_service.delta_batched_runs(D, params, k, batch_size, runs, seed)
            return DeltaReport(
                **base,
                delta=result.mean,
                lam=lam,
                k=k,
                m=batch_size,
                seed=seed,
                runs=runs,
                std=result.std,
                values=result.values,
            )
        batches = smooth_delta_service.sample_batches(D.n, k, batch_size, seed)
        value = smooth_delta_service.delta_batched(D, params, batches)
        return DeltaReport(**base, delta=value, lam=lam, k=k, m=batch_size, seed=seed)

    def _fit_report(
        self,
        command: str,
        dataset_id: str,
        D: DistanceMatrix,
        cfg: FitConfig,
        result: FitResult,
        started: float,
        roots: list[RootResult] | None = None,
    ) -> RunReport:
        delta_input = self._exact_or_none(D)
        delta_fitted = self._exact_or_none(result.best_matrix)
        bound = None
        if delta_input is not None:
            gap = metric_service.distortion_linf(D, result.best_matrix)
            bound = optimizer_service.distortion_bound(delta_input, D.n, cfg.mu, gap)
        return RunReport(
            command=command,
            dataset_id=dataset_id,
            n=D.n,
            config=ConfigEcho.from_config(cfg),
            epochs_run=result.epochs_run,
            best_epoch=result.best_epoch,
            best_loss=result.best_loss,
            stopped_early=result.stopped_early,
            delta_input=delta_input,
            delta_fitted=delta_fitted,
            roots=roots or [],
            aggregate=AggregateStats.from_roots(roots) if roots else None,
            distortion_bound=bound,
            wall_clock_seconds=time.perf_counter() - started,
        )

    def _run_fit(self, D: DistanceMatrix, cfg: FitConfig, prefix: str) -> FitResult:
        result = optimizer_service.fit(D, cfg)
        self.matrix_repository.save_dense(result.best_matrix, f"{prefix}.matrix.csv")
        self.report_repository.save_trace(result.trace, f"{prefix}.trace.csv")
        return result

    def fit(self, path: str | Path, *, fmt: str | None, cfg: FitConfig, prefix: str) -> RunReport:
        """Fit, then write <prefix>.matrix.csv, .trace.csv and .report.json."""
        started = time.perf_counter()
        D = self.load(path, fmt)
        result = self._run_fit(D, cfg, prefix)
        report = self._fit_report("fit", self.dataset_id(path), D, cfg, result, started)
        self.report_repository.save_report(report, f"{prefix}.report.json")
        return report

    def _embed_roots(
        self,
        D: DistanceMatrix,
        reference: DistanceMatrix,
        roots: Sequence[int],
        prefix: str,
    ) -> list[RootResult]:
        results = []
        for root in roots:
            d_t, tree = tree_embed_service.embed(D, root)
            self.tree_repository.save_newick(tree, f"{prefix}.root{root}.nwk")
            self.tree_repository.save_edges(tree, f"{prefix}.root{root}.tree.tsv")
            results.append(
                RootResult(
                    root=root,
                    label=reference.label(root),
                    linf=metric_service.distortion_linf(reference, d_t),
                    l1_avg=metric_service.distortion_l1_avg(reference, d_t) if D.n >= 2 else 0.0,
                ),
            )
            logger.debug("root=%d linf=%r l1_avg=%r", root, results[-1].linf, results[-1].l1_avg)
        return results

    def embed(
        self,
        path: str | Path,
        *,
        fmt: str | None,
        roots: RootSelection,
        prefix: str,
        reference_path: str | Path | None = None,
        reference_fmt: str | None = None,
    ) -> RunReport:
        """
        Embed a matrix at every selected root and report distortions.

        Distortions are measured against the reference matrix (the input
        itself when none is given).
        """
        started = time.perf_counter()
        D = self.load(path, fmt)
        reference = D if reference_path is None else self.load(reference_path, reference_fmt)
        if reference.n != D.n:
            shapes = {"left": D.values.shape, "right": reference.values.shape}
            raise DimensionError(ErrorMessages.SHAPE_MISMATCH.format(**shapes))
        root_ids = roots.resolve(D.n)
        results = self._embed_roots(D, reference, root_ids, prefix)
        report = RunReport(
            command="embed",
            dataset_id=self.dataset_id(path),
            n=D.n,
            roots=results,
            aggregate=AggregateStats.from_roots(results),
            wall_clock_seconds=time.perf_counter() - started,
        )
        self.report_repository.save_report(report, f"{prefix}.report.json")
        return report

    def pipeline(
        self,
        path: str | Path,
        *,
        fmt: str | None,
        cfg: FitConfig,
        roots: RootSelection,
        prefix: str,
    ) -> RunReport:
        """Fit, then embed the fitted matrix with the input as reference."""
        started = time.perf_counter()
        D = self.load(path, fmt)
        result = self._run_fit(D, cfg, prefix)
        root_ids = roots.resolve(D.n)
        results = self._embed_roots(result.best_matrix, D, root_ids, prefix)
        report = self._fit_report("pipeline", self.dataset_id(path), D, cfg, result, started, results)
        self.report_repository.save_report(report, f"{prefix}.report.json")
        return report

    def evaluate(
        self,
        path_a: str | Path,
        path_b: str | Path,
        *,
        fmt_a: str | None = None,
        fmt_b: str | None = None,
    ) -> EvalReport:
        """Distortions between two matrices."""
        A = self.load(path_a, fmt_a)
        B = self.load(path_b, fmt_b)
        return EvalReport(
            n=A.n,
            linf=metric_service.distortion_linf(A, B),
            l1_avg=metric_service.distortion_l1_avg(A, B),
        )

    def generate(
        self,
        kind: str,
        output: str | Path,
        *,
        n: int | None = None,
        rows: int | None = None,
        cols: int | None = None,
        p: float | None = None,
        block_sizes: Sequence[int] = (),
        p_in: float | None = None,
        p_out: float | None = None,
        weight_range: tuple[float, float] = (1.0, 1.0),
        seed: int = 0,
    ) -> Graph:
        """
        Generate a synthetic graph and write it as an edge list.

        SBM graphs also get a `<output>.blocks` sidecar.
        """

        def need(value: object, name: str) -> None:
            if value is None:
                detail = f"{kind} requires --{name}"
                raise InvalidGeneratorParamsError(ErrorMessages.GENERATOR_PARAM.format(detail=detail))

        if kind == GeneratorKinds.TREE:
            need(n, "n")
            graph = synthetic_service.gen_tree(n, seed, weight_range)
        elif kind == GeneratorKinds.CYCLE:
            need(n, "n")
            graph = synthetic_service.gen_cycle(n)
        elif kind == GeneratorKinds.GRID:
            need(rows, "rows")
            need(cols, "cols")
            graph = synthetic_service.gen_grid(rows, cols)
        elif kind == GeneratorKinds.ER:
            need(n, "n")
            need(p, "p")
            graph = synthetic_service.gen_er(n, p, seed)
        elif kind == GeneratorKinds.SBM:
            need(p_in, "p-in")
            need(p_out, "p-out")
            if not block_sizes:
                need(None, "sizes")
            spec = SbmSpec(block_sizes=list(block_sizes), p_in=p_in, p_out=p_out, seed=seed)
            graph, blocks = synthetic_service.gen_sbm(spec)
            self.graph_repository.save_blocks(graph, blocks, f"{output}.blocks")
        else:
            raise InvalidGeneratorParamsError(ErrorMessages.UNKNOWN_GENERATOR.format(kind=kind))

        self.graph_repository.save(graph, output)
        return graph
