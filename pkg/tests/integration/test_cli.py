"""
End-to-end tests of the treefit command line.

Each test drives the click group through CliRunner with files in a
scratch directory. Following docs/test-list/cli.md.
"""

import json

import numpy as np
import pytest

from treefit import __version__
from treefit.cli import cli
from treefit.repositories.report_repository import validate_report_payload
from tests.helpers import C4, error_of, make_er, make_features, read_matrix, write_edges, write_matrix

C4_EDGES = ["0 1", "1 2", "2 3", "3 0"]


def run(runner, *args, env=None):
    """Invoke the CLI with string arguments."""
    return runner.invoke(cli, [str(a) for a in args], env=env)


def stdout_json(result) -> dict:
    """Parse the JSON report printed on stdout."""
    assert result.exit_code == 0, result.stderr
    return json.loads(result.stdout)


@pytest.fixture
def c4_edges(workdir):
    """Unit 4-cycle as an edge list."""
    return write_edges(workdir / "c4.txt", C4_EDGES)


@pytest.fixture
def tree_edges(runner, workdir):
    """A 20-node random weighted tree written by `treefit gen`."""
    path = workdir / "tree.txt"
    result = run(runner, "gen", "tree", path, "--n", 20, "--seed", 7)
    assert result.exit_code == 0, result.stderr
    return path


@pytest.fixture
def er_matrix(workdir):
    """Shortest-path metric of a 12-node ER graph as a dense CSV."""
    return write_matrix(workdir / "er.csv", make_er(12, 0.3, seed=2))


class TestGroup:
    """Test cases for the command group itself."""

    def test_version(self, runner):
        """Test the version option."""
        result = run(runner, "--version")
        assert result.exit_code == 0
        assert __version__ in result.stdout

    def test_invalid_settings_exit_2(self, runner, c4_edges):
        """Test that an invalid environment setting is reported as an input error."""
        result = run(runner, "delta", c4_edges, env={"TEST_THREADS": "-1"})

        assert result.exit_code == 2
        assert "invalid THREADS" in error_of(result)["message"]


class TestDeltaCommand:
    """Test cases for `treefit delta`."""

    def test_exact_four_cycle(self, runner, c4_edges):
        """Test the exact hyperbolicity of the 4-cycle."""
        payload = stdout_json(run(runner, "delta", c4_edges))

        assert payload["dataset_id"] == "c4"
        assert payload["n"] == 4
        assert payload["mode"] == "exact"
        assert payload["delta"] == 1.0

    def test_tree_is_zero_hyperbolic(self, runner, tree_edges):
        """Test that a tree metric has zero hyperbolicity."""
        payload = stdout_json(run(runner, "delta", tree_edges))
        assert payload["delta"] == pytest.approx(0.0, abs=1e-9)

    def test_single_full_batch_equals_smooth(self, runner, er_matrix):
        """Test that one batch of all points reproduces the smoothed value."""
        smooth = stdout_json(run(runner, "delta", er_matrix, "--mode", "smooth", "--lambda", 10))
        batched = stdout_json(
            run(runner, "delta", er_matrix, "--mode", "batched", "--lambda", 10, "--batches", 1),
        )

        assert batched["m"] == 12
        assert batched["delta"] == pytest.approx(smooth["delta"], rel=1e-12)

    def test_repeated_runs(self, runner, er_matrix):
        """Test mean and spread over repeated batched estimates."""
        payload = stdout_json(
            run(
                runner,
                "delta",
                er_matrix,
                "--mode",
                "batched",
                "--batches",
                3,
                "--batch-size",
                5,
                "--runs",
                4,
            ),
        )

        assert len(payload["values"]) == 4
        assert payload["delta"] == pytest.approx(np.mean(payload["values"]))
        assert payload["std"] == pytest.approx(np.std(payload["values"]))

    def test_size_guard(self, runner, workdir):
        """Test that exact mode above the guard exits 3 unless overridden."""
        path = write_edges(workdir / "c5.txt", ["0 1", "1 2", "2 3", "3 4", "4 0"])
        env = {"TEST_EXACT_DELTA_MAX_N": "4"}

        refused = run(runner, "delta", path, env=env)
        forced = run(runner, "delta", path, "--override-size-guard", env=env)

        assert refused.exit_code == 3
        assert error_of(refused)["name"] == "SizeGuardError"
        assert forced.exit_code == 0

    def test_csv_output(self, runner, c4_edges):
        """Test the CSV rendering of a delta report."""
        result = run(runner, "delta", c4_edges, "--format", "csv")

        header, row = result.stdout.splitlines()
        assert header.startswith("dataset_id,n,mode,delta,relative_delta")
        assert row.startswith("c4,4,exact,1.0,")


class TestFitCommand:
    """Test cases for `treefit fit`."""

    def test_zero_learning_rate_stops_after_patience(self, runner, c4_edges, workdir):
        """Test that a stalled loop runs patience + 1 epochs and keeps the input."""
        # Arrange
        prefix = workdir / "out" / "c4"

        # Act
        payload = stdout_json(
            run(
                runner,
                "fit",
                c4_edges,
                "-o",
                prefix,
                "--lr",
                0,
                "--batches",
                1,
                "--batch-size",
                4,
                "--patience",
                3,
            ),
        )

        # Assert
        assert payload["epochs_run"] == 4
        assert payload["best_epoch"] == 0
        assert payload["stopped_early"] is True
        np.testing.assert_array_equal(read_matrix(workdir / "out" / "c4.matrix.csv"), C4)
        trace = (workdir / "out" / "c4.trace.csv").read_text(encoding="utf-8").splitlines()
        assert trace[0] == "epoch,loss,fidelity,delta_term,linf"
        assert len(trace) == 5

    def test_report_file_conforms_to_schema(self, runner, er_matrix, workdir):
        """Test the written report against the shipped schema."""
        prefix = workdir / "er"
        result = run(runner, "fit", er_matrix, "-o", prefix, "--epochs", 5, "--batches", 2, "--batch-size", 6)

        report = json.loads((workdir / "er.report.json").read_text(encoding="utf-8"))

        assert result.exit_code == 0, result.stderr
        validate_report_payload(report)
        assert report["command"] == "fit"
        assert report["config"]["K"] == 2
        assert report["config"]["m"] == 6
        assert report["delta_input"] is not None
        assert report["distortion_bound"] is not None

    def test_trace_independent_of_worker_count(self, runner, er_matrix, workdir):
        """Test that one and four workers write byte-identical artifacts."""
        args = ["--epochs", 6, "--batches", 4, "--batch-size", 5, "--lr", 0.05, "--seed", 11]

        single = run(runner, "fit", er_matrix, "-o", workdir / "one", *args, env={"TEST_THREADS": "1"})
        multi = run(runner, "fit", er_matrix, "-o", workdir / "four", *args, env={"TEST_THREADS": "4"})

        assert single.exit_code == 0, single.stderr
        assert multi.exit_code == 0, multi.stderr
        for suffix in ("trace.csv", "matrix.csv"):
            assert (workdir / f"one.{suffix}").read_bytes() == (workdir / f"four.{suffix}").read_bytes()

    @pytest.mark.slow
    def test_fit_reduces_hyperbolicity_of_sbm(self, runner, workdir):
        """Test that fitting a community graph lowers its exact hyperbolicity."""
        # Arrange
        graph = workdir / "sbm.txt"
        generated = run(runner, "gen", "sbm", graph, "--sizes", "10,10,10,10,10", "--p-in", 0.6, "--p-out", 0.2)
        assert generated.exit_code == 0, generated.stderr
        args = ["--batches", 8, "--batch-size", 10, "--lr", 0.05, "--epochs", 200, "--patience", 30]

        # Act
        payload = stdout_json(run(runner, "fit", graph, "-o", workdir / "sbm", *args))

        # Assert
        assert payload["delta_fitted"] < payload["delta_input"]

    def test_same_seed_same_trace(self, runner, er_matrix, workdir):
        """Test that rerunning with a fixed seed rewrites the same trace."""
        args = ["--epochs", 4, "--batches", 2, "--batch-size", 6, "--seed", 3]

        run(runner, "fit", er_matrix, "-o", workdir / "a", *args)
        run(runner, "fit", er_matrix, "-o", workdir / "b", *args)

        assert (workdir / "a.trace.csv").read_bytes() == (workdir / "b.trace.csv").read_bytes()

    def test_batch_larger_than_input(self, runner, c4_edges, workdir):
        """Test that m > n is an input error."""
        result = run(runner, "fit", c4_edges, "-o", workdir / "x", "--batch-size", 8)

        assert result.exit_code == 2
        assert error_of(result)["name"] == "InvalidFitConfigError"

    def test_out_of_range_flag(self, runner, c4_edges, workdir):
        """Test that a negative fidelity weight is rejected by validation."""
        result = run(runner, "fit", c4_edges, "-o", workdir / "x", "--mu", -1, "--batch-size", 4)

        assert result.exit_code == 2
        assert error_of(result)["name"] == "ValidationError"


class TestEmbedCommand:
    """Test cases for `treefit embed`."""

    def test_tree_input_has_zero_distortion(self, runner, tree_edges, workdir):
        """Test that embedding a tree metric reproduces it at every root."""
        payload = stdout_json(run(runner, "embed", tree_edges, "-o", workdir / "t", "--roots", 5))

        assert len(payload["roots"]) == 5
        assert payload["aggregate"]["linf_mean"] == pytest.approx(0.0, abs=1e-9)
        for root in payload["roots"]:
            assert (workdir / f"t.root{root['root']}.nwk").read_text(encoding="utf-8").endswith(";\n")
            assert (workdir / f"t.root{root['root']}.tree.tsv").exists()

    def test_sampled_roots_are_reproducible(self, runner, tree_edges, workdir):
        """Test that the root seed fixes the sampled roots."""
        first = stdout_json(run(runner, "embed", tree_edges, "-o", workdir / "a", "--roots", 4, "--root-seed", 5))
        second = stdout_json(run(runner, "embed", tree_edges, "-o", workdir / "b", "--roots", 4, "--root-seed", 5))

        assert [r["root"] for r in first["roots"]] == [r["root"] for r in second["roots"]]

    def test_four_cycle_roots_are_symmetric(self, runner, c4_edges, workdir):
        """Test that every root of the 4-cycle gives the same distortion."""
        payload = stdout_json(run(runner, "embed", c4_edges, "-o", workdir / "c4"))

        assert [r["root"] for r in payload["roots"]] == [0, 1, 2, 3]
        assert {r["linf"] for r in payload["roots"]} == {2.0}
        assert payload["aggregate"]["linf_std"] == 0.0

    def test_explicit_roots_keep_order(self, runner, c4_edges, workdir):
        """Test repeated --root flags."""
        payload = stdout_json(run(runner, "embed", c4_edges, "-o", workdir / "c4", "--root", 2, "--root", 0))
        assert [r["root"] for r in payload["roots"]] == [2, 0]

    def test_invalid_root(self, runner, c4_edges, workdir):
        """Test that an out-of-range root exits 2."""
        result = run(runner, "embed", c4_edges, "-o", workdir / "c4", "--root", 9)

        assert result.exit_code == 2
        assert error_of(result)["name"] == "EmbeddingError"

    def test_reference_shape_mismatch(self, runner, c4_edges, tree_edges, workdir):
        """Test that a reference of another size is rejected."""
        result = run(runner, "embed", c4_edges, "-o", workdir / "c4", "--reference", tree_edges)

        assert result.exit_code == 2
        assert error_of(result)["name"] == "DimensionError"

    def test_feature_input(self, runner, workdir):
        """Test embedding cosine dissimilarities of a feature table."""
        features = write_matrix(workdir / "features.csv", make_features(12, seed=0))

        payload = stdout_json(run(runner, "embed", features, "--input-format", "features", "-o", workdir / "f"))

        assert [r["root"] for r in payload["roots"]] == list(range(12))
        assert all(r["linf"] >= 0.0 for r in payload["roots"])

    def test_csv_rows_per_root(self, runner, c4_edges, workdir):
        """Test the CSV rendering of an embed report."""
        result = run(runner, "embed", c4_edges, "-o", workdir / "c4", "--format", "csv")

        lines = result.stdout.splitlines()
        assert lines[0] == "root,label,linf,l1_avg"
        assert len(lines) == 5


class TestEvalCommand:
    """Test cases for `treefit eval`."""

    def test_identical_inputs(self, runner, er_matrix):
        """Test that a matrix has zero distortion against itself."""
        payload = stdout_json(run(runner, "eval", er_matrix, er_matrix))
        assert payload == {"n": 12, "linf": 0.0, "l1_avg": 0.0}

    def test_missing_file(self, runner, er_matrix, workdir):
        """Test that a missing input exits 2."""
        result = run(runner, "eval", er_matrix, workdir / "missing.csv")
        assert result.exit_code == 2
        assert "error" not in result.stdout

    def test_shape_mismatch(self, runner, er_matrix, workdir):
        """Test that matrices of different sizes exit 2."""
        small = write_matrix(workdir / "c4.csv", C4)

        result = run(runner, "eval", er_matrix, small)

        assert result.exit_code == 2
        assert error_of(result)["name"] == "DimensionError"

    def test_csv_output(self, runner, workdir):
        """Test the CSV rendering of an eval report."""
        path = write_matrix(workdir / "c4.csv", C4)
        result = run(runner, "eval", path, path, "--format", "csv")
        assert result.stdout == "n,linf,l1_avg\n4,0.0,0.0\n"


class TestGenCommand:
    """Test cases for `treefit gen`."""

    def test_cycle(self, runner, workdir):
        """Test the unit cycle edge list."""
        path = workdir / "c4.txt"

        payload = stdout_json(run(runner, "gen", "cycle", path, "--n", 4))

        assert payload["nodes"] == 4
        assert payload["edges"] == 4
        assert len(path.read_text(encoding="utf-8").splitlines()) == 4

    def test_sbm_writes_blocks(self, runner, workdir):
        """Test the SBM graph and its block sidecar."""
        path = workdir / "sbm.txt"

        payload = stdout_json(
            run(runner, "gen", "sbm", path, "--sizes", "50,50,50,50,50", "--p-in", 0.6, "--p-out", 0.2, "--seed", 1),
        )

        assert payload["nodes"] == 250
        blocks = (workdir / "sbm.txt.blocks").read_text(encoding="utf-8").splitlines()
        assert len(blocks) == 250
        assert blocks[0] == "0 0"
        assert blocks[-1] == "249 4"

    def test_er_is_reproducible(self, runner, workdir):
        """Test that the same seed writes the same graph."""
        for name in ("a.txt", "b.txt"):
            assert run(runner, "gen", "er", workdir / name, "--n", 10, "--p", 0.3, "--seed", 7).exit_code == 0
        assert (workdir / "a.txt").read_bytes() == (workdir / "b.txt").read_bytes()

    def test_missing_parameter(self, runner, workdir):
        """Test that a kind without its required size exits 2."""
        result = run(runner, "gen", "tree", workdir / "t.txt")

        assert result.exit_code == 2
        assert "tree requires --n" in error_of(result)["message"]

    @pytest.mark.parametrize(
        "args",
        [
            ["er", "--n", 10, "--p", 1.5],
            ["sbm", "--sizes", "5,x", "--p-in", 0.5, "--p-out", 0.1],
            ["sbm", "--sizes", "5,5", "--p-in", 0.5, "--p-out", -0.1],
        ],
        ids=["er-probability", "sbm-sizes", "sbm-probability"],
    )
    def test_invalid_parameters(self, runner, workdir, args):
        """Test that out-of-range generator parameters exit 2."""
        kind, *flags = args
        result = run(runner, "gen", kind, workdir / "g.txt", *flags)
        assert result.exit_code == 2


class TestPipelineCommand:
    """Test cases for `treefit pipeline`."""

    def test_end_to_end(self, runner, workdir):
        """Test generate, fit and embed chained through files."""
        # Arrange
        graph = workdir / "er.txt"
        assert run(runner, "gen", "er", graph, "--n", 16, "--p", 0.25, "--seed", 4).exit_code == 0
        prefix = workdir / "run" / "er"

        # Act
        payload = stdout_json(
            run(
                runner,
                "pipeline",
                graph,
                "-o",
                prefix,
                "--epochs",
                8,
                "--batches",
                4,
                "--batch-size",
                6,
                "--roots",
                3,
            ),
        )

        # Assert
        assert payload["command"] == "pipeline"
        assert len(payload["roots"]) == 3
        assert payload["aggregate"] is not None
        assert payload["delta_fitted"] is not None
        report = json.loads((workdir / "run" / "er.report.json").read_text(encoding="utf-8"))
        validate_report_payload(report)
        assert report["roots"] == payload["roots"]
        for root in payload["roots"]:
            assert (workdir / "run" / f"er.root{root['root']}.nwk").exists()
        assert (workdir / "run" / "er.matrix.csv").exists()
        assert (workdir / "run" / "er.trace.csv").exists()
