"""Tests for the pcm-amortized command line."""

import pytest

from pcm_amortized import cli
from pcm_amortized.config import Experiment
from pcm_amortized.experiments import ExperimentOutcome


@pytest.fixture
def captured(monkeypatch):
    """Replace every runner with one that records its config."""
    calls = []

    def fake(config):
        calls.append(config)
        return ExperimentOutcome()

    monkeypatch.setattr(cli, "RUNNERS", {experiment: fake for experiment in Experiment})
    return calls


class TestParser:
    """Test argument parsing."""

    def test_models_split(self):
        """--models takes a comma list."""
        args = cli.build_parser().parse_args(["case2", "--models", "eplse, linear-mpc"])
        assert args.models == ["eplse", "linear-mpc"]

    def test_unknown_experiment(self):
        """Unknown subcommands are usage errors."""
        with pytest.raises(SystemExit) as exc:
            cli.main(["case3"])
        assert exc.value.code == 2

    def test_bad_seed(self):
        """--seed must be an integer."""
        with pytest.raises(SystemExit) as exc:
            cli.main(["props", "--seed", "abc"])
        assert exc.value.code == 2


class TestMain:
    """Test exit codes and overrides."""

    def test_success(self, captured, tmp_path):
        """A clean run exits 0 with the flags applied."""
        code = cli.main(["case1", "--out", str(tmp_path), "--models", "eplse", "--seed", "9"])
        assert code == cli.EXIT_OK
        config = captured[0]
        assert config.run.output_dir == str(tmp_path)
        assert config.model_kinds == ["eplse"]
        assert config.run.seed == 9

    def test_config_file(self, captured, tmp_path):
        """Config files are loaded before flags apply."""
        path = tmp_path / "run.ini"
        path.write_text("[run]\nseed = 4\n\n[network]\nnum_terms = 3\n", encoding="utf-8")
        assert cli.main(["props", "--config", str(path), "--out", str(tmp_path)]) == cli.EXIT_OK
        assert captured[0].run.seed == 4
        assert captured[0].network.num_terms == 3

    def test_missing_config(self, captured, tmp_path):
        """A missing config file is a usage error."""
        assert cli.main(["case1", "--config", str(tmp_path / "nope.ini")]) == cli.EXIT_USAGE
        assert captured == []

    def test_invalid_config(self, captured, tmp_path):
        """Unknown sections are a usage error."""
        path = tmp_path / "bad.ini"
        path.write_text("[plots]\ndpi = 10\n", encoding="utf-8")
        assert cli.main(["case1", "--config", str(path)]) == cli.EXIT_USAGE

    def test_unknown_model(self, captured):
        """An unknown --models entry is a usage error."""
        assert cli.main(["case1", "--models", "icnn"]) == cli.EXIT_USAGE

    def test_failures_exit_one(self, monkeypatch, tmp_path):
        """Failed models or suites give exit code 1."""
        monkeypatch.setattr(
            cli, "RUNNERS", {Experiment.GRADCHECK: lambda config: ExperimentOutcome(failures=["fnn_input_grad"])}
        )
        assert cli.main(["gradcheck", "--out", str(tmp_path)]) == cli.EXIT_FAILED

    def test_runner_error_exit_one(self, monkeypatch, tmp_path):
        """A runner that aborts with ValueError gives exit code 1."""
        def abort(config):
            raise ValueError("lse is not a trainable approximator")

        monkeypatch.setattr(cli, "RUNNERS", {Experiment.CASE1: abort})
        assert cli.main(["case1", "--out", str(tmp_path)]) == cli.EXIT_FAILED
