import pytest

from giskard.fbiharmonic import cli


@pytest.fixture
def run_cli(capsys):
    """Run ``fbh`` in-process; returns the exit code, stdout and stderr."""

    def run(*argv: str) -> tuple[int, str, str]:
        code = cli.main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture(autouse=True)
def _fixed_seed(monkeypatch):
    # runs must not depend on the caller's environment
    monkeypatch.delenv("FBH_SEED", raising=False)
