import numpy as np
import pytest

_ACCEPTANCE: list[tuple[str, str, bool, str]] = []


class AcceptanceRecorder:
    """Records one verdict per acceptance criterion, then asserts it."""

    def check(self, key: str, title: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((key, title, bool(passed), detail))
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {key}: {title} ({detail})"
        print(line)
        assert passed, line


@pytest.fixture
def acceptance():
    return AcceptanceRecorder()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _no_env_seed(monkeypatch):
    monkeypatch.delenv("CATQ_SEED", raising=False)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key, title, passed, detail in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split(".")[0])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {key:>3}  {title}  [{detail}]")
    n_pass = sum(r[2] for r in _ACCEPTANCE)
    terminalreporter.write_line(f"{n_pass}/{len(_ACCEPTANCE)} acceptance checks passed")
