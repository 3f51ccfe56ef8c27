import numpy as np

from esqpt_decoherence.eigen import GroundState

ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def embed(g0: GroundState, n_bosons: int) -> np.ndarray:
    """Ground state of one parity block as a vector on the full n_t basis."""
    full = np.zeros(n_bosons + 1)
    full[g0.n_t_values] = g0.vector
    return full
