"""Shared pytest hooks: replay acceptance verdict lines after the run."""

from __future__ import annotations

import acceptance_log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
