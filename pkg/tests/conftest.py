import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import _criteria


def pytest_terminal_summary(terminalreporter):
    if _criteria.lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance scoreboard")
        for line in _criteria.lines:
            terminalreporter.write_line("  " + line)
