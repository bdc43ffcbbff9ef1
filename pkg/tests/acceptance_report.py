"""Collects one verdict line per acceptance criterion for the terminal summary."""

LINES: dict = {}


def record(number: int, passed: bool, summary: str) -> str:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {summary}"
    LINES[number] = line
    return line
