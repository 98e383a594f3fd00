"""Collects one summary line per acceptance criterion."""

LINES = []


def record(number, ok, detail):
    LINES.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"))
    return ok
