import itertools

import pytest

from indexcoding.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def brute_rank_gf2(rows):
    """Rank of 0/1 row tuples by plain elimination (no package code)."""
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def brute_minrank(g: Graph) -> int:
    """Minimum rank over every matrix with unit diagonal and zeros off the edges."""
    n = g.n
    free = [(i, j) for i in range(n) for j in range(n) if i != j and g.has_edge(i, j)]
    best = n
    for assignment in itertools.product((0, 1), repeat=len(free)):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for (i, j), b in zip(free, assignment):
            m[i][j] = b
        best = min(best, brute_rank_gf2(m))
        if best == 1:
            break
    return best


def brute_alpha(g: Graph) -> int:
    edges = g.edges()
    for size in range(g.n, 0, -1):
        for s in itertools.combinations(range(g.n), size):
            chosen = set(s)
            if not any(u in chosen and v in chosen for u, v in edges):
                return size
    return 0


@pytest.fixture
def record_acceptance():
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
