from __future__ import annotations

import random

from hypothesis import settings, strategies as st

from planext.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 10, density: float | None = None) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if density is None:
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    else:
        rng = random.Random(draw(st.integers(0, 10**6)))
        chosen = [e for e in pairs if rng.random() < density]
    return Graph(range(n), chosen)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(range(n), [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def pytest_terminal_summary(terminalreporter):
    import sys
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[n])
