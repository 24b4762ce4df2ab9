import itertools
import logging
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from dircomm.graph import DirectedGraph, UndirectedWeightedGraph, read_snap

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
CELEGANS = DATA / "celegans.txt"
WIKI_VOTE = Path(os.environ.get("DIRCOMM_WIKI_VOTE", DATA / "wiki-Vote.txt"))


def random_digraph(rng, n, p, recip):
    """Each unordered pair is linked with probability p; a linked pair is
    reciprocal with probability ``recip``, otherwise one random direction."""
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            if rng.random() < recip:
                edges += [(u, v), (v, u)]
            else:
                edges.append((u, v) if rng.random() < 0.5 else (v, u))
    return DirectedGraph.from_edges(n, edges)


def random_weighted(rng, n, p, max_w=5, vweights=False):
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    w = rng.integers(1, max_w + 1, size=len(pairs))
    vw = rng.integers(1, 4, size=n) if vweights else None
    return UndirectedWeightedGraph.from_edges(n, pairs, w, vw)


@st.composite
def digraphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * n, unique=True)) if pairs else []
    return DirectedGraph.from_edges(n, chosen)


@st.composite
def weighted_graphs(draw, min_n=1, max_n=14):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * n, unique=True)) if pairs else []
    w = draw(st.lists(st.integers(1, 9), min_size=len(chosen), max_size=len(chosen)))
    return UndirectedWeightedGraph.from_edges(n, chosen, w)


@pytest.fixture(scope="session")
def celegans():
    logging.getLogger("dircomm").setLevel(logging.ERROR)
    return read_snap(CELEGANS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- one PASS/FAIL line per acceptance criterion -----------------------------

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (rep.when != "call" and not rep.failed and not rep.skipped):
        return
    key = mark.args[0]
    ok = rep.passed if rep.when == "call" else False
    prev = _criteria.get(key)
    status = "SKIP" if rep.skipped else ("PASS" if ok else "FAIL")
    if prev is None or prev == "PASS" or status == "FAIL":
        _criteria[key] = status if prev != "FAIL" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: (int(str(k).rstrip("abcdefgh")), str(k))):
        terminalreporter.write_line(f"criterion {key}: {_criteria[key]}")
