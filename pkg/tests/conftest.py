from __future__ import annotations

import pytest

import tracelens as tl

EXAMPLE_CSV = "10,T1,1\n20,T1,2\n30,T1,3\n60,T1,6\n70,T1,7\n"


@pytest.fixture
def single7() -> tl.LabeledDag:
    return tl.LabeledDag([tl.Vertex(label=7, t_first=0.0, t_last=0.0, tag="s")], [])


@pytest.fixture
def chain3() -> tl.LabeledDag:
    return tl.skip_graph(3, {1})


@pytest.fixture
def movement_dag() -> tl.LabeledDag:
    """Five readings of one tag at zones 1,2,3,6,7, minute 10..70, window 20."""
    codec = tl.LabelCodec()
    events = tl.parse_events(EXAMPLE_CSV.splitlines(), codec)
    return tl.build_dag(tl.clean_events(events, codec), 20.0)


@pytest.fixture
def browsing_dag() -> tl.LabeledDag:
    """Five page visits, two sharing a domain label, six closeness edges."""
    labels = [0, 1, 2, 3, 0]
    vertices = [
        tl.Vertex(label=lab, t_first=float(i), t_last=float(i), tag="u")
        for i, lab in enumerate(labels)
    ]
    edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)]
    return tl.LabeledDag(vertices, edges)
