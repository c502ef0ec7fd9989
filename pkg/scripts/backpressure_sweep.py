#!/usr/bin/env python3
"""Sweep lossy-stream capacity against consumer rate and tabulate drop rates.

A 1 kHz source feeds a polling sink through a bounded stream for one virtual
second; every cell reports delivered/dropped counts and checks conservation.
"""

from flowbot.flowcore import (
    GraphDef,
    LossyPolicy,
    NodeDef,
    StopCondition,
    StreamDef,
    graph_run,
)

CAPACITIES = (1, 2, 8, 32)
SINK_RATES_HZ = (5.0, 10.0, 50.0, 200.0, 1000.0)


def run_cell(capacity: int, sink_hz: float):
    graph = GraphDef(
        nodes=(
            NodeDef("src", "source", {"count": 1000, "rate_hz": 1000.0}),
            NodeDef("snk", "sink", {"poll_rate_hz": sink_hz}),
        ),
        streams=(
            StreamDef("s", "src", "out", "snk", "in", LossyPolicy(capacity=capacity)),
        ),
    )
    report = graph_run(graph, stop=StopCondition(time_limit_us=1_000_000))
    s = report.streams["s"]
    assert s["pushed"] == s["delivered"] + s["dropped"] + s["queued"]
    return s


def main():
    header = "capacity " + "".join(f"{hz:>14.0f}Hz" for hz in SINK_RATES_HZ)
    print(header)
    print("-" * len(header))
    for capacity in CAPACITIES:
        cells = []
        for hz in SINK_RATES_HZ:
            s = run_cell(capacity, hz)
            cells.append(f"{s['delivered']:>6}/{s['dropped']:<7}")
        print(f"{capacity:>8} " + " ".join(cells))
    print("\ncells are delivered/dropped out of 1000 packets in 1 virtual second")


if __name__ == "__main__":
    main()
