"""Command line interface.

Subcommands:
  run       execute a scenario against a graph config, emit the JSON report
  validate  structurally check a graph config
  params    print the reference model's parameter-count table
  scan      classify an ultrasonic scene into obstacle points (CSV)

Exit codes: 0 success, 1 run failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..flowcore.graphdef import SchemaError
from ..flowcore.runtime import GraphValidationError
from ..flowcore.validation import validate_graph
from ..perception.layers import kws_reference_table
from ..robotics.geometry import BeamMode, echo_round_trip_s
from ..robotics.sweep import SweepConfig, scan_points_to_csv, scan_to_points
from .config import load_graph_config, load_scan_scene, packaged_graph
from .nodes import harness_kind_registry
from .reference import report_to_json_str, run_scenario
from .scenario import ScenarioError, load_scenario


def _cmd_run(args) -> int:
    try:
        graph = load_graph_config(args.graph) if args.graph else packaged_graph()
        scenario = load_scenario(args.scenario)
    except (SchemaError, ScenarioError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_scenario(graph, scenario, seed=args.seed)
    except (GraphValidationError, ScenarioError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report_to_json_str(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["status"] == "ok" else 1


def _cmd_validate(args) -> int:
    try:
        graph = load_graph_config(args.graph) if args.graph else packaged_graph()
    except (SchemaError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    diags = validate_graph(graph, harness_kind_registry(), env=_validation_env())
    if not diags:
        print("ok")
        return 0
    for d in diags:
        print(str(d), file=sys.stderr)
    return 2


def _validation_env() -> dict:
    # audio_source factories need audio present; validation runs with a stub
    from ..dsp.audio import AudioBuffer
    import numpy as np

    return {"audio": AudioBuffer(samples=np.zeros(1), sample_rate_hz=16000)}


def _cmd_params(args) -> int:
    print(kws_reference_table().format())
    return 0


def _cmd_scan(args) -> int:
    try:
        doc = load_scan_scene(args.scene)
    except (SchemaError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config = SweepConfig(
        d_max_m=float(doc.get("d_max_m", 2.5)),
        c_air_mps=float(doc.get("c_air_mps", 346.0)),
    )
    raw = []
    for i, p in enumerate(doc["ultrasonic_scene"]):
        theta = float(p["theta_deg"])
        if p.get("distance_m") is None and p.get("t_s") is None:
            raw.append((theta, None))
        elif p.get("t_s") is not None:
            raw.append((theta, float(p["t_s"])))
        else:
            raw.append((theta, echo_round_trip_s(float(p["distance_m"]), config.c_air_mps)))
    mode = BeamMode.PAPER if args.mode == "paper" else BeamMode.TRIG
    climb = args.climb if args.climb is not None else float(doc.get("climb_height_m", 0.05))
    try:
        points = scan_to_points(raw, config=config, climb_height_m=climb, mode=mode)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    csv_text = scan_points_to_csv(points)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowbot", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and emit the JSON report")
    p_run.add_argument("--graph", help="graph config JSON (default: shipped reference pipeline)")
    p_run.add_argument("--scenario", required=True, help="scenario JSON file")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--report", help="write the report here instead of stdout")
    p_run.set_defaults(fn=_cmd_run)

    p_val = sub.add_parser("validate", help="validate a graph config")
    p_val.add_argument("--graph", help="graph config JSON (default: shipped reference pipeline)")
    p_val.set_defaults(fn=_cmd_validate)

    p_par = sub.add_parser("params", help="print the model parameter-count table")
    p_par.set_defaults(fn=_cmd_params)

    p_scan = sub.add_parser("scan", help="convert an ultrasonic scene to obstacle points")
    p_scan.add_argument("--scene", required=True, help="scene JSON file")
    p_scan.add_argument("--mode", choices=["paper", "trig"], default="paper")
    p_scan.add_argument("--climb", type=float, default=None, help="climbable height bound in meters")
    p_scan.add_argument("--out", help="write CSV here instead of stdout")
    p_scan.set_defaults(fn=_cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
