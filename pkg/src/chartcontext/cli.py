"""Command-line entry point: bundle validation, condition assignment,
session scoring, the study service, and the analysis pipeline.

Every command is a thin composition of module operations; outputs are
deterministic for fixed inputs and seeds.  Exit codes: 0 ok, 1 validation
failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, bundle, quiz, report, server
from .geometry import Rect
from .overlay import (
    MinimapSettings,
    OverlaySettings,
    layout_dynamic_context,
    layout_minimap,
    layout_to_dict,
    settings_to_dict,
)
from .tracelog import read_trace_file

BUNDLE_ENV = "CHARTCONTEXT_BUNDLE"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _bundle_path(args) -> Path:
    raw = args.bundle or os.environ.get(BUNDLE_ENV)
    if not raw:
        raise SystemExit(f"no bundle given (use --bundle or ${BUNDLE_ENV})")
    return Path(raw)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    root = _bundle_path(args)
    if not root.exists():
        print(f"error: {root} does not exist", file=sys.stderr)
        return EXIT_IO
    manifest, violations = bundle.load_bundle(root)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        print(f"FAIL: {len(violations)} violation(s)")
        return EXIT_VALIDATION
    n_charts = len(manifest.charts)
    n_variants = len(manifest.questions)
    print(f"OK, {n_charts} charts x {n_variants} variants")
    return EXIT_OK


def cmd_demo_bundle(args) -> int:
    manifest = bundle.make_demo_bundle(args.out, seed=args.seed)
    print(f"demo bundle written to {manifest.root} ({len(manifest.charts)} charts)")
    return EXIT_OK


def cmd_assign(args) -> int:
    assignment = quiz.assign_order(args.participant)
    if args.json:
        doc = {
            "order_index": assignment.order_index,
            "sequence": [{"condition": c, "variant": v} for c, v in assignment.sequence],
        }
        print(json.dumps(doc, indent=2))
    else:
        seq = "  ".join(f"{c}({v})" for c, v in assignment.sequence)
        print(f"participant {args.participant} -> order {assignment.order_index}: {seq}")
    return EXIT_OK


def cmd_score(args) -> int:
    path = Path(args.session_file)
    if not path.is_file():
        print(f"error: {path} not found", file=sys.stderr)
        return EXIT_IO
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        outcomes = quiz.outcomes_from_session_dict(doc)
        score = quiz.score_test(outcomes)
        limit = float(doc["time_limit_s"])
        duration = sum(min(o.elapsed, limit) for o, _ in outcomes)
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: unparsable session file: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"score: {quiz.format_score(score)}")
    print(f"duration_s: {duration:.3f}")
    return EXIT_OK


def cmd_variant_check(args) -> int:
    q_dir = Path(args.bundle_dir) / "questions"
    if not q_dir.is_dir():
        q_dir = Path(args.bundle_dir)  # allow pointing straight at questions/
    questions = []
    problems = []
    for variant in quiz.VARIANTS:
        path = q_dir / f"{variant}.json"
        if not path.is_file():
            problems.append(f"{variant}.json: file missing")
            continue
        try:
            questions.extend(quiz.load_question_bundle(path.read_text(encoding="utf-8")))
        except (OSError, ValueError) as exc:
            problems.append(f"{variant}.json: {exc}")
    problems.extend(quiz.check_variant_coverage(questions))
    if problems:
        for p in problems:
            print(f"violation: {p}")
        return EXIT_VALIDATION
    print(f"OK, {len(questions)} questions cover all variants")
    return EXIT_OK


def cmd_report(args) -> int:
    directory = Path(args.session_dir)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_IO
    data = report.scan_study_dir(directory)
    text = report.render_report(
        data, analyze=args.analyze, perms=args.perms, seed=args.seed, steps=args.steps
    )
    _write_or_print(text, args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    root = _bundle_path(args)
    manifest, violations = bundle.load_bundle(root)
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        print("refusing to serve an invalid bundle", file=sys.stderr)
        return EXIT_VALIDATION
    data_dir = args.data_dir or str(Path.cwd() / "study_data")
    try:
        server.serve_forever(manifest, data_dir, args.host, args.port)
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# --- analyze subcommands ------------------------------------------------------


def _load_traces(directory: Path, sessions_dir: Path | None, drop_skipped: bool, trim_lead: bool):
    traces = [read_trace_file(p) for p in sorted(directory.rglob("*.trace"))]
    if drop_skipped:
        if sessions_dir is None:
            raise SystemExit("--drop-skipped needs --sessions <dir>")
        skipped: set[tuple[str, str, str, str]] = set()
        for path in sorted(sessions_dir.rglob("*.session.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            for rec in doc["records"]:
                if rec["kind"] == "skip":
                    skipped.add(
                        (
                            str(doc["participant_id"]),
                            str(doc["condition"]),
                            str(doc["variant_tag"]),
                            str(rec["question_id"]),
                        )
                    )
        traces = [
            t
            for t in traces
            if (t.participant_id, t.condition, t.variant_tag, t.question_id) not in skipped
        ]
    if trim_lead:
        traces = [analysis.drop_idle_prefix(t) for t in traces]
    return traces


def cmd_analyze_dtw(args) -> int:
    directory = Path(args.in_dir)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_IO
    traces = _load_traces(
        directory,
        Path(args.sessions) if args.sessions else None,
        args.drop_skipped,
        args.trim_lead,
    )
    traces = [t for t in traces if len(t.samples) >= 2]
    if not traces:
        print("error: no usable traces (need >= 2 samples each)", file=sys.stderr)
        return EXIT_VALIDATION
    paths = [analysis.resample(t, args.steps) for t in traces]
    groups = [t.condition for t in traces]
    matrix = analysis.pairwise_dtw_matrix(paths, groups)
    Path(args.out).write_text(analysis.matrix_to_tsv(matrix), encoding="utf-8")
    labels_out = args.labels_out or str(Path(args.out).with_suffix("")) + ".labels.tsv"
    Path(labels_out).write_text(analysis.labels_to_tsv(matrix.ids, groups), encoding="utf-8")
    print(f"wrote {matrix.n}x{matrix.n} matrix to {args.out} and labels to {labels_out}")
    return EXIT_OK


def cmd_analyze_permanova(args) -> int:
    try:
        matrix = analysis.matrix_from_tsv(Path(args.matrix).read_text(encoding="utf-8"))
        label_map = analysis.labels_from_tsv(Path(args.labels).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        labels = [label_map[i] for i in matrix.ids]
    except KeyError as exc:
        print(f"error: no group label for id {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    def fmt(x: float) -> str:
        return "inf" if x == float("inf") else f"{x:.6f}"

    res = analysis.permanova(matrix, labels, n_perm=args.perms, seed=args.seed)
    lines = ["test\tgroups\tn\tF\tp_raw\tp_adjusted\tn_perm\tseed\tdegenerate"]
    lines.append(
        f"omnibus\t{'|'.join(sorted(set(labels)))}\t{res.n}\t{fmt(res.f_stat)}"
        f"\t{res.p_value:.6f}\t-\t{res.n_perm}\t{res.seed}\t{str(res.degenerate).lower()}"
    )
    if args.pairwise:
        for row in analysis.pairwise_permanova_holm(matrix, labels, n_perm=args.perms, seed=args.seed):
            n_pair = sum(1 for l in labels if l in row.pair)
            lines.append(
                f"pairwise\t{row.pair[0]}|{row.pair[1]}\t{n_pair}\t{fmt(row.f_stat)}"
                f"\t{row.p_raw:.6f}\t{row.p_adjusted:.6f}\t{row.n_perm}\t{row.seed}"
                f"\t{str(row.degenerate).lower()}"
            )
    _write_or_print("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_analyze_density(args) -> int:
    directory = Path(args.in_dir)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_IO
    traces = _load_traces(directory, None, False, args.trim_lead)
    grid = analysis.density_grid(traces, bins=args.bins)
    _write_or_print(json.dumps(grid.to_dict()) + "\n", args.out)
    return EXIT_OK


def cmd_analyze_mean_path(args) -> int:
    directory = Path(args.in_dir)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_IO
    traces = [t for t in _load_traces(directory, None, False, args.trim_lead) if len(t.samples) >= 2]
    if not traces:
        print("error: no usable traces", file=sys.stderr)
        return EXIT_VALIDATION
    paths = [analysis.resample(t, args.steps) for t in traces]
    mean = analysis.mean_path(paths)
    doc = {"n_paths": len(paths), "steps": len(mean), "points": mean.points.round(6).tolist()}
    _write_or_print(json.dumps(doc) + "\n", args.out)
    return EXIT_OK


def cmd_analyze_sus(args) -> int:
    raw = args.responses
    rows: list[str]
    if raw.startswith("@"):
        path = Path(raw[1:])
        if not path.is_file():
            print(f"error: {path} not found", file=sys.stderr)
            return EXIT_IO
        rows = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    else:
        rows = [raw]
    scores = []
    for row in rows:
        try:
            items = [int(v) for v in row.replace(",", " ").split()]
            scores.append(analysis.sus_score(items))
        except (ValueError, analysis.AnalysisError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    for s in scores:
        print(f"{s:.1f}")
    if len(scores) >= 2:
        mean, sd = analysis.descriptives(scores)
        print(f"# mean {mean:.2f}  sd {sd:.2f}  n {len(scores)}")
    return EXIT_OK


# --- golden layout export (shared engine/UI tests) ------------------------------


def scripted_pointer_path(n: int = 9) -> list[tuple[float, float]]:
    """Deterministic pointer sweep across the chart plus edge/off-chart probes."""
    pts = []
    for k in range(n):
        t = k / (n - 1)
        pts.append((0.05 + 0.9 * t, 0.95 - 0.9 * t))
    pts += [(0.01, 0.5), (0.99, 0.02), (0.5, 0.99), (1.5, 0.5)]
    return pts


GOLDEN_CASES = [
    ("dynamic-context", {}),
    ("dynamic-context", {"axis_ratio": 0.8, "crosshair_reach": 0.5, "outer_dimming": False}),
    ("dynamic-context", {"axis_ratio": 1.0}),
    ("mini-map", {}),
    ("mini-map", {"corner": "bottom-left", "map_scale": 0.45, "indicator_radius": 0.25}),
]


def export_golden_layouts(manifest: bundle.BundleManifest, chart_id: str) -> dict:
    from .annotation import annotation_to_dict
    from .overlay import apply_setting

    entry = manifest.charts[chart_id]
    chart_rect = Rect(0.0, 0.0, 1.0, 1.0)
    cases = []
    for method, overrides in GOLDEN_CASES:
        settings = OverlaySettings() if method == "dynamic-context" else MinimapSettings()
        for key, value in overrides.items():
            settings = apply_setting(settings, key, value)
        for pointer in scripted_pointer_path():
            if method == "dynamic-context":
                layout = layout_dynamic_context(pointer, settings, entry.annotation, chart_rect)
            else:
                layout = layout_minimap(pointer, settings, entry.annotation, chart_rect)
            cases.append(
                {
                    "method": method,
                    "settings": settings_to_dict(settings),
                    "pointer": [pointer[0], pointer[1]],
                    "layout": layout_to_dict(layout),
                }
            )
    return {
        "chart_id": chart_id,
        "annotation": annotation_to_dict(entry.annotation),
        "chart_rect": chart_rect.as_list(),
        "cases": cases,
    }


def cmd_golden(args) -> int:
    root = _bundle_path(args)
    manifest, violations = bundle.load_bundle(root)
    if violations:
        print("error: bundle invalid; run validate", file=sys.stderr)
        return EXIT_VALIDATION
    chart_id = args.chart or sorted(manifest.charts)[0]
    if chart_id not in manifest.charts:
        print(f"error: unknown chart {chart_id!r}", file=sys.stderr)
        return EXIT_VALIDATION
    doc = export_golden_layouts(manifest, chart_id)
    _write_or_print(json.dumps(doc, indent=1) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chartcontext",
        description="Chart-context overlays, quiz sessions, trace logging, and trajectory statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a chart bundle")
    p.add_argument("--bundle", help=f"bundle root (default ${BUNDLE_ENV})")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("demo-bundle", help="generate a synthetic, valid demo bundle")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(fn=cmd_demo_bundle)

    p = sub.add_parser("assign", help="counterbalanced condition order for a participant")
    p.add_argument("--participant", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_assign)

    p = sub.add_parser("score", help="score one session log")
    p.add_argument("session_file")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("variant-check", help="check question variant coverage")
    p.add_argument("bundle_dir", help="bundle root or questions/ directory")
    p.set_defaults(fn=cmd_variant_check)

    p = sub.add_parser("report", help="summarize a directory of sessions and traces")
    p.add_argument("session_dir")
    p.add_argument("--out")
    p.add_argument("--analyze", action="store_true", help="append trajectory permanova tables")
    p.add_argument("--perms", type=int, default=999)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=analysis.RESAMPLE_STEPS)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("serve", help="serve the bundle + layout/session/trace endpoints")
    p.add_argument("--bundle", help=f"bundle root (default ${BUNDLE_ENV})")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", help="where sessions/ and traces/ are written (default ./study_data)")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("golden", help="export golden layout documents for UI agreement tests")
    p.add_argument("--bundle", help=f"bundle root (default ${BUNDLE_ENV})")
    p.add_argument("--chart", help="chart id (default: first chart)")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_golden)

    pa = sub.add_parser("analyze", help="trajectory statistics pipeline")
    asub = pa.add_subparsers(dest="analyze_command", required=True)

    p = asub.add_parser("dtw", help="pairwise DTW distance matrix from trace files")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labels-out")
    p.add_argument("--steps", type=int, default=analysis.RESAMPLE_STEPS)
    p.add_argument("--sessions", help="session dir (for --drop-skipped)")
    p.add_argument("--drop-skipped", action="store_true", help="exclude traces of skipped questions")
    p.add_argument("--trim-lead", action="store_true", help="drop samples before the first pointer move")
    p.set_defaults(fn=cmd_analyze_dtw)

    p = asub.add_parser("permanova", help="group test on a distance matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--perms", type=int, default=999)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairwise", action="store_true", help="add pairwise tests with Holm correction")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_analyze_permanova)

    p = asub.add_parser("density", help="pointer density grid from trace files")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--trim-lead", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_analyze_density)

    p = asub.add_parser("mean-path", help="mean trajectory across trace files")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--steps", type=int, default=analysis.RESAMPLE_STEPS)
    p.add_argument("--trim-lead", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_analyze_mean_path)

    p = asub.add_parser("sus", help="usability-scale score ('5,1,5,...' or @file with one row per line)")
    p.add_argument("responses")
    p.set_defaults(fn=cmd_analyze_sus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except BrokenPipeError:
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
