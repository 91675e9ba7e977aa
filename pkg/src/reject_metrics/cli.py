"""Command-line interface.

Subcommands: measures, curve, compare, relopt-map, synth, reconstruct.
Exit codes: 0 success, 2 usage error, 3 data error, 4 infeasibility.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .comparison import (
    CostSpec,
    beta_matrix,
    beta_matrix_from_quality,
    compare_rejectors,
    dominance,
    min_rho_no_rejection,
    rho_threshold,
)
from .exceptions import (
    InconsistentCountError,
    InfeasibleTripletError,
    RejectMetricsError,
    UsageError,
)
from .io import (
    PredictionRecord,
    RunReport,
    curve_csv_text,
    input_digest,
    matrix_csv_text,
    parse_curve_csv,
    point_to_dict,
    read_records,
    records_to_predictions,
    write_records_csv,
)
from .measures import (
    TIE_POLICIES,
    accuracy_vector,
    operating_point,
    partition_counts,
    rejection_curve,
    rejection_mask_for_fraction,
)
from .reconstruction import MeasureTriplet, reconstruct
from .svg import line_chart_svg
from .synth import (
    GENERATOR_NAME,
    classify_nearest_center,
    confidence_breaking_ties,
    confidence_max_prob,
    generate_gaussians,
)

# relopt-map builds an m x m table; beyond this ask the caller to grid down.
_MATRIX_POINT_CAP = 1500

_PHI_DISPLAY_CAP = 10.0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleTripletError, InconsistentCountError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except RejectMetricsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reject-metrics",
        description="Evaluate and compare classifiers with a reject option.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(required=True, metavar="command")

    p = sub.add_parser("measures", help="measures of one operating point from a prediction file")
    p.add_argument("input", help="prediction file (.csv or .json)")
    p.add_argument("--rejected-col", action="store_true",
                   help="take the rejection mask from the file's rejected column")
    p.add_argument("--reject-fraction", type=float, metavar="R",
                   help="reject the R lowest-confidence fraction instead")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="group")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.set_defaults(func=_cmd_measures)

    p = sub.add_parser("curve", help="sweep measure-vs-rejection curves")
    p.add_argument("input", help="prediction file with confidences")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="group")
    p.add_argument("--grid", type=int, metavar="N",
                   help="downsample to rejected fractions j/N, j = 0..N")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--svg", metavar="PATH", help="also write an SVG chart of the curves")
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("compare", help="compare two operating points or two prediction files")
    p.add_argument("files", nargs="*", metavar="FILE",
                   help="two prediction files with rejected columns")
    p.add_argument("--p1", nargs=2, type=float, metavar=("A1", "R1"),
                   help="first operating point as accuracy and rejected fraction")
    p.add_argument("--p0", nargs=2, type=float, metavar=("A0", "R0"),
                   help="reference operating point")
    p.add_argument("--rho", type=float, help="rejection cost weight in [0, 1]")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("relopt-map", help="pairwise beta map over a curve")
    p.add_argument("input", help="prediction file, or a curve CSV written by the curve command")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="group")
    p.add_argument("--grid", type=int, metavar="N")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_relopt_map)

    p = sub.add_parser("synth", help="generate the four-Gaussian benchmark and its curves")
    p.add_argument("--n", type=int, required=True, help="number of samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rejector", choices=("maxprob", "bt", "both"), default="both")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="group")
    p.add_argument("--grid", type=int, metavar="N")
    p.add_argument("--out", required=True, metavar="PREFIX",
                   help="path prefix for the emitted dataset, curve, and report files")
    p.add_argument("--svg", action="store_true", help="also write SVG charts of the curves")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("reconstruct", help="recover the four counts from (A, Q, r, n)")
    p.add_argument("--A", type=float, required=True, help="nonrejected accuracy")
    p.add_argument("--Q", type=float, required=True, help="classification quality")
    p.add_argument("--r", type=float, required=True, help="rejected fraction")
    p.add_argument("--n", type=int, required=True, help="total sample count")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_reconstruct)

    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(command: str, **extra) -> dict:
    meta = {"tool": f"reject-metrics {__version__}", "command": command}
    meta.update(extra)
    return meta


def _confidence_or_usage(preds):
    if preds.confidence is None or not np.isfinite(preds.confidence).all():
        raise UsageError("every record needs a confidence value for this operation")
    return preds.confidence


def _resolve_mask(args, preds, file_mask):
    fraction = args.reject_fraction
    if args.rejected_col and fraction is not None:
        raise UsageError("--rejected-col and --reject-fraction are mutually exclusive")
    if args.rejected_col:
        if file_mask is None:
            raise UsageError("--rejected-col given but the input has no rejected column")
        return file_mask
    if fraction is not None:
        if file_mask is not None:
            raise UsageError(
                "the input already has a rejected column; "
                "pass --rejected-col to use it or remove it to use --reject-fraction"
            )
        if not 0 <= fraction <= 1:
            raise UsageError("--reject-fraction must lie in [0, 1]")
        return rejection_mask_for_fraction(_confidence_or_usage(preds), fraction, args.tie_policy)
    if file_mask is not None:
        return file_mask
    raise UsageError("no rejection source: add a rejected column or pass --reject-fraction")


def _cmd_measures(args) -> int:
    records = read_records(args.input)
    preds, file_mask = records_to_predictions(records)
    mask = _resolve_mask(args, preds, file_mask)
    counts = partition_counts(accuracy_vector(preds), mask)
    point = operating_point(counts)
    if args.format == "csv":
        from .io import format_float, phi_for_csv

        header = "r,A,Q,phi,an,mn,ar,mr\n"
        row = ",".join([
            format_float(point.r),
            "" if point.A is None else format_float(point.A),
            format_float(point.Q),
            phi_for_csv(point.phi),
            str(counts.an), str(counts.mn), str(counts.ar), str(counts.mr),
        ])
        _emit(header + row + "\n", args.out)
    else:
        meta = _meta(
            "measures",
            input=args.input,
            input_digest=input_digest(args.input),
            n=counts.n,
        )
        if args.reject_fraction is not None:
            meta["reject_fraction"] = args.reject_fraction
            meta["tie_policy"] = args.tie_policy
        report = RunReport(meta=meta, points=[point_to_dict(point, counts)])
        _emit(report.to_json(), args.out)
    return 0


def _grid_indices(curve, grid: int | None) -> list[int]:
    if grid is None:
        return list(range(len(curve.points)))
    if grid < 1:
        raise UsageError("--grid must be a positive integer")
    seen = set()
    out = []
    for j in range(grid + 1):
        idx = curve.index_at_fraction(j / grid)
        if idx not in seen:
            seen.add(idx)
            out.append(idx)
    return out


def _curve_svg_text(points, title: str) -> str:
    a_pairs = [(p.r, p.A) for p in points if p.A is not None]
    phi_ys = [min(p.phi, _PHI_DISPLAY_CAP) for p in points]
    panels = [
        {
            "title": "nonrejected accuracy",
            "x_label": "rejected fraction",
            "y_label": "A",
            "y_range": (0.0, 1.0),
            "series": [("", [x for x, _ in a_pairs], [y for _, y in a_pairs])],
        },
        {
            "title": "classification quality",
            "x_label": "rejected fraction",
            "y_label": "Q",
            "y_range": (0.0, 1.0),
            "series": [("", [p.r for p in points], [p.Q for p in points])],
        },
        {
            "title": f"rejection quality (display capped at {_PHI_DISPLAY_CAP:g})",
            "x_label": "rejected fraction",
            "y_label": "phi",
            "series": [("", [p.r for p in points], phi_ys)],
        },
    ]
    return line_chart_svg(panels, title=title)


def _cmd_curve(args) -> int:
    records = read_records(args.input)
    preds, _ = records_to_predictions(records)
    conf = _confidence_or_usage(preds)
    curve = rejection_curve(accuracy_vector(preds), conf, args.tie_policy)
    idxs = _grid_indices(curve, args.grid)
    points = [curve.points[i] for i in idxs]
    counts = [curve.counts[i] for i in idxs]
    if args.format == "csv":
        _emit(curve_csv_text(points), args.out)
    else:
        meta = _meta(
            "curve",
            input=args.input,
            input_digest=input_digest(args.input),
            tie_policy=args.tie_policy,
            n=curve.n,
        )
        if args.grid is not None:
            meta["grid"] = args.grid
        report = RunReport(
            meta=meta,
            points=[point_to_dict(p, c) for p, c in zip(points, counts)],
        )
        _emit(report.to_json(), args.out)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(_curve_svg_text(points, title=f"rejection sweep: {args.input}"))
    return 0


def _verdict_dict(verdict) -> dict:
    return {
        "kind": verdict.kind,
        "beta": verdict.beta,
        "rho_threshold": verdict.rho_threshold,
        "dominance_case": verdict.dominance_case,
        "rho": verdict.rho,
        "outcome": verdict.outcome,
        "swapped": verdict.swapped,
    }


def _cmd_compare(args) -> int:
    point_mode = args.p1 is not None or args.p0 is not None
    spec = None
    if args.rho is not None:
        spec = CostSpec(args.rho)
    if point_mode:
        if args.files:
            raise UsageError("give either two files or two --p1/--p0 points, not both")
        if args.p1 is None or args.p0 is None:
            raise UsageError("point comparison needs both --p1 and --p0")
        verdict = compare_rejectors(tuple(args.p1), tuple(args.p0), spec)
        meta = _meta("compare", p1=list(args.p1), p0=list(args.p0))
    else:
        if len(args.files) != 2:
            raise UsageError("file comparison needs exactly two prediction files")
        counts = []
        digests = []
        for path in args.files:
            records = read_records(path)
            preds, file_mask = records_to_predictions(records)
            if file_mask is None:
                raise UsageError(f"{path}: file comparison needs a rejected column")
            counts.append(partition_counts(accuracy_vector(preds), file_mask))
            digests.append(input_digest(path))
        c1, c0 = counts
        verdict = dominance(c1, c0)
        if verdict is None:
            pt1, pt0 = operating_point(c1), operating_point(c0)
            verdict = compare_rejectors((pt1.A, pt1.r), (pt0.A, pt0.r), spec)
        meta = _meta(
            "compare",
            inputs=list(args.files),
            input_digests=digests,
        )
    if args.rho is not None:
        meta["rho"] = args.rho
    report = RunReport(meta=meta, comparisons=[_verdict_dict(verdict)])
    _emit(report.to_json(), args.out)
    return 0


def _looks_like_curve_csv(path: str) -> bool:
    if str(path).lower().endswith(".json"):
        return False
    try:
        with open(path) as fh:
            first = fh.readline().strip()
    except OSError:
        return False
    return first == "r,A,Q,phi"


def _cmd_relopt_map(args) -> int:
    if _looks_like_curve_csv(args.input):
        rows = parse_curve_csv(args.input)
        point_r = [r for r, _, _, _ in rows]
        qs = [q for _, _, q, _ in rows]
        if len(rows) > _MATRIX_POINT_CAP:
            raise UsageError(
                f"curve has {len(rows)} points, beyond the {_MATRIX_POINT_CAP}-point "
                "map limit; regenerate it with --grid"
            )
        # beta from the quality slope needs no accuracy column, so the
        # all-rejected row is graded like any other
        matrix = beta_matrix_from_quality(qs, point_r)
        ref = next((i for i, r in enumerate(point_r) if r == 0), None)
        if ref is None:
            raise RejectMetricsError("curve file has no r = 0 row; cannot anchor the min-rho column")
        min_rho: list[float | None] = [
            None if matrix[i][ref] is None else rho_threshold(matrix[i][ref])
            for i in range(len(rows))
        ]
    else:
        records = read_records(args.input)
        preds, _ = records_to_predictions(records)
        conf = _confidence_or_usage(preds)
        curve = rejection_curve(accuracy_vector(preds), conf, args.tie_policy)
        idxs = _grid_indices(curve, args.grid)
        if len(idxs) > _MATRIX_POINT_CAP:
            raise UsageError(
                f"curve has {len(idxs)} points, beyond the {_MATRIX_POINT_CAP}-point "
                "map limit; pass --grid to downsample"
            )
        sel = [curve.counts[i] for i in idxs]
        point_r = [curve.points[i].r for i in idxs]
        matrix = beta_matrix(sel)
        min_rho = min_rho_no_rejection(sel)

    if args.format == "csv":
        _emit(matrix_csv_text(point_r, matrix, min_rho), args.out)
    else:
        meta = _meta(
            "relopt-map",
            input=args.input,
            input_digest=input_digest(args.input),
        )
        report = RunReport(
            meta=meta,
            beta_matrix={
                "point_r": point_r,
                "beta": matrix,
                "min_rho_no_reject": min_rho,
            },
        )
        _emit(report.to_json(), args.out)
    return 0


_REJECTOR_SCORES = {
    "maxprob": confidence_max_prob,
    "bt": confidence_breaking_ties,
}


def _cmd_synth(args) -> int:
    rejectors = ["maxprob", "bt"] if args.rejector == "both" else [args.rejector]
    dataset = generate_gaussians(args.n, args.seed)
    y_pred = classify_nearest_center(dataset)
    a = (y_pred == dataset.y_true).astype(np.int64)

    files: dict[str, str] = {}
    points = []
    for name in rejectors:
        conf = _REJECTOR_SCORES[name](dataset.posteriors)
        records = [
            PredictionRecord(
                id=str(i),
                y_true=int(dataset.y_true[i]),
                y_pred=int(y_pred[i]),
                confidence=float(conf[i]),
            )
            for i in range(dataset.n)
        ]
        data_path = f"{args.out}_{name}.csv"
        write_records_csv(records, data_path)
        files[f"{name}_dataset"] = data_path

        curve = rejection_curve(a, conf, args.tie_policy)
        idxs = _grid_indices(curve, args.grid)
        sel_points = [curve.points[i] for i in idxs]
        curve_path = f"{args.out}_{name}_curve.csv"
        with open(curve_path, "w") as fh:
            fh.write(curve_csv_text(sel_points))
        files[f"{name}_curve"] = curve_path
        if args.svg:
            svg_path = f"{args.out}_{name}_curve.svg"
            with open(svg_path, "w") as fh:
                fh.write(_curve_svg_text(sel_points, title=f"synthetic benchmark, {name} rejector"))
            files[f"{name}_svg"] = svg_path
        entry = point_to_dict(curve.points[0], curve.counts[0])
        entry["rejector"] = name
        points.append(entry)

    meta = _meta(
        "synth",
        n=dataset.n,
        seed=dataset.seed,
        generator=dataset.generator,
        tie_policy=args.tie_policy,
        rejectors=rejectors,
        files=files,
    )
    if args.grid is not None:
        meta["grid"] = args.grid
    report = RunReport(meta=meta, points=points)
    report_path = f"{args.out}_report.json"
    with open(report_path, "w") as fh:
        fh.write(report.to_json())
    sys.stdout.write(report.to_json())
    return 0


def _cmd_reconstruct(args) -> int:
    t = MeasureTriplet(A=args.A, Q=args.Q, r=args.r, n=args.n)
    counts = reconstruct(t)
    point = operating_point(counts)
    report = RunReport(
        meta=_meta("reconstruct", A=args.A, Q=args.Q, r=args.r, n=args.n),
        points=[point_to_dict(point, counts)],
    )
    _emit(report.to_json(), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
