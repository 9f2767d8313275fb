"""Command-line interface.

Subcommands:

    slameval ate   GT EST        absolute trajectory error of one run
    slameval rpe   GT EST        relative pose error of one run
    slameval stats FILE...       motion-attribute table of trajectories
    slameval batch MANIFEST      evaluate a whole cohort, write a report bundle
    slameval synth               generate a ground-truth / estimate file pair

Exit codes: 0 success, 2 bad input (parse or validation failure),
3 empty association (no timestamp pairs matched).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .batch import load_manifest, run_batch, with_overrides
from .errors import EmptyAssociationError, SlamEvalError
from .geom3d import Pose, Rotation
from .metrics import RPE_MODE_ALL_PAIRS, RPE_MODE_FIXED, ate, rpe
from .report import dump_json, write_report_bundle
from .synth import PerturbationSpec, perturb, random_trajectory
from .trajio import DEFAULT_MAX_TIME_DIFF, associate, associate_by_index, load_tum, save_tum
from .trajstats import cohort_stats, resample_stride, sequence_stats

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_EMPTY_ASSOCIATION = 3


def _add_pair_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("gt", help="ground-truth trajectory file (TUM format)")
    p.add_argument("est", help="estimated trajectory file (TUM format)")
    p.add_argument(
        "--max-diff",
        type=float,
        default=DEFAULT_MAX_TIME_DIFF,
        help="association tolerance in seconds (default %(default)s)",
    )
    p.add_argument(
        "--index-assoc",
        action="store_true",
        help="match poses by index instead of timestamps (per-frame datasets)",
    )
    p.add_argument("--json", metavar="PATH", help="also write a machine-readable report")


def _load_pair(args):
    gt = load_tum(args.gt)
    est = load_tum(args.est)
    if args.index_assoc:
        assoc = associate_by_index(gt, est)
    else:
        assoc = associate(gt, est, args.max_diff)
    return gt, est, assoc


def _cmd_ate(args) -> int:
    gt, est, assoc = _load_pair(args)
    report = ate(gt, est, assoc)
    print(f"compared_pairs      {len(assoc)}")
    print(f"ate.rmse            {report.rmse:.6f} m")
    print(f"ate.mean            {report.mean:.6f} m")
    print(f"ate.median          {report.median:.6f} m")
    if args.json:
        doc = {
            "schema_version": 1,
            "metric": "ate",
            "pairs": len(assoc),
            "rmse": report.rmse,
            "mean": report.mean,
            "median": report.median,
        }
        with open(args.json, "w", encoding="utf-8") as fp:
            fp.write(dump_json(doc))
    return EXIT_OK


def _cmd_rpe(args) -> int:
    gt, est, assoc = _load_pair(args)
    report = rpe(gt, est, assoc, args.delta, args.mode, allow_large=args.allow_large)
    rot_deg = math.degrees(report.rot_mean)
    print(f"compared_pairs      {len(report.per_pair_trans)} (mode={report.mode})")
    print(f"rpe.trans_rmse      {report.trans_rmse:.6f} m")
    print(f"rpe.rot_mean        {rot_deg:.6f} deg ({report.rot_mean:.9f} rad)")
    if args.json:
        doc = {
            "schema_version": 1,
            "metric": "rpe",
            "mode": report.mode,
            "delta": report.delta,
            "pairs": len(report.per_pair_trans),
            "trans_rmse": report.trans_rmse,
            "rot_mean_rad": report.rot_mean,
            "rot_mean_deg": rot_deg,
        }
        with open(args.json, "w", encoding="utf-8") as fp:
            fp.write(dump_json(doc))
    return EXIT_OK


def _cmd_stats(args) -> int:
    rows = []
    all_stats = []
    for path in args.files:
        traj = load_tum(path)
        if args.stride > 1:
            traj = resample_stride(traj, args.stride)
        stats = sequence_stats(traj)
        all_stats.append(stats)
        rows.append((traj.traj_id or path, stats))
    if len(all_stats) > 1:
        rows.append(("(cohort mean)", cohort_stats(all_stats)))

    header = f"{'dataset':<28} {'m.vel.p.f':>12} {'m.ang.v.p.f':>12} {'m.frames':>10}"
    print(header)
    for name, s in rows:
        print(
            f"{name:<28} {s.mean_vel_per_frame:>12.6f} "
            f"{s.mean_ang_vel_per_frame:>12.4f} {s.frame_count:>10.1f}"
        )
    return EXIT_OK


def _cmd_batch(args) -> int:
    manifest = load_manifest(args.manifest)
    options = with_overrides(manifest.options, stride=args.stride)
    manifest = replace(manifest, options=options)

    jobs = args.jobs
    if jobs is None:
        jobs = int(os.environ.get("SLAMEVAL_JOBS", "1"))
    outcome = run_batch(manifest, jobs=jobs)

    files = write_report_bundle(outcome, options, args.out, svg=args.svg)
    for failure in outcome.failures:
        print(f"failure: {failure.sequence_id}: {failure.path}: {failure.error}", file=sys.stderr)
    print(f"evaluated {outcome.evaluated_count} of {len(manifest.entries)} sequences")
    if outcome.summary is not None:
        print(f"success_rate        {outcome.summary.success_rate:.4f}")
        for metric, gap in outcome.summary.gap.items():
            if gap is not None:
                print(f"gap[{metric}]       threshold {gap.threshold:.6g} (ratio {gap.ratio:.3g})")
    print(f"report bundle: {len(files)} files in {args.out}")
    if outcome.evaluated_count == 0:
        print("error: no sequence could be evaluated", file=sys.stderr)
        return EXIT_BAD_INPUT
    return EXIT_OK


def _parse_vec3(text: str, name: str) -> tuple[float, float, float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise SlamEvalError(f"{name} expects 3 comma-separated numbers, got {text!r}")
    return tuple(float(p) for p in parts)  # type: ignore[return-value]


def _cmd_synth(args) -> int:
    gt = random_trajectory(args.seed, args.frames, args.step_mean, args.turn_mean)
    global_transform = None
    if args.offset is not None:
        t = _parse_vec3(args.offset, "--offset")
        global_transform = Pose(
            Rotation.from_axis_angle([0.0, 0.0, 1.0], args.offset_yaw), np.array(t)
        )
    spec = PerturbationSpec(
        global_transform=global_transform,
        drift_per_frame=_parse_vec3(args.drift, "--drift"),
        drift_rot_per_frame=args.drift_rot,
        noise_sigma_trans=args.noise_trans,
        noise_sigma_rot=args.noise_rot,
        dropout_fraction=args.dropout,
        seed=args.seed,
    )
    est = perturb(gt, spec)
    save_tum(gt, args.gt_out)
    save_tum(est, args.est_out)
    print(f"wrote {args.gt_out} ({len(gt)} poses) and {args.est_out} ({len(est)} poses)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slameval",
        description="Trajectory evaluation toolkit: ATE/RPE metrics and robustness statistics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ate = sub.add_parser("ate", help="absolute trajectory error")
    _add_pair_arguments(p_ate)
    p_ate.set_defaults(func=_cmd_ate)

    p_rpe = sub.add_parser("rpe", help="relative pose error")
    _add_pair_arguments(p_rpe)
    p_rpe.add_argument("--delta", type=int, default=1, help="frame interval (default 1)")
    p_rpe.add_argument(
        "--mode",
        choices=[RPE_MODE_FIXED, RPE_MODE_ALL_PAIRS],
        default=RPE_MODE_FIXED,
    )
    p_rpe.add_argument(
        "--allow-large",
        action="store_true",
        help="lift the sequence-length cap of all-pairs mode",
    )
    p_rpe.set_defaults(func=_cmd_rpe)

    p_stats = sub.add_parser("stats", help="trajectory attribute table")
    p_stats.add_argument("files", nargs="+", help="trajectory files (TUM format)")
    p_stats.add_argument("--stride", type=int, default=1, help="keep every s-th frame first")
    p_stats.set_defaults(func=_cmd_stats)

    p_batch = sub.add_parser("batch", help="evaluate a manifest of sequences")
    p_batch.add_argument("manifest", help="run manifest (JSON)")
    p_batch.add_argument("--out", required=True, help="output directory for the report bundle")
    p_batch.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="parallel workers (default: $SLAMEVAL_JOBS or 1; 1 is bit-reproducible)",
    )
    p_batch.add_argument("--stride", type=int, default=None, help="override the manifest stride")
    p_batch.add_argument("--svg", action="store_true", help="also write SVG charts")
    p_batch.set_defaults(func=_cmd_batch)

    p_synth = sub.add_parser("synth", help="generate a synthetic gt/estimate pair")
    p_synth.add_argument("--gt-out", required=True, help="output path for ground truth")
    p_synth.add_argument("--est-out", required=True, help="output path for the estimate")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--frames", type=int, default=1000)
    p_synth.add_argument("--step-mean", type=float, default=0.006, help="meters per frame")
    p_synth.add_argument("--turn-mean", type=float, default=0.025, help="radians per frame")
    p_synth.add_argument("--drift", default="0,0,0", help="translation drift per frame, 'dx,dy,dz'")
    p_synth.add_argument("--drift-rot", type=float, default=0.0, help="yaw drift per frame, radians")
    p_synth.add_argument("--noise-trans", type=float, default=0.0, help="translation noise sigma, m")
    p_synth.add_argument("--noise-rot", type=float, default=0.0, help="rotation noise sigma, rad")
    p_synth.add_argument("--dropout", type=float, default=0.0, help="fraction of frames to drop")
    p_synth.add_argument("--offset", default=None, help="global rigid offset 'tx,ty,tz'")
    p_synth.add_argument("--offset-yaw", type=float, default=0.0, help="global yaw offset, radians")
    p_synth.set_defaults(func=_cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EmptyAssociationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_ASSOCIATION
    except (SlamEvalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
