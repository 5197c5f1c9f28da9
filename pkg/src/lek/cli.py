"""Command-line front end; one subcommand per pipeline stage.

Exit codes: 0 success, 1 data errors (per-case listing on stderr), 2 usage
errors. File writes are atomic (temp file + rename), and nothing here
consults the clock, locale, or any randomness, so identical inputs give
identical outputs. Set LEK_NO_COLOR=1 to disable ANSI styling on stderr.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .color_constancy import ColorConstancyConfig, correct_with_stats
from .ensemble import EnsembleStrategy, fuse
from .errors import EvaluationFailedError, LekError
from .evaluation import EvalSettings, evaluate_manifest, load_manifest
from .fixtures import FixtureSpec, generate_fixtures
from .ingest import ThresholdConfig, decode_probability_map, threshold_probability_map
from .metrics import METRIC_FIELDS, score_masks
from .postprocess import MorphologyConfig, clean
from .raster import decode_image, decode_mask, encode_image, encode_mask
from .report import FORMATS, render_report, report_from_json

VISIBLE_COMMANDS = "{preprocess,postprocess,threshold,ensemble,score,evaluate,report}"
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
MASK_SUFFIXES = (".png",)


def _style(text, code):
    if os.environ.get("LEK_NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _fail(message):
    print(_style("error:", "31") + f" {message}", file=sys.stderr)
    return 1


def _note(message):
    print(message, file=sys.stderr)


def _atomic_write_bytes(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".{os.getpid()}.tmp")
    try:
        tmp.write_bytes(data)
        os.replace(tmp, path)
    finally:
        tmp.unlink(missing_ok=True)


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        _atomic_write_bytes(out_path, text.encode("utf-8"))


def _collect_inputs(inputs, suffixes):
    """Expand files and directories into a sorted, de-duplicated file list."""
    files = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            files.extend(
                child
                for child in sorted(p.iterdir())
                if child.suffix.lower() in suffixes
            )
        elif p.is_file():
            files.append(p)
        else:
            raise LekError(f"input not found: {p}")
    unique = sorted(set(files))
    if not unique:
        raise LekError("no input files matched")
    return unique


def _parse_min_area(value):
    v = float(value)
    if v < 0:
        raise argparse.ArgumentTypeError("min-area must be non-negative")
    return v if v < 1.0 else int(v)


def _parse_size(value):
    try:
        w, h = value.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError("size must look like 64x64") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lek",
        description="Fuse, clean and score lesion segmentation masks.",
    )
    parser.add_argument("--version", action="version", version=f"lek {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar=VISIBLE_COMMANDS)

    p = sub.add_parser("preprocess", help="apply Shades of Gray color constancy")
    p.add_argument("inputs", nargs="+", help="image files or directories")
    p.add_argument("--p", type=float, default=6.0, help="Minkowski norm order (default 6)")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("postprocess", help="fill holes and remove artifacts")
    p.add_argument("inputs", nargs="+", help="mask files or directories")
    p.add_argument("--min-area", type=_parse_min_area, default=0.001,
                   help="component area floor: fraction (<1) or pixels (default 0.001)")
    p.add_argument("--keep-largest", action=argparse.BooleanOptionalAction, default=True,
                   help="keep only the largest component (default on)")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("threshold", help="binarize probability-map PNGs")
    p.add_argument("inputs", nargs="+", help="probability map files or directories")
    p.add_argument("--cutoff", type=float, default=0.5, help="lesion cutoff (default 0.5)")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("ensemble", help="fuse two directories of masks")
    p.add_argument("dir_a", help="first model's mask directory")
    p.add_argument("dir_b", help="second model's mask directory")
    p.add_argument("--strategy", choices=[s.value for s in EnsembleStrategy],
                   default="add", help="fusion rule (default add)")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("score", help="score one prediction against one truth mask")
    p.add_argument("pred", help="prediction mask PNG")
    p.add_argument("truth", help="ground-truth mask PNG")

    p = sub.add_parser("evaluate", help="run the benchmark over a manifest")
    p.add_argument("--manifest", required=True, help="manifest CSV path")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strategy", choices=[s.value for s in EnsembleStrategy],
                       default="add", help="fusion rule (default add)")
    group.add_argument("--model", help="score a single named model instead of fusing")
    p.add_argument("--min-area", type=_parse_min_area, default=0.001)
    p.add_argument("--keep-largest", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                   help="parallel case workers (output is independent of this)")

    p = sub.add_parser("report", help="re-render a stored JSON report")
    p.add_argument("report", help="JSON report produced by evaluate")
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("generate-fixtures")  # hidden: not in the metavar list
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--cases", type=int, default=10)
    p.add_argument("--size", type=_parse_size, default=(64, 64), metavar="WxH")
    p.add_argument("--seed", type=int, default=2017)

    return parser


def _cmd_preprocess(args):
    cfg = ColorConstancyConfig(minkowski_p=args.p)
    for path in _collect_inputs(args.inputs, IMAGE_SUFFIXES):
        corrected, stats = correct_with_stats(decode_image(path.read_bytes()), cfg)
        _atomic_write_bytes(Path(args.out) / (path.stem + ".png"), encode_image(corrected))
        detail = "identity fallback (all-black input)" if stats.identity_fallback \
            else f"{stats.clipped_pixels} clipped px"
        _note(f"{path.name}: {detail}")
    return 0


def _cmd_postprocess(args):
    cfg = MorphologyConfig(min_area=args.min_area, keep_largest_only=args.keep_largest)
    for path in _collect_inputs(args.inputs, MASK_SUFFIXES):
        cleaned = clean(decode_mask(path.read_bytes()), cfg)
        _atomic_write_bytes(Path(args.out) / path.name, encode_mask(cleaned))
    return 0


def _cmd_threshold(args):
    cfg = ThresholdConfig(cutoff=args.cutoff)
    for path in _collect_inputs(args.inputs, MASK_SUFFIXES):
        pmap = decode_probability_map(path.read_bytes())
        mask = threshold_probability_map(pmap, cfg)
        _atomic_write_bytes(Path(args.out) / path.name, encode_mask(mask))
    return 0


def _cmd_ensemble(args):
    dir_a, dir_b = Path(args.dir_a), Path(args.dir_b)
    names_a = {p.name for p in dir_a.glob("*.png")}
    names_b = {p.name for p in dir_b.glob("*.png")}
    if names_a != names_b:
        for name in sorted(names_a ^ names_b):
            _note(f"unpaired mask: {name}")
        return _fail("mask directories do not contain the same file names")
    if not names_a:
        return _fail("no mask pairs found")
    strategy = EnsembleStrategy(args.strategy)
    for name in sorted(names_a):
        fused = fuse(
            decode_mask((dir_a / name).read_bytes()),
            decode_mask((dir_b / name).read_bytes()),
            strategy,
        )
        _atomic_write_bytes(Path(args.out) / name, encode_mask(fused))
    return 0


def _cmd_score(args):
    pred = decode_mask(Path(args.pred).read_bytes())
    truth = decode_mask(Path(args.truth).read_bytes())
    metrics = score_masks(pred, truth)
    line = {f: getattr(metrics, f) for f in METRIC_FIELDS}
    sys.stdout.write(json.dumps(line) + "\n")
    return 0


def _cmd_evaluate(args):
    manifest = load_manifest(args.manifest)
    missing = manifest.missing_paths()
    if missing:
        for case_id, path in missing:
            _note(f"case {case_id}: missing file {path}")
        return _fail(f"{len(missing)} referenced file(s) missing")
    settings = EvalSettings(
        strategy=EnsembleStrategy(args.strategy),
        model=args.model,
        morphology=MorphologyConfig(
            min_area=args.min_area, keep_largest_only=args.keep_largest
        ),
    )
    try:
        result = evaluate_manifest(manifest, settings, workers=max(1, args.workers))
    except EvaluationFailedError as exc:
        for err in exc.case_errors:
            _note(str(err))
        return _fail(str(exc))
    _emit(render_report(result, args.format), args.out)
    _note(_style(f"ok: {result.overall_cases} case(s) evaluated", "32"))
    return 0


def _cmd_report(args):
    report = report_from_json(Path(args.report).read_text())
    _emit(render_report(report, args.format), args.out)
    return 0


def _cmd_generate_fixtures(args):
    width, height = args.size
    spec = FixtureSpec(cases=args.cases, width=width, height=height, seed=args.seed)
    manifest = generate_fixtures(spec, args.out)
    _note(f"wrote {len(manifest.records)} case(s) to {args.out}")
    return 0


_HANDLERS = {
    "preprocess": _cmd_preprocess,
    "postprocess": _cmd_postprocess,
    "threshold": _cmd_threshold,
    "ensemble": _cmd_ensemble,
    "score": _cmd_score,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
    "generate-fixtures": _cmd_generate_fixtures,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (LekError, OSError, ValueError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
