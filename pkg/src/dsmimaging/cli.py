"""Command line: ``dsm run``, ``dsm parse-fresnel``, ``dsm selftest``."""

import argparse
import json
import logging
import sys

from . import experiment, fresnel_io
from .errors import DsmError
from .forward import msr_to_csv

log = logging.getLogger("dsmimaging")


def _cmd_run(args):
    cfg = experiment.load_config(args.config, args.set)
    summary = experiment.run_experiment(cfg, args.output)
    for job in summary["jobs"]:
        line = f"{job['algorithm']:>5} L={job['L']:<3} argmax=({job['argmax'][0]:+.4f}, {job['argmax'][1]:+.4f})"
        if "best_jaccard" in job:
            line += f"  best J={job['best_jaccard']:.1f}% at kappa={job['best_kappa']:.2f}"
        print(line)
    print(f"wrote {len(summary['jobs'])} maps to {args.output or cfg.output}")
    return 0


def _cmd_parse_fresnel(args):
    schema = fresnel_io.parse_schema(args.schema)
    try:
        with open(args.file, encoding="utf-8") as fh:
            recs = fresnel_io.parse_fresnel(fh, schema, args.freq)
    except OSError as exc:
        raise experiment.export.OutputError(f"cannot read {args.file}: {exc.strerror}") from exc
    geom = fresnel_io.rotating_geometry() if args.geometry == "rotating" else fresnel_io.default_geometry(args.freq)
    msr = fresnel_io.to_msr(recs, geom)
    report = {
        "records": len(recs),
        "skipped_lines": len(recs.skipped_lines),
        "transmitters": len({r.transmitter for r in recs}),
        "receivers": len({r.receiver for r in recs}),
        "msr_shape": list(msr.shape),
        "mask_coverage": float(msr.mask.mean()),
    }
    print(json.dumps(report, indent=2))
    if args.out:
        experiment.export.write_text(args.out, msr_to_csv(msr))
    return 0


def _cmd_selftest(args):
    from .selftest import run_selftest

    return 0 if run_selftest() else 1


def build_parser():
    p = argparse.ArgumentParser(prog="dsm", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config (path or bundled name)")
    run.add_argument("config", help=f"config path or one of: {', '.join(experiment.bundled_names())}")
    run.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE", help="override a config key")
    run.add_argument("-o", "--output", help="output directory (overrides experiment.output)")
    run.set_defaults(func=_cmd_run)

    pf = sub.add_parser("parse-fresnel", help="parse a Fresnel .exp file and report its MSR")
    pf.add_argument("file")
    pf.add_argument("--freq", type=float, required=True, help="frequency to select, GHz")
    pf.add_argument("--schema", default="default", help="column mapping, e.g. tx=0,rx=1,freq=2,...")
    pf.add_argument("--geometry", choices=["fixed", "rotating"], default="fixed")
    pf.add_argument("--out", help="write the MSR as CSV here")
    pf.set_defaults(func=_cmd_parse_fresnel)

    st = sub.add_parser("selftest", help="run the built-in invariant checks")
    st.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except DsmError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
