import argparse
import json
import logging
import sys
from pathlib import Path

from .base import WorkflowContext
from .errors import TriodFlowError
from .io import build_network, load_config, read_series
from .anisotropy import WulffBoundary
from .diagnostics import RateFit, SteinerPoint
from .flow.runner import RunFlow
from .network.check import AdmissibilityCheck
from .reparam import MakeCompatible

logger = logging.getLogger(__name__)

INPUT_ERRORS = {"ParseError", "ConfigValidationError", "NotElliptic", "SpecViolation"}


def build_parser():
    parser = argparse.ArgumentParser(prog="triodflow", description="Anisotropic curvature flow of triods")
    parser.add_argument("--checkpoint", help="Write the execution log of this invocation to a JSON file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Evolve the configured triod and write its diagnostics")
    p.add_argument("config")
    p = sub.add_parser("check", help="Report admissibility and ellipticity bounds")
    p.add_argument("config")
    p = sub.add_parser("steiner", help="Compute the anisotropic Steiner point of the endpoints")
    p.add_argument("config")
    p = sub.add_parser("rate-fit", help="Fit C / sqrt(T - t) to the kphi_l2sq column of a run CSV")
    p.add_argument("csv")
    p = sub.add_parser("wulff", help="Sample the Wulff boundary of the configured anisotropy")
    p.add_argument("config")
    p.add_argument("n", type=int)
    p = sub.add_parser("compat", help="Reparametrize the initial triod to satisfy the compatibility conditions")
    p.add_argument("config")
    return parser


def _load(path):
    text_path = Path(path)
    cfg = load_config(text_path)
    return cfg, json.loads(text_path.read_text()), text_path.parent


def _error(message):
    print(f"error: {message}", file=sys.stderr)


def dispatch(argv=None):
    args = build_parser().parse_args(argv)
    context = WorkflowContext()
    try:
        code = _dispatch(args, context)
    except TriodFlowError as err:
        _error(err)
        code = 2 if type(err).__name__ in INPUT_ERRORS else 1
    if args.checkpoint:
        context.save_checkpoint(args.checkpoint)
    return code


def _dispatch(args, context):
    if args.command == "rate-fit":
        result = RateFit().execute(context, series=read_series(args.csv))
        return _report(result)

    cfg, doc, base_dir = _load(args.config)
    if args.command == "run":
        result = RunFlow(base_dir=base_dir).execute(context, config=doc)
        code = _report(result)
        if code == 0 and result.output["failed"]:
            return 1
        return code
    if args.command == "check":
        net = build_network(cfg)
        result = AdmissibilityCheck().execute(
            context,
            anisotropy=cfg.anisotropy.to_dict(),
            curves=net.to_lists(),
            tol=cfg.flow.admissibility_tol,
            a0_floor=cfg.flow.a0_floor,
            samples=cfg.flow.ellipticity_samples,
        )
        code = _report(result)
        if code == 0 and not result.output["passed"]:
            return 1
        return code
    if args.command == "steiner":
        kwargs = {"anisotropy": cfg.anisotropy.to_dict(), "endpoints": [list(p) for p in cfg.endpoints]}
        if cfg.initial.kind == "straight":
            kwargs["q0"] = list(cfg.initial.junction)
        return _report(SteinerPoint().execute(context, **kwargs))
    if args.command == "wulff":
        return _report(WulffBoundary().execute(context, anisotropy=cfg.anisotropy.to_dict(), n=args.n))
    if args.command == "compat":
        net = build_network(cfg)
        result = MakeCompatible().execute(
            context,
            anisotropy=cfg.anisotropy.to_dict(),
            curves=net.to_lists(),
            tol=cfg.flow.admissibility_tol,
        )
        if result.success:
            result.output = {k: v for k, v in result.output.items() if k != "curves"}
        return _report(result)
    raise AssertionError(f"unhandled command {args.command}")


def _report(result):
    if not result.success:
        _error(result.error)
        return 2 if result.error_type in INPUT_ERRORS else 1
    print(json.dumps(result.output, indent=2))
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
