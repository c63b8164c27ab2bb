"""
Command line interface

    python main.py <subcommand> [options]

Reports go to stdout (or -o), diagnostics to stderr. Exit codes: 0 success,
1 usage or I/O error, 2 invalid input, 3 enumeration cap exceeded.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .config import Config
from .errors import CapExceededError, KappaNetError
from .experiment import ExperimentRunner, load_config
from .experiment.random_networks import SHAPES
from .logging_config import configure_logging
from .model.io import parse_assignment, parse_name_list, parse_network, parse_query
from .operations import (RunReport, digest, run_abstract, run_check, run_gen, run_infer, run_oracle, run_predict,
                         run_scomplete)
from .probinfer.bounds import write_trace
from .probinfer.search import STRATEGIES
from .run_ledger import RunLedger

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _read_bytes(path: str) -> bytes:
    if path == "-":
        stream = sys.stdin
        return stream.buffer.read() if hasattr(stream, "buffer") else stream.read().encode("utf-8")
    return Path(path).read_bytes()


class _Inputs:
    """Reads input files once and keeps their digests for the report"""

    def __init__(self):
        self.digests: Dict[str, str] = {}

    def read(self, label: str, path: Optional[str]) -> Optional[bytes]:
        if path is None:
            return None
        data = _read_bytes(path)
        self.digests[label] = digest(data)
        return data

    def network(self, args):
        return parse_network(self.read("net", args.net))

    def assignment(self, label: str, path: Optional[str]):
        data = self.read(label, path)
        return parse_assignment(data, label) if data is not None else None


def _interventions(args, inputs: _Inputs):
    return inputs.assignment("evidence", args.evidence), inputs.assignment("actions", args.actions)


def _cutset(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [name.strip() for name in text.split(",") if name.strip()]


def _dumps(payload: Dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _cmd_predict(args, inputs: _Inputs) -> Tuple[RunReport, Optional[str]]:
    net = inputs.network(args)
    evidence, actions = _interventions(args, inputs)
    report = RunReport("predict", inputs.digests)
    run_predict(report, net, evidence, actions)
    return report, None


def _cmd_scomplete(args, inputs: _Inputs):
    net = inputs.network(args)
    evidence, actions = _interventions(args, inputs)
    report = RunReport("scomplete", inputs.digests)
    cs_cap = args.cs_cap if args.cs_cap is not None else Config.CS_CAP
    run_scomplete(report, net, evidence, actions, cs_cap=cs_cap)
    return report, None


def _cmd_check(args, inputs: _Inputs):
    net = inputs.network(args)
    believed_doc = inputs.read("believed", args.believed)
    believed = parse_name_list(believed_doc, "believed") if believed_doc is not None else None
    evidence, actions = _interventions(args, inputs)
    report = RunReport("check", inputs.digests)
    run_check(report, net, believed, evidence, actions)
    return report, None


def _cmd_abstract(args, inputs: _Inputs):
    net = inputs.network(args)
    report = RunReport("abstract", inputs.digests)
    document = run_abstract(report, net, args.eps)
    return report, _dumps(document)


def _cmd_gen(args, inputs: _Inputs):
    report = RunReport("gen", {'family': args.family, 'n': str(args.n)})
    document = run_gen(report, args.family, args.n, eps=args.eps, seed=args.seed, kind=args.kind, shape=args.shape)
    return report, _dumps(document)


def _cmd_oracle(args, inputs: _Inputs):
    net = inputs.network(args)
    given = inputs.assignment("given", args.given)
    report = RunReport("oracle", inputs.digests)
    run_oracle(report, net, given, parse_query(args.query) if args.query else None, cap=args.cap)
    return report, None


def _cmd_infer(args, inputs: _Inputs):
    net = inputs.network(args)
    evidence = inputs.assignment("evidence", args.evidence)
    report = RunReport(f"infer {args.method}", {**inputs.digests, 'query': args.query})
    _, trace = run_infer(report, args.method, net, parse_query(args.query), evidence, eps=args.eps,
                         budget=args.budget, strategy=args.strategy, cutset=_cutset(args.cutset),
                         time_limit=args.time_limit, cap=args.cap, record_timing=not args.no_timing)
    if args.trace and trace is not None:
        write_trace(trace, args.trace)
    return report, None


def _cmd_experiment(args, inputs: _Inputs):
    inputs.read("config", args.config)
    config = load_config(args.config)
    if args.no_timing:
        config.record_timing = False
    report = RunReport("experiment", inputs.digests)
    frame = ExperimentRunner().run(config)
    report.results = {'rows': len(frame)}
    return report, frame.to_csv(index=False, lineterminator="\n")


def _cmd_serve(args, inputs: _Inputs):
    from .ui.app import app, run_server

    if args.ledger:
        app.config['LEDGER_PATH'] = args.ledger
    run_server(host=args.host, port=args.port)
    return None, None


COMMANDS = {
    'predict': _cmd_predict,
    'scomplete': _cmd_scomplete,
    'check': _cmd_check,
    'abstract': _cmd_abstract,
    'gen': _cmd_gen,
    'oracle': _cmd_oracle,
    'infer': _cmd_infer,
    'experiment': _cmd_experiment,
    'serve': _cmd_serve,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=Config.DEFAULT_SEED, help="Seed for random generation")
    common.add_argument("--cap", type=int, default=None, help="Joint-space guard for exact enumeration")
    common.add_argument("-o", "--output", default=None, help="Write the result here instead of stdout")
    common.add_argument("--log-level", default=None, help="Log level (default from KAPPANET_LOG_LEVEL)")
    common.add_argument("--log-format", choices=("json", "text"), default=None)
    common.add_argument("--no-timing", action="store_true", help="Omit wall times so reports are reproducible")
    common.add_argument("--ledger", default=None, help="Record the run report in this SQLite ledger")

    network = _Parser(add_help=False)
    network.add_argument("--net", default="-", help="Network file ('-' reads stdin)")

    interventions = _Parser(add_help=False)
    interventions.add_argument("--evidence", default=None, help="JSON object of observed root values")
    interventions.add_argument("--actions", default=None, help="JSON object of forced values")

    parser = _Parser(prog="kappanet", description="Plausibility inference in kappa belief networks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("predict", parents=[common, network, interventions], help="Linear-time plausible sets")

    scomplete = sub.add_parser("scomplete", parents=[common, network, interventions],
                               help="Exact plausible sets by staged conditioning")
    scomplete.add_argument("--cs-cap", type=int, default=None, help="Largest number of cutset instantiations")

    check = sub.add_parser("check", parents=[common, network, interventions], help="Completeness certificate")
    check.add_argument("--believed", default=None, help="JSON list of believed variables (default: from Predict)")

    abstract = sub.add_parser("abstract", parents=[common, network], help="Epsilon-OMP of a probability network")
    abstract.add_argument("--eps", type=float, default=Config.DEFAULT_EPSILON)

    gen = sub.add_parser("gen", parents=[common], help="Generate a network")
    gen.add_argument("family", choices=("chain", "and", "random"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--eps", type=float, default=None, help="Stratum base for chain/and (default: config)")
    gen.add_argument("--kind", choices=("kappa", "prob"), default="kappa")
    gen.add_argument("--shape", choices=SHAPES, default="dag")

    oracle = sub.add_parser("oracle", parents=[common, network], help="Brute-force reference answers")
    oracle.add_argument("--given", default=None, help="JSON object to condition on")
    oracle.add_argument("--query", default=None, help="var=val[,var=val]")

    infer = sub.add_parser("infer", parents=[common, network], help="Probability queries")
    infer.add_argument("method", choices=("exact", "bounded", "search"))
    infer.add_argument("--query", required=True, help="var=val[,var=val]")
    infer.add_argument("--evidence", default=None, help="JSON object of observed values")
    infer.add_argument("--eps", type=float, default=None)
    infer.add_argument("--budget", type=int, default=None)
    infer.add_argument("--time-limit", type=float, default=None, help="Seconds")
    infer.add_argument("--strategy", choices=STRATEGIES, default="none")
    infer.add_argument("--cutset", default=None, help="Comma-separated cutset variables")
    infer.add_argument("--trace", default=None, help="Write the anytime trace CSV here")

    experiment = sub.add_parser("experiment", parents=[common], help="Epsilon versus loss-of-mass table")
    experiment.add_argument("--config", required=True)

    serve = sub.add_parser("serve", parents=[common], help="Run the JSON API")
    serve.add_argument("--host", default=Config.API_HOST)
    serve.add_argument("--port", type=int, default=Config.API_PORT)
    return parser


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(str(e))
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.log_level, args.log_format)
    inputs = _Inputs()
    report = None
    exit_code = EXIT_OK
    try:
        report, payload = COMMANDS[args.command](args, inputs)
        if report is None:
            return EXIT_OK
        report.finish(not args.no_timing)
        _emit(payload if payload is not None else _dumps(report.to_dict()), args.output)
    except CapExceededError as e:
        logger.warning("run stopped at enumeration cap", extra={"cap": e.cap, "size": e.size})
        sys.stderr.write(f"error: {e}\n")
        report = RunReport(args.command, inputs.digests).finish(not args.no_timing)
        report.results = {'error': str(e), 'cap': e.cap, 'size': e.size,
                          'partial': e.partial.to_dict() if hasattr(e.partial, 'to_dict') else None}
        _emit(_dumps(report.to_dict()), args.output)
        exit_code = EXIT_CAP
    except (KappaNetError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        exit_code = EXIT_INVALID
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        exit_code = EXIT_USAGE

    if args.ledger and args.command != "serve":
        ledger_report = report.to_dict() if report is not None else {'command': args.command,
                                                                      'inputs': inputs.digests}
        RunLedger(args.ledger).log_run(ledger_report, exit_code)
    return exit_code
