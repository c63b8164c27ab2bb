"""
Operations shared by the command line and the JSON API
Each function takes already-parsed inputs and returns a RunReport.
"""
import hashlib
import time
from typing import Dict, Iterable, List, Mapping, Optional

from .abstraction import abstract_network, generate_and, generate_chain
from .config import Config
from .errors import NetworkValidationError
from .experiment.random_networks import network_suite
from .model.io import serialize_network
from .model.joint import world_count
from .model.kappa import format_kappa
from .model.network import KappaNetwork, ProbNetwork, QuantifiedNetwork
from .plausibility import KappaOracle, believed_nodes, check_complete, is_definite, predict, scomplete
from .plausibility.oracle import ordered_values
from .plausibility.predict import believed_names, prepare
from .probinfer import bounded_conditioning, exact_marginals, exact_query, poole_search
from .probinfer.exact import Query


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


class RunReport:
    """
    Machine-readable record of one run. Field order is fixed:
    command, inputs, results, counters, wall_time_seconds.
    """

    def __init__(self, command: str, inputs: Optional[Mapping[str, str]] = None):
        self.command = command
        self.inputs: Dict[str, str] = dict(inputs or {})
        self.results: Dict = {}
        self.counters: Dict = {}
        self.wall_time_seconds: Optional[float] = None
        self._started = time.perf_counter()

    def finish(self, record_timing: bool = True) -> "RunReport":
        self.wall_time_seconds = round(time.perf_counter() - self._started, 6) if record_timing else None
        return self

    def to_dict(self) -> Dict:
        return {
            'command': self.command,
            'inputs': self.inputs,
            'results': self.results,
            'counters': self.counters,
            'wall_time_seconds': self.wall_time_seconds,
        }


def require_kind(net: QuantifiedNetwork, kind: str) -> QuantifiedNetwork:
    if net.kind != kind:
        raise NetworkValidationError(f"this command needs a {kind!r} network, got {net.kind!r}", location="kind")
    return net


def _believed_list(net: QuantifiedNetwork, plsets) -> List[List[str]]:
    believed = dict(believed_nodes(plsets))
    return [[name, believed[name]] for name in net.names if name in believed]


def run_predict(report: RunReport, net: KappaNetwork, evidence=None, actions=None) -> RunReport:
    require_kind(net, "kappa")
    plsets, counter = predict(net, evidence, actions)
    report.results = {**plsets.to_dict(), 'believed': _believed_list(net, plsets)}
    report.counters = counter.to_dict()
    return report


def run_scomplete(report: RunReport, net: KappaNetwork, evidence=None, actions=None,
                  cs_cap: Optional[int] = None) -> RunReport:
    require_kind(net, "kappa")
    result = scomplete(net, evidence, actions, cs_cap=cs_cap)
    body = result.to_dict()
    report.counters = body.pop('counter')
    report.results = body
    return report


def run_check(report: RunReport, net: KappaNetwork, believed: Optional[Iterable[str]] = None, evidence=None,
              actions=None) -> RunReport:
    """Certificate for the given believed set, or for the believed nodes of a Predict run"""
    require_kind(net, "kappa")
    structure_net = net
    if believed is None:
        plsets, _ = predict(net, evidence, actions)
        believed = believed_names(plsets)
        structure_net, _ = prepare(net, evidence, actions)
    believed = [name for name in net.names if name in set(believed)]
    certificate = check_complete(structure_net, believed)
    report.results = {**certificate.to_dict(), 'believed': believed, 'definite': is_definite(net)}
    report.counters = {'edge_visits': certificate.edge_visits}
    return report


def run_abstract(report: RunReport, pnet: ProbNetwork, eps: float) -> Dict:
    """Returns the kappa network document; the report records the shifts"""
    require_kind(pnet, "prob")
    knet, shifts = abstract_network(pnet, eps)
    report.results = {'eps': eps, 'shifts': [shift.to_dict() for shift in shifts]}
    report.counters = {'shifted_rows': len(shifts)}
    return serialize_network(knet)


def run_gen(report: RunReport, family: str, n: int, eps: Optional[float] = None, seed: Optional[int] = None,
            kind: str = "kappa", shape: str = "dag") -> Dict:
    """Returns the generated network document"""
    eps = Config.DEFAULT_EPSILON if eps is None else eps
    if family == "chain":
        net = generate_chain(n, eps)
    elif family == "and":
        net = generate_and(n, eps)
    elif family == "random":
        seed = Config.DEFAULT_SEED if seed is None else seed
        net = network_suite(seed, 1, kind=kind, min_vars=n, max_vars=n, shape=shape)[0]
    else:
        raise ValueError(f"unknown generator {family!r}")
    report.results = {'family': family, 'name': net.name, 'variables': len(net.names),
                      'edges': len(net.structure.edges)}
    return serialize_network(net)


def run_oracle(report: RunReport, net: QuantifiedNetwork, given=None, query=None, cap: Optional[int] = None) -> RunReport:
    """Exact plausible sets / ranks for kappa networks, exact marginals / probabilities otherwise"""
    if isinstance(net, KappaNetwork):
        oracle = KappaOracle(net, cap)
        sets = oracle.plausible_sets(given)
        report.results = {'plausible': ordered_values(net, sets)}
        if query:
            report.results['rank'] = format_kappa(oracle.conditional(query, given))
    else:
        report.results = {'marginals': exact_marginals(net, given, cap)}
        if query:
            report.results['probability'] = exact_query(net, query, given, cap)
    report.counters = {'worlds': world_count(net)}
    return report


def run_infer(report: RunReport, method: str, pnet: ProbNetwork, target: Mapping[str, str], evidence=None,
              eps: Optional[float] = None, budget: Optional[int] = None, strategy: str = "none",
              cutset: Optional[List[str]] = None, time_limit: Optional[float] = None, cap: Optional[int] = None,
              record_timing: bool = True):
    """
    Returns (report, trace DataFrame or None)
    """
    require_kind(pnet, "prob")
    if method == "exact":
        query = Query(pnet, target, evidence)
        report.results = {'query': query.to_dict(), 'probability': exact_query(pnet, target, evidence, cap)}
        return report, None
    if method == "bounded":
        result = bounded_conditioning(pnet, target, evidence, eps=eps, budget=budget, time_limit=time_limit,
                                      cutset=cutset, cap=cap, record_timing=record_timing)
        report.results = result.to_dict()
        report.counters = {'instances': result.instances, 'evaluated': result.evaluated}
        return report, result.trace
    if method == "search":
        result = poole_search(pnet, target, evidence, eps=eps, budget=budget, strategy=strategy,
                              time_limit=time_limit, record_timing=record_timing)
        report.results = result.to_dict()
        report.counters = {'expansions': result.expansions, 'leaves': result.leaves}
        return report, result.trace
    raise ValueError(f"unknown inference method {method!r}")
