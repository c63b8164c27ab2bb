"""
Kappa Oracle
Exact (exponential) kappa semantics over all worlds: joint, marginal and
conditional ranks, exact plausible sets and the irrelevance test.
Used as ground truth for the polynomial algorithms.
"""
import itertools
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

import numpy as np

from ..errors import AssignmentError, ImpossibleConditionError
from ..model.joint import kappa_joint, selection_mask
from ..model.kappa import INFINITY, Kappa, kappa_diff, kappa_min, kappa_sum, normalize
from ..model.network import KappaNetwork, World, check_assignment


def joint_kappa(net: KappaNetwork, world: World) -> Kappa:
    """
    Rank of a world: sum of the local table entries it selects

    Args:
        net: Kappa network
        world: Total assignment

    Returns:
        Joint rank (INFINITY when any entry is INFINITY)
    """
    world = check_assignment(net, world, "world")
    missing = [name for name in net.names if name not in world]
    if missing:
        raise AssignmentError(f"world does not assign {missing}")

    terms = []
    for name, table in net.tables.items():
        parent_index = tuple(net.variable(p).index(world[p]) for p in table.parents)
        terms.append(table.kappa(net.variable(name).index(world[name]), parent_index))
    return kappa_sum(terms)


class KappaOracle:
    """Materialized joint ranking of a kappa network"""

    def __init__(self, net: KappaNetwork, cap: Optional[int] = None):
        self.net = net
        self.joint = kappa_joint(net, cap)

    def rank(self, assignment: Mapping[str, str]) -> Kappa:
        """kappa of a conjunction: min over the worlds satisfying it"""
        assignment = check_assignment(self.net, assignment)
        mask = selection_mask(self.net, assignment)
        return normalize(np.min(np.where(mask, self.joint, np.inf)))

    def worlds(self) -> Iterator[Tuple[Dict[str, str], Kappa]]:
        """Every world with its rank, in declaration-order lexicographic order"""
        variables = self.net.variables
        for index in np.ndindex(*self.joint.shape):
            world = {v.name: v.values[i] for v, i in zip(variables, index)}
            yield world, normalize(self.joint[index])

    def rank_of(self, event: Callable[[Dict[str, str]], bool]) -> Kappa:
        """kappa of an arbitrary event given as a predicate over worlds"""
        return kappa_min(rank for world, rank in self.worlds() if event(world))

    def conditional(self, partial: Mapping[str, str], given: Optional[Mapping[str, str]] = None) -> Kappa:
        given = dict(given or {})
        given_rank = self.rank(given)
        if given_rank == INFINITY:
            raise ImpossibleConditionError(f"conditioning on {given} of rank INFINITY")

        conflict = [name for name, value in partial.items() if name in given and given[name] != value]
        if conflict:
            return INFINITY
        return kappa_diff(self.rank({**given, **partial}), given_rank)

    def plausible_sets(self, given: Optional[Mapping[str, str]] = None) -> Dict[str, Set[str]]:
        """Exact plausible set of every variable given a conjunction"""
        given = check_assignment(self.net, given, "given")
        mask = selection_mask(self.net, given)
        ranks = np.where(mask, self.joint, np.inf)
        floor = ranks.min()
        if np.isinf(floor):
            raise ImpossibleConditionError(f"conditioning on {given} of rank INFINITY")

        sets = {}
        for axis, variable in enumerate(self.net.variables):
            others = tuple(a for a in range(ranks.ndim) if a != axis)
            marginal = ranks.min(axis=others) if others else ranks
            sets[variable.name] = {variable.values[i] for i in np.flatnonzero(marginal == floor)}
        return sets

    def marginal_ranks(self, names: Iterable[str]) -> np.ndarray:
        """Joint rank table over a subset of variables (axes in the given order)"""
        axes = [self.net.structure.position[name] for name in names]
        others = tuple(a for a in range(self.joint.ndim) if a not in axes)
        reduced = self.joint.min(axis=others) if others else self.joint
        kept = sorted(axes)
        return np.transpose(reduced, [kept.index(a) for a in axes])

    def is_irrelevant(self, names: Iterable[str]) -> bool:
        names = list(names)
        if len(names) < 2:
            raise ValueError("irrelevance needs at least two variables")
        table = self.marginal_ranks(names)
        singles = [self.marginal_ranks([name]) for name in names]
        for index in itertools.product(*(np.flatnonzero(single == 0) for single in singles)):
            if table[tuple(index)] != 0:
                return False
        return True


def marginal_kappa(net: KappaNetwork, partial: Mapping[str, str], given: Optional[Mapping[str, str]] = None,
                   cap: Optional[int] = None) -> Kappa:
    """
    Conditional rank kappa(partial | given) by enumeration

    Args:
        net: Kappa network
        partial: Conjunction whose rank is wanted
        given: Conditioning conjunction (empty for the prior)
        cap: World cap override

    Returns:
        min kappa(partial and given) - min kappa(given)
    """
    check_assignment(net, partial, "partial")
    return KappaOracle(net, cap).conditional(partial, given)


def exact_plausible_set(net: KappaNetwork, variable: str, given: Optional[Mapping[str, str]] = None,
                        cap: Optional[int] = None) -> Set[str]:
    """Values v of `variable` with kappa(variable=v | given) = 0"""
    net.variable(variable)
    return KappaOracle(net, cap).plausible_sets(given)[variable]


def exact_plausible_sets(net: KappaNetwork, given: Optional[Mapping[str, str]] = None,
                         cap: Optional[int] = None) -> Dict[str, Set[str]]:
    return KappaOracle(net, cap).plausible_sets(given)


def is_irrelevant(net: KappaNetwork, variables: Iterable[str], cap: Optional[int] = None) -> bool:
    """
    Irrelevance of a set of variables to each other: every instantiation
    whose single-variable ranks are all 0 has joint rank 0

    Args:
        net: Kappa network
        variables: At least two variable names

    Returns:
        True iff the variables are irrelevant to each other
    """
    variables = list(variables)
    for name in variables:
        net.variable(name)
    return KappaOracle(net, cap).is_irrelevant(variables)


def ordered_values(net: KappaNetwork, sets: Mapping[str, Set[str]]) -> Dict[str, List[str]]:
    """Plausible sets as lists in declaration order"""
    return {name: [v for v in net.variable(name).values if v in sets[name]] for name in net.names}
