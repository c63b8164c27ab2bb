"""
Joint tensors over all worlds
Exponential by construction; every builder is guarded by a world cap.
"""
import logging
import math
from typing import Mapping, Optional

import numpy as np

from ..config import Config
from ..errors import CapExceededError
from .network import ConditionalTable, QuantifiedNetwork

logger = logging.getLogger(__name__)


def world_count(network: QuantifiedNetwork) -> int:
    return math.prod(variable.size for variable in network.variables)


def check_world_cap(network: QuantifiedNetwork, cap: Optional[int] = None, what: str = "joint enumeration") -> int:
    """
    Refuse networks whose joint space exceeds the cap

    Returns:
        The number of worlds
    """
    cap = Config.WORLD_CAP if cap is None else cap
    size = world_count(network)
    if size > cap:
        logger.warning("refusing %s", what, extra={"worlds": size, "cap": cap})
        raise CapExceededError(f"{what} refused", cap=cap, size=size)
    return size


def broadcast_family(network: QuantifiedNetwork, table: ConditionalTable) -> np.ndarray:
    """View a family table with one axis per network variable (size 1 where absent)"""
    position = network.structure.position
    axes = [position[p] for p in table.parents] + [position[table.child]]
    order = np.argsort(axes)
    array = np.transpose(table.array, order)

    shape = [1] * len(network.variables)
    for axis, size in zip(sorted(axes), array.shape):
        shape[axis] = size
    return array.reshape(shape)


def kappa_joint(network: QuantifiedNetwork, cap: Optional[int] = None) -> np.ndarray:
    """kappa(w) = sum of local ranks, for every world w (axes in declaration order)"""
    check_world_cap(network, cap, "kappa joint")
    joint = np.zeros(tuple(v.size for v in network.variables))
    for table in network.tables.values():
        joint = joint + broadcast_family(network, table)
    return joint


def probability_joint(network: QuantifiedNetwork, cap: Optional[int] = None) -> np.ndarray:
    """P(w) = product of local probabilities, for every world w"""
    check_world_cap(network, cap, "probability joint")
    joint = np.ones(tuple(v.size for v in network.variables))
    for table in network.tables.values():
        joint = joint * broadcast_family(network, table)
    return joint


def selection_mask(network: QuantifiedNetwork, assignment: Mapping[str, str]) -> np.ndarray:
    """Boolean array broadcastable to the joint shape, true on worlds satisfying the assignment"""
    mask = np.ones(tuple(1 for _ in network.variables), dtype=bool)
    for axis, variable in enumerate(network.variables):
        if variable.name not in assignment:
            continue
        shape = [1] * len(network.variables)
        shape[axis] = variable.size
        indicator = np.zeros(variable.size, dtype=bool)
        indicator[variable.index(assignment[variable.name])] = True
        mask = mask & indicator.reshape(shape)
    return mask
