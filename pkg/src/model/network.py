"""
Network Representation
DAG skeleton over discrete variables, conditional kappa / probability tables,
evidence and action surgery
"""
from abc import ABC, abstractmethod
from functools import cached_property
from typing import ClassVar, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Type, Union

import networkx as nx
import numpy as np

from ..config import Config
from ..errors import AssignmentError, NetworkValidationError
from .kappa import INFINITY, Kappa, normalize

Evidence = Mapping[str, str]
ActionSet = Mapping[str, str]
World = Mapping[str, str]


class Variable:
    """A discrete variable with an ordered domain of at least two labels"""

    def __init__(self, name: str, values: Sequence[str]):
        self.name = name
        self.values = tuple(values)

        if not name:
            raise NetworkValidationError("variable name must be nonempty", location="variables")
        if len(self.values) < 2:
            raise NetworkValidationError("a variable needs at least two values", location=f"variables[{name}]")
        if len(set(self.values)) != len(self.values):
            raise NetworkValidationError("duplicate value labels", location=f"variables[{name}]")

    @property
    def size(self) -> int:
        return len(self.values)

    def index(self, value: str) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise AssignmentError(f"value {value!r} is not in the domain of {self.name!r}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, Variable) and self.name == other.name and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.name, self.values))

    def __repr__(self) -> str:
        return f"Variable({self.name!r}, {list(self.values)!r})"


class NetworkStructure:
    """
    Directed acyclic graph shared by kappa and probability quantifications.

    Declaration order of the variables is the tie-breaker for every ordering
    produced from a structure.
    """

    def __init__(self, variables: Iterable[Variable], edges: Iterable[Tuple[str, str]] = ()):
        self.variables = tuple(variables)
        self.edges = tuple((str(parent), str(child)) for parent, child in edges)
        self._validate()

    def _validate(self):
        seen = set()
        for i, variable in enumerate(self.variables):
            if variable.name in seen:
                raise NetworkValidationError(f"duplicate variable {variable.name!r}", location=f"variables[{i}]")
            seen.add(variable.name)

        seen_edges = set()
        for i, (parent, child) in enumerate(self.edges):
            for end in (parent, child):
                if end not in seen:
                    raise NetworkValidationError(f"unknown variable {end!r}", location=f"edges[{i}]")
            if (parent, child) in seen_edges:
                raise NetworkValidationError(f"duplicate edge {parent} -> {child}", location=f"edges[{i}]")
            seen_edges.add((parent, child))

        try:
            cycle = nx.find_cycle(self.graph, orientation="original")
        except nx.NetworkXNoCycle:
            return
        path = " -> ".join([cycle[0][0]] + [edge[1] for edge in cycle])
        raise NetworkValidationError(f"cycle detected: {path}", location="edges")

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(variable.name for variable in self.variables)
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def position(self) -> Dict[str, int]:
        return {variable.name: i for i, variable in enumerate(self.variables)}

    @cached_property
    def _by_name(self) -> Dict[str, Variable]:
        return {variable.name: variable for variable in self.variables}

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(variable.name for variable in self.variables)

    def variable(self, name: str) -> Variable:
        try:
            return self._by_name[name]
        except KeyError:
            raise AssignmentError(f"unknown variable {name!r}") from None

    def parents(self, name: str) -> Tuple[str, ...]:
        return tuple(parent for parent, child in self.edges if child == name)

    def children(self, name: str) -> Tuple[str, ...]:
        return tuple(child for parent, child in self.edges if parent == name)

    def is_root(self, name: str) -> bool:
        return self.graph.in_degree(name) == 0

    def roots(self) -> Tuple[str, ...]:
        return tuple(name for name in self.names if self.is_root(name))

    def is_polytree(self) -> bool:
        """True when the underlying undirected graph has no cycles"""
        return nx.is_forest(self.graph.to_undirected(as_view=True))

    def topological_order(self) -> List[str]:
        return list(nx.lexicographical_topological_sort(self.graph, key=self.position.__getitem__))

    def __eq__(self, other) -> bool:
        return (isinstance(other, NetworkStructure) and self.variables == other.variables
                and self.edges == other.edges)

    __hash__ = None

    def __repr__(self) -> str:
        return f"NetworkStructure({len(self.variables)} variables, {len(self.edges)} edges)"


def topological_order(structure: NetworkStructure) -> List[str]:
    """
    Order variables so that every parent precedes its children

    Args:
        structure: Validated network structure

    Returns:
        Variable names; ties broken by declaration order
    """
    return structure.topological_order()


class ConditionalTable(ABC):
    """
    Conditional table stored as a dense array with axes (parent_1, ..., parent_k, child)
    """

    def __init__(self, child: str, parents: Sequence[str], array):
        self.child = child
        self.parents = tuple(parents)
        array = np.array(array, dtype=float)
        array.setflags(write=False)
        self.array = array

    @classmethod
    @abstractmethod
    def forced(cls, child: str, size: int, index: int) -> "ConditionalTable":
        """Root table putting all belief on value number index"""

    @abstractmethod
    def first_bad_row(self) -> Optional[Tuple[Tuple[int, ...], str]]:
        """Return (row index, message) for the first row violating the table invariant"""

    def __eq__(self, other) -> bool:
        return (type(self) is type(other) and self.child == other.child and self.parents == other.parents
                and self.array.shape == other.array.shape and np.array_equal(self.array, other.array))

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.child!r}, parents={list(self.parents)!r})"


def _first_index(mask: np.ndarray) -> Tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(mask)[0])


class KappaTable(ConditionalTable):
    """Conditional kappa table; every row has minimum rank 0"""

    @classmethod
    def forced(cls, child: str, size: int, index: int) -> "KappaTable":
        array = np.full(size, INFINITY)
        array[index] = 0
        return cls(child, (), array)

    def kappa(self, value_index: int, parent_index: Tuple[int, ...] = ()) -> Kappa:
        return normalize(self.array[parent_index + (value_index,)])

    def first_bad_row(self):
        array = self.array
        legal = (np.isinf(array) & (array > 0)) | (np.isfinite(array) & (array >= 0) & (array == np.floor(array)))
        if not legal.all():
            index = _first_index(~legal)
            return index[:-1], "kappa entries must be nonnegative integers or INFINITY"

        minimum = array.min(axis=-1)
        if (minimum != 0).any():
            index = _first_index(minimum != 0)
            return index, f"row minimum is {normalize(minimum[index])}, expected 0"
        return None


class ProbabilityTable(ConditionalTable):
    """Conditional probability table; every row sums to one"""

    @classmethod
    def forced(cls, child: str, size: int, index: int) -> "ProbabilityTable":
        array = np.zeros(size)
        array[index] = 1.0
        return cls(child, (), array)

    def first_bad_row(self):
        array = self.array
        legal = np.isfinite(array) & (array >= 0.0) & (array <= 1.0)
        if not legal.all():
            index = _first_index(~legal)
            return index[:-1], "probabilities must lie in [0, 1]"

        sums = array.sum(axis=-1)
        off = np.abs(sums - 1.0) > Config.PROB_ROW_TOLERANCE
        if off.any():
            index = _first_index(off)
            return index, f"row sums to {float(sums[index]):.12g}, expected 1"
        return None


class QuantifiedNetwork:
    """Structure plus one conditional table per variable"""

    kind: ClassVar[str] = ""
    table_type: ClassVar[Type[ConditionalTable]] = ConditionalTable

    def __init__(self, structure: NetworkStructure, tables: Union[Mapping[str, ConditionalTable], Iterable[ConditionalTable]],
                 name: Optional[str] = None):
        if self.table_type is ConditionalTable:
            raise TypeError(f"{type(self).__name__} has no table type; build a KappaNetwork or a ProbNetwork")
        self.structure = structure
        if isinstance(tables, Mapping):
            tables = tables.values()
        by_child: Dict[str, ConditionalTable] = {}
        for table in tables:
            if table.child in by_child:
                raise NetworkValidationError("duplicate table", location=f"tables[{table.child}]")
            by_child[table.child] = table
        self.name = name
        self._validate(by_child)
        self.tables = {variable_name: by_child[variable_name] for variable_name in structure.names}

    def _validate(self, tables: Dict[str, ConditionalTable]):
        structure = self.structure
        for child in tables:
            if child not in structure.position:
                raise NetworkValidationError(f"table for unknown variable {child!r}", location=f"tables[{child}]")

        for variable in structure.variables:
            location = f"tables[{variable.name}]"
            table = tables.get(variable.name)
            if table is None:
                raise NetworkValidationError("missing table", location=location)
            if not isinstance(table, self.table_type):
                raise NetworkValidationError(f"expected a {self.table_type.__name__}", location=location)
            if len(set(table.parents)) != len(table.parents):
                raise NetworkValidationError("duplicate parent in table", location=location)
            if set(table.parents) != set(structure.parents(variable.name)):
                raise NetworkValidationError(
                    f"table parents {list(table.parents)} differ from graph parents "
                    f"{list(structure.parents(variable.name))}", location=location)

            expected = tuple(structure.variable(p).size for p in table.parents) + (variable.size,)
            if table.array.shape != expected:
                raise NetworkValidationError(f"table shape {table.array.shape} != {expected}", location=location)

            bad = table.first_bad_row()
            if bad is not None:
                index, message = bad
                labels = ", ".join(structure.variable(p).values[i] for p, i in zip(table.parents, index))
                raise NetworkValidationError(message, location=f"{location}.rows[({labels})]")

    @property
    def variables(self) -> Tuple[Variable, ...]:
        return self.structure.variables

    @property
    def names(self) -> Tuple[str, ...]:
        return self.structure.names

    def variable(self, name: str) -> Variable:
        return self.structure.variable(name)

    def parents(self, name: str) -> Tuple[str, ...]:
        return self.tables[name].parents

    def topological_order(self) -> List[str]:
        return self.structure.topological_order()

    def replace(self, structure: Optional[NetworkStructure] = None,
                tables: Optional[Mapping[str, ConditionalTable]] = None) -> "QuantifiedNetwork":
        return type(self)(structure or self.structure, tables or self.tables, name=self.name)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.structure == other.structure and self.tables == other.tables

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, {self.structure!r})"


class KappaNetwork(QuantifiedNetwork):
    """Network quantified with conditional kappa rankings"""

    kind = "kappa"
    table_type = KappaTable

    def zero_world(self) -> Dict[str, str]:
        """
        A world of joint rank 0; exists because every row has a 0 entry

        Returns:
            Full assignment built in topological order
        """
        world: Dict[str, str] = {}
        for name in self.topological_order():
            table = self.tables[name]
            parent_index = tuple(self.variable(p).index(world[p]) for p in table.parents)
            row = table.array[parent_index]
            world[name] = self.variable(name).values[int(np.argmin(row))]
        return world


class ProbNetwork(QuantifiedNetwork):
    """Network quantified with conditional probability tables"""

    kind = "prob"
    table_type = ProbabilityTable


def check_assignment(network: QuantifiedNetwork, assignment: Optional[Mapping[str, str]],
                     what: str = "assignment") -> Dict[str, str]:
    """
    Validate that every entry names a known variable and an in-domain value

    Args:
        network: Network the assignment refers to
        assignment: variable name -> value label
        what: Label used in error messages

    Returns:
        A plain dict copy of the assignment
    """
    checked: Dict[str, str] = {}
    for name, value in (assignment or {}).items():
        try:
            variable = network.variable(name)
            variable.index(value)
        except AssignmentError as e:
            raise AssignmentError(f"{what}: {e}") from None
        checked[name] = value
    return checked


def apply_actions(network: QuantifiedNetwork, actions: Optional[ActionSet]) -> QuantifiedNetwork:
    """
    Graph surgery for actions and decisions

    Each acted-on variable loses its incoming edges and gets an unconditional
    table forcing its value (kappa 0 / probability 1 for the forced value,
    INFINITY / 0 for every other value).

    Args:
        network: Kappa or probability network
        actions: variable name -> forced value

    Returns:
        The post-surgery network (the input itself when there are no actions)
    """
    actions = check_assignment(network, actions, "actions")
    if not actions:
        return network

    structure = network.structure
    edges = tuple(edge for edge in structure.edges if edge[1] not in actions)
    new_structure = NetworkStructure(structure.variables, edges)

    tables = dict(network.tables)
    for name, value in actions.items():
        variable = structure.variable(name)
        tables[name] = network.table_type.forced(name, variable.size, variable.index(value))

    return type(network)(new_structure, tables, name=network.name)
