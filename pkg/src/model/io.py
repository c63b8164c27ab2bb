"""
Network file I/O
Parses, validates and serializes the JSON network format (docs/network_format.md)
"""
import json
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Union

import numpy as np
from pydantic import ValidationError

from ..errors import AssignmentError, NetworkValidationError
from .kappa import format_kappa, parse_kappa
from .network import (KappaNetwork, KappaTable, NetworkStructure, ProbabilityTable, ProbNetwork,
                      QuantifiedNetwork, Variable)
from .schema import AssignmentDocument, NameListDocument, NetworkDocument, RawEntry, TableDocument

Document = Union[str, bytes, Mapping]

_NETWORK_TYPES = {"kappa": KappaNetwork, "prob": ProbNetwork}


def _pydantic_location(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first.get("loc", ()))


def _load_json(document: Document, what: str):
    if isinstance(document, Mapping):
        return document
    try:
        return json.loads(document)
    except json.JSONDecodeError as e:
        raise NetworkValidationError(f"{what} is not valid JSON: {e.msg}", location=f"line {e.lineno}") from None


def parse_network(document: Document) -> QuantifiedNetwork:
    """
    Parse and fully validate a network document

    Args:
        document: JSON text or an already-decoded mapping

    Returns:
        KappaNetwork or ProbNetwork, as given by the document's `kind`
    """
    raw = _load_json(document, "network document")
    try:
        doc = NetworkDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise NetworkValidationError(first["msg"], location=_pydantic_location(e)) from None

    variables = []
    for i, variable_doc in enumerate(doc.variables):
        try:
            variables.append(Variable(variable_doc.name, variable_doc.values))
        except NetworkValidationError as e:
            raise NetworkValidationError(e.detail, location=f"variables[{i}]") from None

    structure = NetworkStructure(variables, doc.edges)
    tables = [_build_table(table_doc, structure, doc.kind) for table_doc in doc.tables]
    return _NETWORK_TYPES[doc.kind](structure, tables, name=doc.name)


def load_network(path: Union[str, Path]) -> QuantifiedNetwork:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def _read_row(values: Mapping[str, RawEntry], child: Variable, kind: str, location: str) -> np.ndarray:
    unknown = [label for label in values if label not in child.values]
    if unknown:
        raise NetworkValidationError(f"unknown value {unknown[0]!r} of {child.name!r}", location=location)

    row = np.empty(child.size)
    for i, label in enumerate(child.values):
        if label not in values:
            raise NetworkValidationError(f"missing entry for value {label!r}", location=location)
        raw = values[label]
        try:
            if kind == "kappa":
                row[i] = parse_kappa(raw)
            elif isinstance(raw, str):
                raise ValueError(f"probabilities must be numbers, got {raw!r}")
            else:
                row[i] = float(raw)
        except ValueError as e:
            raise NetworkValidationError(str(e), location=f"{location}.{label}") from None
    return row


def _build_table(doc: TableDocument, structure: NetworkStructure, kind: str):
    location = f"tables[{doc.child}]"
    try:
        child = structure.variable(doc.child)
        parents = [structure.variable(name) for name in doc.parents]
    except AssignmentError as e:
        raise NetworkValidationError(str(e), location=location) from None

    shape = tuple(parent.size for parent in parents) + (child.size,)
    array = np.full(shape, np.nan)
    if doc.default is not None:
        array[...] = _read_row(doc.default, child, kind, f"{location}.default")

    seen = set()
    for j, row_doc in enumerate(doc.rows):
        row_location = f"{location}.rows[{j}]"
        if len(row_doc.given) != len(parents):
            raise NetworkValidationError(
                f"expected {len(parents)} parent values, got {len(row_doc.given)}", location=row_location)
        try:
            index = tuple(parent.index(value) for parent, value in zip(parents, row_doc.given))
        except AssignmentError as e:
            raise NetworkValidationError(str(e), location=row_location) from None
        if index in seen:
            raise NetworkValidationError(f"duplicate row for parents {row_doc.given}", location=row_location)
        seen.add(index)
        array[index] = _read_row(row_doc.values, child, kind, row_location)

    missing = np.isnan(array).any(axis=-1)
    if missing.any():
        index = tuple(int(i) for i in np.argwhere(missing)[0])
        labels = ", ".join(parent.values[i] for parent, i in zip(parents, index))
        raise NetworkValidationError(f"missing row for parents ({labels})", location=location)

    table_type = KappaTable if kind == "kappa" else ProbabilityTable
    return table_type(child.name, [parent.name for parent in parents], array)


def _format_entry(kind: str, value: float):
    return format_kappa(value) if kind == "kappa" else float(value)


def _row_document(kind: str, child: Variable, row: np.ndarray) -> Dict:
    return {label: _format_entry(kind, value) for label, value in zip(child.values, row)}


def _modal_row(array: np.ndarray) -> Optional[np.ndarray]:
    """Row pattern covering more than half of the rows, if any"""
    flat = array.reshape(-1, array.shape[-1])
    if flat.shape[0] <= 1:
        return None
    patterns, counts = np.unique(flat, axis=0, return_counts=True)
    best = int(np.argmax(counts))
    if counts[best] * 2 > flat.shape[0]:
        return patterns[best]
    return None


def serialize_network(network: QuantifiedNetwork) -> Dict:
    """
    Convert a network to its document form

    Args:
        network: Kappa or probability network

    Returns:
        JSON-ready dict; parse_network() of it yields an equal network
    """
    doc: Dict = {"kind": network.kind}
    if network.name:
        doc["name"] = network.name
    doc["variables"] = [{"name": v.name, "values": list(v.values)} for v in network.variables]
    doc["edges"] = [list(edge) for edge in network.structure.edges]

    tables = []
    for name, table in network.tables.items():
        child = network.variable(name)
        parents = [network.variable(p) for p in table.parents]
        entry: Dict = {"child": name, "parents": list(table.parents)}

        default = _modal_row(table.array)
        if default is not None:
            entry["default"] = _row_document(network.kind, child, default)

        explicit = np.ones(table.array.shape[:-1], dtype=bool)
        if default is not None:
            explicit = ~np.all(table.array == default, axis=-1)

        rows = []
        for index in np.argwhere(explicit):
            index = tuple(int(i) for i in index)
            rows.append({
                "given": [parent.values[i] for parent, i in zip(parents, index)],
                "values": _row_document(network.kind, child, table.array[index]),
            })
        entry["rows"] = rows
        tables.append(entry)
    doc["tables"] = tables
    return doc


def dump_network(network: QuantifiedNetwork) -> str:
    return json.dumps(serialize_network(network), indent=2) + "\n"


def parse_assignment(document: Document, what: str = "assignment") -> Dict[str, str]:
    """
    Parse an evidence or action file: a JSON object of variable -> value

    Args:
        document: JSON text or decoded mapping
        what: Label used in error messages

    Returns:
        Plain dict (not yet checked against a network)
    """
    raw = _load_json(document, what)
    try:
        return dict(AssignmentDocument.validate_python(raw))
    except ValidationError as e:
        raise AssignmentError(f"{what}: {e.errors()[0]['msg']} at {_pydantic_location(e) or 'top level'}") from None


def parse_name_list(document: Document, what: str = "name list") -> List[str]:
    raw = _load_json(document, what)
    try:
        return list(NameListDocument.validate_python(raw))
    except ValidationError as e:
        raise AssignmentError(f"{what}: {e.errors()[0]['msg']}") from None


def parse_query(text: str) -> Dict[str, str]:
    """
    Parse 'var=val[,var=val]' into a target assignment

    Args:
        text: Query string from the command line

    Returns:
        variable -> value
    """
    target: Dict[str, str] = {}
    for part in (piece.strip() for piece in text.split(",")):
        if not part:
            continue
        name, sep, value = part.partition("=")
        if not sep or not name.strip() or not value.strip():
            raise AssignmentError(f"query term {part!r} is not of the form var=val")
        if name.strip() in target:
            raise AssignmentError(f"query names {name.strip()!r} twice")
        target[name.strip()] = value.strip()
    if not target:
        raise AssignmentError("query is empty")
    return target

