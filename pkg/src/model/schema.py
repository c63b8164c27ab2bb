"""
JSON document schema for networks, evidence and action files
"""
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictFloat, StrictInt, TypeAdapter

# Ranks are integers or the token "inf"; probabilities are numbers
RawEntry = Union[StrictInt, StrictFloat, str]


class VariableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(min_length=1)
    values: List[str]


class RowDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    given: List[str] = Field(default_factory=list)
    values: Dict[str, RawEntry]


class TableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    child: str
    parents: List[str] = Field(default_factory=list)
    default: Optional[Dict[str, RawEntry]] = None
    rows: List[RowDocument] = Field(default_factory=list)


class NetworkDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["kappa", "prob"]
    name: Optional[str] = None
    variables: List[VariableDocument]
    edges: List[Tuple[str, str]] = Field(default_factory=list)
    tables: List[TableDocument]


AssignmentDocument = TypeAdapter(Dict[str, str])
NameListDocument = TypeAdapter(List[str])
