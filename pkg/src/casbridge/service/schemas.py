"""Request/response models for the HTTP session service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ExplodeRow(BaseModel):
    index: int
    depth: int
    rule: str
    args: list[int]
    goal: str


class CellRequest(BaseModel):
    source: str
    mode: Literal["cas", "cas-image", "kernel"] = "cas"


class CellResponse(BaseModel):
    output: str
    display: Literal["text", "image", "explode"] = "text"
    image_svg: Optional[str] = None
    explode: Optional[list[ExplodeRow]] = None
    status: Literal["done", "error"] = "done"
    error: Optional[str] = None


class CellRecord(BaseModel):
    index: int
    source: str
    mode: str
    status: str
    output: str
    display: str = "text"


class SessionState(BaseModel):
    cells: list[CellRecord] = Field(default_factory=list)


class ProveRequest(BaseModel):
    source: str
    tactic: Literal["intuit", "norm_num", "linarith", "ring"] = "intuit"


class TacticRequest(BaseModel):
    name: str
    args: dict
