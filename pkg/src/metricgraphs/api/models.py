"""Pydantic request/response models for the HTTP service.

These mirror the package's wire formats exactly: colorings as
{"r", "n", "d"} with the distance vector in the fixed pair order,
color-set graphs as {"r", "n", "c"}, and the certificate, verdict,
report, batch, trace, and curve payloads as documented in the README.
Semantic validation lives in the core constructors; the models only
enforce shapes and types.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..core import ColorSetGraph, MetricColoring, Params


class GraphModel(BaseModel):
    r: int
    n: int
    d: list[int]

    def to_core(self) -> MetricColoring:
        return MetricColoring(Params(self.r, self.n), tuple(self.d))

    @classmethod
    def from_core(cls, g: MetricColoring) -> "GraphModel":
        return cls(r=g.params.r, n=g.params.n, d=list(g.dist))


class ColorSetGraphModel(BaseModel):
    r: int
    n: int
    c: list[list[int]]

    def to_core(self) -> ColorSetGraph:
        return ColorSetGraph.from_color_lists(self.r, self.n, self.c)

    @classmethod
    def from_core(cls, g: ColorSetGraph) -> "ColorSetGraphModel":
        payload = g.to_json_dict()
        return cls(r=payload["r"], n=payload["n"], c=payload["c"])


class CountRequest(BaseModel):
    r: int
    n: int
    budget: Optional[int] = None
    threads: int = 1
    no_timing: bool = False


class CountReportModel(BaseModel):
    r: int
    n: int
    m_count: int
    c_count: int
    lower_bound: int
    ratio_c_over_m: str
    elapsed_ms: Optional[float] = None


class EnumerateRequest(BaseModel):
    r: int
    n: int
    budget: Optional[int] = None
    limit: Optional[int] = Field(default=None, description="stop after this many items")


class SampleRequest(BaseModel):
    r: int
    n: int
    count: int
    seed: int


class SampleBatchModel(BaseModel):
    r: int
    n: int
    seed: int
    count: int
    attempts: int
    samples: list[list[int]]


class StatsRequest(BaseModel):
    r: int
    n: int
    mode: Literal["exact", "sampled"] = "exact"
    epsilon: str = "1/10"
    samples: int = 1000
    seed: int = 0
    budget: Optional[int] = None


class StatsReportModel(BaseModel):
    r: int
    n: int
    mode: str
    epsilon: str
    m_count: Optional[int] = None
    c_count: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    attempts: Optional[int] = None
    fraction_cr: Optional[str | float] = None
    fraction_low_hub: Optional[str | float] = None
    histogram: dict[int, int]
    mean_nearest_distance: Optional[str] = None
    excess_log: Optional[float] = None


class GraphRequest(BaseModel):
    graph: GraphModel


class MembershipModel(BaseModel):
    member: bool
    partition: Optional[list[list[int]]] = None
    violation: Optional[dict] = None


class NearestRequest(BaseModel):
    graph: GraphModel
    limit: int = 10


class NearestModel(BaseModel):
    distance: int
    witness: GraphModel


class ComponentsModel(BaseModel):
    components: list[list[int]]
    large_threshold: int
    minimal_large: Optional[list[int]] = None


class HubRequest(BaseModel):
    graph: GraphModel
    epsilon: str = "1/10"


class HubModel(BaseModel):
    vertex: Optional[int] = None
    color: Optional[int] = None
    present: bool


class VerifyRangeRequest(BaseModel):
    r_max: int = 5
    r_min: int = 3


class VerifyWeightRequest(BaseModel):
    r: int
    t: int


class VerifyAmalgamRequest(BaseModel):
    r: int
    max_size: int = 3


class VerdictModel(BaseModel):
    lemma: str
    domain: str
    checked: int
    counterexample: Optional[dict] = None


class VerdictListModel(BaseModel):
    verdicts: list[VerdictModel]
    counterexamples: int


class TraceModel(BaseModel):
    case: str
    cocd: ComponentsModel
    selected: list[int]
    index_sequence: Optional[list[int]] = None
    chain: Optional[list[int]] = None
    output: GraphModel


class PreimageRequest(BaseModel):
    r: int
    n: int
    budget: Optional[int] = None


class PreimageReportModel(BaseModel):
    r: int
    n: int
    c_count: int
    m_count: int
    mapped: int
    unsupported: int
    by_case: dict[str, int]
    distinct_outputs: int
    max_preimage: int
    mean_preimage: Optional[float] = None
    strict_bound_holds: bool
    ratio_c_over_m: str


class GadgetRequest(BaseModel):
    r: int


class AmalgamateRequest(BaseModel):
    mode: Literal["cr", "mr"]
    a: GraphModel
    b: GraphModel
    shared: list[tuple[int, int]] = Field(default_factory=list)


class AxiomModel(BaseModel):
    base: GraphModel
    extended: GraphModel


class AxiomEvalRequest(BaseModel):
    axiom: AxiomModel
    graph: GraphModel


class AxiomEvalModel(BaseModel):
    satisfied: bool


class AxiomCurveRequest(BaseModel):
    axiom: AxiomModel
    family: Literal["metric", "cr"] = "cr"
    n_min: int
    n_max: int
    samples: int = 1000
    seed: int = 0


class CurvePointModel(BaseModel):
    n: int
    estimate: Optional[float] = None
    ci_low: float
    ci_high: float
    samples: int


class CurveModel(BaseModel):
    family: str
    r: int
    seed: int
    points: list[CurvePointModel]


class MatchingBoundRequest(BaseModel):
    r: int
    n: int


class MatchingBoundModel(BaseModel):
    r: int
    n: int
    matchings: int
    family_total: int


class DeltaRequest(BaseModel):
    graph: GraphModel
    other: GraphModel


class DeltaModel(BaseModel):
    pairs: list[tuple[int, int]]
    size: int


class ErrorDetail(BaseModel):
    kind: Literal["domain", "capacity", "unsupported"]
    message: str
