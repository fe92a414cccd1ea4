"""FastAPI service exposing every operation of the package.

The CLI is a thin client of this app (in-process by default, remote with
--server). Domain, capacity, and unsupported-instance errors map to HTTP
400 with a structured {"detail": {"kind", "message"}} body; the enumerate
endpoint streams newline-delimited JSON.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterator

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .. import constructions, enumeration, structure, weights
from ..core import delta as core_delta
from ..errors import CapacityError, DomainError, UnsupportedInstanceError
from . import models

app = FastAPI(
    title="metricgraphs",
    version="0.1.0",
    description=(
        "Exact enumeration, sampling, and constructive verification for "
        "complete edge-colored graphs with bounded integer distances."
    ),
)


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError) -> JSONResponse:
    kind = "unsupported" if isinstance(exc, UnsupportedInstanceError) else "domain"
    return JSONResponse(
        status_code=400, content={"detail": {"kind": kind, "message": str(exc)}}
    )


@app.exception_handler(CapacityError)
async def _capacity_error(request: Request, exc: CapacityError) -> JSONResponse:
    return JSONResponse(
        status_code=400, content={"detail": {"kind": "capacity", "message": str(exc)}}
    )


def _budget(value: int | None) -> int:
    return enumeration.DEFAULT_NODE_BUDGET if value is None else value


def _epsilon(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError("cannot parse epsilon %r" % text) from exc


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/count", response_model=models.CountReportModel)
def count(request: models.CountRequest) -> models.CountReportModel:
    report = enumeration.count_report(
        request.r,
        request.n,
        node_budget=_budget(request.budget),
        threads=request.threads,
        with_timing=not request.no_timing,
    )
    return models.CountReportModel(**report.to_json_dict())


@app.post("/enumerate")
def enumerate_graphs(request: models.EnumerateRequest) -> StreamingResponse:
    def lines() -> Iterator[str]:
        produced = 0
        for graph in enumeration.enumerate_metric(
            request.r, request.n, node_budget=_budget(request.budget)
        ):
            if request.limit is not None and produced >= request.limit:
                return
            produced += 1
            yield json.dumps(graph.to_json_dict()) + "\n"

    # materialize the first item eagerly so domain errors surface as 400s
    iterator = lines()
    try:
        first = next(iterator)
    except StopIteration:
        first = None

    def stream() -> Iterator[str]:
        if first is not None:
            yield first
            yield from iterator

    return StreamingResponse(stream(), media_type="application/x-ndjson")


@app.post("/sample", response_model=models.SampleBatchModel)
def sample(request: models.SampleRequest) -> models.SampleBatchModel:
    batch = enumeration.sample_uniform(request.r, request.n, request.count, request.seed)
    return models.SampleBatchModel(**batch.to_json_dict())


@app.post("/stats", response_model=models.StatsReportModel)
def stats(request: models.StatsRequest) -> models.StatsReportModel:
    report = enumeration.structure_stats(
        request.r,
        request.n,
        mode=request.mode,
        epsilon=_epsilon(request.epsilon),
        samples=request.samples,
        seed=request.seed,
        node_budget=_budget(request.budget),
    )
    return models.StatsReportModel(**report)


@app.post("/membership", response_model=models.MembershipModel)
def membership(request: models.GraphRequest) -> models.MembershipModel:
    cert = structure.cr_membership(request.graph.to_core())
    return models.MembershipModel(**cert.to_json_dict())


@app.post("/nearest", response_model=models.NearestModel)
def nearest(request: models.NearestRequest) -> models.NearestModel:
    distance, witness = structure.nearest_cr_distance(
        request.graph.to_core(), partition_limit=request.limit
    )
    return models.NearestModel(
        distance=distance, witness=models.GraphModel.from_core(witness)
    )


@app.post("/components", response_model=models.ComponentsModel)
def components(request: models.GraphRequest) -> models.ComponentsModel:
    decomposition = structure.component_decomposition(request.graph.to_core())
    minimal = structure.minimal_large_component(decomposition)
    return models.ComponentsModel(
        components=[list(c) for c in decomposition.components],
        large_threshold=decomposition.large_threshold,
        minimal_large=None if minimal is None else list(minimal),
    )


@app.post("/hub", response_model=models.HubModel)
def hub(request: models.HubRequest) -> models.HubModel:
    found = structure.low_color_hub(request.graph.to_core(), _epsilon(request.epsilon))
    if found is None:
        return models.HubModel(present=False)
    return models.HubModel(vertex=found[0], color=found[1], present=True)


def _verdicts(verdicts: list[weights.LemmaVerdict]) -> models.VerdictListModel:
    return models.VerdictListModel(
        verdicts=[models.VerdictModel(**v.to_json_dict()) for v in verdicts],
        counterexamples=sum(0 if v.holds else 1 for v in verdicts),
    )


@app.post("/verify/size-lemma", response_model=models.VerdictListModel)
def verify_size_lemma(request: models.VerifyRangeRequest) -> models.VerdictListModel:
    return _verdicts(
        [
            weights.check_size_lemma(r, max_r=request.r_max)
            for r in range(request.r_min, request.r_max + 1)
        ]
    )


@app.post("/verify/triangle-class", response_model=models.VerdictListModel)
def verify_triangle_class(
    request: models.VerifyRangeRequest,
) -> models.VerdictListModel:
    return _verdicts(
        [
            weights.check_triangle_classification(r, max_r=request.r_max)
            for r in range(request.r_min, request.r_max + 1)
        ]
    )


@app.post("/verify/importantcor", response_model=models.VerdictListModel)
def verify_importantcor(request: models.VerifyRangeRequest) -> models.VerdictListModel:
    return _verdicts(
        [
            weights.check_importantcor(r, max_r=request.r_max)
            for r in range(request.r_min, request.r_max + 1)
        ]
    )


@app.post("/verify/weight-bound", response_model=models.VerdictListModel)
def verify_weight_bound(request: models.VerifyWeightRequest) -> models.VerdictListModel:
    return _verdicts([weights.check_weight_bound(request.r, request.t)])


@app.post("/verify/amalgam-mr", response_model=models.VerdictListModel)
def verify_amalgam_mr(request: models.VerifyAmalgamRequest) -> models.VerdictListModel:
    return _verdicts(
        [constructions.check_amalgamation_mr(request.r, max_size=request.max_size)]
    )


@app.post("/verify/amalgam-cr", response_model=models.VerdictListModel)
def verify_amalgam_cr(request: models.VerifyAmalgamRequest) -> models.VerdictListModel:
    return _verdicts(
        [constructions.check_amalgamation_cr(request.r, max_size=request.max_size)]
    )


@app.post("/inject", response_model=models.TraceModel)
def inject(request: models.GraphRequest) -> models.TraceModel:
    trace = constructions.inject_f(request.graph.to_core())
    payload = trace.to_json_dict()
    return models.TraceModel(
        case=payload["case"],
        cocd=models.ComponentsModel(
            components=payload["cocd"]["components"],
            large_threshold=payload["cocd"]["large_threshold"],
            minimal_large=None,
        ),
        selected=payload["selected"],
        index_sequence=payload["index_sequence"],
        chain=payload["chain"],
        output=models.GraphModel(**payload["output"]),
    )


@app.post("/preimages", response_model=models.PreimageReportModel)
def preimages(request: models.PreimageRequest) -> models.PreimageReportModel:
    report = constructions.preimage_analysis(
        request.r, request.n, node_budget=_budget(request.budget)
    )
    return models.PreimageReportModel(**report)


@app.post("/gadget-h", response_model=models.GraphModel)
def gadget(request: models.GadgetRequest) -> models.GraphModel:
    return models.GraphModel.from_core(constructions.gadget_h(request.r))


@app.post("/amalgamate", response_model=models.GraphModel)
def amalgamate(request: models.AmalgamateRequest) -> models.GraphModel:
    a = request.a.to_core()
    b = request.b.to_core()
    if request.mode == "cr":
        result = constructions.amalgamate_cr(a, b, request.shared)
    else:
        result = constructions.amalgamate_mr(a, b, request.shared)
    return models.GraphModel.from_core(result)


def _axiom(model: models.AxiomModel) -> constructions.ExtensionAxiom:
    return constructions.ExtensionAxiom(
        base=model.base.to_core(), extended=model.extended.to_core()
    )


@app.post("/axiom/eval", response_model=models.AxiomEvalModel)
def axiom_eval(request: models.AxiomEvalRequest) -> models.AxiomEvalModel:
    satisfied = constructions.eval_extension_axiom(
        _axiom(request.axiom), request.graph.to_core()
    )
    return models.AxiomEvalModel(satisfied=satisfied)


@app.post("/axiom/curve", response_model=models.CurveModel)
def axiom_curve(request: models.AxiomCurveRequest) -> models.CurveModel:
    if request.n_min > request.n_max:
        raise DomainError("n_min must be at most n_max")
    axiom = _axiom(request.axiom)
    points = constructions.empirical_mu(
        axiom,
        request.family,
        range(request.n_min, request.n_max + 1),
        request.samples,
        request.seed,
    )
    return models.CurveModel(
        family=request.family,
        r=axiom.base.params.r,
        seed=request.seed,
        points=[models.CurvePointModel(**p) for p in points],
    )


@app.post("/matching-bound", response_model=models.MatchingBoundModel)
def matching_bound(request: models.MatchingBoundRequest) -> models.MatchingBoundModel:
    count, total = enumeration.matching_family_count(request.r, request.n)
    return models.MatchingBoundModel(
        r=request.r, n=request.n, matchings=count, family_total=total
    )


@app.post("/delta", response_model=models.DeltaModel)
def delta(request: models.DeltaRequest) -> models.DeltaModel:
    edits = core_delta(request.graph.to_core(), request.other.to_core())
    return models.DeltaModel(pairs=list(edits.pairs), size=len(edits))
