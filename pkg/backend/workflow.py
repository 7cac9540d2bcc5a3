import logging
from dataclasses import fields
from typing import Any, Callable, Dict, Iterable, List

from langgraph.graph import END, StateGraph

from core.errors import Cohom1Error, DslError, InvalidFamily
from core.state import RunState
from core.types import VerdictRecord
from dsl.parser import DiagramSource, parse
from topology.classify import classify, euler_class, principal_bundle_pi1
from topology.diagram import FamilyInstance, recognize_family, validate_family

logger = logging.getLogger(__name__)

Node = Callable[[RunState], Dict[str, Any]]


def parse_step(state: RunState) -> RunState:
    state.current_step = "parse"
    for src in state.sources:
        try:
            items = parse(src)
            state.parsed.extend((src.origin, item) for item in items)
            state.add_log(f"{src.origin}: {len(items)} declarations")
        except DslError as e:
            state.input_failures += 1
            state.add_error(f"{src.origin}: {e}")
    return state


def recognize_step(state: RunState) -> RunState:
    state.current_step = "recognize"
    for origin, item in state.parsed:
        if isinstance(item, FamilyInstance):
            state.instances.append((origin, item))
            continue
        try:
            f = recognize_family(item)
            state.instances.append((origin, f))
            state.add_log(f"{origin}: recognized {f}")
        except Cohom1Error as e:
            state.input_failures += 1
            state.add_error(f"{origin}: {e}")
    return state


def validate_step(state: RunState) -> RunState:
    state.current_step = "validate"
    for idx, (origin, f) in enumerate(state.instances):
        violations = validate_family(f)
        state.violations[idx] = violations
        if violations:
            state.add_warning(f"{origin}: {f} violates {', '.join(violations)}")
    return state


def make_record(f: FamilyInstance, violations: List[str]) -> VerdictRecord:
    if violations:
        return VerdictRecord(family=f.tag, params=f.params, valid=False, violations=violations)
    verdict = classify(f)
    euler = list(euler_class(f).coordinates) if f.tag in ("N6B", "N6F") else None
    pi1_P = str(principal_bundle_pi1(f)) if f.tag in ("N6C", "N6D", "N6E") else None
    return VerdictRecord(
        family=f.tag,
        params=f.params,
        valid=True,
        verdict=verdict.payload(),
        euler=euler,
        pi1_P=pi1_P,
    )


def classify_step(state: RunState) -> RunState:
    state.current_step = "classify"
    for idx, (origin, f) in enumerate(state.instances):
        try:
            state.records.append(make_record(f, state.violations.get(idx, [])))
        except InvalidFamily as e:
            state.records.append(VerdictRecord(family=f.tag, params=f.params, valid=False, violations=e.violations))
    state.add_log(f"{len(state.records)} records")
    return state


def _as_state(state) -> RunState:
    if isinstance(state, dict):
        return RunState(**state)
    return state


def _updates(state: RunState) -> Dict[str, Any]:
    return {f.name: getattr(state, f.name) for f in fields(RunState)}


def _guarded(step: Callable[[RunState], RunState], label: str) -> Node:
    def node(state) -> Dict[str, Any]:
        state = _as_state(state)
        try:
            state = step(state)
        except Exception as e:
            state.add_error(f"{label} failed: {e}")
        return _updates(state)

    node.__name__ = f"{step.__name__.replace('_step', '')}_node"
    return node


parse_node = _guarded(parse_step, "Parsing")
recognize_node = _guarded(recognize_step, "Recognition")
validate_node = _guarded(validate_step, "Validation")
classify_node = _guarded(classify_step, "Classification")


def create_workflow():
    workflow = StateGraph(RunState)

    workflow.add_node("parse", parse_node)
    workflow.add_node("recognize", recognize_node)
    workflow.add_node("validate", validate_node)
    workflow.add_node("classify", classify_node)

    workflow.set_entry_point("parse")
    workflow.add_edge("parse", "recognize")
    workflow.add_edge("recognize", "validate")
    workflow.add_edge("validate", "classify")
    workflow.add_edge("classify", END)

    return workflow.compile()


def create_records_workflow():
    workflow = StateGraph(RunState)

    workflow.add_node("validate", validate_node)
    workflow.add_node("classify", classify_node)

    workflow.set_entry_point("validate")
    workflow.add_edge("validate", "classify")
    workflow.add_edge("classify", END)

    return workflow.compile()


def _run(workflow, initial_state: RunState) -> RunState:
    state = _as_state(workflow.invoke(_updates(initial_state)))
    for error in state.errors:
        logger.info(error)
    return state


def run_pipeline(sources: Iterable[DiagramSource]) -> RunState:
    initial_state = RunState(sources=list(sources))
    return _run(create_workflow(), initial_state)


def run_records(instances: Iterable[FamilyInstance], origin: str = "<sweep>") -> RunState:
    initial_state = RunState(instances=[(origin, f) for f in instances])
    return _run(create_records_workflow(), initial_state)


def reingest(lines: Iterable[str]) -> List[VerdictRecord]:
    """Recomputes the records whose JSONL serialization is given."""
    instances = []
    for line in lines:
        if line.strip():
            record = VerdictRecord.model_validate_json(line)
            instances.append(FamilyInstance(record.family, dict(record.params)))
    return run_records(instances, "<jsonl>").records
