"""Dataset ingestion, attack campaigns, reports, augmentation export and
the human-annotation flow.

Dataset formats (documented mappings):

- generic-jsonl: one JSON object per line with keys
      id, text, equation (optional), answer (optional), source (optional)
  At least one of equation/answer must be present.
- MaWPS: a JSON array of {iIndex, sQuestion, lEquations, lSolutions}.
- ASDiv-A: a JSON array of {@ID|ID, Body, Question, Formula, Answer};
  "a+b=c" formulas become "X = a+b".

Records whose gold labels are inconsistent (equation does not parse, value
disagrees with the answer, equation literals missing from the text, or the
text has no identifiable question) are quarantined with a reason, never
silently dropped.
"""
from __future__ import annotations

import json
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .equation import DEFAULT_TOL, answers_equivalent, evaluate_equation, judge, parse_equation
from .errors import (
    EmptyInput,
    FormatError,
    InvalidConfig,
    MwpAttackError,
    NoQuestionFound,
    OracleUnavailable,
)
from .paraphrase import sp_attack
from .problem import MathWordProblem, extract_quantities, normalize_ws
from .reorder import ReorderConfig, qr_attack
from .results import METHOD_QR, METHOD_SP, AttackResult, _num_json

KNOWN_FORMATS = ("generic-jsonl", "mawps", "asdiv-a")


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    text: str
    gold_equation: str | None
    gold_answer: Fraction | None
    source: str = "custom"


@dataclass(frozen=True)
class QuarantinedRecord:
    id: str
    reason: str
    raw: dict


@dataclass
class LoadResult:
    records: list[DatasetRecord]
    quarantined: list[QuarantinedRecord]


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("boolean is not a number")
    if isinstance(value, (int, float)):
        return Fraction(str(value))
    if isinstance(value, str):
        m = re.match(r"\s*(-?\d+(?:\.\d+)?(?:/\d+)?)", value)
        if not m:
            raise ValueError(f"no number in {value!r}")
        return Fraction(m.group(1))
    raise ValueError(f"cannot read number from {value!r}")


def _check_record(rec: DatasetRecord, tol: float) -> str | None:
    """Consistency checks; returns a quarantine reason or None."""
    if not rec.text or not rec.text.strip():
        return "blank problem text"
    if rec.gold_equation is None and rec.gold_answer is None:
        return "no gold equation and no gold answer"
    value = None
    if rec.gold_equation is not None:
        try:
            ast = parse_equation(rec.gold_equation)
            value = evaluate_equation(ast)
        except MwpAttackError as exc:
            return f"gold equation does not evaluate: {exc}"
        if rec.gold_answer is not None and not answers_equivalent(value, rec.gold_answer, tol):
            return f"gold equation value {value} != gold answer {rec.gold_answer}"
        text_values = [q.value for q in extract_quantities(rec.text)]
        for lit in _equation_literals(ast):
            if lit in text_values:
                text_values.remove(lit)
            else:
                return f"equation literal {lit} not found in problem text"
    try:
        MathWordProblem.parse(rec.text, id=rec.id)
    except (EmptyInput, NoQuestionFound) as exc:
        return f"text does not parse as a problem: {exc}"
    return None


def _equation_literals(ast) -> list[Fraction]:
    from .equation import BinOp, Num

    out: list[Fraction] = []

    def walk(node):
        if isinstance(node, Num):
            out.append(abs(node.value))
        elif isinstance(node, BinOp):
            walk(node.left)
            walk(node.right)

    walk(ast.rhs)
    return out


def _iter_generic_jsonl(path: str):
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    if not any(line.strip() for line in lines):
        raise FormatError("empty dataset file", path=path)
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise FormatError(f"bad JSON: {exc}", path=path, line=lineno) from exc
        if not isinstance(obj, dict) or "text" not in obj:
            raise FormatError("record needs a 'text' field", path=path, line=lineno)
        yield lineno, obj


def _load_json_array(path: str) -> list:
    with open(path, encoding="utf-8") as fh:
        content = fh.read()
    if not content.strip():
        raise FormatError("empty dataset file", path=path)
    try:
        data = json.loads(content)
    except ValueError as exc:
        raise FormatError(f"bad JSON: {exc}", path=path) from exc
    if not isinstance(data, list):
        raise FormatError("expected a JSON array of records", path=path)
    return data


def load_dataset(path: str, format: str = "generic-jsonl", tol: float = DEFAULT_TOL) -> LoadResult:
    fmt = format.lower()
    if fmt not in KNOWN_FORMATS:
        raise FormatError(f"unknown dataset format {format!r} (known: {KNOWN_FORMATS})")
    records: list[DatasetRecord] = []
    quarantined: list[QuarantinedRecord] = []

    def admit(rec_id, text, equation, answer, source, raw):
        try:
            answer_f = None if answer is None else _to_fraction(answer)
        except ValueError as exc:
            quarantined.append(QuarantinedRecord(rec_id, f"unreadable answer: {exc}", raw))
            return
        rec = DatasetRecord(id=rec_id, text=text, gold_equation=equation,
                            gold_answer=answer_f, source=source)
        reason = _check_record(rec, tol)
        if reason is None:
            records.append(rec)
        else:
            quarantined.append(QuarantinedRecord(rec_id, reason, raw))

    if fmt == "generic-jsonl":
        for lineno, obj in _iter_generic_jsonl(path):
            admit(str(obj.get("id", f"line{lineno}")), obj["text"],
                  obj.get("equation"), obj.get("answer"),
                  obj.get("source", "custom"), obj)
    elif fmt == "mawps":
        for i, obj in enumerate(_load_json_array(path)):
            rec_id = f"mawps-{obj.get('iIndex', i)}"
            eqs = obj.get("lEquations") or []
            sols = obj.get("lSolutions") or []
            if len(eqs) != 1:
                quarantined.append(QuarantinedRecord(rec_id, f"expected 1 equation, got {len(eqs)}", obj))
                continue
            admit(rec_id, obj.get("sQuestion", ""), _mawps_equation(eqs[0]),
                  sols[0] if sols else None, "MaWPS", obj)
    else:  # asdiv-a
        for i, obj in enumerate(_load_json_array(path)):
            rec_id = str(obj.get("@ID") or obj.get("ID") or f"asdiv-{i}")
            text = " ".join(p for p in (obj.get("Body", ""), obj.get("Question", "")) if p)
            admit(rec_id, text, _asdiv_equation(obj.get("Formula", "")),
                  obj.get("Answer"), "ASDiv-A", obj)
    return LoadResult(records=records, quarantined=quarantined)


def _mawps_equation(eq: str) -> str:
    eq = eq.strip()
    if "=" in eq:
        lhs, rhs = eq.split("=", 1)
        if lhs.strip() in ("X", "x"):
            return f"X = {rhs.strip()}"
        if rhs.strip() in ("X", "x"):
            return f"X = {lhs.strip()}"
    return eq


def _asdiv_equation(formula: str) -> str | None:
    formula = formula.strip()
    if not formula:
        return None
    if "=" in formula:
        lhs, rhs = formula.rsplit("=", 1)
        if lhs.strip() in ("X", "x"):
            return f"X = {rhs.strip()}"
        return f"X = {lhs.strip()}"
    return f"X = {formula}"


# --- campaigns --------------------------------------------------------------

@dataclass(frozen=True)
class CampaignConfig:
    methods: tuple[str, ...] = (METHOD_QR, METHOD_SP)
    m: int = 7
    budget: int = 512
    tol: float = DEFAULT_TOL
    seed: int = 0
    parallelism: int = 1
    success_rule: str = "verdict"

    def __post_init__(self):
        methods = tuple(m.upper() for m in self.methods)
        object.__setattr__(self, "methods", methods)
        if not methods:
            raise InvalidConfig("methods must be nonempty")
        unknown = set(methods) - {METHOD_QR, METHOD_SP}
        if unknown:
            raise InvalidConfig(f"unknown methods: {sorted(unknown)}")
        if self.m < 1 or self.budget < 1 or self.parallelism < 1:
            raise InvalidConfig("m, budget and parallelism must all be >= 1")
        if self.tol < 0:
            raise InvalidConfig("tol must be >= 0")
        if self.success_rule not in ("verdict", "prediction-change"):
            raise InvalidConfig(f"unknown success_rule {self.success_rule!r}")

    def to_json_dict(self) -> dict:
        return {
            "methods": list(self.methods), "m": self.m, "budget": self.budget,
            "tol": self.tol, "seed": self.seed, "parallelism": self.parallelism,
            "success_rule": self.success_rule,
        }


@dataclass
class MethodStats:
    n_records: int
    n_originally_correct: int
    n_successes: int
    total_queries: int

    @property
    def original_accuracy_pct(self) -> float:
        return round(100.0 * self.n_originally_correct / self.n_records, 1) if self.n_records else 0.0

    @property
    def adversarial_accuracy_pct(self) -> float:
        n_adv = self.n_originally_correct - self.n_successes
        return round(100.0 * n_adv / self.n_records, 1) if self.n_records else 0.0

    @property
    def success_rate_pct(self) -> float:
        if not self.n_originally_correct:
            return 0.0
        return round(100.0 * self.n_successes / self.n_originally_correct, 1)

    @property
    def mean_queries(self) -> float:
        return round(self.total_queries / self.n_records, 2) if self.n_records else 0.0


@dataclass
class CampaignReport:
    solver_name: str
    config: CampaignConfig
    records: list[DatasetRecord]
    results: dict[str, list[AttackResult]]  # method -> per-record results
    errors: dict[str, str] = field(default_factory=dict)  # record id -> message

    def stats(self, method: str) -> MethodStats:
        rs = self.results.get(method, [])
        return MethodStats(
            n_records=len(rs),
            n_originally_correct=sum(1 for r in rs if r.originally_correct),
            n_successes=sum(1 for r in rs if r.success),
            total_queries=sum(r.queries_used for r in rs),
        )

    def gold_for(self, record_id: str) -> DatasetRecord | None:
        for rec in self.records:
            if rec.id == record_id:
                return rec
        return None


class _MemoSolver:
    """In-memory dedupe so each distinct text costs one underlying call."""

    def __init__(self, inner):
        self.inner = inner
        self._memo: dict[str, str] = {}
        self._lock = threading.Lock()

    def solve(self, text: str) -> str:
        key = normalize_ws(text)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        result = self.inner.solve(text)
        with self._lock:
            self._memo[key] = result
        return result


def run_campaign(records, solver, provider, config: CampaignConfig,
                 solver_name: str = "solver") -> CampaignReport:
    """Attack every record with every configured method.

    The original verdict is computed once per record (queries are memoized
    across methods).  A record whose oracle dies after retries is marked
    errored and the campaign continues.
    """
    memo = _MemoSolver(solver)
    results: dict[str, list[AttackResult]] = {m: [] for m in config.methods}
    errors: dict[str, str] = {}
    lock = threading.Lock()

    def attack_record(rec: DatasetRecord):
        problem = MathWordProblem.parse(
            rec.text, id=rec.id, gold_equation=rec.gold_equation, gold_answer=rec.gold_answer)
        out = {}
        for method in config.methods:
            if method == METHOD_QR:
                try:
                    res = qr_attack(problem, memo, tol=config.tol,
                                    config=ReorderConfig(),
                                    success_rule=config.success_rule)
                except MwpAttackError as exc:
                    if isinstance(exc, OracleUnavailable):
                        raise
                    # e.g. no body to reorder: record stays unattacked
                    pred = memo.solve(problem.raw_text)
                    v = judge(pred, rec.gold_equation, rec.gold_answer, config.tol)
                    res = AttackResult(
                        method=METHOD_QR, original_text=rec.text, adversarial_text=rec.text,
                        original_prediction=pred, adversarial_prediction=pred,
                        success=False, queries_used=1, originally_correct=v.correct,
                        original_verdict=v, adversarial_verdict=v, problem_id=rec.id,
                        notes={"why": f"not reorderable: {exc}"})
            else:
                res = sp_attack(problem, memo, provider, m=config.m,
                                budget=config.budget, tol=config.tol,
                                success_rule=config.success_rule)
            out[method] = res
        return rec.id, out

    def worker(rec: DatasetRecord):
        try:
            rec_id, out = attack_record(rec)
        except OracleUnavailable as exc:
            with lock:
                errors[rec.id] = str(exc)
            return
        with lock:
            for method, res in out.items():
                results[method].append(res)

    if config.parallelism == 1:
        for rec in records:
            worker(rec)
    else:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            list(pool.map(worker, records))

    # order-independent assembly: key results by record order
    order = {rec.id: i for i, rec in enumerate(records)}
    for method in results:
        results[method].sort(key=lambda r: order.get(r.problem_id, len(order)))
    return CampaignReport(solver_name=solver_name, config=config,
                          records=list(records), results=results, errors=errors)


def report_to_json(report: CampaignReport) -> dict:
    per_method = {}
    for method in report.config.methods:
        st = report.stats(method)
        per_method[method] = {
            "original_accuracy_pct": st.original_accuracy_pct,
            "adversarial_accuracy_pct": st.adversarial_accuracy_pct,
            "success_rate_pct": st.success_rate_pct,
            "mean_queries": st.mean_queries,
            "n_records": st.n_records,
            "n_originally_correct": st.n_originally_correct,
            "n_successes": st.n_successes,
        }
    return {
        "solver": report.solver_name,
        "config": report.config.to_json_dict(),
        "n_records": len(report.records),
        "errors": report.errors,
        "per_method": per_method,
    }


def render_report(report: CampaignReport) -> str:
    """Fixed-width accuracy table, one row per eval type."""
    col = max(len(report.solver_name), 8)
    lines = [f"{'Eval Type':<12}{report.solver_name:>{col}}",
             f"{'-' * 12}{'-' * col}"]
    methods = list(report.config.methods)
    shown_orig = False
    for method in methods:
        st = report.stats(method)
        if not shown_orig:
            lines.append(f"{'Orig':<12}{st.original_accuracy_pct:>{col}.1f}")
            shown_orig = True
        lines.append(f"{method:<12}{st.adversarial_accuracy_pct:>{col}.1f}")
    if not methods:
        lines.append(f"{'Orig':<12}{'-':>{col}}")
    lines.append("")
    for method in methods:
        st = report.stats(method)
        lines.append(
            f"{method}: success rate {st.success_rate_pct:.1f}% "
            f"({st.n_successes}/{st.n_originally_correct} originally correct), "
            f"mean queries/problem {st.mean_queries:.2f}"
        )
    if report.errors:
        lines.append(f"errored records: {len(report.errors)}")
    return "\n".join(lines)


# --- augmentation export ----------------------------------------------------

def export_adversarial_training_set(report: CampaignReport, out_path: str,
                                    keep_ids: set[str] | None = None) -> int:
    """Write one generic-jsonl line per successful attack, gold labels kept.

    keep_ids optionally restricts the export (used by the annotation filter).
    Returns the number of lines written; the file is created even when 0.
    """
    written = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for method in report.config.methods:
            for res in report.results.get(method, []):
                if not res.success:
                    continue
                if keep_ids is not None and f"{res.problem_id}:{method}" not in keep_ids:
                    continue
                rec = report.gold_for(res.problem_id)
                line = {
                    "id": f"{res.problem_id}-{method.lower()}",
                    "text": res.adversarial_text,
                    "equation": rec.gold_equation if rec else None,
                    "answer": _num_json(rec.gold_answer) if rec else None,
                    "method": method,
                    "source": "adversarial",
                }
                fh.write(json.dumps(line) + "\n")
                written += 1
    return written


# --- human annotation -------------------------------------------------------

@dataclass(frozen=True)
class AnnotationRecord:
    example_id: str
    same_equation: bool
    similarity: float
    grammaticality: int
    annotator_id: str

    def __post_init__(self):
        if not 0.0 <= self.similarity <= 1.0:
            raise ValueError("similarity must be in [0, 1]")
        if not 1 <= self.grammaticality <= 5 or int(self.grammaticality) != self.grammaticality:
            raise ValueError("grammaticality must be an integer in [1, 5]")

    def to_json_dict(self) -> dict:
        return {
            "example_id": self.example_id, "same_equation": self.same_equation,
            "similarity": self.similarity, "grammaticality": self.grammaticality,
            "annotator_id": self.annotator_id,
        }


def annotation_from_json(obj: dict) -> AnnotationRecord:
    return AnnotationRecord(
        example_id=str(obj["example_id"]), same_equation=bool(obj["same_equation"]),
        similarity=float(obj["similarity"]), grammaticality=int(obj["grammaticality"]),
        annotator_id=str(obj["annotator_id"]),
    )


def _ask_bool(prompt, input_fn, print_fn) -> bool:
    while True:
        raw = input_fn(prompt).strip().lower()
        if raw in ("y", "yes", "true", "1"):
            return True
        if raw in ("n", "no", "false", "0"):
            return False
        print_fn("please answer y or n")


def _ask_number(prompt, lo, hi, cast, input_fn, print_fn):
    while True:
        raw = input_fn(prompt).strip()
        try:
            val = cast(raw)
        except ValueError:
            print_fn(f"please enter a number in [{lo}, {hi}]")
            continue
        if lo <= val <= hi:
            return val
        print_fn(f"please enter a number in [{lo}, {hi}]")


def annotate(report: CampaignReport, annotator_id: str, out_path: str,
             input_fn=input, print_fn=print) -> list[AnnotationRecord]:
    """Interactive annotation of every successful adversarial example.

    Three questions per example: same resulting equation (y/n), semantic
    similarity in [0, 1], grammaticality in [1, 5].  Records are appended to
    out_path as they are entered, so an interrupted session resumes where it
    stopped (already-annotated examples are skipped for this annotator).
    """
    done: set[str] = set()
    existing: list[AnnotationRecord] = []
    try:
        with open(out_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = annotation_from_json(json.loads(line))
                    existing.append(rec)
                    if rec.annotator_id == annotator_id:
                        done.add(rec.example_id)
    except FileNotFoundError:
        pass

    new: list[AnnotationRecord] = []
    with open(out_path, "a", encoding="utf-8") as fh:
        for method in report.config.methods:
            for res in report.results.get(method, []):
                if not res.success:
                    continue
                example_id = f"{res.problem_id}:{method}"
                if example_id in done:
                    continue
                print_fn(f"\n=== {example_id} ===")
                print_fn(f"original:    {res.original_text}")
                print_fn(f"adversarial: {res.adversarial_text}")
                same = _ask_bool("same linear equation as the original? [y/n] ",
                                 input_fn, print_fn)
                sim = _ask_number("semantic similarity (0 to 1): ", 0.0, 1.0,
                                  float, input_fn, print_fn)
                gram = _ask_number("grammatical correctness (1 to 5): ", 1, 5,
                                   int, input_fn, print_fn)
                rec = AnnotationRecord(example_id=example_id, same_equation=same,
                                       similarity=sim, grammaticality=gram,
                                       annotator_id=annotator_id)
                fh.write(json.dumps(rec.to_json_dict()) + "\n")
                fh.flush()
                new.append(rec)
    return [r for r in existing if r.annotator_id == annotator_id] + new


@dataclass(frozen=True)
class AnnotationSummary:
    same_equation_pct: float
    mean_similarity: float
    mean_grammaticality: float
    n_examples: int
    n_annotations: int

    def to_json_dict(self) -> dict:
        return {
            "same_equation_pct": self.same_equation_pct,
            "mean_similarity": self.mean_similarity,
            "mean_grammaticality": self.mean_grammaticality,
            "n_examples": self.n_examples,
            "n_annotations": self.n_annotations,
        }


def aggregate_annotations(records: list[AnnotationRecord]) -> AnnotationSummary:
    """Average per example over its annotators first, then across examples."""
    if not records:
        raise EmptyInput("no annotation records")
    by_example: dict[str, list[AnnotationRecord]] = {}
    for rec in records:
        by_example.setdefault(rec.example_id, []).append(rec)
    same, sim, gram = [], [], []
    for recs in by_example.values():
        same.append(sum(1.0 for r in recs if r.same_equation) / len(recs))
        sim.append(sum(r.similarity for r in recs) / len(recs))
        gram.append(sum(r.grammaticality for r in recs) / len(recs))
    n = len(by_example)
    return AnnotationSummary(
        same_equation_pct=round(100.0 * sum(same) / n, 1),
        mean_similarity=round(sum(sim) / n, 2),
        mean_grammaticality=round(sum(gram) / n, 2),
        n_examples=n,
        n_annotations=len(records),
    )


def majority_same_equation(records: list[AnnotationRecord]) -> set[str]:
    """Example ids where a strict majority of annotators said same-equation."""
    by_example: dict[str, list[AnnotationRecord]] = {}
    for rec in records:
        by_example.setdefault(rec.example_id, []).append(rec)
    keep = set()
    for example_id, recs in by_example.items():
        if sum(1 for r in recs if r.same_equation) * 2 > len(recs):
            keep.add(example_id)
    return keep
