"""Command line interface.

Verbs: attack, report, export-augment, annotate, aggregate-annotations.
Exit codes: 0 ok, 2 dataset/format error, 3 oracle unreachable, 4 bad config.
"""
from __future__ import annotations

import argparse
import json
import sys

from .equation import DEFAULT_TOL
from .errors import FormatError, InvalidConfig, OracleUnavailable
from .harness import (
    CampaignConfig,
    CampaignReport,
    DatasetRecord,
    aggregate_annotations,
    annotate,
    annotation_from_json,
    export_adversarial_training_set,
    load_dataset,
    majority_same_equation,
    render_report,
    report_to_json,
    run_campaign,
)
from .oracles import (
    HttpSolverClient,
    OracleCache,
    CachingSolver,
    CachingParaphraser,
    ParaphraseProviderConfig,
    RuleParaphraser,
    SolverEndpoint,
    build_provider,
    scripted_solver,
)
from .results import AttackResult

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_ORACLE = 3
EXIT_CONFIG = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mwp-attack",
                                     description="Adversarial robustness harness for MWP solvers")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("attack", help="run an attack campaign over a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", default="generic-jsonl",
                   choices=["generic-jsonl", "mawps", "asdiv-a"])
    solver = p.add_mutually_exclusive_group(required=True)
    solver.add_argument("--solver-url", help="remote solver base URL")
    solver.add_argument("--solver-script",
                        help="JSON file {text: equation, ...} plus optional _fallback key")
    provider = p.add_mutually_exclusive_group()
    provider.add_argument("--paraphrase-url", help="remote paraphrase provider base URL")
    provider.add_argument("--rule-paraphraser", action="store_true",
                          help="use the built-in rule-based paraphraser (default)")
    p.add_argument("--methods", default="qr,sp", help="comma list from {qr,sp}")
    p.add_argument("--m", type=int, default=7)
    p.add_argument("--budget", type=int, default=512)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--success-rule", default="verdict",
                   choices=["verdict", "prediction-change"])
    p.add_argument("--config", help="JSON file mirroring the campaign config; flags win")
    p.add_argument("--cache", help="JSONL oracle-cache file (resumable campaigns)")
    p.add_argument("--solver-name", default=None)
    p.add_argument("--out", required=True, help="results JSONL path")

    p = sub.add_parser("report", help="render the accuracy table for saved results")
    p.add_argument("--results", required=True)
    p.add_argument("--json-out", help="also write the machine-readable report here")

    p = sub.add_parser("export-augment", help="export successful attacks as training records")
    p.add_argument("--results", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--annotations", help="annotation JSONL used by --filter")
    p.add_argument("--filter", action="store_true",
                   help="keep only examples a majority of annotators marked same-equation")

    p = sub.add_parser("annotate", help="interactively annotate successful attacks")
    p.add_argument("--results", required=True)
    p.add_argument("--annotator", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("aggregate-annotations", help="summarize annotation scores")
    p.add_argument("--annotations", required=True)
    p.add_argument("--json-out")

    return parser


def _load_solver(args):
    if args.solver_url:
        endpoint = SolverEndpoint(base_url=args.solver_url,
                                  name=args.solver_name or args.solver_url)
        return HttpSolverClient(endpoint), args.solver_name or "remote-solver"
    with open(args.solver_script, encoding="utf-8") as fh:
        script = json.load(fh)
    fallback = script.pop("_fallback", "X = 0")
    return scripted_solver(script, fallback), args.solver_name or "scripted-solver"


def _load_provider(args):
    if args.paraphrase_url:
        return build_provider(ParaphraseProviderConfig(kind="remote", base_url=args.paraphrase_url))
    return RuleParaphraser()


def _campaign_config(args) -> CampaignConfig:
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise InvalidConfig("config file must hold a JSON object")
    methods = tuple(m.strip().upper() for m in args.methods.split(",") if m.strip())
    merged = {
        "methods": base.get("methods", methods),
        "m": args.m if args.m != 7 else base.get("m", args.m),
        "budget": args.budget if args.budget != 512 else base.get("budget", args.budget),
        "tol": args.tol if args.tol != DEFAULT_TOL else base.get("tol", args.tol),
        "seed": args.seed if args.seed != 0 else base.get("seed", args.seed),
        "parallelism": args.parallelism if args.parallelism != 1 else base.get("parallelism", args.parallelism),
        "success_rule": args.success_rule if args.success_rule != "verdict" else base.get("success_rule", args.success_rule),
    }
    if methods != ("QR", "SP"):
        merged["methods"] = methods
    merged["methods"] = tuple(merged["methods"])
    return CampaignConfig(**merged)


def _cmd_attack(args) -> int:
    config = _campaign_config(args)
    loaded = load_dataset(args.dataset, args.format, tol=config.tol)
    if loaded.quarantined:
        qpath = args.out + ".quarantine.jsonl"
        with open(qpath, "w", encoding="utf-8") as fh:
            for q in loaded.quarantined:
                fh.write(json.dumps({"id": q.id, "reason": q.reason}) + "\n")
        print(f"quarantined {len(loaded.quarantined)} record(s), reasons in {qpath}",
              file=sys.stderr)
    solver, solver_name = _load_solver(args)
    provider = _load_provider(args)
    if args.cache:
        cache = OracleCache(args.cache)
        solver = CachingSolver(solver, cache, name=solver_name)
        provider = CachingParaphraser(provider, cache)

    report = run_campaign(loaded.records, solver, provider, config, solver_name=solver_name)
    if loaded.records and len(report.errors) == len(loaded.records):
        raise OracleUnavailable(
            f"every record failed, solver looks down (first: {next(iter(report.errors.values()))})")

    with open(args.out, "w", encoding="utf-8") as fh:
        for method in config.methods:
            for res in report.results[method]:
                line = res.to_json_dict()
                rec = report.gold_for(res.problem_id)
                if rec is not None:
                    line["gold_equation"] = rec.gold_equation
                    line["gold_answer"] = None if rec.gold_answer is None else str(rec.gold_answer)
                fh.write(json.dumps(line) + "\n")
    meta = {"solver": solver_name, "config": config.to_json_dict(),
            "dataset": args.dataset, "format": args.format,
            "n_records": len(loaded.records), "errors": report.errors}
    with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
    print(render_report(report))
    return EXIT_OK


def _results_to_report(results_path: str) -> CampaignReport:
    lines = []
    with open(results_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                lines.append(json.loads(line))
    if not lines:
        raise FormatError("results file is empty", path=results_path)
    try:
        with open(results_path + ".meta.json", encoding="utf-8") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        meta = {"solver": "solver", "config": {}}
    methods = tuple(sorted({obj["method"] for obj in lines},
                           key=lambda m: ("QR", "SP").index(m) if m in ("QR", "SP") else 99))
    cfg_raw = dict(meta.get("config", {}))
    cfg_raw["methods"] = methods
    allowed = {"methods", "m", "budget", "tol", "seed", "parallelism", "success_rule"}
    config = CampaignConfig(**{k: v for k, v in cfg_raw.items() if k in allowed})
    results: dict[str, list[AttackResult]] = {m: [] for m in methods}
    records: dict[str, DatasetRecord] = {}
    for obj in lines:
        res = AttackResult(
            method=obj["method"], original_text=obj["original_text"],
            adversarial_text=obj["adversarial_text"],
            original_prediction=obj.get("original_prediction"),
            adversarial_prediction=obj.get("adversarial_prediction"),
            success=bool(obj["success"]), queries_used=int(obj["queries_used"]),
            originally_correct=bool(obj["originally_correct"]),
            problem_id=str(obj["id"]), notes=obj.get("notes", {}),
        )
        results[res.method].append(res)
        if res.problem_id not in records:
            records[res.problem_id] = DatasetRecord(
                id=res.problem_id, text=res.original_text,
                gold_equation=obj.get("gold_equation"),
                gold_answer=None if obj.get("gold_answer") is None else _fraction(obj["gold_answer"]),
            )
    return CampaignReport(solver_name=meta.get("solver", "solver"), config=config,
                          records=list(records.values()), results=results,
                          errors=meta.get("errors", {}))


def _fraction(text):
    from fractions import Fraction
    return Fraction(str(text))


def _cmd_report(args) -> int:
    report = _results_to_report(args.results)
    print(render_report(report))
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(report_to_json(report), fh, indent=2)
    return EXIT_OK


def _cmd_export_augment(args) -> int:
    report = _results_to_report(args.results)
    keep_ids = None
    if args.filter:
        if not args.annotations:
            raise InvalidConfig("--filter needs --annotations")
        annotations = _read_annotations(args.annotations)
        keep_ids = majority_same_equation(annotations)
    n = export_adversarial_training_set(report, args.out, keep_ids=keep_ids)
    print(f"wrote {n} adversarial training record(s) to {args.out}")
    return EXIT_OK


def _read_annotations(path: str):
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(annotation_from_json(json.loads(line)))
            except (ValueError, KeyError) as exc:
                raise FormatError(f"bad annotation record: {exc}", path=path, line=lineno)
    return out


def _cmd_annotate(args) -> int:
    report = _results_to_report(args.results)
    records = annotate(report, args.annotator, args.out)
    print(f"{len(records)} annotation(s) on file for {args.annotator}")
    return EXIT_OK


def _cmd_aggregate(args) -> int:
    annotations = _read_annotations(args.annotations)
    if not annotations:
        raise FormatError("no annotation records", path=args.annotations)
    summary = aggregate_annotations(annotations)
    print(f"same linear equation: {summary.same_equation_pct:.1f}%")
    print(f"semantic similarity:  {summary.mean_similarity:.2f}")
    print(f"grammaticality:       {summary.mean_grammaticality:.2f}")
    print(f"({summary.n_examples} examples, {summary.n_annotations} annotations)")
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(summary.to_json_dict(), fh, indent=2)
    return EXIT_OK


_COMMANDS = {
    "attack": _cmd_attack,
    "report": _cmd_report,
    "export-augment": _cmd_export_augment,
    "annotate": _cmd_annotate,
    "aggregate-annotations": _cmd_aggregate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.cmd](args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OracleUnavailable as exc:
        print(f"oracle unreachable: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except InvalidConfig as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
