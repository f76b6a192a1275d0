import json

import pytest

from mwp_attack import load_dataset
from mwp_attack.cli import EXIT_CONFIG, EXIT_FORMAT, EXIT_OK, EXIT_ORACLE, main

from conftest import DATA_DIR


@pytest.fixture
def workdir(tmp_path):
    return tmp_path


def _attack_args(workdir, extra=()):
    return ["attack",
            "--dataset", str(DATA_DIR / "corpus20.jsonl"),
            "--format", "generic-jsonl",
            "--solver-script", str(DATA_DIR / "solver_script20.json"),
            "--rule-paraphraser",
            "--methods", "qr,sp",
            "--m", "7", "--budget", "64", "--seed", "7",
            "--out", str(workdir / "results.jsonl"), *extra]


class TestAttackVerb:
    def test_full_run(self, workdir, capsys):
        assert main(_attack_args(workdir)) == EXIT_OK
        out = capsys.readouterr().out
        assert "Orig" in out and "QR" in out and "SP" in out
        lines = [json.loads(l) for l in open(workdir / "results.jsonl") if l.strip()]
        assert len(lines) == 40  # 20 records x 2 methods
        meta = json.load(open(str(workdir / "results.jsonl") + ".meta.json"))
        assert meta["n_records"] == 20

    def test_missing_dataset_exits_2(self, workdir):
        args = _attack_args(workdir)
        args[args.index("--dataset") + 1] = str(workdir / "nope.jsonl")
        assert main(args) == EXIT_FORMAT

    def test_bad_dataset_exits_2(self, workdir):
        bad = workdir / "bad.jsonl"
        bad.write_text("{not json\n")
        args = _attack_args(workdir)
        args[args.index("--dataset") + 1] = str(bad)
        assert main(args) == EXIT_FORMAT

    def test_unreachable_solver_exits_3(self, workdir):
        args = ["attack",
                "--dataset", str(DATA_DIR / "corpus20.jsonl"),
                "--solver-url", "http://127.0.0.1:9/",
                "--rule-paraphraser",
                "--out", str(workdir / "r.jsonl")]
        assert main(args) == EXIT_ORACLE

    def test_invalid_config_exits_4(self, workdir):
        args = _attack_args(workdir, extra=["--parallelism", "0"])
        assert main(args) == EXIT_CONFIG

    def test_config_file_merged(self, workdir):
        cfg = workdir / "cfg.json"
        cfg.write_text(json.dumps({"budget": 16, "m": 3}))
        args = ["attack",
                "--dataset", str(DATA_DIR / "corpus20.jsonl"),
                "--solver-script", str(DATA_DIR / "solver_script20.json"),
                "--methods", "qr",
                "--config", str(cfg),
                "--out", str(workdir / "results.jsonl")]
        assert main(args) == EXIT_OK
        meta = json.load(open(str(workdir / "results.jsonl") + ".meta.json"))
        assert meta["config"]["budget"] == 16 and meta["config"]["m"] == 3
        assert meta["config"]["methods"] == ["QR"]


class TestReportVerb:
    def test_report_from_results(self, workdir, capsys):
        main(_attack_args(workdir))
        capsys.readouterr()
        code = main(["report", "--results", str(workdir / "results.jsonl"),
                     "--json-out", str(workdir / "report.json")])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "Orig" in out
        js = json.load(open(workdir / "report.json"))
        assert js["per_method"]["QR"]["original_accuracy_pct"] == 60.0
        assert js["per_method"]["QR"]["adversarial_accuracy_pct"] == 25.0
        assert js["per_method"]["SP"]["adversarial_accuracy_pct"] == 15.0

    def test_empty_results_exits_2(self, workdir):
        empty = workdir / "r.jsonl"
        empty.write_text("")
        assert main(["report", "--results", str(empty)]) == EXIT_FORMAT


class TestExportVerb:
    def test_export_and_reingest(self, workdir, capsys):
        main(_attack_args(workdir))
        out = workdir / "aug.jsonl"
        code = main(["export-augment", "--results", str(workdir / "results.jsonl"),
                     "--out", str(out)])
        assert code == EXIT_OK
        reloaded = load_dataset(str(out), "generic-jsonl")
        assert len(reloaded.records) == 16  # 7 QR + 9 SP successes
        assert not reloaded.quarantined

    def test_filter_needs_annotations(self, workdir):
        main(_attack_args(workdir))
        code = main(["export-augment", "--results", str(workdir / "results.jsonl"),
                     "--out", str(workdir / "aug.jsonl"), "--filter"])
        assert code == EXIT_CONFIG

    def test_filtered_export(self, workdir):
        main(_attack_args(workdir))
        ann = workdir / "ann.jsonl"
        rows = [
            {"example_id": "p01:QR", "same_equation": True, "similarity": 0.9,
             "grammaticality": 5, "annotator_id": a} for a in ("a1", "a2", "a3")
        ] + [
            {"example_id": "p02:QR", "same_equation": False, "similarity": 0.2,
             "grammaticality": 2, "annotator_id": a} for a in ("a1", "a2", "a3")
        ]
        ann.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        out = workdir / "aug.jsonl"
        code = main(["export-augment", "--results", str(workdir / "results.jsonl"),
                     "--out", str(out), "--filter", "--annotations", str(ann)])
        assert code == EXIT_OK
        lines = [json.loads(l) for l in open(out) if l.strip()]
        assert [l["id"] for l in lines] == ["p01-qr"]


class TestAggregateVerb:
    def test_aggregate(self, workdir, capsys):
        ann = workdir / "ann.jsonl"
        rows = [{"example_id": "e1", "same_equation": True, "similarity": 0.9,
                 "grammaticality": g, "annotator_id": f"a{g}"} for g in (4, 5, 5)]
        ann.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        code = main(["aggregate-annotations", "--annotations", str(ann),
                     "--json-out", str(workdir / "summary.json")])
        assert code == EXIT_OK
        js = json.load(open(workdir / "summary.json"))
        assert js["mean_grammaticality"] == 4.67
        assert "100.0%" in capsys.readouterr().out

    def test_bad_annotation_file_exits_2(self, workdir):
        ann = workdir / "ann.jsonl"
        ann.write_text('{"example_id": "e1", "similarity": 2.0}\n')
        assert main(["aggregate-annotations", "--annotations", str(ann)]) == EXIT_FORMAT
