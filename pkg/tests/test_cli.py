import json
import re
import shutil

import pytest

from newsrank import cli
from newsrank.config import PipelineConfig
from newsrank.errors import ConfigError
from newsrank.report import MISSING, render_search_tables, render_tables


def report_with(sites, rankings=None, engines=None):
    r = {"sites": sites}
    if rankings is not None:
        r["rankings"] = rankings
    if engines is not None:
        r["search_engines"] = engines
    return r


def table_rows(text, title):
    block = text.split(title + "\n", 1)[1].split("\n\n", 1)[0]
    return [line.split() for line in block.splitlines()[1:]]


class TestRenderTables:
    sites = {
        "NYTimes": {"diversity": 0.45, "completeness": -0.2, "speed": 1.5},
        "BBC": {"diversity": 0.333, "completeness": None, "speed": 1.0},
        "CNN": {"diversity": 0.156, "completeness": -0.3, "speed": None},
    }

    def test_diversity_rows_descending(self):
        rows = table_rows(render_tables(report_with(self.sites)), "News diversity")
        assert rows == [["1", "NYTimes", "0.450"], ["2", "BBC", "0.333"], ["3", "CNN", "0.156"]]

    def test_null_rendered_last(self):
        text = render_tables(report_with(self.sites))
        rows = table_rows(text, "News completeness")
        assert rows[-1] == ["3", "BBC", MISSING]
        assert table_rows(text, "Speed")[-1] == ["3", "CNN", MISSING]

    def test_uses_report_rankings(self):
        rankings = {"diversity": ["CNN", "BBC", "NYTimes"], "completeness": ["NYTimes", "CNN", "BBC"],
                    "speed": ["NYTimes", "BBC", "CNN"]}
        rows = table_rows(render_tables(report_with(self.sites, rankings)), "News diversity")
        assert [r[1] for r in rows] == ["CNN", "BBC", "NYTimes"]

    def test_empty_score_table(self):
        engines = {"Yahoo": {"scores": {"BBC": 0, "CNN": 0, "NYTimes": 0}, "ranking": []}}
        rows = table_rows(render_search_tables(engines), "Yahoo ranking")
        assert [r[2] for r in rows] == ["0", "0", "0"]
        assert [r[1] for r in rows] == ["BBC", "CNN", "NYTimes"]

    def test_every_number_comes_from_report(self):
        engines = {"Bing": {"scores": {"BBC": 0, "CNN": 36, "NYTimes": 24}, "ranking": ["CNN", "NYTimes", "BBC"]}}
        report = report_with(self.sites, engines=engines)
        text = render_tables(report)
        allowed = {f"{v:.3f}" for s in self.sites.values() for v in s.values() if v is not None}
        allowed |= {str(v) for v in engines["Bing"]["scores"].values()}
        for title in ("News diversity", "News completeness", "Speed", "Bing ranking"):
            for row in table_rows(text, title):
                assert row[2] in allowed | {MISSING}


ONE_SITE = [{"name": "CNN", "domains": ["cnn.com"]}]


class TestConfig:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="colour"):
            PipelineConfig.from_dict({"colour": "blue"})

    def test_missing_tweets_path_named(self, tmp_path):
        cfg = PipelineConfig.from_dict({"inputs": {"tweets": "nowhere.jsonl"}, "sites": ONE_SITE}, tmp_path)
        with pytest.raises(ConfigError, match="nowhere.jsonl"):
            cfg.check_inputs("detect-events")

    def test_seed_override_changes_hash(self, mini_config):
        cfg = PipelineConfig.from_file(mini_config)
        assert cfg.digest() == PipelineConfig.from_file(mini_config).digest()
        assert cfg.with_overrides(seed=1).digest() != cfg.digest()
        assert cfg.with_overrides(out="elsewhere").digest() == cfg.digest()

    def test_bad_values(self):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"measures": {"divergence_mode": "kl"}})
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"gsdmm": {"K": 0}})


@pytest.fixture
def mini_copy(tmp_path, mini_config):
    dst = tmp_path / "mini"
    shutil.copytree(mini_config.parent, dst, ignore=shutil.ignore_patterns("out"))
    return dst / "config.json"


class TestCli:
    def test_missing_input_exits_nonzero(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"inputs": {"tweets": "gone.jsonl"}, "sites": ONE_SITE}))
        assert cli.main(["detect-events", "--config", str(cfg)]) == 1
        assert "gone.jsonl" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        assert cli.main(["run", "--config", str(tmp_path / "nope.json")]) == 1
        assert "nope.json" in capsys.readouterr().err

    def test_stage_error_names_stage(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        (tmp_path / "u.jsonl").write_text("{not json}\n")
        cfg.write_text(json.dumps({"inputs": {"users": "u.jsonl", "training_users": "u.jsonl"},
                                   "sites": ONE_SITE}))
        assert cli.main(["classify-publishers", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
        err = capsys.readouterr().err
        assert "classify-publishers" in err and "u.jsonl" in err

    def test_missing_upstream_stage_file(self, mini_copy, tmp_path, capsys):
        assert cli.main(["detect-events", "--config", str(mini_copy), "--out", str(tmp_path / "o")]) == 1
        assert "publishers.jsonl" in capsys.readouterr().err

    def test_stages_individually_match_run(self, mini_copy, tmp_path, capsys):
        staged, full = tmp_path / "staged", tmp_path / "full"
        for stage in ("classify-publishers", "detect-events", "rank", "serank", "report"):
            assert cli.main([stage, "--config", str(mini_copy), "--out", str(staged)]) == 0
        assert cli.main(["run", "--config", str(mini_copy), "--out", str(full)]) == 0
        for name in ("events.jsonl", "measures.json", "serank.json", "report.json", "tables.txt"):
            assert (staged / name).read_bytes() == (full / name).read_bytes(), name
        out = capsys.readouterr().out
        assert "News diversity" in out and "Bing ranking" in out

    def test_rerun_single_stage_reuses_outputs(self, mini_copy, tmp_path):
        out = tmp_path / "o"
        assert cli.main(["run", "--config", str(mini_copy), "--out", str(out)]) == 0
        before = (out / "report.json").read_bytes()
        assert cli.main(["rank", "--config", str(mini_copy), "--out", str(out)]) == 0
        assert cli.main(["report", "--config", str(mini_copy), "--out", str(out)]) == 0
        assert (out / "report.json").read_bytes() == before

    def test_seed_flag_recorded(self, mini_copy, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(["run", "--config", str(mini_copy), "--out", str(a)]) == 0
        assert cli.main(["run", "--config", str(mini_copy), "--out", str(b), "--seed", "7"]) == 0
        ha = json.loads((a / "report.json").read_text())["config_hash"]
        hb = json.loads((b / "report.json").read_text())["config_hash"]
        assert re.fullmatch(r"[0-9a-f]{64}", ha) and ha != hb

    def test_tables_file_matches_stdout(self, mini_copy, tmp_path, capsys):
        out = tmp_path / "o"
        assert cli.main(["run", "--config", str(mini_copy), "--out", str(out)]) == 0
        assert capsys.readouterr().out == (out / "tables.txt").read_text(encoding="utf-8")
