"""CLI subcommands, run in-process through main()."""
import json

from puzzlegraph.cli import main
from puzzlegraph.core import read_corpus


class TestGenerate:
    def test_writes_corpus(self, tmp_path, capsys):
        out = tmp_path / "tents.gpz"
        rc = main(["generate", "--kind", "tents", "--size", "5x5",
                   "--count", "5", "--seed", "7", "--out", str(out)])
        assert rc == 0
        corpus = read_corpus(out)
        assert len(corpus) == 5
        assert all(i.kind.value == "tents" for i in corpus)

    def test_byte_stable(self, tmp_path):
        a, b = tmp_path / "a.gpz", tmp_path / "b.gpz"
        argv = ["generate", "--kind", "loopy", "--size", "4x4",
                "--count", "8", "--seed", "3"]
        main(argv + ["--out", str(a)])
        main(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_defaults_to_training_size(self, capsys):
        rc = main(["generate", "--kind", "net", "--count", "1", "--seed", "1"])
        assert rc == 0
        line = capsys.readouterr().out.strip()
        assert "kind=net w=4 h=4" in line


class TestSolve:
    def test_solve_generated(self, capsys):
        rc = main(["solve", "--kind", "mosaic", "--size", "4x4", "--seed", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "verdict: unique" in out

    def test_solve_from_corpus(self, tmp_path, capsys):
        out = tmp_path / "c.gpz"
        main(["generate", "--kind", "unruly", "--size", "6x6", "--count", "2",
              "--seed", "5", "--out", str(out)])
        rc = main(["solve", "--corpus", str(out), "--index", "1"])
        assert rc == 0
        assert "unique" in capsys.readouterr().out


class TestCountConfigs:
    def test_small_run(self, capsys):
        rc = main(["count-configs", "--kind", "net", "--size", "3x3",
                   "--samples", "500", "--seed", "0"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "distinct=" in out
        distinct = int(out.split("distinct=")[1].split()[0])
        assert distinct > 176  # already above the reference bound at 500 samples


class TestRender:
    def test_render_each_kind(self, capsys, kind):
        rc = main(["render", "--kind", kind.value, "--seed", "4", "--solved"])
        assert rc == 0
        assert capsys.readouterr().out.strip()


class TestEvalAndReplay:
    def test_local_eval_oracle(self, tmp_path, capsys):
        csv = tmp_path / "r.csv"
        rc = main(["eval", "--agent", "oracle", "--kind", "net", "--count", "3",
                   "--sizes", "train,+1", "--csv", str(csv)])
        assert rc == 0
        text = csv.read_text()
        assert text.splitlines()[0] == "kind,size,seed,solved"
        assert "net,4x4,0,3" in text
        assert "net,5x5,0,3" in text

    def test_do_nothing_scores_zero(self, capsys):
        rc = main(["eval", "--agent", "nothing", "--kind", "mosaic",
                   "--count", "3", "--sizes", "train", "--horizon", "2"])
        assert rc == 0
        assert "solved 0/3" in capsys.readouterr().out

    def test_record_and_replay_identical(self, tmp_path, capsys):
        trace = tmp_path / "trace.jsonl"
        rc = main(["eval", "--agent", "oracle", "--kind", "loopy", "--count", "3",
                   "--sizes", "train", "--record", str(trace)])
        assert rc == 0
        capsys.readouterr()
        rc = main(["replay", "--trace", str(trace)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "3 episodes, 0 mismatches" in out

    def test_replay_detects_tampering(self, tmp_path, capsys):
        trace = tmp_path / "trace.jsonl"
        main(["eval", "--agent", "oracle", "--kind", "net", "--count", "1",
              "--sizes", "train", "--record", str(trace)])
        lines = trace.read_text().splitlines()
        msg = json.loads(lines[1])
        msg["solved"] = False
        lines[1] = json.dumps(msg)
        trace.write_text("\n".join(lines) + "\n")
        capsys.readouterr()
        rc = main(["replay", "--trace", str(trace)])
        assert rc == 1
        assert "MISMATCH" in capsys.readouterr().out

    def test_eval_via_stdio_protocol(self, capsys):
        rc = main(["eval", "--agent", "oracle", "--kind", "unruly",
                   "--count", "2", "--sizes", "train", "--via", "stdio"])
        assert rc == 0
        assert "solved 2/2" in capsys.readouterr().out
