import json
import random

import jsonschema
import pytest

from lpndetect import build_observer, build_twin, make_net
from lpndetect.cli import main
from lpndetect.dot import graph_to_dot, km_to_dot, net_to_dot, observer_to_dot
from lpndetect.explore import Budget, build_km_tree, build_reachability_graph
from lpndetect.gadgets import coverability_to_strong, inclusion_to_weak
from lpndetect.net import EPSILON
from lpndetect.schema import VERDICT_REPORT_SCHEMA
from lpndetect.textio import (
    ParseError,
    parse_lpn,
    parse_marking,
    parse_secret_file,
    render_lpn,
)

from netgen import random_net

E2_TEXT = """\
# two a-labeled branches
places p q
initial p=1
trans t1 label a pre p:1 post p:1
trans t2 label a pre p:1 post q:1
trans t3 label a pre q:1 post q:1
"""


class TestParse:
    def test_e2_text(self, e2):
        doc = parse_lpn(E2_TEXT)
        assert doc.net == e2
        assert doc.spans["t2"] == (5, 7)

    def test_epsilon_label(self):
        doc = parse_lpn("places p\ntrans u label ~ post p:1\n")
        assert doc.net.label("u") is EPSILON

    def test_alphabet_widening(self):
        doc = parse_lpn("places p\nalphabet a b\ntrans t label a pre p:1\n")
        assert doc.net.alphabet == frozenset({"a", "b"})

    def test_colon_in_place_id(self):
        # rightmost colon separates the weight
        doc = parse_lpn("places a:b\ntrans t label s pre a:b:2\n")
        assert doc.net.pre[0] == (2,)

    @pytest.mark.parametrize(
        "text,line,col",
        [
            ("places p q\nwat p\n", 2, 1),
            ("places p p\n", 1, 10),
            ("places p\ninitial q=1\n", 2, 9),
            ("places p\ninitial p=x\n", 2, 9),
            ("places p\ntrans t label a pre q:1\n", 2, 21),
            ("places p\ntrans t\n", 2, 7),
            ("places p\ntrans t label ~ p:1\n", 2, 17),
            ("places p\nalphabet ~\n", 2, 10),
        ],
    )
    def test_errors_report_position(self, text, line, col):
        with pytest.raises(ParseError) as exc:
            parse_lpn(text)
        assert (exc.value.line, exc.value.column) == (line, col)


class TestRender:
    def test_roundtrip_fixtures(self, e1, e2, e3, e4, gadcov):
        for net in (e1, e2, e3, e4, gadcov.net):
            assert parse_lpn(render_lpn(net)).net == net

    def test_roundtrip_random(self):
        rng = random.Random(71)
        for _ in range(30):
            net = random_net(rng)
            assert parse_lpn(render_lpn(net)).net == net

    def test_roundtrip_twin_and_gadgets(self, e2, e4):
        tw = build_twin(e4)
        assert parse_lpn(render_lpn(tw.net)).net == tw.net
        g = make_net(["p"], {"t": ("s", {"p": 1}, {"p": 1})}, {"p": 1})
        gadget = inclusion_to_weak(g, g)
        assert parse_lpn(render_lpn(gadget.net)).net == gadget.net

    def test_comments_ignored(self, e2):
        text = render_lpn(e2, comments=("hello", "world"))
        assert text.startswith("# hello\n# world\n")
        assert parse_lpn(text).net == e2


class TestMarkingParsing:
    def test_parse_marking(self, e2):
        assert parse_marking(e2, "q=2") == (0, 2)
        assert parse_marking(e2, "p=1 q=3") == (1, 3)

    def test_parse_marking_errors(self, e2):
        from lpndetect.net import InputError

        with pytest.raises(InputError):
            parse_marking(e2, "r=1")
        with pytest.raises(InputError):
            parse_marking(e2, "p")

    def test_parse_secret_file(self, e2):
        text = "# comment\np=1\n\nq=1  # trailing\n"
        assert parse_secret_file(e2, text) == [(1, 0), (0, 1)]

    def test_parse_secret_empty(self, e2):
        from lpndetect.net import InputError

        with pytest.raises(InputError):
            parse_secret_file(e2, "# nothing\n")


class TestDot:
    def test_net_to_dot(self, e2):
        text = net_to_dot(e2)
        assert text.startswith("digraph")
        for name in e2.places + e2.transitions:
            assert f'"{name}"' in text

    def test_graph_observer_km(self, e2, e3):
        g = build_reachability_graph(e2, Budget(100, 100))
        assert "digraph" in graph_to_dot(g)
        obs = build_observer(e2)
        assert "digraph" in observer_to_dot(obs)
        km = build_km_tree(e3)
        text = km_to_dot(km)
        assert "digraph" in text and "ω" in text


def write_net(tmp_path, net, name="net.lpn"):
    path = tmp_path / name
    path.write_text(render_lpn(net))
    return str(path)


class TestCli:
    def test_validate(self, tmp_path, e2, capsys):
        assert main(["validate", write_net(tmp_path, e2)]) == 0
        assert "2 places, 3 transitions" in capsys.readouterr().out

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "nope.lpn")]) == 3
        assert "error" in capsys.readouterr().err

    def test_parse_error_exit(self, tmp_path, capsys):
        path = tmp_path / "bad.lpn"
        path.write_text("places p\nwat\n")
        assert main(["validate", str(path)]) == 3

    def test_usage_error_exit(self, capsys):
        assert main(["no-such-command"]) == 3
        assert main([]) == 3

    def test_twin_roundtrip(self, tmp_path, e2, capsys):
        assert main(["twin", write_net(tmp_path, e2)]) == 0
        out = capsys.readouterr().out
        assert parse_lpn(out).net == build_twin(e2).net

    def test_check_strong_exit_codes(self, tmp_path, e1, e2, e3, capsys):
        assert main(["check-strong", write_net(tmp_path, e1)]) == 0
        assert main(["check-strong", write_net(tmp_path, e2)]) == 1
        assert main([
            "check-strong", write_net(tmp_path, e3),
            "--max-states", "100", "--max-depth", "20",
        ]) == 2
        capsys.readouterr()

    def test_check_strong_assumption_error(self, tmp_path, capsys):
        net = make_net(["p"], {"t": ("a", {"p": 1}, {})}, {"p": 1})
        assert main(["check-strong", write_net(tmp_path, net)]) == 3
        assert "error" in capsys.readouterr().err

    def test_json_report_schema(self, tmp_path, e2, e4, capsys):
        for net, prop in ((e2, "check-strong"), (e2, "check-weak")):
            main([prop, write_net(tmp_path, net), "--json"])
            rep = json.loads(capsys.readouterr().out)
            jsonschema.validate(rep, VERDICT_REPORT_SCHEMA)
        main(["check-strong", write_net(tmp_path, e4), "--json",
              "--max-states", "500", "--max-depth", "30"])
        rep = json.loads(capsys.readouterr().out)
        jsonschema.validate(rep, VERDICT_REPORT_SCHEMA)
        assert rep["outcome"] == "fails"
        assert rep["witness"]["segment_pairs"][1] == [["t", "u"]]

    def test_check_opacity(self, tmp_path, e1, e2, capsys):
        secret = tmp_path / "secret.txt"
        secret.write_text("p=1\n")
        assert main([
            "check-opacity", write_net(tmp_path, e1), "--secret", str(secret), "--json",
        ]) == 1
        rep = json.loads(capsys.readouterr().out)
        jsonschema.validate(rep, VERDICT_REPORT_SCHEMA)
        assert rep["witness"]["word"] == []
        secret2 = tmp_path / "secret2.txt"
        secret2.write_text("q=1\n")
        assert main([
            "check-opacity", write_net(tmp_path, e2), "--secret", str(secret2),
        ]) == 0
        capsys.readouterr()

    def test_check_assumptions_json(self, tmp_path, e1, capsys):
        assert main(["check-assumptions", write_net(tmp_path, e1), "--json"]) == 0
        rep = json.loads(capsys.readouterr().out)
        jsonschema.validate(rep, VERDICT_REPORT_SCHEMA)
        assert rep["assumptions"] == {
            "deadlock_free": "holds",
            "no_infinite_unobservable": "holds",
        }

    def test_km_reach_observer_estimate(self, tmp_path, e2, e3, capsys):
        p2 = write_net(tmp_path, e2)
        assert main(["km", p2]) == 0
        assert main(["reach", p2]) == 0
        assert main(["observer", p2]) == 0
        assert main(["estimate", p2, "--word", "a,a"]) == 0
        out = capsys.readouterr().out
        assert "{[0,1],[1,0]}" in out
        p3 = write_net(tmp_path, e3, "e3.lpn")
        assert main(["reach", p3, "--max-states", "20", "--max-depth", "20"]) == 2
        capsys.readouterr()

    def test_dot_export(self, tmp_path, e2, capsys):
        dot = tmp_path / "twin.dot"
        assert main(["twin", write_net(tmp_path, e2), "--dot", str(dot)]) == 0
        assert dot.read_text().startswith("digraph")
        capsys.readouterr()

    def test_gadget_commands(self, tmp_path, e1, capsys):
        p1 = write_net(tmp_path, e1)
        assert main(["gadget", "selfloop", p1, "--marking", "p=1"]) == 0
        out = capsys.readouterr().out
        assert "t_cover_loop" in out and out.startswith("# provenance:")
        parsed = parse_lpn(out).net
        assert parsed.label("t_cover_loop") is EPSILON

        g = make_net(["p"], {"t": ("s", {"p": 1}, {"p": 1})}, {"p": 1})
        pg = write_net(tmp_path, g, "g.lpn")
        assert main(["gadget", "incl2weak", pg, pg]) == 0
        gtxt = capsys.readouterr().out
        assert parse_lpn(gtxt).net == inclusion_to_weak(g, g).net
        assert main(["gadget", "secret", pg, pg]) == 0
        assert capsys.readouterr().out.strip() == "p3=1"

        obs = make_net(["p"], {"t": ("s", {"p": 1}, {"p": 1})}, {"p": 1})
        po = write_net(tmp_path, obs, "obs.lpn")
        assert main(["gadget", "cov2strong", po, "--marking", "p=1"]) == 0
        cov = parse_lpn(capsys.readouterr().out).net
        assert cov == coverability_to_strong(obs, (1,)).net
