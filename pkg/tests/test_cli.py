import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from segrezeta import segre as segre_mod
from segrezeta.chowring import ChowClass, ZetaFunction
from segrezeta.cli import InputError, ProblemFile, corpus_files, main
from segrezeta.exactalg import PolyRing

CORPUS = {p.name[:-5]: p for p in corpus_files()}


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def test_corpus_is_bundled():
    for name in ("point-p2", "x2xy-p3", "ci-p2p2", "nonci-p2p2", "hypersurface-d3-p2"):
        assert name in CORPUS


def test_segre_command():
    assert run("segre", CORPUS["point-p2"]) == (0, "H^2\n")
    assert run("segre", CORPUS["x2xy-p3"]) == (0, "H - 4H^3\n")
    assert run("segre", CORPUS["ci-p2p2"]) == (0, "st - s^2t - st^2 + s^2t^2\n")
    code, out = run("segre", CORPUS["nonci-p2p2"], "--json")
    c = ChowClass.from_json(json.loads(out))
    assert str(c) == "s - s^2 + t^2 - 3st^2 + 6s^2t^2"


def test_zeta_command():
    code, out = run("zeta", CORPUS["x2xy-p3"])
    assert code == 0 and out.startswith("P = t + 4t^2; Q = (1 + 2t)^2\n")
    assert "PASS lowest_term" in out and "FAIL" not in out
    code, out = run("zeta", CORPUS["nonci-p2p2"])
    assert out.startswith("P = s + s^2 + 2st + t^2; Q = (1 + s + t)^2\n")
    code, out = run("zeta", CORPUS["hypersurface-d3-p2"])
    assert out.startswith("P = 3t; Q = 1 + 3t\n")
    code, out = run("zeta", CORPUS["x2xy-p3"], "--json")
    data = json.loads(out)
    assert len(data["properties"]) == 5
    assert all(c["status"] != "fail" for c in data["properties"].values())
    z = ZetaFunction.from_json(data)
    assert str(z) == "(t + 4t^2)/((1 + 2t)^2)"


def test_verify_cone_command():
    code, out = run("verify-cone", CORPUS["x2xy-p3"], "--target", "4")
    assert code == 0 and "match" in out and "H - 4H^3 + 16H^4" in out
    code, out = run("verify-cone", CORPUS["nonci-p2p2"], "--target", "3,2", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "match"
    for N in (3, 4, 5):
        assert run("verify-cone", CORPUS["hypersurface-d3-p2"], "--target", N)[0] == 0


def test_properties_and_restrict_commands():
    code, out = run("properties", CORPUS["twisted-cubic-p3"])
    assert code == 0 and out.count("PASS") == 5
    code, out = run("restrict", CORPUS["x2xy-p3"], "--json")
    assert code == 0 and json.loads(out)["verdict"] == "match"


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "factors": [2],\n  "generators": ["x0^2", "x0*+x1"]\n}\n')
    assert run("segre", bad)[0] == 2
    err = capsys.readouterr().err
    assert "line 3, column 30" in err
    bad.write_text('{"factors": [2], "generators": ["x0^2"], "degrees": [[3]]}')
    assert run("zeta", bad)[0] == 2
    bad.write_text('{"factors": [2], "generators": ["x0 + x1^2"]}')
    assert run("segre", bad)[0] == 2
    bad.write_text('{"factors": [2], "generators": [')
    assert run("segre", bad)[0] == 2
    assert "line 1" in capsys.readouterr().err
    assert run("segre", tmp_path / "missing.json")[0] == 2
    assert run("verify-cone", CORPUS["x2xy-p3"], "--target", "4,4")[0] == 2
    assert run("verify-cone", CORPUS["x2xy-p3"], "--target", "2")[0] == 2


def test_rank_error_renders_inequality(capsys):
    assert run("zeta", CORPUS["skew-lines-p3"])[0] == 2
    assert "g = 4 is not < e = 4" in capsys.readouterr().err
    assert run("verify-cone", CORPUS["twisted-cubic-p3"], "--target", "4")[0] == 2
    assert "r+1 = 3 is not < n = 3" in capsys.readouterr().err


def test_genericity_exhaustion_exit_code(monkeypatch, capsys):
    real = segre_mod._slice_count

    def flaky(forms, ring, dims, alpha, prime, rng):
        return real(forms, ring, dims, alpha, prime, rng) + (prime == segre_mod.CONFIRM_PRIME)

    monkeypatch.setattr(segre_mod, "_slice_count", flaky)
    code, out = run("segre", CORPUS["x2xy-p3"], "--json", "--retries", "1")
    assert code == 3 and out == ""
    assert "disagree" in capsys.readouterr().err


def test_json_is_byte_identical():
    for cmd in (["segre"], ["zeta"], ["verify-cone", "--target", "3,3"], ["restrict"]):
        argv = [cmd[0], CORPUS["nonci-p3p3" if cmd[0] == "restrict" else "nonci-p2p2"],
                *cmd[1:], "--json", "--seed", "5"]
        assert run(*argv) == run(*argv)


def test_selftest_quick():
    code, out = run("selftest", "--quick")
    assert code == 0 and "FAIL" not in out and "all passed" in out


def test_problem_file_roundtrip():
    for path in CORPUS.values():
        pf = ProblemFile.load(path)
        assert ProblemFile.loads(pf.dumps()) == pf


names = st.sampled_from(["x0", "x1", "x2"])
monos = st.lists(names, min_size=2, max_size=2).map(lambda v: "*".join(v))


def _join(terms):
    text = ""
    for c, m in terms:
        sep = " - " if c < 0 else " + "
        text += (sep if text else "-" if c < 0 else "") + f"{abs(c)}*{m}"
    return text


forms = st.lists(st.tuples(st.integers(-3, 3).filter(bool), monos), min_size=1, max_size=3).map(_join)


@settings(max_examples=40, deadline=None)
@given(st.lists(forms, min_size=1, max_size=3))
def test_problem_file_roundtrip_random(gens):
    text = json.dumps({"factors": [2], "generators": gens})
    ring = PolyRing.projective([2])
    if any(ring.parse(g).is_zero() for g in gens):
        with pytest.raises(InputError):
            ProblemFile.loads(text)
        return
    pf = ProblemFile.loads(text)
    again = ProblemFile.loads(pf.dumps())
    assert again == pf
    assert [str(f) for f in again.polynomials()] == [str(f) for f in pf.polynomials()]


def test_selftest_full_alternate_seed_and_prime():
    code, out = run("selftest", "--seed", 7, "--prime", 1000003)
    assert code == 0 and "FAIL" not in out
    assert out.count("PASS") >= 60
