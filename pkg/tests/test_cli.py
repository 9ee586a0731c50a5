import json

import pytest

from primeset.cli import (
    EXIT_PARSE,
    EXIT_PRECISION,
    EXIT_RESOURCE,
    EXIT_UNKNOWN_FACTOR,
    EXIT_UNKNOWN_SYMBOL,
    main,
)
from primeset.codebook import PrimeCodebook


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(out):
    return dict(line.split("=", 1) for line in out.splitlines())


@pytest.fixture
def ms_file(tmp_path):
    p = tmp_path / "ms.txt"
    p.write_text("a 2\nb 1\n")
    return p


def test_encode_fresh(capsys, ms_file):
    code, out, _ = run(capsys, "encode", str(ms_file), "--machine")
    assert code == 0
    fields = kv(out)
    assert fields["exact"] == "c"
    assert fields["real"].startswith("2.48490664978800")
    assert fields["real_precision"] == "53"
    assert float(fields["real_radius"]) > 0


def test_encode_human_shows_radius(capsys, ms_file):
    code, out, _ = run(capsys, "encode", str(ms_file))
    assert code == 0
    assert "± " in out and "(53 bits)" in out


def test_encode_empty(capsys, tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("# nothing\n")
    _, out, _ = run(capsys, "encode", str(p), "--machine")
    fields = kv(out)
    assert fields["exact"] == "1"
    assert float(fields["real"]) == 0 and fields["real_radius"] == "0"


def test_encode_malformed(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("a 1\nb\n")
    code, _, err = run(capsys, "encode", str(p))
    assert code == EXIT_PARSE
    assert "line 2" in err


def test_encode_decode_roundtrip_with_codebook(capsys, tmp_path, ms_file):
    cbp = tmp_path / "cb.txt"
    _, out, _ = run(capsys, "encode", str(ms_file), "--codebook", str(cbp), "--machine")
    assert PrimeCodebook.load(cbp).mapping() == {"a": 2, "b": 3}
    hexcode = kv(out)["exact"]
    code, out, _ = run(capsys, "decode", hexcode, "--codebook", str(cbp))
    assert code == 0
    assert out == "a 2\nb 1\n"


def test_decode_empty_and_unknown_factor(capsys, tmp_path):
    cbp = tmp_path / "cb.txt"
    PrimeCodebook(["a", "b", "c"]).save(cbp)
    code, out, _ = run(capsys, "decode", "1", "--codebook", str(cbp))
    assert code == 0 and out.strip() == ""
    code, _, err = run(capsys, "decode", "7", "--codebook", str(cbp))
    assert code == EXIT_UNKNOWN_FACTOR
    assert "7" in err


def test_decode_without_codebook(capsys):
    code, _, _ = run(capsys, "decode", "c")
    assert code == EXIT_UNKNOWN_SYMBOL


def test_deterministic_with_pinned_codebook(capsys, tmp_path):
    cbp = tmp_path / "cb.txt"
    PrimeCodebook(["z", "y", "x"]).save(cbp)
    p = tmp_path / "m.txt"
    p.write_text("x 3\nz 1\n")
    outs = [run(capsys, "encode", str(p), "--codebook", str(cbp), "--machine")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert kv(outs[0])["exact"] == format(2 * 5**3, "x")


def test_line_order_does_not_change_codes(capsys, tmp_path):
    p1, p2 = tmp_path / "1.txt", tmp_path / "2.txt"
    p1.write_text("b 1\na 2\nc 5\n")
    p2.write_text("c 5\na 2\nb 1\n")
    assert run(capsys, "encode", str(p1))[1] == run(capsys, "encode", str(p2))[1]


def test_bit_cap_exit(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("a 5000\n")
    code, _, _ = run(capsys, "encode", str(p), "--bit-cap", "100")
    assert code == EXIT_RESOURCE


def test_config_file_and_flag_precedence(capsys, tmp_path, ms_file):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"precision": 100, "machine": True}))
    _, out, _ = run(capsys, "encode", str(ms_file), "--config", str(cfg))
    assert kv(out)["real_precision"] == "100"
    _, out, _ = run(capsys, "encode", str(ms_file), "--config", str(cfg), "--precision", "64")
    assert kv(out)["real_precision"] == "64"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "encode", str(ms_file), "--config", str(cfg))[0] == EXIT_PARSE


def test_encode_pair(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("")
    code, out, _ = run(capsys, "encode-pair", str(p), "--center", "a", "--machine")
    assert code == 0
    fields = kv(out)
    assert fields["center"] == "2" and fields["exact"] == "1"
    assert fields["eps"] == "sqrt2" and fields["eps_safety"] == "safe"
    assert fields["real"].startswith("0.9802581434685")


def test_eps_check(capsys):
    _, out, _ = run(capsys, "eps-check", "3/2", "--machine")
    fields = kv(out)
    assert (fields["p"], fields["q"], fields["verified"], fields["safety"]) == ("8", "4", "true", "unsafe")
    assert "64" in fields["identity"]
    _, out, _ = run(capsys, "eps-check", "--machine", "--", "-1/2")
    fields = kv(out)
    assert (fields["p"], fields["q"]) == ("1/2", "4")
    _, out, _ = run(capsys, "eps-check", "sqrt2", "--machine")
    assert kv(out)["safety"] == "safe"
    _, out, _ = run(capsys, "eps-check", "pi", "--machine")
    assert kv(out)["safety"] == "unknown"


def test_collide(capsys):
    code, out, _ = run(capsys, "collide", "--eps", "2", "--machine")
    assert code == 0
    fields = kv(out)
    assert fields["product1"] == fields["product2"] == "36"
    assert fields["exact_equal"] == "true"
    assert fields["real_verdict"] == "equal-uncertain"


def test_collide_rejects_non_integer(capsys):
    assert run(capsys, "collide", "--eps", "3/2")[0] == EXIT_PARSE
    assert run(capsys, "collide", "--eps", "0")[0] == EXIT_PARSE
    assert run(capsys, "collide")[0] == EXIT_PARSE


def test_min_gap(capsys):
    code, out, _ = run(capsys, "min-gap", "--alphabet", "2", "--max-size", "2", "--machine")
    assert code == 0
    fields = kv(out)
    assert fields["gap"].startswith("0.287682072451780")
    assert {fields["witness1"], fields["witness2"]} == {"{x1:1}", "{x0:2}"}


def test_min_gap_escalation_failure(capsys):
    code, _, err = run(capsys, "min-gap", "--alphabet", "9", "--max-size", "6",
                       "--precision", "24", "--max-precision", "24")
    assert code == EXIT_PRECISION
    assert "24 bits" in err


def test_wl_commands(capsys, tmp_path):
    c6 = tmp_path / "c6.txt"
    c6.write_text("\n".join(f"{i} {(i + 1) % 6}" for i in range(6)))
    tt = tmp_path / "tt.txt"
    tt.write_text("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n")
    k4 = tmp_path / "k4.txt"
    k4.write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    c4 = tmp_path / "c4.txt"
    c4.write_text("0 1\n1 2\n2 3\n3 0\n")
    assert run(capsys, "wl-compare", str(c6), str(tt))[1].split() == ["result", "not-distinguished-by-1-WL"]
    assert run(capsys, "wl-compare", str(k4), str(c4))[1].split() == ["result", "distinguishable"]
    code, out, _ = run(capsys, "wl-hash", str(c6), str(tt), str(k4))
    assert code == 0
    lines = [line.split() for line in out.splitlines()]
    assert lines[0][0] == lines[1][0] != lines[2][0]
    assert lines[0][1].startswith("rounds=")


def test_wl_hash_persisted_codebook_is_stable(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("0 1\n1 2\n")
    cbp = tmp_path / "wl.txt"
    first = run(capsys, "wl-hash", str(g), "--codebook", str(cbp))[1]
    second = run(capsys, "wl-hash", str(g), "--codebook", str(cbp))[1]
    assert first == second


def test_wl_hash_bad_file(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("nodes 2\n0 3\n")
    assert run(capsys, "wl-hash", str(g))[0] == EXIT_PARSE


def test_bench_smoke_and_determinism(capsys, tmp_path):
    cbp = tmp_path / "cb.txt"
    code, out1, _ = run(capsys, "bench", "--batch", "20", "--codebook", str(cbp), "--machine")
    assert code == 0
    _, out2, _ = run(capsys, "bench", "--batch", "20", "--codebook", str(cbp), "--machine")
    f1, f2 = kv(out1), kv(out2)
    assert f1["codes_digest"] == f2["codes_digest"]
    for key in ["sieve_primes_per_sec", "encode_per_sec_size_10", "encode_per_sec_size_100",
                "encode_per_sec_size_1000", "decode_per_sec_size_10", "aggregate_per_sec_p53",
                "aggregate_per_sec_p256"]:
        assert float(f1[key]) > 0
    assert float(f1["encode_per_sec_size_10"]) > float(f1["encode_per_sec_size_100"]) \
        > float(f1["encode_per_sec_size_1000"])
