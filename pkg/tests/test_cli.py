import io
import json

import pytest

from flatlands.cli import main, load_document, dump_document, DocumentError
from flatlands import PROJECTIVE, AFFINE, Geometry, field_make
from flatlands.coloring import accepts_mask


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(kind, r, q, green):
    return json.dumps({"kind": kind, "r": r, "q": q, "green": green})


def test_check_target_stdin(capsys, monkeypatch):
    code, out, _ = run(
        capsys, ["check"], stdin=doc("PG", 3, 2, [0, 1, 2]), monkeypatch=monkeypatch
    )
    assert code == 0
    assert out.splitlines()[0] == "TARGET"
    # the emitted flats are the canonical sequence: empty, the line, all
    lines = [eval(s) for s in out.splitlines()[1:]]
    assert lines[0] == [] and lines[-1] == list(range(7))


def test_check_non_target_witness(capsys, monkeypatch):
    code, out, _ = run(
        capsys, ["check"], stdin=doc("PG", 3, 2, [0, 1, 3]), monkeypatch=monkeypatch
    )
    assert code == 1
    assert out.splitlines()[0] == "NON-TARGET"
    assert "stuck flat" in out
    assert "claw" in out and "[0, 1, 3]" in out


def test_check_from_file(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(doc("AG", 3, 2, []))
    code, out, _ = run(capsys, ["check", str(p)])
    assert code == 0 and out.startswith("TARGET")


def test_check_malformed(capsys, monkeypatch):
    for text in [
        "not json",
        json.dumps([1, 2]),
        doc("XX", 3, 2, []),
        doc("PG", 3, 2, [2, 1]),                   # not increasing
        doc("PG", 3, 2, [0, 99]),                  # out of range
        json.dumps({"kind": "PG", "r": 3, "q": 2}),  # missing green
        doc("PG", 3, 6, []),                       # q not a prime power
        doc("PG", 40, 2, []),                      # too many points
    ]:
        code, _, err = run(capsys, ["check"], stdin=text, monkeypatch=monkeypatch)
        assert code == 2, text
        assert err.startswith("error:")


def test_gen_check_round_trip(capsys, monkeypatch):
    for kind, r, q in [(PROJECTIVE, 3, 2), (AFFINE, 3, 3), (PROJECTIVE, 3, 4)]:
        code, out, _ = run(capsys, ["gen", kind, str(r), str(q), "--target",
                                    "--seed", "7"])
        assert code == 0
        code2, out2, _ = run(capsys, ["check"], stdin=out, monkeypatch=monkeypatch)
        assert code2 == 0 and out2.startswith("TARGET")


def test_gen_deterministic(capsys):
    a = run(capsys, ["gen", "AG", "3", "3", "--target", "--seed", "5"])
    b = run(capsys, ["gen", "AG", "3", "3", "--target", "--seed", "5"])
    assert a == b
    c = run(capsys, ["gen", "AG", "3", "3", "--target", "--seed", "6"])
    assert c != a


def test_gen_random_is_valid_document(capsys):
    code, out, _ = run(capsys, ["gen", "PG", "4", "2", "--random", "--seed", "1"])
    assert code == 0
    d = load_document(out)
    assert d["kind"] == "PG" and d["r"] == 4 and d["q"] == 2


def test_verify_exhaustive(capsys):
    code, out, _ = run(capsys, ["verify", "PG", "3", "2", "--exhaustive"])
    assert code == 0
    assert "accepted=72" in out and "mismatches=0" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, ["verify", "AG", "3", "2", "--json"])
    assert code == 0
    payload = json.loads(out.splitlines()[-1])
    assert payload["accepted"] == 16 and payload["mismatches"] == []


def test_verify_sample(capsys):
    def stripped(res):
        code, out, err = res
        return code, out.rsplit(",", 1)[0], err  # drop the elapsed-time field

    a = run(capsys, ["verify", "AG", "4", "3", "--sample", "2000", "--seed", "3"])
    b = run(capsys, ["verify", "AG", "4", "3", "--sample", "2000", "--seed", "3"])
    assert a[0] == 0 and stripped(a) == stripped(b)


def test_verify_budget_error(capsys):
    code, _, err = run(capsys, ["verify", "AG", "6", "3"])
    assert code == 2
    assert "--sample" in err


def test_verify_bad_geometry(capsys):
    code, _, err = run(capsys, ["verify", "PG", "3", "6"])
    assert code == 2 and err.startswith("error:")


def test_dump_load_round_trip():
    g = Geometry(PROJECTIVE, 3, field_make(2))
    text = dump_document(g, {3, 0, 1})
    d = load_document(text)
    assert d["green"] == [0, 1, 3]
    with pytest.raises(DocumentError):
        load_document("[]")
