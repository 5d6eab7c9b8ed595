import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from rellat import formats
from rellat.catalog import chain, m3
from rellat.cli import export_dot, run
from rellat.errors import ParseError, UnsupportedKind
from rellat.frames import Frame, uniform_product_frame
from rellat.horn import build_phi
from rellat.order_core import is_isomorphic
from rellat.reduction import two_atom_algebra
from rellat.relational import relational_lattice
from rellat.ultrametric import hamming_space

SINGLE = "kind: frame\nactions: a b\nworlds: x\nrel a: x x\nrel b: x x\n"
F2 = """kind: frame
actions: a b
worlds: x y
""" + "".join(f"rel {a}: {p} {q}\n" for a in "ab" for p in "xy" for q in "xy")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def test_rel_enum():
    code, out, _ = cli("rel", "enum", "--dom", 2, "--attrs", "a,b")
    assert code == 0 and "elements: 26" in out.splitlines()


def test_frame_check_single(files):
    code, out, _ = cli("frame", "check", files("single.frame", SINGLE))
    assert code == 0 and out.splitlines()[0] == "S4: yes, rooted: yes, full: no"


def test_horn_eval_false(files):
    phi = files("phi2.q", formats.serialize_quasiequation(build_phi(chain(2))))
    lat = files("chain2.lat", formats.serialize_lattice(chain(2)))
    code, out, _ = cli("horn", "eval", phi, lat)
    assert code == 1
    assert "holds: no" in out and "valuation: x0=0 x1=1" in out


def test_horn_eval_true(files):
    phi = files("phim3.q", formats.serialize_quasiequation(build_phi(m3())))
    lat = files("c3.lat", formats.serialize_lattice(chain(3)))
    code, out, _ = cli("horn", "eval", phi, lat)
    assert code == 0 and "holds: yes" in out


def test_horn_phi_report(files):
    code, out, _ = cli("horn", "phi", files("m3.lat", formats.serialize_lattice(m3())))
    assert code == 0 and "premises: 50" in out


def test_lattice_commands(files):
    path = files("m3.lat", formats.serialize_lattice(m3()))
    code, out, _ = cli("lattice", "analyze", path)
    assert code == 0 and "elements: 5" in out and "SI: yes" in out
    code, out, _ = cli("lattice", "od", path)
    assert code == 0 and "a: lower 0; covers {b c}" in out
    code, out, _ = cli("lattice", "si", path)
    assert code == 0
    code, out, _ = cli("lattice", "ideal", path, "a")
    assert code == 0 and "elements: 2" in out


def test_lattice_si_negative(files):
    code, out, _ = cli("lattice", "si", files("b2.lat", "kind: lattice\nground: 1 2\nmoore:\nmoore: 1\n"
                                                      "moore: 2\nmoore: 1 2\n"))
    assert code == 1 and "SI: no" in out


def test_space_commands(files):
    gap = files("gap.space", "kind: space\nattrs: a b\npoints: 00 01 11\n"
                             "dist 00 01: b\ndist 01 11: a\ndist 00 11: a b\n")
    code, out, _ = cli("space", "check", gap)
    assert code == 1 and "witness: 00 11 {a} {b}" in out
    code, out, _ = cli("space", "represent", gap)
    assert code == 0 and "surjective: no" in out
    ham = files("h.space", formats.serialize_space(hamming_space(2, "ab")))
    assert cli("space", "check", ham)[0] == 0
    code, out, _ = cli("space", "lattice", ham)
    assert "elements: 26" in out


def test_cover_and_reduce(files):
    path = files("f2.frame", F2)
    code, out, _ = cli("cover", "search", path, "--max", 3)
    assert code == 0 and "k: 2" in out
    code, out, _ = cli("reduce", "extract", path, "--dom", 2, "--attrs", "a,b")
    assert code == 0 and "kind: pmorphism" in out
    code, out, _ = cli("cover", "search", files("bad.frame", "kind: frame\nactions: a\nworlds: x y\n"
                                                           "rel a: x y\n"), "--max", 2)
    assert code == 1 and "found: no" in out


def test_embed_commands(files):
    c2 = files("c2.lat", formats.serialize_lattice(chain(2)))
    code, out, _ = cli("embed", "search", c2, "--dom", 2, "--attrs", "a,b", "--bounds")
    assert code == 0 and "map 0 -> {|}" in out
    emb = files("e.emb", "kind: embedding\nmap 0 -> {|}\nmap 1 -> {a|00,10}\n")
    code, out, _ = cli("embed", "normalize", c2, emb, "--dom", 2, "--attrs", "a,b")
    assert code == 0 and "attrs: a" in out
    assert cli("embed", "search", files("m3.lat", formats.serialize_lattice(m3())),
               files("b.lat", formats.serialize_lattice(chain(3))))[0] == 1


def test_ra_frame(files):
    code, out, _ = cli("ra", "frame", files("two.ra", formats.serialize_ra(two_atom_algebra())))
    assert code == 0 and out.splitlines()[0] == "S4: yes, rooted: yes, full: yes"
    assert "worlds: 5" in out


def test_input_errors(files):
    code, _, err = cli("frame", "check", files("x.frame", "kind: frame\nactions: a\nworlds: x\nrel a: x q\n"))
    assert code == 2 and "line 4" in err
    assert cli("nonsense")[0] == 2
    assert cli("frame", "check", "/nonexistent/file")[0] == 2
    assert cli("frame", "check", files("l.lat", formats.serialize_lattice(chain(2))))[0] == 2


def test_json_mirrors_text(files):
    path = files("m3.lat", formats.serialize_lattice(m3()))
    _, text, _ = cli("lattice", "analyze", path)
    _, js, _ = cli("--json", "lattice", "analyze", path)
    data = json.loads(js)
    fields = dict(line.split(": ", 1) for line in text.splitlines())
    assert {k: str(v) for k, v in data.items()} == fields


def test_reports_are_reproducible(files):
    path = files("f2.frame", F2)
    runs = {cli("frame", "lattice", path, "--emit")[1] for _ in range(3)}
    assert len(runs) == 1


# ---------------------------------------------------------------- DOT

def _counts(text):
    lines = text.splitlines()
    return sum("[label=" in l and "->" not in l for l in lines), sum("->" in l for l in lines)


def test_dot_lattices():
    assert _counts(export_dot(formats.Document("lattice", chain(2)))) == (2, 1)
    assert _counts(export_dot(formats.Document("lattice", m3()))) == (5, 6)


def test_dot_product_frame():
    text = export_dot(formats.Document("frame", uniform_product_frame("ab", 2)))
    assert _counts(text) == (4, 8)
    assert text.count('[label="a"]') == 4 and text.count('[label="b"]') == 4


def test_dot_unsupported():
    with pytest.raises(UnsupportedKind):
        export_dot(formats.Document("space", hamming_space(2, "a")))


# ---------------------------------------------------------------- formats

@pytest.mark.parametrize("kind,obj", [
    ("frame", uniform_product_frame("ab", 2)),
    ("lattice", relational_lattice(2, "ab")),
    ("lattice", m3()),
    ("space", hamming_space(3, "ab")),
    ("ra", two_atom_algebra()),
    ("quasiequation", build_phi(m3())),
    ("embedding", {"0": "{|}", "1": "{a|00}"}),
    ("pmorphism", {"00": "x", "01": "y"}),
], ids=lambda x: x if isinstance(x, str) else "")
def test_canonical_round_trip(kind, obj):
    text = formats.serialize(formats.Document(kind, obj))
    doc = formats.parse(text)
    assert doc.kind == kind
    assert formats.serialize(doc) == text


def test_lattice_document_preserves_structure():
    R = relational_lattice(2, "ab")
    assert is_isomorphic(formats.parse(formats.serialize_lattice(R)).payload, R)


def test_moore_document():
    doc = formats.parse("kind: lattice\nground: 1 2\nmoore:\nmoore: 1\nmoore: 1 2\n")
    assert is_isomorphic(doc.payload, chain(3))
    assert [formats.label(x) for x in doc.payload.labels] == ["{}", "{1}", "{1,2}"]


def test_comments_and_blank_lines():
    doc = formats.parse("# a frame\nkind: frame\n\nactions: a  # one action\nworlds: x\n")
    assert doc.payload.actions == ("a",)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("kind: nope\n", None),
    ("kind: frame\nactions: a a\n", 2),
    ("kind: lattice\nelem: 0 1\nleq: 0 2\n", 3),
    ("kind: space\nattrs: a\npoints: f g\n", 3),
    ("kind: quasiequation\nvars: x\npremise: (meet x y) = x\nconclude: x = x\n", 2),
    ("kind: embedding\nmap 0 1\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises((ParseError, UnsupportedKind)) as exc:
        formats.parse(text)
    if line is not None:
        assert exc.value.line == line


frames = st.integers(1, 3).flatmap(lambda n: st.lists(st.booleans(), min_size=2 * n * n, max_size=2 * n * n).map(
    lambda bits: Frame("ab", [f"w{i}" for i in range(n)], {
        a: [(f"w{i}", f"w{j}") for i in range(n) for j in range(n) if bits[k * n * n + i * n + j]]
        for k, a in enumerate("ab")})))


@settings(max_examples=50, deadline=None)
@given(frames)
def test_frame_round_trip(F):
    G = formats.parse(formats.serialize_frame(F)).payload
    assert G.worlds == F.worlds and G.actions == F.actions and (G.adj == F.adj).all()


def test_out_writes_parseable_document(files, tmp_path):
    path = files("f2.frame", F2)
    target = tmp_path / "f2.lat"
    code, out, _ = cli("--out", target, "frame", "lattice", path, "--emit")
    assert code == 0 and "kind:" not in out
    code, out, _ = cli("lattice", "analyze", target)
    assert code == 0 and "elements: 10" in out
