"""Line-oriented text documents.

Every document starts with ``kind: <tag>``; blank lines and ``#`` comments
are ignored. Labels are whitespace-free tokens.

frame::

    kind: frame
    actions: a b
    worlds: x y
    rel a: x y

lattice (either order pairs or Moore-family members)::

    kind: lattice
    elem: 0 a 1
    leq: 0 a
    leq: a 1

    kind: lattice
    ground: 1 2
    moore:
    moore: 1
    moore: 1 2

space::

    kind: space
    attrs: a b
    points: f g
    dist f g: a

ra::

    kind: ra
    atoms: e d
    identity: e
    converse: d d
    comp d d: e d

quasiequation::

    kind: quasiequation
    vars: x0 x1
    premise: (meet x0 x1) = x0
    conclude: x0 = x1

embedding / pmorphism::

    kind: embedding
    map 0 -> {|}
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import ParseError, UnsupportedKind
from .frame_lattice import FrameSubset, _fmt
from .frames import Frame
from .horn import Quasiequation, TableQuasiequation, parse_equation
from .order_core import FiniteLattice, MooreFamily, build_lattice, lattice_from_moore
from .reduction import RelAlgAtoms
from .ultrametric import UltraSpace, build_space

KINDS = ("frame", "lattice", "space", "ra", "quasiequation", "embedding", "pmorphism")


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Any


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _split(line: str, no: int):
    """``head: rest`` → (head, rest tokens)."""
    if ":" not in line:
        raise ParseError(f"expected 'key: values', got {line!r}", no)
    head, rest = line.split(":", 1)
    return head.strip(), rest.split()


def parse(text: str) -> Document:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty document", 1)
    no, first = lines[0]
    head, rest = _split(first, no)
    if head != "kind" or len(rest) != 1:
        raise ParseError("first line must be 'kind: <tag>'", no)
    kind = rest[0]
    body = lines[1:]
    parser = {
        "frame": _parse_frame,
        "lattice": _parse_lattice,
        "space": _parse_space,
        "ra": _parse_ra,
        "quasiequation": _parse_quasiequation,
        "embedding": _parse_map,
        "pmorphism": _parse_map,
    }.get(kind)
    if parser is None:
        raise UnsupportedKind(f"unknown document kind {kind!r}")
    return Document(kind, parser(body))


def load(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _declared(tokens, seen, what, no):
    for t in tokens:
        if t in seen:
            raise ParseError(f"duplicate {what} {t!r}", no)
        seen.append(t)


def _parse_frame(body) -> Frame:
    actions, worlds, rel = [], [], {}
    for no, line in body:
        head, rest = _split(line, no)
        if head == "actions":
            _declared(rest, actions, "action", no)
        elif head == "worlds":
            _declared(rest, worlds, "world", no)
        elif head.startswith("rel "):
            a = head[4:].strip()
            if a not in actions:
                raise ParseError(f"unknown action {a!r}", no)
            if len(rest) != 2:
                raise ParseError("a rel line holds exactly one pair", no)
            for w in rest:
                if w not in worlds:
                    raise ParseError(f"unknown world {w!r}", no)
            rel.setdefault(a, []).append(tuple(rest))
        else:
            raise ParseError(f"unexpected key {head!r}", no)
    return Frame(actions, worlds, rel)


def _parse_lattice(body) -> FiniteLattice:
    elems, pairs, ground, members = [], [], [], []
    moore = False
    for no, line in body:
        head, rest = _split(line, no)
        if head == "elem":
            _declared(rest, elems, "element", no)
        elif head == "leq":
            if len(rest) != 2:
                raise ParseError("a leq line holds exactly one pair", no)
            for e in rest:
                if e not in elems:
                    raise ParseError(f"unknown element {e!r}", no)
            pairs.append(tuple(rest))
        elif head == "ground":
            _declared(rest, ground, "ground label", no)
        elif head == "moore":
            moore = True
            for g in rest:
                if g not in ground:
                    raise ParseError(f"{g!r} is not in the ground set", no)
            members.append(frozenset(rest))
        else:
            raise ParseError(f"unexpected key {head!r}", no)
    if moore:
        if elems or pairs:
            raise ParseError("mix of elem/leq and moore lines", body[0][0])
        L = lattice_from_moore(MooreFamily(frozenset(ground), frozenset(members)))
        order = {g: i for i, g in enumerate(ground)}
        return L.relabel(["{" + ",".join(sorted(m, key=order.get)) + "}" for m in L.labels])
    return build_lattice(elems, pairs)


def _parse_space(body) -> UltraSpace:
    attrs, points, dist = [], [], {}
    for no, line in body:
        head, rest = _split(line, no)
        if head == "attrs":
            _declared(rest, attrs, "attribute", no)
        elif head == "points":
            _declared(rest, points, "point", no)
        elif head.startswith("dist "):
            fg = head[5:].split()
            if len(fg) != 2 or any(p not in points for p in fg):
                raise ParseError("dist needs two declared points", no)
            for a in rest:
                if a not in attrs:
                    raise ParseError(f"unknown attribute {a!r}", no)
            if tuple(fg) in dist:
                raise ParseError(f"duplicate distance {fg}", no)
            dist[tuple(fg)] = tuple(rest)
        else:
            raise ParseError(f"unexpected key {head!r}", no)
    # one direction is enough; the other is filled in when absent
    for (f, g), v in list(dist.items()):
        dist.setdefault((g, f), v)
    for f in points:
        for g in points:
            if f != g and (f, g) not in dist:
                raise ParseError(f"missing distance between {f} and {g}", body[-1][0] if body else 1)
    return build_space(attrs, points, dist)


def _parse_ra(body) -> RelAlgAtoms:
    atoms, ident, conv, comp = [], [], {}, {}
    for no, line in body:
        head, rest = _split(line, no)
        if head == "atoms":
            _declared(rest, atoms, "atom", no)
        elif head == "identity":
            ident.extend(rest)
        elif head == "converse":
            if len(rest) != 2:
                raise ParseError("a converse line holds one pair", no)
            conv[rest[0]] = rest[1]
            conv.setdefault(rest[1], rest[0])
        elif head.startswith("comp "):
            xy = head[5:].split()
            if len(xy) != 2:
                raise ParseError("comp needs two atoms", no)
            comp[tuple(xy)] = frozenset(rest)
        else:
            raise ParseError(f"unexpected key {head!r}", no)
    for a in atoms:
        conv.setdefault(a, a)
    return RelAlgAtoms(tuple(atoms), frozenset(ident), conv, comp)


def _parse_quasiequation(body) -> Quasiequation:
    variables, premises, conclusion = [], [], None
    for no, line in body:
        head, rest = line.split(":", 1) if ":" in line else (line, "")
        head = head.strip()
        if head == "vars":
            _declared(rest.split(), variables, "variable", no)
        elif head == "premise":
            premises.append(parse_equation(rest, no))
        elif head == "conclude":
            if conclusion is not None:
                raise ParseError("more than one conclusion", no)
            conclusion = parse_equation(rest, no)
        else:
            raise ParseError(f"unexpected key {head!r}", no)
    if conclusion is None:
        raise ParseError("missing conclusion", body[-1][0] if body else 1)
    try:
        return Quasiequation(tuple(variables), tuple(premises), conclusion)
    except ParseError as exc:
        raise ParseError(str(exc), body[0][0] if body else 1) from None


def _parse_map(body) -> dict:
    out = {}
    for no, line in body:
        if not line.startswith("map ") or "->" not in line:
            raise ParseError("expected 'map x -> y'", no)
        src, dst = (s.strip() for s in line[4:].split("->", 1))
        if not src or not dst or " " in src or " " in dst:
            raise ParseError("map sides must be single labels", no)
        if src in out:
            raise ParseError(f"{src!r} mapped twice", no)
        out[src] = dst
    return out


# ---------------------------------------------------------------- serialization

def label(x) -> str:
    """Canonical token for a world, point or lattice element label."""
    if isinstance(x, FrameSubset):
        return str(x)
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(label(y) for y in x)) + "}"
    if isinstance(x, tuple):
        return _fmt(x)
    return str(x)


def serialize(doc: Document) -> str:
    k, p = doc.kind, doc.payload
    if k == "frame":
        return serialize_frame(p)
    if k == "lattice":
        return serialize_lattice(p)
    if k == "space":
        return serialize_space(p)
    if k == "ra":
        return serialize_ra(p)
    if k == "quasiequation":
        return serialize_quasiequation(p)
    if k in ("embedding", "pmorphism"):
        return serialize_map(k, p)
    raise UnsupportedKind(f"unknown document kind {k!r}")


def serialize_frame(F: Frame) -> str:
    out = ["kind: frame", "actions: " + " ".join(map(label, F.actions)),
           "worlds: " + " ".join(map(label, F.worlds))]
    for k, a in enumerate(F.actions):
        for i in range(len(F.worlds)):
            for j in range(len(F.worlds)):
                if F.adj[k, i, j]:
                    out.append(f"rel {label(a)}: {label(F.worlds[i])} {label(F.worlds[j])}")
    return "\n".join(out) + "\n"


def serialize_lattice(L: FiniteLattice) -> str:
    out = ["kind: lattice", "elem: " + " ".join(label(x) for x in L.labels)]
    for x in range(L.n):
        for y in L.upper_covers(x):
            out.append(f"leq: {label(L.labels[x])} {label(L.labels[y])}")
    return "\n".join(out) + "\n"


def serialize_space(S: UltraSpace) -> str:
    out = ["kind: space", "attrs: " + " ".join(map(label, S.attrs)),
           "points: " + " ".join(map(label, S.points))]
    for i, f in enumerate(S.points):
        for j in range(i + 1, len(S.points)):
            d = S.attrset(S.dist[i, j])
            names = " ".join(label(a) for a in S.attrs if a in d)
            out.append(f"dist {label(f)} {label(S.points[j])}: {names}".rstrip())
    return "\n".join(out) + "\n"


def serialize_ra(ra: RelAlgAtoms) -> str:
    out = ["kind: ra", "atoms: " + " ".join(ra.atoms),
           "identity: " + " ".join(a for a in ra.atoms if a in ra.identity_atoms)]
    for a in ra.atoms:
        out.append(f"converse: {a} {ra.converse[a]}")
    for x in ra.atoms:
        for y in ra.atoms:
            zs = ra.comp.get((x, y), frozenset())
            out.append(f"comp {x} {y}: " + " ".join(z for z in ra.atoms if z in zs))
    return "\n".join(line.rstrip() for line in out) + "\n"


def serialize_quasiequation(q) -> str:
    if isinstance(q, TableQuasiequation):
        q = q.to_quasiequation()
    out = ["kind: quasiequation", "vars: " + " ".join(q.variables)]
    out += [f"premise: {eq}" for eq in q.premises]
    out.append(f"conclude: {q.conclusion}")
    return "\n".join(out) + "\n"


def serialize_map(kind: str, mapping: dict) -> str:
    out = [f"kind: {kind}"]
    out += [f"map {label(x)} -> {label(y)}" for x, y in mapping.items()]
    return "\n".join(out) + "\n"


def lookup(labels, token: str, what: str = "element"):
    """Find the label whose canonical token is ``token``."""
    for x in labels:
        if label(x) == token:
            return x
    raise ParseError(f"unknown {what} {token!r}")
