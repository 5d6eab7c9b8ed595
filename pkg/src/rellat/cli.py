"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (not found, does not hold, not
SI, not pairwise complete), 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import formats
from .errors import ParseError, RellatError, UnknownCommand, UnsupportedKind
from .frame_lattice import DEFAULT_LATTICE_CAP, lattice_of_frame
from .frames import DEFAULT_PRODUCT_CAP, Frame, frame_properties
from .horn import build_phi, eval_quasiequation
from .order_core import (
    FiniteLattice,
    LatticeMorphism,
    find_embedding,
    is_subdirectly_irreducible,
    ji_profile,
    od_graph,
    principal_ideal,
)
from .reduction import cover_search, extract_pmorphism, ra_frame
from .relational import normalize_embedding, relational_lattice
from .ultrametric import is_pairwise_complete, lattice_of_space, represent

NEGATIVE = 1
BAD_INPUT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownCommand(message)


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _load(path: str, kind: str):
    doc = formats.load(path)
    if doc.kind != kind:
        raise UnsupportedKind(f"{path}: expected a {kind} document, got {doc.kind}")
    return doc.payload


def _names(L: FiniteLattice, xs) -> list[str]:
    return [formats.label(L.labels[x]) for x in xs]


def _relational(args):
    if args.dom is None or args.attrs is None:
        raise UnknownCommand("--dom and --attrs are required")
    return relational_lattice(args.dom, _attr_list(args.attrs), cap=args.cap)


def _joined(names) -> str:
    return " ".join(names) if names else "-"


def _attr_list(text: str) -> tuple:
    return tuple(a for a in text.split(",") if a) if text else ()


def _target(args):
    if getattr(args, "target", None):
        return _load(args.target, "lattice")
    return _relational(args)


def _morphism(L: FiniteLattice, M: FiniteLattice, mapping: dict) -> LatticeMorphism:
    idx = []
    for x in L.labels:
        tok = formats.label(x)
        if tok not in mapping:
            raise ParseError(f"element {tok!r} is not mapped")
        idx.append(M.index(formats.lookup(M.labels, mapping[tok])))
    return LatticeMorphism(L, M, idx)


# ---------------------------------------------------------------- commands

def cmd_frame_check(args):
    F = _load(args.file, "frame")
    p = frame_properties(F)
    rep = [{"S4": _yes(p.s4), "rooted": _yes(p.rooted), "full": _yes(p.full)},
           {"worlds": len(F.worlds), "actions": len(F.actions)}]
    if p.rooted:
        rep[1]["root"] = formats.label(p.root_witness)
    return 0, rep, None


def _lattice_report(L: FiniteLattice) -> dict:
    prof = ji_profile(L)
    si = is_subdirectly_irreducible(L)
    rep = {
        "elements": L.n,
        "join-irreducibles": _joined(_names(L, prof.jis)),
        "join-primes": _joined(_names(L, prof.join_primes)),
        "atomistic": _yes(prof.is_atomistic),
        "distributive": _yes(L.is_distributive),
        "SI": _yes(si.si),
    }
    if si.si:
        rep["monolith pair"] = " ".join(_names(L, si.monolith_pair))
    return rep


def cmd_frame_lattice(args):
    F = _load(args.file, "frame")
    L = lattice_of_frame(F, cap=args.cap)
    return 0, _lattice_report(L), formats.serialize_lattice(L) if args.emit else None


def cmd_lattice_analyze(args):
    L = _load(args.file, "lattice")
    return 0, _lattice_report(L), None


def cmd_lattice_od(args):
    L = _load(args.file, "lattice")
    od = od_graph(L)
    rep = {"join-irreducibles": _joined(_names(L, od.jis))}
    lines = []
    for j in od.jis:
        lc = od.lower_cover.get(j)
        covers = ["{" + " ".join(_names(L, sorted(C))) + "}" for C in od.min_covers[j]]
        lines.append(f"{formats.label(L.labels[j])}: lower {formats.label(L.labels[lc])}; covers "
                     + (" ".join(covers) if covers else "-"))
    rep["od"] = lines
    return 0, rep, None


def cmd_lattice_si(args):
    L = _load(args.file, "lattice")
    si = is_subdirectly_irreducible(L)
    rep = {"SI": _yes(si.si)}
    if si.si:
        rep["monolith pair"] = " ".join(_names(L, si.monolith_pair))
        rep["root"] = formats.label(L.labels[si.root])
    return (0 if si.si else NEGATIVE), rep, None


def cmd_lattice_ideal(args):
    L = _load(args.file, "lattice")
    x = L.index(formats.lookup(L.labels, args.element))
    I = principal_ideal(L, x)
    return 0, {"elements": I.n}, formats.serialize_lattice(I)


def cmd_rel_enum(args):
    R = _relational(args)
    rep = {"elements": R.n, "join-primes": _joined(_names(R, ji_profile(R).join_primes))}
    return 0, rep, formats.serialize_lattice(R) if args.emit else None


def cmd_space_check(args):
    S = _load(args.file, "space")
    v = is_pairwise_complete(S)
    rep = {"points": len(S.points), "axioms": "ok", "pairwise complete": _yes(v.ok)}
    if not v.ok:
        f, g, a, b = v.witness
        rep["witness"] = (f"{formats.label(f)} {formats.label(g)} "
                          f"{formats.label(a)} {formats.label(b)}")
    return (0 if v.ok else NEGATIVE), rep, None


def cmd_space_represent(args):
    S = _load(args.file, "space")
    r = represent(S)
    rep = {"fibers": " ".join(f"{formats.label(a)}={len(xs)}" for a, xs in r.section.fibers.items()),
           "surjective": _yes(r.surjective)}
    return 0, rep, formats.serialize_map("embedding", r.mapping)


def cmd_space_lattice(args):
    S = _load(args.file, "space")
    L = lattice_of_space(S, cap=args.cap)
    return 0, _lattice_report(L), formats.serialize_lattice(L) if args.emit else None


def cmd_cover_search(args):
    F = _load(args.file, "frame")
    res = cover_search(F, args.max, cap=args.product_cap)
    if not res:
        return NEGATIVE, {"found": "no", "reason": res.reason}, None
    return 0, {"found": "yes", "k": res.k}, formats.serialize_map("pmorphism", res.pmorphism.mapping)


def cmd_embed_search(args):
    L = _load(args.file, "lattice")
    M = _target(args)
    e = find_embedding(L, M, bound_preserving=args.bounds)
    if e is None:
        return NEGATIVE, {"found": "no"}, None
    mapping = {L.labels[x]: M.labels[y] for x, y in enumerate(e.mapping)}
    return 0, {"found": "yes"}, formats.serialize_map("embedding", mapping)


def cmd_embed_normalize(args):
    L = _load(args.file, "lattice")
    R = _relational(args)
    i = _morphism(L, R, _load(args.embedding, "embedding"))
    B, j = normalize_embedding(L, i)
    mapping = {L.labels[x]: j.target.labels[y] for x, y in enumerate(j.mapping)}
    return 0, {"attrs": ",".join(map(formats.label, B))}, formats.serialize_map("embedding", mapping)


def cmd_reduce_extract(args):
    F = _load(args.file, "frame")
    L = lattice_of_frame(F, cap=args.cap)
    R = _relational(args)
    if args.embedding:
        i = _morphism(L, R, _load(args.embedding, "embedding"))
    else:
        i = find_embedding(L, R)
        if i is None:
            return NEGATIVE, {"found": "no"}, None
    U, psi = extract_pmorphism(F, i, cap=args.cap)
    rep = {"found": "yes",
           "components": " ".join(f"{formats.label(a)}={len(xs)}" for a, xs in U.components.items())}
    return 0, rep, formats.serialize_map("pmorphism", psi.mapping)


def cmd_ra_frame(args):
    ra = _load(args.file, "ra")
    F = ra_frame(ra)
    p = frame_properties(F)
    rep = [{"S4": _yes(p.s4), "rooted": _yes(p.rooted), "full": _yes(p.full)},
           {"worlds": len(F.worlds)}]
    return 0, rep, formats.serialize_frame(F)


def cmd_horn_phi(args):
    L = _load(args.file, "lattice")
    phi = build_phi(L)
    a, b = phi.pair
    rep = {"variables": L.n, "premises": phi.premise_count(),
           "conclusion": f"x{a} = x{b}"}
    return 0, rep, formats.serialize_quasiequation(phi)


def cmd_horn_eval(args):
    q = _load(args.file, "quasiequation")
    K = _load(args.lattice, "lattice")
    r = eval_quasiequation(K, q)
    if r.holds:
        return 0, {"holds": "yes"}, None
    val = " ".join(f"{v}={formats.label(K.labels[x])}" for v, x in r.valuation.items())
    return NEGATIVE, {"holds": "no", "valuation": val}, None


def cmd_export_dot(args):
    doc = formats.load(args.file)
    return 0, None, export_dot(doc)


def export_dot(doc: formats.Document) -> str:
    """Deterministic DOT text for a frame or lattice document."""
    if doc.kind == "lattice":
        L = doc.payload
        out = ["digraph lattice {", "  rankdir=BT;"]
        out += [f'  n{i} [label="{_dot(formats.label(x))}"];' for i, x in enumerate(L.labels)]
        for x in range(L.n):
            out += [f"  n{x} -> n{y};" for y in L.upper_covers(x)]
        return "\n".join(out + ["}"]) + "\n"
    if doc.kind == "frame":
        F: Frame = doc.payload
        out = ["digraph frame {"]
        out += [f'  n{i} [label="{_dot(formats.label(w))}"];' for i, w in enumerate(F.worlds)]
        for k, a in enumerate(F.actions):
            for i in range(len(F.worlds)):
                for j in range(len(F.worlds)):
                    if i != j and F.adj[k, i, j]:
                        out.append(f'  n{i} -> n{j} [label="{_dot(formats.label(a))}"];')
        return "\n".join(out + ["}"]) + "\n"
    raise UnsupportedKind(f"cannot draw a {doc.kind} document")


def _dot(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rellat", description="Finite lattices, frames and relational lattices.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--cap", type=int, default=DEFAULT_LATTICE_CAP,
                   help="size cap for enumerated lattices")
    p.add_argument("--out", metavar="FILE", help="write the emitted document here instead of stdout")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name, help):
        g = top.add_parser(name, help=help)
        return g.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def rel_opts(sp):
        sp.add_argument("--dom", type=int, help="domain size of the relational lattice")
        sp.add_argument("--attrs", help="comma-separated attribute names")

    fr = group("frame", "multimodal frames")
    sp = fr.add_parser("check"); sp.add_argument("file"); sp.set_defaults(fn=cmd_frame_check)
    sp = fr.add_parser("lattice"); sp.add_argument("file"); sp.add_argument("--emit", action="store_true")
    sp.set_defaults(fn=cmd_frame_lattice)

    la = group("lattice", "finite lattices")
    for name, fn in (("analyze", cmd_lattice_analyze), ("od", cmd_lattice_od), ("si", cmd_lattice_si)):
        sp = la.add_parser(name); sp.add_argument("file"); sp.set_defaults(fn=fn)
    sp = la.add_parser("ideal"); sp.add_argument("file"); sp.add_argument("element")
    sp.set_defaults(fn=cmd_lattice_ideal)

    rl = group("rel", "relational lattices")
    sp = rl.add_parser("enum"); rel_opts(sp); sp.add_argument("--emit", action="store_true")
    sp.set_defaults(fn=cmd_rel_enum)

    spc = group("space", "ultrametric spaces")
    for name, fn in (("check", cmd_space_check), ("represent", cmd_space_represent)):
        sp = spc.add_parser(name); sp.add_argument("file"); sp.set_defaults(fn=fn)
    sp = spc.add_parser("lattice"); sp.add_argument("file"); sp.add_argument("--emit", action="store_true")
    sp.set_defaults(fn=cmd_space_lattice)

    cv = group("cover", "surjective p-morphisms from product frames")
    sp = cv.add_parser("search"); sp.add_argument("file")
    sp.add_argument("--max", type=int, required=True, help="largest component size")
    sp.add_argument("--product-cap", dest="product_cap", type=int, default=DEFAULT_PRODUCT_CAP)
    sp.set_defaults(fn=cmd_cover_search)

    em = group("embed", "lattice embeddings")
    sp = em.add_parser("search"); sp.add_argument("file"); sp.add_argument("target", nargs="?")
    sp.add_argument("--bounds", action="store_true", help="require ⊥ and ⊤ to be preserved")
    rel_opts(sp); sp.set_defaults(fn=cmd_embed_search)
    sp = em.add_parser("normalize"); sp.add_argument("file"); sp.add_argument("embedding")
    rel_opts(sp); sp.set_defaults(fn=cmd_embed_normalize)

    rd = group("reduce", "embeddings back to covers")
    sp = rd.add_parser("extract"); sp.add_argument("file"); sp.add_argument("embedding", nargs="?")
    rel_opts(sp); sp.set_defaults(fn=cmd_reduce_extract)

    ra = group("ra", "relation algebra atom structures")
    sp = ra.add_parser("frame"); sp.add_argument("file"); sp.set_defaults(fn=cmd_ra_frame)

    hn = group("horn", "quasiequations")
    sp = hn.add_parser("phi"); sp.add_argument("file"); sp.set_defaults(fn=cmd_horn_phi)
    sp = hn.add_parser("eval"); sp.add_argument("file"); sp.add_argument("lattice")
    sp.set_defaults(fn=cmd_horn_eval)

    ex = group("export", "DOT export")
    sp = ex.add_parser("dot"); sp.add_argument("file"); sp.set_defaults(fn=cmd_export_dot)
    return p


def _rows(rep) -> list[dict]:
    """A report is a dict (one field per line) or a list of dicts (one line each)."""
    if isinstance(rep, dict):
        return [{k: v} for k, v in rep.items()]
    return list(rep or [])


def _print_report(rep, out):
    for row in _rows(rep):
        for k, v in row.items():
            if isinstance(v, list):
                print(f"{k}:", file=out)
                for line in v:
                    print(f"  {line}", file=out)
        flat = {k: v for k, v in row.items() if not isinstance(v, list)}
        if flat:
            print(", ".join(f"{k}: {v}" for k, v in flat.items()), file=out)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        code, rep, body = args.fn(args)
    except RellatError as exc:
        print(f"error: {exc}", file=err)
        return BAD_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return BAD_INPUT
    if body is not None and args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"error: {exc}", file=err)
            return BAD_INPUT
        body = None
    if args.json:
        payload = {k: v for row in _rows(rep) for k, v in row.items()}
        if body is not None:
            payload["document"] = body
        print(json.dumps(payload, sort_keys=False, ensure_ascii=False), file=out)
    else:
        if rep:
            _print_report(rep, out)
        if body is not None:
            if rep:
                print(file=out)
            out.write(body)
    return code


def main() -> None:
    sys.exit(run())
