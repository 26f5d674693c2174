"""Command line: build models, run verification suites, render reports.

Exit codes: 0 success, 1 verification finding (expectation mismatch),
2 usage or input error, 3 internal error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .autm import (
    ab1_equivalence,
    averaging_check,
    benson_check,
    fix_profile,
    iroot_group_family,
    mstgq1_family_sampled,
    mstgq_check,
    projection_lemma_check,
    property_star_check,
    property_star_family,
    semifield_type_check,
    structure_equiv_report,
    symmetries_with_center,
    verify_elation_group,
)
from .classical import build_h3, build_w
from .gq import ar1_check, gq_isomorphic, property_g, regularity, regular_points, verify_gq
from .grp import (
    abelian_subgroups_of_order,
    frattini,
    heisenberg,
    quotient,
    suzuki_tits_group,
    suzuki_tits_matrix_check,
    Subgroup,
)
from .kantor import (
    classical_w_family,
    coset_geometry,
    search_kantor_families,
    suzuki_tits_family,
    verify_kantor_family,
    verify_stgq_family,
)
from .report import Report, plain
from .subgeo import (
    PcpSpec,
    comblem_plane,
    dual_net,
    factor_analysis,
    frattini_geometry,
    frattini_geometry_family,
    frattsub_hypotheses,
    pcp_verify,
    plane_completion,
    subgq_plane,
    twist,
    verify_dual_net,
    verify_projective_plane,
)

SUITES = ["gq", "kantor", "stgq", "benson", "star", "moufang", "averaging", "ar1", "semifield", "twist", "frattini", "pcp"]
MODELS = ["w", "h3", "heisenberg", "suzuki-tits", "coset", "classical-family", "suzuki-family"]
EXPLICIT_LIMIT = 4096


class UsageError(Exception):
    pass


def _q_required(args) -> int:
    if args.q is None:
        raise UsageError("--q is required for this model")
    return args.q


def _check_q(model: str, q: int, n: int | None = None) -> None:
    allowed = {
        "w": (2, 3, 5),
        "h3": (2, 3),
        "suzuki-tits": (2, 8),
        "suzuki-family": (2, 8),
        "classical-family": (3, 5, 7, 9),
    }
    if model in allowed and q not in allowed[model]:
        raise UsageError(f"--q {q} not supported for {model}; choose from {allowed[model]}")
    if model == "heisenberg":
        n = 1 if n is None else n
        ok = (n == 1 and q in (2, 3, 4, 5, 7, 8, 9)) or (n == 2 and q in (2, 3))
        if not ok:
            raise UsageError(f"heisenberg needs n = 1, q <= 9 or n = 2, q in (2, 3); got n = {n}, q = {q}")


# ---------------------------------------------------------------- subjects


@dataclass
class Subject:
    """Everything a suite may need; missing parts make a suite not applicable."""

    name: str
    geom: object = None  # model geometry
    family: object = None
    egeom: object = None  # geometry carrying the action
    action: list | None = None
    group: object = None
    x: int = 0
    q: int | None = None
    large: bool = False
    notes: dict = field(default_factory=dict)


def _family_subject(name: str, K, geom=None, q=None) -> Subject:
    sub = Subject(name, geom=geom, family=K, group=K.group, q=q)
    if not verify_stgq_family(K) and K.S is None:
        sub.notes["stgq"] = False
    if K.group.order <= EXPLICIT_LIMIT:
        eg, act = coset_geometry(K)
        if not verify_gq(eg):
            raise UsageError("family does not give a GQ")
        sub.egeom, sub.action = eg, act
        if sub.geom is None:
            sub.geom = eg
    else:
        sub.large = True
    return sub


def _heisenberg_22_family():
    fams = search_kantor_families(heisenberg(2, 2), 4, 2)
    return fams[0]


def build_subject(args) -> Subject:
    """Resolve --model/--q or file inputs into a Subject."""
    if args.family:
        K = io.load_family(io.read_text(args.family), name=Path(args.family).stem)
        return _family_subject(K.name, K)
    if args.geometry:
        g = io.load_geometry(io.read_text(args.geometry), name=Path(args.geometry).stem)
        v = verify_gq(g)
        sub = Subject(g.name, geom=g, x=args.point or 0)
        sub.notes["gq"] = v
        if args.autos:
            if not v:
                raise io.FormatError("automorphisms need a verified GQ")
            sub.action = io.load_autos(io.read_text(args.autos), g)
            sub.egeom = g
        return sub
    if args.group:
        G = io.load_group(io.read_text(args.group))
        return Subject(Path(args.group).stem, group=G)
    if args.model is None:
        raise UsageError("give --model or an input file")
    m = args.model
    q = _q_required(args)
    _check_q(m, q, args.n)
    if m == "w":
        g = build_w(q)
        if q % 2:
            sub = _family_subject(f"W({q})", classical_w_family(q), geom=g, q=q)
        else:
            sub = Subject(f"W({q})", geom=g, q=q)
    elif m == "h3":
        g = build_h3(q)
        if q == 2:
            sub = _family_subject(f"H(3,{q * q})", _heisenberg_22_family(), geom=g, q=q)
        else:
            sub = Subject(f"H(3,{q * q})", geom=g, q=q)
    elif m == "classical-family":
        sub = _family_subject(f"W({q}) family", classical_w_family(q), q=q)
    elif m in ("suzuki-tits", "suzuki-family"):
        if q == 8 and not args.deep:
            raise UsageError("q = 8 runs are long; pass --deep")
        sub = _family_subject(f"Suzuki-Tits q={q}", suzuki_tits_family(q), q=q)
    elif m == "heisenberg":
        n = args.n or 1
        if n == 1 and q % 2:
            sub = _family_subject(f"H_1({q})", classical_w_family(q), q=q)
        elif (n, q) == (2, 2):
            sub = _family_subject("H_2(2)", _heisenberg_22_family(), q=q)
        else:
            sub = Subject(f"H_{n}({q})", group=heisenberg(n, q), q=q)
    else:
        raise UsageError(f"model {m} is not a verification subject")
    sub.x = args.point or 0
    return sub


# ---------------------------------------------------------------- suites


def _na(name: str, subject: str, reason: str) -> tuple[str, Report]:
    return name, Report(name, subject, "not applicable", [], {"reason": reason})


def _from_dict(check: str, subject: str, d: dict) -> Report:
    d = dict(d)
    v = d.pop("verdict")
    return Report(check, subject, v, [] if v else [d], d)


def suite_gq(sub: Subject):
    g = sub.geom
    if g is None:
        return [_na("gq.verify", sub.name, "no geometry")]
    v = verify_gq(g)
    out = [("gq.verify", Report("gq.verify", g.name, v.ok, [] if v.ok else [{"axiom": v.axiom, **v.witness}], {"order": v.order, "points": g.n_points, "lines": g.n_lines}))]
    if not v:
        return out
    s, t = v.order
    reg = regular_points(g)
    out.append(("gq.regular_point", Report("gq.regular_point", g.name, bool(reg[sub.x]), [], {"x": sub.x, "regular_points": int(reg.sum())})))
    if sub.egeom is not None and sub.egeom is not g:
        iso = gq_isomorphic(sub.egeom, g)
        out.append(("gq.coset_isomorphic", Report("gq.coset_isomorphic", g.name, iso.verdict, [] if iso.verdict else [{"invariant": iso.invariant}], {"coset_geometry": sub.egeom.name})))
    if g.n_points <= 500:
        sym = symmetries_with_center(g, sub.x)
        out.append(("gq.symmetries", Report("autm.symmetries", g.name, len(sym) == t, [], {"x": sub.x, "group_order": len(sym), "t": t})))
    if s == t * t:
        r = property_g(g, sub.x, "point")
        out.append(("gq.property_g", _from_dict("gq.property_g", g.name, r)))
    return out


def suite_kantor(sub: Subject):
    K = sub.family
    if K is None:
        return [_na("kantor.axioms", sub.name, "no Kantor family")]
    return [("kantor.axioms", verify_kantor_family(K.group, K.F, K.Fstar, K.s, K.t, K.name))]


def suite_stgq(sub: Subject):
    K = sub.family
    out = []
    if K is not None:
        r = verify_stgq_family(K)
        r.parameters.pop("S", None)
        out.append(("stgq.family", r))
    if sub.action is not None:
        out.append(("stgq.elation_group", verify_elation_group(sub.egeom, sub.x, sub.action)))
    if K is not None and sub.group is not None and sub.group.spec and sub.group.spec[0] == "suzuki_tits":
        r = suzuki_tits_matrix_check(sub.group, samples=10**6 if sub.large else 10**4)
        out.append(("stgq.matrix_model", _from_dict("grp.matrix_model", sub.group.name, r)))
    return out or [_na("stgq.family", sub.name, "no family or action")]


def suite_benson(sub: Subject):
    if sub.action is None:
        return [_na("benson.congruence", sub.name, "no elation action")]
    g, x = sub.egeom, sub.x
    fails = []
    for i, a in enumerate(sub.action):
        r = benson_check(g, a)
        if not r:
            fails.append({"element": i, **r.parameters})
    out = [("benson.congruence", Report("autm.benson", g.name, not fails, fails[:5], {"elements": len(sub.action), "failures": len(fails)}))]
    dist = {}
    bad = []
    for i, a in enumerate(sub.action):
        p = fix_profile(g, a, x)
        key = f"{p.taxonomy_fix1}/{p.taxonomy_241}"
        dist[key] = dist.get(key, 0) + 1
        if p.taxonomy_241 is None or p.taxonomy_fix1 == "none":
            bad.append({"element": i, "fix1": p.taxonomy_fix1, "case_241": p.taxonomy_241})
    out.append(("benson.taxonomy", Report("autm.fix_taxonomy", g.name, not bad, bad[:5], {"distribution": dict(sorted(dist.items()))})))
    return out


def suite_star(sub: Subject):
    K = sub.family
    out = []
    if sub.action is not None:
        star = property_star_check(sub.egeom, sub.x, sub.action)
        out.append(("star.geometry", star))
    elif K is not None:
        star = property_star_family(K)
        out.append(("star.group", star))
    else:
        return [_na("star.geometry", sub.name, "no elation action")]
    if K is not None and K.S is not None:
        out.append(("star.ab1", ab1_equivalence(K.group, K.S, star)))
    return out


def suite_moufang(sub: Subject):
    K = sub.family
    out = []
    if sub.action is not None:
        out.append(("moufang.mstgq", mstgq_check(sub.egeom, sub.x, sub.action)))
    if K is not None and K.S is not None:
        if sub.large:
            out.append(("moufang.mstgq1_sampled", mstgq1_family_sampled(K)))
        else:
            for lab in K.labels:
                out.append((f"moufang.iroot_{lab}", iroot_group_family(K, lab, 0)))
            if sub.action is not None and K.s == K.t and K.s % 2:
                out.append(("moufang.structure_equiv", structure_equiv_report(K, sub.egeom, sub.action, sub.x)))
            out.append(("moufang.projection_lemma", projection_lemma_check(K.group, K.S, K.F)))
    return out or [_na("moufang.mstgq", sub.name, "no elation action")]


def suite_averaging(sub: Subject):
    if sub.action is None:
        return [_na("averaging.stabilizers", sub.name, "no elation action")]
    return [("averaging.stabilizers", averaging_check(sub.egeom, sub.x, sub.action))]


def suite_ar1(sub: Subject):
    g = sub.geom
    if g is None or not verify_gq(g):
        return [_na("ar1.check", sub.name, "no verified geometry")]
    x = sub.x
    ar1 = ar1_check(g, x)
    out = [("ar1.check", _from_dict("gq.ar1", g.name, ar1))]
    lines_x = [int(L) for L in np.nonzero(g.inc[x])[0]]
    if ar1["verdict"]:
        bad, n = [], 0
        for X, Y in itertools.permutations(lines_x, 2):
            _, r = comblem_plane(g, X, Y)
            n += 1
            if not r:
                bad.append({"X": X, "Y": Y})
        out.append(("ar1.comblem_planes", Report("subgeo.comblem_planes", g.name, not bad, bad[:5], {"pairs": n})))
    if regularity(g, x, "point"):
        s, t = g.order
        net = dual_net(g, x)
        r = verify_dual_net(net.geom, s, t + 1)
        r.parameters.update({"net_points": net.n_points, "net_lines": net.n_lines})
        out.append(("ar1.dual_net", r))
        if s == t:
            out.append(("ar1.plane_completion", verify_projective_plane(plane_completion(net), s)))
    return out


def suite_semifield(sub: Subject):
    G = sub.group
    if G is None or G.spec is None or G.spec[:2] != ("heisenberg", 1):
        return [_na("semifield.pairs", sub.name, "needs H_1(q)")]
    q = G.spec[2]
    if sub.family is not None:
        stars = sub.family.Fstar
    else:
        stars = abelian_subgroups_of_order(G, q * q)
    bad = []
    for M, N in itertools.combinations(stars, 2):
        r = semifield_type_check(G, M, N)
        if not r:
            bad.append(r.parameters["items"])
    out = [("semifield.pairs", Report("autm.semifield_type", G.name, not bad, bad[:3], {"pairs": len(stars) * (len(stars) - 1) // 2}))]
    if G.order <= 1024:
        cnt = len(abelian_subgroups_of_order(G, q * q))
        out.append(("semifield.abelian_count", Report("grp.abelian_count", G.name, cnt == q + 1, [], {"count": cnt, "expected": q + 1})))
    return out


def suite_twist(sub: Subject):
    g, act = sub.egeom, sub.action
    if act is None or g.order is None:
        return [_na("twist.decomposition", sub.name, "no elation action")]
    s, t = g.order
    if s != t * t or t % 2:
        return [_na("twist.decomposition", sub.name, "needs order (q^2, q) with q even")]
    try:
        tw = twist(g, sub.x, act)
    except ValueError as e:
        return [("twist.decomposition", Report("subgeo.twist", g.name, "hypothesis failed", [{"reason": str(e)}], {}))]
    rp = tw.reports
    ok = bool(rp["elation"]) and rp["isomorphic"] is False
    params = {
        "H_order": len(tw.H),
        "Hminus_order": len(tw.Hminus),
        "S2_order": rp["S2_order"],
        "second_case": rp["second_case"],
        "elation": rp["elation"].verdict,
        "isomorphic": rp["isomorphic"],
        "invariant": rp["invariant"],
        "sylow_family": len(tw.sylow_family),
        "subgq_order": list(tw.subgq.order),
    }
    out = [("twist.decomposition", Report("subgeo.twist", g.name, ok, [], params))]
    bens = [i for i, a in enumerate(tw.Hminus) if not benson_check(g, a)]
    out.append(("twist.benson", Report("autm.benson", g.name, not bens, [{"elements": bens[:5]}] if bens else [], {"elements": len(tw.Hminus)})))
    if len(tw.sylow_family) == t * t:
        _, r = subgq_plane(g, sub.x, tw.sylow_family)
        out.append(("twist.subgq_plane", r))
    return out


def suite_frattini(sub: Subject):
    K = sub.family
    if K is None:
        return [_na("frattini.group", sub.name, "no Kantor family")]
    out = [("frattini.group", frattini_geometry_family(K))]
    if sub.action is not None:
        Phi = frattini(K.group)
        out.append(("frattini.geometry", frattini_geometry(sub.egeom, sub.x, sub.action, Phi.members)))
    r = frattsub_hypotheses(K)
    r.verdict = "recorded"
    out.append(("frattini.hypotheses", r))
    return out


def suite_pcp(sub: Subject):
    K = sub.family
    if K is None or K.S is None:
        return [_na("pcp.axioms", sub.name, "needs an STGQ family")]
    if K.group.order > EXPLICIT_LIMIT:
        return [_na("pcp.axioms", sub.name, "H/S too large for an explicit net")]
    T, proj = quotient(K.group, K.S)
    comps = [Subgroup(T, np.unique(proj[A.members])) for A in K.F]
    r, _ = pcp_verify(PcpSpec(T, comps))
    return [("pcp.axioms", r), ("pcp.factor_analysis", factor_analysis(K.group, K.S, K.F))]


SUITE_FUNCS = {
    "gq": suite_gq,
    "kantor": suite_kantor,
    "stgq": suite_stgq,
    "benson": suite_benson,
    "star": suite_star,
    "moufang": suite_moufang,
    "averaging": suite_averaging,
    "ar1": suite_ar1,
    "semifield": suite_semifield,
    "twist": suite_twist,
    "frattini": suite_frattini,
    "pcp": suite_pcp,
}


def _run_suite(name: str, sub: Subject, progress: bool) -> list[dict]:
    if progress:
        print(f"[stgq] running {name} on {sub.name}", file=sys.stderr, flush=True)
    recs = []
    t0 = time.perf_counter()
    try:
        items = SUITE_FUNCS[name](sub)
    except ValueError as e:
        items = [(f"{name}.precondition", Report(name, sub.name, "precondition failed", [{"reason": str(e)}], {}))]
    dt = time.perf_counter() - t0
    for rid, rep in items:
        d = rep.to_dict()
        d["source"] = d.pop("check")
        d["check"] = rid
        d["wall_time"] = round(dt / len(items), 6)
        recs.append(d)
    return recs


def verdict_str(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "none"
    return str(v)


def read_expectations(path) -> dict[str, str]:
    exp = {}
    for k, row in enumerate(io.read_text(path).splitlines(), 1):
        row = row.strip()
        if not row or row.startswith("#"):
            continue
        key, sep, val = row.partition("=")
        if not sep:
            raise io.FormatError(f"line {k}: expected key=verdict")
        exp[key.strip()] = val.strip().lower()
    return exp


def run_verify(args) -> tuple[dict, int]:
    suites = SUITES if args.suite == "all" else [args.suite]
    sub = build_subject(args)
    threads = max(1, int(os.environ.get("STGQ_THREADS", "1") or 1))
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(lambda s: _run_suite(s, sub, args.deep), suites))
    records = [r for part in parts for r in part]
    seen = set()
    for r in records:
        if r["check"] in seen:
            raise RuntimeError(f"duplicate check id {r['check']}")
        seen.add(r["check"])
    counts: dict[str, int] = {}
    for r in records:
        k = verdict_str(r["verdict"])
        counts[k] = counts.get(k, 0) + 1
    run = {
        "command": {"suite": args.suite, "subject": sub.name, "argv": _echo(args)},
        "records": records,
        "summary": {"records": len(records), "verdicts": dict(sorted(counts.items()))},
    }
    code = 0
    if args.expect:
        exp = read_expectations(args.expect)
        got = {r["check"]: verdict_str(r["verdict"]) for r in records}
        mism = [{"check": k, "expected": v, "got": got.get(k, "missing")} for k, v in sorted(exp.items()) if got.get(k) != v]
        run["summary"]["expectation_mismatches"] = mism
        code = 1 if mism else 0
    return run, code


def _echo(args) -> list[str]:
    out = []
    for k in ("model", "q", "n", "geometry", "autos", "group", "family", "point", "deep"):
        v = getattr(args, k, None)
        if v not in (None, False):
            out.append(f"--{k}" if v is True else f"--{k}={v}")
    return out


# ---------------------------------------------------------------- rendering


def render_json(run: dict) -> str:
    return json.dumps(plain(run), sort_keys=True, indent=2) + "\n"


def render_text(run: dict) -> str:
    lines = [f"# {run['command']['suite']} on {run['command']['subject']}"]
    for r in run["records"]:
        tag = {"true": "PASS", "false": "FAIL"}.get(verdict_str(r["verdict"]), "NOTE")
        lines.append(f"{tag} {r['check']} [{r['subject']}] verdict={verdict_str(r['verdict'])}")
    s = run["summary"]
    lines.append("# " + ", ".join(f"{k}: {v}" for k, v in s["verdicts"].items()))
    for m in s.get("expectation_mismatches", []):
        lines.append(f"MISMATCH {m['check']} expected={m['expected']} got={m['got']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- build


def run_build(args) -> str:
    m = args.model
    q = args.q
    if m == "coset":
        if args.family:
            K = io.load_family(io.read_text(args.family), name=Path(args.family).stem)
        else:
            if q is None:
                raise UsageError("coset needs --family PATH or --q with --from")
            src = args.source or "classical-family"
            _check_q(src, q)
            K = classical_w_family(q) if src == "classical-family" else suzuki_tits_family(q)
        if K.group.order > EXPLICIT_LIMIT:
            raise UsageError("coset geometry is built only for groups of order <= 4096")
        g, act = coset_geometry(K)
        v = verify_gq(g)
        out = Path(args.out or "coset.geo")
        _write(out, io.dump_geometry(g, comment=g.name))
        _write(out.with_suffix(".aut"), io.dump_autos(act))
        return f"{g.name}: {g.n_points} points, {g.n_lines} lines, order {v.order}; {len(act)} automorphisms"
    q = _q_required(args)
    _check_q(m, q, args.n)
    if m == "w":
        g = build_w(q)
        _write(Path(args.out or f"w{q}.geo"), io.dump_geometry(g, comment=f"W({q}), symplectic form"))
        return f"W({q}): {g.n_points} points, {g.n_lines} lines, order {g.order}"
    if m == "h3":
        g = build_h3(q)
        _write(Path(args.out or f"h3_{q}.geo"), io.dump_geometry(g, comment=f"H(3,{q * q}), Hermitian form"))
        return f"H(3,{q * q}): {g.n_points} points, {g.n_lines} lines, order {g.order}"
    if m == "heisenberg":
        n = args.n or 1
        G = heisenberg(n, q)
        _write(Path(args.out or f"heisenberg_{n}_{q}.grp"), io.dump_group(G))
        return f"{G.name}: order {G.order}"
    if m == "suzuki-tits":
        G = suzuki_tits_group(q)
        _write(Path(args.out or f"suzuki_tits_{q}.grp"), io.dump_group(G))
        return f"{G.name}: order {G.order}"
    if m == "classical-family":
        K = classical_w_family(q)
    elif m == "suzuki-family":
        K = suzuki_tits_family(q)
    else:
        raise UsageError(f"unknown model {m}")
    r = verify_kantor_family(K.group, K.F, K.Fstar, K.s, K.t)
    _write(Path(args.out or f"{m}_{q}.fam"), io.dump_family(K))
    return f"{K.name}: group order {K.group.order}, type ({K.s},{K.t}), {len(K.F)} members, axioms {verdict_str(r.verdict)}"


def _write(path: Path, text: str) -> None:
    try:
        io.write_text(path, text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from e


# ---------------------------------------------------------------- entry point


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stgq", description="Generalized quadrangles, Kantor families and elation groups.")
    sp = p.add_subparsers(dest="command", required=True)

    b = sp.add_parser("build", help="build a model and write it to a file")
    b.add_argument("model", choices=MODELS)
    b.add_argument("--q", type=int)
    b.add_argument("--n", type=int, help="Heisenberg rank (1 or 2)")
    b.add_argument("--family", help="family file (coset model)")
    b.add_argument("--from", dest="source", choices=["classical-family", "suzuki-family"], help="built-in family for the coset model")
    b.add_argument("--out")

    v = sp.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ["all"])
    v.add_argument("--model", choices=[m for m in MODELS if m != "coset"])
    v.add_argument("--q", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--geometry")
    v.add_argument("--autos")
    v.add_argument("--group")
    v.add_argument("--family")
    v.add_argument("--point", type=int)
    v.add_argument("--deep", action="store_true")
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--out", help="write the run as JSON")
    v.add_argument("--expect", help="expectations file of key=verdict lines")

    r = sp.add_parser("report", help="render a saved run")
    r.add_argument("run", help="JSON run written by verify --out")
    r.add_argument("--format", choices=["text", "json"], default="text")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "build":
            print(run_build(args))
            return 0
        if args.command == "verify":
            run, code = run_verify(args)
            text = render_json(run) if args.format == "json" else render_text(run)
            sys.stdout.write(text)
            if args.out:
                _write(Path(args.out), render_json(run))
            return code
        path = Path(args.run)
        if not path.exists():
            raise UsageError(f"no run artifact at {path}")
        try:
            run = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise io.FormatError(f"run artifact is not JSON: {e}") from e
        sys.stdout.write(render_json(run) if args.format == "json" else render_text(run))
        return 0
    except (UsageError, ValueError, FileNotFoundError) as e:
        print(f"stgq: error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"stgq: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
