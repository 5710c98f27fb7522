"""
hopfglue command line.

Every subcommand reads a JSON problem bundle (``--in``), runs one pipeline
stage, and writes a deterministic JSON report to ``--out`` or stdout.

Exit codes: 0 pass, 1 check failed, 2 bad input, 3 undetermined (closure
cap reached), 4 Hopf algebra not co-commutative.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Optional

import jsonschema
import numpy as np

from . import __version__
from .algebra import AlgMorphism, algebra_from_json, algebra_to_json
from .connection import (
    ConnectionError_,
    DependentLegsError,
    NonCocommutativeError,
    StrongConnection,
    chern_galois_projector,
    synthesize_from_covering,
    verify_connection,
)
from .exactla import Subspace, from_jsonable, to_jsonable
from .hopf import ComoduleAlgebra, hopf_from_json, hopf_to_json, is_cocommutative
from .lattice import DEFAULT_CAP, DistributivityError, SubspaceFamily, partitioned_basis
from .pullback import (
    CoveringFamily,
    GluingError,
    GluingFamily,
    _key,
    canonical_gluing,
    check_cocycle,
    check_covering,
    multipullback,
)
from .splitting import PreconditionError, SplittingError, global_splitting

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_UNDETERMINED, EXIT_NONCOCOMM = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


# -- bundles -----------------------------------------------------------------

def load_schema(name: str) -> dict:
    return json.loads(resources.files("hopfglue").joinpath("schemas", name).read_text())


def load_data(name: str) -> dict:
    return json.loads(resources.files("hopfglue").joinpath("data", name).read_text())


def _comodule(d: dict, hop) -> ComoduleAlgebra:
    alg = algebra_from_json(d["algebra"])
    co = from_jsonable(d["coaction"]).reshape(alg.dim, alg.dim, hop.dim)
    return ComoduleAlgebra(alg, hop, co, name=d.get("name", ""))


def _comodule_json(p: ComoduleAlgebra) -> dict:
    return {"algebra": algebra_to_json(p.alg), "coaction": to_jsonable(p.coaction)}


class Bundle:
    """Parsed problem bundle."""

    def __init__(self, data: dict):
        jsonschema.validate(data, load_schema("bundle.schema.json"))
        self.data = data
        self.options = data.get("options", {})
        self.hopf = hopf_from_json(data["hopf"]) if "hopf" in data else None
        self.total = _comodule(data["total"], self.hopf) if "total" in data else None
        self.pieces = {k: _comodule(v, self.hopf) for k, v in data.get("pieces", {}).items()}
        self.order = sorted(self.pieces)

    def covering(self) -> CoveringFamily:
        if "covering" not in self.data or self.total is None:
            raise InputError("bundle has no covering")
        maps = {}
        for k in self.order:
            m = from_jsonable(self.data["covering"][k]).reshape(self.pieces[k].dim, self.total.dim)
            maps[k] = AlgMorphism(self.total, self.pieces[k], m)
        return CoveringFamily(self.total, maps)

    def gluing(self) -> GluingFamily:
        g = self.data.get("gluing")
        if g is None:
            return canonical_gluing(self.covering())
        targets = {}
        for name, t in g["targets"].items():
            i, j = name.split(",")
            targets[_key(i, j)] = _comodule(t, self.hopf)
        maps = {}
        for name, m in g["maps"].items():
            i, j = name.split(",")
            tgt = targets[_key(i, j)]
            maps[(i, j)] = AlgMorphism(self.pieces[i], tgt,
                                       from_jsonable(m).reshape(tgt.dim, self.pieces[i].dim))
        return GluingFamily(tuple(self.order), self.pieces, targets, maps)

    def connections(self) -> dict:
        cs = self.data.get("connections")
        if not cs:
            raise InputError("bundle has no piece connections")
        out = {}
        for k in self.order:
            p = self.pieces[k]
            out[k] = StrongConnection(self.hopf, p, from_jsonable(cs[k]).reshape(self.hopf.dim, p.dim, p.dim))
        return out

    def total_connection(self) -> Optional[StrongConnection]:
        c = self.data.get("connection")
        if c is None:
            return None
        P = self.total
        return StrongConnection(self.hopf, P, from_jsonable(c).reshape(self.hopf.dim, P.dim, P.dim))

    def kappa(self, order_flag: Optional[str]) -> Optional[dict]:
        raw = self.options.get("kappa")
        if order_flag:
            seq = [x.strip() for x in order_flag.split(",") if x.strip()]
            return {seq[0]: seq}
        if raw:
            return {k: list(v) for k, v in raw.items()}
        return None


def bundle_for(hop, total, pieces: dict, covering: dict, connections: Optional[dict] = None,
               extra: Optional[dict] = None) -> dict:
    """Serialize a comodule covering problem into a bundle dictionary."""
    data = {
        "version": 1,
        "hopf": hopf_to_json(hop),
        "total": _comodule_json(total),
        "pieces": {str(k): _comodule_json(p) for k, p in pieces.items()},
        "covering": {str(k): to_jsonable(m.matrix if hasattr(m, "matrix") else m) for k, m in covering.items()},
    }
    if connections:
        data["connections"] = {str(k): to_jsonable(getattr(c, "tensor", c)) for k, c in connections.items()}
    if extra:
        data.update(extra)
    return data


def e1_bundle() -> dict:
    from .models import e1

    m = e1()
    return bundle_for(m.hopf, m.P, m.pieces, m.covering.maps, m.connections(),
                      {"grouplike": ["0", "1"], "options": {"cap": DEFAULT_CAP}})


# -- reports ------------------------------------------------------------------

def _stage(name: str, passed: bool, witnesses=None, artifacts=None) -> dict:
    return {"stage": name, "pass": bool(passed), "witnesses": witnesses or [], "artifacts": artifacts or {}}


def _report(command: str, stages: list, metadata: Optional[dict] = None) -> dict:
    return {
        "tool": "hopfglue",
        "version": __version__,
        "command": command,
        "pass": all(s["pass"] for s in stages),
        "stages": stages,
        "metadata": metadata or {},
    }


CHOICES = {
    "preimage": "canonical solve, free variables zero",
    "basis": "reduced row echelon basis, pivot order",
    "subset_order": "size descending, then lexicographic",
}


def _dump(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_check_covering(b: Bundle, args) -> tuple[dict, int]:
    cap = args.cap or b.options.get("cap", DEFAULT_CAP)
    rep = check_covering(b.covering(), cap)
    code = EXIT_PASS if rep.passed else (EXIT_UNDETERMINED if rep.undetermined and not rep.failures else EXIT_FAIL)
    stage = _stage("check-covering", rep.passed, rep.failures, rep.to_json())
    return _report("check-covering", [stage], {"cap": cap, **CHOICES}), code


def cmd_check_cocycle(b: Bundle, args) -> tuple[dict, int]:
    rep = check_cocycle(b.gluing())
    stage = _stage("check-cocycle", rep.passed, rep.failures, {"checked_triples": rep.checked_triples})
    return _report("check-cocycle", [stage], {"gluing": "supplied" if "gluing" in b.data else "canonical"}), \
        EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_build_pullback(b: Bundle, args) -> tuple[dict, int]:
    f = b.gluing()
    mp = multipullback(f)
    arts = {"dim": mp.total_space.dim, "basis": to_jsonable(mp.total_space.matrix),
            "product_dim": mp.product.algebra.dim}
    stages = [_stage("build-pullback", True, artifacts=arts)]
    if b.total is not None and "covering" in b.data:
        cov = b.covering()
        stacked = np.vstack([cov.maps[k].matrix for k in f.index])
        img = Subspace(stacked.shape[0], [stacked[:, c] for c in range(stacked.shape[1])])
        iso = img == mp.total_space and img.dim == b.total.dim
        stages.append(_stage("total-isomorphic-to-pullback", iso, artifacts={"image_dim": img.dim}))
    return _report("build-pullback", stages, CHOICES), EXIT_PASS if all(s["pass"] for s in stages) else EXIT_FAIL


def cmd_partition_basis(b: Bundle, args) -> tuple[dict, int]:
    sp = b.data.get("subspaces")
    if sp is None:
        raise InputError("bundle has no subspace family")
    n = int(sp["ambient"])
    fam = SubspaceFamily(n, [Subspace(n, [from_jsonable(v) for v in m]) for m in sp["members"]])
    try:
        pb = partitioned_basis(fam)
    except DistributivityError as e:
        stage = _stage("partition-basis", False, [{"gamma": list(e.witness) if e.witness else None,
                                                   "message": str(e)}])
        return _report("partition-basis", [stage], CHOICES), EXIT_FAIL
    arts = {"blocks": [{"gamma": list(g), "vectors": [to_jsonable(v) for v in pb.blocks[g]]} for g in pb.order]}
    return _report("partition-basis", [_stage("partition-basis", True, artifacts=arts)], CHOICES), EXIT_PASS


def _require_cocommutative(b: Bundle) -> None:
    if not is_cocommutative(b.hopf):
        raise NonCocommutativeError("the Hopf algebra is not co-commutative")


def cmd_build_splitting(b: Bundle, args) -> tuple[dict, int]:
    from .connection import piece_splittings

    f = b.gluing()
    cons = b.connections()
    alphas, betas = piece_splittings(f, cons)
    mp = multipullback(f)
    kap = b.kappa(args.order) or {}
    pieces = [args.piece] if args.piece is not None else list(f.index)
    stages = []
    for i in pieces:
        if i not in f.index:
            raise InputError(f"unknown piece {i}")
        s = global_splitting(f, alphas, betas, i, kappa=kap.get(i), mp=mp)
        stages.append(_stage(f"global-splitting[{i}]", True, artifacts=s.to_json()))
    meta = {"kappa": {s["stage"]: s["artifacts"]["meta"]["kappa"] for s in stages}, **CHOICES}
    return _report("build-splitting", stages, meta), EXIT_PASS


def cmd_synthesize(b: Bundle, args) -> tuple[dict, int]:
    _require_cocommutative(b)
    res = synthesize_from_covering(b.covering(), b.connections(), kappa=b.kappa(args.order),
                                   cap=args.cap or b.options.get("cap", DEFAULT_CAP))
    body = res.to_json()
    stages = [
        _stage("covering", res.covering.passed, res.covering.failures),
        _stage("cocycle", res.cocycle.passed, res.cocycle.failures),
        _stage("proof-identities", res.proof.all_hold, res.proof.failures, res.proof.to_json()),
        _stage("synthesize-connection", res.connection.report.passed, res.connection.report.failures,
               {"connection": body["connection"], "splittings": body["splittings"], "V": body["V"]}),
    ]
    meta = {"kappa": body["kappa"], **body["choices"]}
    code = EXIT_PASS if all(s["pass"] for s in stages) else EXIT_FAIL
    return _report("synthesize-connection", stages, meta), code


def cmd_verify_connection(b: Bundle, args) -> tuple[dict, int]:
    ell = b.total_connection()
    if ell is None:
        raise InputError("bundle has no connection to verify")
    rep = verify_connection(ell)
    stage = _stage("verify-connection", rep.passed, rep.failures, {"failed_axioms": rep.failed_axioms()})
    return _report("verify-connection", [stage]), EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_chern_galois(b: Bundle, args) -> tuple[dict, int]:
    g = b.data.get("grouplike")
    if g is None:
        raise InputError("bundle has no group-like element")
    g = from_jsonable(g)
    ell = b.total_connection()
    stages = []
    if ell is None:
        _require_cocommutative(b)
        res = synthesize_from_covering(b.covering(), b.connections(), kappa=b.kappa(args.order))
        ell = res.connection
        stages.append(_stage("synthesize-connection", ell.report.passed, ell.report.failures))
    try:
        p = chern_galois_projector(ell, g)
    except DependentLegsError as e:
        stages.append(_stage("chern-galois", False, [str(e)]))
        return _report("chern-galois", stages), EXIT_FAIL
    stages.append(_stage("chern-galois", p.idempotent and p.coinvariant, artifacts=p.to_json()))
    return _report("chern-galois", stages, {"legs": "rank factorization, RREF rows"}), \
        EXIT_PASS if all(s["pass"] for s in stages) else EXIT_FAIL


def cmd_example(args) -> tuple[dict, int]:
    from . import freestar as fs

    cutoff = args.cutoff if args.cutoff is not None else 16
    if cutoff < 4:
        raise fs.CutoffError("cutoff must be at least 4")
    model = fs.build_example()
    stages = []
    methods = {"1": ["1"], "2": ["2"], "both": ["1", "2"]}[args.method]
    outputs = {}
    if "1" in methods:
        r1 = fs.method_one(model)
        outputs["1"] = r1.ell
        stages.append(_stage("method-one-intermediate", fs.same_terms(r1.intermediate, fs.displayed_intermediate()),
                             artifacts=r1.intermediate.to_json()))
        stages.append(_stage("method-one-final", fs.same_terms(r1.ell, fs.displayed_method_one()),
                             artifacts=r1.ell.to_json()))
    if "2" in methods:
        r2 = fs.method_two()
        outputs["2"] = r2.ell
        stages.append(_stage("method-two", fs.same_terms(r2.ell, fs.displayed_method_two()),
                             artifacts=r2.ell.to_json()))
    for key, ell in outputs.items():
        rep = fs.verify_symbolic(ell, model)
        stages.append(_stage(f"verify[{key}]", rep.passed, rep.failures, rep.to_json()))
        li, ri = fs.legs_independent(ell)
        stages.append(_stage(f"legs-independent[{key}]", li and ri, artifacts={"left": li, "right": ri}))
        pr = fs.projector(ell)
        stages.append(_stage(f"projector[{key}]", pr.idempotent and pr.coinvariant, artifacts=pr.to_json()))
    sh = fs.verify_En(cutoff)
    stages.append(_stage("shift-representation", sh.passed, sh.failures, sh.to_json()))
    stages.append(_stage("symbol-table", fs.check_symbol_table()))
    if args.expect:
        with open(args.expect) as fh:
            want = json.load(fh)
        got = outputs.get("1") or outputs.get("2")
        same = json.dumps(got.to_json(), sort_keys=True) == json.dumps(want, sort_keys=True)
        stages.append(_stage("expect", same))
    meta = {"method": args.method, "cutoff": cutoff,
            "transfer_ansatz": "span of 1(x)u, phi1(x)1, phi2(x)1; canonical solve"}
    return _report("example-s2rt", stages, meta), EXIT_PASS if all(s["pass"] for s in stages) else EXIT_FAIL


BUNDLE_COMMANDS = {
    "check-covering": cmd_check_covering,
    "check-cocycle": cmd_check_cocycle,
    "build-pullback": cmd_build_pullback,
    "partition-basis": cmd_partition_basis,
    "build-splitting": cmd_build_splitting,
    "synthesize-connection": cmd_synthesize,
    "verify-connection": cmd_verify_connection,
    "chern-galois": cmd_chern_galois,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfglue", description="Exact gluing of principal comodule algebras.")
    p.add_argument("--version", action="version", version=f"hopfglue {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in BUNDLE_COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--in", dest="inp", required=True, help="problem bundle (JSON)")
        sp.add_argument("--out", help="report path; stdout when omitted")
        sp.add_argument("--cap", type=int, help="lattice closure cap")
        sp.add_argument("--piece", help="piece index for build-splitting")
        sp.add_argument("--order", help="kappa order, comma separated, starting with the piece")
    ex = sub.add_parser("example-s2rt")
    ex.add_argument("--method", choices=["1", "2", "both"], default="both")
    ex.add_argument("--expect", help="serialized connection to compare against")
    ex.add_argument("--cutoff", type=int, help="shift representation size (at least 4)")
    ex.add_argument("--out", "--report", dest="out", help="report path; stdout when omitted")
    return p


def _error_report(command: str, exc: Exception) -> dict:
    return _report(command, [_stage("input", False, [f"{type(exc).__name__}: {exc}"])])


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "example-s2rt":
        from .freestar import CutoffError

        try:
            report, code = cmd_example(args)
        except (CutoffError, OSError, json.JSONDecodeError) as e:
            report, code = _error_report(args.command, e), EXIT_INPUT
        _dump(report, args.out)
        return code
    try:
        with open(args.inp) as fh:
            bundle = Bundle(json.load(fh))
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError, ValueError, KeyError) as e:
        _dump(_error_report(args.command, e), args.out)
        return EXIT_INPUT
    try:
        report, code = BUNDLE_COMMANDS[args.command](bundle, args)
    except NonCocommutativeError as e:
        report, code = _error_report(args.command, e), EXIT_NONCOCOMM
        report["stages"][0]["stage"] = "co-commutativity"
    except InputError as e:
        report, code = _error_report(args.command, e), EXIT_INPUT
    except (DistributivityError, PreconditionError, SplittingError, ConnectionError_, GluingError) as e:
        report = _report(args.command, [_stage("precondition", False, [f"{type(e).__name__}: {e}"])])
        code = EXIT_FAIL
    except (ValueError, KeyError) as e:
        report, code = _error_report(args.command, e), EXIT_INPUT
    _dump(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
