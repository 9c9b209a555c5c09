"""Command-line front end.

Every command prints (or writes with ``--out``) a JSON report carrying a
``schema`` field.  The exit status is 0 exactly when every certification
that was run passed; input errors exit with status 2.
"""

import argparse
import hashlib
import json
import os
import pickle
import sys
from dataclasses import dataclass
from pathlib import Path

from . import scwol
from .arrangement import ArrangementSpec, SpecError, toric_face_category
from .elliptic import (build_model, euler_characteristic, f_vector,
                       nerve_euler_characteristic, verify_cw)
from .homology import boundary_matrices, betti_torsion
from .pi1 import abelianization, is_spanning_tree, presentation, tietze_simplify

REPORT_SCHEMA = 1
CACHE_VERSION = 1


@dataclass
class RunConfig:
    command: str
    input: str = None
    out: str = None
    margin_cap: int = 64
    max_dim: int = None
    certify: bool = True
    cache_dir: str = None
    dump: str = None

    def check(self):
        if self.margin_cap < 1:
            raise SpecError("--margin-cap must be positive")
        if self.max_dim is not None and self.max_dim < 1:
            raise SpecError("--max-dim must be positive")


def default_cache_dir():
    env = os.environ.get("ELLARR_CACHE_DIR")
    if env is not None:
        return env or None
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "ellarr")


def load_spec(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    try:
        return ArrangementSpec.from_json(text)
    except SpecError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def spec_hash(spec, margin_cap):
    blob = json.dumps({"spec": spec.to_dict(), "margin_cap": margin_cap,
                       "version": CACHE_VERSION}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def face_category(spec, cfg):
    """Face category, read from or written to the on-disk cache."""
    if not cfg.cache_dir:
        return toric_face_category(spec, cfg.margin_cap)
    path = Path(cfg.cache_dir) / f"faces-{spec_hash(spec, cfg.margin_cap)}.pickle"
    if path.exists():
        try:
            with path.open("rb") as fh:
                fc = pickle.load(fh)
            if fc.spec == spec:
                return fc
        except Exception:
            pass
    fc = toric_face_category(spec, cfg.margin_cap)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with tmp.open("wb") as fh:
            pickle.dump(fc, fh)
        tmp.replace(path)
    except OSError:
        pass
    return fc


def _report(command, **body):
    return {"schema": REPORT_SCHEMA, "command": command, **body}


def _certification(name, ok, **detail):
    return {"name": name, "passed": bool(ok), **detail}


def cmd_faces(cfg):
    spec = load_spec(cfg.input)
    fc = face_category(spec, cfg)
    problems = scwol.validate(fc.cat)
    certs = [_certification("category axioms", not problems, problems=problems[:20])]
    return _report("faces", spec=spec.to_dict(), counts=fc.counts(),
                   morphisms=fc.cat.n_morphisms, geometry=fc.geometry_table(),
                   category=scwol.to_dict(fc.cat), certifications=certs)


def _cw_summary(report):
    return _certification("cw slices", report.passed, checked=len(report.checks),
                          failures=[{"object": c.label, "reason": c.reason}
                                    for c in report.failures()])


def cmd_model(cfg):
    spec = load_spec(cfg.input)
    model = build_model(face_category(spec, cfg))
    certs = []
    if cfg.certify:
        problems = scwol.validate(model.cat)
        certs.append(_certification("category axioms", not problems, problems=problems[:20]))
        model.certificate = verify_cw(model)
        certs.append(_cw_summary(model.certificate))
        chi_nerve = nerve_euler_characteristic(model)
        certs.append(_certification("euler characteristic", chi_nerve == euler_characteristic(model),
                                    nerve=chi_nerve))
    return _report("model", spec=spec.to_dict(), f_vector=f_vector(model),
                   euler_characteristic=euler_characteristic(model),
                   objects=model.cat.n_objects, morphisms=model.cat.n_morphisms,
                   certifications=certs)


def cmd_homology(cfg):
    spec = load_spec(cfg.input)
    model = build_model(face_category(spec, cfg))
    cx = boundary_matrices(model.cat, max_dim=cfg.max_dim)
    if cfg.dump:
        Path(cfg.dump).write_text(cx.dump())
    h = betti_torsion(cx)
    complete = cfg.max_dim is None or len(cx.chains) <= cfg.max_dim
    if not complete:
        h.betti = h.betti[:cfg.max_dim]
        h.torsion = h.torsion[:cfg.max_dim]
    certs = []
    if cfg.certify and complete:
        chi_cells = euler_characteristic(model)
        chi_chains = sum((-1) ** d * c for d, c in enumerate(cx.counts()))
        certs.append(_certification("euler characteristic",
                                    h.euler_characteristic() == chi_chains == chi_cells,
                                    betti=h.euler_characteristic(), chains=chi_chains,
                                    cells=chi_cells))
    return _report("homology", spec=spec.to_dict(), complete=complete,
                   homology=h.to_dict(), text=h.report(), certifications=certs)


def cmd_pi1(cfg):
    if not cfg.certify:
        raise SpecError("pi1 needs a certified model; drop --no-certify")
    spec = load_spec(cfg.input)
    model = build_model(face_category(spec, cfg))
    model.certificate = verify_cw(model)
    certs = [_cw_summary(model.certificate)]
    if not model.certificate.passed:
        return _report("pi1", spec=spec.to_dict(), certifications=certs)
    data = presentation(model)
    raw = data.presentation
    simple = tietze_simplify(raw)
    ab = abelianization(raw)
    h = betti_torsion(boundary_matrices(model.cat, max_dim=2))
    f_d = len(data.graph.chambers)
    certs.append(_certification("boundary walks", True, relators=len(raw.relators)))
    certs.append(_certification("model tree", is_spanning_tree(model, data.model_tree, data.graph)
                                and len(data.model_tree) == f_d * f_d - 1,
                                size=len(data.model_tree)))
    certs.append(_certification("abelianization equals H1",
                                (ab.rank, ab.torsion) == (h.betti[1], h.torsion[1]),
                                h1={"rank": h.betti[1], "torsion": h.torsion[1]}))
    if cfg.out:
        stem = Path(cfg.out)
        stem.with_suffix(".raw.txt").write_text(raw.to_text())
        stem.with_suffix(".simplified.txt").write_text(simple.to_text())
    return _report("pi1", spec=spec.to_dict(), tree=[model.fc.cat.labels[w] for w in data.tree],
                   raw={"generators": len(raw.generators), "relators": len(raw.relators),
                        "text": raw.to_text(), "structured": raw.to_dict()},
                   simplified={"generators": len(simple.generators),
                               "relators": len(simple.relators), "text": simple.to_text()},
                   abelianization=ab.to_dict(), certifications=certs)


def cmd_an(cfg):
    from . import coxeter_an as an
    try:
        n = int(cfg.input)
    except (TypeError, ValueError):
        raise SpecError(f"an: expected an integer n, got {cfg.input!r}") from None
    if n < 1:
        raise SpecError("an: n must be at least 1")
    cat = an.cyclic_partitions_category(n)
    ap = an.an_presentation(n)
    p2, p11 = an.classify_codim2(n) if n >= 2 else ([], [])
    ab = abelianization(ap.presentation)
    certs = []
    if cfg.certify:
        problems = scwol.validate(cat)
        certs.append(_certification("category axioms", not problems, problems=problems[:20]))
        certs.append(_certification("tree spans", an.tree_is_spanning(n, ap.tree)))
    body = {}
    if cfg.certify and n <= 3:
        from .arrangement import coxeter_a
        fc = face_category(coxeter_a(n), cfg)
        iso = an.verify_an_iso(n, fc)
        body["isomorphism"] = {"objects": [[fc.cat.labels[x], cat.labels[y]]
                                           for x, y in enumerate(iso.objects)],
                               "morphisms": list(iso.morphisms)}
        certs.append(_certification("geometric isomorphism", True))
        if n >= 2:
            cmp = an.compare_with_geometric(n, build_model(fc))
            gab = abelianization(cmp.general.presentation)
            certs.append(_certification("abelianization equals general", gab == ab,
                                        general=gab.to_dict()))
            certs.append(_certification("relators equal general", cmp.relators_match,
                                        mismatched=cmp.mismatched))
    return _report("an", n=n, objects=cat.labels, counts=cat.rank_counts(),
                   morphisms=cat.n_morphisms, tree=[str(w) for w in ap.tree],
                   p2=[str(p) for p in p2], p11=[str(p) for p in p11],
                   presentation={"generators": len(ap.presentation.generators),
                                 "relators": len(ap.presentation.relators),
                                 "text": ap.presentation.to_text()},
                   abelianization=ab.to_dict(), certifications=certs, **body)


def cmd_check(cfg):
    """Full invariant suite on one spec."""
    spec = load_spec(cfg.input)
    fc = face_category(spec, cfg)
    model = build_model(fc)
    certs = []
    for name, cat in (("face category", fc.cat), ("model", model.cat)):
        problems = scwol.validate(cat)
        certs.append(_certification(f"{name} axioms", not problems, problems=problems[:20]))
    torus = sum((-1) ** d * c for d, c in enumerate(boundary_matrices(fc.cat).counts()))
    certs.append(_certification("torus euler characteristic", torus == 0, value=torus))
    try:
        cx = boundary_matrices(model.cat, max_dim=cfg.max_dim)
    except AssertionError as exc:
        certs.append(_certification("boundary squares to zero", False, detail=str(exc)))
        return _report("check", spec=spec.to_dict(), certifications=certs)
    certs.append(_certification("boundary squares to zero", True))
    h = betti_torsion(cx)
    complete = cfg.max_dim is None or len(cx.chains) <= cfg.max_dim
    chi = euler_characteristic(model)
    if complete:
        chi_chain = sum((-1) ** d * c for d, c in enumerate(cx.counts()))
        certs.append(_certification("euler characteristic", chi == chi_chain == h.euler_characteristic(),
                                    cells=chi, chains=chi_chain, betti=h.euler_characteristic()))
    b0 = h.betti[0]
    certs.append(_certification("connected", b0 == 1, b0=b0))
    model.certificate = verify_cw(model)
    certs.append(_cw_summary(model.certificate))
    if model.certificate.passed:
        data = presentation(model)
        raw = data.presentation
        f_d = len(data.graph.chambers)
        n0 = model.cat.rank_counts()
        certs.append(_certification("chamber tree", len(data.tree) == f_d - 1, size=len(data.tree)))
        certs.append(_certification("model tree", is_spanning_tree(model, data.model_tree, data.graph)
                                    and len(data.model_tree) == f_d * f_d - 1))
        certs.append(_certification("generator count",
                                    len(raw.generators) == n0[1] - len(data.model_tree)))
        certs.append(_certification("relator count",
                                    len(raw.relators) == (n0[2] if len(n0) > 2 else 0)))
        ab = abelianization(raw)
        h1 = (h.betti[1], h.torsion[1]) if len(h.betti) > 1 else (0, [])
        certs.append(_certification("abelianization equals H1", (ab.rank, ab.torsion) == h1,
                                    abelianization=ab.to_dict()))
    return _report("check", spec=spec.to_dict(), f_vector=f_vector(model),
                   homology=h.to_dict(), certifications=certs)


COMMANDS = {"faces": cmd_faces, "model": cmd_model, "homology": cmd_homology,
            "pi1": cmd_pi1, "an": cmd_an, "check": cmd_check}


def build_parser():
    parser = argparse.ArgumentParser(prog="ellarr", description="Combinatorial models of elliptic arrangements.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "an":
            p.add_argument("input", metavar="N", help="rank n of A_n")
        else:
            p.add_argument("input", metavar="SPEC", help="arrangement JSON file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--margin-cap", type=int, default=64,
                       help="largest lattice index tolerated when enumerating vertices")
        p.add_argument("--max-dim", type=int, default=None, help="truncate the nerve at this dimension")
        p.add_argument("--no-certify", dest="certify", action="store_false",
                       help="skip certification checks")
        p.add_argument("--cache-dir", default=None, help="face category cache (default: user cache)")
        p.add_argument("--no-cache", action="store_true")
        if name == "homology":
            p.add_argument("--dump", help="write boundary matrices as triplets")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    cache = None if args.no_cache else (args.cache_dir or default_cache_dir())
    cfg = RunConfig(args.command, args.input, args.out, args.margin_cap, args.max_dim,
                    args.certify, cache, getattr(args, "dump", None))
    try:
        cfg.check()
        report = COMMANDS[cfg.command](cfg)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c["passed"] for c in report["certifications"]) else 1


if __name__ == "__main__":
    sys.exit(main())
