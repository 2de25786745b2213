"""Command-line front end.

Exit codes: 0 success, 1 a verification returned false, 2 usage error
(bad flags, missing or unreadable input files, order below n), 3 the input
is mathematically invalid (singular hypersurface, invalid jet, bad algebra).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import suites
from .errors import CYSchottkyError
from .fuzz import MASTER_SEED
from .report import envelope, render

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_MATH = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    action: str | None = None
    inputs: dict = field(default_factory=dict)  # name -> (path, parsed raw data)
    order: int | None = None
    seed: int = MASTER_SEED
    trials: int | None = None
    format: str = "json"
    primes: tuple = ()
    output: str | None = None
    extra: dict = field(default_factory=dict)


def _primes(text: str) -> tuple:
    try:
        out = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("primes must be comma-separated integers") from None
    if not out or any(p < 2 for p in out):
        raise argparse.ArgumentTypeError("need at least one prime >= 2")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=MASTER_SEED)

    p = argparse.ArgumentParser(prog="cyschottky", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    os_p = sub.add_parser("os", parents=[common], help="order-symbolic duality computations")
    os_p.add_argument("action", choices=["chain", "transpose", "quasi-scalar", "duality"])
    os_p.add_argument("--algebra", required=True, help="algebra JSON")
    os_p.add_argument("--module", default="free:1",
                      help="free:<rank>, residue, or cofree:<copies> (duality only)")
    os_p.add_argument("--order", type=int, required=True)

    fr = sub.add_parser("frame", parents=[common], help="validate or export a Hodge frame")
    src = fr.add_mutually_exclusive_group(required=True)
    src.add_argument("--frame", help="frame.toml")
    src.add_argument("--hypersurface", help="hypersurface.toml")
    fr.add_argument("--order", type=int, help="also report symmetric-algebra sizes up to this order")

    for name, helptext in (("jacobian", "graded Jacobian ring dimensions"),
                           ("yukawa", "Yukawa couplings of a hypersurface")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--hypersurface", required=True)
        sp.add_argument("--modular-check", type=_primes, default=(), metavar="P1,P2,...")

    jp = sub.add_parser("jet", parents=[common], help="validate a jet or build one from a hypersurface")
    jp.add_argument("action", choices=["validate", "build"])
    jp.add_argument("--jet")
    jp.add_argument("--hypersurface")
    jp.add_argument("--order", type=int)

    sp = sub.add_parser("schottky", parents=[common], help="relations, lifts and verification")
    sp.add_argument("--jet", required=True)
    sp.add_argument("--order", type=int)

    vp = sub.add_parser("verify", parents=[common], help="seeded property suites")
    vp.add_argument("suite", choices=sorted(suites.SUITES) + ["all"])
    vp.add_argument("--trials", type=int)

    kp = sub.add_parser("k3", parents=[common], help="K3 period quadric")
    kp.add_argument("action", choices=["quadric"])
    src = kp.add_mutually_exclusive_group(required=True)
    src.add_argument("--hypersurface")
    src.add_argument("--jet")
    kp.add_argument("--order", type=int, default=2, help="verify orders 2..order")
    return p


def _read(path: str, kind: str):
    fp = Path(path)
    if not fp.is_file():
        raise UsageError(f"{kind} file not found: {path}")
    try:
        if fp.suffix == ".toml":
            from ._toml import read_toml
            return read_toml(fp)
        return json.loads(fp.read_text())
    except Exception as exc:  # malformed input of either format
        raise UsageError(f"cannot parse {kind} file {path}: {exc}") from None


def _jet_n(path: str, raw) -> int | None:
    fr = raw.get("frame") if isinstance(raw, dict) else None
    if isinstance(fr, dict):
        return fr.get("n")
    if isinstance(fr, str):
        fp = Path(fr)
        if not fp.is_absolute():
            fp = Path(path).parent / fp
        return _read(str(fp), "frame").get("n")
    return None


def parse_config(argv=None) -> RunConfig:
    """Parse and pre-validate; raises SystemExit(2) on usage errors."""
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.subcommand, getattr(args, "action", None), {},
                    getattr(args, "order", None), args.seed, getattr(args, "trials", None),
                    args.format, tuple(getattr(args, "modular_check", ()) or ()), args.output)
    if args.subcommand == "verify":
        cfg.action = args.suite
    if args.subcommand == "os":
        cfg.extra["module"] = args.module
    try:
        for name in ("algebra", "frame", "hypersurface", "jet"):
            path = getattr(args, name, None)
            if path:
                cfg.inputs[name] = (path, _read(path, name))
        if cfg.order is not None and cfg.order < 0:
            raise UsageError("--order must be non-negative")
        if args.subcommand == "jet":
            need = "jet" if cfg.action == "validate" else "hypersurface"
            if need not in cfg.inputs:
                raise UsageError(f"jet {cfg.action} needs --{need}")
        if args.subcommand in ("schottky", "k3") and "jet" in cfg.inputs and cfg.order is not None:
            path, raw = cfg.inputs["jet"]
            n = _jet_n(path, raw)
            if isinstance(n, int) and cfg.order < n:
                raise UsageError(f"--order {cfg.order} is below n = {n}")
        if cfg.trials is not None and cfg.trials < 1:
            raise UsageError("--trials must be positive")
    except UsageError as exc:
        parser.error(str(exc))
    return cfg


# -- execution ---------------------------------------------------------------------

def _frame_body(frame) -> dict:
    return {"frame": frame.to_dict(), "dim_H": frame.dim_h,
            "W_dims": {str(i + 1): d for i, d in enumerate(frame.w_dims)},
            "tags": [{"label": t.label, "type": [t.p, t.q], "F": t.hodge_level,
                      "F_plus": t.plus_level, "weight": t.weight} for t in frame.tags]}


def _load_jet(cfg):
    from .jet import jet_from_dict
    path, raw = cfg.inputs["jet"]
    return jet_from_dict(raw, Path(path).parent)


def _hypersurface(cfg):
    from .jacobian import hypersurface_from_dict
    return hypersurface_from_dict(cfg.inputs["hypersurface"][1])


def _module(alg, spec: str, order: int):
    from .artin import cofree_chain, free_module, os_dual, residue_field
    from .errors import AlgebraError
    kind, _, arg = spec.partition(":")
    try:
        count = int(arg) if arg else 1
    except ValueError:
        raise AlgebraError(f"bad module description {spec!r}") from None
    if kind == "free":
        return free_module(alg, count, level=min(order, alg.nil_order))
    if kind == "residue":
        return residue_field(alg)
    if kind == "cofree":
        return cofree_chain(os_dual(alg, order), count)
    raise AlgebraError(f"unknown module kind {kind!r}")


def _run_os(cfg) -> tuple[dict, bool]:
    from .artin import (FiniteModule, algebra_from_dict, duality_check, os_dual, quasi_scalar,
                        standard_chain, transpose_module)
    alg = algebra_from_dict(cfg.inputs["algebra"][1])
    m = cfg.order
    body = {"algebra": {"dim": alg.dim, "nil_order": alg.nil_order, "labels": list(alg.labels),
                        "adapted_basis": alg.is_adapted}, "order": m,
            "provenance": {"spaces": "B0_i = Hom(S_i, Q), B^i = (m/m^(i+1))^*",
                           "transpose": "B^i(E) = B0_i (x)_S E", "duality": "unit E -> C^m(B^m(E)), "
                           "counit B^m(C^m(G)) -> G^m"}}
    ok = True
    if cfg.action == "chain":
        ch = os_dual(alg, m)
        body["B0_dims"] = ch.dims
        body["B_dims"] = ch.plus_dims
        body["factors_through_filtration"] = [ch.factors_through_filtration(i) for i in range(m + 1)]
        body["symbols"] = {str(i): {ch.algebra.labels[k] + "*": {f"{a}*(x){c}*": v for (a, c), v in
                                                                   ch.symbol_image(i, k).items()}
                                    for k in ch.dual_index[i]} for i in range(1, m + 1)}
        ok = all(body["factors_through_filtration"])
    elif cfg.action == "transpose":
        e = _module(alg, cfg.extra["module"], m)
        if not isinstance(e, FiniteModule):
            from .errors import AlgebraError
            raise AlgebraError("transpose needs a module, not a chain")
        t = transpose_module(e, m)
        body.update(module=cfg.extra["module"], dim=t.dim,
                    basis=[f"{lab}(x)e{x}" for lab, x in t.basis])
    elif cfg.action == "quasi-scalar":
        q = quasi_scalar(standard_chain(os_dual(alg, m)))
        body.update(level_dims=q.level_dims, dim=q.dim)
    else:
        obj = _module(alg, cfg.extra["module"], m)
        rep = duality_check(obj, m) if isinstance(obj, FiniteModule) else duality_check(obj)
        body.update(module=cfg.extra["module"], report=rep.to_dict())
        ok = rep.is_isomorphism
    return body, ok


def _run_jacobian(cfg, yukawa: bool) -> tuple[dict, bool]:
    from .jacobian import build_jacobian_ring, modular_dimensions, yukawa_tensors
    spec = _hypersurface(cfg)
    ring = build_jacobian_ring(spec)
    body = {"hypersurface": spec.to_dict(), "dims": ring.dims[: ring.top + 1],
            "smooth": True, "socle_degree": ring.top,
            "hessian_normal_form": [[c, list(m)] for m, c in ring.hessian_nf.items()],
            "provenance": {"model": "graded Jacobian ring Q[x]/(df) with Hessian socle normalization"}}
    ok = True
    if cfg.primes:
        mod = modular_dimensions(spec, ring.top, cfg.primes)
        agree = all(all(v == ring.dims[k] for v in per.values()) for k, per in mod.items())
        body["modular_check"] = {"primes": list(cfg.primes), "agree": agree,
                                 "dims": {str(k): {str(p): v for p, v in per.items()}
                                          for k, per in mod.items()}}
        ok = agree
    if yukawa:
        out = yukawa_tensors(ring)
        body["yukawa"] = out.to_dict()
    return body, ok


def _run_k3(cfg) -> tuple[dict, bool]:
    from .hodge import sym_basis
    from .jacobian import build_jacobian_ring, export_frame
    from .jet import jet_from_yukawa
    from .schottky import k3_period_quadric, poly_to_json, render as render_poly, verify_defining
    m = max(cfg.order or 2, 2)
    if "jet" in cfg.inputs:
        jet = _load_jet(cfg)
        if jet.order < m:
            raise UsageError(f"--order {m} exceeds the jet order {jet.order}")
    else:
        ring = build_jacobian_ring(_hypersurface(cfg))
        frame, y = export_frame(ring)
        jet = jet_from_yukawa(frame, y, order=m)
    q = k3_period_quadric(jet)
    basis = sym_basis(jet.frame, 2)
    checks = {str(k): verify_defining(jet, k, [q]).isomorphism for k in range(2, m + 1)}
    body = {"frame": jet.frame.to_dict(), "relations": [render_poly(q, basis)],
            "relation_terms": [poly_to_json(q, basis)], "verify_defining": checks,
            "provenance": {"relation": "single quadratic relation phi - q (period quadric)"}}
    return body, all(checks.values())


def execute(cfg: RunConfig) -> tuple[dict, int]:
    sc = cfg.subcommand
    ok = True
    if sc == "os":
        body, ok = _run_os(cfg)
    elif sc == "frame":
        if "frame" in cfg.inputs:
            from .hodge import frame_from_dict
            frame = frame_from_dict(cfg.inputs["frame"][1])
        else:
            from .jacobian import build_jacobian_ring, export_frame
            frame, _ = export_frame(build_jacobian_ring(_hypersurface(cfg)))
        body = _frame_body(frame)
        if cfg.order is not None:
            from .hodge import sym_basis
            sizes = {}
            for m in range(cfg.order + 1):
                b = sym_basis(frame, m)
                sizes[str(m)] = {"S_m": len(b), "B1": len(b.b1), "slice": len(b.slices[m])}
            body["sym_sizes"] = sizes
    elif sc in ("jacobian", "yukawa"):
        body, ok = _run_jacobian(cfg, sc == "yukawa")
    elif sc == "jet":
        from .jet import jet_from_yukawa, leading_tensors
        if cfg.action == "validate":
            jet = _load_jet(cfg)
        else:
            from .jacobian import build_jacobian_ring, export_frame
            frame, y = export_frame(build_jacobian_ring(_hypersurface(cfg)))
            jet = jet_from_yukawa(frame, y, order=cfg.order if cfg.order is not None else frame.n)
        lead = leading_tensors(jet)
        body = {"valid": True, "jet": jet.to_dict(),
                "leading_tensors": {lab: [[list(k), v] for k, v in sorted(t.items())]
                                    for lab, t in lead.tensors.items()}}
    elif sc == "schottky":
        from .schottky import schottky_report
        jet = _load_jet(cfg)
        m = cfg.order if cfg.order is not None else jet.order
        if m > jet.order:
            raise UsageError(f"--order {m} exceeds the jet order {jet.order}")
        body = schottky_report(jet, m)
        body["relations"] = body["generators"]
        ok = body["verdict"]
    elif sc == "verify":
        names = sorted(suites.SUITES) if cfg.action == "all" else [cfg.action]
        results = []
        for name in names:
            kw = {"seed": cfg.seed}
            if cfg.trials is not None:
                kw["trials"] = cfg.trials
            results.append(suites.SUITES[name](**kw))
        body = {"suites": results}
        ok = all(r["ok"] for r in results)
    elif sc == "k3":
        body, ok = _run_k3(cfg)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown subcommand {sc}")
    report = envelope(sc if cfg.action is None else f"{sc} {cfg.action}", body, cfg.seed)
    report["ok"] = ok
    return report, EXIT_OK if ok else EXIT_FAILED


def _emit(report: dict, output: str | None) -> None:
    data = render(report)
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, code = execute(cfg)
    except UsageError as exc:
        print(f"cyschottky: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError, ValueError) as exc:
        # structurally malformed input file (missing keys, wrong shapes)
        print(f"cyschottky: error: malformed input: {exc!r}", file=sys.stderr)
        return EXIT_USAGE
    except CYSchottkyError as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        for attr in ("component", "term", "order"):
            if hasattr(exc, attr):
                err["error"][attr] = getattr(exc, attr)
        _emit(envelope(cfg.subcommand, err, cfg.seed), cfg.output)
        print(f"cyschottky: {exc}", file=sys.stderr)
        return EXIT_MATH
    _emit(report, cfg.output)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
