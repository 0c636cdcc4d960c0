"""Command line: classify, mesh, implicitize, lattice, verify, project.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import lattice, verify
from .circles import as_param
from .classify import ClassificationError, classify
from .implicit import CertificationError, certify_degree
from .moebius import Projection, inverse_stereographic
from .product import SIDES, build, sample_grid
from .quat import Quaternion

DEFAULT_SEED = 0
FORMATS = ("obj", "ply", "json")
CONFIG_KEYS = {"seed": int, "nu": int, "nv": int, "dmax": int, "project": str, "side": str, "format": str}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict:
    """Read ``key = value`` lines (UTF-8, ``#`` comments, optional ``[section]`` headers)."""
    if path is None:
        return {}
    text = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text if text.lstrip().startswith("[") else "[s3circles]\n" + text)
    except configparser.Error as e:
        raise UsageError(f"bad config file: {e}") from None
    out = {}
    for section in parser.sections():
        for key, value in parser[section].items():
            if key not in CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}")
            try:
                out[key] = CONFIG_KEYS[key](value)
            except ValueError:
                raise UsageError(f"config key {key!r}: bad value {value!r}") from None
    return out


def _circle(spec: str):
    if spec.startswith("@"):
        spec = Path(spec[1:]).read_text(encoding="utf-8")
    try:
        return as_param(spec)
    except (KeyError, ValueError, json.JSONDecodeError) as e:
        raise UsageError(f"bad circle spec {spec!r}: {e}") from None


def _projection(spec: str) -> Projection:
    try:
        return Projection.parse(spec)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _surface(args):
    if args.left is None or args.right is None:
        raise UsageError("--left and --right are required")
    try:
        return build(_circle(args.left), _circle(args.right), args.side)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_classify(args) -> int:
    if args.left is None or args.right is None:
        raise UsageError("--left and --right are required")
    try:
        result = classify(_circle(args.left), _circle(args.right), args.side)
    except ClassificationError as e:
        raise UsageError(str(e)) from None
    _write(json.dumps(result.to_json(), indent=2), args.out)
    return 0


def cmd_mesh(args) -> int:
    surface = _surface(args)
    fmt = args.format
    if fmt is None:
        suffix = Path(args.out).suffix.lstrip(".") if args.out not in (None, "-") else ""
        fmt = suffix if suffix in FORMATS else "obj"
    try:
        mesh = sample_grid(surface, args.nu, args.nv, _projection(args.project))
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = {"obj": mesh.to_obj, "ply": mesh.to_ply, "json": lambda: json.dumps(mesh.to_json())}[fmt]()
    _write(text, args.out)
    return 0


def cmd_implicitize(args) -> int:
    surface = _surface(args)
    try:
        cert = certify_degree(surface, _projection(args.project), args.dmax, seed=args.seed)
    except CertificationError as e:
        print(f"certification failed: {e}", file=sys.stderr)
        return 1
    _write(json.dumps(cert.to_json(), indent=2), args.out)
    return 0


def cmd_lattice(args) -> int:
    chains = lattice.consistency_chains()
    lines = [str(c) for c in chains]
    g = lattice.sectional_genus_report()
    lines.append(f"sectional genus of h = {g['h']}: {g['sectional_genus']}")
    _write("\n".join(lines), args.out)
    return 0 if all(c.holds for c in chains) else 1


def cmd_verify(args) -> int:
    def progress(res, seconds):
        if args.verbose:
            mark = "PASS" if res.passed else "FAIL"
            print(f"{mark} {res.module}.{res.op} [{res.name}] {seconds:.1f}s", file=sys.stderr)

    try:
        report = verify.run(skip=args.skip or (), corrupt=args.inject_fault, seed=args.seed, progress=progress)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _write(json.dumps(report, indent=2), args.out)
    return 0 if report["passed"] else 1


def _coords(text: str, n: int) -> list:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"expected {n} comma-separated coordinates, got {text!r}")
    try:
        return [Fraction(p) for p in parts]
    except ValueError:
        try:
            return [float(p) for p in parts]
        except ValueError:
            raise UsageError(f"bad coordinates {text!r}") from None


def cmd_project(args) -> int:
    proj = _projection(args.project)
    if args.inverse:
        if proj.kind != "stereo":
            raise UsageError("--inverse needs a stereographic projection")
        out = inverse_stereographic(_coords(args.point, 3), proj.center)
    else:
        try:
            out = proj.apply(Quaternion(*_coords(args.point, 4)))
        except ValueError as e:
            raise UsageError(str(e)) from None
    _write(json.dumps([str(c) for c in out]), args.out)
    return 0


def build_parser(config: dict) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file with default settings")
    common.add_argument("--seed", type=int, default=config.get("seed", DEFAULT_SEED))
    common.add_argument("--out", help="output file (default stdout)")

    surf = argparse.ArgumentParser(add_help=False)
    surf.add_argument("--left", help="preset name, JSON circle spec, or @file.json")
    surf.add_argument("--right", help="preset name, JSON circle spec, or @file.json")
    surf.add_argument("--side", choices=SIDES, default=config.get("side", SIDES[0]))
    surf.add_argument("--project", default=config.get("project", "stereo:default"))

    p = argparse.ArgumentParser(prog="s3circles", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common, surf], help="type I/II/III of great * small")
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("mesh", parents=[common, surf], help="sampled closed mesh of the projected surface")
    m.add_argument("--nu", type=int, default=config.get("nu", 128))
    m.add_argument("--nv", type=int, default=config.get("nv", 128))
    m.add_argument("--format", choices=FORMATS, default=config.get("format"))
    m.set_defaults(func=cmd_mesh)

    i = sub.add_parser("implicitize", parents=[common, surf], help="certified implicit equation")
    i.add_argument("--dmax", type=int, default=config.get("dmax", 8))
    i.set_defaults(func=cmd_implicitize)

    lt = sub.add_parser("lattice", parents=[common], help="print the delta consistency chains")
    lt.set_defaults(func=cmd_lattice)

    v = sub.add_parser("verify", parents=[common], help="run the verification battery")
    v.add_argument("--skip", action="append", choices=verify.KINDS, help="skip exact or float checks")
    v.add_argument("--inject-fault", metavar="PRESET", help="corrupt a preset coefficient before checking")
    v.add_argument("--verbose", action="store_true", help="progress lines on stderr")
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("project", parents=[common], help="project a point of S^3 (or lift with --inverse)")
    pr.add_argument("point", help="comma-separated coordinates, rationals allowed")
    pr.add_argument("--project", default=config.get("project", "stereo:default"))
    pr.add_argument("--inverse", action="store_true")
    pr.set_defaults(func=cmd_project)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    try:
        config = load_config(known.config)
    except (UsageError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
