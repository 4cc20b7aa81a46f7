"""Command line front end.

Four subcommands over a shared group/weight/ring vocabulary:

  dims      symbol, boundary, and cohomology dimensions plus invariants
  hecke     matrix and characteristic polynomial of T_p or a diamond
  qexp      eigenblocks with q-expansion coefficients on the cuspidal part
  compare   the symbol-to-surface-cohomology comparison report

Groups are congruence (gamma0:N, gamma1:N) or arbitrary finite-index
subgroups of a Hecke triangle group given by a permutation pair in a JSON
file (perm-file:PATH). Rings are the rationals (q), the integers (z), a
prime field (fp:P), or the rational extension by 2cos(pi/n) (lambda).

Exit codes: 0 success, 2 usage errors, 3 for mathematically unsupported
combinations, 4 when an internal consistency check fails. JSON output
renders ring elements as decimal strings so exact values survive parsing.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import sympy

from .cohomology import (
    comparison_report,
    h1_dimension,
    h1_parabolic_dimension,
    surface_h1_dimension,
    surface_h1_parabolic_dimension,
)
from .congruence import gamma0_cosets, gamma1_cosets
from .hecke import (
    diamond_operator,
    hecke_matrix,
    qexpansions,
    restrict_operator,
    sturm_bound,
)
from .linalg import IllDefinedMapError, InternalInvariantError, charpoly
from .modsym import (
    PermCosets,
    boundary_map,
    boundary_space,
    cuspidal_subspace,
    eisenstein_subspace,
    manin_space,
    weight_module_for,
)
from .rings import GF, QQ, ZZ, IntegerRing, QuotientExtension, UnsupportedRingError
from .triangle import InvalidSubgroupError, TriangleSubgroup, lambda_minimal_polynomial


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _group_spec(text):
    kind, sep, rest = text.partition(":")
    if kind in ("gamma0", "gamma1"):
        try:
            N = int(rest)
        except ValueError:
            raise argparse.ArgumentTypeError("level must be an integer: %r" % text)
        if N < 1:
            raise argparse.ArgumentTypeError("level must be positive: %r" % text)
        return (gamma0_cosets if kind == "gamma0" else gamma1_cosets)(N)
    if kind == "perm-file" and sep:
        try:
            with open(rest) as fh:
                data = json.load(fh)
            group = TriangleSubgroup(
                int(data["n"]), tuple(data["s"]), tuple(data["t"])
            )
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise argparse.ArgumentTypeError("bad permutation file %r: %s" % (rest, exc))
        except InvalidSubgroupError as exc:
            raise argparse.ArgumentTypeError("bad permutation pair in %r: %s" % (rest, exc))
        return PermCosets(group)
    raise argparse.ArgumentTypeError(
        "group must be gamma0:N, gamma1:N, or perm-file:PATH, got %r" % text
    )


def _ring_spec(text):
    if text in ("q", "z", "lambda"):
        return text
    kind, sep, rest = text.partition(":")
    if kind == "fp" and sep:
        try:
            p = int(rest)
        except ValueError:
            raise argparse.ArgumentTypeError("fp:P needs an integer, got %r" % text)
        if p < 2 or not sympy.isprime(p):
            raise argparse.ArgumentTypeError("fp:P needs a prime, got %r" % text)
        return ("fp", p)
    raise argparse.ArgumentTypeError(
        "ring must be q, z, fp:P, or lambda, got %r" % text
    )


def _weight_spec(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("weight must be an integer")
    if k < 2:
        raise argparse.ArgumentTypeError("weight must be at least 2")
    return k


def _bound_spec(text):
    try:
        b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("bound must be an integer")
    if b < 1:
        raise argparse.ArgumentTypeError("bound must be at least 1")
    return b


def _op_spec(text):
    kind, sep, rest = text.partition(":")
    if kind in ("tp", "diamond") and sep:
        try:
            value = int(rest)
        except ValueError:
            raise argparse.ArgumentTypeError("operator index must be an integer: %r" % text)
        if kind == "tp" and (value < 2 or not sympy.isprime(value)):
            raise argparse.ArgumentTypeError("tp:P needs a prime, got %r" % text)
        return (kind, value)
    raise argparse.ArgumentTypeError("op must be tp:P or diamond:D, got %r" % text)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="heckesym",
        description="exact modular symbols and cohomology for Hecke triangle subgroups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--group", type=_group_spec, required=True,
                       help="gamma0:N, gamma1:N, or perm-file:PATH")
        p.add_argument("--weight", type=_weight_spec, default=2)
        p.add_argument("--ring", type=_ring_spec, default="q",
                       help="q, z, fp:P, or lambda")
        p.add_argument("--format", choices=("human", "json"), default="human")
        p.add_argument("--out", default=None, help="write output to a file")

    p_dims = sub.add_parser("dims", help="dimension and invariant table")
    common(p_dims)
    p_dims.set_defaults(handler=cmd_dims)

    p_hecke = sub.add_parser("hecke", help="operator matrix and charpoly")
    common(p_hecke)
    p_hecke.add_argument("--op", type=_op_spec, required=True, help="tp:P or diamond:D")
    p_hecke.set_defaults(handler=cmd_hecke)

    p_qexp = sub.add_parser("qexp", help="eigenblocks and q-expansions")
    common(p_qexp)
    p_qexp.add_argument("--bound", type=_bound_spec, default=None,
                        help="number of coefficients (default: the Sturm bound)")
    p_qexp.set_defaults(handler=cmd_qexp)

    p_cmp = sub.add_parser("compare", help="symbols vs surface cohomology")
    common(p_cmp)
    p_cmp.set_defaults(handler=cmd_compare)

    return parser


# ---------------------------------------------------------------------------
# shared construction and rendering
# ---------------------------------------------------------------------------


def _build_ring(spec, cosets):
    if spec == "q":
        return QQ
    if spec == "z":
        return ZZ
    if spec == "lambda":
        n = cosets.n
        if n == 3:
            return QQ
        return QuotientExtension(QQ, list(lambda_minimal_polynomial(n)), var="lam")
    return GF(spec[1])


def _build_space(args):
    cosets = args.group
    ring = _build_ring(args.ring, cosets)
    weight = weight_module_for(cosets, ring, args.weight)
    return cosets, ring, manin_space(cosets, weight)


def _group_label(cosets):
    if isinstance(cosets, PermCosets):
        return "perm(n=%d, mu=%d)" % (cosets.n, cosets.mu)
    return "%s:%d" % (cosets.kind, cosets.N)


def _ring_label(spec):
    if isinstance(spec, tuple):
        return "fp:%d" % spec[1]
    return spec


def _fmt(value):
    """Ring elements and containers thereof, as exact decimal strings."""
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return str(value)


def _module_shape(mod):
    """Size summary of a presented module, ring-appropriate."""
    if isinstance(mod.ring, IntegerRing):
        return {"rank": mod.rank(), "invariants": [str(d) for d in mod.torsion()]}
    return {"dim": mod.rank()}


def _render_human(payload, lines=None, prefix=""):
    if lines is None:
        lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append("%s%s:" % (prefix, key))
            _render_human(value, lines, prefix + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append("%s%s:" % (prefix, key))
            for i, item in enumerate(value):
                lines.append("%s  [%d]" % (prefix, i))
                _render_human(item, lines, prefix + "    ")
        else:
            lines.append("%s%s: %s" % (prefix, key, _human_scalar(value)))
    return lines


def _human_scalar(value):
    if isinstance(value, list):
        return "[" + ", ".join(_human_scalar(v) for v in value) + "]"
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_dims(args):
    cosets, ring, space = _build_space(args)
    module = space.module
    bmap = boundary_map(space)
    cusp = cuspidal_subspace(space, bmap)
    eis = eisenstein_subspace(space, bmap)
    subgroup = cosets.subgroup
    payload = {
        "dims": {
            "manin": space.rank(),
            "cuspidal": cusp.module.rank(),
            "eisenstein": eis.rank(),
            "boundary": boundary_space(space).rank(),
            "h1": h1_dimension(module),
            "h1_par": h1_parabolic_dimension(module),
            "surface_h1": surface_h1_dimension(module),
            "surface_h1_par": surface_h1_parabolic_dimension(module),
        },
        "genus": subgroup.genus(),
        "cusps": len(subgroup.cusp_classes()),
        "elliptic": len(subgroup.elliptic_classes()),
        "torsion": [str(d) for d in space.presentation.torsion()],
    }
    return payload


def cmd_hecke(args):
    cosets, ring, space = _build_space(args)
    if not getattr(ring, "is_field", False):
        raise UnsupportedRingError(
            "operator matrices and characteristic polynomials need field "
            "coefficients; use q or fp:P"
        )
    kind, value = args.op
    if kind == "tp":
        op = hecke_matrix(space, value)
    else:
        op = diamond_operator(space, value)
    mat = op.matrix_on_generators()
    cusp = cuspidal_subspace(space)
    restricted = restrict_operator(op, cusp)
    payload = {
        "operator": "%s:%d" % (kind, value),
        "matrix": [_fmt(row) for row in mat.rows],
        "charpoly": _fmt(charpoly(mat)),
        "cuspidal_charpoly": _fmt(charpoly(restricted)),
    }
    return payload


def cmd_qexp(args):
    cosets, ring, space = _build_space(args)
    bound = args.bound if args.bound is not None else sturm_bound(space)
    records = qexpansions(space, bound)
    blocks = []
    for rec in records:
        blk = rec.block
        blocks.append({
            "dim": blk.dim,
            "diagonal": blk.diagonal,
            "eigenvalues": {str(p): _fmt(v) for p, v in sorted(blk.eigenvalues.items())},
            "factors": {str(p): _fmt(list(f)) for p, f in sorted(blk.factors.items())},
            "character": None if rec.character is None
                         else {str(p): _fmt(v) for p, v in sorted(rec.character.items())},
            "coefficients": None if rec.coefficients is None
                            else _fmt(list(rec.coefficients)),
        })
    return {
        "bound": bound,
        "sturm_bound": sturm_bound(space),
        "cuspidal_dim": cuspidal_subspace(space).module.rank(),
        "blocks": blocks,
    }


def cmd_compare(args):
    cosets, ring, space = _build_space(args)
    report = comparison_report(space)
    payload = {
        "verdict": report.verdict,
        "kernel": _module_shape(report.kernel),
        "local_terms": [_module_shape(t) for t in report.local_terms],
        "local_span": report.local_span,
    }
    return payload


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except UnsupportedRingError as exc:
        print("unsupported: %s" % exc, file=sys.stderr)
        return 3
    except (InternalInvariantError, IllDefinedMapError) as exc:
        print("internal invariant violated: %s" % exc, file=sys.stderr)
        return 4
    full = {
        "schema_version": "1",
        "command": args.command,
        "group": _group_label(args.group),
        "weight": args.weight,
        "ring": _ring_label(args.ring),
    }
    full.update(payload)
    if args.format == "json":
        text = json.dumps(full, sort_keys=True, indent=2)
    else:
        text = "\n".join(_render_human(full))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
