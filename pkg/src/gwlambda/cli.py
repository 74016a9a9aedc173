"""Command-line interface.

Four commands:

* ``poly``  -- print a universal polynomial table entry;
* ``check`` -- run lambda-identity checks on explicit elements or sweeps;
* ``forms`` -- exterior powers, invariants, sub-Lagrangian reduction, and
  the hyperbolic change-of-basis witness for Gram-matrix files;
* ``char``  -- Weyl characters with mass, dimension oracle, and
  triangularity verdict.

``--format records`` emits line-delimited JSON with sorted keys, so equal
inputs produce byte-identical output; ``human`` is a readable rendering of
the same data.  Exit codes: 0 all checks passed, 1 an identity check
failed, 2 usage or input errors.
"""

import argparse
import itertools
import json
import random
import sys

from . import forms as forms_mod
from . import lambda_rings as lr
from . import symfun, weights
from .errors import DomainError
from .fields import field_model


def _json_line(record):
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _common_flags(sub):
    sub.add_argument(
        "--format",
        choices=("human", "records"),
        default="human",
        help="output style: readable text or line-delimited JSON",
    )
    sub.add_argument("--out", help="write output to this file instead of stdout")
    sub.add_argument(
        "--seed", type=int, default=0, help="seed for any randomized enumeration"
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gwlambda",
        description="Exact lambda-ring computations on forms, characters, and weights.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    poly = sub.add_parser("poly", help="print a universal polynomial")
    poly.add_argument("--k", type=int, required=True, help="outer lambda index")
    poly.add_argument(
        "--j", type=int, default=None, help="inner index for the composition table"
    )
    _common_flags(poly)

    check = sub.add_parser("check", help="run lambda-identity checks")
    check.add_argument(
        "--ring",
        choices=("integers", "gw-field", "k-torus", "k-ext-torus", "gw-ext-torus"),
        help="ring for sweep mode (element files carry their own ring)",
    )
    check.add_argument("--field", help="field spec qc, rc, or fq:<q>")
    check.add_argument("--r", type=int, default=1, help="torus rank")
    check.add_argument("--kmax", type=int, default=None, help="largest outer index")
    check.add_argument(
        "--jmax", type=int, default=2, help="largest inner index in sweeps"
    )
    check.add_argument("--sweep", action="store_true", help="enumerate basis elements")
    check.add_argument(
        "--bound", type=int, default=1, help="coordinate bound for sweeps"
    )
    check.add_argument("--x-file", help="element record for the first operand")
    check.add_argument("--y-file", help="element record for the second operand")
    check.add_argument("--x", type=int, help="inline integer operand (ring integers)")
    check.add_argument("--y", type=int, help="inline integer operand (ring integers)")
    check.add_argument(
        "--j", type=int, default=None, help="inner index for a targeted composition check"
    )
    check.add_argument(
        "--constants", help="JSON file overriding the extension structure constants"
    )
    _common_flags(check)

    forms = sub.add_parser("forms", help="operations on Gram-matrix files")
    forms.add_argument(
        "action", choices=("exterior", "class", "reduce", "hyperbolic-witness", "hyperbolic")
    )
    forms.add_argument("--in", dest="infile", help="form record (JSON)")
    forms.add_argument("--k", type=int, default=None, help="exterior power index")
    forms.add_argument(
        "--vectors", help="sub-Lagrangian basis: rows 'a,b,...' joined by ';'"
    )
    forms.add_argument("--n", type=int, default=None, help="hyperbolic rank")
    forms.add_argument("--field", help="field spec for generated forms")
    _common_flags(forms)

    char = sub.add_parser("char", help="Weyl character of a dominant weight")
    char.add_argument("--type", dest="flavor", choices=("B", "D"), required=True)
    char.add_argument("--n", type=int, required=True, help="rank")
    char.add_argument("--hw", required=True, help="highest weight 'c1,c2,...'")
    _common_flags(char)

    return parser


# ---------------------------------------------------------------------------
# poly


def _cmd_poly(args, emit):
    if args.k < 1:
        raise DomainError("--k must be >= 1")
    if args.j is None:
        poly = symfun.universal_P(args.k)
    else:
        if args.j < 1:
            raise DomainError("--j must be >= 1")
        poly = symfun.universal_P_kj(args.k, args.j)
    text = poly.to_text()
    if args.format == "records":
        emit(_json_line({"k": args.k, "j": args.j, "poly": text}))
    else:
        emit(text)
    return 0


# ---------------------------------------------------------------------------
# check


def _sweep_elements(args, constants):
    """Deterministic list of (name, element) basis pairs for the ring."""
    ring_tag = args.ring
    bound = args.bound
    if bound < 0:
        raise DomainError("--bound must be >= 0")
    if ring_tag == "integers":
        ring = lr.IntegerRing()
        return [(str(n), ring.elt(n)) for n in range(-bound, bound + 1)]
    if ring_tag == "gw-field":
        field = _require_field(args)
        ring = lr.GWFieldRing(field)
        reps = [field.one]
        others = sorted(
            {field.square_class(a) for a in _field_probe(field)} - {field.one},
            key=field.sort_key,
        )
        reps.extend(others)
        return [("<%s>" % field.to_str(a), ring.diag([a])) for a in reps]
    if ring_tag == "k-torus":
        ring = lr.KTorusRing(args.r)
        out = []
        for coords in sorted(itertools.product(range(-bound, bound + 1), repeat=args.r)):
            out.append((lr.element_str(ring.line(coords)), ring.line(coords)))
        return out
    if ring_tag == "k-ext-torus":
        ring = lr.KExtTorusRing(args.r)
        gw = lr.GWExtTorusRing(args.r, field_model("qc"))
        return [
            (b.to_str(), ring.basis_elt(b)) for b in gw.basis_symbols(bound)
        ]
    if ring_tag == "gw-ext-torus":
        field = _require_field(args)
        ring = lr.GWExtTorusRing(args.r, field, constants)
        return [(b.to_str(), ring.basis_elt(b)) for b in ring.basis_symbols(bound)]
    raise DomainError("--sweep requires --ring")


def _field_probe(field):
    """A few nonzero elements covering every square class of the model."""
    if field.kind == "fq":
        return [field.from_int(n) for n in range(1, field.q)]
    if field.kind == "rc":
        return [field.one, field.neg(field.one)]
    return [field.one]


def _require_field(args):
    if not args.field:
        raise DomainError("--field is required for this ring")
    return field_model(args.field)


def _emit_check(report, name_x, name_y, args, emit):
    for rec in report:
        if args.format == "records":
            emit(_json_line(rec.to_record()))
        else:
            tag = "PASS" if rec.passed else "FAIL"
            ctx = "x=%s" % name_x
            if name_y is not None:
                ctx += " y=%s" % name_y
            emit("[%s] %s k=%d %s" % (tag, rec.check, rec.k, ctx))
            if not rec.passed:
                emit("       lhs = %s" % lr.element_str(rec.lhs))
                emit("       rhs = %s" % lr.element_str(rec.rhs))
    return report.all_pass


def _cmd_check(args, emit):
    constants = lr.DEFAULT_CONSTANTS
    if args.constants:
        constants = lr.load_constants(args.constants)
    total = 0
    failed = 0

    def run(report, nx, ny):
        nonlocal total, failed
        total += len(report)
        if not _emit_check(report, nx, ny, args, emit):
            failed += sum(1 for r in report if not r.passed)

    if args.x is not None or args.y is not None:
        if args.ring != "integers":
            raise DomainError("inline --x/--y operands are for --ring integers")
        ints = lr.IntegerRing()
        x = ints.elt(args.x if args.x is not None else 1)
        y = ints.elt(args.y if args.y is not None else 1)
        run(lr.check_lambda1(x, y, args.kmax), str(x.n), str(y.n))
        if args.j is not None:
            run(lr.check_lambda2(x, args.j, args.kmax), str(x.n), None)
    elif args.x_file:
        x = lr.load_element(args.x_file, constants)
        did = False
        if args.y_file:
            y = lr.load_element(args.y_file, constants)
            run(lr.check_lambda1(x, y, args.kmax), args.x_file, args.y_file)
            did = True
        if args.j is not None:
            run(lr.check_lambda2(x, args.j, args.kmax), args.x_file, None)
            did = True
        if not did:
            raise DomainError("give --y-file for products or --j for compositions")
    elif args.sweep:
        kmax = args.kmax if args.kmax is not None else 4
        elements = _sweep_elements(args, constants)
        for i, (nx, x) in enumerate(elements):
            for ny, y in elements[i:]:
                run(lr.check_lambda1(x, y, kmax), nx, ny)
        for nx, x in elements:
            for j in range(1, args.jmax + 1):
                run(lr.check_lambda2(x, j, kmax), nx, None)
    else:
        raise DomainError("give --sweep or an --x-file")

    if args.format == "human":
        emit("checks: %d passed, %d failed" % (total - failed, failed))
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# forms


def _print_gram(form, emit):
    for row in form.gram:
        emit("[%s]" % ", ".join(form.field.to_str(v) for v in row))


def _cmd_forms(args, emit):
    if args.action == "hyperbolic":
        if args.n is None or not args.field:
            raise DomainError("hyperbolic needs --n and --field")
        form = forms_mod.hyperbolic(args.n, field_model(args.field))
        if args.format == "records":
            emit(_json_line(forms_mod.form_record(form)))
        else:
            _print_gram(form, emit)
        return 0

    if not args.infile:
        raise DomainError("--in is required")
    form = forms_mod.load_form(args.infile)

    if args.action == "exterior":
        if args.k is None:
            raise DomainError("exterior needs --k")
        out = forms_mod.exterior_power(form, args.k)
        if args.format == "records":
            emit(_json_line(forms_mod.form_record(out)))
        else:
            _print_gram(out, emit)
        return 0

    if args.action == "class":
        cls = forms_mod.gw_class(form)
        record = {
            "field": cls.field.spec,
            "rank": cls.rank,
            "disc": cls.field.to_str(cls.disc.rep),
            "signature": cls.signature,
        }
        if args.format == "records":
            emit(_json_line(record))
        else:
            parts = ["field=%s" % record["field"], "rank=%d" % cls.rank]
            parts.append("disc=%s" % record["disc"])
            if cls.signature is not None:
                parts.append("signature=%d" % cls.signature)
            emit(" ".join(parts))
        return 0

    if args.action == "reduce":
        if not args.vectors:
            raise DomainError("reduce needs --vectors")
        vectors = []
        for row in args.vectors.split(";"):
            vectors.append([form.field.parse(v.strip()) for v in row.split(",")])
        reduced, rank = forms_mod.sublagrangian_reduce(form, vectors)
        if args.format == "records":
            record = forms_mod.form_record(reduced)
            record["sublagrangian_rank"] = rank
            emit(_json_line(record))
        else:
            emit("sublagrangian_rank=%d" % rank)
            if reduced.dim:
                _print_gram(reduced, emit)
            else:
                emit("[]")
        return 0

    if args.action == "hyperbolic-witness":
        witness = forms_mod.hyperbolic_lemma_witness(form)
        record = {
            "field": form.field.spec,
            "matrix": [[form.field.to_str(v) for v in row] for row in witness],
            "verified": True,
        }
        if args.format == "records":
            emit(_json_line(record))
        else:
            emit("verified: true")
            for row in record["matrix"]:
                emit("[%s]" % ", ".join(row))
        return 0

    raise DomainError("unknown forms action %r" % (args.action,))


# ---------------------------------------------------------------------------
# char


def _cmd_char(args, emit):
    flavor = weights.Flavor(args.flavor, args.n)
    try:
        hw = tuple(int(v) for v in args.hw.split(","))
    except ValueError:
        raise DomainError("--hw must be a comma-separated integer list") from None
    char = weights.weyl_character(hw, flavor)
    mass = weights.character_mass(char)
    dim = weights.weyl_dim(hw, flavor)
    triangular = weights.check_triangularity(hw, flavor)
    if args.format == "records":
        emit(_json_line(weights.char_record(char, args.n)))
        emit(_json_line({"dim": dim, "mass": mass, "triangular": triangular}))
    else:
        emit("dim=%d mass=%d triangular=%s" % (dim, mass, str(triangular).lower()))
        for weight, mult in sorted(char.items()):
            emit("weight (%s): %d" % (", ".join(str(v) for v in weight), mult))
    return 0 if mass == dim and triangular else 1


# ---------------------------------------------------------------------------
# entry point


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    lines = []
    emit = lines.append
    handlers = {
        "poly": _cmd_poly,
        "check": _cmd_check,
        "forms": _cmd_forms,
        "char": _cmd_char,
    }
    try:
        code = handlers[args.command](args, emit)
    except DomainError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
