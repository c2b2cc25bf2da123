"""Command-line entry points: check, run, frame, invert, verify.

Exit codes: 0 success, 1 type/check failure, 2 parse error, 3 verification
mismatch.
"""

import argparse
import json
import random
import sys

from . import encoding as en
from . import lambda_c as lc
from . import lambda_pc as lp
from . import oracle
from . import pauli as pl
from . import syntax

OK, CHECK_FAILED, PARSE_FAILED, MISMATCH = 0, 1, 2, 3

# exhaustive star-automorphism sweep up to this many pairs, sampled beyond
STAR_EXHAUSTIVE = 1 << 14
STAR_SAMPLES = 4000


class _Exit(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _load(args):
    try:
        return syntax.load(args.file, args.dim)
    except OSError as err:
        raise _Exit(PARSE_FAILED, f"error: cannot read {args.file}: {err.strerror}")


def _clifford(prog, text):
    fn = prog.clifford(text)
    lp.Checker(prog.ring, fn.name).check_fn(fn)
    return fn


def cmd_check(args, out):
    prog = _load(args)
    status = OK
    for name, state, conds, err in prog.check_all():
        if state == "error":
            status = CHECK_FAILED
            bad = [c for c in conds if not c.ok]
            detail = bad[0].describe() if bad else str(err)
            print(f"{name}: FAIL {detail}", file=out)
        elif state == "parametric":
            print(f"{name}: OK (parametric, checked at each use)", file=out)
        else:
            print(f"{name}: OK", file=out)
    return status


def cmd_run(args, out):
    prog = _load(args)
    if args.expr is None:
        if prog.surface.main is None:
            raise _Exit(CHECK_FAILED, "error: no expression given and no main definition")
        e, q = prog.main()
    else:
        e, q = prog.expr(args.expr)
    lp.typecheck(e, prog.ring)
    print(lp.render(lp.run(e, prog.ring), q), file=out)
    return OK


def cmd_frame(args, out):
    prog = _load(args)
    fn = _clifford(prog, args.name)
    frame = lp.compile_frame(fn, prog.ring)
    if args.json:
        print(json.dumps({"name": args.name, "d": prog.ring.d, "frame": frame.to_json()}), file=out)
    else:
        print(frame.render(), file=out)
    return OK


def cmd_invert(args, out):
    prog = _load(args)
    fn = _clifford(prog, args.name)
    e, q = prog.expr(args.expr, fn.cod)
    lp.typecheck(e, prog.ring)
    p = lp.run(e, prog.ring)
    print(lp.render(lp.apply_inverse(fn, p, prog.ring), fn.dom), file=out)
    return OK


def _battery(enc):
    """Internal checks for an encoding; returns {check: [failure, ...]}."""
    ring, n = enc.ring, enc.n
    report = {"symplectic": [str(v) for v in en.symplectic_violations(enc)]}
    elems = list(pl.all_elements(ring, n))
    if len(elems) ** 2 <= STAR_EXHAUSTIVE:
        pairs = [(a, b) for a in elems for b in elems]
    else:
        rng = random.Random(0)
        pairs = [(rng.choice(elems), rng.choice(elems)) for _ in range(STAR_SAMPLES)]
    star = []
    for a, b in pairs:
        lhs = en.evaluate(enc, pl.cprod(a, b))
        rhs = pl.cprod(en.evaluate(enc, a), en.evaluate(enc, b))
        if lhs != rhs:
            star.append(f"{pl.render(a)} * {pl.render(b)}: {pl.render(lhs)} != {pl.render(rhs)}")
    report["star-automorphism"] = star
    report["frame"] = en.frame_violations(en.to_frame(enc))
    return report


def cmd_verify(args, out):
    prog = _load(args)
    fn = _clifford(prog, args.name)
    ring = prog.ring
    enc = lp.to_encoding(fn, ring)
    if args.gate is not None or args.circuit is not None:
        if args.circuit is not None:
            u = oracle.build_circuit(ring, oracle.parse_circuit(args.circuit), enc.n)
            label = args.circuit
        else:
            arity, u, _ = oracle.gate(ring, args.gate)
            if arity != enc.n:
                raise _Exit(MISMATCH, f"error: gate {args.gate} acts on {arity} qudit(s), "
                                      f"{args.name} on {enc.n}")
            label = args.gate
        bad = oracle.verify_encoding(enc, u)
        failures = [f"{pl.render(p)} -> {pl.render(g)}, oracle {pl.render(w)}" for p, g, w in bad]
        report = {f"oracle {label}": failures}
    else:
        report = _battery(enc)
    status = MISMATCH if any(report.values()) else OK
    if args.json:
        print(json.dumps({"name": args.name, "d": ring.d, "ok": status == OK, "checks": report}), file=out)
    else:
        for check, failures in report.items():
            print(f"{check}: {'OK' if not failures else 'FAIL'}", file=out)
            for f in failures[:10]:
                print(f"  {f}", file=out)
            if len(failures) > 10:
                print(f"  ... {len(failures) - 10} more", file=out)
    return status


def build_parser():
    ap = argparse.ArgumentParser(prog="pclif", description="Typecheck and run projective Clifford programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="a .pc source file")
        p.add_argument("-d", "--dim", type=int, default=None, help="dimension if the file has no dim header")
        p.set_defaults(fn=fn)
        return p

    cmd("check", cmd_check, "typecheck every definition")
    p = cmd("run", cmd_run, "evaluate an expression (default: main)")
    p.add_argument("expr", nargs="?")
    p = cmd("frame", cmd_frame, "print the Pauli frame of a Clifford definition")
    p.add_argument("name")
    p.add_argument("--json", action="store_true")
    p = cmd("invert", cmd_invert, "apply the inverse of a Clifford to an expression")
    p.add_argument("name")
    p.add_argument("expr")
    p = cmd("verify", cmd_verify, "check an encoding against an oracle gate or the internal battery")
    p.add_argument("name")
    p.add_argument("gate", nargs="?", help="oracle gate name, e.g. H, CNOT, F")
    p.add_argument("--circuit", help="oracle circuit, e.g. 'X@0; CNOT@0,1' (0-based wires)")
    p.add_argument("--json", action="store_true")
    return ap


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except _Exit as err:
        print(err, file=sys.stderr)
        return err.code
    except syntax.ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return PARSE_FAILED
    except lp.SideConditionError as err:
        print(f"type error: {err.cond.describe()}", file=sys.stderr)
        return CHECK_FAILED
    except (lp.PTypeError, lc.CTypeError) as err:
        print(f"type error: {err}", file=sys.stderr)
        return CHECK_FAILED
    except (oracle.GateError, oracle.DecodeError) as err:
        print(f"verification error: {err}", file=sys.stderr)
        return MISMATCH


def main_exit():  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
