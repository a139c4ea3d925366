"""Command line front end: ``divfree <command> [options]``.

Exit codes: 0 success / isomorphic, 1 not isomorphic or a failed check,
2 unknown, 3 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import qq
from .algebra import AlgebraParams, DerivationVector
from .errors import DivFreeError, ExpressionSyntaxError
from .expr import format_element, parse, parse_witt

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3


class UsageError(DivFreeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # Added both to the top-level parser and to every subcommand so the flags
    # may appear on either side of the command name.
    default = argparse.SUPPRESS if suppress else None
    p = _Parser(add_help=False)
    p.add_argument("--params", default=argparse.SUPPRESS if suppress else "0,0,3", help="l1,l2,l3 (default 0,0,3)")
    p.add_argument("--rho", default=default, help='rho as "a,b,..." (raw coordinates)')
    p.add_argument("--gamma-gens", default=default, metavar="FILE", help="JSON list of Gamma generators")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0)
    return p


def _load_params(shape_text, rho_text, gamma_file) -> AlgebraParams:
    try:
        l1, l2, l3 = (int(x) for x in shape_text.split(","))
    except ValueError:
        raise UsageError(f"--params needs three integers, got {shape_text!r}") from None
    gamma = None
    if gamma_file:
        from .serialize import lattice_from_json

        try:
            with open(gamma_file) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {gamma_file}: {exc}") from None
        gamma = lattice_from_json(data, dim=l2 + l3)
    rho = qq.parse_qvec(rho_text) if rho_text else None
    return AlgebraParams.make(l1, l2, l3, gamma, rho)


def _params(args) -> AlgebraParams:
    return _load_params(args.params, args.rho, args.gamma_gens)


def _params2(args) -> AlgebraParams:
    return _load_params(args.params2 or args.params, args.rho2, args.gamma_gens2)


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _element_payload(u):
    from .serialize import element_to_json

    return element_to_json(u)


def _ivec(text: str) -> tuple:
    text = text.strip()
    return tuple(int(x) for x in text.split(",")) if text else ()


# ---------------------------------------------------------------- commands


def cmd_bracket(args) -> int:
    from .witt import bracket

    params = _params(args)
    w = bracket(parse_witt(args.u, params), parse_witt(args.v, params))
    _emit(args, format_element(w), _element_payload(w))
    return EXIT_OK


def cmd_div(args) -> int:
    from .witt import divergence

    params = _params(args)
    w = divergence(parse_witt(args.u, params))
    _emit(args, format_element(w), _element_payload(w))
    return EXIT_OK


def cmd_in_s(args) -> int:
    from .witt import is_in_S

    ok = is_in_S(parse_witt(args.u, _params(args)))
    _emit(args, "true" if ok else "false", {"in_s": ok})
    return EXIT_OK if ok else EXIT_NO


def cmd_dpq(args) -> int:
    from .expr import parse_algebra
    from .witt import dpq

    params = _params(args)
    w = dpq(args.p, args.q, parse_algebra(args.u, params))
    _emit(args, format_element(w), _element_payload(w))
    return EXIT_OK


def cmd_grade(args) -> int:
    from .witt import grade_decompose

    parts = grade_decompose(parse_witt(args.u, _params(args)))
    lines = [f"[{','.join(map(qq.fmt_q, a))}] {format_element(p)}" for a, p in parts.items()]
    payload = [{"alpha": [qq.fmt_q(x) for x in a], "part": _element_payload(p)} for a, p in parts.items()]
    _emit(args, "\n".join(lines) if lines else "0", payload)
    return EXIT_OK


def cmd_lead(args) -> int:
    from .filtration import leading_term

    lt = leading_term(parse_witt(args.u, _params(args)), qq.parse_qvec(args.alpha) if args.alpha else ())
    coeffs = [qq.fmt_q(c) for c in lt.direction.coeffs]
    _emit(
        args,
        f"degree ({','.join(map(str, lt.degree))}) level {lt.level} direction ({','.join(coeffs)})",
        {"degree": list(lt.degree), "level": lt.level, "direction": coeffs},
    )
    return EXIT_OK


def cmd_build_lead(args) -> int:
    from .filtration import build_with_leading_term

    params = _params(args)
    alpha = qq.parse_qvec(args.alpha) if args.alpha else qq.zeros(params.n)
    d = DerivationVector(qq.parse_qvec(args.d))
    w = build_with_leading_term(params, alpha, _ivec(args.ivec), d)
    _emit(args, format_element(w), _element_payload(w))
    return EXIT_OK


def cmd_psi(args) -> int:
    from .morphisms import psi_map

    params = _params(args)
    shifts = [qq.parse_qvec(s) for s in args.shifts.split(";")] if args.shifts else []
    w = psi_map(params, shifts, parse_witt(args.u, params))
    payload = _element_payload(w)
    payload["rho"] = [qq.fmt_q(x) for x in w.params.rho]
    _emit(args, format_element(w), payload)
    return EXIT_OK


def cmd_derive_check(args) -> int:
    from .morphisms import AdditiveCharacter, is_derivation_on, make_derivation
    from .sampling import random_s_element, rng_for

    params = _params(args)
    u = parse_witt(args.u, params) if args.u else None
    mu = AdditiveCharacter(params.gamma, qq.parse_qvec(args.mu)) if args.mu else None
    handle = make_derivation(args.kind, params, u, mu)
    rng = rng_for(args.seed, "derive-check")
    pairs = [(random_s_element(params, rng), random_s_element(params, rng)) for _ in range(args.pairs)]
    ok = is_derivation_on(handle, pairs)
    _emit(args, f"{'derivation' if ok else 'not a derivation'} on {len(pairs)} pairs", {"ok": ok, "pairs": len(pairs)})
    return EXIT_OK if ok else EXIT_NO


def cmd_nilprobe(args) -> int:
    from .morphisms import local_finiteness_probe, nilpotency_probe

    params = _params(args)
    u, v = parse_witt(args.u, params), parse_witt(args.v, params)
    nil = nilpotency_probe(u, v, args.max_n)
    fin = local_finiteness_probe(u, v, args.max_n)
    _emit(
        args,
        f"{nil}\nlocal finiteness: {fin}",
        {"nilpotency": {"status": nil.status, "n": nil.n}, "local_finiteness": {"status": fin.status, "dim": fin.n}},
    )
    return EXIT_OK


def cmd_iso_verify(args) -> int:
    from .classify import verify_witness
    from .serialize import group_from_json, group_to_json

    params, params2 = _params(args), _params2(args)
    if args.witness:
        try:
            with open(args.witness) as fh:
                g = group_from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.witness}: {exc}") from None
    else:
        from .lattice import GroupElement

        g = GroupElement.identity(params.l2, params.l3)
    ok = verify_witness(params, params2, g)
    _emit(args, "valid witness" if ok else "not a witness", {"valid": ok, "witness": group_to_json(g)})
    return EXIT_OK if ok else EXIT_NO


def cmd_iso_search(args) -> int:
    from .classify import search_witness
    from .serialize import verdict_to_json

    verdict = search_witness(_params(args), _params2(args), args.bound)
    lines = [verdict.status]
    if verdict.witness is not None:
        lines.append("g = " + json.dumps([[qq.fmt_q(x) for x in r] for r in verdict.witness.matrix()]))
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    _emit(args, "\n".join(lines), verdict_to_json(verdict))
    return verdict.exit_code


def cmd_descriptor(args) -> int:
    from .classify import structure_descriptor

    desc = structure_descriptor(_params(args)).to_json()
    _emit(args, json.dumps(desc, sort_keys=True), desc)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import parse_selection, run_acceptance

    selection = parse_selection(args.criteria)
    results = run_acceptance(args.seed, selection, report=None)
    if args.json:
        print(json.dumps([r.__dict__ for r in results], sort_keys=True))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.number:>2}  {r.name:<32} {r.detail}")
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NO


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = _Parser(prog="divfree", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("bracket", cmd_bracket, "Lie bracket of two elements of W")
    p.add_argument("u")
    p.add_argument("v")
    add("div", cmd_div, "divergence of an element of W").add_argument("u")
    add("in-s", cmd_in_s, "membership in S (exit 1 when not)").add_argument("u")
    p = add("dpq", cmd_dpq, "divergence-free generator D_{p,q}(u) of an algebra element")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("u")
    add("grade", cmd_grade, "split an element into Gamma-homogeneous parts").add_argument("u")
    p = add("lead", cmd_lead, "leading term of the alpha-part")
    p.add_argument("u")
    p.add_argument("--alpha", default="", help="Gamma-degree (default 0)")
    p = add("build-lead", cmd_build_lead, "element of S_alpha with a prescribed leading term")
    p.add_argument("--alpha", default="")
    p.add_argument("--ivec", default="", help='t-exponents "i1,i2,..."')
    p.add_argument("--d", required=True, help='derivation coefficients "a1,...,al"')
    p = add("psi", cmd_psi, "apply the rho-moving twist")
    p.add_argument("u")
    p.add_argument("--shifts", required=True, help='l1 vectors separated by ";"')
    p = add("derive-check", cmd_derive_check, "Leibniz check of a derivation on random pairs")
    p.add_argument("--kind", required=True, choices=["inner", "outer_w_rho0", "character", "combined"])
    p.add_argument("--u", default=None)
    p.add_argument("--mu", default=None, help="character values on the Gamma basis")
    p.add_argument("--pairs", type=int, default=50)
    p = add("nilprobe", cmd_nilprobe, "iterate ad u on v")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--max-n", type=int, default=10)
    for name, fn, help_text in (
        ("iso-verify", cmd_iso_verify, "check a witness g between two algebras"),
        ("iso-search", cmd_iso_search, "bounded search for a witness"),
    ):
        p = add(name, fn, help_text)
        p.add_argument("--params2", default=None, help="second shape (default: same)")
        p.add_argument("--rho2", default=None)
        p.add_argument("--gamma-gens2", default=None, metavar="FILE")
        if name == "iso-verify":
            p.add_argument("--witness", default=None, metavar="FILE", help="group element JSON (default identity)")
        else:
            p.add_argument("--bound", type=int, default=3)
    add("descriptor", cmd_descriptor, "shape, Gamma basis and rho of the algebra")
    p = add("selftest", cmd_selftest, "run the acceptance suite")
    p.add_argument("--criteria", default=None, help='subset such as "1-10" or "2,5"')
    return parser


def _error_payload(exc: Exception) -> dict:
    out = {"type": type(exc).__name__, "message": getattr(exc, "message", None) or (str(exc.args[0]) if exc.args else str(exc))}
    if isinstance(exc, ExpressionSyntaxError):
        out["line"], out["column"] = exc.line, exc.column
    return out


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (DivFreeError, ValueError, ZeroDivisionError) as exc:
        err = _error_payload(exc)
        if as_json:
            print(json.dumps({"error": err}, sort_keys=True))
        else:
            where = f" (line {err['line']}, column {err['column']})" if "line" in err else ""
            print(f"error: {err['type']}: {err['message']}{where}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # never show a traceback
        err = {"type": "InternalError", "message": f"{type(exc).__name__}: {exc}"}
        if as_json:
            print(json.dumps({"error": err}, sort_keys=True))
        else:
            print(f"error: {err['type']}: {err['message']}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
