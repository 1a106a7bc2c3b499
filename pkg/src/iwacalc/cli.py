"""Command-line interface.

    iwacalc <command> INPUT [--precision N] [--seed N] [--format text|json]
                            [--out PATH]

Commands: adapted-basis, kerim-check, coinv, char, twovar-char,
classify-nonsplit, classify-lambda2, cross-validate.  Input files use the
sectioned key/value grammar of iwacalc.fileio (or the JSON equivalent);
sample files live under sample_inputs/.

The default precision (pi-units) comes from --precision, else the
IWACALC_PRECISION environment variable, else 12*e.  Exit codes: 0 success,
2 violated mathematical precondition, 3 undetermined at the working
precision, 4 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

from . import __version__
from .classify import (HypothesisFlags, Lambda2Input, NonSplitInput,
                       cross_validate, dim_coinvariants_nonsplit,
                       is_cyclic_lambda2)
from .dvr import DvrSpec
from .errors import ParseError, PreconditionError, PrecisionError
from .fileio import Sections, parse_input_file
from .finabel import Endo, FinAbPGroup, Subgroup, adapted_generators, \
    check_kerim_free_case, check_kerim_identity, check_kerim_nilpotent
from .lambdamod import (ElementaryModule, LambdaPresentation,
                        coinvariant_order_from_char,
                        elementary_coinvariant_order, char_series)
from .series import DistPoly, TruncSeries, newton_polygon
from .twovar import (TwoVarModule, char_det, evaluate_00,
                     series_agree_up_to_unit, specialize_T)

ENV_PRECISION = "IWACALC_PRECISION"


# --- shared input helpers ----------------------------------------------------


def _ring_from(sections: Sections, precision: Optional[int]) -> Tuple[DvrSpec, int]:
    p = sections.get_int("ring", "p", required=True)
    e = sections.get_int("ring", "e", default=1)
    f = sections.get_int("ring", "f", default=1)
    poly = sections.get_int_list("ring", "poly")
    spec = DvrSpec(p, e, f, tuple(poly) if poly else None)
    prec = precision if precision is not None else spec.default_precision
    return spec, prec


def _elem(spec: DvrSpec, n: int, prec: int):
    """Ring element from an input integer.

    A literal 0 is structurally zero (exact); any other integer is an
    approximation known modulo pi^prec, per the --precision contract.
    """
    if n == 0:
        return spec.zero(prec)
    coords = (n,) if spec.degree == 1 else (n, 0)
    return spec.elem(coords, prec, exact=False)


def _series(spec: DvrSpec, ints: List[int], order: int, prec: int) -> TruncSeries:
    return TruncSeries(spec, [_elem(spec, n, prec) for n in ints], order, prec=prec)


def _porder_dict(o) -> dict:
    return {"p": o.p, "exponent": o.exponent, "is_lower_bound": o.is_lower_bound,
            "display": repr(o)}


# --- commands ----------------------------------------------------------------


def cmd_adapted_basis(sections: Sections, args) -> dict:
    p = sections.get_int("group", "p", required=True)
    exps = sections.get_int_list("group", "exponents", required=True)
    G = FinAbPGroup(p, tuple(exps))
    gens = sections.get_all_int_lists("subgroup", "gen")
    H = Subgroup(G, tuple(tuple(g) for g in gens))
    out = adapted_generators(G, H)
    return {
        "group": {"p": p, "exponents": list(exps)},
        "subgroup_order": H.order(),
        "generators": [list(x) for x in out.generators],
        "quotient_exponent": out.quotient_exponent,
        "degenerate": out.degenerate,
        "quotient_map": list(out.quotient_map) if out.quotient_map else None,
    }


def cmd_kerim_check(sections: Sections, args) -> dict:
    p = sections.get_int("group", "p", required=True)
    exps = sections.get_int_list("group", "exponents", required=True)
    G = FinAbPGroup(p, tuple(exps))
    rows = sections.get_all_int_lists("endo", "row")
    beta = Endo(G, tuple(tuple(r) for r in rows))
    gens = sections.get_all_int_lists("subgroup", "gen")
    L = Subgroup(G, tuple(tuple(g) for g in gens))
    variant = sections.get("check", "variant", default="identity")
    if variant == "identity":
        lhs, rhs = check_kerim_identity(G, beta, L)
    elif variant == "nilpotent":
        n = sections.get_int("check", "n", required=True)
        lhs, rhs = check_kerim_nilpotent(G, beta, L, n)
    elif variant == "free":
        lhs, rhs = check_kerim_free_case(G, beta, L)
    else:
        raise ParseError(f"unknown check variant {variant!r}")
    return {"variant": variant, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def _parse_factor(spec: DvrSpec, raw: str, prec: int):
    body, _, power = raw.partition("^")
    n = int(power.strip()) if power.strip() else 1
    toks = body.replace(",", " ").split()
    if toks == ["pi"]:
        return ("pi", n)
    try:
        ints = [int(t) for t in toks]
    except ValueError:
        raise ParseError(f"bad factor {raw!r}: expected 'pi' or integer coefficients")
    if not ints or ints[-1] != 1:
        raise ParseError(f"bad factor {raw!r}: polynomial factors must be monic "
                         "(trailing coefficient 1)")
    coeffs = [_elem(spec, v, prec) for v in ints[:-1]] + [spec.one(prec)]
    return (DistPoly(spec, coeffs, prec=prec), n)


def cmd_coinv(sections: Sections, args) -> dict:
    spec, prec = _ring_from(sections, args.precision)
    raw_factors = sections.get_all("module", "factor")
    if not raw_factors:
        raise ParseError("section [module] needs at least one 'factor ='")
    E = ElementaryModule(spec, [_parse_factor(spec, r, prec) for r in raw_factors])
    order = elementary_coinvariant_order(E)
    result = {"ring": spec.ring_name(), "precision": prec, "order": _porder_dict(order)}
    # second route through the characteristic series when no factor equals S
    try:
        s_order = max(8, 2 + sum(
            (b.degree if isinstance(b, DistPoly) else 0) * n for b, n in E.factors))
        via_char = coinvariant_order_from_char(E.product_series(s_order, prec))
        result["order_via_char"] = _porder_dict(via_char)
        result["routes_agree"] = via_char == order
    except (PreconditionError, PrecisionError) as exc:
        result["order_via_char"] = None
        result["routes_agree"] = None
        result["char_route_note"] = str(exc)
    return result


def cmd_char(sections: Sections, args) -> dict:
    spec, prec = _ring_from(sections, args.precision)
    size = sections.get_int("presentation", "size", required=True)
    s_order = sections.get_int("presentation", "order", default=12)
    entries = sections.get_all_int_lists("presentation", "entry")
    if len(entries) != size * size:
        raise ParseError(
            f"[presentation] needs size^2 = {size * size} entries, got {len(entries)}"
        )
    mat = tuple(
        tuple(_series(spec, entries[i * size + j], s_order, prec)
              for j in range(size))
        for i in range(size)
    )
    mu, F = char_series(LambdaPresentation(spec, mat))
    out = {
        "ring": spec.ring_name(),
        "precision": prec,
        "mu": mu,
        "degree": F.degree,
        "coefficients": [list(c.reduced_coords()) for c in F.coeffs],
    }
    if F.degree > 0:
        out["newton_slopes"] = [[str(Fraction(s)), m] for s, m in newton_polygon(F)]
    return out


def cmd_twovar_char(sections: Sections, args) -> dict:
    spec, prec = _ring_from(sections, args.precision)
    size = sections.get_int("s_action", "size", required=True)
    t_order = sections.get_int("s_action", "t_order", default=6)
    entries = sections.get_all_int_lists("s_action", "entry")
    if len(entries) != size * size:
        raise ParseError(
            f"[s_action] needs size^2 = {size * size} entries, got {len(entries)}"
        )
    mat = tuple(
        tuple(_series(spec, entries[i * size + j], t_order, prec)
              for j in range(size))
        for i in range(size)
    )
    f = char_det(TwoVarModule(spec, mat))
    fz = specialize_T(f, 0)
    out = {
        "ring": spec.ring_name(),
        "precision": prec,
        "s_degree": f.degree,
        "t_order": f.t_order(),
        "specialized_coefficients": [list(c.reduced_coords()) for c in fz.coeffs],
    }
    fstar = sections.get_int_list("compare", "fstar")
    if fstar is not None:
        target = _series(spec, fstar, max(len(fstar), fz.order), prec)
        out["specialization_matches_fstar"] = series_agree_up_to_unit(fz, target)
    try:
        out["order_at_origin"] = _porder_dict(evaluate_00(f))
    except (PreconditionError, PrecisionError) as exc:
        out["order_at_origin"] = None
        out["order_at_origin_note"] = str(exc)
    return out


def cmd_classify_nonsplit(sections: Sections, args) -> dict:
    inp = NonSplitInput(
        g=sections.get_int("invariants", "g", required=True),
        lam=sections.get_int("invariants", "lambda", default=0),
        m=sections.get_int("invariants", "m", required=True),
        lk_in_ktilde=sections.get_bool("invariants", "lk_in_ktilde", default=False),
    )
    rep = dim_coinvariants_nonsplit(inp)
    return {
        "input": {"g": inp.g, "lambda": inp.lam, "m": inp.m,
                  "lk_in_ktilde": inp.lk_in_ktilde},
        "dimension": rep.exact,
        "bounds": list(rep.bounds) if rep.bounds else None,
        "case": rep.case,
    }


def _opt_valuation(sections: Sections, key: str) -> Optional[int]:
    raw = sections.get("profile", key)
    if raw is None or raw.strip().lower() == "none":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"key {key!r} in [profile]: expected an integer or 'none'")


def cmd_classify_lambda2(sections: Sections, args) -> dict:
    flags = HypothesisFlags(
        g_is_2=sections.get_bool("hypotheses", "g_is_2", default=True),
        direct_summand=sections.get_bool("hypotheses", "direct_summand", default=True),
        lambda_is_2=sections.get_bool("hypotheses", "lambda_is_2", default=True),
        alpha_ne_beta=sections.get_bool("hypotheses", "alpha_ne_beta", default=True),
    )
    inp = Lambda2Input(
        p=sections.get_int("profile", "p", required=True),
        e=sections.get_int("profile", "e", default=1),
        k=sections.get_int("profile", "k", required=True),
        ord_alpha=sections.get_int("profile", "ord_alpha", required=True),
        ord_beta=sections.get_int("profile", "ord_beta", required=True),
        ord_gap=sections.get_int("profile", "ord_gap", required=True),
        ord_mu21=_opt_valuation(sections, "ord_mu21"),
        ord_mu22=_opt_valuation(sections, "ord_mu22"),
        n1=sections.get_int("profile", "n1", required=True),
        n2=sections.get_int("profile", "n2", required=True),
        hypotheses=flags,
    )
    v = is_cyclic_lambda2(inp)
    return {
        "verdict": v.kind,
        "matched_case": v.matched_case,
        "reason": v.reason,
    }


def cmd_cross_validate(sections: Optional[Sections], args) -> dict:
    kwargs = {}
    if sections is not None:
        ps = sections.get_int_list("ranges", "p")
        if ps:
            kwargs["p_values"] = tuple(ps)
        for key in ("ord_max", "k_max", "coord_val_max", "workers"):
            v = sections.get_int("ranges", key)
            if v is not None:
                kwargs[key] = v
    report = cross_validate(seed=args.seed or 0, precision=args.precision, **kwargs)
    return report.to_dict()


COMMANDS = {
    "adapted-basis": (cmd_adapted_basis, True),
    "kerim-check": (cmd_kerim_check, True),
    "coinv": (cmd_coinv, True),
    "char": (cmd_char, True),
    "twovar-char": (cmd_twovar_char, True),
    "classify-nonsplit": (cmd_classify_nonsplit, True),
    "classify-lambda2": (cmd_classify_lambda2, True),
    "cross-validate": (cmd_cross_validate, False),
}


# --- output ------------------------------------------------------------------


def _render_text(payload: dict) -> str:
    lines: List[str] = []

    def emit(prefix: str, value):
        if isinstance(value, dict):
            for k in sorted(value):
                emit(f"{prefix}.{k}" if prefix else k, value[k])
        elif isinstance(value, list):
            if not value:
                lines.append(f"{prefix} = []")
            for i, v in enumerate(value):
                emit(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix} = {json.dumps(value)}")

    emit("", payload)
    return "\n".join(lines) + "\n"


def _write_output(payload: dict, args):
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _render_text(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iwacalc",
        description="Exact computation with torsion Iwasawa modules at finite precision.",
    )
    parser.add_argument("--version", action="version", version=f"iwacalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, needs_input) in COMMANDS.items():
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("input", help="input description file (text or JSON)")
        else:
            p.add_argument("input", nargs="?", default=None,
                           help="optional input description file")
        p.add_argument("--precision", type=int, default=None,
                       help=f"working precision in pi-units (default: ${ENV_PRECISION} or 12*e)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomized commands (default 0)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None, help="write output to a file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision is None:
        env = os.environ.get(ENV_PRECISION)
        if env is not None:
            try:
                args.precision = int(env)
            except ValueError:
                print(f"iwacalc: bad {ENV_PRECISION} value {env!r}", file=sys.stderr)
                return 4
    func, needs_input = COMMANDS[args.command]
    try:
        sections = parse_input_file(args.input) if args.input else None
        if needs_input and sections is None:
            raise ParseError("this command requires an input file")
        result = func(sections, args)
    except ParseError as exc:
        print(f"iwacalc: input error: {exc}", file=sys.stderr)
        return 4
    except PreconditionError as exc:
        print(f"iwacalc: precondition violated: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"iwacalc: undetermined at precision: {exc}", file=sys.stderr)
        return 3
    payload = {
        "command": args.command,
        "result": result,
        "provenance": {
            "version": __version__,
            "precision": args.precision,
            "seed": args.seed,
        },
    }
    payload["provenance"]["ring"] = result.get("ring") if isinstance(result, dict) else None
    if isinstance(result, dict) and result.get("precision") is not None:
        payload["provenance"]["precision"] = result["precision"]
    _write_output(payload, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
