"""Command-line front end.

Exit status: 0 on success, an unrefuted check or a found proof; 1 on a
refutation, a failed check or a search that found nothing; 2 on usage,
parse or file errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional

from . import lemmas
from .rewrite import (
    CheckError, ScriptError, Statement, check, format_script, search,
)
from .semantics import (
    Interpretation, OracleConfig, Verdict, evaluate, format_interpretation,
    gen_interpretations, leq_bounded, equiv_bounded, parse_interpretation,
)
from .syntax import (
    Expr, Family, ParseError, VarId, check_family, free_vars, parse, size, to_text,
)
from .transform import (
    TestSet, comb, interone, nf, phi_top, phi_top_pair, positive,
    reduce as reduce_tests, reduce_to_onefree, test_leq, up,
)
from .transform.normal import DEFAULT_MAX_ITEMS, NFBudgetError

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# output


class Out:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self.records = []

    def line(self, text: str = ""):
        if self.fmt == "lines":
            self.stream.write(text + "\n")

    def record(self, **fields):
        self.records.append(fields)

    def flush(self):
        if self.fmt == "json-like":
            payload = self.records[0] if len(self.records) == 1 else self.records
            self.stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# helpers


def _expr(text: str, family: Family = Family.FULL, allow_top: bool = False) -> Expr:
    e = parse(text, allow_top=allow_top)
    if not allow_top and not check_family(e, family):
        raise UsageError(f"{text!r} is outside the {family.value} family")
    return e


def _varset(text: str) -> TestSet:
    names = [t.strip() for t in text.replace("{", "").replace("}", "").split(",")]
    return TestSet(VarId(n) for n in names if n)


def _config(a) -> OracleConfig:
    return OracleConfig(alphabet_size=a.alphabet, bound=a.bound, words_per_var=a.words_per_var,
                        trials=a.trials, seed=a.seed, epsilon_free=a.eps_free, slack=a.slack)


def _interp(a) -> Optional[Interpretation]:
    if not getattr(a, "interp", None):
        return None
    path = Path(a.interp)
    if not path.is_file():
        raise FileNotFoundError(f"interpretation file not found: {a.interp}")
    return parse_interpretation(path.read_text())


def _single(e, f, sigma, direction):
    from .semantics import CounterExample
    le, lf = evaluate(e, sigma), evaluate(f, sigma)
    diff = le - lf if direction == "<=" else lf - le
    if not diff:
        return None
    return CounterExample(sigma, min(diff, key=lambda u: (len(u), u)), direction)


def _verdict_fixed(e, f, sigma, equiv: bool) -> Verdict:
    cex = _single(e, f, sigma, "<=")
    if cex is None and equiv:
        cex = _single(e, f, sigma, ">=")
    return Verdict(cex)


def _show_cex(out: Out, verdict: Verdict):
    cex = verdict.counterexample
    out.line(f"witness: {cex.witness or '_'}  ({'in lhs only' if cex.direction == '<=' else 'in rhs only'})")
    for ln in format_interpretation(cex.sigma).splitlines():
        out.line("  " + ln)


def _resolve_proof(path: str) -> Path:
    p = Path(path)
    if p.is_file():
        return p
    shipped = lemmas.PROOF_DIR / path
    if shipped.is_file():
        return shipped
    raise FileNotFoundError(f"proof file not found: {path}")


# ---------------------------------------------------------------------------
# commands


def cmd_parse(a, out):
    e = parse(a.expr, allow_top=a.allow_top)
    fams = [f.value for f in (Family.SIMPLE, Family.ONE_FREE, Family.FULL) if check_family(e, f)]
    family = fams[0] if fams else "top"
    out.line(to_text(e))
    out.line(f"family: {family}")
    out.line(f"size: {size(e)}")
    out.record(expr=to_text(e), family=family, size=size(e), tree=repr(e))
    return OK


def cmd_eval(a, out):
    e = _expr(a.expr)
    sigma = _interp(a)
    if sigma is None:
        cfg = _config(a)
        cfg = dataclasses.replace(cfg, exhaustive=False, trials=1)
        sigma = next(gen_interpretations(free_vars(e), cfg))
    words = sorted(evaluate(e, sigma), key=lambda u: (len(u), u))
    out.line(format_interpretation(sigma, inline=True))
    out.line("{ " + ", ".join(u or "_" for u in words) + " }")
    out.record(interpretation=format_interpretation(sigma, inline=True), language=words)
    return OK


def _compare(a, out, equiv: bool, verbose: bool):
    e, f = _expr(a.lhs), _expr(a.rhs)
    sigma = _interp(a)
    if sigma is not None:
        verdict = _verdict_fixed(e, f, sigma, equiv)
    elif equiv:
        verdict = equiv_bounded(e, f, _config(a))
    else:
        verdict = leq_bounded(e, f, _config(a))
    rel = "==" if equiv else "<="
    out.line(f"{to_text(e)} {rel} {to_text(f)} : {'REFUTED' if verdict.refuted else 'UNREFUTED'}")
    rec = dict(lhs=to_text(e), rhs=to_text(f), relation=rel,
               verdict="refuted" if verdict.refuted else "unrefuted")
    if verdict.refuted:
        if verbose:
            _show_cex(out, verdict)
        else:
            out.line(verdict.counterexample.describe())
        cex = verdict.counterexample
        rec.update(witness=cex.witness, side=cex.direction,
                   interpretation=format_interpretation(cex.sigma, inline=True))
    out.record(**rec)
    return FAIL if verdict.refuted else OK


def cmd_check_equiv(a, out):
    return _compare(a, out, equiv=not a.leq, verbose=False)


def cmd_refute(a, out):
    return _compare(a, out, equiv=not a.leq, verbose=True)


def cmd_nf(a, out):
    e = _expr(a.expr)
    form = nf(e, a.max_items)
    items = [str(i) for i in form]
    for s in items:
        out.line(s)
    if not items:
        out.line("0")
    out.record(expr=to_text(e), items=items)
    return OK


def cmd_tests(a, out):
    e = _expr(a.expr)
    cs = sorted(interone(e))
    for c in cs:
        out.line(str(c))
    rec = dict(expr=to_text(e), interone=[[str(v) for v in c] for c in cs])
    status = OK
    if a.below is not None:
        A = _varset(a.below)
        holds = test_leq(A, e)
        out.line(f"<{A}> <= {to_text(e)} : DECIDED {str(holds).lower()}")
        rec["decided"] = holds
        status = OK if holds else FAIL
    out.record(**rec)
    return status


def _statement(text: str) -> Statement:
    try:
        return Statement.parse(text)
    except ParseError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_derive(a, out):
    s = _statement(a.statement)
    d = search(s, depth=a.depth, size_cap=a.size_cap, conditional=a.conditional)
    if d is None:
        out.line(f"NOT FOUND: {s} (depth {a.depth}, size cap {a.size_cap})")
        out.record(statement=str(s), found=False)
        return FAIL
    out.line(f"; {s}")
    out.line(format_script(d))
    out.record(statement=str(s), found=True, script=format_script(d))
    return OK


def cmd_check_proof(a, out):
    path = _resolve_proof(a.file)
    try:
        header, d = lemmas.read_script(path)
    except ScriptError as exc:
        raise UsageError(f"{path}: {exc}") from None
    s = _statement(a.statement) if a.statement else header
    if s is None:
        raise UsageError("no statement given and none in the script header")
    report = check(d, s)
    out.line(f"{s} : {report}")
    out.record(statement=str(s), ok=report.ok, address=report.address, reason=report.reason)
    return OK if report.ok else FAIL


def cmd_mirror_elim(a, out):
    e = _expr(a.expr, Family.ONE_FREE)
    c = comb(e)
    u = up(c)
    out.line(f"clean: {to_text(c)}")
    out.line(f"directed: {to_text(u)}")
    out.record(expr=to_text(e), clean=to_text(c), directed=to_text(u))
    return OK


def cmd_reduce(a, out):
    A = _varset(a.tests)
    f = _expr(a.expr)
    r = reduce_tests(A, f)
    out.line(to_text(r))
    out.record(tests=[str(v) for v in A], expr=to_text(f), reduced=to_text(r))
    return OK


def cmd_positive(a, out):
    f = _expr(a.expr)
    p = positive(f, a.max_items)
    out.line(to_text(p))
    out.record(expr=to_text(f), positive=to_text(p))
    return OK


def cmd_pipeline(a, out):
    e, f = _expr(a.lhs), _expr(a.rhs)
    cfg = None if a.no_oracle else _config(a)
    obs = reduce_to_onefree(e, f, cfg, a.max_items)
    for o in obs:
        out.line(o.line())
    ok = all(o.ok for o in obs)
    out.record(lhs=to_text(e), rhs=to_text(f), obligations=[o.record() for o in obs],
               discharged=ok)
    return OK if ok else FAIL


def cmd_top_elim(a, out):
    e = parse(a.lhs, allow_top=True)
    if a.rhs is None:
        t = phi_top(e)
        out.line(to_text(t))
        out.record(expr=a.lhs, translated=to_text(t))
        return OK
    f = parse(a.rhs, allow_top=True)
    te, tf = phi_top_pair(e, f)
    verdict = leq_bounded(te, tf, _config(a))
    out.line(f"{to_text(te)} <= {to_text(tf)} : {'REFUTED' if verdict.refuted else 'UNREFUTED'}")
    rec = dict(lhs=to_text(te), rhs=to_text(tf),
               verdict="refuted" if verdict.refuted else "unrefuted")
    if verdict.refuted:
        _show_cex(out, verdict)
        rec.update(witness=verdict.counterexample.witness,
                   interpretation=format_interpretation(verdict.counterexample.sigma, inline=True))
    out.record(**rec)
    return FAIL if verdict.refuted else OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("oracle")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--bound", type=int, default=6, help="length bound L")
    g.add_argument("--alphabet", type=int, default=2, help="alphabet size")
    g.add_argument("--words-per-var", type=int, default=4)
    g.add_argument("--trials", type=int, default=200)
    g.add_argument("--eps-free", action="store_true", help="never assign the empty word")
    g.add_argument("--slack", type=int, default=3)
    g.add_argument("--interp", metavar="FILE", help="use this interpretation instead of sampling")
    common.add_argument("--format", choices=("lines", "json-like"), default="lines")

    p = _Parser(prog="rklat", description="Reversible Kleene lattice toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("parse", cmd_parse, "parse and pretty-print an expression")
    sp.add_argument("expr")
    sp.add_argument("--allow-top", action="store_true")

    sp = add("eval", cmd_eval, "evaluate under an interpretation")
    sp.add_argument("expr")

    for name, fn, what in (("check-equiv", cmd_check_equiv, "bounded equivalence check"),
                           ("refute", cmd_refute, "search for a counterexample")):
        sp = add(name, fn, what)
        sp.add_argument("lhs")
        sp.add_argument("rhs")
        sp.add_argument("--leq", action="store_true", help="check lhs <= rhs only")

    sp = add("nf", cmd_nf, "normal form")
    sp.add_argument("expr")
    sp.add_argument("--max-items", type=int, default=DEFAULT_MAX_ITEMS)

    sp = add("tests", cmd_tests, "decompose 1 & e into tests")
    sp.add_argument("expr")
    sp.add_argument("--below", metavar="A", help="decide <A> <= expr, A as x,y,...")

    sp = add("derive", cmd_derive, "search for a derivation")
    sp.add_argument("statement", help='"lhs == rhs" or "lhs <= rhs"')
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--size-cap", type=int, default=40)
    sp.add_argument("--conditional", action="store_true", help="also use the induction rules")

    sp = add("check-proof", cmd_check_proof, "check a derivation script")
    sp.add_argument("file")
    sp.add_argument("statement", nargs="?")

    sp = add("mirror-elim", cmd_mirror_elim, "push mirrors to variables, then direct them")
    sp.add_argument("expr")

    sp = add("reduce", cmd_reduce, "replace tested variables a by 1 + a")
    sp.add_argument("tests", help="x,y,...")
    sp.add_argument("expr")

    sp = add("positive", cmd_positive, "largest one-free lower bound")
    sp.add_argument("expr")
    sp.add_argument("--max-items", type=int, default=DEFAULT_MAX_ITEMS)

    sp = add("pipeline", cmd_pipeline, "split lhs <= rhs into obligations")
    sp.add_argument("lhs")
    sp.add_argument("rhs")
    sp.add_argument("--max-items", type=int, default=DEFAULT_MAX_ITEMS)
    sp.add_argument("--no-oracle", action="store_true")

    sp = add("top-elim", cmd_top_elim, "eliminate top; with two expressions, check lhs <= rhs")
    sp.add_argument("lhs")
    sp.add_argument("rhs", nargs="?")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"rklat: {exc}\n")
        return USAGE
    except SystemExit as exc:  # --help
        return OK if exc.code in (0, None) else USAGE
    out = Out(a.format, stdout)
    try:
        status = a.func(a, out)
    except (ParseError, UsageError, ScriptError, NFBudgetError) as exc:
        stderr.write(f"rklat: {exc}\n")
        return USAGE
    except FileNotFoundError as exc:
        stderr.write(f"rklat: {exc}\n")
        return USAGE
    except CheckError as exc:
        stderr.write(f"rklat: {exc}\n")
        return FAIL
    except ValueError as exc:
        stderr.write(f"rklat: {exc}\n")
        return USAGE
    out.flush()
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
