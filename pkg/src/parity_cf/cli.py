"""parity-cf: tables of parity-restricted best approximations.

Exit codes: 0 ok, 2 bad or rational input, 3 decimal precision exhausted,
4 disagreement between routes, 5 output could not be written.
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Callable, Optional

import click

from . import cfmaps, delta, oracle, parity_best
from .errors import (
    InputParseError, ParityCFError, PrecisionExhausted, RadicandMismatchError,
    RationalInputError,
)
from .exact_arith import INF, SYMBOLS, QuadraticSurd, Sym, floor_surd, moebius_apply
from .parity_best import PAIRS, Limit
from .rcf import DecimalInterval, RcfStream

EXIT_OK, EXIT_INPUT, EXIT_PRECISION, EXIT_MISMATCH, EXIT_IO = 0, 2, 3, 4, 5
SCHEMA_VERSION = 1


# -- input grammar ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<sqrt>sqrt)|(?P<op>[-+*/()]))")


class _Parser:
    """Recursive descent over + - * / ( ) integers and sqrt(<uint>)."""

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise InputParseError("unexpected character", text, pos + _lead(text, pos))
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise InputParseError(f"expected {value!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> QuadraticSurd:
        if not self.toks:
            raise InputParseError("empty input", self.text or " ", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise InputParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, pos = self.take()
            rhs = self.term()
            value = self.combine(pos, lambda: value + rhs if op == "+" else value - rhs)
        return value

    def combine(self, pos: int, fn):
        try:
            return fn()
        except RadicandMismatchError as exc:
            raise InputParseError(f"mixed radicands ({exc})", self.text, pos) from exc

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "/" and rhs == 0:
                raise InputParseError("division by zero", self.text, pos)
            value = self.combine(pos, lambda: value * rhs if op == "*" else value / rhs)
        return value

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            value = self.unary()
            return -value if op == "-" else value
        return self.atom()

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return QuadraticSurd(int(val))
        if kind == "sqrt":
            self.take()
            self.take("(")
            k, n, npos = self.peek()
            if k != "int":
                raise InputParseError("sqrt takes a non-negative integer", self.text, npos)
            self.take()
            self.take(")")
            return QuadraticSurd.sqrt(int(n))
        if val == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if kind == "end" else repr(val)
        raise InputParseError(f"unexpected {what}", self.text, pos)


def _lead(text: str, pos: int) -> int:
    return len(text[pos:]) - len(text[pos:].lstrip())


@dataclass(frozen=True)
class InputSpec:
    expression: str
    value: object  # QuadraticSurd or DecimalInterval

    @property
    def is_decimal(self) -> bool:
        return isinstance(self.value, DecimalInterval)

    def stream(self) -> RcfStream:
        return RcfStream(self.value)

    def surd(self) -> QuadraticSurd:
        if self.is_decimal:
            raise InputParseError(
                "this operation needs an exact surd, not a decimal", self.expression, 0)
        return self.value


def parse_input(text: str) -> InputSpec:
    """A quadratic-surd expression or a signed decimal literal."""
    if DecimalInterval.looks_like(text):
        d = DecimalInterval.parse(text)
        RcfStream(d)  # rejects decimals that certify nothing past a0
        return InputSpec(text.strip(), d)
    value = _Parser(text).parse()
    if value.is_rational():
        raise RationalInputError(f"rational input: {text.strip()} = {value.to_fraction()}")
    return InputSpec(text.strip(), value)


# -- rows ------------------------------------------------------------------------

MEMBERSHIP_COLUMNS = ("B0", "B1", "Binf", "B01", "B0inf", "B1inf")
_MEMBERSHIP_KEYS = dict(zip(MEMBERSHIP_COLUMNS, list(SYMBOLS) + list(PAIRS)))


@dataclass
class ReportRow:
    value: str
    p: int
    q: int
    kind: Optional[str] = None
    index: Optional[str] = None
    parity: Optional[str] = None
    in_B: Optional[bool] = None
    in_S: Optional[bool] = None
    s_class: Optional[str] = None
    B0: Optional[bool] = None
    B1: Optional[bool] = None
    Binf: Optional[bool] = None
    B01: Optional[bool] = None
    B0inf: Optional[bool] = None
    B1inf: Optional[bool] = None
    word: Optional[str] = None
    m: Optional[int] = None

    @classmethod
    def build(cls, value: Fraction, rec=None, hit=None) -> "ReportRow":
        row = cls(str(value), value.numerator, value.denominator)
        row.parity = str(parity_best.parity_of(value))
        if rec is not None:
            row.kind = rec.kind
            row.index = ",".join(str(i) for i in rec.index)
            row.in_B, row.in_S = rec.in_B, rec.in_S
            row.s_class = None if rec.s_class is None else str(rec.s_class)
            for col, key in _MEMBERSHIP_KEYS.items():
                setattr(row, col, rec.memberships[key])
        if hit is not None:
            row.word, row.m = hit.word.render(), hit.m
        return row

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ReportRow":
        return cls(**{f.name: d.get(f.name) for f in fields(cls)})

    @staticmethod
    def columns() -> list[str]:
        return [f.name for f in fields(ReportRow)]


_BOOL_COLS = {"in_B", "in_S", *MEMBERSHIP_COLUMNS}
_INT_COLS = {"p", "q", "m"}


def rows_to_json(rows: list[ReportRow], meta: dict) -> str:
    doc = {"schema": SCHEMA_VERSION, **meta, "rows": [r.to_dict() for r in rows]}
    return json.dumps(doc, indent=2)


def rows_from_json(text: str) -> list[ReportRow]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return [ReportRow.from_dict(d) for d in doc["rows"]]


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ReportRow.columns())
    for r in rows:
        w.writerow(["" if v is None else ("true" if v is True else "false" if v is False else v)
                    for v in r.to_dict().values()])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ReportRow]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        d = {}
        for k, v in rec.items():
            if v == "":
                d[k] = None
            elif k in _BOOL_COLS:
                d[k] = v == "true"
            elif k in _INT_COLS:
                d[k] = int(v)
            else:
                d[k] = v
        out.append(ReportRow.from_dict(d))
    return out


# -- routes ----------------------------------------------------------------------------

def _parse_class(text: str):
    """'all' (plain B), 'S', one class, or a comma pair such as '0,1' or '1,inf'."""
    t = text.strip().lower()
    if t in ("all", "b"):
        return "B"
    if t == "s":
        return "S"
    try:
        parts = [Sym.parse(p) for p in t.split(",")]
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--class") from exc
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2 and parts[0] is not parts[1]:
        return frozenset(parts)
    if len(parts) == 3 and len(set(parts)) == 3:
        return "B"
    raise click.BadParameter(f"not a class: {text!r}")


def _class_label(key) -> str:
    if isinstance(key, str):
        return key
    if isinstance(key, Sym):
        return str(key)
    return parity_best.pair_label(key)


def route_rcf(inp: InputSpec, key, limit: Limit):
    s = inp.stream()
    if key == "B":
        recs = parity_best.best_set(s, limit)
    elif key == "S":
        recs = parity_best.signed_best_set(s, limit)
    elif isinstance(key, tuple):
        recs = parity_best.s_alpha_set(s, key[1], limit)
    else:
        recs = parity_best.best_class(s, key, limit)
    return [r.value for r in recs]


def route_delta(inp: InputSpec, key, limit: Limit):
    d = delta.DeltaStream(inp.stream())
    if isinstance(key, tuple):
        hits = delta.s_alpha_words(d, key[1], limit)
    else:
        hits = delta.theorem2_set(d, key, limit)
    return [h.value for h in hits]


def _oracle_scan(x, key, Q: int):
    if key == "B":
        return oracle.brute_best(x, Q)
    if key == "S":
        return oracle.brute_signed(x, Q)
    if isinstance(key, tuple):
        return oracle.brute_s_alpha(x, Q, key[1])
    return oracle.brute_best_class(x, Q, key)


def route_oracle(inp: InputSpec, key, limit: Limit):
    x = inp.surd()
    if limit.count is not None and limit.count <= 0:
        return []
    if limit.max_den is not None:
        return limit.take(_oracle_scan(x, key, limit.max_den))
    Q = 16
    while True:
        vals = _oracle_scan(x, key, Q)
        if len(vals) >= limit.count:
            return vals[:limit.count]
        Q *= 4


ROUTES: dict[str, Callable] = {"rcf": route_rcf, "delta": route_delta, "oracle": route_oracle}


def _witness_rows(inp: InputSpec, key, values) -> list[ReportRow]:
    """Decorate route values with their RCF record and their shortest word."""
    if not values:
        return []
    top = max(v.denominator for v in values)
    recs = {r.value: r for r in parity_best.iter_signed_records(inp.stream(), top)}
    d = delta.DeltaStream(inp.stream())
    if isinstance(key, tuple):
        found = delta.s_alpha_words(d, key[1], Limit(max_den=top))
    else:
        found = delta.theorem2_set(d, key, Limit(max_den=top))
    hits = {h.value: h for h in found}
    return [ReportRow.build(v, recs.get(v), hits.get(v)) for v in values]


# -- command plumbing ---------------------------------------------------------------------

def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn):
    """Map library errors onto the exit-code table."""
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PrecisionExhausted as exc:
            _fail(EXIT_PRECISION, str(exc))
        except (InputParseError, RationalInputError, RadicandMismatchError) as exc:
            _fail(EXIT_INPUT, str(exc))
        except ParityCFError as exc:
            _fail(EXIT_INPUT, str(exc))
    return wrapper


def _limit(text: str) -> Limit:
    try:
        return Limit.parse(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _emit(rows, meta, fmt: str):
    if fmt == "json":
        click.echo(rows_to_json(rows, meta))
    else:
        click.echo(rows_to_csv(rows), nl=False)


def _run_table(expr, key, route, limit_text, fmt, command):
    inp = parse_input(expr)
    limit = _limit(limit_text)
    names = list(ROUTES) if route == "all" else [route]
    if route == "all" and inp.is_decimal:
        names = ["rcf", "delta"]
        click.echo("note: oracle route skipped for a decimal input", err=True)
    results = {name: ROUTES[name](inp, key, limit) for name in names}
    ref_name = names[0]
    ref = results[ref_name]
    for name in names[1:]:
        if results[name] != ref:
            extra = [str(v) for v in results[name] if v not in ref]
            missing = [str(v) for v in ref if v not in results[name]]
            _fail(EXIT_MISMATCH,
                  f"routes {ref_name} and {name} disagree: "
                  f"only in {name}: {extra[:8]}; only in {ref_name}: {missing[:8]}")
    rows = _witness_rows(inp, key, ref)
    meta = {"command": command, "input": inp.expression,
            "class": _class_label(key) if not isinstance(key, tuple) else f"S{key[1]}",
            "limit": str(limit), "routes": names}
    _emit(rows, meta, fmt)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Parity-restricted best rational approximations of quadratic irrationals."""


_route_opt = click.option("--route", type=click.Choice(["rcf", "delta", "oracle", "all"]),
                          default="rcf", show_default=True)
_limit_opt = click.option("--limit", "limit_text", default="q:100", show_default=True,
                          help="q:<max denominator> or n:<count>")
_format_opt = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                           default="json", show_default=True)


@main.command()
@click.argument("expr")
@click.option("--class", "cls", default="all", show_default=True,
              help="0, 1, inf, a pair like 0,1, or all for plain best approximations")
@_route_opt
@_limit_opt
@_format_opt
@_guard
def best(expr, cls, route, limit_text, fmt):
    """Best approximations, optionally restricted to parity classes."""
    _run_table(expr, _parse_class(cls), route, limit_text, fmt, "best")


@main.command()
@click.argument("expr")
@click.option("--alpha", default=None, help="restrict to S_alpha for alpha in 0, 1, inf")
@_route_opt
@_limit_opt
@_format_opt
@_guard
def signed(expr, alpha, route, limit_text, fmt):
    """Best signed approximations (principal and intermediate convergents)."""
    try:
        key = "S" if alpha is None else ("S_alpha", Sym.parse(alpha))
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--alpha") from exc
    _run_table(expr, key, route, limit_text, fmt, "signed")


@main.command(name="delta")
@click.argument("expr")
@click.option("--terms", default=16, show_default=True, type=click.IntRange(min=0))
@click.option("--cylinders", is_flag=True, help="also print the cylinder endpoints")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@_guard
def delta_cmd(expr, terms, cylinders, fmt):
    """The Delta-expression alpha_1, ..., alpha_m."""
    inp = parse_input(expr)
    d = delta.DeltaStream(inp.stream())
    symbols = d.prefix(terms)
    cyl = [delta.cylinder(d, m) for m in range(1, terms + 1)] if cylinders else []
    if fmt == "json":
        doc = {"schema": SCHEMA_VERSION, "command": "delta", "input": inp.expression,
               "symbols": [str(a) for a in symbols]}
        if cylinders:
            doc["cylinders"] = [
                {"m": m, "ends": [{"value": str(v), "parity": str(p)} for v, p in c.ends]}
                for m, c in enumerate(cyl, 1)]
        click.echo(json.dumps(doc, indent=2))
        return
    if not terms:
        return
    click.echo(delta.render_symbols(symbols))
    for m, c in enumerate(cyl, 1):
        (v1, p1), (v2, p2) = c.ends
        click.echo(f"{m}\t{v1}\t{p1}\t{v2}\t{p2}")


@main.command()
@click.argument("expr")
@click.option("--map", "kind", type=click.Choice([k.value for k in cfmaps.CfMapKind]),
              default="gauss", show_default=True)
@click.option("--steps", default=5, show_default=True, type=click.IntRange(min=0))
@click.option("--orbit", is_flag=True, help="add the Delta prefix of every output")
@click.option("--recover", type=click.Choice(["even", "oddodd"]), default=None,
              help="print the inverse-orbit rationals instead of the orbit")
@_format_opt
@_guard
def maps(expr, kind, steps, orbit, recover, fmt):
    """Iterate one of the six interval maps (x is reduced mod 1 first)."""
    inp = parse_input(expr)
    x = inp.surd()
    if not (0 < x < 1):
        x = x - floor_surd(x)
        click.echo(f"note: using the fractional part {x}", err=True)
    if recover:
        if recover != kind:
            click.echo(f"note: --recover {recover} iterates the {recover} map", err=True)
        fn = cfmaps.even_inverse_orbit if recover == "even" else cfmaps.oddodd_inverse_orbit
        values = fn(x, steps)
        table = [{"i": i, "value": str(v), "parity": str(parity_best.parity_of(v))}
                 for i, v in enumerate(values, 1)]
    else:
        table = []
        view = cfmaps.DeltaView(delta.DeltaStream(RcfStream(x)))
        for i, st in enumerate(cfmaps.orbit(kind, x, steps), 1):
            sym = cfmaps.symbolic_step(kind, view)
            row = {"i": i, "input": str(st.input), "output": str(st.output),
                   "branch": str(st.branch), "consumed": sym.consumed,
                   "relabel": sym.relabel, "branch_matches": sym.branch() == st.branch}
            if orbit:
                row["delta"] = delta.render_symbols(sym.output.prefix(8))
            table.append(row)
            view = sym.output
    if fmt == "json":
        click.echo(json.dumps({"schema": SCHEMA_VERSION, "command": "maps",
                               "input": inp.expression, "map": kind,
                               "recover": recover, "rows": table}, indent=2))
    else:
        buf = io.StringIO()
        cols = list(table[0]) if table else ["i"]
        w = csv.DictWriter(buf, cols, lineterminator="\n")
        w.writeheader()
        w.writerows(table)
        click.echo(buf.getvalue(), nl=False)


@main.command(name="oracle-check")
@click.argument("expr", required=False)
@click.option("--samples", default=5, show_default=True, type=click.IntRange(min=0))
@click.option("--qmax", default=200, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=None, type=int, help="defaults to PARITY_CF_SEED or a fixed seed")
@_guard
def oracle_check(expr, samples, qmax, seed):
    """Cross-check all routes and the parallelogram criteria on x or on sampled surds."""
    xs = [parse_input(expr).surd()] if expr else oracle.sample_surds(samples, seed)
    bad = 0
    for x in xs:
        inp = InputSpec(str(x), x)
        lim = Limit(max_den=qmax)
        for key in ["B", "S", *SYMBOLS, *PAIRS, *(("S_alpha", a) for a in SYMBOLS)]:
            outs = {name: fn(inp, key, lim) for name, fn in ROUTES.items()}
            ok = outs["rcf"] == outs["delta"] == outs["oracle"]
            bad += not ok
            label = _class_label(key) if not isinstance(key, tuple) else f"S{key[1]}"
            click.echo(f"{'ok' if ok else 'MISMATCH'}\t{x}\troutes\t{label}")
        for rep in oracle.geometric_best_check(x, min(qmax, 200)):
            bad += not rep.agree
            click.echo(f"{'ok' if rep.agree else 'MISMATCH'}\t{x}\tgeometry\t{rep.name}\t{rep.detail}".rstrip())
    if bad:
        _fail(EXIT_MISMATCH, f"{bad} checks disagree")


# -- svg ------------------------------------------------------------------------------

COLOURS = {Sym.ONE: "#d62728", Sym.ZERO: "#1f77b4", Sym.INF: "#2ca02c"}
_W, _H, _PAD = 800.0, 420.0, 40.0


def _farey_edges(lo: int, hi: int, depth: int) -> list[tuple[Fraction, Fraction]]:
    """Farey neighbours (a/b, c/d) in [lo, hi] down to the given Stern-Brocot depth."""
    edges = []
    for n in range(lo, hi):
        level = [(Fraction(n), Fraction(n + 1))]
        edges.extend(level)
        for _ in range(depth):
            nxt = []
            for a, b in level:
                med = Fraction(a.numerator + b.numerator, a.denominator + b.denominator)
                nxt += [(a, med), (med, b)]
            edges.extend(nxt)
            level = nxt
    return edges


def render_svg(inp: InputSpec, terms: int) -> str:
    d = delta.DeltaStream(inp.stream())
    symbols = d.prefix(terms)
    x = inp.value if not inp.is_decimal else inp.value.lo
    a0 = d.a0
    lo, hi = min(0, a0), max(1, a0 + 1)
    depth = max(0, min(terms - 1, 10 - (hi - lo).bit_length()))
    scale = (_W - 2 * _PAD) / (hi - lo)
    base = _H - _PAD

    def X(v) -> float:
        return _PAD + (float(v) - lo) * scale

    def arc(a, b, colour, width) -> str:
        if a is INF or b is INF:
            v = b if a is INF else a
            return (f'<line x1="{X(v):.3f}" y1="{base:.3f}" x2="{X(v):.3f}" y2="{_PAD / 2:.3f}" '
                    f'stroke="{colour}" stroke-width="{width}"/>')
        xa, xb = sorted((X(a), X(b)))
        r = (xb - xa) / 2
        return (f'<path d="M {xa:.3f} {base:.3f} A {r:.3f} {r:.3f} 0 0 1 {xb:.3f} {base:.3f}" '
                f'fill="none" stroke="{colour}" stroke-width="{width}"/>')

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:.0f}" height="{_H:.0f}" '
           f'viewBox="0 0 {_W:.0f} {_H:.0f}">',
           f'<rect width="{_W:.0f}" height="{_H:.0f}" fill="white"/>',
           f'<line x1="{_PAD / 2:.3f}" y1="{base:.3f}" x2="{_W - _PAD / 2:.3f}" y2="{base:.3f}" '
           'stroke="black" stroke-width="1"/>']
    for n in range(lo, hi + 1):
        out.append(arc(INF, Fraction(n), "#cccccc", "0.5"))
    for a, b in _farey_edges(lo, hi, depth):
        out.append(arc(a, b, "#cccccc", "0.5"))
    P = None
    for m, (_, P) in zip(range(1, terms + 1), d.prefix_products(0)):
        am = d.alpha(m)
        ends = [moebius_apply(P, s.point) for s in SYMBOLS if s is not am]
        if all(e is INF or lo <= e <= hi for e in ends):
            out.append(arc(ends[0], ends[1], COLOURS[am], "2"))
    out.append(f'<line x1="{X(x):.3f}" y1="{base:.3f}" x2="{X(x):.3f}" y2="{_PAD / 2:.3f}" '
               'stroke="black" stroke-width="1" stroke-dasharray="4 3"/>')
    legend = delta.render_symbols(symbols)
    out.append(f'<text x="{_PAD:.3f}" y="{_PAD / 2 + 4:.3f}" font-family="monospace" '
               f'font-size="12">{legend}</text>')
    out.append(f'<text x="{_PAD:.3f}" y="{_H - 8:.3f}" font-family="monospace" font-size="11">'
               f'x = {inp.expression} (red 1, blue 0, green inf)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


@main.command()
@click.argument("expr")
@click.option("--terms", default=8, show_default=True, type=click.IntRange(min=1))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@_guard
def svg(expr, terms, out_path):
    """Schematic Farey picture with the crossed edges coloured by Delta letter."""
    inp = parse_input(expr)
    text = render_svg(inp, terms)
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out_path}: {exc.strerror or exc}")
    click.echo(out_path)


if __name__ == "__main__":  # pragma: no cover
    main()
