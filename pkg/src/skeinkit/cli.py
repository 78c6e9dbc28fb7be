"""Command line entry points.

``skein`` bundles the exact calculators into five everyday commands
(``bracket``, ``table``, ``tail``, ``verify``, ``graph``) plus one
experimental extra (``residuals``).  All arithmetic is exact, so the
csv, json, and text renderings of one computation carry identical
numbers, and thread counts never change a result, only its latency.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor

import click

from . import __version__
from .algebra import (
    LaurentPoly,
    RationalFn,
    admissible,
    delta,
    fusion_coeff,
    min_degree,
    theta,
)
from .diagram import (
    DiagramError,
    LinkDiagram,
    PDSyntaxError,
    State,
    apply_state,
    is_minus_adequate,
    minus_graph,
    parse_pd,
    pretzel,
    reduced_minus_graph,
)
from .invariants import (
    AdequacyError,
    BudgetError,
    bracket_state_sum,
    build_upsilon,
    colored_bracket_fused,
    colored_state_sum,
    predicted_min_degree,
    reduced_jones,
    unreduced_colored_jones,
)
from .planar import (
    TLMorphism,
    boxed,
    cabled_crossing,
    capnest,
    channel_element,
    closure,
    compose,
    cupnest,
    evaluate,
    jones_wenzl,
    set_cache_dir,
    tensor,
    theta_program,
    turnback,
)
from .stability import (
    ExpressionError,
    FamilyExpr,
    MemberError,
    WindowError,
    check_bracket_rate,
    check_color_stability,
    check_colored_rate,
    family_tail,
    higher_order_windows,
    n_equivalent,
    normalize,
    pretzel_family,
    window_from_bracket,
    window_from_reduced,
)

DEFAULT_MAX_STATES = 1 << 20
DEFAULT_MAX_NETWORKS = 100_000

_RANGE_RE = re.compile(r"(-?\d+)\.\.(-?\d+)\Z")


# -- shared option plumbing ----------------------------------------------------


def _thread_count(option: int | None) -> int:
    """--threads wins, then SKEIN_THREADS, then the machine's CPU count."""
    if option is not None:
        return max(1, option)
    env = os.environ.get("SKEIN_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise click.UsageError(f"SKEIN_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _expr(text: str, flag: str) -> FamilyExpr:
    try:
        return FamilyExpr.parse(text)
    except ExpressionError as exc:
        raise click.BadParameter(str(exc), param_hint=f"'{flag}'")


def _parse_range(text: str) -> tuple[int, int]:
    m = _RANGE_RE.match(text.strip())
    if m is None:
        raise click.BadParameter(
            f"expected START..STOP, got {text!r}", param_hint="'--range'"
        )
    start, stop = int(m.group(1)), int(m.group(2))
    if stop < start:
        raise click.BadParameter(
            f"empty parameter range {start}..{stop}", param_hint="'--range'"
        )
    return start, stop


def _parse_counts(text: str, flag: str) -> list[int]:
    counts = []
    for i, part in enumerate(text.split(",")):
        try:
            counts.append(int(part.strip()))
        except ValueError:
            raise click.BadParameter(
                f"column {i + 1}: expected an integer, got {part.strip()!r}",
                param_hint=f"'{flag}'",
            )
    return counts


def _diagram_options(fn):
    fn = click.option(
        "--diagram-json",
        "json_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="File holding a serialized diagram (the to_json format).",
    )(fn)
    fn = click.option(
        "--pd",
        "pd_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="File holding PD notation, e.g. PD[X[1,4,2,3], ...].",
    )(fn)
    fn = click.option(
        "--pretzel",
        "pretzel_arg",
        default=None,
        metavar="C1,C2,...",
        help="Pretzel twist sizes, comma separated.",
    )(fn)
    return fn


def _load_diagram(pretzel_arg, pd_path, json_path) -> LinkDiagram:
    sources = [
        flag
        for flag, value in (
            ("--pretzel", pretzel_arg),
            ("--pd", pd_path),
            ("--diagram-json", json_path),
        )
        if value is not None
    ]
    if len(sources) != 1:
        given = f" (got {', '.join(sources)})" if sources else ""
        raise click.UsageError(
            "give exactly one of --pretzel, --pd, or --diagram-json" + given
        )
    if pretzel_arg is not None:
        counts = _parse_counts(pretzel_arg, "--pretzel")
        try:
            return pretzel(counts)
        except (DiagramError, ValueError) as exc:
            raise click.BadParameter(str(exc), param_hint="'--pretzel'")
    path = pd_path if pd_path is not None else json_path
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        if pd_path is not None:
            return parse_pd(text)
        return LinkDiagram.from_json(text)
    except PDSyntaxError as exc:
        # the message already carries the text position
        raise click.ClickException(f"{path}: {exc}")
    except (DiagramError, ValueError, KeyError, TypeError) as exc:
        raise click.ClickException(f"{path}: {exc}")


def _max_crossings(max_states: int) -> int:
    # the classical sweep can touch one state per smoothing choice,
    # so a state budget of 2^c covers c crossings
    return max(0, int(max_states).bit_length() - 1)


def _budget_flag(exc: BudgetError) -> str:
    return "--max-states" if "crossings" in str(exc) else "--max-networks"


def _family(family_arg: str, color_arg: str, start: int, stop: int):
    sizes = []
    for i, part in enumerate(family_arg.split(",")):
        try:
            sizes.append(FamilyExpr.parse(part))
        except ExpressionError as exc:
            raise click.BadParameter(
                f"column {i + 1}: {exc}", param_hint="'--pretzel-family'"
            )
    color = _expr(color_arg, "--color")
    try:
        return pretzel_family(sizes, color, start, stop)
    except MemberError as exc:
        raise click.BadParameter(str(exc), param_hint="'--color'")
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="'--pretzel-family'")


def _spec_var(spec) -> str:
    for _, expr in spec.sizes:
        if expr.var:
            return expr.var
    return spec.color.var or "k"


def _window_rows(spec, window, workers, max_networks):
    """Normalized reduced-polynomial windows, one row per family member."""
    params = list(spec.parameters())

    def one(k: int) -> list[int]:
        count = window(k)
        if count < 0:
            raise WindowError(
                f"window {str(window)!r} evaluates to {count} at parameter {k}"
            )
        try:
            poly = reduced_jones(
                spec.member(k), spec.member_color(k), max_networks=max_networks
            )
        except (MemberError, BudgetError):
            raise
        except (ValueError, ArithmeticError) as exc:
            raise MemberError(f"family member at parameter {k} failed: {exc}", k)
        if count == 0:
            return []
        return list(normalize(window_from_reduced(poly, count)).coeffs)

    if workers > 1 and len(params) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(zip(params, pool.map(one, params)))
    return [(k, one(k)) for k in params]


# -- command group -------------------------------------------------------------


@click.group()
@click.version_option(__version__, prog_name="skein")
@click.option(
    "--cache-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory for the projector cache, persisted between runs.",
)
def main(cache_dir: str | None) -> None:
    """Exact bracket and colored polynomial tools for twist-region families."""
    if cache_dir is not None:
        set_cache_dir(cache_dir)


@main.command()
@_diagram_options
@click.option(
    "--max-states",
    default=DEFAULT_MAX_STATES,
    show_default=True,
    type=click.IntRange(min=1),
    help="State budget for the classical sweep; a diagram whose smoothing "
    "count 2^crossings exceeds it is refused.",
)
def bracket(pretzel_arg, pd_path, json_path, max_states):
    """Kauffman bracket of one diagram, with its minimum degree.

    When the diagram supports the sharpness formula, the predicted
    minimum degree is printed next to the computed one.
    """
    diagram = _load_diagram(pretzel_arg, pd_path, json_path)
    try:
        value = bracket_state_sum(
            diagram, max_crossings=_max_crossings(max_states)
        ).value
    except BudgetError as exc:
        raise click.ClickException(f"--max-states: {exc}")
    click.echo(f"bracket: {value}")
    if not value:
        click.echo("min degree: undefined (zero polynomial)")
        return
    click.echo(f"min degree: {value.min_degree()}")
    try:
        predicted = predicted_min_degree(diagram, 1)
    except (AdequacyError, DiagramError, ValueError) as exc:
        click.echo(f"predicted min degree: not applicable ({exc})")
    else:
        tag = "agrees" if predicted == value.min_degree() else "DISAGREES"
        click.echo(f"predicted min degree: {predicted} ({tag})")


@main.command()
@click.option(
    "--pretzel-family",
    "family_arg",
    required=True,
    metavar="E1,E2,...",
    help='Twist sizes as expressions in one parameter, e.g. "8,6,k".',
)
@click.option(
    "--color",
    "color_arg",
    default="2",
    show_default=True,
    metavar="EXPR",
    help="Reduced polynomial index, as an expression in the same parameter.",
)
@click.option("--range", "range_arg", required=True, metavar="A..B",
              help="Inclusive parameter range.")
@click.option(
    "--window",
    "window_arg",
    required=True,
    metavar="EXPR",
    help="How many low coefficients to print per member.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(("text", "csv", "json")),
    default="text",
    show_default=True,
)
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads [default: SKEIN_THREADS, else the CPU count].",
)
@click.option(
    "--max-networks",
    default=DEFAULT_MAX_NETWORKS,
    show_default=True,
    type=click.IntRange(min=1),
    help="Fusion-term budget per colored evaluation.",
)
def table(family_arg, color_arg, range_arg, window_arg, fmt, threads, max_networks):
    """Normalized low-coefficient windows across one pretzel family.

    Each row lists the first coefficients of the reduced polynomial of
    one member, starting from its lowest degree, sign-normalized so the
    row begins with a positive number.
    """
    start, stop = _parse_range(range_arg)
    spec = _family(family_arg, color_arg, start, stop)
    window = _expr(window_arg, "--window")
    try:
        rows = _window_rows(spec, window, _thread_count(threads), max_networks)
    except BudgetError as exc:
        raise click.ClickException(f"{_budget_flag(exc)}: {exc}")
    except (MemberError, WindowError) as exc:
        raise click.ClickException(str(exc))
    var = _spec_var(spec)
    if fmt == "json":
        doc = {
            "family": spec.describe(),
            "rows": [{"parameter": k, "window": cs} for k, cs in rows],
        }
        click.echo(json.dumps(doc, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        for k, cs in rows:
            writer.writerow([k, *cs])
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(f"# {spec.describe()}")
        for k, cs in rows:
            click.echo(f"{var}={k}: " + " ".join(str(c) for c in cs))


@main.command()
@click.option(
    "--pretzel-family",
    "family_arg",
    required=True,
    metavar="E1,E2,...",
    help='Twist sizes as expressions in one parameter, e.g. "k,k,2".',
)
@click.option(
    "--color",
    "color_arg",
    default="2",
    show_default=True,
    metavar="EXPR",
    help="Reduced polynomial index, as an expression in the same parameter.",
)
@click.option("--range", "range_arg", required=True, metavar="A..B",
              help="Inclusive parameter range.")
@click.option(
    "--rate",
    "rate_arg",
    required=True,
    metavar="EXPR",
    help="Coefficients that must agree between consecutive members, "
    "evaluated at the earlier parameter.",
)
@click.option(
    "--depth",
    default=2,
    show_default=True,
    type=click.IntRange(min=0),
    help="Extra coefficients verified past each required agreement.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(("text", "json")),
    default="text",
    show_default=True,
)
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads [default: SKEIN_THREADS, else the CPU count].",
)
def tail(family_arg, color_arg, range_arg, rate_arg, depth, fmt, threads):
    """Check a stability rate across a family and report the shared tail.

    Every consecutive pair of members is compared through the rate; the
    report shows how far each pair actually agrees, witness coefficients
    on failure, and the stable head of the last member.
    """
    start, stop = _parse_range(range_arg)
    spec = _family(family_arg, color_arg, start, stop)
    rate = _expr(rate_arg, "--rate")
    try:
        report = family_tail(spec, rate, depth=depth, threads=_thread_count(threads))
    except MemberError as exc:
        raise click.ClickException(str(exc))
    except (BudgetError, WindowError) as exc:
        raise click.ClickException(str(exc))
    click.echo(report.to_json() if fmt == "json" else report.to_text())


@main.command()
@click.option(
    "--pretzel-family",
    "family_arg",
    required=True,
    metavar="E1,E2,...",
    help='Twist sizes as expressions in one parameter, e.g. "k,k,2".',
)
@click.option(
    "--color",
    "color_arg",
    default="2",
    show_default=True,
    metavar="EXPR",
    help="Reduced polynomial index, as an expression in the same parameter.",
)
@click.option("--range", "range_arg", required=True, metavar="A..B",
              help="Inclusive parameter range.")
@click.option(
    "--rate",
    "rate_arg",
    required=True,
    metavar="EXPR",
    help="Window width per member, evaluated at its parameter.",
)
@click.option(
    "--orders",
    default=1,
    show_default=True,
    type=click.IntRange(min=0),
    help="How many rounds of tail subtraction to apply.",
)
@click.option("--depth", default=2, show_default=True, type=click.IntRange(min=0))
@click.option(
    "--format",
    "fmt",
    type=click.Choice(("text", "json")),
    default="text",
    show_default=True,
)
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads [default: SKEIN_THREADS, else the CPU count].",
)
def residuals(family_arg, color_arg, range_arg, rate_arg, orders, depth, fmt, threads):
    """[experimental] Iterated tail differences across a family.

    Level 0 holds each member's normalized window; every later level
    subtracts the previous level's last window from each member.  The
    output is exploratory; no stability guarantee is attached to it.
    """
    start, stop = _parse_range(range_arg)
    spec = _family(family_arg, color_arg, start, stop)
    rate = _expr(rate_arg, "--rate")
    try:
        levels = higher_order_windows(
            spec, rate, orders=orders, depth=depth, threads=_thread_count(threads)
        )
    except (MemberError, BudgetError, WindowError) as exc:
        raise click.ClickException(str(exc))
    params = list(spec.parameters())
    if fmt == "json":
        doc = {
            "family": spec.describe(),
            "levels": [
                [
                    {"parameter": k, "offset": str(c.anchor), "coeffs": list(c.coeffs)}
                    for k, c in zip(params, level)
                ]
                for level in levels
            ],
        }
        click.echo(json.dumps(doc, indent=2))
    else:
        var = _spec_var(spec)
        click.echo(f"# {spec.describe()}")
        for i, level in enumerate(levels):
            click.echo(f"level {i}:")
            for k, c in zip(params, level):
                body = " ".join(str(x) for x in c.coeffs) or "(empty)"
                click.echo(f"  {var}={k}: [offset {c.anchor}] {body}")


@main.command()
@_diagram_options
@click.option(
    "--emit",
    type=click.Choice(("dot",)),
    default="dot",
    show_default=True,
    help="Output format.",
)
@click.option(
    "--reduced",
    is_flag=True,
    help="Merge parallel edges of the all-minus state graph.",
)
def graph(pretzel_arg, pd_path, json_path, emit, reduced):
    """All-minus state graph of a diagram, as Graphviz DOT.

    Vertices are the circles of the all-minus smoothing (isolated
    vertices for crossing-free loops); one edge per crossing joins the
    circles its smoothing touches.
    """
    del emit  # only one format today; the flag documents the contract
    diagram = _load_diagram(pretzel_arg, pd_path, json_path)
    g = reduced_minus_graph(diagram) if reduced else minus_graph(diagram)
    click.echo(g.to_dot("reduced_minus" if reduced else "minus"))


# -- verification suites ---------------------------------------------------------


def _run_checks(named_checks):
    results = []
    for name, fn in named_checks:
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"name": name, "passed": bool(ok), "detail": detail})
    return results


def _rfn(x) -> RationalFn:
    return x if isinstance(x, RationalFn) else RationalFn.from_poly(x)


_T1_ROW = (1, -1, 3, -4, 6, -8, 10, -11, 13, -13, 14)
_T2_ROW = (1, -1, 3, -3, 5, -6, 7, -8, 9, -10, 11)
_T3_ROW = (1, -1, -1, 0, 4, 0, -4, -5, 7, 6, -1,
           -13, 1, 7, 9, -8, -3, -5, 5, -1, 13, -4)
_T4_ROW = (1, -1, -1, 0, 0, 1, 0, 1)

_TABLE_JOBS = (
    ("columns 8,6,k at index 2, windows k+1", "8,6,k", "2", 1, 10, "k+1", _T1_ROW),
    ("columns k,k,2 at index 2, windows k+1", "k,k,2", "2", 1, 10, "k+1", _T2_ROW),
    ("columns k+2,k+4,k+1 at index 4, windows 3k+1",
     "k+2,k+4,k+1", "4", 1, 7, "3*k+1", _T3_ROW),
    ("columns 2,5,k at index k+1, windows k+1", "2,5,k", "k+1", 1, 5, "k+1", _T4_ROW),
)


def _suite_paper_tables(workers):
    def job(label, family, color, start, stop, window, expected):
        def run():
            spec = pretzel_family(family, color, start, stop)
            rows = _window_rows(
                spec, FamilyExpr.parse(window), workers, DEFAULT_MAX_NETWORKS
            )
            for k, cs in rows:
                want = list(expected[: len(cs)])
                if cs != want:
                    return False, f"row {k}: got {cs}, want {want}"
            return True, f"{len(rows)} rows match"

        return label, run

    return _run_checks([job(*args) for args in _TABLE_JOBS])


def _suite_tl_identities(workers):
    del workers  # every check here is cheap and serial

    def idempotency():
        for n in range(1, 7):
            f = jones_wenzl(n)
            if compose(f, f) != f:
                return False, f"failed at n={n}"
        return True, "n = 1..6"

    def hooks():
        for n in range(2, 7):
            f = jones_wenzl(n)
            for i in range(n - 1):
                cap = boxed(TLMorphism.cap(2, 0), i, n - i - 2)
                cup = boxed(TLMorphism.cup(0, 0), i, n - i - 2)
                if not compose(f, cap).is_zero() or not compose(cup, f).is_zero():
                    return False, f"failed at n={n}, strand {i}"
        return True, "n = 2..6, every hook position"

    def absorption():
        for m, k in ((1, 1), (1, 2), (2, 2), (2, 3), (1, 4), (3, 3)):
            big = jones_wenzl(m + k)
            small = tensor(jones_wenzl(m), jones_wenzl(k))
            if compose(small, big) != big or compose(big, small) != big:
                return False, f"failed at split ({m},{k})"
        return True, "splits up to 3+3"

    def closures():
        for n in range(1, 7):
            if closure(jones_wenzl(n)).to_poly() != delta(n):
                return False, f"failed at n={n}"
        return True, "n = 1..6"

    def curls():
        for n in range(1, 5):
            f = jones_wenzl(n)
            m = n * n + 2 * n
            sgn = -1 if n % 2 else 1
            for sign, e in ((-1, -m), (1, m)):
                lifted = compose(f, boxed(cupnest(n), n, 0))
                crossed = compose(lifted, boxed(cabled_crossing(n, sign), 0, n))
                curl = compose(crossed, boxed(capnest(n), n, 0))
                if curl != f.scaled(LaurentPoly.monomial(e, sgn)):
                    return False, f"failed at n={n}, sign {sign:+d}"
        return True, "factor (-1)^n A^(+-(n^2+2n)) for n = 1..4"

    def thetas():
        count = 0
        for a, b, c in itertools.product(range(5), repeat=3):
            if a + b + c == 0 or not admissible(a, b, c):
                continue
            if _rfn(theta(a, b, c)) != evaluate(theta_program(a, b, c)):
                return False, f"failed at {(a, b, c)}"
            count += 1
        return True, f"{count} admissible triples with colors <= 4"

    def fusion():
        for n in (1, 2):
            ff = tensor(jones_wenzl(n), jones_wenzl(n))
            acc = TLMorphism.zero(2 * n, 2 * n)
            for p in range(n + 1):
                w = _rfn(delta(2 * p)) / _rfn(theta(n, n, 2 * p))
                acc = acc + channel_element(n, p).scaled(w)
            if acc != ff:
                return False, f"failed at n={n}"
        return True, "n = 1..2"

    def crossing_expansion():
        for n in (1, 2):
            ff = tensor(jones_wenzl(n), jones_wenzl(n))
            x = compose(compose(ff, cabled_crossing(n, -1)), ff)
            acc = TLMorphism.zero(2 * n, 2 * n)
            for i in range(n + 1):
                smoothing = compose(compose(ff, turnback(n, i)), ff)
                acc = acc + smoothing.scaled(fusion_coeff(n, i))
            if x != acc:
                return False, f"failed at n={n}"
        return True, "n = 1..2"

    return _run_checks(
        [
            ("projector idempotency", idempotency),
            ("hook annihilation", hooks),
            ("projector absorption", absorption),
            ("projector closure is the loop value", closures),
            ("cabled curl coefficient", curls),
            ("theta networks match the closed form", thetas),
            ("fusion completeness", fusion),
            ("cabled crossing expansion", crossing_expansion),
        ]
    )


_ADEQUATE_DIAGRAMS = (
    (1, 1, 1), (2, 1, 1), (2, 2, 2), (3, 2, 1), (2, 3, 2),
    (3, 3, 3), (4, 3, 2), (5, 4, 3), (2, 2, 2, 2), (1, 2, 3, 4),
)

_COLORED_DIAGRAMS = (
    (1, 1, 1), (2, 2, 2), (2, 3, 2), (3, 3, 3), (1, 2, 3), (2, 3, 4), (3, 3, 2),
)


def _suite_min_degrees(workers):
    del workers

    def classical():
        for counts in _ADEQUATE_DIAGRAMS:
            d = pretzel(counts)
            if not is_minus_adequate(d):
                return False, f"{list(counts)} is not minus-adequate"
            got = min_degree(bracket_state_sum(d).value)
            want = predicted_min_degree(d, 1)
            if got != want:
                return False, f"{list(counts)}: got {got}, predicted {want}"
        return True, f"{len(_ADEQUATE_DIAGRAMS)} diagrams, all sharp"

    def colored():
        pairs = 0
        for counts in _COLORED_DIAGRAMS:
            d = pretzel(counts)
            for n in (2, 3):
                got = min_degree(unreduced_colored_jones(d, n).value)
                want = predicted_min_degree(d, n)
                if got != want:
                    return False, f"{list(counts)} at n={n}: got {got}, want {want}"
                pairs += 1
        return True, f"{pairs} diagram/color pairs, all sharp"

    def channel_probe():
        for counts in ((1, 1, 1), (2, 2, 2), (2, 3, 2), (3, 3, 3)):
            d = pretzel(counts)
            c = d.crossing_count
            s = apply_state(d, State.all_minus(d))
            for n in (1, 2):
                for p in range(n):
                    got = min_degree(evaluate(build_upsilon(d, n, p)))
                    want = -n * n * (c - counts[0]) - 2 * (s * n - (n - p))
                    if got != want:
                        return False, f"{list(counts)} n={n} p={p}: got {got}"
        return True, "4 diagrams, n <= 2, every channel"

    return _run_checks(
        [
            ("classical minimum degree is sharp on minus-adequate diagrams",
             classical),
            ("colored minimum degree is sharp on alternating pretzels", colored),
            ("channel probe reaches the predicted degree", channel_probe),
        ]
    )


def _suite_rate_theorems(workers):
    def steps_detail(report):
        return "; ".join(
            f"step {s.parameter}: verified {s.verified} >= required {s.required}"
            for s in report.steps
        )

    def one_column():
        report = check_bracket_rate(
            pretzel_family("8,6,k", 2, 2, 5), threads=workers
        )
        return report.passed, steps_detail(report)

    def two_columns():
        report = check_bracket_rate(
            pretzel_family("k,k,2", 2, 2, 5), threads=workers
        )
        return report.passed, steps_detail(report)

    def colored_rate():
        report = check_colored_rate(
            pretzel_family("2,2,k", 3, 2, 4), threads=workers
        )
        return report.passed, steps_detail(report)

    def color_ladder():
        report = check_color_stability(
            pretzel([2, 3, 2]), (1, 2, 3), threads=workers
        )
        return report.passed, steps_detail(report)

    def cross_twist():
        report = check_color_stability(
            pretzel([2, 3, 2]), (1, 2), twist_shifts={1: 2, 3: 3}, threads=workers
        )
        return report.passed, steps_detail(report)

    def shared_graph_window():
        a = normalize(
            window_from_bracket(unreduced_colored_jones(pretzel([2, 2, 2]), 2).value, 8)
        )
        b = normalize(
            window_from_bracket(unreduced_colored_jones(pretzel([4, 5, 3]), 2).value, 8)
        )
        if not n_equivalent(a, b, 8):
            return False, f"windows differ: {list(a.coeffs)} vs {list(b.coeffs)}"
        return True, "first 8 coefficients agree"

    return _run_checks(
        [
            ("bracket rate 4k with one varying column", one_column),
            ("bracket rate 4k with two varying columns", two_columns),
            ("colored rate 4n(k-1)+4", colored_rate),
            ("color-to-color rate 4n", color_ladder),
            ("cross-twist color rate", cross_twist),
            ("matching reduced state graphs share the window", shared_graph_window),
        ]
    )


def _suite_oracle_equivalence(workers):
    def clasped():
        triples = list(itertools.product((1, 2, 3), repeat=3))

        def one(counts):
            d = pretzel(counts)
            for n in (1, 2):
                if colored_bracket_fused(d, n).value != colored_state_sum(d, n).value:
                    return f"{list(counts)} at n={n}"
            return None

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                failures = [f for f in pool.map(one, triples) if f]
        else:
            failures = [f for f in map(one, triples) if f]
        if failures:
            return False, "disagreements: " + ", ".join(failures)
        return True, f"{len(triples)} pretzels, n <= 2"

    def classical():
        shapes = (
            [8, 6, 6], [7, 7, 6], [10, 5, 5], [6, 7, 7],
            [5, 5, 5, 5], [8, 6, 3], [4, 4, 4, 4, 4],
        )
        for counts in shapes:
            d = pretzel(counts)
            if colored_bracket_fused(d, 1).value != bracket_state_sum(d).value:
                return False, f"disagreement at {counts}"
        return True, f"{len(shapes)} pretzels up to 20 crossings"

    return _run_checks(
        [
            ("fused channels match the clasped state sum", clasped),
            ("fused channels match the classical sweep", classical),
        ]
    )


_SUITES = {
    "paper-tables": _suite_paper_tables,
    "tl-identities": _suite_tl_identities,
    "min-degrees": _suite_min_degrees,
    "rate-theorems": _suite_rate_theorems,
    "oracle-equivalence": _suite_oracle_equivalence,
}


@main.command()
@click.option("--suite", required=True, type=click.Choice(sorted(_SUITES)))
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads [default: SKEIN_THREADS, else the CPU count].",
)
def verify(suite, threads):
    """Run one verification suite and print a JSON report.

    Per-check progress goes to stderr; the report (suite name, overall
    flag, each check's name, outcome, and detail) goes to stdout.  The
    exit status is 0 exactly when every check passed.
    """
    workers = _thread_count(threads)
    started = time.perf_counter()
    checks = _SUITES[suite](workers)
    elapsed = round(time.perf_counter() - started, 3)
    passed = all(c["passed"] for c in checks)
    for c in checks:
        marker = "ok  " if c["passed"] else "FAIL"
        click.echo(f"{marker} {c['name']}: {c['detail']}", err=True)
    click.echo(
        json.dumps(
            {
                "suite": suite,
                "passed": passed,
                "elapsed_seconds": elapsed,
                "checks": checks,
            },
            indent=2,
        )
    )
    if not passed:
        raise SystemExit(1)
