"""Coefficient windows, tail estimates, and twist-family rate checks.

Everything here compares the bottom ends of exactly computed polynomials.
A window is a finite run of consecutive coefficients read off from the
minimum degree upward; two windows "agree to n" when their first n entries
match after each list is flipped to start positive.  Rate checkers build a
family of diagrams, compute every member's window, and verify stepwise
agreement at the claimed depth.

Two grading currencies appear and are never mixed: ``A``-unit windows step
by one in the A-exponent of a raw bracket (so they include the interleaved
zeros), while ``q``-unit windows step along the support lattice of a
reduced polynomial.  Every report records which currency it used.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import LaurentPoly, QPoly
from .diagram import LinkDiagram, pretzel, set_twists
from .invariants import reduced_jones, unreduced_colored_jones

__all__ = [
    "CoeffList",
    "ExpressionError",
    "FamilyExpr",
    "FamilySpec",
    "MemberError",
    "StepCheck",
    "TailReport",
    "WindowError",
    "check_bracket_rate",
    "check_color_stability",
    "check_colored_rate",
    "family_tail",
    "higher_order_windows",
    "n_equivalent",
    "normalize",
    "pretzel_family",
    "stable_prefix",
    "window_from_bracket",
    "window_from_reduced",
]

_UNIT_NAMES = {"A": "A-units", "q": "q-units", "q/2": "half q-units"}


class WindowError(ValueError):
    """A coefficient window is empty, too short, or incomparable."""


class ExpressionError(ValueError):
    """A family expression failed to parse; ``position`` is the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position


class MemberError(ValueError):
    """A family member could not be built or evaluated."""

    def __init__(self, message: str, parameter: int):
        super().__init__(message)
        self.parameter = parameter


def _as_int(c) -> int:
    i = int(c)
    if i != c:
        raise WindowError(f"non-integer coefficient {c!r} in window")
    return i


@dataclass(frozen=True)
class CoeffList:
    """A finite run of coefficients anchored at a recorded minimum degree.

    ``anchor`` is metadata only: comparisons strip it, matching the paper's
    convention that windows match up to an overall degree shift.
    """

    coeffs: tuple[int, ...]
    units: str = "q"
    anchor: Fraction = Fraction(0)
    normalized: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(_as_int(c) for c in self.coeffs))
        object.__setattr__(self, "anchor", Fraction(self.anchor))
        if self.units not in _UNIT_NAMES:
            raise WindowError(f"unknown grading units {self.units!r}")

    def window(self) -> int:
        return len(self.coeffs)


def normalize(c: CoeffList) -> CoeffList:
    """Strip the anchor and flip the global sign so the list starts positive."""
    if not c.coeffs:
        raise WindowError("cannot normalize an empty coefficient list")
    if c.coeffs[0] == 0:
        raise WindowError("anchor must be a nonzero coefficient")
    coeffs = c.coeffs if c.coeffs[0] > 0 else tuple(-x for x in c.coeffs)
    return CoeffList(coeffs, c.units, Fraction(0), True)


def n_equivalent(p1: CoeffList, p2: CoeffList, n: int) -> bool:
    """Whether the first ``n`` coefficients agree up to one global sign."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if p1.units != p2.units:
        raise WindowError(f"grading units differ: {p1.units!r} vs {p2.units!r}")
    if len(p1.coeffs) < n or len(p2.coeffs) < n:
        raise WindowError(
            f"insufficient window: need {n} coefficients, "
            f"have {len(p1.coeffs)} and {len(p2.coeffs)}"
        )
    if n == 0:
        return True
    return normalize(p1).coeffs[:n] == normalize(p2).coeffs[:n]


def stable_prefix(p1: CoeffList, p2: CoeffList) -> int:
    """Largest n with the windows n-equivalent, capped by the shorter window."""
    if p1.units != p2.units:
        raise WindowError(f"grading units differ: {p1.units!r} vs {p2.units!r}")
    cap = min(len(p1.coeffs), len(p2.coeffs))
    if cap == 0:
        return 0
    a = normalize(p1).coeffs
    b = normalize(p2).coeffs
    n = 0
    while n < cap and a[n] == b[n]:
        n += 1
    return n


def window_from_bracket(poly: LaurentPoly, count: int) -> CoeffList:
    """The lowest ``count`` A-coefficients, zeros included, anchor recorded."""
    if count < 0:
        raise ValueError("window length must be nonnegative")
    if poly.is_zero():
        raise WindowError("zero polynomial has no coefficient window")
    m = poly.min_degree()
    return CoeffList(
        tuple(poly.coeff(m + i) for i in range(count)), "A", Fraction(m)
    )


def window_from_reduced(qp: QPoly, count: int) -> CoeffList:
    """The lowest ``count`` coefficients along the reduced support lattice."""
    if count < 0:
        raise ValueError("window length must be nonnegative")
    if qp.is_zero():
        raise WindowError("zero polynomial has no coefficient window")
    den = 2 if qp.half_step else 1
    return CoeffList(
        tuple(qp.coeffs_from_bottom(count)),
        "q/2" if qp.half_step else "q",
        Fraction(qp.min_degree(), den),
    )


# --- family expressions -------------------------------------------------

def _tokenize(text: str) -> list[tuple[str, object, int]]:
    out: list[tuple[str, object, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*()":
            out.append((ch, ch, i))
            i += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", i)
    out.append(("end", "", len(text)))
    return out


@dataclass(frozen=True)
class FamilyExpr:
    """Integer expression in at most one parameter: ints, + - *, parens."""

    text: str
    var: str | None
    ast: tuple = field(repr=False, compare=False)

    @classmethod
    def parse(cls, text: str) -> "FamilyExpr":
        tokens = _tokenize(text)
        state = {"pos": 0, "var": None}

        def peek():
            return tokens[state["pos"]]

        def take():
            tok = tokens[state["pos"]]
            state["pos"] += 1
            return tok

        def atom():
            kind, value, at = take()
            if kind == "int":
                return ("num", value)
            if kind == "name":
                if state["var"] is None:
                    state["var"] = value
                elif state["var"] != value:
                    raise ExpressionError(
                        f"expressions use one parameter; saw {state['var']!r} "
                        f"and {value!r}",
                        at,
                    )
                return ("var",)
            if kind == "-":
                return ("neg", atom())
            if kind == "(":
                node = expr()
                kind2, _, at2 = take()
                if kind2 != ")":
                    raise ExpressionError("expected ')'", at2)
                return node
            raise ExpressionError("expected a number, parameter, or '('", at)

        def term():
            node = atom()
            while peek()[0] == "*":
                take()
                node = ("mul", node, atom())
            return node

        def expr():
            node = term()
            while peek()[0] in ("+", "-"):
                op = take()[0]
                node = ("add" if op == "+" else "sub", node, term())
            return node

        node = expr()
        kind, _, at = peek()
        if kind != "end":
            raise ExpressionError("unexpected trailing input", at)
        return cls(text=text, var=state["var"], ast=node)

    def __call__(self, value: int) -> int:
        def ev(node):
            op = node[0]
            if op == "num":
                return node[1]
            if op == "var":
                return value
            if op == "neg":
                return -ev(node[1])
            a, b = ev(node[1]), ev(node[2])
            if op == "add":
                return a + b
            if op == "sub":
                return a - b
            return a * b

        return ev(self.ast)

    def __str__(self) -> str:
        return self.text


def _as_expr(x) -> FamilyExpr:
    if isinstance(x, FamilyExpr):
        return x
    if isinstance(x, str):
        return FamilyExpr.parse(x)
    if isinstance(x, int):
        return FamilyExpr(text=str(x), var=None, ast=("num", x))
    raise TypeError(f"cannot use {x!r} as a family expression")


def _coerce_rate(rate) -> tuple[Callable[[int], int], str]:
    if isinstance(rate, (FamilyExpr, str, int)):
        e = _as_expr(rate)
        return e, e.text
    if callable(rate):
        return rate, getattr(rate, "__name__", "<rate>")
    raise TypeError("rate must be an expression, string, integer, or callable")


# --- diagram families ---------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    """A one-parameter family of diagrams with labeled region sizes.

    ``sizes`` maps region ids to the region's target crossing count as an
    expression in the parameter; unlisted regions keep their base size.
    ``color`` gives the reduced polynomial index (the cable carries one less
    strand).  The range ``start..stop`` is inclusive.
    """

    base: LinkDiagram
    sizes: tuple[tuple[int, FamilyExpr], ...]
    color: FamilyExpr
    start: int
    stop: int

    def __post_init__(self) -> None:
        raw = self.sizes
        if isinstance(raw, Mapping):
            raw = raw.items()
        pairs = tuple(sorted((int(rid), _as_expr(ex)) for rid, ex in raw))
        object.__setattr__(self, "sizes", pairs)
        object.__setattr__(self, "color", _as_expr(self.color))
        if self.stop < self.start:
            raise ValueError(f"empty parameter range {self.start}..{self.stop}")

    def parameters(self) -> range:
        return range(self.start, self.stop + 1)

    def member(self, k: int) -> LinkDiagram:
        deltas: dict[int, int] = {}
        for rid, ex in self.sizes:
            target = ex(k)
            if target < 0:
                raise MemberError(
                    f"region {rid} size {ex.text!r} evaluates to {target} "
                    f"at parameter {k}",
                    k,
                )
            current = self.base.region(rid).count
            if target != current:
                deltas[rid] = target - current
        return set_twists(self.base, deltas) if deltas else self.base

    def member_color(self, k: int) -> int:
        n = self.color(k)
        if n < 1:
            raise MemberError(
                f"color {self.color.text!r} evaluates to {n} at parameter {k}", k
            )
        return n

    def describe(self) -> str:
        var = next((e.var for _, e in self.sizes if e.var), None) \
            or self.color.var or "k"
        sizes = ", ".join(f"{rid}: {e.text}" for rid, e in self.sizes)
        return (
            f"regions {{{sizes}}}; color {self.color.text}; "
            f"{var} = {self.start}..{self.stop}"
        )


def pretzel_family(sizes, color, start: int, stop: int, *,
                   name: str | None = None) -> FamilySpec:
    """Family of vertical-column chains, one size expression per column.

    ``sizes`` may be a comma-separated string like ``"8,6,k"`` or a sequence
    of expressions; columns become regions 1..r in order.
    """
    if isinstance(sizes, str):
        sizes = [part.strip() for part in sizes.split(",")]
    exprs = [_as_expr(s) for s in sizes]
    base_counts = []
    for i, e in enumerate(exprs):
        v = e(start)
        if v < 0:
            raise ValueError(
                f"column {i + 1} size {e.text!r} is negative at parameter {start}"
            )
        base_counts.append(v)
    base = pretzel(base_counts, name=name)
    return FamilySpec(
        base=base,
        sizes={i + 1: e for i, e in enumerate(exprs)},
        color=_as_expr(color),
        start=start,
        stop=stop,
    )


# --- reports ------------------------------------------------------------

@dataclass(frozen=True)
class StepCheck:
    """One verified comparison between consecutive family members."""

    parameter: int
    required: int
    verified: int
    passed: bool
    left: tuple[int, ...]
    right: tuple[int, ...]


@dataclass(frozen=True)
class TailReport:
    family: str
    units: str
    rate: str
    parameters: tuple[int, ...]
    anchors: tuple[str, ...]
    steps: tuple[StepCheck, ...]
    tail: CoeffList
    passed: bool

    def to_json(self) -> str:
        payload = {
            "family": self.family,
            "units": self.units,
            "rate": self.rate,
            "passed": self.passed,
            "parameters": list(self.parameters),
            "anchors": list(self.anchors),
            "steps": [
                {
                    "parameter": s.parameter,
                    "required": s.required,
                    "verified": s.verified,
                    "passed": s.passed,
                    "left": list(s.left),
                    "right": list(s.right),
                }
                for s in self.steps
            ],
            "tail": {
                "units": self.tail.units,
                "anchor": str(self.tail.anchor),
                "coeffs": list(self.tail.coeffs),
                "normalized": self.tail.normalized,
            },
        }
        return json.dumps(payload, indent=2)

    def to_text(self) -> str:
        lines = [
            f"family: {self.family}",
            f"rate: {self.rate} [{_UNIT_NAMES[self.units]}]",
        ]
        for s in self.steps:
            mark = "PASS" if s.passed else "FAIL"
            lines.append(
                f"step {s.parameter}: required {s.required}  "
                f"verified {s.verified}  {mark}"
            )
            if not s.passed:
                lines.append("  left  " + " ".join(str(c) for c in s.left))
                lines.append("  right " + " ".join(str(c) for c in s.right))
        lines.append("tail: " + " ".join(str(c) for c in self.tail.coeffs))
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _compute_members(jobs: Sequence[tuple], worker: Callable,
                     threads: int | None) -> list:
    def run(job):
        k = job[0]
        try:
            return worker(*job)
        except MemberError:
            raise
        except Exception as exc:
            raise MemberError(
                f"family member at parameter {k} failed: {exc}", k
            ) from exc

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]


def _window_counts(required: Sequence[int], tail_len: int, depth: int,
                   members: int) -> list[int]:
    counts = []
    for j in range(members):
        need = 1
        if j >= 1:
            need = max(need, required[j - 1])
        if j < len(required):
            need = max(need, required[j])
        if j == members - 1:
            need = max(need, tail_len)
        counts.append(need + depth)
    return counts


def _assemble_report(family: str, rate_text: str, params: Sequence[int],
                     step_params: Sequence[int], required: Sequence[int],
                     windows: Sequence[CoeffList], tail_len: int) -> TailReport:
    steps = []
    for i, req in enumerate(required):
        lhs, rhs = windows[i], windows[i + 1]
        cap = min(len(lhs.coeffs), len(rhs.coeffs))
        agree = stable_prefix(lhs, rhs)
        ok = req <= cap and agree >= req
        show = min(max(req, agree + 1), cap)
        steps.append(
            StepCheck(
                parameter=step_params[i],
                required=req,
                verified=agree,
                passed=ok,
                left=normalize(lhs).coeffs[:show],
                right=normalize(rhs).coeffs[:show],
            )
        )
    last = normalize(windows[-1])
    cut = max(0, min(tail_len, len(last.coeffs)))
    tail = CoeffList(last.coeffs[:cut], windows[-1].units, Fraction(0), True)
    return TailReport(
        family=family,
        units=windows[-1].units,
        rate=rate_text,
        parameters=tuple(params),
        anchors=tuple(str(w.anchor) for w in windows),
        steps=tuple(steps),
        tail=tail,
        passed=all(s.passed for s in steps),
    )


# --- rate checkers ------------------------------------------------------

def _family_windows(spec: FamilySpec, rate_fn: Callable[[int], int],
                    depth: int, threads: int | None):
    """Reduced windows for every member, sized to the stepwise rate + depth."""
    params = list(spec.parameters())
    required = [max(0, rate_fn(k)) for k in params[:-1]]
    tail_len = max(0, rate_fn(params[-1]))
    counts = _window_counts(required, tail_len, depth, len(params))

    def worker(k: int, count: int) -> CoeffList:
        qp = reduced_jones(spec.member(k), spec.member_color(k))
        return window_from_reduced(qp, count)

    jobs = list(zip(params, counts))
    return params, required, tail_len, _compute_members(jobs, worker, threads)


def family_tail(spec: FamilySpec, rate, *, depth: int = 2,
                threads: int | None = None) -> TailReport:
    """Verify stepwise agreement of reduced windows and estimate the tail.

    The rate is evaluated at the earlier member of each step.  The tail
    estimate is the last member's normalized window cut to the rate's value
    there; per-step results carry the measured agreement depth, so a failed
    claim still yields a full report.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    rate_fn, rate_text = _coerce_rate(rate)
    params, required, tail_len, windows = _family_windows(
        spec, rate_fn, depth, threads
    )
    return _assemble_report(
        spec.describe(), rate_text, params, params[:-1], required, windows,
        tail_len,
    )


def _varied_min(spec: FamilySpec, earlier: int, later: int) -> int | None:
    """Smallest later-member size among regions that changed over the step."""
    sizes = [ex(later) for _, ex in spec.sizes if ex(later) != ex(earlier)]
    return min(sizes) if sizes else None


def check_bracket_rate(spec: FamilySpec, *, rate=None, depth: int = 2,
                       threads: int | None = None) -> TailReport:
    """Stepwise bracket agreement in A-units for a twist family.

    The default claim is four times the smallest changed region size at the
    later member of each step; a custom rate is evaluated at the later
    member as well.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    params = list(spec.parameters())
    if rate is None:
        rate_fn, rate_text = None, "4*min(k_i)"
    else:
        rate_fn, rate_text = _coerce_rate(rate)
    required = []
    for earlier, later in zip(params, params[1:]):
        if rate_fn is not None:
            required.append(max(0, rate_fn(later)))
            continue
        m = _varied_min(spec, earlier, later)
        required.append(4 * m if m is not None else 0)
    tail_len = required[-1] if required else 1
    counts = _window_counts(required, tail_len, depth, len(params))

    def worker(k: int, count: int) -> CoeffList:
        value = unreduced_colored_jones(spec.member(k), 1).value
        return window_from_bracket(value, count)

    windows = _compute_members(list(zip(params, counts)), worker, threads)
    return _assemble_report(
        spec.describe(), rate_text, params, params[1:], required, windows,
        tail_len,
    )


def check_colored_rate(spec: FamilySpec, *, rate=None, units: str = "A",
                       depth: int = 2,
                       threads: int | None = None) -> TailReport:
    """Stepwise colored agreement for a twist family at fixed or given rate.

    In A-units the members are raw cabled brackets and the default claim is
    4n(k-1)+4 with n the cable color and k the smallest changed region size
    at the later member.  In q-units the members are reduced windows and an
    explicit rate is required.
    """
    if units == "q":
        if rate is None:
            raise ValueError("q-unit checks need an explicit rate")
        return family_tail(spec, rate, depth=depth, threads=threads)
    if units != "A":
        raise ValueError(f"unknown grading units {units!r}")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    params = list(spec.parameters())
    custom = None if rate is None else _coerce_rate(rate)
    rate_text = custom[1] if custom else "4*n*(min(k_i)-1)+4"
    required = []
    for earlier, later in zip(params, params[1:]):
        if custom:
            required.append(max(0, custom[0](later)))
            continue
        n = spec.member_color(later) - 1
        m = _varied_min(spec, earlier, later)
        required.append(max(0, 4 * n * (m - 1) + 4) if m is not None else 0)
    tail_len = required[-1] if required else 1
    counts = _window_counts(required, tail_len, depth, len(params))

    def worker(k: int, count: int) -> CoeffList:
        n = spec.member_color(k) - 1
        if n < 1:
            raise MemberError(
                f"colored checks need color at least 2, got {n + 1} "
                f"at parameter {k}",
                k,
            )
        value = unreduced_colored_jones(spec.member(k), n).value
        return window_from_bracket(value, count)

    windows = _compute_members(list(zip(params, counts)), worker, threads)
    return _assemble_report(
        spec.describe(), rate_text, params, params[1:], required, windows,
        tail_len,
    )


def check_color_stability(diagram: LinkDiagram, colors: Sequence[int], *,
                          twist_shifts: Mapping[int, int] | None = None,
                          diagonal: bool = False, depth: int = 2,
                          threads: int | None = None) -> TailReport:
    """Agreement of cabled bracket windows across consecutive colors.

    Plain mode compares the same diagram at colors n-1 and n to 4n A-terms.
    With ``twist_shifts`` the lower-color member absorbs the per-region
    shifts (accumulating down the chain); every shifted region must keep at
    least one crossing.  ``diagonal`` reverses the direction so sizes grow
    with the color, one shift step per color, defaulting to +1 per region.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    colors = tuple(int(c) for c in colors)
    if not colors:
        raise ValueError("need at least one color")
    if colors[0] < 1:
        raise ValueError("colors start at 1")
    if any(b != a + 1 for a, b in zip(colors, colors[1:])):
        raise ValueError("colors must be consecutive ascending")
    rids = [reg.rid for reg in diagram.twist_regions]
    shifts = dict(twist_shifts) if twist_shifts else {}
    if diagonal and not shifts:
        shifts = {rid: 1 for rid in rids}
    unknown = sorted(set(shifts) - set(rids))
    if unknown:
        raise ValueError(f"unknown region id {unknown[0]} in twist shifts")

    members = []
    for i, c in enumerate(colors):
        mult = i if diagonal else len(colors) - 1 - i
        deltas = {}
        for rid, b in shifts.items():
            d = b * mult
            target = diagram.region(rid).count + d
            if target < 1:
                raise ValueError(
                    f"twist shifts must leave at least one crossing in "
                    f"region {rid} (got {target} at color {c})"
                )
            if d:
                deltas[rid] = d
        members.append((c, set_twists(diagram, deltas) if deltas else diagram))

    required = [4 * c for c in colors[1:]]
    tail_len = required[-1] if required else 1
    counts = _window_counts(required, tail_len, depth, len(colors))

    def worker(c: int, member: LinkDiagram, count: int) -> CoeffList:
        value = unreduced_colored_jones(member, c).value
        return window_from_bracket(value, count)

    jobs = [(c, d, counts[i]) for i, (c, d) in enumerate(members)]
    windows = _compute_members(jobs, worker, threads)
    parts = [diagram.name or "diagram", f"colors {colors[0]}..{colors[-1]}"]
    if shifts:
        body = ", ".join(f"{rid}: {shifts[rid]}" for rid in sorted(shifts))
        parts.append(("diagonal shifts {" if diagonal else "shifts {") + body + "}")
    return _assemble_report(
        "; ".join(parts), "4*n", colors, colors[1:], required, windows,
        tail_len,
    )


def higher_order_windows(spec: FamilySpec, rate, *, orders: int = 1,
                         depth: int = 2,
                         threads: int | None = None) -> list[list[CoeffList]]:
    """Iterated tail subtraction; experimental, no verified claims.

    Level 0 holds each member's normalized window.  Each further level
    subtracts the previous level's last nonempty window (the running tail
    estimate) from every member, strips leading zeros, and records the strip
    offset as the new anchor.  Iteration stops early once every member's
    residual vanishes.
    """
    if orders < 0:
        raise ValueError("orders must be nonnegative")
    rate_fn, _ = _coerce_rate(rate)
    _, _, _, windows = _family_windows(spec, rate_fn, depth, threads)
    levels = [[normalize(w) for w in windows]]
    while len(levels) <= orders:
        prev = levels[-1]
        tail_src = next((w for w in reversed(prev) if w.coeffs), None)
        if tail_src is None:
            break
        t = tail_src.coeffs
        nxt = []
        for w in prev:
            m = min(len(w.coeffs), len(t))
            diff = [w.coeffs[j] - t[j] for j in range(m)]
            z = 0
            while z < len(diff) and diff[z] == 0:
                z += 1
            nxt.append(CoeffList(tuple(diff[z:]), w.units, Fraction(z), False))
        levels.append(nxt)
    return levels
