"""Planar matchings, projector calculus, and network evaluation.

Encoding of a matching for a morphism with ``bot`` bottom points and
``top`` top points: nodes are numbered 0..bot-1 along the bottom from
left to right, then bot..bot+top-1 along the top from RIGHT to LEFT,
so the whole boundary reads counterclockwise as one cycle.  ``pair[i]``
is the partner of node i.  A matching is planar exactly when the arcs
are non-crossing in this cyclic order (balanced-bracket condition).

Morphisms compose bottom-up: ``compose(f, g)`` stacks g on top of f.
Closed loops created while gluing contribute factors of the loop value
delta = -A^2 - A^(-2).

A ``TLMorphism`` keeps one shared polynomial denominator for all its
matchings, so the composition inner loop works with plain polynomial
numerators; the denominator only ever multiplies once per operation,
and a gcd normalization runs at most once per high-level step.  The
``terms`` property presents the conventional matching -> coefficient
view.

The heavyweight objects here are the Jones-Wenzl projectors, built by
the Wenzl recursion and cached in memory and optionally on disk, and
the trivalent vertex morphisms built from them.  ``SliceProgram`` and
``evaluate`` provide a small sweep language for closed networks (theta
and tetrahedron graphs, drums, smoothing networks); these serve as the
first-principles oracle for the closed-form evaluations elsewhere.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    DELTA,
    ONE,
    ZERO,
    AdmissibilityError,
    ExactDivisionError,
    LaurentPoly,
    RationalFn,
    admissible,
    delta,
    exact_div,
    poly_gcd,
)

RF_ONE = RationalFn.from_poly(ONE)
RF_ZERO = RationalFn.from_poly(ZERO)


class SliceError(ValueError):
    """Arity or wiring failure in a slice program, reported by index."""


# -- raw matching plumbing -------------------------------------------


def idpair(n: int) -> tuple[int, ...]:
    """Identity matching on n strands (as an n -> n morphism)."""
    return tuple(2 * n - 1 - i for i in range(2 * n))


def is_planar_pair(pair: tuple[int, ...]) -> bool:
    stack = []
    seen = set()
    for i, j in enumerate(pair):
        if i in seen:
            if not stack or stack[-1] != i:
                return False
            stack.pop()
        else:
            seen.add(j)
            stack.append(j)
    return not stack


def glue_pair(p1, b1, t1, p2, b2, t2):
    """Glue the top of p1 (b1 -> t1) to the bottom of p2 (b2 -> t2).

    Requires t1 == b2.  Returns (pair, loops) for the composite
    b1 -> t2 morphism, where loops counts closed circles swallowed in
    the middle.  Seam position p identifies p1 node b1 + t1-1-p with
    p2 node p.
    """
    out = [-1] * (b1 + t2)
    seen = bytearray(t1)  # seam nodes by p1-top offset
    for src in range(b1 + t2):
        if out[src] >= 0:
            continue
        if src < b1:
            side, node = 0, p1[src]
        else:
            side, node = 1, p2[b2 + (src - b1)]
        while True:
            if side == 0:
                if node < b1:
                    dst = node
                    break
                a = node - b1
                seen[a] = 1
                node = p2[t1 - 1 - a]
                side = 1
            else:
                if node >= b2:
                    dst = b1 + (node - b2)
                    break
                a = t1 - 1 - node
                seen[a] = 1
                node = p1[b1 + a]
                side = 0
        out[src] = dst
        out[dst] = src
    loops = 0
    for a0 in range(t1):
        if seen[a0]:
            continue
        loops += 1
        a = a0
        while not seen[a]:
            seen[a] = 1
            partner = p1[b1 + a] - b1
            seen[partner] = 1
            q = p2[t1 - 1 - partner]
            a = t1 - 1 - q
    return tuple(out), loops


def tensor_pair(p1, b1, t1, p2, b2, t2):
    """Place p2 to the right of p1."""
    B, T = b1 + b2, t1 + t2
    out = [-1] * (B + T)

    def m1(x):
        if x < b1:
            return x
        return B + T - 1 - (t1 - 1 - (x - b1))

    def m2(x):
        if x < b2:
            return b1 + x
        return B + T - 1 - (t1 + t2 - 1 - (x - b2))

    for i in range(b1 + t1):
        out[m1(i)] = m1(p1[i])
    for j in range(b2 + t2):
        out[m2(j)] = m2(p2[j])
    return tuple(out)


def close_pair(pair, n):
    """Trace an n -> n matching: join bottom i to top position i."""
    loops = 0
    seen = [False] * (2 * n)
    for s in range(2 * n):
        if seen[s]:
            continue
        loops += 1
        cur = s
        while not seen[cur]:
            seen[cur] = True
            nxt = pair[cur]
            seen[nxt] = True
            if nxt < n:
                cur = n + (n - 1 - nxt)
            else:
                cur = n - 1 - (nxt - n)
    return loops


@dataclass(frozen=True)
class Matching:
    """A planar pairing presented as a bottom -> top morphism shape."""

    bot: int
    top: int
    pair: tuple[int, ...]

    def __post_init__(self):
        if len(self.pair) != self.bot + self.top:
            raise ValueError(
                f"pairing has {len(self.pair)} nodes, expected {self.bot + self.top}"
            )
        for i, j in enumerate(self.pair):
            if j == i or not 0 <= j < len(self.pair) or self.pair[j] != i:
                raise ValueError(f"not an involution at node {i}")
        if not is_planar_pair(self.pair):
            raise ValueError("pairing has crossing arcs")

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pair) if i < j]


_DELTA_POWS = [ONE, DELTA]


def _delta_pow(k: int) -> LaurentPoly:
    while len(_DELTA_POWS) <= k:
        _DELTA_POWS.append(_DELTA_POWS[-1] * DELTA)
    return _DELTA_POWS[k]


class TLMorphism:
    """Linear combination of planar matchings over a common denominator.

    ``nums`` maps raw pair tuples to LaurentPoly numerators; the true
    coefficient of a matching is nums[pair] / den.  ``terms`` presents
    the matching -> RationalFn view.
    """

    __slots__ = ("bot", "top", "nums", "den")

    def __init__(self, bot: int, top: int, terms=None):
        if (bot + top) % 2:
            raise ValueError(f"odd total boundary {bot}+{top}")
        self.bot = bot
        self.top = top
        self.nums: dict = {}
        self.den = ONE
        if terms:
            den = ONE
            fixed = {}
            for pair, c in terms.items():
                if isinstance(c, RationalFn):
                    fixed[pair] = c
                    if not c.den.is_one():
                        den = den * c.den
                else:
                    p = c if isinstance(c, LaurentPoly) else LaurentPoly({0: c})
                    fixed[pair] = RationalFn.from_poly(p)
            self.den = den
            for pair, c in fixed.items():
                num = c.num * exact_div(den, c.den)
                if not num.is_zero():
                    self.nums[pair] = num
            self._strip()

    @classmethod
    def _raw(cls, bot, top, nums, den) -> "TLMorphism":
        out = cls.__new__(cls)
        out.bot, out.top, out.nums, out.den = bot, top, nums, den
        return out

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "TLMorphism":
        return cls._raw(n, n, {idpair(n): ONE}, ONE)

    @classmethod
    def zero(cls, bot: int, top: int) -> "TLMorphism":
        return cls._raw(bot, top, {}, ONE)

    @classmethod
    def hook(cls, n: int, i: int) -> "TLMorphism":
        """The cup-cap generator e_i on n strands (0-indexed position)."""
        if not 0 <= i <= n - 2:
            raise ValueError(f"hook position {i} out of range for {n} strands")
        pair = [-1] * (2 * n)
        pair[i], pair[i + 1] = i + 1, i
        ti, tj = 2 * n - 1 - i, 2 * n - 2 - i
        pair[ti], pair[tj] = tj, ti
        for k in range(n):
            if k in (i, i + 1):
                continue
            pair[k] = 2 * n - 1 - k
            pair[2 * n - 1 - k] = k
        return cls._raw(n, n, {tuple(pair): ONE}, ONE)

    @classmethod
    def cap(cls, n: int, i: int) -> "TLMorphism":
        """n -> n-2, joining bottom points i, i+1."""
        if n < 2 or not 0 <= i <= n - 2:
            raise ValueError(f"cap position {i} out of range for {n} strands")
        pair = [-1] * (2 * n - 2)
        pair[i], pair[i + 1] = i + 1, i
        pos = 0
        for k in range(n):
            if k in (i, i + 1):
                continue
            t = n + (n - 2 - 1 - pos)
            pair[k] = t
            pair[t] = k
            pos += 1
        return cls._raw(n, n - 2, {tuple(pair): ONE}, ONE)

    @classmethod
    def cup(cls, n: int, i: int) -> "TLMorphism":
        """n -> n+2, inserting a new nested arc at top position i."""
        if not 0 <= i <= n:
            raise ValueError(f"cup position {i} out of range for {n} strands")
        m = n + 2
        pair = [-1] * (n + m)
        ti, tj = n + (m - 1 - i), n + (m - 2 - i)
        pair[ti], pair[tj] = tj, ti
        for k in range(n):
            t = k if k < i else k + 2
            tt = n + (m - 1 - t)
            pair[k] = tt
            pair[tt] = k
        return cls._raw(n, m, {tuple(pair): ONE}, ONE)

    # -- views --------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Matching -> RationalFn coefficient view (built on demand)."""
        if self.den.is_one():
            return {p: RationalFn.from_poly(n) for p, n in self.nums.items()}
        return {p: RationalFn(n, self.den) for p, n in self.nums.items()}

    def coeff(self, pair) -> RationalFn:
        num = self.nums.get(tuple(pair))
        if num is None:
            return RF_ZERO
        return RationalFn(num, self.den)

    def matchings(self) -> list[Matching]:
        return [Matching(self.bot, self.top, p) for p in self.nums]

    # -- linear structure ---------------------------------------------

    def _strip(self) -> None:
        # drop the denominator when every numerator carries it
        if self.den.is_one():
            return
        if not self.nums:
            self.den = ONE
            return
        g = self.den
        for num in self.nums.values():
            g = poly_gcd(g, num)
            if g.is_one():
                return
        self.den = exact_div(self.den, g)
        for pair in list(self.nums):
            self.nums[pair] = exact_div(self.nums[pair], g)

    def __add__(self, other: "TLMorphism") -> "TLMorphism":
        if (self.bot, self.top) != (other.bot, other.top):
            raise ValueError("adding morphisms of different shapes")
        if self.den == other.den:
            acc = dict(self.nums)
            for pair, num in other.nums.items():
                s = acc.get(pair)
                s = num if s is None else s + num
                if s.is_zero():
                    acc.pop(pair, None)
                else:
                    acc[pair] = s
            out = TLMorphism._raw(self.bot, self.top, acc, self.den)
        else:
            acc = {p: n * other.den for p, n in self.nums.items()}
            for pair, num in other.nums.items():
                num = num * self.den
                s = acc.get(pair)
                s = num if s is None else s + num
                if s.is_zero():
                    acc.pop(pair, None)
                else:
                    acc[pair] = s
            out = TLMorphism._raw(self.bot, self.top, acc, self.den * other.den)
            out._strip()
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "TLMorphism":
        if isinstance(c, RationalFn):
            num_c, den_c = c.num, c.den
        elif isinstance(c, LaurentPoly):
            num_c, den_c = c, ONE
        else:
            num_c, den_c = LaurentPoly({0: c}), ONE
        if num_c.is_zero():
            return TLMorphism.zero(self.bot, self.top)
        nums = {p: n * num_c for p, n in self.nums.items()}
        out = TLMorphism._raw(self.bot, self.top, nums, self.den * den_c)
        if not den_c.is_one():
            out._strip()
        return out

    def is_zero(self) -> bool:
        return not self.nums

    def __eq__(self, other):
        if not isinstance(other, TLMorphism):
            return NotImplemented
        if (self.bot, self.top) != (other.bot, other.top):
            return False
        if set(self.nums) != set(other.nums):
            return (self - other).is_zero()
        for pair, num in self.nums.items():
            if num * other.den != other.nums[pair] * self.den:
                return False
        return True

    def __hash__(self):
        raise TypeError("TLMorphism is not hashable")

    def __repr__(self):
        return f"TLMorphism({self.bot}->{self.top}, {len(self.nums)} terms)"


def compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """Stack g on top of f (f first).  Needs f.top == g.bot."""
    if f.top != g.bot:
        raise ValueError(f"cannot compose {f.top} outputs into {g.bot} inputs")
    acc: dict = {}
    fb, ft, gb, gt = f.bot, f.top, g.bot, g.top
    for p1, c1 in f.nums.items():
        for p2, c2 in g.nums.items():
            pair, loops = glue_pair(p1, fb, ft, p2, gb, gt)
            c = c1 * c2
            if loops:
                c = c * _delta_pow(loops)
            s = acc.get(pair)
            s = c if s is None else s + c
            if s.is_zero():
                acc.pop(pair, None)
            else:
                acc[pair] = s
    out = TLMorphism._raw(fb, gt, acc, f.den * g.den)
    out._strip()
    return out


def tensor(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """Place g to the right of f."""
    acc: dict = {}
    for p1, c1 in f.nums.items():
        for p2, c2 in g.nums.items():
            pair = tensor_pair(p1, f.bot, f.top, p2, g.bot, g.top)
            acc[pair] = c1 * c2
    out = TLMorphism._raw(f.bot + g.bot, f.top + g.top, acc, f.den * g.den)
    out._strip()
    return out


def boxed(g: TLMorphism, left: int, right: int) -> TLMorphism:
    """g with identity wires added on both sides."""
    out = g
    if left:
        out = tensor(TLMorphism.identity(left), out)
    if right:
        out = tensor(out, TLMorphism.identity(right))
    return out


def closure(f: TLMorphism) -> RationalFn:
    """Markov trace: join top to bottom around the side."""
    if f.bot != f.top:
        raise ValueError(f"cannot close a {f.bot} -> {f.top} morphism")
    total = ZERO
    for pair, num in f.nums.items():
        total = total + num * _delta_pow(close_pair(pair, f.bot))
    return RationalFn(total, f.den).reduce()


# -- Jones-Wenzl projectors ------------------------------------------

_JW_CACHE: dict[int, TLMorphism] = {}
_JW_LOCK = threading.Lock()
_CACHE_HEADER = "skeinkit-jw v1 loop=-A^2-A^-2"
_cache_dir_override: str | None = None


def set_cache_dir(path: str | None) -> None:
    """Override the on-disk projector cache location ("" disables)."""
    global _cache_dir_override
    _cache_dir_override = path


def _cache_path() -> str | None:
    base = _cache_dir_override
    if base is None:
        base = os.environ.get("SKEIN_CACHE_DIR")
    if base is None:
        base = os.path.join(os.path.expanduser("~"), ".cache", "skeinkit")
    if not base:
        return None
    return os.path.join(base, "projectors.txt")


def _poly_to_text(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0:0"
    return ",".join(f"{e}:{v}" for e, v in sorted(p.terms.items()))


def _poly_from_text(t: str) -> LaurentPoly:
    terms = {}
    for bit in t.split(","):
        e, v = bit.split(":")
        terms[int(e)] = int(v) if "/" not in v else Fraction(v)
    return LaurentPoly(terms)


def _load_jw_cache() -> None:
    path = _cache_path()
    if path is None or not os.path.exists(path):
        return
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0] != _CACHE_HEADER:
            return
        i = 1
        loaded = {}
        while i < len(lines):
            head = lines[i].split()
            if head[0] != "n":
                return
            n, count = int(head[1]), int(head[2])
            den = _poly_from_text(head[3])
            nums = {}
            for j in range(count):
                pair_s, num_s = lines[i + 1 + j].split(" ", 1)
                pair = tuple(int(x) for x in pair_s.split(","))
                nums[pair] = _poly_from_text(num_s)
            loaded[n] = TLMorphism._raw(n, n, nums, den)
            i += 1 + count
        for n, m in loaded.items():
            _JW_CACHE.setdefault(n, m)
    except (OSError, ValueError, IndexError):
        # stale or foreign cache: recompute from scratch
        return


def _save_jw_cache() -> None:
    path = _cache_path()
    if path is None:
        return
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="ascii") as fh:
            fh.write(_CACHE_HEADER + "\n")
            for n in sorted(_JW_CACHE):
                m = _JW_CACHE[n]
                fh.write(f"n {n} {len(m.nums)} {_poly_to_text(m.den)}\n")
                for pair, num in sorted(m.nums.items()):
                    fh.write(
                        ",".join(str(x) for x in pair) + " " + _poly_to_text(num) + "\n"
                    )
    except OSError:
        pass


def jones_wenzl(n: int) -> TLMorphism:
    """The n-strand projector, by the Wenzl recursion.

    f(1) = id; f(n) = f(n-1)x1 - (delta(n-2)/delta(n-1)) *
    (f(n-1)x1) e_{n-1} (f(n-1)x1).  Memoized in process and persisted
    to a small text cache keyed by the loop-value convention.
    """
    if n < 0:
        raise ValueError(f"projector color must be >= 0, got {n}")
    if n == 0:
        return TLMorphism._raw(0, 0, {(): ONE}, ONE)
    with _JW_LOCK:
        if not _JW_CACHE:
            _load_jw_cache()
        if n in _JW_CACHE:
            return _JW_CACHE[n]
        _JW_CACHE.setdefault(1, TLMorphism.identity(1))
        top = max(_JW_CACHE)
        for m in range(top + 1, n + 1):
            prev = tensor(_JW_CACHE[m - 1], TLMorphism.identity(1))
            hooked = compose(compose(prev, TLMorphism.hook(m, m - 2)), prev)
            coeff = RationalFn(delta(m - 2), delta(m - 1))
            _JW_CACHE[m] = prev - hooked.scaled(coeff)
        _save_jw_cache()
        return _JW_CACHE[n]


def capnest(m: int) -> TLMorphism:
    """2m -> 0, m nested caps."""
    pair = tuple(2 * m - 1 - i for i in range(2 * m))
    return TLMorphism._raw(2 * m, 0, {pair: ONE}, ONE)


def cupnest(m: int) -> TLMorphism:
    """0 -> 2m, m nested cups."""
    pair = tuple(2 * m - 1 - i for i in range(2 * m))
    return TLMorphism._raw(0, 2 * m, {pair: ONE}, ONE)


@dataclass(frozen=True)
class TrivalentVertex:
    """An admissible colored vertex with its internal strand counts."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if not admissible(self.a, self.b, self.c):
            raise AdmissibilityError(
                f"({self.a}, {self.b}, {self.c}) is not an admissible triple"
            )

    @property
    def internal(self) -> tuple[int, int, int]:
        x = (self.a + self.b - self.c) // 2
        y = (self.a + self.c - self.b) // 2
        z = (self.b + self.c - self.a) // 2
        return x, y, z


_VERTEX_CACHE: dict[tuple, TLMorphism] = {}
_CHANNEL_CACHE: dict[tuple, TLMorphism] = {}


def vertex_morphism(a: int, b: int, c: int, orientation: str = "up") -> TLMorphism:
    """The clasped trivalent vertex as a morphism.

    orientation "up": legs a and b enter from below (a on the left),
    leg c leaves above; the morphism is (a+b) -> c.  "down" is the
    mirror, c -> (a+b).  All three legs carry projectors.
    """
    key = (a, b, c, orientation)
    cached = _VERTEX_CACHE.get(key)
    if cached is not None:
        return cached
    v = TrivalentVertex(a, b, c)
    x, y, z = v.internal
    fa, fb, fc = jones_wenzl(a), jones_wenzl(b), jones_wenzl(c)
    if orientation == "up":
        legs = tensor(fa, fb)
        turn = boxed(capnest(x), y, z)
        out = compose(compose(legs, turn), fc)
    elif orientation == "down":
        turn = boxed(cupnest(x), y, z)
        legs = tensor(fa, fb)
        out = compose(compose(fc, turn), legs)
    else:
        raise ValueError(f"orientation must be 'up' or 'down', got {orientation!r}")
    _VERTEX_CACHE[key] = out
    return out


def channel_element(n: int, p: int) -> TLMorphism:
    """Two n-cables joined through a 2p channel: a 2n -> 2n morphism.

    compose(vertex up, vertex down) for the triple (n, n, 2p); the
    p = n case is the full 2n-strand projector (clasp absorption), and
    p = 0 is the clasped turn-back.
    """
    if not 0 <= p <= n:
        raise ValueError(f"channel needs 0 <= p <= n, got p={p}, n={n}")
    key = (n, p)
    cached = _CHANNEL_CACHE.get(key)
    if cached is None:
        up = vertex_morphism(n, n, 2 * p, "up")
        down = vertex_morphism(n, n, 2 * p, "down")
        cached = _CHANNEL_CACHE[key] = compose(up, down)
    return cached


# -- slice programs ---------------------------------------------------


@dataclass
class SliceProgram:
    """A closed network as an ordered sweep of local generators.

    Each slice is a tagged tuple acting at a position on the current
    boundary: ("cup", pos), ("cap", pos), ("projector", n, pos),
    ("vertex", a, b, c, pos, orientation) and ("crossing", sign, pos).
    Vertex orientation "up" consumes a+b points and emits c, "down"
    consumes c and emits a+b (a leftmost).  Crossing slices act on two
    single strands; sign -1 is the twist-region kind whose A-weighted
    smoothing is the horizontal one.
    """

    slices: list = field(default_factory=list)

    def cup(self, pos: int) -> "SliceProgram":
        self.slices.append(("cup", pos))
        return self

    def cap(self, pos: int) -> "SliceProgram":
        self.slices.append(("cap", pos))
        return self

    def projector(self, n: int, pos: int) -> "SliceProgram":
        self.slices.append(("projector", n, pos))
        return self

    def vertex(self, a: int, b: int, c: int, pos: int, orientation: str = "up"):
        self.slices.append(("vertex", a, b, c, pos, orientation))
        return self

    def crossing(self, sign: int, pos: int) -> "SliceProgram":
        self.slices.append(("crossing", sign, pos))
        return self

    def morphism(self, m: TLMorphism, pos: int) -> "SliceProgram":
        self.slices.append(("morphism", m, pos))
        return self


_CROSSINGS: dict[int, TLMorphism] = {}


def crossing_morphism(sign: int) -> TLMorphism:
    """Kauffman expansion of a single crossing, vertical frame.

    sign -1: A^(-1) . identity + A . hook (the twist-region kind);
    sign +1 is the mirror image.
    """
    key = -1 if sign < 0 else 1
    cached = _CROSSINGS.get(key)
    if cached is None:
        ident = TLMorphism.identity(2)
        hook = TLMorphism.hook(2, 0)
        cached = ident.scaled(LaurentPoly.monomial(key)) + hook.scaled(
            LaurentPoly.monomial(-key)
        )
        _CROSSINGS[key] = cached
    return cached


def _slice_to_morphism(s) -> TLMorphism:
    kind = s[0]
    if kind == "cup":
        return cupnest(1)
    if kind == "cap":
        return capnest(1)
    if kind == "projector":
        return jones_wenzl(s[1])
    if kind == "vertex":
        return vertex_morphism(s[1], s[2], s[3], s[5])
    if kind == "crossing":
        return crossing_morphism(s[1])
    if kind == "morphism":
        return s[1]
    raise SliceError(f"unknown slice kind {kind!r}")


def _slice_pos(s) -> int:
    if s[0] in ("cup", "cap"):
        return s[1]
    if s[0] == "projector":
        return s[2]
    if s[0] == "vertex":
        return s[4]
    if s[0] in ("crossing", "morphism"):
        return s[2]
    raise SliceError(f"unknown slice kind {s[0]!r}")


def evaluate(program: SliceProgram) -> RationalFn:
    """Evaluate a closed slice program to its bracket value.

    The sweep state is a 0 -> w morphism; every slice must fit inside
    the current boundary, and the final boundary must be empty.  Arity
    violations raise ``SliceError`` naming the slice index.
    """
    state = TLMorphism._raw(0, 0, {(): ONE}, ONE)
    for i, s in enumerate(program.slices):
        g = _slice_to_morphism(s)
        pos = _slice_pos(s)
        w = state.top
        if pos < 0 or pos + g.bot > w:
            raise SliceError(
                f"slice {i} ({s[0]}): needs points {pos}..{pos + g.bot - 1} "
                f"but the boundary has width {w}"
            )
        state = compose(state, boxed(g, pos, w - pos - g.bot))
        if state.is_zero():
            return RF_ZERO
    if state.top != 0:
        raise SliceError(
            f"program left {state.top} open points; networks must close"
        )
    num = state.nums.get((), ZERO)
    return RationalFn(num, state.den).reduce()


def theta_program(a: int, b: int, c: int) -> SliceProgram:
    """Theta network: two vertices joined along a, b, c."""
    TrivalentVertex(a, b, c)
    prog = SliceProgram()
    for i in range(c):
        prog.cup(i)
    prog.projector(c, 0)
    prog.vertex(a, b, c, 0, "down")
    prog.vertex(a, b, c, 0, "up")
    for i in range(c - 1, -1, -1):
        prog.cap(i)
    return prog


def tet_program(A: int, B: int, E: int, C: int, D: int, F: int) -> SliceProgram:
    """Tetrahedron network with vertices (A,B,E), (B,C,F), (C,D,E), (D,A,F).

    Opposite edge pairs are (A,C), (B,D), (E,F).  Built as: open the E
    edge, split into cables A (left) and B (right), pass an F-rung that
    turns cable A into D and cable B into C, then merge back into E.
    """
    for tri in ((A, B, E), (B, C, F), (C, D, E), (D, A, F)):
        TrivalentVertex(*tri)
    prog = SliceProgram()
    for i in range(E):
        prog.cup(i)
    prog.projector(E, 0)
    prog.vertex(A, B, E, 0, "down")     # boundary [A, B, E]
    prog.vertex(D, F, A, 0, "down")     # boundary [D, F, B, E]
    prog.vertex(F, B, C, D, "up")       # boundary [D, C, E]
    prog.vertex(D, C, E, 0, "up")       # boundary [E, E]
    for i in range(E - 1, -1, -1):
        prog.cap(i)
    return prog


def _plat_pairs(r: int, n: int) -> list[tuple[int, int]]:
    # cyclic plat closure of r side-by-side columns of two n-cables:
    # column i owns positions 2n*i .. 2n*i+2n-1 (left cable then right).
    # Right cable of column i bends into the left cable of column i+1;
    # the wrap-around bundle from the last column nests over everything.
    w = 2 * n * r
    pairs = [(s, w - 1 - s) for s in range(n)]
    for i in range(r - 1):
        base = 2 * n * i + n
        nxt = 2 * n * (i + 1)
        pairs.extend((base + s, nxt + n - 1 - s) for s in range(n))
    return pairs


def plat_cups(r: int, n: int) -> TLMorphism:
    """Top closure of a cyclic arrangement of r two-cable columns.

    A 0 -> 2rn morphism: one n-strand bundle joins the right cable of
    each column to the left cable of the next, cyclically; the
    wrap-around bundle nests over the rest.
    """
    if r < 1 or n < 1:
        raise ValueError(f"plat closure needs r >= 1 and n >= 1, got r={r}, n={n}")
    w = 2 * n * r
    partner = [0] * w
    for a, b in _plat_pairs(r, n):
        # node index for top position p is w-1-p
        na, nb = w - 1 - a, w - 1 - b
        partner[na], partner[nb] = nb, na
    return TLMorphism(0, w, {tuple(partner): ONE})


def plat_caps(r: int, n: int) -> TLMorphism:
    """Bottom closure mirroring ``plat_cups``: a 2rn -> 0 morphism."""
    if r < 1 or n < 1:
        raise ValueError(f"plat closure needs r >= 1 and n >= 1, got r={r}, n={n}")
    w = 2 * n * r
    partner = [0] * w
    for a, b in _plat_pairs(r, n):
        partner[a], partner[b] = b, a
    return TLMorphism(w, 0, {tuple(partner): ONE})


def drum(n: int, rungs: list[int]) -> SliceProgram:
    """Closed pretzel-shaped network: an n-colored cycle pair with rungs.

    Two concentric n-cables joined by r vertical rungs of even colors
    2p_i, one per column, closed cyclically by plat bundles; 2r
    trivalent vertices in all.  A single positive rung pinches the
    cycle pair into a dumbbell, which a clasp kills, so the value is
    0; all rungs colored 0 leave two disjoint clasped cycles, value
    delta(n)^2.  Odd or inadmissible rung colors raise
    ``AdmissibilityError``; the rung list must be nonempty.
    """
    if not rungs:
        raise ValueError("drum needs at least one rung")
    ps = []
    for c in rungs:
        if c % 2:
            raise AdmissibilityError(f"rung color {c} is odd")
        if not admissible(n, n, c):
            raise AdmissibilityError(f"(n, n, {c}) inadmissible for n={n}")
        ps.append(c // 2)
    r = len(ps)
    prog = SliceProgram()
    prog.morphism(plat_cups(r, n), 0)
    for i, p in enumerate(ps):
        prog.morphism(channel_element(n, p), 2 * n * i)
    prog.morphism(plat_caps(r, n), 0)
    return prog


_CABLED: dict[tuple[int, int], TLMorphism] = {}


def cabled_crossing(n: int, sign: int) -> TLMorphism:
    """One crossing of two n-cables, as n^2 single crossings.

    A 2n -> 2n morphism: the right bundle passes across the left one,
    every elementary crossing carrying the given sign.  No projectors
    are attached; clasp the legs separately when needed.
    """
    if n < 1:
        raise ValueError(f"cabled_crossing needs n >= 1, got {n}")
    key = (n, -1 if sign < 0 else 1)
    cached = _CABLED.get(key)
    if cached is None:
        x = crossing_morphism(key[1])
        cached = TLMorphism.identity(2 * n)
        # move each strand of the right bundle across the left bundle
        for i in range(n):
            for j in range(n - 1 + i, i - 1, -1):
                cached = compose(cached, boxed(x, j, 2 * n - j - 2))
        _CABLED[key] = cached
    return cached


def turnback(n: int, i: int) -> TLMorphism:
    """Bare i-th clasp-smoothing pattern of a two-cable crossing.

    A 2n -> 2n morphism: i strands pass straight through on each outer
    side while the inner 2(n-i) turn back as nested bends, top and
    bottom.  turnback(n, n) is the identity.  No projectors attached.
    """
    if not 0 <= i <= n:
        raise ValueError(f"turnback needs 0 <= i <= n, got i={i}, n={n}")
    w = 2 * n
    partner = [0] * (2 * w)
    for s in range(i):
        # through strands: bottom position s <-> top position s
        for a, b in ((s, 2 * w - 1 - s), (w - 1 - s, w + s)):
            partner[a], partner[b] = b, a
    for t in range(n - i):
        # nested bends between positions i+t and w-1-i-t, both sides
        lo, hi = i + t, w - 1 - i - t
        partner[lo], partner[hi] = hi, lo
        top_lo, top_hi = 2 * w - 1 - lo, 2 * w - 1 - hi
        partner[top_lo], partner[top_hi] = top_hi, top_lo
    return TLMorphism(w, w, {tuple(partner): ONE})
