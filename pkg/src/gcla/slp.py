"""Straight-line programs over the binary alphabet.

An :class:`Slp` is an immutable list of rules.  Rule ``i`` is either a
terminal ``("T", bit)`` or a concatenation ``("C", left, right)`` of two
rules with smaller indices.  The expansion of the start rule is the string
the grammar represents; the grammar size is the number of rules.

Grammars are assembled with a :class:`GrammarBuilder`, which hash-conses
rules so that identical sub-grammars are shared automatically.  The
module-level helpers (:func:`concat`, :func:`repeat`, :func:`zeros`, ...) are
thin functional wrappers around a fresh builder.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, ElementOutOfUniverse, FormatError, InvalidSymbol, LengthOverflow

MAX_LENGTH = 2**63 - 1
DEFAULT_BUDGET = 1 << 27

# rules whose expansion is at most this long get their string cached by expand()
_SHORT = 4096

Rule = tuple


def _check_bit(bit) -> int:
    if bit not in (0, 1) or isinstance(bit, bool):
        raise InvalidSymbol(f"symbol {bit!r} is not in {{0, 1}}")
    return int(bit)


def _checked_add(x: int, y: int) -> int:
    total = x + y
    if total > MAX_LENGTH:
        raise LengthOverflow(f"expansion length {total} exceeds 2^63-1")
    return total


class Slp:
    """Immutable straight-line program.

    Per-rule expansion lengths, one-counts, parse-tree depths and a
    "uniform bit" flag (the bit if the rule expands to a single run, else -1)
    are computed once at construction.
    """

    __slots__ = ("_rules", "_start", "_lengths", "_ones", "_depths", "_uniform")

    def __init__(self, rules: Iterable[Sequence], start: int | None = None):
        rules = tuple(tuple(r) for r in rules)
        if not rules:
            raise ValueError("an SLP needs at least one rule")
        lengths, ones, depths, uniform = [], [], [], []
        for i, rule in enumerate(rules):
            if rule[0] == "T" and len(rule) == 2:
                bit = _check_bit(rule[1])
                lengths.append(1)
                ones.append(bit)
                depths.append(0)
                uniform.append(bit)
            elif rule[0] == "C" and len(rule) == 3:
                _, l, r = rule
                if not (0 <= l < i and 0 <= r < i):
                    raise ValueError(f"rule {i} references a rule that is not earlier: {rule}")
                lengths.append(_checked_add(lengths[l], lengths[r]))
                ones.append(ones[l] + ones[r])
                depths.append(1 + max(depths[l], depths[r]))
                uniform.append(uniform[l] if uniform[l] == uniform[r] else -1)
            else:
                raise ValueError(f"malformed rule {i}: {rule!r}")
        if start is None:
            start = len(rules) - 1
        if not 0 <= start < len(rules):
            raise ValueError(f"start index {start} out of range")
        self._rules = rules
        self._start = start
        self._lengths = tuple(lengths)
        self._ones = tuple(ones)
        self._depths = tuple(depths)
        self._uniform = tuple(uniform)

    @property
    def rules(self) -> tuple:
        return self._rules

    @property
    def start(self) -> int:
        return self._start

    @property
    def size(self) -> int:
        """Grammar size: the number of rules."""
        return len(self._rules)

    def __len__(self) -> int:
        return self._lengths[self._start]

    @property
    def length(self) -> int:
        """Length of the expansion (the uncompressed dimension)."""
        return self._lengths[self._start]

    @property
    def depth(self) -> int:
        return self._depths[self._start]

    def ones(self) -> int:
        """Number of 1s in the expansion."""
        return self._ones[self._start]

    def expansion_length(self, i: int) -> int:
        return self._lengths[i]

    def rule_uniform(self, i: int) -> int:
        return self._uniform[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Slp):
            return NotImplemented
        return self._rules == other._rules and self._start == other._start

    def __hash__(self) -> int:
        return hash((self._rules, self._start))

    def __repr__(self) -> str:
        return f"Slp(size={self.size}, length={self.length})"


class GrammarBuilder:
    """Mutable, hash-consed rule table used to assemble SLPs.

    Every method returns a rule id local to this builder.  Call
    :meth:`build` to extract an immutable :class:`Slp` rooted at some id.
    """

    def __init__(self):
        self._rules: list[tuple] = []
        self._lengths: list[int] = []
        self._index: dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self._rules)

    def length(self, x: int) -> int:
        return self._lengths[x]

    def _intern(self, rule: tuple, length: int) -> int:
        idx = self._index.get(rule)
        if idx is None:
            idx = len(self._rules)
            self._rules.append(rule)
            self._lengths.append(length)
            self._index[rule] = idx
        return idx

    def terminal(self, bit: int) -> int:
        return self._intern(("T", _check_bit(bit)), 1)

    def concat(self, left: int, right: int) -> int:
        length = _checked_add(self._lengths[left], self._lengths[right])
        return self._intern(("C", left, right), length)

    def concat_all(self, parts: Sequence[int | None]) -> int:
        """Concatenate parts left to right as a balanced tree; ``None`` entries are skipped."""
        layer = [p for p in parts if p is not None]
        if not layer:
            raise ValueError("cannot build the empty string")
        while len(layer) > 1:
            nxt = [self.concat(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def power(self, x: int, alpha: int) -> int:
        """Rule for the alpha-fold repetition of rule x (repeated squaring)."""
        if alpha < 1:
            raise ValueError("alpha must be >= 1")
        if self._lengths[x] * alpha > MAX_LENGTH:
            raise LengthOverflow(f"{alpha} repetitions of length {self._lengths[x]} overflow")
        squares = [x]
        for _ in range(alpha.bit_length() - 1):
            squares.append(self.concat(squares[-1], squares[-1]))
        acc = None
        # combine high bits first so that rules for prefixes of alpha are shared
        for i in range(alpha.bit_length() - 1, -1, -1):
            if alpha >> i & 1:
                acc = squares[i] if acc is None else self.concat(acc, squares[i])
        return acc

    def zeros(self, k: int) -> int | None:
        """Rule for 0^k, or None when k == 0 (the empty block is skipped)."""
        if k < 0:
            raise ValueError("negative block length")
        return self.power(self.terminal(0), k) if k else None

    def ones(self, k: int) -> int | None:
        if k < 0:
            raise ValueError("negative block length")
        return self.power(self.terminal(1), k) if k else None

    def char_vector(self, elements: Iterable[int], universe: int) -> int:
        """Rule for the characteristic vector of a subset of {1..universe}."""
        if universe < 1:
            raise ValueError("universe must be >= 1")
        xs = sorted(set(elements))
        for x in xs:
            if not 1 <= x <= universe:
                raise ElementOutOfUniverse(f"{x} not in {{1..{universe}}}")
        one = self.terminal(1)
        parts: list[int | None] = []
        prev = 0
        for x in xs:
            parts.append(self.zeros(x - prev - 1))
            parts.append(one)
            prev = x
        parts.append(self.zeros(universe - prev))
        return self.concat_all(parts)

    def add(self, g: Slp) -> int:
        """Import all rules of g; returns the id of its start rule."""
        remap = []
        for rule in g.rules:
            if rule[0] == "T":
                remap.append(self.terminal(rule[1]))
            else:
                remap.append(self.concat(remap[rule[1]], remap[rule[2]]))
        return remap[g.start]

    def build(self, root: int) -> Slp:
        """Extract the rules reachable from root as a compact Slp."""
        seen = {root}
        stack = [root]
        while stack:
            rule = self._rules[stack.pop()]
            if rule[0] == "C":
                for child in rule[1:]:
                    if child not in seen:
                        seen.add(child)
                        stack.append(child)
        order = sorted(seen)
        new_id = {old: i for i, old in enumerate(order)}
        rules = []
        for old in order:
            rule = self._rules[old]
            rules.append(rule if rule[0] == "T" else ("C", new_id[rule[1]], new_id[rule[2]]))
        return Slp(rules, new_id[root])


def terminal(bit: int) -> Slp:
    return Slp([("T", _check_bit(bit))])


def concat(a: Slp, b: Slp) -> Slp:
    gb = GrammarBuilder()
    left = gb.add(a)
    right = gb.add(b)
    return gb.build(gb.concat(left, right))


def repeat(g: Slp, alpha: int) -> Slp:
    """SLP for the alpha-fold repetition of g's expansion."""
    gb = GrammarBuilder()
    return gb.build(gb.power(gb.add(g), alpha))


def zeros(k: int) -> Slp:
    if k < 1:
        raise ValueError("zeros(k) needs k >= 1; skip empty blocks at the call site")
    gb = GrammarBuilder()
    return gb.build(gb.zeros(k))


def ones(k: int) -> Slp:
    if k < 1:
        raise ValueError("ones(k) needs k >= 1; skip empty blocks at the call site")
    gb = GrammarBuilder()
    return gb.build(gb.ones(k))


def char_vector(elements: Iterable[int], universe: int) -> Slp:
    gb = GrammarBuilder()
    return gb.build(gb.char_vector(elements, universe))


def from_bits(bits: str) -> Slp:
    """A (not necessarily small) SLP for an explicit bit string."""
    if not bits:
        raise ValueError("SLPs cannot derive the empty string")
    gb = GrammarBuilder()
    return gb.build(gb.concat_all([gb.terminal(int(c)) if c in "01" else _bad(c) for c in bits]))


def _bad(c):
    raise InvalidSymbol(f"symbol {c!r} is not in {{0, 1}}")


def expand(g: Slp, budget: int = DEFAULT_BUDGET) -> str:
    """Materialize the expansion of g as a '0'/'1' string."""
    if g.length > budget:
        raise BudgetExceeded(f"expansion length {g.length} exceeds budget {budget}")
    rules = g.rules
    short: dict[int, str] = {}
    for i, rule in enumerate(rules):
        if g.expansion_length(i) > _SHORT:
            continue
        if rule[0] == "T":
            short[i] = "01"[rule[1]]
        else:
            short[i] = short[rule[1]] + short[rule[2]]
    out = []
    stack = [g.start]
    while stack:
        i = stack.pop()
        s = short.get(i)
        if s is not None:
            out.append(s)
            continue
        _, l, r = rules[i]
        stack.append(r)
        stack.append(l)
    return "".join(out)


class RunStream:
    """Lazy left-to-right stream of ``(bit, length)`` runs of an SLP's expansion.

    Rules whose expansion is a single run are emitted without descending
    into them, so the work is proportional to the number of runs times the
    depth, never to the expansion length.  ``peak_stack`` records the largest
    traversal stack seen so far (at most depth + 1).
    """

    def __init__(self, g: Slp, coalesce: bool = True):
        self.slp = g
        self.coalesce = coalesce
        self.peak_stack = 0
        self.emitted = 0
        self._it = self._coalesced() if coalesce else self._raw()

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return self

    def __next__(self) -> tuple[int, int]:
        run = next(self._it)
        self.emitted += 1
        return run

    def _raw(self) -> Iterator[tuple[int, int]]:
        g = self.slp
        rules = g.rules
        stack = [g.start]
        self.peak_stack = 1
        while stack:
            i = stack.pop()
            bit = g.rule_uniform(i)
            if bit >= 0:
                yield bit, g.expansion_length(i)
                continue
            _, l, r = rules[i]
            stack.append(r)
            stack.append(l)
            if len(stack) > self.peak_stack:
                self.peak_stack = len(stack)

    def _coalesced(self) -> Iterator[tuple[int, int]]:
        pending_bit, pending_len = -1, 0
        for bit, length in self._raw():
            if bit == pending_bit:
                pending_len += length
            else:
                if pending_len:
                    yield pending_bit, pending_len
                pending_bit, pending_len = bit, length
        if pending_len:
            yield pending_bit, pending_len


def run_stream(g: Slp, coalesce: bool = True) -> RunStream:
    return RunStream(g, coalesce)


def pad_with_zeros(g: Slp, target_rules: int) -> Slp:
    """Append zeros to g so that the grammar has exactly ``target_rules`` rules.

    The padding is a linear chain of fresh (unshared) rules 0^2, 0^3, ...,
    so the number of appended zeros grows linearly with the padding.
    """
    extra = target_rules - g.size
    if extra < 0:
        raise ValueError(f"target {target_rules} is smaller than the grammar size {g.size}")
    if extra == 0:
        return g
    rules = list(g.rules)
    t0 = next((i for i, r in enumerate(rules) if r == ("T", 0)), None)
    if t0 is None:
        rules.append(("T", 0))
        t0 = len(rules) - 1
        extra -= 1
        if extra == 0:
            # a single spare rule cannot append anything; it stays unreferenced
            return Slp(rules, g.start)
    last = t0
    for _ in range(extra - 1):
        rules.append(("C", last, t0))
        last = len(rules) - 1
    rules.append(("C", g.start, last))
    return Slp(rules)


def dumps(g: Slp) -> str:
    """Serialize to the ``slp v1`` text format."""
    lines = [f"slp v1 {g.size} {g.start}"]
    for rule in g.rules:
        lines.append(f"T {rule[1]}" if rule[0] == "T" else f"C {rule[1]} {rule[2]}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Slp:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty slp file")
    head = lines[0].split()
    if len(head) != 4 or head[:2] != ["slp", "v1"]:
        raise FormatError(f"bad slp header: {lines[0]!r}")
    n, start = int(head[2]), int(head[3])
    body = lines[1:]
    if len(body) != n:
        raise FormatError(f"header announces {n} rules, found {len(body)}")
    rules = []
    for line in body:
        parts = line.split()
        try:
            if parts[0] == "T" and len(parts) == 2:
                rules.append(("T", int(parts[1])))
            elif parts[0] == "C" and len(parts) == 3:
                rules.append(("C", int(parts[1]), int(parts[2])))
            else:
                raise FormatError(f"bad rule line {line!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"bad rule line {line!r}") from exc
    try:
        return Slp(rules, start)
    except InvalidSymbol:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
