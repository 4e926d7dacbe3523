"""Core garden-hose game model: truth tables, wirings, strategies, evaluation.

A game is played over s shared pipes. Alice owns endpoints {0..s} (0 is the
water tap), Bob owns endpoints {1..s}. Each party independently connects some
of their endpoints in pairs (a partial matching), the tap is opened, and the
water follows the unique maximal path from vertex 0. The side on which the
water exits encodes the output bit: Alice = 0, Bob = 1.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional


class GardenHoseError(Exception):
    """Base class for all domain errors. Carries a stable error code."""

    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class InvalidWiringError(GardenHoseError):
    def __init__(self, code, message=""):
        self.code = code
        super().__init__(message or code)


class MalformedMessageError(GardenHoseError):
    code = "MALFORMED_MESSAGE"


class PartialTableError(GardenHoseError):
    code = "PARTIAL_TABLE"


class Side(enum.Enum):
    ALICE = "alice"
    BOB = "bob"

    @property
    def bit(self):
        # Exit-side encoding: water on Alice's side means f = 0.
        return 0 if self is Side.ALICE else 1


UNDEF = None  # undefined truth-table cell


def bits_to_int(bits: str) -> int:
    """Big-endian bitstring to row/column index (first character is x1)."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


def int_to_bits(value: int, n: int) -> str:
    return format(value, f"0{n}b")


@dataclass(frozen=True)
class TruthTable:
    """f: {0,1}^n x {0,1}^n -> {0,1,undefined} as a 2^n x 2^n grid.

    Rows are indexed by the integer value of x (big-endian), columns by y.
    Cells hold 0, 1, or None for undefined.
    """

    n: int
    cells: tuple  # tuple of 2^n rows, each a tuple of 2^n entries

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        size = 1 << self.n
        if len(self.cells) != size or any(len(row) != size for row in self.cells):
            raise ValueError(f"grid must be {size}x{size}")
        for row in self.cells:
            for v in row:
                if v not in (0, 1, UNDEF):
                    raise ValueError(f"bad cell value {v!r}")

    @classmethod
    def from_function(cls, n: int, f: Callable[[str, str], Optional[int]]) -> "TruthTable":
        size = 1 << n
        rows = tuple(
            tuple(f(int_to_bits(x, n), int_to_bits(y, n)) for y in range(size))
            for x in range(size)
        )
        return cls(n, rows)

    def value(self, x: str, y: str) -> Optional[int]:
        return self.cells[bits_to_int(x)][bits_to_int(y)]

    @property
    def is_total(self) -> bool:
        return all(v is not UNDEF for row in self.cells for v in row)

    def defined_cells(self):
        """Yield (x, y, value) for every defined cell in lexicographic order."""
        size = 1 << self.n
        for xi in range(size):
            for yi in range(size):
                v = self.cells[xi][yi]
                if v is not UNDEF:
                    yield int_to_bits(xi, self.n), int_to_bits(yi, self.n), v

    def complement(self) -> "TruthTable":
        rows = tuple(
            tuple(None if v is UNDEF else 1 - v for v in row) for row in self.cells
        )
        return TruthTable(self.n, rows)


@dataclass(frozen=True)
class Wiring:
    """A partial matching on one side's endpoints.

    Alice endpoints range over {0..s} (0 = tap), Bob endpoints over {1..s}.
    Pairs are stored as sorted 2-tuples.
    """

    s: int
    side: Side
    pairs: frozenset  # frozenset of (lo, hi) tuples

    @classmethod
    def make(cls, s: int, side: Side, pairs: Iterable) -> "Wiring":
        norm = frozenset((min(a, b), max(a, b)) for a, b in pairs)
        return cls(s, side, norm)

    def partner_map(self) -> dict:
        m = {}
        for a, b in self.pairs:
            m[a] = b
            m[b] = a
        return m

    def relabel(self, perm: dict) -> "Wiring":
        """Apply a permutation of {1..s}; the tap label 0 is fixed."""

        def p(e):
            return 0 if e == 0 else perm[e]

        return Wiring.make(self.s, self.side, ((p(a), p(b)) for a, b in self.pairs))


def validate_wiring(w: Wiring) -> None:
    """Raise InvalidWiringError unless w is a legal partial matching."""
    lo = 0 if w.side is Side.ALICE else 1
    seen = set()
    for a, b in sorted(w.pairs):
        if a == b:
            raise InvalidWiringError("SELF_LOOP", f"self loop at endpoint {a}")
        for e in (a, b):
            if w.side is Side.BOB and e == 0:
                raise InvalidWiringError("TAP_ON_BOB_SIDE", "endpoint 0 is not on Bob's side")
            if e < lo or e > w.s:
                raise InvalidWiringError(
                    "ENDPOINT_OUT_OF_RANGE", f"endpoint {e} outside [{lo},{w.s}]"
                )
            if e in seen:
                raise InvalidWiringError("DUPLICATE_ENDPOINT", f"endpoint {e} matched twice")
            seen.add(e)


@dataclass
class Strategy:
    """A pair of input-indexed wiring functions over s pipes.

    ``alice`` and ``bob`` map an n-bit input string to a Wiring. Keeping them
    as separate maps enforces structurally that Alice's side depends only on x
    and Bob's only on y. ``name`` records the generating family, if any.
    """

    n: int
    s: int
    alice: Callable[[str], Wiring]
    bob: Callable[[str], Wiring]
    name: str = "explicit"
    labels: Optional[dict] = None  # pipe index -> human-readable label
    _alice_cache: dict = field(default_factory=dict, repr=False)
    _bob_cache: dict = field(default_factory=dict, repr=False)

    def alice_wiring(self, x: str) -> Wiring:
        if x not in self._alice_cache:
            self._alice_cache[x] = self.alice(x)
        return self._alice_cache[x]

    def bob_wiring(self, y: str) -> Wiring:
        if y not in self._bob_cache:
            self._bob_cache[y] = self.bob(y)
        return self._bob_cache[y]

    @classmethod
    def from_tables(cls, n, s, alice_map: dict, bob_map: dict, name="explicit") -> "Strategy":
        return cls(n, s, alice_map.__getitem__, bob_map.__getitem__, name=name)

    def tabulate(self):
        """Force both wiring maps into plain dicts (x -> Wiring, y -> Wiring)."""
        size = 1 << self.n
        a = {int_to_bits(i, self.n): self.alice_wiring(int_to_bits(i, self.n)) for i in range(size)}
        b = {int_to_bits(i, self.n): self.bob_wiring(int_to_bits(i, self.n)) for i in range(size)}
        return a, b

    def relabel(self, perm: dict) -> "Strategy":
        a, b = self.tabulate()
        ra = {x: w.relabel(perm) for x, w in a.items()}
        rb = {y: w.relabel(perm) for y, w in b.items()}
        return Strategy.from_tables(self.n, self.s, ra, rb, name=self.name)


@dataclass(frozen=True)
class EvalResult:
    exit_side: Side
    path: tuple  # visited (Side, endpoint) vertices, starting at (ALICE, 0)
    hops: int  # number of connection (hose) edges traversed


@dataclass(frozen=True)
class Counterexample:
    x: str
    y: str
    got: int
    want: int


def evaluate(strategy: Strategy, x: str, y: str, validate: bool = True) -> EvalResult:
    """Follow the water from the tap and report the exit side.

    The walk is a pure step function: besides the read-only wirings, its only
    state is the current endpoint and the current side. The path in the
    degree-<=2 union graph is simple, so it terminates within s hose hops.
    """
    if len(x) != strategy.n or len(y) != strategy.n:
        raise ValueError(f"inputs must have length n={strategy.n}")
    wa = strategy.alice_wiring(x)
    wb = strategy.bob_wiring(y)
    if validate:
        validate_wiring(wa)
        validate_wiring(wb)
    pa = wa.partner_map()
    pb = wb.partner_map()

    side, pos = Side.ALICE, 0
    path = [(Side.ALICE, 0)]
    hops = 0
    while True:
        partners = pa if side is Side.ALICE else pb
        nxt = partners.get(pos)
        if nxt is None:
            return EvalResult(side, tuple(path), hops)
        hops += 1
        path.append((side, nxt))
        if nxt == 0:
            # Water flowed back into the tap vertex, which has no other edge.
            return EvalResult(Side.ALICE, tuple(path), hops)
        # Cross pipe nxt to the opposite side.
        side = Side.BOB if side is Side.ALICE else Side.ALICE
        pos = nxt
        path.append((side, pos))


def verify(strategy: Strategy, table: TruthTable) -> Optional[Counterexample]:
    """Check the strategy against every defined cell.

    Returns None on success, else the lexicographically first counterexample
    (ordered by x, then y).
    """
    if strategy.n != table.n:
        raise ValueError("strategy and table disagree on n")
    for x, y, want in table.defined_cells():
        got = evaluate(strategy, x, y, validate=False).exit_side.bit
        if got != want:
            return Counterexample(x, y, got, want)
    return None


def message_entry_width(s: int) -> int:
    return max(1, (s + 1).bit_length())  # ceil(log2(s+2))


def encode_wiring(w: Wiring) -> str:
    """Fixed-width binary encoding of an Alice wiring: one entry per endpoint
    0..s giving the partner id, with value s+1 reserved for "unconnected".
    Total length (s+1) * ceil(log2(s+2)) bits.
    """
    width = message_entry_width(w.s)
    partners = w.partner_map()
    out = []
    for e in range(w.s + 1):
        out.append(format(partners.get(e, w.s + 1), f"0{width}b"))
    return "".join(out)


def decode_message(message: str, s: int) -> Wiring:
    """Inverse of encode_wiring. Raises MalformedMessageError on bad input."""
    width = message_entry_width(s)
    if len(message) != (s + 1) * width or any(c not in "01" for c in message):
        raise MalformedMessageError(f"expected {(s + 1) * width} bits")
    partners = {}
    for e in range(s + 1):
        v = int(message[e * width:(e + 1) * width], 2)
        if v == s + 1:
            continue
        if v > s + 1:
            raise MalformedMessageError(f"entry {e} out of range: {v}")
        partners[e] = v
    pairs = set()
    for e, v in partners.items():
        if partners.get(v) != e:
            raise MalformedMessageError(f"asymmetric entry {e}->{v}")
        pairs.add((min(e, v), max(e, v)))
    w = Wiring.make(s, Side.ALICE, pairs)
    try:
        validate_wiring(w)
    except InvalidWiringError as exc:
        raise MalformedMessageError(f"decoded wiring invalid: {exc.code}") from exc
    return w


def alice_message(strategy: Strategy, x: str) -> str:
    """One-way message: Alice's connections for x, canonically serialized."""
    return encode_wiring(strategy.alice_wiring(x))


def bob_decide(message: str, bob_wiring: Wiring) -> int:
    """Recover f(x, y) from Alice's message and Bob's own wiring."""
    wa = decode_message(message, bob_wiring.s)
    validate_wiring(bob_wiring)
    one_shot = Strategy(1, bob_wiring.s, lambda _: wa, lambda _: bob_wiring)
    return evaluate(one_shot, "0", "0", validate=False).exit_side.bit


def random_total_table(n: int, rng: random.Random) -> TruthTable:
    size = 1 << n
    rows = tuple(tuple(rng.randint(0, 1) for _ in range(size)) for _ in range(size))
    return TruthTable(n, rows)
