"""Constructive strategy generators for named function families.

Each builder returns a Strategy whose pipe count meets the published bound
for its family; correctness is always checkable exhaustively with verify().
Pipe indices are 1-based and assigned deterministically, so the same
parameters always produce byte-identical strategy files. The human-readable
label of each pipe is kept in Strategy.labels for tracing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .model import (
    GardenHoseError,
    PartialTableError,
    Side,
    Strategy,
    TruthTable,
    Wiring,
    bits_to_int,
    int_to_bits,
)


class InconsistentTreeError(GardenHoseError):
    code = "INCONSISTENT_TREE"


# ---------------------------------------------------------------------------
# Reference truth tables


def xor_table(n: int) -> TruthTable:
    return TruthTable.from_function(
        n, lambda x, y: (x.count("1") + y.count("1")) % 2
    )


def eq_table(n: int) -> TruthTable:
    return TruthTable.from_function(n, lambda x, y: int(x == y))


def ip_table(n: int) -> TruthTable:
    return TruthTable.from_function(
        n, lambda x, y: sum(int(a) & int(b) for a, b in zip(x, y)) % 2
    )


def maj_table(n: int) -> TruthTable:
    thresh = (n + 1) // 2
    return TruthTable.from_function(
        n, lambda x, y: int(sum(int(a) & int(b) for a, b in zip(x, y)) >= thresh)
    )


def and_table(n: int) -> TruthTable:
    return TruthTable.from_function(n, lambda x, y: int(x == y == "1" * n))


def constant_table(n: int, bit: int) -> TruthTable:
    return TruthTable.from_function(n, lambda x, y: bit)


# ---------------------------------------------------------------------------
# Pipe allocation helper


class _Pipes:
    """Deterministic label -> 1-based index allocator."""

    def __init__(self):
        self.index: Dict[object, int] = {}

    def add(self, label) -> int:
        if label in self.index:
            raise ValueError(f"duplicate pipe label {label!r}")
        self.index[label] = len(self.index) + 1
        return self.index[label]

    def __getitem__(self, label) -> int:
        return self.index[label]

    def __contains__(self, label) -> bool:
        return label in self.index

    @property
    def count(self) -> int:
        return len(self.index)

    def labels(self) -> Dict[int, object]:
        return {i: lbl for lbl, i in self.index.items()}


def _strategy(n, pipes: _Pipes, alice_map, bob_map, name) -> Strategy:
    s = pipes.count
    st = Strategy.from_tables(n, s, alice_map, bob_map, name=name)
    st.labels = pipes.labels()
    return st


# ---------------------------------------------------------------------------
# XOR


def build_xor(n: int) -> Strategy:
    """Three pipes for any n: both parties reduce their input to its parity
    locally, then play the single-bit game of Figure-1 shape. Alice sends the
    water down the pipe named after her parity bit; Bob bounces the pipe named
    after his parity bit back through the return pipe.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pipes = _Pipes()
    pipes.add(("bit", 0))
    pipes.add(("bit", 1))
    pipes.add("return")

    def parity(bits):
        return bits.count("1") % 2

    alice = {}
    bob = {}
    for v in range(1 << n):
        bits = int_to_bits(v, n)
        alice[bits] = Wiring.make(3, Side.ALICE, [(0, pipes[("bit", parity(bits))])])
        bob[bits] = Wiring.make(3, Side.BOB, [(pipes[("bit", parity(bits))], pipes["return"])])
    return _strategy(n, pipes, alice, bob, "xor")


# ---------------------------------------------------------------------------
# Equality


def build_eq(n: int) -> Strategy:
    """Bitwise comparison with alternating orientation, 2n + ceil(n/2) + [n even]
    pipes (within the 3n+1 bound).

    Stage i has selector pipes sel(i, 0) and sel(i, 1). Odd stages flow
    Alice -> Bob, even stages Bob -> Alice, so the receiving party compares
    the arriving pipe against its own bit. A mismatch detected by Alice exits
    her side directly; a mismatch detected by Bob is bounced back through the
    stage's reject pipe. Water that survives stage n exits on Bob's side.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pipes = _Pipes()
    for i in range(1, n + 1):
        pipes.add(("sel", i, 0))
        pipes.add(("sel", i, 1))
        if i % 2 == 1:
            pipes.add(("rej", i))
    if n % 2 == 0:
        pipes.add("final")

    def alice_wiring(x: str) -> Wiring:
        bit = lambda i: int(x[i - 1])
        hoses = [(0, pipes[("sel", 1, bit(1))])]
        for i in range(2, n + 1, 2):
            src = pipes[("sel", i, bit(i))]
            if i < n:
                hoses.append((src, pipes[("sel", i + 1, bit(i + 1))]))
            else:
                hoses.append((src, pipes["final"]))
        return Wiring.make(pipes.count, Side.ALICE, hoses)

    def bob_wiring(y: str) -> Wiring:
        bit = lambda i: int(y[i - 1])
        hoses = []
        for i in range(1, n + 1, 2):
            hoses.append((pipes[("sel", i, 1 - bit(i))], pipes[("rej", i)]))
            if i < n:
                hoses.append((pipes[("sel", i, bit(i))], pipes[("sel", i + 1, bit(i + 1))]))
        return Wiring.make(pipes.count, Side.BOB, hoses)

    alice = {int_to_bits(v, n): alice_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    bob = {int_to_bits(v, n): bob_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    return _strategy(n, pipes, alice, bob, "eq")


# ---------------------------------------------------------------------------
# Inner product and majority share a query/answer scheme: Alice walks the
# water through the indices where her bit is 1, Bob answers each query by
# shifting the running value by his bit. Bob's wiring is a fixed bijection
# per index, so it never violates the matching constraint.


def build_ip(n: int) -> Strategy:
    """4n+1 pipes: query/answer pipes per index carrying the running parity,
    plus one exit pipe to Bob's side for parity 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pipes = _Pipes()
    for i in range(1, n + 1):
        for c in (0, 1):
            pipes.add(("q", i, c))
        for c in (0, 1):
            pipes.add(("a", i, c))
    pipes.add("exit")

    def alice_wiring(x: str) -> Wiring:
        ones = [i for i in range(1, n + 1) if x[i - 1] == "1"]
        if not ones:
            return Wiring.make(pipes.count, Side.ALICE, [])
        hoses = [(0, pipes[("q", ones[0], 0)])]
        for i, j in zip(ones, ones[1:]):
            for c in (0, 1):
                hoses.append((pipes[("a", i, c)], pipes[("q", j, c)]))
        hoses.append((pipes[("a", ones[-1], 1)], pipes["exit"]))
        return Wiring.make(pipes.count, Side.ALICE, hoses)

    def bob_wiring(y: str) -> Wiring:
        hoses = []
        for i in range(1, n + 1):
            b = int(y[i - 1])
            for c in (0, 1):
                hoses.append((pipes[("q", i, c)], pipes[("a", i, c ^ b)]))
        return Wiring.make(pipes.count, Side.BOB, hoses)

    alice = {int_to_bits(v, n): alice_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    bob = {int_to_bits(v, n): bob_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    return _strategy(n, pipes, alice, bob, "ip")


def build_maj(n: int) -> Strategy:
    """2n(ceil(n/2)+1) pipes (within (n+2)^2): the running value is the count
    of matching 1-positions, saturating at the majority threshold. Reaching
    the threshold diverts the water straight to a per-index exit pipe."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = (n + 1) // 2
    pipes = _Pipes()
    for i in range(1, n + 1):
        for c in range(m):
            pipes.add(("q", i, c))
        for c in range(m + 1):
            pipes.add(("a", i, c))
        pipes.add(("exit", i))

    def alice_wiring(x: str) -> Wiring:
        ones = [i for i in range(1, n + 1) if x[i - 1] == "1"]
        if not ones:
            return Wiring.make(pipes.count, Side.ALICE, [])
        hoses = [(0, pipes[("q", ones[0], 0)])]
        for i, j in zip(ones, ones[1:]):
            for c in range(m):
                hoses.append((pipes[("a", i, c)], pipes[("q", j, c)]))
        for i in ones:
            hoses.append((pipes[("a", i, m)], pipes[("exit", i)]))
        return Wiring.make(pipes.count, Side.ALICE, hoses)

    def bob_wiring(y: str) -> Wiring:
        hoses = []
        for i in range(1, n + 1):
            b = int(y[i - 1])
            for c in range(m):
                hoses.append((pipes[("q", i, c)], pipes[("a", i, c + b)]))
        return Wiring.make(pipes.count, Side.BOB, hoses)

    alice = {int_to_bits(v, n): alice_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    bob = {int_to_bits(v, n): bob_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    return _strategy(n, pipes, alice, bob, "maj")


# ---------------------------------------------------------------------------
# Generic 2^n + 1 construction


def build_generic(table: TruthTable) -> Strategy:
    """Alice connects the tap to the pipe named after x; Bob pairs up the
    pipes of the inputs that map to 0 under his column, sending an odd
    leftover to the reserve pipe. Exactly 2^n + 1 pipes for any total table.
    """
    if not table.is_total:
        raise PartialTableError("generic construction needs a total table")
    n = table.n
    size = 1 << n
    s = size + 1  # pipe a+1 carries input value a; pipe 2^n+1 is the reserve
    reserve = s

    alice = {}
    bob = {}
    for v in range(size):
        x = int_to_bits(v, n)
        alice[x] = Wiring.make(s, Side.ALICE, [(0, v + 1)])
    for w in range(size):
        y = int_to_bits(w, n)
        zeros = [a for a in range(size) if table.cells[a][w] == 0]
        hoses = []
        for k in range(0, len(zeros) - 1, 2):
            hoses.append((zeros[k] + 1, zeros[k + 1] + 1))
        if len(zeros) % 2 == 1:
            hoses.append((zeros[-1] + 1, reserve))
        bob[y] = Wiring.make(s, Side.BOB, hoses)

    st = Strategy.from_tables(n, s, alice, bob, name="generic")
    st.labels = {v + 1: ("input", int_to_bits(v, n)) for v in range(size)}
    st.labels[reserve] = "reserve"
    return st


# ---------------------------------------------------------------------------
# Communication-protocol simulation


@dataclass
class ProtocolTree:
    """A deterministic alternating two-party protocol of depth ``depth``.

    ``alice_nodes`` maps each even-length transcript (including the root "")
    to a per-x bit table; ``bob_nodes`` does the same for odd-length
    transcripts and y. ``leaves`` maps each depth-D transcript to a per-x bit
    table: the outcome is known to Alice once the transcript is complete.
    Bit tables are tuples of length 2^n indexed by the integer value of the
    input.
    """

    n: int
    depth: int
    alice_nodes: Dict[str, tuple]
    bob_nodes: Dict[str, tuple]
    leaves: Dict[str, tuple]

    def __post_init__(self):
        size = 1 << self.n
        for d, nodes, who in ((0, self.alice_nodes, "alice"), (1, self.bob_nodes, "bob")):
            for v, bits in nodes.items():
                if len(v) % 2 != d or len(v) >= self.depth:
                    raise ValueError(f"bad {who} transcript {v!r}")
                if len(bits) != size:
                    raise ValueError(f"node {v!r} needs {size} bits")
        for v in self._transcripts():
            if len(v) < self.depth:
                nodes = self.alice_nodes if len(v) % 2 == 0 else self.bob_nodes
                if v not in nodes:
                    raise ValueError(f"missing node for transcript {v!r}")
            elif v not in self.leaves or len(self.leaves[v]) != size:
                raise ValueError(f"missing or malformed leaf {v!r}")

    def _transcripts(self):
        frontier = [""]
        while frontier:
            v = frontier.pop()
            yield v
            if len(v) < self.depth:
                frontier.extend([v + "0", v + "1"])

    def transcript(self, x: str, y: str) -> str:
        xi, yi = bits_to_int(x), bits_to_int(y)
        v = ""
        while len(v) < self.depth:
            if len(v) % 2 == 0:
                v += str(self.alice_nodes[v][xi])
            else:
                v += str(self.bob_nodes[v][yi])
        return v

    def computed_table(self) -> TruthTable:
        """The function the protocol computes; raises InconsistentTreeError if
        two inputs reaching the same leaf disagree on its value."""
        by_leaf: Dict[str, int] = {}
        size = 1 << self.n

        def cell(x, y):
            t = self.transcript(x, y)
            v = self.leaves[t][bits_to_int(x)]
            if by_leaf.setdefault(t, v) != v:
                raise InconsistentTreeError(f"leaf {t} has conflicting values")
            return v

        return TruthTable.from_function(self.n, cell)

    def padded_even(self) -> "ProtocolTree":
        """Append a dummy Bob round (constant 0) so the depth becomes even."""
        if self.depth % 2 == 0:
            return self
        size = 1 << self.n
        bob = dict(self.bob_nodes)
        leaves = {}
        for v, bits in self.leaves.items():
            bob[v] = (0,) * size
            leaves[v + "0"] = bits
            leaves[v + "1"] = bits  # unreachable; mirror the parent value
        return ProtocolTree(self.n, self.depth + 1, dict(self.alice_nodes), bob, leaves)


def build_from_protocol(tree: ProtocolTree) -> Strategy:
    """Simulate a communication protocol with pipes labeled by transcripts.

    The water's pipe label after r hops equals the r-round transcript. At the
    leaf level Alice knows the outcome: 0-leaves are left open on her side,
    1-leaves whose path is consistent with her own responses are paired up
    (odd leftover to the reserve pipe), and the remaining 1-leaves can never
    receive water. Pipe count is 2^(D+1) - 1.
    """
    tree.computed_table()  # raises on inconsistency
    tree = tree.padded_even()
    n, depth = tree.n, tree.depth

    pipes = _Pipes()
    for length in range(1, depth + 1):
        for v in range(1 << length):
            pipes.add(int_to_bits(v, length))
    pipes.add(("reserve",))

    def alice_wiring(x: str) -> Wiring:
        xi = bits_to_int(x)
        hoses = [(0, pipes[str(tree.alice_nodes[""][xi])])]
        for v, bits in tree.alice_nodes.items():
            if 2 <= len(v) <= depth - 2:
                hoses.append((pipes[v], pipes[v + str(bits[xi])]))

        def alice_consistent(leaf: str) -> bool:
            return all(
                leaf[k] == str(tree.alice_nodes[leaf[:k]][xi])
                for k in range(0, depth, 2)
            )

        ones = sorted(
            v for v, bits in tree.leaves.items() if bits[xi] == 1 and alice_consistent(v)
        )
        for k in range(0, len(ones) - 1, 2):
            hoses.append((pipes[ones[k]], pipes[ones[k + 1]]))
        if len(ones) % 2 == 1:
            hoses.append((pipes[ones[-1]], pipes[("reserve",)]))
        return Wiring.make(pipes.count, Side.ALICE, hoses)

    def bob_wiring(y: str) -> Wiring:
        yi = bits_to_int(y)
        hoses = [
            (pipes[v], pipes[v + str(bits[yi])])
            for v, bits in tree.bob_nodes.items()
            if len(v) <= depth - 1
        ]
        return Wiring.make(pipes.count, Side.BOB, hoses)

    alice = {int_to_bits(v, n): alice_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    bob = {int_to_bits(v, n): bob_wiring(int_to_bits(v, n)) for v in range(1 << n)}
    return _strategy(n, pipes, alice, bob, "protocol")


def hose_targets(path) -> list:
    """Endpoints reached by each hose hop of an EvalResult path, in order.
    With a labeled strategy these are the pipes the water flows through."""
    out = []
    for k in range(1, len(path)):
        prev, cur = path[k - 1], path[k]
        if prev[0] == cur[0]:  # same side: a hose edge
            out.append(cur[1])
    return out
