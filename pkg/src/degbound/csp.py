"""Constraint satisfaction instances over the domain 1..B, the `.csp` format and a brute-force solver."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .graph import ParseError

Assignment = dict[int, int]


@dataclass(frozen=True)
class Constraint:
    scope: tuple[int, ...]
    sat: tuple[tuple[int, ...], ...]

    def holds(self, values: Assignment | tuple[int, ...]) -> bool:
        """`values` is an assignment dict or a 0-indexed value tuple for variables 1..n."""
        if isinstance(values, dict):
            key = tuple(values[v] for v in self.scope)
        else:
            key = tuple(values[v - 1] for v in self.scope)
        return key in self._satset()

    def _satset(self) -> frozenset[tuple[int, ...]]:
        cached = self.__dict__.get("_cache")
        if cached is None:
            cached = frozenset(self.sat)
            object.__setattr__(self, "_cache", cached)
        return cached


@dataclass(frozen=True)
class CspInstance:
    """q-CSP-B instance with variables 1..n and values 1..B."""

    n: int
    B: int
    constraints: tuple[Constraint, ...]
    q: int

    def __post_init__(self) -> None:
        if self.B < 2:
            raise ValueError("domain size B must be at least 2")
        for c in self.constraints:
            if len(set(c.scope)) != len(c.scope):
                raise ValueError(f"duplicate variable in scope {c.scope}")
            if len(c.scope) > self.q:
                raise ValueError(f"scope {c.scope} exceeds arity bound q={self.q}")
            for v in c.scope:
                if not 1 <= v <= self.n:
                    raise ValueError(f"variable {v} outside 1..{self.n}")
            if not c.sat:
                raise ValueError(f"constraint on {c.scope} has no satisfying tuple")
            for t in c.sat:
                if len(t) != len(c.scope):
                    raise ValueError(f"tuple {t} does not match scope arity {len(c.scope)}")
                if any(not 1 <= y <= self.B for y in t):
                    raise ValueError(f"tuple {t} has a value outside 1..{self.B}")

    @property
    def m(self) -> int:
        return len(self.constraints)

    def satisfied_by(self, f: Assignment) -> bool:
        return all(c.holds(f) for c in self.constraints)


def make_csp(n: int, B: int, constraints: list[tuple[list[int], list[tuple[int, ...]]]], q: int | None = None) -> CspInstance:
    """Convenience constructor from plain lists."""
    cs = tuple(Constraint(tuple(s), tuple(tuple(t) for t in sat)) for s, sat in constraints)
    if q is None:
        q = max((len(c.scope) for c in cs), default=1)
    return CspInstance(n, B, cs, q)


def csp_bruteforce(phi: CspInstance) -> Assignment | None:
    """First satisfying assignment in lexicographic order, or None."""
    for values in itertools.product(range(1, phi.B + 1), repeat=phi.n):
        if all(c.holds(values) for c in phi.constraints):
            return {i + 1: y for i, y in enumerate(values)}
    return None


def parse_csp(text: str) -> CspInstance:
    """Parse `csp n m q B`, then `scope ...` lines each followed by `sat ...` lines."""
    header: tuple[int, int, int, int] | None = None
    constraints: list[tuple[list[int], list[tuple[int, ...]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c "):
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer field") from exc
        if parts[0] == "csp":
            if header is not None or len(nums) != 4:
                raise ParseError(f"line {lineno}: expected a single 'csp n m q B' header")
            header = (nums[0], nums[1], nums[2], nums[3])
        elif header is None:
            raise ParseError(f"line {lineno}: content before header")
        elif parts[0] == "scope":
            if len(set(nums)) != len(nums):
                raise ParseError(f"line {lineno}: duplicate variable in scope")
            if any(not 1 <= v <= header[0] for v in nums):
                raise ParseError(f"line {lineno}: variable outside 1..{header[0]}")
            if len(nums) > header[2]:
                raise ParseError(f"line {lineno}: scope larger than q={header[2]}")
            constraints.append((nums, []))
        elif parts[0] == "sat":
            if not constraints:
                raise ParseError(f"line {lineno}: sat line before any scope")
            scope, sats = constraints[-1]
            if len(nums) != len(scope):
                raise ParseError(f"line {lineno}: arity mismatch")
            if any(not 1 <= y <= header[3] for y in nums):
                raise ParseError(f"line {lineno}: value outside 1..{header[3]}")
            sats.append(tuple(nums))
        else:
            raise ParseError(f"line {lineno}: unknown directive {parts[0]!r}")
    if header is None:
        raise ParseError("missing 'csp n m q B' header")
    n, m, q, B = header
    if len(constraints) != m:
        raise ParseError(f"header declares {m} constraints, found {len(constraints)}")
    for scope, sats in constraints:
        if not sats:
            raise ParseError(f"constraint on {scope} has no sat lines")
    try:
        return make_csp(n, B, constraints, q)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def emit_csp(phi: CspInstance) -> str:
    lines = [f"csp {phi.n} {phi.m} {phi.q} {phi.B}"]
    for c in phi.constraints:
        lines.append("scope " + " ".join(map(str, c.scope)))
        lines.extend("sat " + " ".join(map(str, t)) for t in c.sat)
    return "\n".join(lines) + "\n"


def random_csp(n: int, m: int, q: int, B: int, density: float, seed: int) -> CspInstance:
    """Random instance: each constraint has a random q-subset scope and keeps each tuple with probability `density`."""
    if q > n:
        raise ValueError(f"arity q={q} exceeds variable count n={n}")
    if q < 1 or not 0 < density <= 1:
        raise ValueError("need q >= 1 and 0 < density <= 1")
    rng = random.Random(seed)
    all_tuples = list(itertools.product(range(1, B + 1), repeat=q))
    constraints = []
    for _ in range(m):
        scope = sorted(rng.sample(range(1, n + 1), q))
        sat: list[tuple[int, ...]] = []
        while not sat:
            sat = [t for t in all_tuples if rng.random() < density]
        constraints.append((scope, sat))
    return make_csp(n, B, constraints, q)
