"""Permutations of small label sets and their factorization into derangements.

Composition is right-to-left throughout: ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConfigParseError,
    DomainMismatchError,
    NoDerangementError,
    NotFactorableError,
    OddPermutationError,
    UnsupportedSizeError,
)


class Permutation:
    __slots__ = ("_map", "_domain")

    def __init__(self, mapping: Mapping[int, int]):
        m = dict(mapping)
        if set(m.values()) != set(m):
            raise ValueError(f"not a bijection of its domain: {m}")
        self._map = m
        self._domain = tuple(sorted(m))

    @classmethod
    def identity(cls, domain: Iterable[int]) -> Permutation:
        return cls({x: x for x in domain})

    @classmethod
    def from_images(cls, images: Sequence[int]) -> Permutation:
        """One-line notation on [n]: ``images[i - 1]`` is the image of i."""
        return cls({i + 1: int(y) for i, y in enumerate(images)})

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], domain: Iterable[int]) -> Permutation:
        m = {x: x for x in domain}
        for cyc in cycles:
            for i, a in enumerate(cyc):
                b = cyc[(i + 1) % len(cyc)]
                if a not in m or b not in m:
                    raise DomainMismatchError(f"{a} not in domain")
                m[a] = b
        return cls(m)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        try:
            images = [int(t) for t in text.split(",")]
        except ValueError:
            raise ConfigParseError(f"not a comma-separated image list: {text!r}") from None
        try:
            return cls.from_images(images)
        except ValueError as e:
            raise ConfigParseError(str(e)) from None

    @property
    def domain(self) -> tuple[int, ...]:
        return self._domain

    def __len__(self):
        return len(self._map)

    def __call__(self, x: int) -> int:
        return self._map[x]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self):
        return hash(tuple(self._map[x] for x in self._domain) + self._domain)

    def __repr__(self):
        return f"Permutation({self.cycle_string()} on {list(self._domain)})"

    def items(self):
        return ((x, self._map[x]) for x in self._domain)

    def images(self) -> list[int]:
        return [self._map[x] for x in self._domain]

    def format(self) -> str:
        return ",".join(str(y) for y in self.images())

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for x in self._domain:
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = self._map[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self._map[y]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)

    def is_identity(self) -> bool:
        return all(x == y for x, y in self._map.items())

    def is_derangement(self) -> bool:
        return all(x != y for x, y in self._map.items())

    def is_full_cycle(self) -> bool:
        return len(self.cycles(include_fixed=True)) == 1

    def inverse(self) -> Permutation:
        return Permutation({y: x for x, y in self._map.items()})

    def parity(self) -> str:
        swaps = sum(len(c) - 1 for c in self.cycles())
        return "odd" if swaps % 2 else "even"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return p o q, i.e. apply q first."""
    if p.domain != q.domain:
        raise DomainMismatchError(f"domains differ: {p.domain} vs {q.domain}")
    return Permutation({x: p(q(x)) for x in q.domain})


def product(factors: Sequence[Permutation], domain: Iterable[int]) -> Permutation:
    """factors[0] o factors[1] o ... (the last factor acts first)."""
    out = Permutation.identity(domain)
    for f in factors:
        out = compose(out, f)
    return out


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def parity(p: Permutation) -> str:
    return p.parity()


def is_derangement(p: Permutation) -> bool:
    return p.is_derangement()


def make_derangement(domain: Iterable[int], pin: tuple[int, int] | None = None) -> Permutation:
    """Cyclic rotation of the sorted domain, shifted so that pin[0] -> pin[1]."""
    return _rotation(tuple(sorted(set(domain))), pin)


@lru_cache(maxsize=4096)
def _rotation(labels: tuple[int, ...], pin: tuple[int, int] | None) -> Permutation:
    labels = list(labels)
    if len(labels) < 2:
        raise NoDerangementError(f"no derangement of a domain of size {len(labels)}")
    shift = 1
    if pin is not None:
        r, s = pin
        if r == s:
            raise NoDerangementError(f"pin {r}->{s} would be a fixed point")
        try:
            shift = labels.index(s) - labels.index(r)
        except ValueError:
            raise NoDerangementError(f"pin {r}->{s} not inside domain {labels}") from None
    n = len(labels)
    return Permutation({labels[i]: labels[(i + shift) % n] for i in range(n)})


def cycle_perm(order: Sequence[int]) -> Permutation:
    """The full cycle order[0] -> order[1] -> ... -> order[0]."""
    n = len(order)
    return Permutation({order[i]: order[(i + 1) % n] for i in range(n)})


def _seed_for(p: Permutation) -> int:
    digest = hashlib.sha256(repr(list(p.items())).encode()).digest()
    return int.from_bytes(digest[:8], "little")


_TRIES_PER_LABEL = 200
_EXHAUSTIVE_UP_TO = 6


def even_to_two_ncycles(p: Permutation, max_tries: int | None = None) -> tuple[Permutation, Permutation]:
    """Write an even permutation as c1 o c2 with both factors full cycles.

    Uses a random search seeded from ``p`` itself, so the answer is
    deterministic; every result is checked before it is returned.
    """
    labels = list(p.domain)
    n = len(labels)
    if n < 2:
        raise UnsupportedSizeError("full-cycle factorization needs at least two labels")
    if p.parity() != "even":
        raise OddPermutationError(f"{p.cycle_string()} is odd")
    if p.is_identity():
        c1 = cycle_perm(labels)
        return c1, c1.inverse()

    tries = max_tries if max_tries is not None else _TRIES_PER_LABEL * n
    rng = random.Random(_seed_for(p))
    rest = labels[1:]
    for _ in range(tries):
        rng.shuffle(rest)
        c1 = cycle_perm([labels[0]] + rest)
        c2 = compose(c1.inverse(), p)
        if c2.is_full_cycle():
            break
    else:
        if n > _EXHAUSTIVE_UP_TO:
            raise RuntimeError(f"no full-cycle factorization found for {p!r} in {tries} tries")
        for tail in itertools.permutations(labels[1:]):
            c1 = cycle_perm([labels[0], *tail])
            c2 = compose(c1.inverse(), p)
            if c2.is_full_cycle():
                break
        else:
            raise RuntimeError(f"{p!r} is not a product of two full cycles")
    assert compose(c1, c2) == p and c1.is_full_cycle() and c2.is_full_cycle()
    return c1, c2


def transposition_to_two_derangements(x: int, y: int, n: int) -> tuple[Permutation, Permutation]:
    """Return (d1, d2), derangements of [n] with d2 o d1 == (x y).

    Labels a1 = x, a3 = y and the rest ascending; with sigma the cycle
    (a1 ... an) and tau = (a2 a4), d1 = tau o sigma and d2 = sigma^-1.
    """
    if n <= 3:
        raise UnsupportedSizeError(f"transpositions of {n} objects are not products of two derangements")
    if x == y or not (1 <= x <= n and 1 <= y <= n):
        raise ValueError(f"need distinct labels in [1, {n}], got {x}, {y}")
    rest = [v for v in range(1, n + 1) if v not in (x, y)]
    a = [x, rest[0], y, *rest[1:]]
    sigma = cycle_perm(a)
    tau = Permutation.from_cycles([(a[1], a[3])], range(1, n + 1))
    d1 = compose(tau, sigma)
    d2 = sigma.inverse()
    return d1, d2


@dataclass(frozen=True)
class DerangementFactorization:
    """``target == factors[0] o factors[1] o ...``; the last factor acts first."""

    target: Permutation
    factors: tuple[Permutation, ...]

    def __len__(self):
        return len(self.factors)

    def in_application_order(self) -> list[Permutation]:
        return list(reversed(self.factors))

    def verify(self) -> bool:
        return (
            all(f.is_derangement() and f.domain == self.target.domain for f in self.factors)
            and product(self.factors, self.target.domain) == self.target
        )


def factor_into_derangements(p: Permutation) -> DerangementFactorization:
    """Factor p into at most four derangements (two when p is even).

    Raises NotFactorableError for odd permutations of three objects.
    """
    n = len(p)
    if p.is_identity():
        return DerangementFactorization(p, ())
    if p.is_derangement():
        return DerangementFactorization(p, (p,))
    if n == 3:
        # the only non-derangements of [3] besides the identity are transpositions
        raise NotFactorableError(f"{p.cycle_string()} is odd; derangements of 3 objects are even")
    if p.parity() == "even":
        c1, c2 = even_to_two_ncycles(p)
        return DerangementFactorization(p, (c1, c2))
    # p = e o t with t a transposition, so e = p o t is even
    # take t from one of p's own cycles so a lone transposition costs two factors
    labels = p.domain
    x = p.cycles()[0][0]
    t_pair = (x, p(x))
    t = Permutation.from_cycles([t_pair], labels)
    e = compose(p, t)
    head = factor_into_derangements(e).factors
    d1, d2 = _relabelled_transposition(t_pair, labels)
    return DerangementFactorization(p, (*head, d2, d1))


def _relabelled_transposition(pair: tuple[int, int], labels: Sequence[int]) -> tuple[Permutation, Permutation]:
    """transposition_to_two_derangements on an arbitrary sorted label set."""
    n = len(labels)
    pos = {v: i + 1 for i, v in enumerate(labels)}
    d1, d2 = transposition_to_two_derangements(pos[pair[0]], pos[pair[1]], n)

    def lift(q: Permutation) -> Permutation:
        return Permutation({labels[i - 1]: labels[q(i) - 1] for i in range(1, n + 1)})

    return lift(d1), lift(d2)
