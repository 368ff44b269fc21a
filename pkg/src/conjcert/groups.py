"""Generic group machinery: closure enumeration, element orders, conjugacy
and rational classes, and the brute-force reality/rationality oracle.

Group elements are duck-typed: anything hashable with ``__mul__``,
``inverse()`` and ``identity()`` works (matrices, affine elements,
semidirect pairs, ...).  Every certificate surfaced from this module has
already been re-verified by exact multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Optional

from .errors import CertificateError, ClosureCapExceeded, UsageError
from .linalg import Matrix

__all__ = [
    "Inverse",
    "Power",
    "Certificate",
    "OrderResult",
    "FiniteGroup",
    "generate_closure",
    "element_order",
    "element_power",
    "is_real_bruteforce",
    "is_rational_bruteforce",
    "conjugacy_classes",
    "rational_classes",
    "all_conjugators",
    "PSLElement",
    "psl_canonical",
]

DEFAULT_ORDER_BOUND = 10_000


@dataclass(frozen=True)
class Inverse:
    """The relation g s g^-1 = s^-1."""

    def describe(self) -> str:
        return "inverse"


@dataclass(frozen=True)
class Power:
    """The relation g s g^-1 = s^k."""

    k: int

    def describe(self) -> str:
        return f"power {self.k}"


def element_power(g, k: int):
    """g**k by square-and-multiply; negative k via inverse()."""
    if k < 0:
        return element_power(g.inverse(), -k)
    result = g.identity()
    base = g
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


@dataclass(frozen=True)
class Certificate:
    """A witness g together with the verified relation g s g^-1 = s^-1 or s^k."""

    subject: object
    witness: object
    relation: object
    verified: bool = dc_field(default=False, compare=False)

    @staticmethod
    def make(subject, witness, relation) -> "Certificate":
        cert = Certificate(subject, witness, relation, verified=False)
        if not cert.check():
            raise CertificateError(
                f"witness fails relation {relation.describe()} for {subject!r}"
            )
        return Certificate(subject, witness, relation, verified=True)

    def target(self):
        if isinstance(self.relation, Inverse):
            return self.subject.inverse()
        if isinstance(self.relation, Power):
            return element_power(self.subject, self.relation.k)
        raise UsageError(f"unknown relation {self.relation!r}")

    def check(self) -> bool:
        """Re-multiply from scratch; independent of the construction path."""
        conj = self.witness * self.subject * self.witness.inverse()
        return conj == self.target()


@dataclass(frozen=True)
class OrderResult:
    """Either Finite(m) with g^m = e minimal, or ExceedsBound(bound)."""

    value: Optional[int]
    bound: int

    @staticmethod
    def finite(m: int, bound: int) -> "OrderResult":
        return OrderResult(m, bound)

    @staticmethod
    def exceeds(bound: int) -> "OrderResult":
        return OrderResult(None, bound)

    @property
    def is_finite(self) -> bool:
        return self.value is not None


class FiniteGroup:
    """A finite group as an explicit element list in deterministic
    (breadth-first closure) order."""

    def __init__(self, elements, generators):
        self.elements = tuple(elements)
        self.generators = tuple(generators)
        self._index = {g: i for i, g in enumerate(self.elements)}
        self._inverses: dict = {}
        self._classes: Optional[tuple] = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._index

    def index(self, g) -> int:
        return self._index[g]

    @property
    def identity(self):
        return self.elements[0]

    def inverse_of(self, g):
        inv = self._inverses.get(g)
        if inv is None:
            inv = self._inverses[g] = g.inverse()
        return inv


def generate_closure(generators, cap: int = 100_000) -> FiniteGroup:
    """Breadth-first closure of the generators; raises if it grows past cap."""
    generators = list(generators)
    if not generators:
        raise UsageError("generate_closure needs at least one generator")
    identity = generators[0].identity()
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        new = []
        for cur in frontier:
            for gen in generators:
                cand = cur * gen
                if cand not in seen:
                    seen.add(cand)
                    order.append(cand)
                    new.append(cand)
                    if len(order) > cap:
                        raise ClosureCapExceeded(f"closure exceeded cap {cap}")
        frontier = new
    return FiniteGroup(order, generators)


def element_order(g, bound: int = DEFAULT_ORDER_BOUND) -> OrderResult:
    """Order by iterated multiplication; no eigenvalue shortcuts."""
    if bound < 1:
        raise UsageError("bound must be >= 1")
    identity = g.identity()
    acc = g
    for m in range(1, bound + 1):
        if acc == identity:
            return OrderResult.finite(m, bound)
        acc = acc * g
    return OrderResult.exceeds(bound)


def is_real_bruteforce(G: FiniteGroup, g) -> Optional[Certificate]:
    """First h in enumeration order with h g h^-1 = g^-1, as a certificate."""
    target = g.inverse()
    for h in G.elements:
        if h * g * G.inverse_of(h) == target:
            return Certificate.make(g, h, Inverse())
    return None


def is_rational_bruteforce(G: FiniteGroup, g) -> Optional[dict]:
    """Certificates {k: h_k} for every k coprime to Ord(g), or None if any
    power class is unreachable.  k = 1 is always present (witnessed by e)."""
    order = element_order(g, bound=len(G) + 1)
    if not order.is_finite:
        raise UsageError("element order exceeds group size; not a member?")
    m = order.value
    certs = {1: Certificate.make(g, G.identity, Power(1))}
    power = g
    for k in range(2, m):
        power = power * g
        if gcd(k, m) != 1:
            continue
        found = None
        for h in G.elements:
            if h * g * G.inverse_of(h) == power:
                found = Certificate.make(g, h, Power(k))
                break
        if found is None:
            return None
        certs[k] = found
    return certs


def all_conjugators(G: FiniteGroup, s, target) -> list:
    """Every h in G with h s h^-1 = target, in enumeration order."""
    return [h for h in G.elements if h * s * G.inverse_of(h) == target]


def conjugacy_classes(G: FiniteGroup) -> list[tuple]:
    """Partition into conjugacy classes, ordered by least member index."""
    if G._classes is not None:
        return list(G._classes)
    seen = set()
    classes = []
    for g in G.elements:
        if g in seen:
            continue
        orbit = {h * g * G.inverse_of(h) for h in G.elements}
        seen |= orbit
        classes.append(tuple(sorted(orbit, key=G.index)))
    G._classes = tuple(classes)
    return classes


def rational_classes(G: FiniteGroup) -> list[tuple]:
    """Conjugacy classes merged along g ~ g^k for all k coprime to Ord(g)."""
    classes = conjugacy_classes(G)
    class_of = {}
    for idx, cls in enumerate(classes):
        for g in cls:
            class_of[g] = idx
    parent = list(range(len(classes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for idx, cls in enumerate(classes):
        g = cls[0]
        m = element_order(g, bound=len(G) + 1).value
        power = g
        for k in range(2, m):
            power = power * g
            if gcd(k, m) == 1:
                union(idx, class_of[power])
    merged: dict[int, list] = {}
    for idx, cls in enumerate(classes):
        merged.setdefault(find(idx), []).extend(cls)
    result = []
    for root in sorted(merged, key=lambda r: G.index(merged[r][0])):
        result.append(tuple(sorted(merged[root], key=G.index)))
    return result


def psl_canonical(m: Matrix) -> Matrix:
    """The coset representative of {m, -m} with the lexicographically
    smallest entry sequence (entries ordered by residue value)."""
    neg = -m
    key = tuple(e.value for e in m.entries)
    neg_key = tuple(e.value for e in neg.entries)
    return m if key <= neg_key else neg


@dataclass(frozen=True)
class PSLElement:
    """Element of PSL(n, F_p): a matrix up to sign, stored canonically."""

    matrix: Matrix

    @staticmethod
    def of(m: Matrix) -> "PSLElement":
        return PSLElement(psl_canonical(m))

    def __mul__(self, other: "PSLElement") -> "PSLElement":
        return PSLElement.of(self.matrix * other.matrix)

    def inverse(self) -> "PSLElement":
        return PSLElement.of(self.matrix.inverse())

    def identity(self) -> "PSLElement":
        return PSLElement.of(self.matrix.identity())

    def __repr__(self):
        return f"PSL{self.matrix!r}"
