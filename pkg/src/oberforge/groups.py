"""Finite groups as explicit multiplication tables.

Element indexing is frozen per family so that files written by one run can be
read by another:

* cyclic ``Z_n``: index ``i`` is ``i``.
* dihedral of order ``2N`` (``<r, s | r^N = s^2 = 1, srs = r^-1>``): index
  ``i < N`` is ``r^i`` and ``N + i`` is ``r^i s``.
* dicyclic of order ``4m`` (``<a, b | a^2m = 1, b^2 = a^m, b^-1 a b = a^-1>``):
  index ``i < 2m`` is ``a^i`` and ``2m + i`` is ``a^i b``.
* direct product: ``(x, y)`` has index ``x * |right| + y``.

The identity is always index 0.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ParameterError

__all__ = [
    "GroupSpec",
    "FiniteGroup",
    "RkReport",
    "make_group",
    "check_rk_necessary",
    "two_adic_split",
]

FAMILIES = ("cyclic", "dihedral", "dicyclic", "product")
_EAGER_ASSOCIATIVITY_LIMIT = 512
_SUPERSCRIPTS = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


@dataclass(frozen=True)
class GroupSpec:
    """Declarative description of a group from one of the built-in families.

    ``order`` holds the cyclic ``n`` or the dihedral/dicyclic group order;
    products carry ``left`` and ``right`` instead.
    """

    family: str
    order: int | None = None
    left: GroupSpec | None = None
    right: GroupSpec | None = None

    def __post_init__(self) -> None:
        fam = self.family
        if fam not in FAMILIES:
            raise ParameterError(f"unknown group family {fam!r}; expected one of {FAMILIES}")
        if fam == "product":
            if self.left is None or self.right is None:
                raise ParameterError("product needs exactly two factors (left and right)")
            if self.order is not None:
                raise ParameterError("product takes no order parameter")
            return
        if self.left is not None or self.right is not None:
            raise ParameterError(f"{fam} group takes no factors")
        n = self.order
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParameterError(f"{fam} group needs an integer parameter, got {n!r}")
        if fam == "cyclic" and n < 1:
            raise ParameterError(f"cyclic group needs n >= 1, got {n}")
        if fam == "dihedral" and (n < 2 or n % 2):
            raise ParameterError(f"dihedral group order must be even and >= 2, got {n}")
        if fam == "dicyclic" and (n < 8 or n % 4):
            raise ParameterError(f"dicyclic group order must be divisible by 4 and >= 8, got {n}")

    @classmethod
    def cyclic(cls, n: int) -> GroupSpec:
        return cls("cyclic", n)

    @classmethod
    def dihedral(cls, order: int) -> GroupSpec:
        return cls("dihedral", order)

    @classmethod
    def dicyclic(cls, order: int) -> GroupSpec:
        return cls("dicyclic", order)

    @classmethod
    def product(cls, left: GroupSpec, right: GroupSpec) -> GroupSpec:
        return cls("product", left=left, right=right)

    @property
    def size(self) -> int:
        if self.family == "product":
            return self.left.size * self.right.size
        return self.order

    def to_json(self) -> dict:
        if self.family == "product":
            return {"family": "product", "left": self.left.to_json(), "right": self.right.to_json()}
        key = "n" if self.family == "cyclic" else "order"
        return {"family": self.family, key: self.order}

    @classmethod
    def from_json(cls, data: dict) -> GroupSpec:
        if not isinstance(data, dict) or "family" not in data:
            raise ParameterError(f"group spec must be an object with a 'family' key, got {data!r}")
        fam = data["family"]
        if fam == "product":
            extra = set(data) - {"family", "left", "right"}
            if extra or "left" not in data or "right" not in data:
                raise ParameterError("product group spec needs exactly 'left' and 'right'")
            return cls.product(cls.from_json(data["left"]), cls.from_json(data["right"]))
        key = "n" if fam == "cyclic" else "order"
        if key not in data:
            raise ParameterError(f"{fam} group spec needs key {key!r}")
        return cls(fam, data[key])

    def __str__(self) -> str:
        if self.family == "product":
            return f"{self.left} x {self.right}"
        prefix = {"cyclic": "Z", "dihedral": "D", "dicyclic": "Q"}[self.family]
        return f"{prefix}{self.order}"


def _power_word(letter: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return letter
    return letter + str(e).translate(_SUPERSCRIPTS)


def _cyclic_table(n: int):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    names = [str(i) for i in range(n)]
    return table, names


def _dihedral_table(order: int):
    n = order // 2
    size = 2 * n
    table = [[0] * size for _ in range(size)]
    for x in range(size):
        i, a = x % n, x // n
        for y in range(size):
            j, b = y % n, y // n
            rot = (i + j) % n if a == 0 else (i - j) % n
            table[x][y] = rot + n * ((a + b) % 2)
    names = [(_power_word("r", x % n) + ("s" if x >= n else "")) or "1" for x in range(size)]
    return table, names


def _dicyclic_table(order: int):
    m = order // 4
    n = 2 * m
    table = [[0] * order for _ in range(order)]
    for x in range(order):
        i, a = x % n, x // n
        for y in range(order):
            j, b = y % n, y // n
            if a == 0:
                table[x][y] = (i + j) % n + n * b
            elif b == 0:
                table[x][y] = (i - j) % n + n
            else:
                table[x][y] = (i - j + m) % n
    names = [(_power_word("a", x % n) + ("b" if x >= n else "")) or "1" for x in range(order)]
    return table, names


def _product_table(left: FiniteGroup, right: FiniteGroup):
    nl, nr = left.order, right.order
    size = nl * nr
    table = [[0] * size for _ in range(size)]
    for x in range(size):
        x1, x2 = divmod(x, nr)
        lrow, rrow = left.table[x1], right.table[x2]
        row = table[x]
        for y in range(size):
            y1, y2 = divmod(y, nr)
            row[y] = lrow[y1] * nr + rrow[y2]
    names = [f"({left.element_names[x // nr]},{right.element_names[x % nr]})" for x in range(size)]
    return table, names


class FiniteGroup:
    """A finite group backed by its full Cayley table.

    Instances are immutable; derived data (conjugacy classes, center) is
    computed lazily and cached.
    """

    def __init__(self, spec: GroupSpec, table, element_names: Iterable[str]):
        self.spec = spec
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.element_names: tuple[str, ...] = tuple(element_names)
        self._validate()
        self.inverse: tuple[int, ...] = tuple(row.index(0) for row in self.table)
        self._check_associative()

    def _validate(self) -> None:
        n = self.order
        ident = tuple(range(n))
        if self.table[0] != ident or tuple(row[0] for row in self.table) != ident:
            raise ParameterError(f"{self.spec}: index 0 is not a two-sided identity")
        for i, row in enumerate(self.table):
            if sorted(row) != list(ident):
                raise ParameterError(f"{self.spec}: row {i} is not a permutation")
            if row.index(0) != [r[i] for r in self.table].index(0):
                raise ParameterError(f"{self.spec}: element {i} lacks a two-sided inverse")

    def _check_associative(self) -> None:
        n = self.order
        if n <= _EAGER_ASSOCIATIVITY_LIMIT:
            t = np.asarray(self.table, dtype=np.int32)
            for x in range(n):
                # (x*y)*z against x*(y*z) for every y, z
                if not np.array_equal(t[t[x]], t[x][t]):
                    raise ParameterError(f"{self.spec}: table is not associative (at x={x})")
            return
        rng = random.Random(0)
        for _ in range(20000):
            x, y, z = (rng.randrange(n) for _ in range(3))
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                raise ParameterError(f"{self.spec}: table is not associative at {(x, y, z)}")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec}, order={self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __len__(self) -> int:
        return self.order

    @property
    def identity(self) -> int:
        return 0

    def _check(self, x: int) -> None:
        if not (isinstance(x, int) and 0 <= x < self.order):
            raise IndexError(f"element index {x!r} out of range for {self.spec} (order {self.order})")

    def mul(self, x: int, y: int) -> int:
        self._check(x)
        self._check(y)
        return self.table[x][y]

    def inv(self, x: int) -> int:
        self._check(x)
        return self.inverse[x]

    def name(self, x: int) -> str:
        return self.element_names[x]

    def element_order(self, x: int) -> int:
        self._check(x)
        t, y = 1, x
        while y != 0:
            y = self.table[y][x]
            t += 1
        return t

    def involutions(self) -> list[int]:
        return [x for x in range(self.order) if self.element_order(x) == 2]

    def conjugate(self, x: int, g: int) -> int:
        """Return ``g^-1 x g``."""
        return self.table[self.table[self.inverse[g]][x]][g]

    @functools.cached_property
    def _classes(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.order
        blocks = []
        for x in range(self.order):
            if seen[x]:
                continue
            block = sorted({self.conjugate(x, g) for g in range(self.order)})
            for y in block:
                seen[y] = True
            blocks.append(tuple(block))
        return tuple(blocks)

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        """Partition of the elements into conjugacy classes, sorted by least member."""
        return list(self._classes)

    def class_of(self, x: int) -> tuple[int, ...]:
        for block in self._classes:
            if x in block:
                return block
        raise IndexError(x)

    @functools.cached_property
    def _center(self) -> frozenset[int]:
        t = self.table
        return frozenset(z for z in range(self.order) if all(t[z][g] == t[g][z] for g in range(self.order)))

    def center(self) -> frozenset[int]:
        return self._center

    def is_abelian(self) -> bool:
        return len(self._center) == self.order

    def closure(self, generators: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``generators``."""
        elems = {0}
        frontier = [0]
        gens = list(generators)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return frozenset(elems)

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        elems = set(elements)
        if 0 not in elems:
            return False
        return all(self.table[x][self.inverse[y]] in elems for x in elems for y in elems)

    def subgroups_of_order(self, k: int) -> list[frozenset[int]]:
        """All subgroups of order ``k``, sorted by their sorted element tuples.

        Subgroups are grown one generator at a time from the trivial group;
        every intermediate step of a chain ending in an order-k subgroup has
        order dividing k, so pruning on that is safe.
        """
        if k < 1 or self.order % k:
            return []
        found: set[frozenset[int]] = set()
        layer = {frozenset({0})}
        # breadth-first over subgroup lattice by adding one generator at a time
        while layer:
            nxt = set()
            for h in layer:
                if len(h) == k:
                    found.add(h)
                    continue
                for g in range(self.order):
                    if g in h:
                        continue
                    bigger = self.closure(list(h) + [g])
                    if len(bigger) <= k and k % len(bigger) == 0 and bigger not in nxt:
                        nxt.add(bigger)
            layer = nxt
        return sorted(found, key=lambda s: tuple(sorted(s)))


@functools.lru_cache(maxsize=None)
def make_group(spec: GroupSpec) -> FiniteGroup:
    """Build (and cache) the multiplication-table group described by ``spec``."""
    fam = spec.family
    if fam == "cyclic":
        table, names = _cyclic_table(spec.order)
    elif fam == "dihedral":
        table, names = _dihedral_table(spec.order)
    elif fam == "dicyclic":
        table, names = _dicyclic_table(spec.order)
    else:
        table, names = _product_table(make_group(spec.left), make_group(spec.right))
    return FiniteGroup(spec, table, names)


def two_adic_split(k: int) -> tuple[int, int]:
    """Write ``k = 2**n * m`` with ``m`` odd and return ``(n, m)``."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    n = 0
    while k % 2 == 0:
        k //= 2
        n += 1
    return n, k


@dataclass
class RkReport:
    """Outcome of the necessary-condition checks for ``G`` to be ``R_k``.

    A failing verdict proves that no 1-rotational k-factorization exists; a
    passing one proves nothing.
    """

    group: str
    k: int
    divisibility_ok: bool
    parity_ok: bool
    class_bound_ok: bool
    central_product_ok: bool
    n_exponent: int
    odd_part: int
    involution_class_count: int
    class_bound: int
    reasons: list[str] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.divisibility_ok and self.parity_ok and self.class_bound_ok and self.central_product_ok

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "k": self.k,
            "verdict": self.verdict,
            "divisibility_ok": self.divisibility_ok,
            "parity_ok": self.parity_ok,
            "class_bound_ok": self.class_bound_ok,
            "central_product_ok": self.central_product_ok,
            "n_exponent": self.n_exponent,
            "odd_part": self.odd_part,
            "involution_class_count": self.involution_class_count,
            "class_bound": self.class_bound,
            "reasons": list(self.reasons),
            "witnesses": list(self.witnesses),
        }


def check_rk_necessary(G: FiniteGroup, k: int) -> RkReport:
    """Run the conjugacy-class necessary conditions for ``G`` being ``R_k``."""
    if not isinstance(k, int) or k < 2:
        raise ParameterError(f"k must be an integer >= 2, got {k!r}")
    n_exp, m = two_adic_split(k)
    reasons: list[str] = []
    witnesses: list[dict] = []

    divisibility_ok = G.order % k == 0
    if not divisibility_ok:
        reasons.append(f"k={k} does not divide |G|={G.order}")

    parity_ok = G.order % 2 == 1 or k % 2 == 0
    if not parity_ok:
        reasons.append(f"|G|={G.order} is even but k={k} is odd")

    involutions = G.involutions()
    inv_classes = [c for c in G.conjugacy_classes() if G.element_order(c[0]) == 2]
    count = len(inv_classes)
    bound = m * (2**n_exp - 1)
    class_bound_ok = count <= bound
    if not class_bound_ok:
        reasons.append(f"{count} involution classes exceed the bound {bound}")

    central_product_ok = True
    if count == bound:
        central = sorted(z for z in G.center() if G.element_order(z) == 2)
        for z in central:
            for x in involutions:
                if x == z:
                    continue
                xz = G.table[x][z]
                if G.element_order(xz) != 2 or G.class_of(xz) == G.class_of(x):
                    central_product_ok = False
                    witnesses.append({"central": z, "involution": x, "product": xz})
        if not central_product_ok:
            w = witnesses[0]
            reasons.append(
                f"central involution {G.name(w['central'])} times {G.name(w['involution'])} "
                f"gives {G.name(w['product'])}, which is not an involution of a different class"
            )

    return RkReport(
        group=str(G.spec),
        k=k,
        divisibility_ok=divisibility_ok,
        parity_ok=parity_ok,
        class_bound_ok=class_bound_ok,
        central_product_ok=central_product_ok,
        n_exponent=n_exp,
        odd_part=m,
        involution_class_count=count,
        class_bound=bound,
        reasons=reasons,
        witnesses=witnesses,
    )
