"""Finitely generated Abelian groups in invariant-factor coordinates.

A group ``Z^rank x Z/d_1 x ... x Z/d_t`` (with ``d_1 | d_2 | ... | d_t``) is
described by a :class:`GroupSpec`.  Elements are stored as a pair of integer
tuples: the free part (unbounded integers) and the torsion part (residues in
``[0, d_i)``).  The concatenation ``free + torsion`` is the *coordinate
tuple* used by the graph kernels.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

__all__ = [
    "GroupSpec",
    "GroupElement",
    "GeneratingSet",
    "ValidationReport",
    "GeneratingSetError",
    "NotSymmetric",
    "ContainsIdentity",
    "DoesNotGenerate",
    "make_group",
    "add",
    "neg",
    "scalar_mul",
    "torsion_project",
    "torsion_elements",
    "count_order_le_2",
    "validate_generating_set",
]


@dataclass(frozen=True)
class GroupSpec:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError(f"rank must be non-negative, got {self.rank}")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion factors must be >= 2, got {d}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(
                    f"torsion factors {self.torsion} are not a divisibility chain; "
                    "use make_group() to normalize"
                )

    @property
    def dim(self) -> int:
        """Length of the coordinate tuple (free coordinates, then torsion)."""
        return self.rank + len(self.torsion)

    def torsion_order(self) -> int:
        return prod(self.torsion)

    def is_finite(self) -> bool:
        return self.rank == 0

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank, (0,) * len(self.torsion))

    def element(self, free: Sequence[int], torsion: Sequence[int] = ()) -> GroupElement:
        return GroupElement(self, tuple(free), tuple(torsion))

    def from_coords(self, coords: Sequence[int]) -> GroupElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return GroupElement(self, coords[: self.rank], coords[self.rank :])

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinate tuple: torsion entries reduced modulo their factor."""
        r = self.rank
        return tuple(coords[:r]) + tuple(c % d for c, d in zip(coords[r:], self.torsion))

    def __str__(self) -> str:
        parts = ["Z"] * self.rank if self.rank <= 3 else [f"Z^{self.rank}"]
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict | str) -> GroupSpec:
        if isinstance(data, str):
            data = json.loads(data)
        return make_group(int(data["rank"]), [int(d) for d in data.get("torsion", [])])


@dataclass(frozen=True, order=False)
class GroupElement:
    group: GroupSpec = field(repr=False)
    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.rank or len(self.torsion) != len(g.torsion):
            raise ValueError(
                f"element shape ({len(self.free)}, {len(self.torsion)}) does not match "
                f"group {g} of shape ({g.rank}, {len(g.torsion)})"
            )
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(
            self, "torsion", tuple(int(t) % d for t, d in zip(self.torsion, g.torsion))
        )

    @property
    def coords(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def is_torsion(self) -> bool:
        return not any(self.free)

    def _check(self, other: GroupElement):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group is not self.group and other.group != self.group:
            raise ValueError(f"mismatched groups: {self.group} vs {other.group}")
        return None

    def __add__(self, other: GroupElement) -> GroupElement:
        if self._check(other) is NotImplemented:
            return NotImplemented
        g = self.group
        return _raw(
            g,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple((a + b) % d for a, b, d in zip(self.torsion, other.torsion, g.torsion)),
        )

    def __neg__(self) -> GroupElement:
        g = self.group
        return _raw(g, tuple(-a for a in self.free), tuple(-a % d for a, d in zip(self.torsion, g.torsion)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        if self._check(other) is NotImplemented:
            return NotImplemented
        g = self.group
        return _raw(
            g,
            tuple(a - b for a, b in zip(self.free, other.free)),
            tuple((a - b) % d for a, b, d in zip(self.torsion, other.torsion, g.torsion)),
        )

    def __rmul__(self, n: int) -> GroupElement:
        if not isinstance(n, int):
            return NotImplemented
        g = self.group
        return _raw(g, tuple(n * a for a in self.free), tuple(n * a % d for a, d in zip(self.torsion, g.torsion)))

    def sort_key(self) -> tuple[int, ...]:
        return self.coords

    def __lt__(self, other: GroupElement) -> bool:
        return self.coords < other.coords

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, group: GroupSpec, data: dict) -> GroupElement:
        return GroupElement(group, tuple(data["free"]), tuple(data.get("torsion", ())))


def _raw(group: GroupSpec, free: tuple[int, ...], torsion: tuple[int, ...]) -> GroupElement:
    # results of group operations are already canonical; skip validation
    e = object.__new__(GroupElement)
    object.__setattr__(e, "group", group)
    object.__setattr__(e, "free", free)
    object.__setattr__(e, "torsion", torsion)
    return e


def _elementary_divisors(factors: Iterable[int]) -> dict[int, list[int]]:
    from sympy import factorint

    powers: dict[int, list[int]] = {}
    for d in factors:
        for p, e in factorint(d).items():
            powers.setdefault(int(p), []).append(int(p) ** int(e))
    return powers


def make_group(rank: int, torsion_factors: Sequence[int] = ()) -> GroupSpec:
    """Build a group spec, normalizing arbitrary cyclic factors to invariant factors.

    Any list of cyclic orders is accepted: ``make_group(0, [2, 3])`` and
    ``make_group(0, [6])`` return the same spec.  Two specs compare equal
    exactly when the groups are isomorphic.
    """
    if rank < 0:
        raise ValueError(f"rank must be non-negative, got {rank}")
    factors = [int(d) for d in torsion_factors]
    for d in factors:
        if d < 2:
            raise ValueError(f"torsion factors must be >= 2, got {d}")
    powers = _elementary_divisors(factors)
    length = max((len(v) for v in powers.values()), default=0)
    invariant = [1] * length
    for p_powers in powers.values():
        # largest prime power goes into the largest invariant factor
        for i, q in enumerate(sorted(p_powers, reverse=True)):
            invariant[length - 1 - i] *= q
    return GroupSpec(rank, tuple(invariant))


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def neg(a: GroupElement) -> GroupElement:
    return -a


def scalar_mul(n: int, a: GroupElement) -> GroupElement:
    return n * a


def torsion_project(a: GroupElement) -> tuple[int, ...]:
    """Image of ``a`` in ``G / tors G``, identified with ``Z^rank``."""
    return a.free


def torsion_elements(g: GroupSpec) -> list[GroupElement]:
    """All elements with zero free part, identity first, in lexicographic order."""
    zero = (0,) * g.rank
    return [
        GroupElement(g, zero, t) for t in itertools.product(*(range(d) for d in g.torsion))
    ]


def count_order_le_2(g: GroupSpec) -> int:
    """Number of elements ``t`` with ``2t = 0``: one per odd factor, two per even one."""
    return 2 ** sum(1 for d in g.torsion if d % 2 == 0)


class GeneratingSet:
    """A finite subset ``S`` of a group, symmetrized on construction by default.

    ``symmetrized`` records whether inverses had to be added.  The identity is
    kept if the caller passes it (so :func:`validate_generating_set` can report
    it) but it never contributes an edge to the Cayley graph.
    """

    __slots__ = ("group", "elements", "symmetrized", "_coord_set")

    def __init__(self, group: GroupSpec, elements: Iterable[GroupElement], symmetrize: bool = True):
        elems = set()
        for e in elements:
            if e.group != group:
                raise ValueError(f"generator {e!r} belongs to {e.group}, not {group}")
            elems.add(e)
        added = {-e for e in elems} - elems
        self.symmetrized = bool(added) and symmetrize
        if symmetrize:
            elems |= added
        self.group = group
        self.elements: tuple[GroupElement, ...] = tuple(sorted(elems))
        self._coord_set = frozenset(e.coords for e in self.elements)

    @classmethod
    def from_tuples(
        cls, group: GroupSpec, tuples: Iterable[Sequence[int]], symmetrize: bool = True
    ) -> GeneratingSet:
        return cls(group, (group.from_coords(t) for t in tuples), symmetrize=symmetrize)

    @property
    def edge_generators(self) -> tuple[GroupElement, ...]:
        """Generators that produce edges (everything except the identity)."""
        return tuple(e for e in self.elements if not e.is_zero())

    def __contains__(self, e: GroupElement) -> bool:
        return e.coords in self._coord_set

    def contains_coords(self, coords: tuple[int, ...]) -> bool:
        return coords in self._coord_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeneratingSet)
            and self.group == other.group
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.group, self.elements))

    def __repr__(self) -> str:
        return f"GeneratingSet({self.group}, {{{', '.join(map(repr, self.elements))}}})"

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "elements": [e.to_json() for e in self.elements]}


class GeneratingSetError(ValueError):
    pass


class NotSymmetric(GeneratingSetError):
    def __init__(self, offending: list[GroupElement]):
        self.offending = offending
        super().__init__(f"inverses missing for {offending}")


class ContainsIdentity(GeneratingSetError):
    def __init__(self):
        super().__init__("generating set contains the identity")


class DoesNotGenerate(GeneratingSetError):
    def __init__(self, free_rank: int, cyclic: list[int]):
        self.free_rank = free_rank
        self.cyclic = cyclic
        parts = ["Z"] * free_rank + [f"Z/{d}" for d in cyclic]
        super().__init__(f"elements generate a proper subgroup; quotient is {' x '.join(parts)}")


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    identity_free: bool
    generates: bool
    quotient_free_rank: int = 0
    quotient_cyclic: tuple[int, ...] = ()
    missing_inverses: tuple[GroupElement, ...] = ()

    @property
    def ok(self) -> bool:
        return self.symmetric and self.identity_free and self.generates


def _cokernel(group: GroupSpec, elements: Sequence[GroupElement]) -> tuple[int, list[int]]:
    """Structure of ``Z^dim / L`` where ``L`` is spanned by the elements and torsion relations."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import invariant_factors

    n = group.dim
    if n == 0:
        return 0, []
    columns = [list(e.coords) for e in elements]
    for i, d in enumerate(group.torsion):
        rel = [0] * n
        rel[group.rank + i] = d
        columns.append(rel)
    rows = [[ZZ(col[i]) for col in columns] for i in range(n)]
    mat = DomainMatrix(rows, (n, len(columns)), ZZ)
    nonzero = [int(d) for d in invariant_factors(mat) if d != 0]
    return n - len(nonzero), [abs(d) for d in nonzero if abs(d) != 1]


def validate_generating_set(s: GeneratingSet, raise_on_error: bool = True) -> ValidationReport:
    """Check symmetry, absence of the identity, and that ``S`` spans the group.

    Spanning is decided exactly: the lattice spanned by the coordinate vectors
    of ``S`` together with the relations ``d_i e_i`` must be all of
    ``Z^dim``, i.e. have only unit invariant factors.
    """
    missing = tuple(sorted({-e for e in s.elements} - set(s.elements)))
    identity_free = not any(e.is_zero() for e in s.elements)
    free_rank, cyclic = _cokernel(s.group, s.elements)
    generates = free_rank == 0 and not cyclic
    report = ValidationReport(
        symmetric=not missing,
        identity_free=identity_free,
        generates=generates,
        quotient_free_rank=free_rank,
        quotient_cyclic=tuple(cyclic),
        missing_inverses=missing,
    )
    if raise_on_error:
        if missing:
            raise NotSymmetric(list(missing))
        if not identity_free:
            raise ContainsIdentity()
        if not generates:
            raise DoesNotGenerate(free_rank, cyclic)
    return report
