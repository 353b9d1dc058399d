"""Index coding instances, subinstances, file formats and instance generators.

Receivers and messages are numbered ``1..m``. Receiver ``i`` wants ``x_i`` and
knows the messages indexed by its side information ``A_i``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from icoding.errors import CapExceededError, InvalidInstanceError, ParseError

IndexSet = frozenset[int]

MAIS_DEFAULT_LIMIT = 16


@dataclass(frozen=True)
class Instance:
    """An index coding instance ``{(i | A_i) : i in [m]}``.

    Attributes:
        m: Number of messages, equal to the number of receivers.
        side_info: ``side_info[i - 1]`` is ``A_i``.
    """

    m: int
    side_info: tuple[IndexSet, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidInstanceError(f"m must be a positive integer, got {self.m!r}")
        if len(self.side_info) != self.m:
            raise InvalidInstanceError(
                f"expected {self.m} side-information sets, got {len(self.side_info)}"
            )
        for i, a in enumerate(self.side_info, start=1):
            if i in a:
                raise InvalidInstanceError(f"receiver {i} lists its own message")
            for j in a:
                if not 1 <= j <= self.m:
                    raise InvalidInstanceError(
                        f"index {j} in A_{i} out of range for m={self.m}"
                    )

    @classmethod
    def from_lists(cls, side_info: Sequence[Iterable[int]]) -> Instance:
        """Build an instance from an ordered list of side-information collections."""
        return cls(len(side_info), tuple(frozenset(a) for a in side_info))

    @classmethod
    def from_mapping(cls, side_info: Mapping[int, Iterable[int]]) -> Instance:
        """Build an instance from ``{i: A_i}`` with keys exactly ``1..m``."""
        m = len(side_info)
        if set(side_info) != set(range(1, m + 1)):
            raise InvalidInstanceError("mapping keys must be exactly 1..m")
        return cls(m, tuple(frozenset(side_info[i]) for i in range(1, m + 1)))

    @property
    def receivers(self) -> range:
        return range(1, self.m + 1)

    @cached_property
    def universe(self) -> IndexSet:
        return frozenset(self.receivers)

    def A(self, i: int) -> IndexSet:
        """Side information of receiver ``i``."""
        return self.side_info[i - 1]

    def interfering(self, i: int) -> IndexSet:
        """``B_i``: messages receiver ``i`` neither wants nor knows."""
        return self.universe - self.side_info[i - 1] - {i}

    @cached_property
    def min_side_info(self) -> int:
        """``|A|_min``, the smallest side-information size."""
        return min(len(a) for a in self.side_info)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Arcs ``(j, i)`` of the side-information digraph, one per ``j in A_i``."""
        for i in self.receivers:
            for j in sorted(self.A(i)):
                yield (j, i)

    def successors(self, j: int) -> IndexSet:
        """Receivers that know message ``j``."""
        return frozenset(i for i in self.receivers if j in self.side_info[i - 1])

    def subinstance(self, members: Iterable[int]) -> Subinstance:
        return Subinstance(self, frozenset(members))

    def relabel(self, mapping: Mapping[int, int]) -> Instance:
        """Rename every index through the bijection ``mapping`` on ``[m]``."""
        if sorted(mapping) != list(self.receivers) or sorted(mapping.values()) != list(
            self.receivers
        ):
            raise InvalidInstanceError("relabeling must be a permutation of [m]")
        new: list[IndexSet] = [frozenset()] * self.m
        for i in self.receivers:
            new[mapping[i] - 1] = frozenset(mapping[j] for j in self.A(i))
        return Instance(self.m, tuple(new))

    def side_info_masks(self) -> tuple[int, ...]:
        """Bitmask form of the side information; bit ``j - 1`` stands for message ``j``."""
        return tuple(sum(1 << (j - 1) for j in a) for a in self.side_info)

    def to_json(self) -> str:
        return json.dumps(
            {"m": self.m, "side_info": [sorted(a) for a in self.side_info]}
        )


@dataclass(frozen=True)
class Subinstance:
    """The subinstance ``I_M``: receivers in ``M`` with side information ``A_i ∩ M``."""

    parent: Instance
    members: IndexSet

    def __post_init__(self) -> None:
        if not self.members:
            raise InvalidInstanceError("subinstance needs at least one member")
        bad = [i for i in self.members if not 1 <= i <= self.parent.m]
        if bad:
            raise InvalidInstanceError(f"members {sorted(bad)} outside [m]")

    @property
    def size(self) -> int:
        return len(self.members)

    def A(self, i: int) -> IndexSet:
        return self.parent.A(i) & self.members

    def interfering(self, i: int) -> IndexSet:
        return self.members - self.parent.A(i) - {i}

    def ordered_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def to_instance(self) -> Instance:
        """Compact copy relabeled to ``1..|M|`` in increasing member order."""
        order = self.ordered_members()
        pos = {v: k for k, v in enumerate(order, start=1)}
        return Instance(
            len(order), tuple(frozenset(pos[j] for j in self.A(i)) for i in order)
        )


InstanceLike = Union[Instance, Subinstance]


def as_instance(x: InstanceLike) -> Instance:
    """Turn either an instance or a subinstance into a standalone instance."""
    return x.to_instance() if isinstance(x, Subinstance) else x


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks whose union is ``[m]``."""

    blocks: tuple[IndexSet, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise InvalidInstanceError("partition blocks must be nonempty")
            if seen & b:
                raise InvalidInstanceError("partition blocks overlap")
            seen |= b

    def covers(self, m: int) -> bool:
        return set().union(*self.blocks) == set(range(1, m + 1))


# ---------------------------------------------------------------- file formats


def parse_instance(text: str) -> Instance:
    """Parse the ``.ic`` text format.

    Line 1 holds ``m``; the next ``m`` non-comment lines hold the indices of
    ``A_1..A_m`` separated by whitespace. An empty line is the empty set and
    lines starting with ``#`` are ignored. Side-information lines missing at
    the end of the file are read as empty sets.
    """
    lines = [
        (n, raw.strip())
        for n, raw in enumerate(text.splitlines(), start=1)
        if not raw.lstrip().startswith("#")
    ]
    if not lines or not lines[0][1]:
        raise ParseError("missing message count", lines[0][0] if lines else 1)
    head_line, head = lines[0]
    try:
        m = int(head)
    except ValueError:
        raise ParseError(f"message count must be an integer, got {head!r}", head_line)
    if m < 1:
        raise ParseError("message count must be at least 1", head_line)
    body = lines[1:]
    extra = [(n, s) for n, s in body[m:] if s]
    if extra:
        raise ParseError(f"unexpected content after {m} receivers", extra[0][0])
    side: list[IndexSet] = []
    for i in range(1, m + 1):
        if i - 1 < len(body):
            n, s = body[i - 1]
        else:
            n, s = (lines[-1][0] + i, "")
        values: list[int] = []
        for tok in s.split():
            try:
                values.append(int(tok))
            except ValueError:
                raise ParseError(f"not an integer: {tok!r}", n)
        for j in values:
            if not 1 <= j <= m:
                raise ParseError(f"index {j} out of range for m={m}", n)
            if j == i:
                raise ParseError(f"receiver {i} lists its own message", n)
        if len(set(values)) != len(values):
            raise ParseError(f"duplicate index in A_{i}", n)
        side.append(frozenset(values))
    return Instance(m, tuple(side))


def serialize_instance(instance: Instance) -> str:
    """Inverse of :func:`parse_instance`."""
    out = [str(instance.m)]
    out.extend(" ".join(map(str, sorted(a))) for a in instance.side_info)
    return "\n".join(out) + "\n"


def instance_from_json(text: str) -> Instance:
    """Parse the JSON mirror ``{"m": int, "side_info": [[...], ...]}``."""
    try:
        data = json.loads(text)
        m = data["m"]
        side = data["side_info"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"invalid instance JSON: {exc}") from exc
    if not isinstance(m, int) or not isinstance(side, list) or len(side) != m:
        raise ParseError("JSON instance needs integer m and m side-information lists")
    for i, a in enumerate(side, start=1):
        if not isinstance(a, list) or len(set(a)) != len(a):
            raise ParseError(f"side_info entry {i} must be a list without duplicates")
    try:
        return Instance.from_lists(side)
    except InvalidInstanceError as exc:
        raise ParseError(str(exc)) from exc


def load_instance(path: str | os.PathLike[str]) -> Instance:
    """Read an instance from a ``.ic`` or ``.json`` file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if os.fspath(path).endswith(".json"):
        return instance_from_json(text)
    return parse_instance(text)


# ------------------------------------------------------------- named instances

_NAMED: dict[str, tuple[tuple[int, ...], ...]] = {
    "I1": ((), (3, 4), (2, 4), (2, 3)),
    "I2": ((2, 5, 6), (1, 3, 5), (1, 2, 4), (1, 2, 3), (2, 4), (3,)),
    "I3": ((3, 5, 6), (1, 4, 5, 6), (2, 4, 6), (1, 2, 3, 5), (1, 2, 3, 4), (1, 2, 4, 5)),
    "I4": ((2, 5), (1, 4), (2,), (5,), (1, 3)),
    "I5": ((2, 3, 5), (1, 3, 5), (2, 4, 5), (2, 3, 5), (1, 4)),
    "I8": ((2, 5), (3, 4), (2, 4), (2, 3), (1, 4)),
    "I9": ((2, 5), (1, 3), (2, 4), (3, 5), (1, 4)),
    "I10": ((4, 5), (1, 6), (1, 2, 4, 5, 6), (1, 2, 3), (2, 3), (3, 4)),
}

NAMED_INSTANCES: tuple[str, ...] = tuple(_NAMED)


def named_instance(name: str) -> Instance:
    """Return one of the fixed instances ``I1``-``I5``, ``I8``-``I10``."""
    key = name.strip().upper()
    if key in ("I6", "I7"):
        fn = "gen_class_i6" if key == "I6" else "gen_class_i7"
        raise InvalidInstanceError(f"{key} is an instance family; use {fn}(l)")
    if key not in _NAMED:
        raise InvalidInstanceError(
            f"unknown instance {name!r}; choose from {', '.join(NAMED_INSTANCES)}"
        )
    return Instance.from_lists(_NAMED[key])


def gen_class_i6(l: int) -> Instance:
    """Class-I6 instance with ``m = 4l + 1``.

    ``A_{2i-1} = {2j : j != i} ∪ {4l+1}``, ``A_{2i} = {2i-1}`` for ``i`` in
    ``[2l]`` and ``A_{4l+1}`` holds every odd index below ``4l+1``.
    """
    if not isinstance(l, int) or l < 1:
        raise InvalidInstanceError("l must be a positive integer")
    m = 4 * l + 1
    side: dict[int, set[int]] = {}
    for i in range(1, 2 * l + 1):
        side[2 * i - 1] = {2 * j for j in range(1, 2 * l + 1) if j != i} | {m}
        side[2 * i] = {2 * i - 1}
    side[m] = {2 * i - 1 for i in range(1, 2 * l + 1)}
    return Instance.from_mapping(side)


def gen_class_i7(l: int) -> Instance:
    """Class-I7 instance with ``m = 5l + 3``.

    Indices split into ``L1 = [2l+1]``, ``L2 = [2l+2 : 4l+2]`` and
    ``L3 = [4l+3 : 5l+3]``. Receiver ``4l+2+j`` of ``L3`` knows ``2j-1`` and
    ``2l+2j``.
    """
    if not isinstance(l, int) or l < 1:
        raise InvalidInstanceError("l must be a positive integer")
    l1 = set(range(1, 2 * l + 2))
    l2 = set(range(2 * l + 2, 4 * l + 3))
    l3 = set(range(4 * l + 3, 5 * l + 4))

    def odd(s: set[int]) -> set[int]:
        return {x for x in s if x % 2}

    def even(s: set[int]) -> set[int]:
        return {x for x in s if not x % 2}

    side: dict[int, set[int]] = {}
    for i in odd(l1):
        side[i] = even(l1) | (l2 - {i + 2 * l + 1}) | l3
    for i in even(l1):
        side[i] = odd(l2) | (l1 - {i}) | l3
    for i in even(l2):
        side[i] = odd(l2) | (l1 - {i - (2 * l + 1)}) | l3
    for i in odd(l2):
        side[i] = even(l1) | (l2 - {i}) | l3
    for j in range(1, l + 2):
        side[4 * l + 2 + j] = {2 * j - 1, 2 * l + 2 * j}
    for i in side:
        side[i].discard(i)
    return Instance.from_mapping(side)


# ------------------------------------------------------------------ MAIS bound


def _is_acyclic(mask: int, succ: Sequence[int]) -> bool:
    """Kahn's algorithm on the subgraph induced by ``mask`` (bit masks)."""
    indeg: dict[int, int] = {}
    verts = [v for v in range(len(succ)) if mask >> v & 1]
    for v in verts:
        indeg.setdefault(v, 0)
        s = succ[v] & mask
        while s:
            low = s & -s
            w = low.bit_length() - 1
            indeg[w] = indeg.get(w, 0) + 1
            s ^= low
    stack = [v for v in verts if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        s = succ[v] & mask
        while s:
            low = s & -s
            w = low.bit_length() - 1
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
            s ^= low
    return seen == len(verts)


def is_acyclic(instance: InstanceLike, members: Iterable[int] | None = None) -> bool:
    """Whether the side-information digraph induced by ``members`` has no cycle."""
    inst = instance.parent if isinstance(instance, Subinstance) else instance
    if members is None:
        members = instance.members if isinstance(instance, Subinstance) else inst.receivers
    mask = sum(1 << (v - 1) for v in members)
    return _is_acyclic(mask, _successor_masks(inst))


def _successor_masks(instance: Instance) -> list[int]:
    succ = [0] * instance.m
    for i in instance.receivers:
        for j in instance.A(i):
            succ[j - 1] |= 1 << (i - 1)
    return succ


def maximum_acyclic_set(
    instance: Instance, *, limit: int = MAIS_DEFAULT_LIMIT
) -> IndexSet:
    """A largest vertex set inducing an acyclic subgraph of the side-information digraph.

    Depth-first search: vertices are added in increasing order and a branch is
    abandoned as soon as it becomes cyclic, since every superset of a cyclic
    set is cyclic. A branch is also cut once it cannot beat the best size.

    Raises:
        CapExceededError: ``m`` is above ``limit``.
    """
    m = instance.m
    if m > limit:
        raise CapExceededError(
            f"exhaustive limit: MAIS search is capped at m <= {limit} (got m={m})"
        )
    succ = _successor_masks(instance)
    best = [0, 0]

    def dfs(mask: int, size: int, nxt: int) -> None:
        if size > best[0]:
            best[0], best[1] = size, mask
        for v in range(nxt, m):
            if size + (m - v) <= best[0]:
                return
            cand = mask | 1 << v
            if _is_acyclic(cand, succ):
                dfs(cand, size + 1, v + 1)

    dfs(0, 0, 0)
    return frozenset(v + 1 for v in range(m) if best[1] >> v & 1)


def mais_bound(instance: Instance, *, limit: int = MAIS_DEFAULT_LIMIT) -> int:
    """Size of the maximum acyclic induced subgraph, a lower bound on every rate."""
    return len(maximum_acyclic_set(instance, limit=limit))
