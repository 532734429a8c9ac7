"""Finite multisets over interned symbols.

Multisets are the common currency of both formalisms: membrane contents,
rule sides, markings and pending buffers are all multisets. Values are
immutable once built and may be shared freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import (
    Callable,
    Generic,
    Hashable,
    Iterable,
    Iterator,
    Mapping,
    Optional,
    TypeVar,
    Union,
)

from .const import EMPTY_MULTISET, MAX_COUNT, NAME_PATTERN
from .exception import CountOverflowError, ModelValidationError, UnderflowError

K = TypeVar("K", bound=Hashable)
J = TypeVar("J", bound=Hashable)

_NAME_RE = re.compile(NAME_PATTERN)


def check_name(name: str, what: str = "symbol") -> str:
    """Return ``name`` if the text formats can write it back unchanged."""
    if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
        raise ModelValidationError(f"Invalid {what} name {name!r}")
    if name == EMPTY_MULTISET:
        raise ModelValidationError(
            f"'{EMPTY_MULTISET}' is reserved for the empty multiset"
        )
    return name


@dataclass(frozen=True, slots=True, order=True)
class Symbol:
    """An interned object name; ``id`` is its position in its table."""

    id: int
    name: str

    def __str__(self) -> str:
        """Render the display name."""
        return self.name


H = TypeVar("H", bound=Symbol)


class InternTable(Generic[H]):
    """Per-model table mapping names to handles with dense ids.

    Names are unique inside one table, so equal names always yield equal
    handles. Tables are never shared between models.
    """

    __slots__ = ("_handles", "_by_name", "_factory", "_what")

    def __init__(
        self,
        names: Iterable[str] = (),
        factory: Callable[[int, str], H] = Symbol,  # type: ignore[assignment]
        what: str = "symbol",
    ) -> None:
        """Intern ``names`` in order; duplicates are a validation error."""
        self._factory = factory
        self._what = what
        self._handles: list[H] = []
        self._by_name: dict[str, H] = {}
        for name in names:
            self._intern(name)

    def _intern(self, name: str) -> None:
        check_name(name, self._what)
        if name in self._by_name:
            raise ModelValidationError(f"Duplicate {self._what} '{name}'")
        handle = self._factory(len(self._handles), name)
        self._handles.append(handle)
        self._by_name[name] = handle

    def __getitem__(self, name: str) -> H:
        """Return the handle for ``name``."""
        try:
            return self._by_name[name]
        except KeyError:
            raise ModelValidationError(
                f"Unknown {self._what} '{name}'"
            ) from None

    def get(self, name: str) -> Optional[H]:
        """Return the handle for ``name`` or None."""
        return self._by_name.get(name)

    def __contains__(self, item: object) -> bool:
        """Membership by name or by handle."""
        if isinstance(item, str):
            return item in self._by_name
        return item in self._by_name.values()

    def __iter__(self) -> Iterator[H]:
        """Iterate handles in id order."""
        return iter(self._handles)

    def __len__(self) -> int:
        """Return the number of interned names."""
        return len(self._handles)

    @property
    def names(self) -> tuple[str, ...]:
        """Return the names in id order."""
        return tuple(h.name for h in self._handles)

    def by_id(self, ident: int) -> H:
        """Return the handle with the given id."""
        return self._handles[ident]

    def extended(self, names: Iterable[str]) -> "InternTable[H]":
        """Return a new table holding these handles followed by ``names``.

        Existing handles are reused as they are, so values built over this
        table remain valid over the extension.
        """
        table = type(self)((), factory=self._factory, what=self._what)
        table._handles = list(self._handles)
        table._by_name = dict(self._by_name)
        for name in names:
            table._intern(name)
        return table

    def owns(self, handle: object) -> bool:
        """Return True when ``handle`` is this table's own handle object."""
        if not isinstance(handle, Symbol):
            return False
        return self._by_name.get(handle.name) is handle

    def __eq__(self, other: object) -> bool:
        """Tables are equal when they intern the same names in order."""
        if not isinstance(other, InternTable):
            return NotImplemented
        return self.names == other.names and self._what == other._what

    def __hash__(self) -> int:
        """Hash by names."""
        return hash((self._what, self.names))

    def __repr__(self) -> str:
        """Return a debugging representation."""
        return f"{type(self).__name__}({list(self.names)!r})"


class Alphabet(InternTable[Symbol]):
    """The object alphabet V of a membrane system."""

    __slots__ = ()

    def __init__(self, names: Iterable[str] = (), **kwargs) -> None:
        """Intern object names."""
        kwargs.setdefault("factory", Symbol)
        kwargs.setdefault("what", "symbol")
        super().__init__(names, **kwargs)


def _check_count(key: object, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"Multiplicity of {key} must be an integer")
    if value < 0:
        raise UnderflowError(f"Negative multiplicity {value} for {key}")
    if value > MAX_COUNT:
        raise CountOverflowError(
            f"Multiplicity of {key} exceeds {MAX_COUNT}"
        )
    return value


class Multiset(Generic[K]):
    """A finite multiset; absent keys have multiplicity zero."""

    __slots__ = ("_counts", "_hash")

    def __init__(
        self, counts: Union[Mapping[K, int], Iterable[tuple[K, int]]] = ()
    ) -> None:
        """Build from a mapping or pairs; repeated keys are summed."""
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict[K, int] = {}
        for key, value in items:
            _check_count(key, value)
            if value:
                merged[key] = _check_count(key, merged.get(key, 0) + value)
        self._counts = merged
        self._hash: Optional[int] = None

    @classmethod
    def of(cls, *keys: K) -> "Multiset[K]":
        """Build a multiset counting each listed key once per occurrence."""
        return cls((key, 1) for key in keys)

    @classmethod
    def empty(cls) -> "Multiset[K]":
        """Return the empty multiset."""
        return cls()

    def count(self, key: K) -> int:
        """Return the multiplicity of ``key``."""
        return self._counts.get(key, 0)

    __getitem__ = count

    @property
    def size(self) -> int:
        """Return the total number of elements."""
        return sum(self._counts.values())

    def __bool__(self) -> bool:
        """A multiset is truthy when non-empty."""
        return bool(self._counts)

    def __iter__(self) -> Iterator[K]:
        """Iterate the support in sorted order."""
        return iter(self.support())

    def support(self) -> list[K]:
        """Return the keys with non-zero multiplicity, sorted."""
        return sorted(self._counts)  # type: ignore[type-var]

    def items(self) -> list[tuple[K, int]]:
        """Return ``(key, count)`` pairs sorted by key."""
        return [(key, self._counts[key]) for key in self.support()]

    def as_dict(self) -> dict[K, int]:
        """Return a fresh dictionary copy of the counts."""
        return dict(self._counts)

    def add(self, other: "Multiset[K]") -> "Multiset[K]":
        """Return the count-wise sum."""
        if not other:
            return self
        if not self:
            return other
        merged = dict(self._counts)
        for key, value in other._counts.items():
            merged[key] = merged.get(key, 0) + value
        return Multiset(merged)

    __add__ = add

    def sub(self, other: "Multiset[K]") -> "Multiset[K]":
        """Return the count-wise difference; ``other`` must be contained."""
        if not other:
            return self
        remaining = dict(self._counts)
        for key, value in other._counts.items():
            left = remaining.get(key, 0) - value
            if left < 0:
                raise UnderflowError(
                    f"Cannot remove {value} x {key} from {self}"
                )
            remaining[key] = left
        return Multiset(remaining)

    __sub__ = sub

    def leq(self, other: "Multiset[K]") -> bool:
        """Return True when every count is at most the one in ``other``."""
        return all(
            value <= other._counts.get(key, 0)
            for key, value in self._counts.items()
        )

    __le__ = leq

    def __ge__(self, other: "Multiset[K]") -> bool:
        """Containment in the other direction."""
        return other.leq(self)

    def scale(self, n: int) -> "Multiset[K]":
        """Return every count multiplied by ``n``; ``0`` yields the empty set."""
        if n < 0:
            raise UnderflowError(f"Cannot scale a multiset by {n}")
        if n == 0:
            return Multiset()
        if n == 1:
            return self
        return Multiset({key: value * n for key, value in self._counts.items()})

    def __mul__(self, n: int) -> "Multiset[K]":
        """Scalar multiplication."""
        return self.scale(n)

    __rmul__ = __mul__

    def fits(self, demand: "Multiset[K]") -> int:
        """Return how many copies of ``demand`` are contained in ``self``.

        ``demand`` must be non-empty.
        """
        if not demand:
            raise ValueError("Cannot fit an empty demand")
        return min(
            self._counts.get(key, 0) // value
            for key, value in demand._counts.items()
        )

    def restrict(self, keep: Callable[[K], bool]) -> "Multiset[K]":
        """Return the sub-multiset of keys accepted by ``keep``."""
        return Multiset(
            {key: value for key, value in self._counts.items() if keep(key)}
        )

    def map_keys(self, fn: Callable[[K], Optional[J]]) -> "Multiset[J]":
        """Rename keys through ``fn``; keys mapped to None are dropped."""
        pairs: list[tuple[J, int]] = []
        for key, value in self._counts.items():
            target = fn(key)
            if target is not None:
                pairs.append((target, value))
        return Multiset(pairs)

    def __eq__(self, other: object) -> bool:
        """Count-wise equality."""
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        """Hash of the frozen counts."""
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __str__(self) -> str:
        """Render as ``a^2 b`` or ``eps`` for the empty multiset."""
        if not self._counts:
            return EMPTY_MULTISET
        parts = []
        for key, value in self.items():
            parts.append(str(key) if value == 1 else f"{key}^{value}")
        return " ".join(parts)

    def __repr__(self) -> str:
        """Return a debugging representation."""
        return f"Multiset({{{', '.join(f'{k!s}: {v}' for k, v in self.items())}}})"


def add(a: Multiset[K], b: Multiset[K]) -> Multiset[K]:
    """Count-wise sum."""
    return a.add(b)


def sub(a: Multiset[K], b: Multiset[K]) -> Multiset[K]:
    """Count-wise difference; raises UnderflowError unless ``b <= a``."""
    return a.sub(b)


def leq(a: Multiset[K], b: Multiset[K]) -> bool:
    """Count-wise inclusion."""
    return a.leq(b)


def scale(n: int, a: Multiset[K]) -> Multiset[K]:
    """Scalar multiple ``n * a``."""
    return a.scale(n)


class Occurrences:
    """A multiset of rule or transition occurrences keyed by index.

    Base type of step and firing choices. Indices refer to the position of
    the rule or transition in its model; counts are positive.
    """

    __slots__ = ("_counts",)

    def __init__(
        self, counts: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()
    ) -> None:
        """Build from a mapping or pairs, dropping zero counts."""
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict[int, int] = {}
        for index, value in items:
            if value < 0:
                raise UnderflowError(f"Negative occurrence count {value}")
            if value:
                merged[index] = merged.get(index, 0) + value
        self._counts = tuple(sorted(merged.items()))

    @classmethod
    def from_vector(cls, vector: Iterable[int]):
        """Build from a dense count vector indexed by position."""
        return cls(enumerate(vector))

    def count(self, index: int) -> int:
        """Return the number of occurrences of ``index``."""
        for key, value in self._counts:
            if key == index:
                return value
        return 0

    def items(self) -> tuple[tuple[int, int], ...]:
        """Return ``(index, count)`` pairs in index order."""
        return self._counts

    def vector(self, length: int) -> tuple[int, ...]:
        """Return the dense count vector of the given length."""
        dense = [0] * length
        for index, value in self._counts:
            dense[index] = value
        return tuple(dense)

    @property
    def total(self) -> int:
        """Return the total number of occurrences."""
        return sum(value for _, value in self._counts)

    def __bool__(self) -> bool:
        """Truthy when at least one occurrence is present."""
        return bool(self._counts)

    def __eq__(self, other: object) -> bool:
        """Equal when same type and same counts."""
        if type(other) is not type(self):
            return NotImplemented
        return self._counts == other._counts  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        """Hash by counts."""
        return hash((type(self).__name__, self._counts))

    def __lt__(self, other: "Occurrences") -> bool:
        """Canonical ordering by count pairs."""
        return self._counts < other._counts

    def describe(self, names: Callable[[int], str]) -> str:
        """Render as ``{r1:1, r2:2}`` using ``names`` for indices."""
        inner = ", ".join(f"{names(i)}:{n}" for i, n in self._counts)
        return "{" + inner + "}"

    def named(self, names: Callable[[int], str]) -> dict[str, int]:
        """Return ``{name: count}`` using ``names`` for indices."""
        return {names(i): n for i, n in self._counts}

    def __repr__(self) -> str:
        """Return a debugging representation."""
        return f"{type(self).__name__}({dict(self._counts)!r})"
