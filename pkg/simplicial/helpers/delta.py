"""
Combinatorics of the simplex category: monotone maps between finite ordinals,
their generators and the epi-mono factorization behind Eilenberg-Zilber names.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Tuple

from .errors import DomainError


@dataclass(frozen=True)
class OrdinalMap:
    """
    A weakly monotone map [m] -> [n], stored by its values.

    Args:
        values: image of 0..m, so ``len(values)`` is the source size m+1
        target_size: n+1
    """
    values: Tuple[int, ...]
    target_size: int

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, 'values', values)
        if not values:
            raise DomainError("an ordinal map needs a non-empty source")
        if any(v < 0 or v >= self.target_size for v in values):
            raise DomainError(f"values {values} leave the target [{self.target_size - 1}]")
        if any(a > b for a, b in zip(values, values[1:])):
            raise DomainError(f"values {values} are not monotone")

    @property
    def source_size(self) -> int:
        return len(self.values)

    @property
    def source_dim(self) -> int:
        return len(self.values) - 1

    @property
    def target_dim(self) -> int:
        return self.target_size - 1

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target_size

    def __call__(self, i: int) -> int:
        return self.values[i]


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(tuple(range(n + 1)), n + 1)


def coface(i: int, n: int) -> OrdinalMap:
    """The coface [n-1] -> [n] that skips ``i``."""
    if n < 1 or not 0 <= i <= n:
        raise DomainError(f"coface d^{i} into [{n}] does not exist")
    return OrdinalMap(tuple(j if j < i else j + 1 for j in range(n)), n + 1)


def codegeneracy(i: int, n: int) -> OrdinalMap:
    """The codegeneracy [n+1] -> [n] that hits ``i`` twice."""
    if n < 0 or not 0 <= i <= n:
        raise DomainError(f"codegeneracy s^{i} onto [{n}] does not exist")
    return OrdinalMap(tuple(j if j <= i else j - 1 for j in range(n + 2)), n + 1)


def inclusion(vertices: Iterable[int], n: int) -> OrdinalMap:
    """The monotone injection onto a set of vertices of [n]."""
    values = tuple(sorted(set(vertices)))
    return OrdinalMap(values, n + 1)


def interval(a: int, b: int, n: int) -> OrdinalMap:
    return inclusion(range(a, b + 1), n)


def compose(f: OrdinalMap, g: OrdinalMap) -> OrdinalMap:
    """Diagrammatic composite: first ``f``, then ``g``."""
    if f.target_size != g.source_size:
        raise DomainError(
            f"cannot compose a map into [{f.target_dim}] with a map out of [{g.source_dim}]"
        )
    return OrdinalMap(tuple(g.values[v] for v in f.values), g.target_size)


@dataclass(frozen=True)
class DegeneracyWord:
    """
    A composite s_{i1} ... s_{ik} of degeneracies, kept with i1 > i2 > ... > ik.

    The empty word is the identity.
    """
    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        indices = tuple(self.indices)
        object.__setattr__(self, 'indices', indices)
        if any(a <= b for a, b in zip(indices, indices[1:])):
            raise DomainError(f"degeneracy word {indices} is not strictly decreasing")
        if indices and indices[-1] < 0:
            raise DomainError(f"degeneracy word {indices} has a negative index")

    def __len__(self) -> int:
        return len(self.indices)

    def __bool__(self) -> bool:
        return bool(self.indices)

    def as_map(self, base_dim: int) -> OrdinalMap:
        """The surjection [base_dim + len] -> [base_dim] this word encodes."""
        n = base_dim + len(self.indices)
        if self.indices and self.indices[0] >= n:
            raise DomainError(f"word {self.indices} does not act on a {base_dim}-simplex")
        repeats = set(self.indices)
        values, below = [], 0
        for j in range(n + 1):
            values.append(j - below)
            if j in repeats:
                below += 1
        return OrdinalMap(tuple(values), base_dim + 1)

    @classmethod
    def from_surjection(cls, f: OrdinalMap) -> 'DegeneracyWord':
        if not f.is_surjective():
            raise DomainError(f"{f.values} is not a surjection")
        repeats = [j for j in range(f.source_dim) if f.values[j] == f.values[j + 1]]
        return cls(tuple(sorted(repeats, reverse=True)))

    @classmethod
    def normalize(cls, indices: Sequence[int], base_dim: int) -> 'DegeneracyWord':
        """
        Canonical word of the composite s_{a1} s_{a2} ... s_{ak} acting on a
        ``base_dim``-simplex (s_{ak} applied first).
        """
        k = len(indices)
        top = base_dim + k
        current = identity(top)
        for step, a in enumerate(indices):
            current = compose(current, codegeneracy(a, top - 1 - step))
        return cls.from_surjection(current)


def epi_mono_factor(f: OrdinalMap) -> Tuple[DegeneracyWord, OrdinalMap]:
    """
    Split ``f`` as a surjection followed by an injection.

    Returns:
        (word of the surjection, the injection)
    """
    image = sorted(set(f.values))
    position = {v: k for k, v in enumerate(image)}
    epi = OrdinalMap(tuple(position[v] for v in f.values), len(image))
    mono = OrdinalMap(tuple(image), f.target_size)
    return DegeneracyWord.from_surjection(epi), mono


def monotone_maps(m: int, n: int) -> Iterator[OrdinalMap]:
    """Every monotone map [m] -> [n], in lexicographic order."""
    def extend(prefix, low):
        if len(prefix) == m + 1:
            yield OrdinalMap(tuple(prefix), n + 1)
            return
        for v in range(low, n + 1):
            yield from extend(prefix + [v], v)
    yield from extend([], 0)


def surjection_words(k: int, m: int) -> Iterator[DegeneracyWord]:
    """Every canonical word taking an m-simplex to dimension k."""
    if k < m:
        return
    for chosen in combinations(range(k), k - m):
        yield DegeneracyWord(tuple(sorted(chosen, reverse=True)))


def collapse_repeats(sequence: Sequence) -> Tuple[tuple, DegeneracyWord]:
    """
    Split a weakly repeating sequence x_0, ..., x_k into its strict part and the
    degeneracy word that re-inserts the repeats.
    """
    items = tuple(sequence)
    repeats = [j for j in range(len(items) - 1) if items[j] == items[j + 1]]
    strict = tuple(x for j, x in enumerate(items) if j == 0 or items[j - 1] != x)
    return strict, DegeneracyWord(tuple(sorted(repeats, reverse=True)))


def expand_repeats(strict: Sequence, word: DegeneracyWord) -> tuple:
    """Inverse of :func:`collapse_repeats`."""
    items = tuple(strict)
    eta = word.as_map(len(items) - 1)
    return tuple(items[v] for v in eta.values)
