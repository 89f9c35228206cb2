"""
Necklaces, flags and the triple representation of the hom-spaces of the
rigidification of a finite simplicial set.

Flags are chains of sets of global necklace positions, so repeated X-vertices
along a necklace stay distinguishable.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .delta import collapse_repeats, expand_repeats
from .errors import CapError, DomainError
from .sset import FinSSet, SimplexRef, find_fillers as sset_find_fillers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Necklace:
    """A wedge of simplices glued last vertex to first vertex; ``()`` is the point."""
    bead_dims: Tuple[int, ...] = ()

    def __post_init__(self):
        dims = tuple(self.bead_dims)
        object.__setattr__(self, 'bead_dims', dims)
        if any(d < 1 for d in dims):
            raise DomainError(f"bead dimensions {dims} must be positive")

    @property
    def vertex_count(self) -> int:
        return 1 + sum(self.bead_dims)

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(range(self.vertex_count))

    @property
    def joins(self) -> FrozenSet[int]:
        return frozenset(a for a, _ in self.bead_ranges()) | {self.vertex_count - 1}

    def bead_ranges(self) -> List[Tuple[int, int]]:
        """Global (first, last) position of every bead."""
        out, start = [], 0
        for d in self.bead_dims:
            out.append((start, start + d))
            start += d
        return out

    def __str__(self):
        return ' ∨ '.join(f'Δ{d}' for d in self.bead_dims) or 'Δ0'


def spine(T: Necklace) -> Necklace:
    return Necklace((1,) * sum(T.bead_dims))


def diagonal(T: Necklace) -> Necklace:
    return Necklace((1,) * len(T.bead_dims))


def _check_cut(T: Necklace, K: Iterable[int]) -> Tuple[int, ...]:
    K = frozenset(K)
    if not T.joins <= K:
        raise DomainError(f"vertex set {sorted(K)} misses joins {sorted(T.joins - K)}")
    if not K <= T.vertices:
        raise DomainError(f"vertex set {sorted(K)} leaves the necklace")
    return tuple(sorted(K))


def split(T: Necklace, K: Iterable[int]) -> Necklace:
    """Cut every bead at the vertices of ``K``; all vertices are kept."""
    cut = _check_cut(T, K)
    return Necklace(tuple(b - a for a, b in zip(cut, cut[1:])))


def restrict(T: Necklace, K: Iterable[int]) -> Necklace:
    """Keep only the vertices of ``K``, one bead per original bead."""
    cut = set(_check_cut(T, K))
    return Necklace(tuple(sum(1 for v in range(a, b + 1) if v in cut) - 1 for a, b in T.bead_ranges()))


@dataclass(frozen=True)
class NecklaceMap:
    """A necklace with the simplex of X each bead is sent to."""
    shape: Necklace
    bead_images: Tuple[SimplexRef, ...]
    source: str
    target: str

    def __post_init__(self):
        images = tuple(self.bead_images)
        object.__setattr__(self, 'bead_images', images)
        if len(images) != len(self.shape.bead_dims):
            raise DomainError("one image per bead is required")
        for d, image in zip(self.shape.bead_dims, images):
            if image.dim != d:
                raise DomainError(f"a {d}-bead cannot be sent to the {image.dim}-simplex {image}")
        if not images and self.source != self.target:
            raise DomainError("the point necklace joins a vertex to itself")

    def check(self, X: FinSSet):
        """Consecutive images must agree at the joins and hit the endpoints."""
        current = self.source
        for image in self.bead_images:
            if X.vertex(image, 0) != current:
                raise DomainError(f"bead image {image} does not start at {current}")
            current = X.vertex(image, image.dim)
        if current != self.target:
            raise DomainError(f"necklace ends at {current}, expected {self.target}")
        return True

    def is_totally_nondegenerate(self) -> bool:
        return not any(image.word for image in self.bead_images)


def split_map(X: FinSSet, m: NecklaceMap, K: Iterable[int]) -> NecklaceMap:
    cut = set(_check_cut(m.shape, K))
    images = []
    for (a, b), image in zip(m.shape.bead_ranges(), m.bead_images):
        local = [v - a for v in range(a, b + 1) if v in cut]
        for p, q in zip(local, local[1:]):
            images.append(X.restrict(image, range(p, q + 1)))
    return NecklaceMap(split(m.shape, cut), tuple(images), m.source, m.target)


def restrict_map(X: FinSSet, m: NecklaceMap, K: Iterable[int]) -> NecklaceMap:
    cut = set(_check_cut(m.shape, K))
    images = tuple(
        X.restrict(image, [v - a for v in range(a, b + 1) if v in cut])
        for (a, b), image in zip(m.shape.bead_ranges(), m.bead_images)
    )
    return NecklaceMap(restrict(m.shape, cut), images, m.source, m.target)


@dataclass(frozen=True)
class Flag:
    """A weakly increasing chain of position sets T^0 ⊆ ... ⊆ T^n."""
    sets: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted(set(s))) for s in self.sets)
        object.__setattr__(self, 'sets', sets)
        if not sets:
            raise DomainError("a flag needs at least one set")
        for lower, upper in zip(sets, sets[1:]):
            if not set(lower) <= set(upper):
                raise DomainError(f"flag sets {lower} and {upper} are not nested")

    @classmethod
    def of(cls, *sets: Iterable[int]) -> 'Flag':
        return cls(tuple(tuple(s) for s in sets))

    @property
    def n(self) -> int:
        return len(self.sets) - 1

    def check(self, T: Necklace):
        if set(self.sets[0]) != T.joins:
            raise DomainError(f"flag starts at {self.sets[0]}, the joins are {sorted(T.joins)}")
        if set(self.sets[-1]) != T.vertices:
            raise DomainError(f"flag ends at {self.sets[-1]}, not at all {T.vertex_count} vertices")
        return True

    def is_strict(self) -> bool:
        return all(a != b for a, b in zip(self.sets, self.sets[1:]))

    def push(self, position: Dict[int, int]) -> 'Flag':
        return Flag(tuple(tuple(position[v] for v in s) for s in self.sets))

    def __str__(self):
        return '<'.join('{' + ','.join(map(str, s)) + '}' for s in self.sets)


@dataclass(frozen=True)
class HomSimplex:
    """A totally non-degenerate necklace map with a flag: an n-simplex of ℭX(x, y)."""
    map: NecklaceMap
    flag: Flag

    def __post_init__(self):
        if not self.map.is_totally_nondegenerate():
            raise DomainError("hom-space simplices need non-degenerate bead images")
        self.flag.check(self.map.shape)

    @property
    def n(self) -> int:
        return self.flag.n

    @property
    def shape(self) -> Necklace:
        return self.map.shape

    def is_degenerate(self) -> bool:
        return not self.flag.is_strict()

    def sort_key(self):
        return (self.shape.vertex_count, self.shape.bead_dims,
                tuple(r.id for r in self.map.bead_images), self.flag.sets)

    def serialize(self) -> str:
        beads = ','.join(map(str, self.shape.bead_dims)) or '-'
        images = ';'.join(str(r) for r in self.map.bead_images) or '@' + self.map.source
        return f'{beads}/{images}/{self.flag}'

    def describe(self) -> Dict[str, Any]:
        return {
            'beads': list(self.shape.bead_dims),
            'images': [str(r) for r in self.map.bead_images],
            'flag': [list(s) for s in self.flag.sets],
            'source': self.map.source,
            'target': self.map.target,
        }

    def __str__(self):
        return self.serialize()


def tnd_quotient(X: FinSSet, m: NecklaceMap, flag: Flag) -> HomSimplex:
    """
    Collapse every bead onto the non-degenerate simplex of its image and push
    the flag forward; beads whose image is a vertex disappear.
    """
    flag.check(m.shape)
    if m.is_totally_nondegenerate():
        return HomSimplex(m, flag)
    position: Dict[int, int] = {}
    dims, images, offset = [], [], 0
    for (a, b), image in zip(m.shape.bead_ranges(), m.bead_images):
        eta = image.word.as_map(image.base_dim)
        for j in range(b - a + 1):
            position[a + j] = offset + eta(j)
        if image.base_dim > 0:
            dims.append(image.base_dim)
            images.append(X.ref(image.id))
            offset += image.base_dim
    if not m.bead_images:
        position[0] = 0
    quotient = NecklaceMap(Necklace(tuple(dims)), tuple(images), m.source, m.target)
    return HomSimplex(quotient, flag.push(position))


def hom_face(X: FinSSet, s: HomSimplex, i: int) -> HomSimplex:
    n = s.n
    if n < 1 or not 0 <= i <= n:
        raise DomainError(f"face d{i} of a {n}-simplex does not exist")
    sets = s.flag.sets
    if 0 < i < n:
        return HomSimplex(s.map, Flag(sets[:i] + sets[i + 1:]))
    if i == 0:
        return tnd_quotient(X, split_map(X, s.map, sets[1]), Flag(sets[1:]))
    kept = sets[n - 1]
    position = {v: k for k, v in enumerate(kept)}
    flag = Flag(tuple(tuple(position[v] for v in t) for t in sets[:-1]))
    return tnd_quotient(X, restrict_map(X, s.map, kept), flag)


def hom_degeneracy(s: HomSimplex, i: int) -> HomSimplex:
    if not 0 <= i <= s.n:
        raise DomainError(f"degeneracy s{i} of a {s.n}-simplex does not exist")
    sets = s.flag.sets
    return HomSimplex(s.map, Flag(sets[:i + 1] + sets[i:]))


def concatenate(g: HomSimplex, f: HomSimplex) -> HomSimplex:
    """Composite ``g ∘ f`` in ℭX: f's necklace followed by g's, flags united level-wise."""
    if f.map.target != g.map.source:
        raise DomainError(f"cannot compose a simplex into {f.map.target} with one out of {g.map.source}")
    if f.n != g.n:
        raise DomainError("only simplices of equal dimension compose")
    shift = f.shape.vertex_count - 1
    shape = Necklace(f.shape.bead_dims + g.shape.bead_dims)
    sets = tuple(a + tuple(v + shift for v in b) for a, b in zip(f.flag.sets, g.flag.sets))
    return HomSimplex(NecklaceMap(shape, f.map.bead_images + g.map.bead_images, f.map.source, g.map.target),
                      Flag(sets))


def necklace_weight(T: Necklace) -> Tuple[int, int]:
    """Ordering that no face map increases."""
    return (T.vertex_count, sum(2 ** (d + 1) for d in T.bead_dims))


def _enumerate(X: FinSSet, x: str, y: str, size_cap: int) -> Tuple[List[NecklaceMap], bool]:
    outgoing: Dict[str, List[SimplexRef]] = {}
    for dim in range(1, X.dim_cap + 1):
        for sid in X.nondeg.get(dim, []):
            ref = X.ref(sid)
            outgoing.setdefault(X.vertex(ref, 0), []).append(ref)
    found: List[NecklaceMap] = []
    pruned = False

    def extend(current: str, images: Tuple[SimplexRef, ...], count: int):
        nonlocal pruned
        if current == y:
            found.append(NecklaceMap(Necklace(tuple(r.dim for r in images)), images, x, y))
        for ref in outgoing.get(current, []):
            if count + ref.dim > size_cap:
                pruned = True
                continue
            extend(X.vertex(ref, ref.dim), images + (ref,), count + ref.dim)

    if size_cap < 1:
        raise DomainError("size_cap must be positive")
    extend(x, (), 1)
    found.sort(key=lambda m: (m.shape.vertex_count, m.shape.bead_dims, tuple(r.id for r in m.bead_images)))
    return found, pruned


def enumerate_necklaces(X: FinSSet, x: str, y: str, size_cap: int) -> List[NecklaceMap]:
    """Every totally non-degenerate necklace from x to y with at most ``size_cap`` vertices."""
    return _enumerate(X, x, y, size_cap)[0]


def strict_flags(T: Necklace, max_n: int) -> Iterator[Flag]:
    """Every strict flag on T of length at most ``max_n``, shortest first."""
    joins = tuple(sorted(T.joins))
    free = tuple(sorted(T.vertices - T.joins))

    def chains(remaining, sets, k):
        if not remaining:
            yield sets
            return
        if k == 0:
            return
        for size in range(1, len(remaining) + 1):
            for block in combinations(remaining, size):
                rest = tuple(v for v in remaining if v not in block)
                yield from chains(rest, sets + (tuple(sorted(sets[-1] + block)),), k - 1)

    collected = [Flag(c) for c in chains(free, (joins,), max_n)]
    collected.sort(key=lambda f: (f.n, f.sets))
    yield from collected


@dataclass
class HomSpace:
    """ℭX(x, y) truncated at ``dim_cap`` and at necklaces of ``size_cap`` vertices."""
    X: FinSSet
    x: str
    y: str
    dim_cap: int
    size_cap: int
    sset: FinSSet
    index: Dict[str, HomSimplex] = field(default_factory=dict)
    size_cap_reached: bool = False

    def ref_of(self, h: HomSimplex) -> SimplexRef:
        strict, word = collapse_repeats(h.flag.sets)
        sid = HomSimplex(h.map, Flag(strict)).serialize()
        if sid not in self.index:
            raise CapError(f"{sid} lies outside the truncated hom-space",
                           detail={'dim_cap': self.dim_cap, 'size_cap': self.size_cap})
        return SimplexRef(word, sid, h.n)

    def simplex(self, ref: SimplexRef) -> HomSimplex:
        base = self.index[ref.id]
        return HomSimplex(base.map, Flag(expand_repeats(base.flag.sets, ref.word)))

    def contains(self, h: HomSimplex) -> bool:
        strict, _ = collapse_repeats(h.flag.sets)
        return HomSimplex(h.map, Flag(strict)).serialize() in self.index

    def face(self, h: HomSimplex, i: int) -> HomSimplex:
        return hom_face(self.X, h, i)

    def simplices(self, k: int) -> List[HomSimplex]:
        return [self.simplex(r) for r in self.sset.simplices(k)]

    def find_fillers(self, faces: Sequence[Optional[HomSimplex]]) -> List[HomSimplex]:
        refs = [None if h is None else self.ref_of(h) for h in faces]
        return [self.simplex(r) for r in sset_find_fillers(self.sset, refs)]

    def counts(self) -> Dict[int, int]:
        return {k: self.sset.nondeg_count(k) for k in range(self.dim_cap + 1)}

    def sidecar(self) -> Dict[str, Any]:
        return {sid: h.describe() for sid, h in self.index.items()}


def hom_space(X: FinSSet, x: str, y: str, dim_cap: int, size_cap: int) -> HomSpace:
    """
    Assemble ℭX(x, y) as a simplicial set: non-degenerate k-simplices are the
    strict flags of length k on the totally non-degenerate necklaces.
    """
    if dim_cap < 0 or size_cap < 1:
        raise DomainError("caps must be positive")
    for v in (x, y):
        if X.dims.get(v) != 0:
            raise DomainError(f"{v!r} is not a vertex")
    maps, pruned = _enumerate(X, x, y, size_cap)
    layers: Dict[int, List[HomSimplex]] = {}
    for m in maps:
        for flag in strict_flags(m.shape, dim_cap):
            layers.setdefault(flag.n, []).append(HomSimplex(m, flag))
    space = HomSpace(X, x, y, dim_cap, size_cap, FinSSet(dim_cap, name=f'C({X.name})({x},{y})'),
                     size_cap_reached=pruned)
    for k in sorted(layers):
        for h in sorted(layers[k], key=HomSimplex.sort_key):
            faces = [space.ref_of(hom_face(X, h, i)) for i in range(k + 1)] if k else []
            sid = h.serialize()
            space.sset.add_simplex(sid, faces, label=h)
            space.index[sid] = h
    logger.info("hom-space %s: %d necklaces, nondegenerate counts %s%s", space.sset.name, len(maps),
                space.counts(), ' (size cap reached)' if pruned else '')
    return space
