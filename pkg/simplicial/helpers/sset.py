"""
Finite truncated simplicial sets presented by their non-degenerate simplices,
nerves of finite categories, shape complexes inside a standard simplex,
extension and filler search, and the quasi-category, coskeletality and
nerve checkers built on top of them.
"""
import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import permutations
from multiprocessing import Pool
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .delta import (
    DegeneracyWord,
    OrdinalMap,
    codegeneracy,
    coface,
    compose,
    epi_mono_factor,
    inclusion,
    surjection_words,
)
from .errors import CapError, DomainError

logger = logging.getLogger(__name__)

Family = Tuple[Optional['SimplexRef'], ...]


@dataclass(frozen=True)
class SimplexRef:
    """Eilenberg-Zilber name of a simplex: a canonical degeneracy word applied to a non-degenerate simplex."""
    word: DegeneracyWord
    id: str
    dim: int

    @property
    def base_dim(self) -> int:
        return self.dim - len(self.word)

    def is_degenerate(self) -> bool:
        return bool(self.word)

    def sort_key(self):
        return (self.dim, -self.base_dim, self.id, self.word.indices)

    def to_dict(self) -> Dict[str, Any]:
        return {'word': list(self.word.indices), 'id': self.id}

    def __str__(self):
        prefix = ''.join(f's{i}' for i in self.word.indices)
        return f'{prefix}({self.id})' if prefix else self.id


class FinSSet:
    """
    A simplicial set truncated at ``dim_cap``.

    Only non-degenerate simplices are stored; each carries its faces as
    :class:`SimplexRef` names, and every other simplex is reached through
    :meth:`apply`.
    """

    def __init__(self, dim_cap: int, name: str = ''):
        if dim_cap < 0:
            raise DomainError("dim_cap must be a natural number")
        self.dim_cap = dim_cap
        self.name = name
        self.nondeg: Dict[int, List[str]] = defaultdict(list)
        self.dims: Dict[str, int] = {}
        self.faces: Dict[str, Tuple[SimplexRef, ...]] = {}
        self.labels: Dict[str, Any] = {}
        self._reset_caches()

    def _reset_caches(self):
        self._apply_cache: Dict[Any, SimplexRef] = {}
        self._simplices_cache: Dict[int, List[SimplexRef]] = {}
        self._face_index_cache: Dict[int, Dict[Tuple[int, SimplexRef], List[SimplexRef]]] = {}
        self._vertex_index_cache: Dict[int, Dict[Tuple[str, ...], List[SimplexRef]]] = {}

    def invalidate(self):
        """Drop memoized tables after the face data was edited in place."""
        self._reset_caches()

    # construction

    def add_simplex(self, sid: str, faces: Sequence[SimplexRef] = (), label: Any = None) -> SimplexRef:
        if sid in self.dims:
            raise DomainError(f"simplex id {sid!r} is already used")
        faces = tuple(faces)
        if len(faces) == 1:
            raise DomainError(f"simplex {sid!r} has a single face")
        dim = len(faces) - 1 if faces else 0
        if dim > self.dim_cap:
            raise DomainError(f"simplex {sid!r} of dimension {dim} exceeds dim_cap {self.dim_cap}")
        for i, face in enumerate(faces):
            if face.id not in self.dims:
                raise DomainError(f"face d{i} of {sid!r} names unknown simplex {face.id!r}")
            if face.dim != dim - 1 or face.base_dim != self.dims[face.id]:
                raise DomainError(f"face d{i} of {sid!r} has the wrong dimension")
        self.dims[sid] = dim
        self.nondeg[dim].append(sid)
        self.faces[sid] = faces
        if label is not None:
            self.labels[sid] = label
        self._reset_caches()
        return self.ref(sid)

    def copy(self, dim_cap: Optional[int] = None, name: Optional[str] = None) -> 'FinSSet':
        other = FinSSet(self.dim_cap if dim_cap is None else dim_cap, name or self.name)
        for dim in sorted(self.nondeg):
            for sid in self.nondeg[dim]:
                other.add_simplex(sid, self.faces[sid], self.labels.get(sid))
        return other

    # naming

    def ref(self, sid: str, word: Sequence[int] = ()) -> SimplexRef:
        if sid not in self.dims:
            raise DomainError(f"unknown simplex {sid!r}")
        word = DegeneracyWord(tuple(word))
        return SimplexRef(word, sid, self.dims[sid] + len(word))

    def top_dim(self) -> int:
        return max((d for d, ids in self.nondeg.items() if ids), default=-1)

    def nondeg_count(self, k: int) -> int:
        return len(self.nondeg.get(k, []))

    # simplicial operators

    def apply(self, op: OrdinalMap, s: SimplexRef) -> SimplexRef:
        """The simplex ``op^* s`` for a monotone map ``op: [k] -> [dim s]``."""
        if op.target_dim != s.dim:
            raise DomainError(f"operator into [{op.target_dim}] cannot act on a {s.dim}-simplex")
        key = (op.values, s)
        cached = self._apply_cache.get(key)
        if cached is not None:
            return cached
        eta = s.word.as_map(s.base_dim)
        word, mono = epi_mono_factor(compose(op, eta))
        face = self._restrict(s.id, mono)
        epi = word.as_map(mono.source_dim)
        total = compose(epi, face.word.as_map(face.base_dim))
        result = SimplexRef(DegeneracyWord.from_surjection(total), face.id, op.source_dim)
        self._apply_cache[key] = result
        return result

    def _restrict(self, sid: str, mono: OrdinalMap) -> SimplexRef:
        m = self.dims[sid]
        if mono.source_size == m + 1:
            return self.ref(sid)
        present = set(mono.values)
        j = max(v for v in range(m + 1) if v not in present)
        rest = OrdinalMap(tuple(v if v < j else v - 1 for v in mono.values), m)
        return self.apply(rest, self.faces[sid][j])

    def face(self, s: SimplexRef, i: int) -> SimplexRef:
        if s.dim == 0 or not 0 <= i <= s.dim:
            raise DomainError(f"face d{i} of a {s.dim}-simplex does not exist")
        return self.apply(coface(i, s.dim), s)

    def degeneracy(self, s: SimplexRef, i: int) -> SimplexRef:
        if not 0 <= i <= s.dim:
            raise DomainError(f"degeneracy s{i} of a {s.dim}-simplex does not exist")
        return self.apply(codegeneracy(i, s.dim), s)

    def vertex(self, s: SimplexRef, v: int) -> str:
        return self.apply(OrdinalMap((v,), s.dim + 1), s).id

    def vertices(self, s: SimplexRef) -> Tuple[str, ...]:
        return tuple(self.vertex(s, v) for v in range(s.dim + 1))

    def restrict(self, s: SimplexRef, vertices: Iterable[int]) -> SimplexRef:
        """The face of ``s`` spanned by the given local vertices."""
        return self.apply(inclusion(vertices, s.dim), s)

    # enumeration and indexes

    def simplices(self, k: int) -> List[SimplexRef]:
        """Every k-simplex, non-degenerate ones first."""
        cached = self._simplices_cache.get(k)
        if cached is not None:
            return cached
        out = []
        for m in range(min(k, self.dim_cap), -1, -1):
            for sid in self.nondeg.get(m, []):
                for word in surjection_words(k, m):
                    out.append(SimplexRef(word, sid, k))
        self._simplices_cache[k] = out
        return out

    def face_index(self, k: int) -> Dict[Tuple[int, SimplexRef], List[SimplexRef]]:
        cached = self._face_index_cache.get(k)
        if cached is not None:
            return cached
        index: Dict[Tuple[int, SimplexRef], List[SimplexRef]] = defaultdict(list)
        for s in self.simplices(k):
            for i in range(k + 1):
                index[(i, self.face(s, i))].append(s)
        self._face_index_cache[k] = index
        logger.debug("face index of %s in dim %d: %d entries", self.name or 'sset', k, len(index))
        return index

    def vertex_index(self, k: int) -> Dict[Tuple[str, ...], List[SimplexRef]]:
        cached = self._vertex_index_cache.get(k)
        if cached is not None:
            return cached
        index: Dict[Tuple[str, ...], List[SimplexRef]] = defaultdict(list)
        for s in self.simplices(k):
            index[self.vertices(s)].append(s)
        self._vertex_index_cache[k] = index
        return index

    # checks

    def validate(self):
        """
        Check references, normal forms and the simplicial identities on
        every non-degenerate simplex.

        Raises:
            DomainError: naming the first violation
        """
        for sid, faces in self.faces.items():
            dim = self.dims[sid]
            if dim == 0 and faces:
                raise DomainError(f"vertex {sid!r} has faces")
            for face in faces:
                if face.id not in self.dims:
                    raise DomainError(f"{sid!r} refers to unknown simplex {face.id!r}")
                if face.word and face.word.indices[0] >= face.dim:
                    raise DomainError(f"{sid!r} has a face with a malformed degeneracy word")
            s = self.ref(sid)
            for j in range(dim + 1):
                for i in range(j):
                    if dim < 2:
                        continue
                    left = self.face(self.face(s, j), i)
                    right = self.face(self.face(s, i), j - 1)
                    if left != right:
                        raise DomainError(
                            f"simplicial identity d{i}d{j} = d{j - 1}d{i} fails on {sid!r}: {left} != {right}"
                        )
        return True

    def as_dict(self) -> Dict[str, Any]:
        simplices = {}
        for dim in sorted(self.nondeg):
            if not self.nondeg[dim]:
                continue
            simplices[str(dim)] = [
                {'id': sid, 'faces': [f.to_dict() for f in self.faces[sid]]}
                for sid in self.nondeg[dim]
            ]
        return {'dim_cap': self.dim_cap, 'simplices': simplices}

    def __repr__(self):
        counts = {d: len(ids) for d, ids in sorted(self.nondeg.items()) if ids}
        return f'FinSSet({self.name or "?"}, dim_cap={self.dim_cap}, nondeg={counts})'


@dataclass
class FinCategory:
    """
    A finite category given by its composition table.

    ``comp[(g, f)]`` is the composite g∘f of f: a -> b and g: b -> c.
    """
    objects: List[str]
    morphisms: Dict[str, Tuple[str, str]]
    identities: Dict[str, str]
    comp: Dict[Tuple[str, str], str]
    name: str = ''

    def src(self, f: str) -> str:
        return self.morphisms[f][0]

    def tgt(self, f: str) -> str:
        return self.morphisms[f][1]

    def is_identity(self, f: str) -> bool:
        return self.identities.get(self.src(f)) == f

    def compose(self, g: str, f: str) -> str:
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise DomainError(f"{g} and {f} are not composable")

    def hom(self, a: str, b: str) -> List[str]:
        return [f for f, (s, t) in self.morphisms.items() if s == a and t == b]

    def non_identity_from(self, a: str) -> List[str]:
        return [f for f, (s, _) in self.morphisms.items() if s == a and not self.is_identity(f)]

    def check(self):
        """
        Verify typing, totality, unit and associativity laws.

        Raises:
            DomainError: describing the first law that fails
        """
        if len(set(self.objects)) != len(self.objects):
            raise DomainError("object ids repeat")
        if set(self.objects) & set(self.morphisms):
            raise DomainError("object ids and morphism ids must be disjoint")
        for f, (a, b) in self.morphisms.items():
            if a not in self.objects or b not in self.objects:
                raise DomainError(f"morphism {f} has an unknown endpoint")
            if '|' in f:
                raise DomainError(f"morphism id {f!r} may not contain '|'")
        for a in self.objects:
            ida = self.identities.get(a)
            if ida is None or self.morphisms.get(ida) != (a, a):
                raise DomainError(f"object {a} lacks an identity endomorphism")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.tgt(f) != self.src(g):
                    continue
                gf = self.comp.get((g, f))
                if gf is None:
                    raise DomainError(f"composite of {g} after {f} is missing")
                if self.morphisms.get(gf) != (self.src(f), self.tgt(g)):
                    raise DomainError(f"composite {g}∘{f} = {gf} has the wrong type")
        for f in self.morphisms:
            if self.comp[(f, self.identities[self.src(f)])] != f or self.comp[(self.identities[self.tgt(f)], f)] != f:
                raise DomainError(f"unit law fails at {f}")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.tgt(f) != self.src(g):
                    continue
                for h in self.morphisms:
                    if self.tgt(g) != self.src(h):
                        continue
                    if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                        raise DomainError(f"associativity fails on ({h}, {g}, {f})")
        return True

    def isomorphism(self, other: 'FinCategory') -> Optional[Dict[str, Dict[str, str]]]:
        """
        Find an isomorphism onto ``other``, trying the name-preserving object
        assignment first.

        Returns:
            ``{'objects': ..., 'morphisms': ...}`` or None
        """
        if len(self.objects) != len(other.objects) or len(self.morphisms) != len(other.morphisms):
            return None
        orders = []
        if set(self.objects) == set(other.objects):
            orders.append(tuple(self.objects))
        orders.extend(p for p in permutations(other.objects) if p not in orders)
        for image in orders:
            omap = dict(zip(self.objects, image))
            mmap = self._match_morphisms(other, omap)
            if mmap is not None:
                return {'objects': omap, 'morphisms': mmap}
        return None

    def _match_morphisms(self, other: 'FinCategory', omap: Dict[str, str]) -> Optional[Dict[str, str]]:
        for a in self.objects:
            for b in self.objects:
                if len(self.hom(a, b)) != len(other.hom(omap[a], omap[b])):
                    return None
        mmap = {self.identities[a]: other.identities[omap[a]] for a in self.objects}
        pending = [f for f in self.morphisms if f not in mmap]
        used = set(mmap.values())

        def consistent(f):
            for g in self.morphisms:
                if g not in mmap:
                    continue
                for (x, y) in ((g, f), (f, g)):
                    if self.tgt(y) != self.src(x):
                        continue
                    xy = self.comp[(x, y)]
                    if xy in mmap and other.comp[(mmap[x], mmap[y])] != mmap[xy]:
                        return False
            return True

        def search(k):
            if k == len(pending):
                return True
            f = pending[k]
            for g in other.hom(omap[self.src(f)], omap[self.tgt(f)]):
                if g in used:
                    continue
                mmap[f] = g
                used.add(g)
                if consistent(f) and search(k + 1):
                    return True
                del mmap[f]
                used.discard(g)
            return False

        return dict(mmap) if search(0) else None

    def as_dict(self) -> Dict[str, Any]:
        return {
            'objects': list(self.objects),
            'morphisms': [{'id': f, 'src': a, 'tgt': b} for f, (a, b) in self.morphisms.items()],
            'identities': dict(self.identities),
            'comp': [[g, f, gf] for (g, f), gf in self.comp.items()],
        }


def chain_id(chain: Sequence[str]) -> str:
    return '|'.join(chain)


def _chain_ref(cat: FinCategory, chain: Sequence[str], empty_at: str) -> SimplexRef:
    repeats = [p for p, f in enumerate(chain) if cat.is_identity(f)]
    base = [f for f in chain if not cat.is_identity(f)]
    word = DegeneracyWord(tuple(sorted(repeats, reverse=True)))
    if not chain:
        return SimplexRef(word, empty_at, 0)
    if not base:
        return SimplexRef(word, cat.src(chain[0]), len(chain))
    return SimplexRef(word, chain_id(base), len(chain))


def nerve(cat: FinCategory, dim_cap: int) -> FinSSet:
    """
    The nerve of ``cat`` truncated at ``dim_cap``.

    Vertices are named by objects, edges by morphisms and higher simplices by
    their spine, e.g. ``"f|g"``.
    """
    X = FinSSet(dim_cap, name=f'N({cat.name})' if cat.name else 'N')
    for obj in cat.objects:
        X.add_simplex(obj, label=())
    layer = [(f,) for f in cat.morphisms if not cat.is_identity(f)]
    k = 1
    while layer and k <= dim_cap:
        for chain in layer:
            faces = []
            for i in range(k + 1):
                if i == 0:
                    faces.append(_chain_ref(cat, chain[1:], cat.tgt(chain[0])))
                elif i == k:
                    faces.append(_chain_ref(cat, chain[:-1], cat.src(chain[0])))
                else:
                    merged = chain[:i - 1] + (cat.compose(chain[i], chain[i - 1]),) + chain[i + 1:]
                    faces.append(_chain_ref(cat, merged, cat.src(chain[0])))
            X.add_simplex(chain_id(chain), faces, label=chain)
        layer = [chain + (g,) for chain in layer for g in cat.non_identity_from(cat.tgt(chain[-1]))]
        k += 1
    logger.debug("built %r", X)
    return X


def nerve_of_poset(elements: Sequence[Any], leq: Callable[[Any, Any], bool], dim_cap: int,
                   name_of: Callable[[Any], str] = str, name: str = '') -> FinSSet:
    """Nerve of a finite poset; a k-simplex is a strict chain named ``"a<b<c"``."""
    X = FinSSet(dim_cap, name=name)
    names = {e: name_of(e) for e in elements}
    layer = [(e,) for e in elements]
    k = 0
    while layer and k <= dim_cap:
        for chain in layer:
            sid = '<'.join(names[e] for e in chain)
            faces = [] if k == 0 else [
                X.ref('<'.join(names[e] for e in chain[:i] + chain[i + 1:])) for i in range(k + 1)
            ]
            X.add_simplex(sid, faces, label=chain)
        layer = [chain + (e,) for chain in layer for e in elements if e != chain[-1] and leq(chain[-1], e)]
        k += 1
    return X


@dataclass
class Shape:
    """A simplicial subset of the standard simplex of dimension ``ambient_dim``."""
    kind: str
    ambient_dim: int
    sset: FinSSet
    vertex_sets: Dict[str, Tuple[int, ...]]
    generators: List[Tuple[int, ...]] = field(default_factory=list)

    @staticmethod
    def simplex_id(vertices: Sequence[int]) -> str:
        return ','.join(str(v) for v in vertices)

    @classmethod
    def generated(cls, m: int, generators: Iterable[Sequence[int]], kind: str = 'generated') -> 'Shape':
        gens = [tuple(sorted(set(g))) for g in generators]
        for g in gens:
            if not g or g[0] < 0 or g[-1] > m:
                raise DomainError(f"generator {g} is not a face of the {m}-simplex")
        faces: Set[Tuple[int, ...]] = set()
        for g in gens:
            stack = [g]
            while stack:
                t = stack.pop()
                if t in faces:
                    continue
                faces.add(t)
                if len(t) > 1:
                    stack.extend(t[:i] + t[i + 1:] for i in range(len(t)))
        X = FinSSet(m, name=kind)
        vertex_sets = {}
        for t in sorted(faces, key=lambda t: (len(t), t)):
            sid = cls.simplex_id(t)
            boundary = [] if len(t) == 1 else [X.ref(cls.simplex_id(t[:i] + t[i + 1:])) for i in range(len(t))]
            X.add_simplex(sid, boundary, label=t)
            vertex_sets[sid] = t
        maximal = [g for g in sorted(set(gens)) if not any(set(g) < set(h) for h in gens)]
        return cls(kind, m, X, vertex_sets, maximal)

    def top(self) -> Optional[SimplexRef]:
        sid = self.simplex_id(range(self.ambient_dim + 1))
        return self.sset.ref(sid) if sid in self.sset.dims else None


def shape(kind: str, n: Optional[int] = None, k: Optional[int] = None,
          dims: Optional[Sequence[int]] = None) -> Shape:
    """
    Named subcomplexes: ``simplex``, ``horn`` (missing facet k), ``boundary``,
    ``spine_necklace`` (bead ``dims``), ``overlap`` and ``overlap_dual``
    (a k-simplex glued along its diagonal to the first, resp. last, edge of an
    n-simplex).
    """
    if kind == 'spine_necklace':
        dims = tuple(dims or ())
        if any(d < 1 for d in dims):
            raise DomainError("bead dimensions must be positive")
        total = sum(dims)
        if n is not None and n != total:
            raise DomainError(f"beads {dims} do not span a {n}-simplex")
        joins = [0]
        for d in dims:
            joins.append(joins[-1] + d)
        gens = [range(a, b + 1) for a, b in zip(joins, joins[1:])] or [(0,)]
        return Shape.generated(total, gens, kind)
    if n is None or n < 0:
        raise DomainError(f"shape {kind} needs a natural dimension")
    if kind == 'simplex':
        return Shape.generated(n, [range(n + 1)], kind)
    if kind == 'boundary':
        if n < 1:
            raise DomainError("the boundary of a point is empty")
        return Shape.generated(n, [[v for v in range(n + 1) if v != i] for i in range(n + 1)], kind)
    if kind == 'horn':
        if n < 1 or k is None or not 0 <= k <= n:
            raise DomainError(f"horn({k}) of dimension {n} does not exist")
        return Shape.generated(n, [[v for v in range(n + 1) if v != i] for i in range(n + 1) if i != k], kind)
    if kind in ('overlap', 'overlap_dual'):
        if k is None or k < 1 or n < 1:
            raise DomainError("overlaps need two positive dimensions")
        m = k + n - 1
        small = list(range(k + 1))
        big = [0] + list(range(k, m + 1))
        if kind == 'overlap_dual':
            small = [m - v for v in small]
            big = [m - v for v in big]
        return Shape.generated(m, [small, big], kind)
    raise DomainError(f"unknown shape kind {kind!r}")


def simplex_face(X: FinSSet, s: SimplexRef, i: int) -> SimplexRef:
    return X.face(s, i)


def solve_extension(X: FinSSet, sub: Shape, assignment: Dict[str, SimplexRef]) -> List[SimplexRef]:
    """
    Every ``ambient_dim``-simplex of X whose restriction to ``sub`` is ``assignment``.

    Args:
        X: target simplicial set
        sub: the subcomplex of the ambient simplex
        assignment: images of (at least) the generating simplices of ``sub``

    Returns:
        All extensions in canonical order; empty when none exists

    Raises:
        CapError: the ambient dimension exceeds ``X.dim_cap``
        DomainError: the assignment is not a simplicial map
    """
    m = sub.ambient_dim
    if m > X.dim_cap:
        raise CapError(f"extension to dimension {m} exceeds dim_cap {X.dim_cap}",
                       detail={'needed': m, 'dim_cap': X.dim_cap})
    full = dict(assignment)
    for sid in sorted(assignment, key=lambda s: -sub.sset.dims[s]):
        value = full[sid]
        if value.dim != sub.sset.dims[sid]:
            raise DomainError(f"{sid} is assigned a simplex of the wrong dimension")
        stack = [sid]
        while stack:
            cur = stack.pop()
            for i, face in enumerate(sub.sset.faces[cur]):
                image = X.face(full[cur], i)
                known = full.get(face.id)
                if known is None:
                    full[face.id] = image
                    stack.append(face.id)
                elif known != image:
                    raise DomainError(f"assignment is not simplicial at {cur} (face d{i})")
    targets = {}
    for sid, verts in sub.vertex_sets.items():
        if len(verts) == 1:
            if sid not in full:
                raise DomainError(f"assignment leaves vertex {sid} of the shape unassigned")
            targets[verts[0]] = full[sid].id
    if len(targets) == m + 1:
        candidates = X.vertex_index(m).get(tuple(targets[v] for v in range(m + 1)), [])
    else:
        candidates = [c for c in X.simplices(m)
                      if all(X.vertex(c, v) == x for v, x in targets.items())]
    checks = [(sub.vertex_sets[sid], full[sid]) for sid in sub.sset.nondeg.get(max(sub.sset.nondeg), [])]
    checks += [(sub.vertex_sets[sid], full[sid]) for sid in full if len(sub.vertex_sets[sid]) > 1]
    return [c for c in candidates if all(X.restrict(c, verts) == value for verts, value in checks)]


def check_compatible(X: FinSSet, faces: Sequence[Optional[SimplexRef]]) -> Optional[Tuple[int, int]]:
    """First pair i < j with d_i(face_j) != d_{j-1}(face_i), or None."""
    n = len(faces) - 1
    if n < 2:
        return None
    for j in range(n + 1):
        if faces[j] is None:
            continue
        for i in range(j):
            if faces[i] is None:
                continue
            if X.face(faces[j], i) != X.face(faces[i], j - 1):
                return (i, j)
    return None


def find_fillers(X: FinSSet, faces: Sequence[Optional[SimplexRef]]) -> List[SimplexRef]:
    """
    Every n-simplex whose i-th face is ``faces[i]`` wherever that slot is given.

    Raises:
        CapError: n exceeds ``X.dim_cap``
        DomainError: a face has the wrong dimension or the family is incompatible
    """
    n = len(faces) - 1
    if n < 1:
        raise DomainError("a filler needs at least two face slots")
    if n > X.dim_cap:
        raise CapError(f"fillers of dimension {n} exceed dim_cap {X.dim_cap}",
                       detail={'needed': n, 'dim_cap': X.dim_cap})
    present = [i for i, f in enumerate(faces) if f is not None]
    for i in present:
        if faces[i].dim != n - 1:
            raise DomainError(f"face slot {i} holds a {faces[i].dim}-simplex, expected {n - 1}")
    clash = check_compatible(X, faces)
    if clash is not None:
        raise DomainError(f"faces {clash[0]} and {clash[1]} are incompatible")
    if not present:
        return list(X.simplices(n))
    first = present[0]
    candidates = X.face_index(n).get((first, faces[first]), [])
    return [c for c in candidates if all(X.face(c, i) == faces[i] for i in present[1:])]


def _iter_families(X: FinSSet, n: int, missing: Set[int]) -> Iterator[Family]:
    slots = [i for i in range(n + 1) if i not in missing]
    pool = X.simplices(n - 1)
    chosen: Dict[int, SimplexRef] = {}
    if n == 1:
        for a in pool if 0 in slots else [None]:
            for b in pool if 1 in slots else [None]:
                yield (a, b)
        return
    index = X.face_index(n - 1)

    def extend(pos):
        if pos == len(slots):
            yield tuple(chosen.get(i) for i in range(n + 1))
            return
        j = slots[pos]
        earlier = slots[:pos]
        if earlier:
            i0 = earlier[0]
            candidates = index.get((i0, X.face(chosen[i0], j - 1)), [])
        else:
            candidates = pool
        for c in candidates:
            if all(X.face(c, i) == X.face(chosen[i], j - 1) for i in earlier[1:]):
                chosen[j] = c
                yield from extend(pos + 1)
                del chosen[j]

    yield from extend(0)


def iter_horns(X: FinSSet, n: int, k: int) -> Iterator[Family]:
    """Every compatible Λ^n_k family of (n-1)-simplices (slot k is None)."""
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f"horn Λ^{n}_{k} does not exist")
    yield from _iter_families(X, n, {k})


def iter_spheres(X: FinSSet, n: int) -> Iterator[Family]:
    """Every compatible family of n+1 faces of dimension n-1."""
    if n < 1:
        raise DomainError("spheres start in dimension 1")
    yield from _iter_families(X, n, set())


def _sample_spheres(X: FinSSet, n: int, count: int, seed: int, limit: int) -> Tuple[List[Family], int]:
    rng = random.Random(seed)
    everything: Optional[List[Family]] = []
    reservoir: List[Family] = []
    seen = 0
    for sphere in iter_spheres(X, n):
        seen += 1
        if everything is not None:
            everything.append(sphere)
            if len(everything) < limit:
                continue
            reservoir = rng.sample(everything, count) if len(everything) > count else list(everything)
            everything = None
            continue
        slot = rng.randrange(seen)
        if slot < count:
            reservoir[slot] = sphere
    return (everything if everything is not None else reservoir), seen


def sample_spheres(X: FinSSet, n: int, count: int, seed: int = 0, limit: int = 100000) -> List[Family]:
    """
    All n-spheres when there are fewer than ``limit``, otherwise ``count`` of
    them drawn by seeded reservoir sampling.
    """
    return _sample_spheres(X, n, count, seed, limit)[0]


def family_to_dict(family: Family) -> List[Optional[str]]:
    return [None if f is None else str(f) for f in family]


_WORKER_SSET: Optional[FinSSet] = None


def _init_worker(X: FinSSet):
    global _WORKER_SSET
    _WORKER_SSET = X


def _filler_count(family: Family) -> int:
    return len(find_fillers(_WORKER_SSET, family))


def _filler_counts(X: FinSSet, families: List[Family], jobs: int) -> List[int]:
    if jobs <= 1 or len(families) < 2:
        return [len(find_fillers(X, f)) for f in families]
    with Pool(jobs, initializer=_init_worker, initargs=(X,)) as pool:
        return pool.map(_filler_count, families, chunksize=max(1, len(families) // (4 * jobs)))


@dataclass
class QuasiReport:
    ok: bool
    up_to: int
    dim_cap: int
    horns_checked: int
    unique_fillers: bool
    horn: Optional[Family] = None
    missing: Optional[int] = None
    multiple: Optional[Tuple[Family, int, List[SimplexRef]]] = None
    truncated: bool = True

    def as_dict(self) -> Dict[str, Any]:
        out = {
            'ok': self.ok,
            'up_to': self.up_to,
            'dim_cap': self.dim_cap,
            'horns_checked': self.horns_checked,
            'unique_fillers': self.unique_fillers,
            'truncation_relative': self.truncated,
            'certificate': None,
        }
        if self.horn is not None:
            out['certificate'] = {
                'dimension': len(self.horn) - 1,
                'missing': self.missing,
                'faces': family_to_dict(self.horn),
                'fillers': 0,
            }
        return out


def is_quasicategory(X: FinSSet, up_to: int, jobs: int = 1) -> QuasiReport:
    """
    Check every inner horn of dimension at most ``up_to``.

    The verdict only speaks about dimensions up to the cap.
    """
    if up_to > X.dim_cap:
        raise CapError(f"checking horns up to {up_to} needs dim_cap {up_to}, have {X.dim_cap}",
                       detail={'needed': up_to, 'dim_cap': X.dim_cap})
    checked, unique, multiple = 0, True, None
    for n in range(2, up_to + 1):
        for k in range(1, n):
            horns = list(iter_horns(X, n, k))
            counts = _filler_counts(X, horns, jobs)
            for horn, count in zip(horns, counts):
                checked += 1
                if count == 0:
                    logger.info("unfillable inner horn Λ^%d_%d in %s", n, k, X.name)
                    return QuasiReport(False, up_to, X.dim_cap, checked, False, horn=horn, missing=k)
                if count > 1 and unique:
                    unique = False
                    multiple = (horn, k, find_fillers(X, horn))
    return QuasiReport(True, up_to, X.dim_cap, checked, unique, multiple=multiple)


@dataclass
class CoskeletalReport:
    ok: bool
    n: int
    up_to: int
    dim_cap: int
    spheres_checked: int
    sphere: Optional[Family] = None
    fillers: List[SimplexRef] = field(default_factory=list)
    truncated: bool = True
    seed: Optional[int] = None
    sampled: List[int] = field(default_factory=list)

    @property
    def failure(self) -> Optional[str]:
        if self.sphere is None:
            return None
        return 'unfillable' if not self.fillers else 'multiply-filled'

    def as_dict(self) -> Dict[str, Any]:
        out = {
            'ok': self.ok,
            'n': self.n,
            'up_to': self.up_to,
            'dim_cap': self.dim_cap,
            'spheres_checked': self.spheres_checked,
            'truncation_relative': self.truncated,
            'seed': self.seed,
            'sampled_dimensions': self.sampled,
            'certificate': None,
        }
        if self.sphere is not None:
            out['certificate'] = {
                'kind': self.failure,
                'dimension': len(self.sphere) - 1,
                'faces': family_to_dict(self.sphere),
                'fillers': [str(f) for f in self.fillers],
            }
        return out


def is_coskeletal(X: FinSSet, n: int, up_to: int, jobs: int = 1, seed: Optional[int] = None,
                  sample: int = 500, limit: int = 100000) -> CoskeletalReport:
    """
    Every sphere of dimension n+1..up_to must have exactly one filler.

    Without a ``seed`` every sphere is checked. With one, a dimension holding
    ``limit`` spheres or more is checked on ``sample`` spheres drawn by
    :func:`sample_spheres`; those dimensions are listed in ``sampled``.
    """
    if n >= up_to:
        raise DomainError(f"nothing to check: n={n} is not below up_to={up_to}")
    if up_to > X.dim_cap:
        raise CapError(f"checking spheres up to {up_to} needs dim_cap {up_to}, have {X.dim_cap}",
                       detail={'needed': up_to, 'dim_cap': X.dim_cap})
    checked, sampled = 0, []
    for k in range(n + 1, up_to + 1):
        if seed is None:
            spheres = list(iter_spheres(X, k))
        else:
            spheres, total = _sample_spheres(X, k, sample, seed, limit)
            if len(spheres) < total:
                logger.info("sampled %d of %d %d-spheres (seed %d)", len(spheres), total, k, seed)
                sampled.append(k)
        counts = _filler_counts(X, spheres, jobs)
        for sphere, count in zip(spheres, counts):
            checked += 1
            if count != 1:
                return CoskeletalReport(False, n, up_to, X.dim_cap, checked, sphere, find_fillers(X, sphere),
                                        seed=seed, sampled=sampled)
    return CoskeletalReport(True, n, up_to, X.dim_cap, checked, seed=seed, sampled=sampled)


def coskeletal_completion(X: FinSSet, n: int, new_cap: int) -> FinSSet:
    """
    Adjoin one simplex for every unfilled sphere above dimension ``n``, up to ``new_cap``.

    New simplices are named ``c{k}_{i}``.

    Raises:
        DomainError: when a sphere above ``n`` already has several fillers
    """
    if not n <= X.dim_cap <= new_cap:
        raise DomainError(f"completion needs n <= dim_cap <= new_cap, got {n}, {X.dim_cap}, {new_cap}")
    Y = X.copy(dim_cap=new_cap, name=f'cosk{n}({X.name})')
    for k in range(n + 1, new_cap + 1):
        spheres = list(iter_spheres(Y, k))
        empty = []
        for sphere in spheres:
            count = len(find_fillers(Y, sphere))
            if count > 1:
                raise DomainError(f"a {k}-sphere already has {count} fillers; X is not {n}-coskeletal below its cap")
            if count == 0:
                empty.append(sphere)
        for i, sphere in enumerate(empty):
            Y.add_simplex(f'c{k}_{i}', sphere)
        logger.info("coskeletal completion: adjoined %d simplices in dimension %d", len(empty), k)
    return Y


@dataclass
class NerveReport:
    ok: bool
    up_to: int
    reason: str
    coskeletal: Optional[CoskeletalReport] = None
    horn: Optional[Family] = None
    missing: Optional[int] = None
    fillers: List[SimplexRef] = field(default_factory=list)
    category: Optional[FinCategory] = None
    truncated: bool = True

    def as_dict(self) -> Dict[str, Any]:
        out = {
            'ok': self.ok,
            'up_to': self.up_to,
            'reason': self.reason,
            'truncation_relative': self.truncated,
            'coskeletal': self.coskeletal.as_dict() if self.coskeletal else None,
            'certificate': None,
            'category': self.category.as_dict() if self.category else None,
        }
        if self.horn is not None:
            out['certificate'] = {
                'dimension': len(self.horn) - 1,
                'missing': self.missing,
                'faces': family_to_dict(self.horn),
                'fillers': [str(f) for f in self.fillers],
            }
        return out


LOW_HORNS = ((2, 1), (3, 1), (3, 2))


def is_nerve_like(X: FinSSet, up_to: int) -> NerveReport:
    """
    2-coskeletal up to the cap and unique fillers for Λ²₁, Λ³₁ and Λ³₂ horns.

    On success the category is read off: vertices are objects, edges are
    morphisms (degenerate edges become identities ``1_v``) and composites are
    the d₁ faces of the unique Λ²₁ fillers.
    """
    if up_to < 3:
        raise DomainError("nerve detection needs horns and spheres up to dimension 3")
    if up_to > X.dim_cap:
        raise CapError(f"nerve detection up to {up_to} needs dim_cap {up_to}, have {X.dim_cap}",
                       detail={'needed': up_to, 'dim_cap': X.dim_cap})
    cosk = is_coskeletal(X, 2, up_to)
    if not cosk.ok:
        return NerveReport(False, up_to, 'not 2-coskeletal', coskeletal=cosk)
    for n, k in LOW_HORNS:
        for horn in iter_horns(X, n, k):
            fillers = find_fillers(X, horn)
            if len(fillers) != 1:
                reason = 'unfillable' if not fillers else 'non-unique'
                return NerveReport(False, up_to, f'{reason} Λ^{n}_{k} horn', coskeletal=cosk,
                                   horn=horn, missing=k, fillers=fillers)
    return NerveReport(True, up_to, 'nerve-like', coskeletal=cosk, category=extract_category(X))


def extract_category(X: FinSSet) -> FinCategory:
    objects = list(X.nondeg.get(0, []))
    taken = set(X.dims)

    def identity_name(v):
        name = f'1_{v}'
        while name in taken:
            name = '1' + name
        return name

    identities = {v: identity_name(v) for v in objects}

    def morphism_name(edge: SimplexRef) -> str:
        return identities[edge.id] if edge.word else edge.id

    morphisms = {}
    for v in objects:
        morphisms[identities[v]] = (v, v)
    for e in X.nondeg.get(1, []):
        ref = X.ref(e)
        morphisms[e] = (X.vertex(ref, 0), X.vertex(ref, 1))
    edges = X.simplices(1)
    comp = {}
    for f in edges:
        for g in edges:
            if X.vertex(f, 1) != X.vertex(g, 0):
                continue
            fillers = find_fillers(X, [g, None, f])
            if len(fillers) != 1:
                raise DomainError(f"composite of {g} after {f} is not unique")
            comp[(morphism_name(g), morphism_name(f))] = morphism_name(X.face(fillers[0], 1))
    return FinCategory(objects, morphisms, identities, comp, name=f'h({X.name})')
