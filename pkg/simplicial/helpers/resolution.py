"""
Simplicial categories: the free resolution of a finite category by
parenthesized words, the cube model of ℭΔⁿ, the rigidification of a nerve,
the canonical isomorphisms between them and the homotopy coherent nerve in
low dimensions.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .delta import DegeneracyWord, OrdinalMap, codegeneracy, coface, collapse_repeats, expand_repeats
from .errors import BudgetError, CapError, DomainError
from .necklace import (
    Flag,
    HomSimplex,
    HomSpace,
    Necklace,
    NecklaceMap,
    concatenate,
    hom_space,
    strict_flags,
)
from .sset import FinCategory, FinSSet, SimplexRef, chain_id, find_fillers, nerve, nerve_of_poset

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


def full_degeneracy(sid: str, dim: int) -> SimplexRef:
    """The vertex ``sid`` degenerated up to dimension ``dim``."""
    return SimplexRef(DegeneracyWord(tuple(range(dim - 1, -1, -1))), sid, dim)


class SimpCategory:
    """
    A simplicially enriched category with finitely many objects.

    Subclasses say what the simplices of a hom-space are (``element``), how
    to name one (``encode``) and how to compose two of them.
    """
    kind = 'simplicial'

    def __init__(self, objects: Sequence[str], homs: Dict[Pair, FinSSet], units: Dict[str, str], name: str = ''):
        self.objects = list(objects)
        self.homs = homs
        self.units = units
        self.name = name

    def hom(self, x: str, y: str) -> Optional[FinSSet]:
        H = self.homs.get((x, y))
        return H if H is not None and H.dims else None

    def element(self, x: str, y: str, ref: SimplexRef) -> Any:
        raise NotImplementedError

    def encode(self, x: str, y: str, element: Any) -> SimplexRef:
        raise NotImplementedError

    def compose_elements(self, g: Any, f: Any) -> Optional[Any]:
        raise NotImplementedError

    def compose(self, x: str, y: str, z: str, g: SimplexRef, f: SimplexRef) -> Optional[SimplexRef]:
        """``g ∘ f`` for f in hom(x, y) and g in hom(y, z); None when it leaves the caps."""
        if g.dim != f.dim:
            raise DomainError("only simplices of the same dimension compose")
        composite = self.compose_elements(self.element(y, z, g), self.element(x, y, f))
        if composite is None:
            return None
        try:
            return self.encode(x, z, composite)
        except CapError:
            return None

    def unit(self, x: str, dim: int = 0) -> SimplexRef:
        return full_degeneracy(self.units[x], dim)

    def check_laws(self, dim_cap: int) -> bool:
        """
        Unit and associativity laws on non-degenerate simplices up to ``dim_cap``;
        composites leaving the caps are skipped.

        Raises:
            DomainError: naming the first failing composite
        """
        objs = self.objects
        for x, y in product(objs, objs):
            H = self.hom(x, y)
            if H is None:
                continue
            for k in range(dim_cap + 1):
                for sid in H.nondeg.get(k, []):
                    f = H.ref(sid)
                    if self.compose(x, y, y, self.unit(y, k), f) != f or self.compose(x, x, y, f, self.unit(x, k)) != f:
                        raise DomainError(f"unit law fails at {sid} in hom({x}, {y})")
        for x, y, z, w in product(objs, repeat=4):
            homs = [self.hom(x, y), self.hom(y, z), self.hom(z, w)]
            if any(H is None for H in homs):
                continue
            for k in range(dim_cap + 1):
                for f, g, h in product(*[[H.ref(s) for s in H.nondeg.get(k, [])] for H in homs]):
                    gf = self.compose(x, y, z, g, f)
                    hg = self.compose(y, z, w, h, g)
                    if gf is None or hg is None:
                        continue
                    left = self.compose(x, z, w, h, gf)
                    right = self.compose(x, y, w, hg, f)
                    if left is not None and right is not None and left != right:
                        raise DomainError(f"associativity fails on ({h}, {g}, {f})")
        return True

    def as_dict(self, compose_dim: int = 1) -> Dict[str, Any]:
        composition = []
        objs = self.objects
        for x, y, z in product(objs, repeat=3):
            F, G = self.hom(x, y), self.hom(y, z)
            if F is None or G is None:
                continue
            for k in range(min(compose_dim, F.dim_cap, G.dim_cap) + 1):
                for fs in F.nondeg.get(k, []):
                    for gs in G.nondeg.get(k, []):
                        c = self.compose(x, y, z, G.ref(gs), F.ref(fs))
                        if c is not None:
                            composition.append([gs, fs, str(c)])
        return {
            'name': self.name,
            'kind': self.kind,
            'objects': list(self.objects),
            'units': dict(self.units),
            'homs': {f'{x}->{y}': H.as_dict() for (x, y), H in self.homs.items() if H.dims},
            'composition': composition,
        }

    @classmethod
    def discrete(cls, A: FinCategory, dim_cap: int = 3) -> 'DiscreteCategory':
        return DiscreteCategory(A, dim_cap)


class DiscreteCategory(SimpCategory):
    """A category with every hom-set viewed as a constant simplicial set."""
    kind = 'discrete'

    def __init__(self, A: FinCategory, dim_cap: int = 3):
        homs = {}
        for f, (a, b) in A.morphisms.items():
            homs.setdefault((a, b), FinSSet(dim_cap, name=f'{A.name}({a},{b})')).add_simplex(f)
        super().__init__(A.objects, homs, dict(A.identities), name=f'disc({A.name})')
        self.A = A

    def element(self, x, y, ref):
        return (ref.id, ref.dim)

    def encode(self, x, y, element):
        return full_degeneracy(*element)

    def compose_elements(self, g, f):
        return (self.A.compose(g[0], f[0]), f[1])


@dataclass(frozen=True)
class ParenWord:
    """
    A composable word of non-identity morphisms with nested bracketings.

    ``levels[k]`` is the set of block boundaries of bracket level k+1, so
    level 1 is the outermost grouping; an n-simplex has n levels.
    """
    source: str
    target: str
    morphisms: Tuple[str, ...]
    levels: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'morphisms', tuple(self.morphisms))
        levels = tuple(tuple(sorted(set(level))) for level in self.levels)
        object.__setattr__(self, 'levels', levels)
        length = len(self.morphisms)
        for level in levels:
            if level[0] != 0 or level[-1] != length or not set(level) <= set(range(length + 1)):
                raise DomainError(f"bracket level {level} does not span the word")
        for outer, inner in zip(levels, levels[1:]):
            if not set(outer) <= set(inner):
                raise DomainError("bracket levels must refine one another")

    @property
    def n(self) -> int:
        return len(self.levels)

    @property
    def positions(self) -> Tuple[int, ...]:
        return tuple(range(len(self.morphisms) + 1))

    @property
    def flag_sets(self) -> Tuple[Tuple[int, ...], ...]:
        return self.levels + (self.positions,)

    @classmethod
    def from_flag(cls, source: str, target: str, morphisms: Sequence[str], sets: Sequence[Sequence[int]]) -> 'ParenWord':
        sets = tuple(tuple(sorted(set(s))) for s in sets)
        if sets[-1] != tuple(range(len(morphisms) + 1)):
            raise DomainError("the last flag set of a word must be every position")
        return cls(source, target, tuple(morphisms), sets[:-1])

    def is_degenerate(self) -> bool:
        sets = self.flag_sets
        return any(a == b for a, b in zip(sets, sets[1:]))

    def face(self, A: FinCategory, i: int) -> 'ParenWord':
        """d_i removes bracket level i+1 for i < n; d_n composes inside the innermost brackets."""
        n = self.n
        if n < 1 or not 0 <= i <= n:
            raise DomainError(f"face d{i} of a {n}-simplex does not exist")
        if i < n:
            return ParenWord(self.source, self.target, self.morphisms, self.levels[:i] + self.levels[i + 1:])
        inner = self.levels[-1]
        morphisms, position = [], {0: 0}
        for a, b in zip(inner, inner[1:]):
            composite = self.morphisms[a]
            for m in self.morphisms[a + 1:b]:
                composite = A.compose(m, composite)
            if not A.is_identity(composite):
                morphisms.append(composite)
            position[b] = len(morphisms)
        levels = tuple(tuple(position[p] for p in level) for level in self.levels[:-1])
        return ParenWord(self.source, self.target, tuple(morphisms), levels)

    def degeneracy(self, i: int) -> 'ParenWord':
        """s_i doubles bracket level i+1 for i < n; s_n brackets every single morphism."""
        if not 0 <= i <= self.n:
            raise DomainError(f"degeneracy s{i} of a {self.n}-simplex does not exist")
        sets = self.flag_sets
        return ParenWord.from_flag(self.source, self.target, self.morphisms, sets[:i + 1] + sets[i:])

    def render(self) -> str:
        if not self.morphisms:
            return '(' * self.n + f'id_{self.source}' + ')' * self.n

        def inside(level, start, end):
            if level == self.n:
                return ' '.join(self.morphisms[start:end])
            cuts = [p for p in self.levels[level] if start <= p <= end]
            return ''.join('(' + inside(level + 1, a, b) + ')' for a, b in zip(cuts, cuts[1:]))

        return inside(0, 0, len(self.morphisms))

    def __str__(self):
        return self.render()


def _words(A: FinCategory, x: str, y: str, max_length: int) -> List[Tuple[str, ...]]:
    found = []

    def extend(current, word):
        if current == y:
            found.append(word)
        if len(word) == max_length:
            return
        for f in A.non_identity_from(current):
            extend(A.tgt(f), word + (f,))

    extend(x, ())
    found.sort(key=lambda w: (len(w), w))
    return found


def _all_cuts(length: int) -> Iterator[Tuple[int, ...]]:
    inner = range(1, length)
    for size in range(len(inner) + 1):
        for chosen in combinations(inner, size):
            yield (0,) + chosen + ((length,) if length else ())


class ResolutionCategory(SimpCategory):
    """The free resolution: n-simplices of hom(x, y) are words with n bracket levels."""
    kind = 'free-resolution'

    def __init__(self, A: FinCategory, dim_cap: int, size_cap: int):
        self.A = A
        self.dim_cap = dim_cap
        self.size_cap = size_cap
        homs = {}
        for x, y in product(A.objects, A.objects):
            H = FinSSet(dim_cap, name=f'FU({A.name})({x},{y})')
            layers: Dict[int, List[ParenWord]] = {}
            for word in _words(A, x, y, size_cap - 1):
                for cut in _all_cuts(len(word)):
                    shape = Necklace(tuple(b - a for a, b in zip(cut, cut[1:])))
                    for flag in strict_flags(shape, dim_cap):
                        pw = ParenWord.from_flag(x, y, word, flag.sets)
                        layers.setdefault(pw.n, []).append(pw)
            for k in sorted(layers):
                for pw in sorted(layers[k], key=lambda p: (len(p.morphisms), p.morphisms, p.levels)):
                    faces = [self._ref(H, pw.face(A, i)) for i in range(k + 1)] if k else []
                    H.add_simplex(self._id(pw), faces, label=pw)
            homs[(x, y)] = H
        super().__init__(A.objects, homs, {x: f'id_{x}' for x in A.objects}, name=f'FU({A.name})')

    @staticmethod
    def _id(pw: ParenWord) -> str:
        return pw.render()

    def _ref(self, H: FinSSet, pw: ParenWord) -> SimplexRef:
        strict, word = collapse_repeats(pw.flag_sets)
        base = ParenWord.from_flag(pw.source, pw.target, pw.morphisms, strict)
        sid = self._id(base)
        if sid not in H.dims:
            raise CapError(f"word {sid} lies outside the caps", detail={'size_cap': self.size_cap})
        return SimplexRef(word, sid, pw.n)

    def element(self, x, y, ref):
        base = self.homs[(x, y)].labels[ref.id]
        return ParenWord.from_flag(x, y, base.morphisms, expand_repeats(base.flag_sets, ref.word))

    def encode(self, x, y, element):
        return self._ref(self.homs[(x, y)], element)

    def compose_elements(self, g, f):
        if len(f.morphisms) + len(g.morphisms) > self.size_cap - 1:
            return None
        shift = len(f.morphisms)
        sets = tuple(set(a) | {p + shift for p in b} for a, b in zip(f.flag_sets, g.flag_sets))
        return ParenWord.from_flag(f.source, g.target, f.morphisms + g.morphisms, sets)


def free_resolution(A: FinCategory, dim_cap: int, size_cap: int) -> ResolutionCategory:
    """
    Words of at most ``size_cap - 1`` morphisms; categories with
    endomorphisms have infinitely many words otherwise.
    """
    if dim_cap < 0 or size_cap < 1:
        raise DomainError("caps must be positive")
    R = ResolutionCategory(A, dim_cap, size_cap)
    logger.info("free resolution of %s: %s", A.name,
                {f'{x}->{y}': H.nondeg_count(0) for (x, y), H in R.homs.items() if H.dims})
    return R


def _subset_name(s: Sequence[int]) -> str:
    return '{' + ','.join(map(str, s)) + '}'


class CubeCategory(SimpCategory):
    """ℭΔⁿ: hom(i, j) is the nerve of the subsets of [i, j] holding both ends; composition is union."""
    kind = 'cube'

    def __init__(self, n: int, dim_cap: Optional[int] = None):
        self.n = n
        dim_cap = n if dim_cap is None else dim_cap
        objects = [str(i) for i in range(n + 1)]
        homs = {}
        for i in range(n + 1):
            for j in range(i, n + 1):
                interior = range(i + 1, j)
                elements = [tuple(sorted({i, j} | set(c))) for size in range(len(interior) + 1)
                            for c in combinations(interior, size)]
                homs[(str(i), str(j))] = nerve_of_poset(
                    elements, lambda a, b: set(a) <= set(b), dim_cap, name_of=_subset_name,
                    name=f'CΔ{n}({i},{j})')
        super().__init__(objects, homs, {str(i): _subset_name((i,)) for i in range(n + 1)}, name=f'CΔ{n}')

    def element(self, x, y, ref):
        chain = self.homs[(x, y)].labels[ref.id]
        return expand_repeats(chain, ref.word)

    def encode(self, x, y, element):
        strict, word = collapse_repeats(tuple(tuple(sorted(s)) for s in element))
        sid = '<'.join(_subset_name(s) for s in strict)
        H = self.homs.get((x, y))
        if H is None or sid not in H.dims:
            raise DomainError(f"{sid} is not a chain of hom({x}, {y})")
        return SimplexRef(word, sid, len(element) - 1)

    def compose_elements(self, g, f):
        return tuple(tuple(sorted(set(a) | set(b))) for a, b in zip(f, g))


def rigid_delta(n: int, dim_cap: Optional[int] = None) -> CubeCategory:
    if n < 0:
        raise DomainError("n must be a natural number")
    return CubeCategory(n, dim_cap)


class RigidCategory(SimpCategory):
    """ℭX with hom-spaces assembled from necklaces and composition by concatenation."""
    kind = 'rigidification'

    def __init__(self, X: FinSSet, spaces: Dict[Pair, HomSpace], size_cap: int, name: str = ''):
        self.X = X
        self.spaces = spaces
        self.size_cap = size_cap
        objects = list(X.nondeg.get(0, []))
        units = {}
        for x in objects:
            trivial = HomSimplex(NecklaceMap(Necklace(()), (), x, x), Flag(((0,),)))
            units[x] = trivial.serialize()
        super().__init__(objects, {pair: space.sset for pair, space in spaces.items()}, units,
                         name=name or f'C({X.name})')

    def element(self, x, y, ref):
        return self.spaces[(x, y)].simplex(ref)

    def encode(self, x, y, element):
        return self.spaces[(x, y)].ref_of(element)

    def compose_elements(self, g, f):
        if f.shape.vertex_count + g.shape.vertex_count - 1 > self.size_cap:
            return None
        return concatenate(g, f)


def rigidify(X: FinSSet, dim_cap: int, size_cap: int) -> RigidCategory:
    objects = list(X.nondeg.get(0, []))
    spaces = {(x, y): hom_space(X, x, y, dim_cap, size_cap) for x, y in product(objects, objects)}
    return RigidCategory(X, spaces, size_cap)


def rigidify_nerve(A: FinCategory, dim_cap: int, size_cap: int) -> RigidCategory:
    """ℭ of the nerve of ``A``; beads never need more than ``size_cap - 1`` dimensions."""
    X = nerve(A, max(1, size_cap - 1))
    C = rigidify(X, dim_cap, size_cap)
    C.name = f'CN({A.name})'
    C.A = A
    return C


def word_to_necklace(R: ResolutionCategory, S: RigidCategory) -> Callable[[str, str, ParenWord], HomSimplex]:
    """Blocks of the outermost brackets become beads, bracket levels become flag sets."""
    X = S.X

    def phi(x, y, pw: ParenWord) -> HomSimplex:
        cut = pw.flag_sets[0]
        beads = tuple(b - a for a, b in zip(cut, cut[1:]))
        images = tuple(X.ref(chain_id(pw.morphisms[a:b])) for a, b in zip(cut, cut[1:]))
        return HomSimplex(NecklaceMap(Necklace(beads), images, x, y), Flag(pw.flag_sets))

    return phi


def necklace_to_cube(R: RigidCategory, S: CubeCategory) -> Callable[[str, str, HomSimplex], Tuple]:
    """Each flag set becomes the set of objects it visits."""
    X = R.X

    def phi(x, y, h: HomSimplex) -> Tuple:
        along = [h.map.source]
        for image in h.map.bead_images:
            along.extend(X.vertices(image)[1:])
        return tuple(tuple(sorted({int(along[p]) for p in s})) for s in h.flag.sets)

    return phi


def _identity_correspondence(R: SimpCategory, S: SimpCategory):
    return lambda x, y, element: element


def correspondence(R: SimpCategory, S: SimpCategory):
    if isinstance(R, ResolutionCategory) and isinstance(S, RigidCategory):
        return 'word-to-necklace', word_to_necklace(R, S)
    if isinstance(R, RigidCategory) and isinstance(S, CubeCategory):
        return 'necklace-to-cube', necklace_to_cube(R, S)
    if type(R) is type(S):
        return 'identity', _identity_correspondence(R, S)
    raise DomainError(f"no canonical correspondence from {R.kind} to {S.kind}")


@dataclass
class IsoReport:
    ok: bool
    correspondence: str
    dim_cap: int
    checked: Dict[str, int] = field(default_factory=dict)
    certificate: Optional[Dict[str, Any]] = None
    table: List[Tuple[str, str]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'correspondence': self.correspondence,
            'dim_cap': self.dim_cap,
            'checked': dict(self.checked),
            'certificate': self.certificate,
            'table': [list(row) for row in self.table],
        }


class _Mismatch(Exception):
    def __init__(self, certificate):
        super().__init__(certificate.get('check'))
        self.certificate = certificate


def iso_check(R: SimpCategory, S: SimpCategory, dim_cap: int, compose_dim: Optional[int] = None) -> IsoReport:
    """
    Check that the canonical correspondence R -> S is a bijection on
    non-degenerate simplices up to ``dim_cap`` commuting with faces,
    degeneracies and composition.

    Returns:
        IsoReport whose certificate names the first failing simplex
    """
    name, phi = correspondence(R, S)
    compose_dim = dim_cap if compose_dim is None else compose_dim
    checked = {'simplices': 0, 'faces': 0, 'degeneracies': 0, 'composites': 0}
    table: List[Tuple[str, str]] = []
    report = IsoReport(True, name, dim_cap, checked, table=table)

    def fail(**certificate):
        raise _Mismatch(certificate)

    try:
        if sorted(R.objects) != sorted(S.objects):
            fail(check='objects', expected=sorted(R.objects), found=sorted(S.objects))
        for x, y in product(R.objects, R.objects):
            HR, HS = R.hom(x, y), S.hom(x, y)
            if HR is None or HS is None:
                if (HR is None) != (HS is None):
                    fail(check='empty hom', pair=[x, y])
                continue
            for k in range(dim_cap + 1):
                seen: Dict[str, str] = {}
                for sid in HR.nondeg.get(k, []):
                    ref = HR.ref(sid)
                    image = phi(x, y, R.element(x, y, ref))
                    try:
                        target = S.encode(x, y, image)
                    except (CapError, DomainError):
                        fail(check='image', pair=[x, y], simplex=sid, found=str(image))
                    if target.word:
                        fail(check='image is degenerate', pair=[x, y], simplex=sid, found=str(target))
                    if target.id in seen:
                        fail(check='injective', pair=[x, y], simplex=sid, found=target.id, other=seen[target.id])
                    seen[target.id] = sid
                    table.append((sid, target.id))
                    checked['simplices'] += 1
                    for i in range(k + 1 if k else 0):
                        expected = phi(x, y, R.element(x, y, HR.face(ref, i)))
                        found = S.element(x, y, HS.face(target, i))
                        checked['faces'] += 1
                        if expected != found:
                            fail(check=f'face d{i}', pair=[x, y], simplex=sid,
                                 expected=str(expected), found=str(found))
                    if k < min(HR.dim_cap, HS.dim_cap):
                        for i in range(k + 1):
                            expected = phi(x, y, R.element(x, y, HR.degeneracy(ref, i)))
                            found = S.element(x, y, HS.degeneracy(target, i))
                            checked['degeneracies'] += 1
                            if expected != found:
                                fail(check=f'degeneracy s{i}', pair=[x, y], simplex=sid,
                                     expected=str(expected), found=str(found))
                if len(seen) != HS.nondeg_count(k):
                    missing = [s for s in HS.nondeg.get(k, []) if s not in seen]
                    fail(check='surjective', pair=[x, y], dimension=k, found=missing[:1])
        for x, y, z in product(R.objects, repeat=3):
            F, G = R.hom(x, y), R.hom(y, z)
            if F is None or G is None:
                continue
            for k in range(compose_dim + 1):
                for fs, gs in product(F.nondeg.get(k, []), G.nondeg.get(k, [])):
                    f, g = F.ref(fs), G.ref(gs)
                    c = R.compose(x, y, z, g, f)
                    if c is None:
                        continue
                    f2 = S.encode(x, y, phi(x, y, R.element(x, y, f)))
                    g2 = S.encode(y, z, phi(y, z, R.element(y, z, g)))
                    d = S.compose(x, y, z, g2, f2)
                    if d is None:
                        continue
                    checked['composites'] += 1
                    expected = phi(x, z, R.element(x, z, c))
                    found = S.element(x, z, d)
                    if expected != found:
                        fail(check='composition', pair=[x, z], simplex=f'{gs} ∘ {fs}',
                             expected=str(expected), found=str(found))
    except _Mismatch as mismatch:
        report.ok = False
        report.certificate = mismatch.certificate
        logger.info("iso_check %s failed: %s", name, mismatch.certificate)
    return report


def _cube_chains(i: int, j: int) -> List[Tuple[Tuple[int, ...], ...]]:
    interior = list(range(i + 1, j))
    subsets = [tuple(sorted({i, j} | set(c))) for size in range(len(interior) + 1) for c in combinations(interior, size)]
    chains = []

    def extend(chain):
        chains.append(chain)
        for s in subsets:
            if set(chain[-1]) < set(s):
                extend(chain + (s,))

    for s in subsets:
        extend((s,))
    chains.sort(key=lambda c: (len(c), c))
    return chains


@dataclass(frozen=True)
class CoherentSimplex:
    """A simplicial functor ℭΔⁿ -> C given on the non-degenerate chains of every hom-cube."""
    objects: Tuple[str, ...]
    images: Tuple[Tuple[Tuple[int, int], Tuple[Tuple[Tuple[Tuple[int, ...], ...], SimplexRef], ...]], ...]

    @property
    def n(self) -> int:
        return len(self.objects) - 1

    def table(self) -> Dict[Tuple[int, int], Dict[Tuple[Tuple[int, ...], ...], SimplexRef]]:
        return {pair: dict(entries) for pair, entries in self.images}

    def serialize(self) -> str:
        parts = [','.join(self.objects)]
        for (i, j), entries in self.images:
            free = [str(ref) for chain, ref in entries if chain[0] == (i, j)]
            if free:
                parts.append(f'{i}{j}:' + ';'.join(free))
        return ' '.join(parts)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, count: int):
        self.used += count
        if self.used > self.limit:
            raise BudgetError(f"candidate budget {self.limit} exhausted", detail={'budget': self.limit})


def _chain_image(C: SimpCategory, objects: Sequence[str], table, i: int, j: int, chain) -> SimplexRef:
    """Image of a possibly degenerate chain of hom(i, j)."""
    if i == j:
        return C.unit(objects[i], len(chain) - 1)
    strict, word = collapse_repeats(chain)
    base = table[(i, j)][strict]
    if not word:
        return base
    H = C.hom(objects[i], objects[j])
    return H.apply(word.as_map(len(strict) - 1), base)


def _functors(C: SimpCategory, n: int, budget: _Budget) -> Iterator[CoherentSimplex]:
    pairs = sorted(((i, j) for i in range(n + 1) for j in range(i + 1, n + 1)), key=lambda p: (p[1] - p[0], p[0]))
    chains = {p: _cube_chains(*p) for p in pairs}
    for objects in product(C.objects, repeat=n + 1):
        if any(C.hom(objects[i], objects[j]) is None for i, j in pairs):
            continue
        table: Dict[Tuple[int, int], Dict] = {p: {} for p in pairs}
        work = [(p, chain) for p in pairs for chain in chains[p]]

        def assign(pos):
            if pos == len(work):
                yield CoherentSimplex(objects, tuple((p, tuple(table[p].items())) for p in pairs))
                return
            (i, j), chain = work[pos]
            H = C.hom(objects[i], objects[j])
            inner = [k for k in chain[0] if i < k < j]
            if inner:
                forced = None
                for k in inner:
                    left = tuple(tuple(v for v in s if v <= k) for s in chain)
                    right = tuple(tuple(v for v in s if v >= k) for s in chain)
                    value = C.compose(objects[i], objects[k], objects[j],
                                      _chain_image(C, objects, table, k, j, right),
                                      _chain_image(C, objects, table, i, k, left))
                    if value is None:
                        raise CapError("a composite in the coherent nerve leaves the caps")
                    if forced is not None and forced != value:
                        return
                    forced = value
                table[(i, j)][chain] = forced
                yield from assign(pos + 1)
                del table[(i, j)][chain]
                return
            m = len(chain) - 1
            if m == 0:
                candidates = H.simplices(0)
            else:
                faces = [table[(i, j)][chain[:t] + chain[t + 1:]] for t in range(m + 1)]
                try:
                    candidates = find_fillers(H, faces)
                except DomainError:
                    candidates = []
            budget.spend(len(candidates))
            for candidate in candidates:
                table[(i, j)][chain] = candidate
                yield from assign(pos + 1)
            table[(i, j)].pop(chain, None)

        yield from assign(0)


def _transport(C: SimpCategory, F: CoherentSimplex, op: OrdinalMap) -> CoherentSimplex:
    """Precompose F with ℭ of ``op: [m] -> [n]``."""
    m = op.source_dim
    objects = tuple(F.objects[op(i)] for i in range(m + 1))
    table = F.table()
    images = []
    for j_gap in range(1, m + 1):
        for i in range(0, m + 1 - j_gap):
            j = i + j_gap
            entries = []
            for chain in _cube_chains(i, j):
                moved = tuple(tuple(sorted({op(v) for v in s})) for s in chain)
                entries.append((chain, _chain_image(C, F.objects, table, op(i), op(j), moved)))
            images.append(((i, j), tuple(entries)))
    return CoherentSimplex(objects, tuple(images))


def hc_nerve(C: SimpCategory, n_cap: int = 3, budget: int = 200000) -> FinSSet:
    """
    The homotopy coherent nerve up to dimension ``n_cap`` (at most 3).

    Chains whose first subset has an interior vertex are forced by
    composition; the others are searched among the fillers of their faces.

    Raises:
        DomainError: ``n_cap`` above 3
        BudgetError: more than ``budget`` candidates were tried
    """
    if not 0 <= n_cap <= 3:
        raise DomainError("the coherent nerve is computed up to dimension 3")
    meter = _Budget(budget)
    N = FinSSet(n_cap, name=f'Nhc({C.name})')
    ids: Dict[CoherentSimplex, str] = {}

    def ez(F: CoherentSimplex) -> SimplexRef:
        indices = []
        while F not in ids:
            for j in range(F.n):
                lower = _transport(C, F, coface(j, F.n))
                if _transport(C, lower, codegeneracy(j, F.n - 1)) == F:
                    indices.append(j)
                    F = lower
                    break
            else:
                raise DomainError(f"{F.serialize()} is neither known nor degenerate")
        word = DegeneracyWord.normalize(indices, F.n) if indices else DegeneracyWord()
        return SimplexRef(word, ids[F], F.n + len(indices))

    for n in range(n_cap + 1):
        added = 0
        for F in _functors(C, n, meter):
            degenerate = any(
                _transport(C, _transport(C, F, coface(j, n)), codegeneracy(j, n - 1)) == F for j in range(n)
            )
            if degenerate:
                continue
            faces = [ez(_transport(C, F, coface(i, n))) for i in range(n + 1)] if n else []
            sid = F.serialize()
            N.add_simplex(sid, faces, label=F)
            ids[F] = sid
            added += 1
        logger.info("coherent nerve of %s: %d non-degenerate %d-simplices, budget used %d",
                    C.name, added, n, meter.used)
    return N
