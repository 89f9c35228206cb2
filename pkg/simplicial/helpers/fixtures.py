"""
Built-in categories and the prepared scenarios run by ``rigid demo``.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .errors import InputError
from .necklace import Flag, HomSimplex, HomSpace, Necklace, NecklaceMap, hom_degeneracy, hom_space
from .sset import FinCategory, FinSSet, coskeletal_completion, nerve, shape
from .theorems import HornInHom, SphereInHom

logger = logging.getLogger(__name__)


def _category(name: str, objects: List[str], morphisms: Dict[str, Tuple[str, str]],
              identities: Dict[str, str], compose: Callable[[str, str], str]) -> FinCategory:
    comp = {}
    for f, (_, b) in morphisms.items():
        for g, (c, _) in morphisms.items():
            if b == c:
                comp[(g, f)] = compose(g, f)
    cat = FinCategory(objects, morphisms, identities, comp, name=name)
    cat.check()
    return cat


def poset_category(n: int) -> FinCategory:
    """The ordinal [n]; the arrow i -> j is named ``"ij"``."""
    objects = [str(i) for i in range(n + 1)]
    identities = {o: f'1_{o}' for o in objects}
    morphisms = {identities[o]: (o, o) for o in objects}
    ends = {identities[o]: (int(o), int(o)) for o in objects}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            morphisms[f'{i}{j}'] = (str(i), str(j))
            ends[f'{i}{j}'] = (i, j)

    def compose(g, f):
        a, c = ends[f][0], ends[g][1]
        return identities[str(a)] if a == c else f'{a}{c}'

    return _category(f'[{n}]', objects, morphisms, identities, compose)


def rs_category() -> FinCategory:
    """s: x -> y and r: y -> x with r∘s the identity of x; ``sr`` is the idempotent s∘r."""
    morphisms = {'1_x': ('x', 'x'), '1_y': ('y', 'y'), 's': ('x', 'y'), 'r': ('y', 'x'), 'sr': ('y', 'y')}
    identities = {'x': '1_x', 'y': '1_y'}
    table = {('r', 's'): '1_x', ('s', 'r'): 'sr', ('sr', 's'): 's', ('r', 'sr'): 'r', ('sr', 'sr'): 'sr'}

    def compose(g, f):
        if g in identities.values():
            return f
        if f in identities.values():
            return g
        return table[(g, f)]

    return _category('rs', ['x', 'y'], morphisms, identities, compose)


def terminal_category() -> FinCategory:
    return _category('terminal', ['*'], {'1_*': ('*', '*')}, {'*': '1_*'}, lambda g, f: '1_*')


def non_thin_poset() -> FinCategory:
    """Two parallel arrows a -> b."""
    morphisms = {'1_a': ('a', 'a'), '1_b': ('b', 'b'), 'f': ('a', 'b'), 'g': ('a', 'b')}
    identities = {'a': '1_a', 'b': '1_b'}
    return _category('non-thin', ['a', 'b'], morphisms, identities,
                     lambda g, f: f if g in identities.values() else g)


def five_object_category() -> FinCategory:
    """
    The chain a -> b -> c -> d -> e with an idempotent p on c that fixes
    everything arriving at c and is absorbed by everything leaving it.
    """
    objects = ['a', 'b', 'c', 'd', 'e']
    letters = ['u', 'v', 'w', 'z']
    identities = {o: f'1_{o}' for o in objects}
    morphisms = {identities[o]: (o, o) for o in objects}
    ends = {}
    for i in range(5):
        for j in range(i + 1, 5):
            name = ''.join(reversed(letters[i:j]))
            morphisms[name] = (objects[i], objects[j])
            ends[name] = (i, j)
    morphisms['p'] = ('c', 'c')

    def compose(g, f):
        if g in identities.values():
            return f
        if f in identities.values():
            return g
        if g == 'p':
            return f
        if f == 'p':
            return g
        i, k = ends[f][0], ends[g][1]
        return ''.join(reversed(letters[i:k]))

    return _category('five-object', objects, morphisms, identities, compose)


BUILTIN_CATEGORIES: Dict[str, Callable[[], FinCategory]] = {
    'rs': rs_category,
    'terminal': terminal_category,
    'non-thin': non_thin_poset,
    'five-object': five_object_category,
}


def category_by_name(name: str) -> FinCategory:
    """``[n]`` or one of :data:`BUILTIN_CATEGORIES`."""
    match = re.fullmatch(r'\[(\d+)\]', name.strip())
    if match:
        return poset_category(int(match.group(1)))
    try:
        return BUILTIN_CATEGORIES[name]()
    except KeyError:
        raise InputError(f"unknown category {name!r}", errors={'category': [f"expected [n] or one of {sorted(BUILTIN_CATEGORIES)}"]})


@dataclass
class Fixture:
    name: str
    X: FinSSet
    x: str
    y: str
    expected: str
    space: Optional[HomSpace] = None
    horns: Dict[str, HornInHom] = field(default_factory=dict)
    sphere: Optional[SphereInHom] = None
    extra: Dict[str, Any] = field(default_factory=dict)


def _cosk_sphere() -> Fixture:
    X = FinSSet(3, name='cosk-sphere')
    x, y = X.add_simplex('x'), X.add_simplex('y')
    f = X.add_simplex('f', [y, x])
    g = X.add_simplex('g', [y, x])
    alpha = X.add_simplex('α', [X.degeneracy(y, 0), g, f])
    sigma = X.add_simplex('σ', [alpha, alpha, X.degeneracy(g, 0), X.degeneracy(f, 0)])
    on_alpha = NecklaceMap(Necklace((2,)), (alpha,), 'x', 'y')
    on_sigma = NecklaceMap(Necklace((3,)), (sigma,), 'x', 'y')
    faces = (
        HomSimplex(on_alpha, Flag.of({0, 2}, {0, 1, 2}, {0, 1, 2})),
        HomSimplex(on_sigma, Flag.of({0, 3}, {0, 2, 3}, {0, 1, 2, 3})),
        HomSimplex(on_sigma, Flag.of({0, 3}, {0, 1, 3}, {0, 1, 2, 3})),
        HomSimplex(on_alpha, Flag.of({0, 2}, {0, 2}, {0, 1, 2})),
    )
    return Fixture('cosk-sphere', X, 'x', 'y', 'no filler: the inner faces assemble to no flag',
                   space=hom_space(X, 'x', 'y', 3, 4), sphere=SphereInHom(X, 'x', 'y', 3, faces))


def _rs_horns() -> Fixture:
    X = nerve(rs_category(), 4)
    T = NecklaceMap(Necklace((3,)), (X.ref('s|r|s'),), 'x', 'y')
    U = NecklaceMap(Necklace((2, 1)), (X.ref('s|r'), X.ref('s')), 'x', 'y')
    alpha = HomSimplex(T, Flag.of({0, 3}, {0, 2, 3}, {0, 1, 2, 3}))
    u = HomSimplex(U, Flag.of({0, 2, 3}, {0, 1, 2, 3}))
    point = HomSimplex(NecklaceMap(Necklace((1,)), (X.ref('s'),), 'x', 'y'), Flag.of({0, 1}))
    horns = {
        'Λ³₁': HornInHom(X, 'x', 'y', 3, 1, (hom_degeneracy(u, 1), None, hom_degeneracy(u, 0), alpha)),
        'Λ³₂': HornInHom(X, 'x', 'y', 3, 2, (alpha, hom_degeneracy(u, 0), None,
                                           hom_degeneracy(hom_degeneracy(point, 0), 0))),
    }
    return Fixture('rs-horns', X, 'x', 'y', 'both horns have no filler',
                   space=hom_space(X, 'x', 'y', 3, 4), horns=horns, extra={'alpha': alpha, 'U': u})


def two_triangle_sset(dim_cap: int = 4) -> FinSSet:
    """Two distinct triangles α, β on the boundary (g, h, f), completed 2-coskeletally."""
    X = FinSSet(2, name='two-triangle')
    x, y, z = X.add_simplex('x'), X.add_simplex('y'), X.add_simplex('z')
    f = X.add_simplex('f', [y, x])
    g = X.add_simplex('g', [z, y])
    h = X.add_simplex('h', [z, x])
    X.add_simplex('α', [g, h, f])
    X.add_simplex('β', [g, h, f])
    return coskeletal_completion(X, 2, dim_cap)


def _two_triangle() -> Fixture:
    X = two_triangle_sset()
    return Fixture('two-triangle', X, 'x', 'z', 'quasi-category that is not a nerve',
                   extra={'pair': (X.ref('α'), X.ref('β'))})


def two_tetrahedra_sset(dim_cap: int = 4) -> FinSSet:
    """∂Δ³ with two 3-simplices glued in, completed 3-coskeletally."""
    X = shape('boundary', 3).sset.copy(dim_cap=3, name='two-tetrahedra')
    boundary = [X.ref(sid) for sid in ('1,2,3', '0,2,3', '0,1,3', '0,1,2')]
    X.add_simplex('σ', boundary)
    X.add_simplex('τ', boundary)
    return coskeletal_completion(X, 3, dim_cap)


def _two_tetrahedra() -> Fixture:
    X = two_tetrahedra_sset()
    return Fixture('two-tetrahedra', X, '0', '3', 'distinct 3-simplices with equal boundary give an unfillable horn',
                   extra={'pair': (X.ref('σ'), X.ref('τ'))})


def _worked_example() -> Fixture:
    X = shape('simplex', 6).sset
    sigma = X.ref('0,1,2,3,4,5,6')
    whole = NecklaceMap(Necklace((6,)), (sigma,), '0', '6')
    everything = set(range(7))
    simplex = HomSimplex(whole, Flag.of({0, 6}, {0, 3, 4, 6}, {0, 1, 3, 4, 6}, everything))
    expected = {
        0: HomSimplex(
            NecklaceMap(Necklace((3, 1, 2)), (X.ref('0,1,2,3'), X.ref('3,4'), X.ref('4,5,6')), '0', '6'),
            Flag.of({0, 3, 4, 6}, {0, 1, 3, 4, 6}, everything),
        ),
        1: HomSimplex(whole, Flag.of({0, 6}, {0, 1, 3, 4, 6}, everything)),
        2: HomSimplex(whole, Flag.of({0, 6}, {0, 3, 4, 6}, everything)),
        3: HomSimplex(NecklaceMap(Necklace((4,)), (X.ref('0,1,3,4,6'),), '0', '6'),
                      Flag.of({0, 4}, {0, 2, 3, 4}, set(range(5)))),
    }
    return Fixture('worked-example', X, '0', '6', 'the four printed faces',
                   extra={'simplex': simplex, 'faces': expected})


def _cube() -> Fixture:
    X = shape('simplex', 3).sset
    return Fixture('cube', X, '0', '3', 'the square Δ¹ × Δ¹: 4, 5 and 2 non-degenerate simplices',
                   space=hom_space(X, '0', '3', 3, 4), extra={'counts': {0: 4, 1: 5, 2: 2, 3: 0}})


FIXTURES: Dict[str, Callable[[], Fixture]] = {
    'cosk-sphere': _cosk_sphere,
    'rs-horns': _rs_horns,
    'two-triangle': _two_triangle,
    'worked-example': _worked_example,
    'two-tetrahedra': _two_tetrahedra,
    'cube': _cube,
}


def demo_fixture(name: str) -> Fixture:
    try:
        builder = FIXTURES[name]
    except KeyError:
        raise InputError(f"unknown demo {name!r}", errors={'name': [f"expected one of {sorted(FIXTURES)}"]})
    logger.debug("building fixture %s", name)
    return builder()
