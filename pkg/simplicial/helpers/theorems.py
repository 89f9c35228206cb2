"""
Constructions on hom-spaces of ℭX: filling Λ²₁ horns by merging beads,
filling spheres of dimension at least 4, the unfillable-horn constructions
that witness a quasi-category which is not a nerve, and the outer-horn
counterexamples.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .delta import OrdinalMap
from .errors import CapError, DomainError, NotQuasiCategoryError
from .necklace import (
    Flag,
    HomSimplex,
    Necklace,
    NecklaceMap,
    hom_face,
    hom_space,
    necklace_weight,
    tnd_quotient,
)
from .sset import (
    FinCategory,
    FinSSet,
    Shape,
    SimplexRef,
    family_to_dict,
    find_fillers,
    is_nerve_like,
    is_quasicategory,
    solve_extension,
)

logger = logging.getLogger(__name__)


@dataclass
class HornInHom:
    """A compatible family of faces in ℭX(x, y) with slot ``missing`` left out."""
    X: FinSSet
    x: str
    y: str
    n: int
    missing: Optional[int]
    faces: Tuple[Optional[HomSimplex], ...]

    def __post_init__(self):
        self.faces = tuple(self.faces)
        if len(self.faces) != self.n + 1:
            raise DomainError(f"a {self.n}-dimensional family needs {self.n + 1} face slots")
        for i, face in enumerate(self.faces):
            if (face is None) != (i == self.missing):
                raise DomainError(f"face slot {i} is {'empty' if face is None else 'filled'} unexpectedly")
            if face is not None:
                if face.n != self.n - 1:
                    raise DomainError(f"face {i} has dimension {face.n}, expected {self.n - 1}")
                if (face.map.source, face.map.target) != (self.x, self.y):
                    raise DomainError(f"face {i} does not lie in the hom-space ({self.x}, {self.y})")

    def check(self):
        """
        Raises:
            DomainError: when some d_i(face_j) differs from d_{j-1}(face_i)
        """
        if self.n < 2:
            return True
        for j, fj in enumerate(self.faces):
            for i in range(j):
                fi = self.faces[i]
                if fi is None or fj is None:
                    continue
                if hom_face(self.X, fj, i) != hom_face(self.X, fi, j - 1):
                    raise DomainError(f"faces {i} and {j} are incompatible",
                                      detail={'faces': self.describe()['faces']})
        return True

    def describe(self) -> Dict[str, Any]:
        return {
            'hom': [self.x, self.y],
            'dimension': self.n,
            'missing': self.missing,
            'faces': [None if f is None else f.describe() for f in self.faces],
        }


class SphereInHom(HornInHom):
    """Every face slot present."""

    def __init__(self, X: FinSSet, x: str, y: str, n: int, faces: Sequence[HomSimplex]):
        super().__init__(X, x, y, n, None, tuple(faces))


@dataclass
class MergeStep:
    bead: int
    slot: int
    kind: str
    dims: Tuple[int, int]
    candidates: int
    chosen: str
    interpretation: bool = False

    def as_dict(self) -> Dict[str, Any]:
        return {
            'bead': self.bead,
            'slot': self.slot,
            'kind': self.kind,
            'dims': list(self.dims),
            'candidates': self.candidates,
            'chosen': self.chosen,
            'interpretation': self.interpretation,
        }


@dataclass
class FillResult:
    filler: HomSimplex
    trace: List[MergeStep] = field(default_factory=list)
    fallback: bool = False
    note: str = ''

    def as_dict(self) -> Dict[str, Any]:
        return {
            'filler': self.filler.describe(),
            'trace': [step.as_dict() for step in self.trace],
            'fallback': self.fallback,
            'note': self.note,
        }


@dataclass
class _Slot:
    kind: str
    t_bead: Optional[int]
    u_bead: Optional[int]
    dim: int


def _align(X: FinSSet, T: NecklaceMap, U: NecklaceMap) -> List[_Slot]:
    """
    Line the spine edges of T up against the bead diagonals of U.

    Degenerate spine edges of T become gaps, degenerate diagonals of U become
    extra slots; the remaining edges must agree one for one.
    """
    t_edges = []
    for b, ((a, c), image) in enumerate(zip(T.shape.bead_ranges(), T.bead_images)):
        for j in range(c - a):
            t_edges.append((b, X.restrict(image, (j, j + 1))))
    u_diagonals = [X.restrict(image, (0, image.dim)) for image in U.bead_images]
    slots, i, j = [], 0, 0
    while i < len(t_edges) or j < len(u_diagonals):
        if i < len(t_edges) and t_edges[i][1].word:
            slots.append(_Slot('gap', t_edges[i][0], None, 1))
            i += 1
        elif j < len(u_diagonals) and u_diagonals[j].word:
            slots.append(_Slot('extra', None, j, U.shape.bead_dims[j]))
            j += 1
        elif i < len(t_edges) and j < len(u_diagonals) and t_edges[i][1] == u_diagonals[j]:
            slots.append(_Slot('match', t_edges[i][0], j, U.shape.bead_dims[j]))
            i += 1
            j += 1
        else:
            raise DomainError("the spine of T does not line up with the diagonal of U")
    return slots


def _pieces(slots: List[_Slot]) -> List[Tuple[str, Optional[int], List[int]]]:
    """Group slots into future beads: one per T-bead, plus lone extra slots between T-beads."""
    def neighbour(idx, step):
        p = idx + step
        while 0 <= p < len(slots):
            if slots[p].kind != 'extra':
                return slots[p].t_bead
            p += step
        return None

    pieces: List[Tuple[str, Optional[int], List[int]]] = []
    for idx, slot in enumerate(slots):
        if slot.kind == 'extra':
            before = neighbour(idx, -1)
            if before is None or before != neighbour(idx, 1):
                pieces.append(('single', None, [idx]))
                continue
            pieces[-1][2].append(idx)
        elif pieces and pieces[-1][0] == 'bead' and pieces[-1][1] == slot.t_bead:
            pieces[-1][2].append(idx)
        else:
            pieces.append(('bead', slot.t_bead, [idx]))
    return pieces


def _extend(X: FinSSet, m: int, parts: Sequence[Tuple[Sequence[int], SimplexRef]], kind: str,
            step: Dict[str, Any]) -> Tuple[SimplexRef, int]:
    sub = Shape.generated(m, [p for p, _ in parts], kind)
    assignment = {Shape.simplex_id(sorted(p)): s for p, s in parts}
    candidates = solve_extension(X, sub, assignment)
    if not candidates:
        raise NotQuasiCategoryError(
            f"no {kind} extension in dimension {m}; the simplicial set is not a quasi-category there",
            certificate={**step, 'kind': kind, 'dimension': m,
                         'assignment': {k: str(v) for k, v in assignment.items()}},
        )
    return candidates[0], len(candidates)


def _merge_bead(X: FinSSet, beta: SimplexRef, group: List[_Slot], U: NecklaceMap, bead: int,
                trace: List[MergeStep]) -> SimplexRef:
    """Thicken one T-bead until its edges carry the matching U-beads."""
    a = len(group)
    values = [0]
    for slot in group:
        values.append(values[-1] + (0 if slot.kind == 'extra' else 1))
    C = X.apply(OrdinalMap(tuple(values), beta.dim + 1), beta)
    w = [0]
    for slot in group:
        w.append(w[-1] + slot.dim)
    verts = list(w)
    for s, slot in enumerate(group, start=1):
        k = slot.dim
        if k == 1:
            continue
        ubead = U.bead_images[slot.u_bead]
        interval = list(range(w[s - 1], w[s] + 1))
        step = {'bead': bead, 'slot': s}
        if s == 1 or s == a:
            kind = 'overlap' if s == 1 else 'overlap-dual'
            union = sorted(set(verts) | set(interval))
            pos = {v: p for p, v in enumerate(union)}
            C, count = _extend(X, len(union) - 1, [([pos[v] for v in interval], ubead),
                                                   ([pos[v] for v in verts], C)], kind, step)
            trace.append(MergeStep(bead, s, kind, (k, len(verts) - 1), count, str(C), interpretation=s != 1))
            verts = union
            continue
        tail = [v for v in verts if v >= w[s - 1]]
        F = X.restrict(C, [verts.index(v) for v in tail])
        g_verts = sorted(set(tail) | set(interval))
        pos = {v: p for p, v in enumerate(g_verts)}
        G, count = _extend(X, len(g_verts) - 1, [([pos[v] for v in interval], ubead),
                                                 ([pos[v] for v in tail], F)], 'overlap', step)
        trace.append(MergeStep(bead, s, 'overlap', (k, len(tail) - 1), count, str(G)))
        union = sorted(set(verts) | set(interval))
        pos = {v: p for p, v in enumerate(union)}
        C, count = _extend(X, len(union) - 1, [([pos[v] for v in verts], C),
                                               ([pos[v] for v in g_verts], G)], 'join', step)
        trace.append(MergeStep(bead, s, 'join', (len(verts) - 1, len(g_verts) - 1), count, str(C)))
        verts = union
    return C


def fill_by_search(horn: HornInHom, size_cap: Optional[int] = None) -> List[HomSimplex]:
    """Exhaustive fillers of ``horn`` in the hom-space truncated at ``size_cap`` vertices."""
    needed = max(f.shape.vertex_count for f in horn.faces if f is not None)
    size_cap = size_cap or needed
    if size_cap < needed:
        raise CapError(f"size cap {size_cap} is below the faces' {needed} vertices",
                       detail={'size_cap': size_cap, 'needed': needed})
    space = hom_space(horn.X, horn.x, horn.y, horn.n, size_cap)
    return space.find_fillers(horn.faces)


def fill_lambda21(horn: HornInHom) -> FillResult:
    """
    Fill a Λ²₁ horn (U in slot 0, T in slot 2) by thickening the beads of T
    with the beads of U.

    Each T-bead is first degenerated along the degenerate diagonals of U that
    fall inside it, then U-beads are glued onto its edges one at a time by
    extension problems in X. The filler's middle flag set is every slot
    boundary.

    Raises:
        DomainError: the horn is malformed
        NotQuasiCategoryError: a gluing step has no extension in X
        CapError: a gluing step exceeds the dimension cap of X
    """
    if horn.n != 2 or horn.missing != 1:
        raise DomainError("fill_lambda21 takes Λ²₁ horns")
    horn.check()
    X = horn.X
    U_face, T_face = horn.faces[0], horn.faces[2]
    T, U = T_face.map, U_face.map
    slots = _align(X, T, U)
    trace: List[MergeStep] = []
    dims, images, joins, middle = [], [], [0], {0}
    offset = 0
    for kind, t_bead, members in _pieces(slots):
        group = [slots[i] for i in members]
        if kind == 'single':
            dims.append(group[0].dim)
            images.append(U.bead_images[group[0].u_bead])
        else:
            images.append(_merge_bead(X, T.bead_images[t_bead], group, U, t_bead, trace))
            dims.append(sum(slot.dim for slot in group))
        for slot in group:
            offset += slot.dim
            middle.add(offset)
        joins.append(offset)
    total = offset + 1
    flag = Flag((tuple(joins), tuple(sorted(middle)), tuple(range(total))))
    candidate = tnd_quotient(X, NecklaceMap(Necklace(tuple(dims)), tuple(images), horn.x, horn.y), flag)
    if hom_face(X, candidate, 0) == U_face and hom_face(X, candidate, 2) == T_face:
        logger.debug("Λ²₁ filler %s after %d merges", candidate, len(trace))
        return FillResult(candidate, trace)
    logger.warning("bead merge produced %s, which does not fill the horn; searching instead", candidate)
    found = fill_by_search(horn, size_cap=U.shape.vertex_count + T.shape.vertex_count)
    if not found:
        raise NotQuasiCategoryError("Λ²₁ horn has no filler in the hom-space", certificate=horn.describe())
    return FillResult(found[0], trace, fallback=True, note='bead merge failed verification; exhaustive search used')


def fill_sphere_cosk3(sphere: SphereInHom) -> HomSimplex:
    """
    The unique filler of a sphere of dimension at least 4: the necklace of the
    inner faces with the flag assembled from faces 1 and 2.
    """
    n = sphere.n
    if n < 4:
        raise DomainError(f"spheres of dimension {n} need not have fillers; dimension 4 or more is required")
    if sphere.missing is not None:
        raise DomainError("every face of a sphere must be present")
    first, second = sphere.faces[1], sphere.faces[2]
    if first.map != second.map:
        raise DomainError("inner faces of a sphere must share their necklace")
    sets = first.flag.sets[:1] + (second.flag.sets[1],) + first.flag.sets[1:]
    try:
        filler = HomSimplex(first.map, Flag(sets))
    except DomainError as e:
        raise DomainError(f"sphere faces assemble to no flag: {e.message}")
    for i, face in enumerate(sphere.faces):
        if hom_face(sphere.X, filler, i) != face:
            raise DomainError(f"assembled filler fails at face {i}; the sphere is incompatible")
    return filler


@dataclass
class Certificate:
    """Why a horn or sphere has no filler: a pinned-necklace argument and an exhaustive search."""
    structural: bool
    argument: str
    candidates_checked: int
    exhaustive_fillers: Optional[int]
    size_cap: Optional[int]

    @property
    def unfillable(self) -> bool:
        return self.structural and not self.exhaustive_fillers

    def as_dict(self) -> Dict[str, Any]:
        return {
            'structural': self.structural,
            'argument': self.argument,
            'candidates_checked': self.candidates_checked,
            'exhaustive_fillers': self.exhaustive_fillers,
            'size_cap': self.size_cap,
            'unfillable': self.unfillable,
        }


def _subsets_between(low: Sequence[int], high: Sequence[int]):
    free = [v for v in high if v not in set(low)]
    for mask in range(1 << len(free)):
        yield tuple(sorted(set(low) | {v for b, v in enumerate(free) if mask >> b & 1}))


def pinned_candidates(horn: HornInHom) -> Tuple[int, List[HomSimplex]]:
    """
    Every possible filler shares its necklace with a present inner face;
    try each flag that face allows.

    Returns:
        (candidates tried, candidates whose present faces all match)
    """
    inner = [i for i in range(1, horn.n) if horn.faces[i] is not None]
    if not inner:
        raise DomainError("no inner face is present to pin the necklace")
    i = inner[0]
    face = horn.faces[i]
    sets = face.flag.sets
    tried, matching = 0, []
    for middle in _subsets_between(sets[i - 1], sets[i]):
        tried += 1
        candidate = HomSimplex(face.map, Flag(sets[:i] + (middle,) + sets[i:]))
        if all(hom_face(horn.X, candidate, j) == f for j, f in enumerate(horn.faces) if f is not None):
            matching.append(candidate)
    return tried, matching


def certify_unfillable(horn: HornInHom, size_cap: Optional[int] = None, exhaustive: bool = True) -> Certificate:
    tried, matching = pinned_candidates(horn)
    count = None
    if exhaustive:
        count = len(fill_by_search(horn, size_cap))
    return Certificate(not matching, 'inner faces share the necklace of the filler', tried, count,
                       size_cap or max(f.shape.vertex_count for f in horn.faces if f is not None))


def _split_horn(X: FinSSet, sigma: SimplexRef, tau: SimplexRef, J: Sequence[int]) -> HornInHom:
    n = sigma.dim
    x, y = X.vertex(sigma, 0), X.vertex(sigma, n)
    everything = tuple(range(n + 1))
    J = tuple(sorted(set(J)))
    whole = Necklace((n,))
    pieces = Necklace(tuple(b - a for a, b in zip(J, J[1:])))
    split_images = tuple(X.restrict(sigma, range(a, b + 1)) for a, b in zip(J, J[1:]))
    faces = (
        tnd_quotient(X, NecklaceMap(pieces, split_images, x, y), Flag((J, everything, everything))),
        None,
        tnd_quotient(X, NecklaceMap(whole, (sigma,), x, y), Flag(((0, n), J, everything))),
        tnd_quotient(X, NecklaceMap(whole, (tau,), x, y), Flag(((0, n), J, everything))),
    )
    horn = HornInHom(X, x, y, 3, 1, faces)
    horn.check()
    return horn


def _distinct_pair(X: FinSSet, sigma: SimplexRef, tau: SimplexRef) -> Tuple[SimplexRef, SimplexRef]:
    if sigma == tau:
        raise DomainError("σ and τ must be distinct")
    if sigma.dim != tau.dim:
        raise DomainError("σ and τ must have the same dimension")
    if tau.word:
        sigma, tau = tau, sigma
    if tau.word:
        raise DomainError("one of σ and τ must be non-degenerate")
    return sigma, tau


def construct_badex_horn(X: FinSSet, sigma: SimplexRef, tau: SimplexRef, J: Sequence[int]) -> HornInHom:
    """
    An unfillable Λ³₁ horn in ℭX(x, y) from two distinct n-simplices with the
    same boundary, n >= 3.

    ``J`` must be a proper vertex set holding 0, n and at least one more vertex.
    """
    sigma, tau = _distinct_pair(X, sigma, tau)
    n = sigma.dim
    if n < 3:
        raise DomainError("distinct simplices with equal boundary give a horn from dimension 3 on")
    if any(X.face(sigma, i) != X.face(tau, i) for i in range(n + 1)):
        raise DomainError("σ and τ do not share their boundary")
    J = set(J)
    if not {0, n} <= J or len(J) < 3 or len(J) > n or not J <= set(range(n + 1)):
        raise DomainError(f"J = {sorted(J)} must be a proper vertex set with 0, {n} and another vertex")
    return _split_horn(X, sigma, tau, sorted(J))


def construct_lowdim_horn(X: FinSSet, sigma: SimplexRef, tau: SimplexRef, dual: bool = False) -> HornInHom:
    """
    An unfillable Λ³₁ horn from distinct 3-simplices agreeing on d₀ and d₂
    (J = {0,1,3}), or with ``dual`` on d₁ and d₃ (J = {0,2,3}).
    """
    sigma, tau = _distinct_pair(X, sigma, tau)
    if sigma.dim != 3:
        raise DomainError("construct_lowdim_horn takes 3-simplices")
    shared = (1, 3) if dual else (0, 2)
    for i in shared:
        if X.face(sigma, i) != X.face(tau, i):
            raise DomainError(f"σ and τ differ on face d{i}")
    return _split_horn(X, sigma, tau, (0, 2, 3) if dual else (0, 1, 3))


def lowdim_pair_from_triangles(X: FinSSet, alpha: SimplexRef, beta: SimplexRef) -> Tuple[SimplexRef, SimplexRef]:
    """
    From distinct triangles with equal d₀ and d₂ build σ = s₂α and τ, a filler
    of the Λ³₁ horn (s₁d₀α, ·, α, β); they agree on d₀ and d₂.
    """
    if alpha == beta or alpha.dim != 2 or beta.dim != 2:
        raise DomainError("need two distinct 2-simplices")
    if X.face(alpha, 0) != X.face(beta, 0) or X.face(alpha, 2) != X.face(beta, 2):
        raise DomainError("the triangles must agree on d₀ and d₂")
    sigma = X.degeneracy(alpha, 2)
    horn = [X.degeneracy(X.face(alpha, 0), 1), None, alpha, beta]
    fillers = find_fillers(X, horn)
    if not fillers:
        raise NotQuasiCategoryError("a Λ³₁ horn has no filler", certificate={'faces': family_to_dict(horn)})
    return sigma, fillers[0]


@dataclass
class DetectResult:
    kind: str
    case: str
    category: Optional[FinCategory] = None
    horn: Optional[HornInHom] = None
    certificate: Optional[Certificate] = None
    pair: Tuple[str, ...] = ()

    def as_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.kind,
            'case': self.case,
            'category': self.category.as_dict() if self.category else None,
            'horn': self.horn.describe() if self.horn else None,
            'certificate': self.certificate.as_dict() if self.certificate else None,
            'pair': list(self.pair),
        }


def _from_pair(X: FinSSet, sigma: SimplexRef, tau: SimplexRef) -> Tuple[HornInHom, str]:
    n = sigma.dim
    if n >= 3:
        return construct_badex_horn(X, sigma, tau, (0, 1, n)), f'distinct {n}-simplices with equal boundary'
    if n == 2:
        first, second = lowdim_pair_from_triangles(X, sigma, tau)
        return construct_lowdim_horn(X, first, second), 'distinct triangles with equal boundary'
    raise CapError("distinct simplices with equal boundary below dimension 2 give no horn")


def detect_nerve(X: FinSSet, up_to: int, size_cap: Optional[int] = None, jobs: int = 1) -> DetectResult:
    """
    Either recover the category X is the nerve of, or exhibit an unfillable
    Λ³₁ horn in one of the hom-spaces of ℭX.

    Raises:
        NotQuasiCategoryError: X has an unfillable inner horn
        CapError: the caps are too small to run any of the cases
    """
    qcat = is_quasicategory(X, up_to, jobs=jobs)
    if not qcat.ok:
        raise NotQuasiCategoryError("detect_nerve needs a quasi-category", certificate=qcat.as_dict())
    report = is_nerve_like(X, up_to)
    if report.ok:
        return DetectResult('nerve', 'nerve-like', category=report.category)
    cosk = report.coskeletal
    if not cosk.ok:
        sphere = list(cosk.sphere)
        if len(cosk.fillers) > 1:
            horn, case = _from_pair(X, cosk.fillers[0], cosk.fillers[1])
            pair = (str(cosk.fillers[0]), str(cosk.fillers[1]))
        else:
            k = len(sphere) - 1
            horn_faces = sphere[:1] + [None] + sphere[2:]
            fillers = find_fillers(X, horn_faces)
            if not fillers:
                raise NotQuasiCategoryError("a Λ¹ horn of an unfilled sphere has no filler",
                                           certificate={'faces': family_to_dict(horn_faces)})
            other = X.face(fillers[0], 1)
            horn, case = _from_pair(X, other, sphere[1])
            case = f'unfilled {k}-sphere, then ' + case
            pair = (str(other), str(sphere[1]))
    else:
        fillers = report.fillers
        n, k = len(report.horn) - 1, report.missing
        pair = (str(fillers[0]), str(fillers[1]))
        if n == 2:
            first, second = lowdim_pair_from_triangles(X, fillers[0], fillers[1])
            horn = construct_lowdim_horn(X, first, second)
        else:
            horn = construct_lowdim_horn(X, fillers[0], fillers[1], dual=(k == 2))
        case = f'non-unique Λ^{n}_{k} fillers'
    logger.info("counterexample found: %s", case)
    return DetectResult('counterexample', case, horn=horn, certificate=certify_unfillable(horn, size_cap), pair=pair)


@dataclass
class OuterHornResult:
    horns: Dict[str, HornInHom]
    certificates: Dict[str, Certificate]

    def as_dict(self) -> Dict[str, Any]:
        return {
            name: {'horn': self.horns[name].describe(), 'certificate': self.certificates[name].as_dict()}
            for name in self.horns
        }


def outer_horn_counterexample(X: FinSSet, s: HomSimplex, size_cap: Optional[int] = None) -> OuterHornResult:
    """
    Swap the inner face of a non-degenerate 2-simplex into an outer slot.

    A filler would have the necklace of the remaining inner face, which is
    strictly lighter than the necklace of ``s``; faces never get heavier.
    """
    if s.n != 2 or s.is_degenerate():
        raise DomainError("outer horns are built from non-degenerate 2-simplices")
    d0, d1, d2 = (hom_face(X, s, i) for i in range(3))
    x, y = s.map.source, s.map.target
    horns = {
        'Λ²₀': HornInHom(X, x, y, 2, 0, (None, d2, d1)),
        'Λ²₂': HornInHom(X, x, y, 2, 2, (d1, d0, None)),
    }
    certificates = {}
    for name, horn in horns.items():
        horn.check()
        inner = horn.faces[1]
        outer = d1
        lighter = necklace_weight(inner.shape) < necklace_weight(outer.shape)
        count = len(fill_by_search(horn, size_cap))
        certificates[name] = Certificate(lighter, 'filler necklace is lighter than the required outer face',
                                         0, count, size_cap or s.shape.vertex_count)
    return OuterHornResult(horns, certificates)
