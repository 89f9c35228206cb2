"""
Subcommands of ``manage.py rigid``: load inputs, run one computation and
wrap the outcome in a report envelope.
"""
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import orjson
from django.conf import settings

from simplicial.serializers import (
    FinCategorySerializer,
    FinSSetSerializer,
    HornFileSerializer,
    validated,
)
from utils.response.response_format import (
    cap_error_report,
    input_error_report,
    negative_report,
    success_report,
)

from .errors import CapError, DomainError, InputError, NotQuasiCategoryError
from .fixtures import FIXTURES, Fixture, category_by_name, demo_fixture
from .necklace import hom_face, hom_space
from .resolution import (
    DiscreteCategory,
    SimpCategory,
    free_resolution,
    hc_nerve,
    iso_check,
    rigid_delta,
    rigidify_nerve,
)
from .sset import FinCategory, FinSSet, is_coskeletal, is_quasicategory, nerve, shape
from .theorems import (
    HornInHom,
    certify_unfillable,
    construct_badex_horn,
    detect_nerve,
    fill_by_search,
    fill_lambda21,
    fill_sphere_cosk3,
)

logger = logging.getLogger(__name__)


def default_caps() -> Dict[str, int]:
    caps = settings.RIGIDIFICATION
    return {
        'dim_cap': caps['DIM_CAP'],
        'size_cap': caps['SIZE_CAP'],
        'budget': caps['BUDGET'],
        'seed': caps['SEED'],
        'jobs': caps['JOBS'],
    }


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    dim_cap: int = 3
    size_cap: int = 6
    horn_dim: Optional[int] = None
    budget: int = 200000
    seed: int = 0
    jobs: int = 1
    format: str = 'human'
    output: Optional[str] = None

    @property
    def nerve_dim(self) -> int:
        return max(self.dim_cap, self.size_cap - 1, self.horn_dim or 0)


@dataclass
class RunResult:
    report: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    export: Optional[Dict[str, Any]] = None

    @property
    def exit_code(self) -> int:
        return self.report['exit_code']


def load_json(path: str) -> Any:
    try:
        with open(path, 'rb') as handle:
            return orjson.loads(handle.read())
    except OSError as e:
        raise InputError(f"cannot read {path}", errors={'path': [str(e)]})
    except orjson.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON",
                         errors={'path': [f"line {e.lineno} column {e.colno}: {e.msg}"]})


def load_category(source: str) -> FinCategory:
    """A category file, ``[n]`` or a built-in name."""
    if os.path.isfile(source):
        return validated(FinCategorySerializer(data=load_json(source)), f'category {source}')
    return category_by_name(source)


def load_sset(source: str, config: RunConfig) -> FinSSet:
    """
    A simplicial-set file, a category file (its nerve), ``simplex:n``,
    ``demo:<name>`` or a built-in category name (its nerve).
    """
    match = re.fullmatch(r'simplex:(\d+)', source)
    if match:
        return shape('simplex', int(match.group(1))).sset
    if source.startswith('demo:'):
        return demo_fixture(source[len('demo:'):]).X
    if os.path.isfile(source):
        data = load_json(source)
        if isinstance(data, dict) and 'morphisms' in data:
            category = validated(FinCategorySerializer(data=data), f'category {source}')
            return nerve(category, config.nerve_dim)
        return validated(FinSSetSerializer(data=data), f'simplicial set {source}')
    return nerve(category_by_name(source), config.nerve_dim)


def _inputs(config: RunConfig, count: int, names: str) -> List[str]:
    if len(config.inputs) < count:
        raise InputError(f"{config.command} expects {names}",
                         errors={'inputs': [f"expected {count} positional arguments, got {len(config.inputs)}"]})
    return config.inputs


def _natural(value: str, name: str) -> int:
    if not value.isdigit():
        raise InputError(f"{name} must be a natural number", errors={name: [f"got {value!r}"]})
    return int(value)


def _counts(H: FinSSet, up_to: int) -> Dict[str, Dict[int, int]]:
    return {
        'nondegenerate': {k: H.nondeg_count(k) for k in range(up_to + 1)},
        'all': {k: len(H.simplices(k)) for k in range(up_to + 1)},
    }


def run_hom(config: RunConfig) -> RunResult:
    source, x, y = _inputs(config, 3, 'X x y')[:3]
    X = load_sset(source, config)
    space = hom_space(X, x, y, config.dim_cap, config.size_cap)
    counts = _counts(space.sset, config.dim_cap)
    export = {'hom': FinSSetSerializer(space.sset).data, 'index': space.sidecar()}
    data = {'counts': counts, 'size_cap_reached': space.size_cap_reached, **export}
    lines = [f"ℭ{X.name or source}({x}, {y})"]
    for k in range(config.dim_cap + 1):
        lines.append(f"  dim {k}: {counts['nondegenerate'][k]} non-degenerate, {counts['all'][k]} in all")
    if space.size_cap_reached:
        lines.append(f"  truncated at {config.size_cap} necklace vertices")
    return RunResult(success_report(data, 'hom-space computed'), lines, export)


def run_check_qcat(config: RunConfig) -> RunResult:
    X = load_sset(_inputs(config, 1, 'X')[0], config)
    up_to = config.horn_dim or config.dim_cap
    report = is_quasicategory(X, up_to, jobs=config.jobs)
    lines = [f"{report.horns_checked} inner horns checked up to dimension {up_to}"]
    if report.ok:
        lines.append("quasi-category" + (" (truncated)" if report.truncated else ""))
        return RunResult(success_report(report.as_dict(), 'quasi-category'), lines)
    lines.append(f"unfillable Λ^{len(report.horn) - 1}_{report.missing}")
    return RunResult(negative_report(report.as_dict(), 'not a quasi-category'), lines)


def run_check_cosk(config: RunConfig) -> RunResult:
    source, n = _inputs(config, 2, 'X n')[:2]
    X = load_sset(source, config)
    n = _natural(n, 'n')
    caps = settings.RIGIDIFICATION
    report = is_coskeletal(X, n, config.horn_dim or config.dim_cap, jobs=config.jobs, seed=config.seed,
                           sample=caps['SPHERE_SAMPLE'], limit=caps['SPHERE_LIMIT'])
    lines = [f"{report.spheres_checked} spheres checked"]
    if report.sampled:
        lines.append(f"sampled dimensions {report.sampled} with seed {config.seed}")
    if report.ok:
        lines.append(f"{n}-coskeletal" + (" (truncated)" if report.truncated else ""))
        return RunResult(success_report(report.as_dict(), f'{n}-coskeletal'), lines)
    lines.append(report.failure)
    return RunResult(negative_report(report.as_dict(), f'not {n}-coskeletal'), lines)


def run_fill_horn(config: RunConfig) -> RunResult:
    path = _inputs(config, 1, 'a horn file')[0]
    data = load_json(path)
    family: HornInHom = validated(HornFileSerializer(data=data), f'horn file {path}')
    described = family.describe()
    if family.missing is None:
        if family.n >= 4:
            filler = fill_sphere_cosk3(family)
            return RunResult(success_report({'family': described, 'filler': filler.describe()}, 'sphere filled'),
                             [f"filler {filler}"])
        space = hom_space(family.X, family.x, family.y, family.n, config.size_cap)
        found = space.find_fillers(family.faces)
    elif family.n == 2 and family.missing == 1:
        result = fill_lambda21(family)
        lines = [f"{step.kind} at bead {step.bead}: {step.chosen}" for step in result.trace]
        lines.append(f"filler {result.filler}")
        return RunResult(success_report({'family': described, **result.as_dict()}, 'Λ²₁ horn filled'), lines)
    else:
        found = fill_by_search(family, config.size_cap)
    data = {'family': described, 'fillers': [h.describe() for h in found]}
    if found:
        return RunResult(success_report(data, f'{len(found)} filler(s)'), [f"filler {h}" for h in found])
    if family.missing is not None and any(family.faces[i] is not None for i in range(1, family.n)):
        data['certificate'] = certify_unfillable(family, config.size_cap).as_dict()
    return RunResult(negative_report(data, 'no filler'), ["no filler"])


def run_resolve(config: RunConfig) -> RunResult:
    A = load_category(_inputs(config, 1, 'a category')[0])
    R = free_resolution(A, config.dim_cap, config.size_cap)
    export = R.as_dict()
    lines = [f"free resolution of {A.name}"]
    for (x, y), H in sorted(R.homs.items()):
        if not H.dims:
            continue
        counts = [H.nondeg_count(k) for k in range(config.dim_cap + 1)]
        lines.append(f"  {x} -> {y}: {counts}")
        lines.extend(f"    {sid}" for sid in H.nondeg.get(1, [])[:5])
    return RunResult(success_report(export, 'free resolution computed'), lines, export)


def run_rigid_delta(config: RunConfig) -> RunResult:
    n = _natural(_inputs(config, 1, 'n')[0], 'n')
    C = rigid_delta(n)
    counts = {f'{x}->{y}': _counts(H, n) for (x, y), H in C.homs.items()}
    export = C.as_dict(compose_dim=0)
    lines = [f"ℭΔ{n}"]
    for (x, y), H in C.homs.items():
        row = counts[f'{x}->{y}']
        lines.append(f"  {x} -> {y}: " + ' / '.join(str(row['all'][k]) for k in range(min(n, 2) + 1)))
    return RunResult(success_report({'counts': counts, **export}, 'cube model computed'), lines, export)


def run_iso(config: RunConfig) -> RunResult:
    A = load_category(_inputs(config, 1, 'a category')[0])
    R = free_resolution(A, config.dim_cap, config.size_cap)
    S = rigidify_nerve(A, config.dim_cap, config.size_cap)
    reports = {'word-to-necklace': iso_check(R, S, config.dim_cap)}
    match = re.fullmatch(r'\[(\d+)\]', A.name)
    if match and config.size_cap > int(match.group(1)):
        reports['necklace-to-cube'] = iso_check(S, rigid_delta(int(match.group(1)), config.dim_cap), config.dim_cap)
    data = {name: report.as_dict() for name, report in reports.items()}
    lines = []
    for name, report in reports.items():
        lines.append(f"{name}: {'isomorphic' if report.ok else 'NOT isomorphic'} {report.checked}")
        lines.extend(f"  {left}  <->  {right}" for left, right in report.table[:40])
        if report.certificate:
            lines.append(f"  first failure: {report.certificate}")
    if all(report.ok for report in reports.values()):
        return RunResult(success_report(data, 'isomorphic'), lines)
    return RunResult(negative_report(data, 'not isomorphic'), lines)


def _simp_category(specs: List[str], config: RunConfig) -> SimpCategory:
    target = specs[0]
    match = re.fullmatch(r'cube:(\d+)', target)
    if match:
        return rigid_delta(int(match.group(1)), config.dim_cap)
    A = load_category(target)
    kind = specs[1] if len(specs) > 1 else 'discrete'
    if kind == 'discrete':
        return DiscreteCategory(A, config.dim_cap)
    if kind == 'resolution':
        return free_resolution(A, config.dim_cap, config.size_cap)
    if kind == 'rigidification':
        return rigidify_nerve(A, config.dim_cap, config.size_cap)
    raise InputError(f"unknown enrichment {kind!r}",
                     errors={'inputs': ["expected discrete, resolution or rigidification"]})


def run_hc_nerve(config: RunConfig) -> RunResult:
    C = _simp_category(_inputs(config, 1, 'a simplicial category'), config)
    n_cap = min(config.dim_cap, settings.RIGIDIFICATION['HC_NERVE_MAX_DIM'])
    N = hc_nerve(C, n_cap, config.budget)
    counts = {k: N.nondeg_count(k) for k in range(n_cap + 1)}
    data = {'counts': counts, 'nerve': FinSSetSerializer(N).data}
    lines = [f"coherent nerve of {C.name}: {counts}"]
    if isinstance(C, DiscreteCategory):
        ordinary = nerve(C.A, n_cap)
        data['matches_nerve'] = all(ordinary.nondeg_count(k) == counts[k] for k in counts)
        lines.append("agrees with the ordinary nerve" if data['matches_nerve'] else "differs from the ordinary nerve")
    return RunResult(success_report(data, 'coherent nerve computed'), lines, data['nerve'])


def run_detect_nerve(config: RunConfig) -> RunResult:
    X = load_sset(_inputs(config, 1, 'X')[0], config)
    result = detect_nerve(X, config.horn_dim or config.dim_cap, config.size_cap, jobs=config.jobs)
    if result.kind == 'nerve':
        return RunResult(success_report(result.as_dict(), 'nerve of a category'),
                         [f"nerve of a category with {len(result.category.morphisms)} morphisms"])
    lines = [f"not a nerve: {result.case}", f"unfillable Λ³₁ horn in ℭX{tuple(result.horn.describe()['hom'])}"]
    return RunResult(negative_report(result.as_dict(), 'not a nerve'), lines)


def _demo(fixture: Fixture, config: RunConfig) -> Tuple[bool, Dict[str, Any], List[str]]:
    name = fixture.name
    lines = [f"expected: {fixture.expected}"]
    if name == 'cosk-sphere':
        sphere = fixture.sphere
        sphere.check()
        lines.extend(f"  d{i}: {face.flag}" for i, face in enumerate(sphere.faces))
        found = fixture.space.find_fillers(sphere.faces)
        lines.append("no filler: confirmed" if not found else f"{len(found)} filler(s) found")
        return not found, {'sphere': sphere.describe(), 'fillers': len(found)}, lines
    if name == 'rs-horns':
        data, ok = {}, True
        for label, horn in fixture.horns.items():
            horn.check()
            certificate = certify_unfillable(horn, fixture.space.size_cap)
            data[label] = {'horn': horn.describe(), 'certificate': certificate.as_dict()}
            ok = ok and certificate.unfillable
            lines.append(f"  {label}: {'no filler' if certificate.unfillable else 'filled'}")
        return ok, data, lines
    if name in ('two-triangle', 'two-tetrahedra'):
        X = fixture.X
        sigma, tau = fixture.extra['pair']
        if name == 'two-tetrahedra':
            horn = construct_badex_horn(X, sigma, tau, (0, 1, 3))
            certificate = certify_unfillable(horn, config.size_cap)
            lines.append(f"  Λ³₁ in ℭX{tuple(horn.describe()['hom'])}: "
                         f"{'no filler' if certificate.unfillable else 'filled'}")
            return certificate.unfillable, {'horn': horn.describe(), 'certificate': certificate.as_dict()}, lines
        result = detect_nerve(X, 3, config.size_cap, jobs=config.jobs)
        ok = result.kind == 'counterexample' and result.certificate.unfillable
        lines.append(f"  {result.case}: {'unfillable horn confirmed' if ok else result.kind}")
        return ok, result.as_dict(), lines
    if name == 'worked-example':
        simplex = fixture.extra['simplex']
        ok, data = True, {}
        for i, expected in fixture.extra['faces'].items():
            computed = hom_face(fixture.X, simplex, i)
            ok = ok and computed == expected
            data[f'd{i}'] = {'computed': computed.describe(), 'expected': expected.describe()}
            lines.append(f"  d{i} = {computed.shape}, {computed.flag}" + ("" if computed == expected else "  MISMATCH"))
        return ok, data, lines
    counts = fixture.space.counts()
    ok = counts == fixture.extra['counts']
    lines.append(f"  computed {counts}")
    return ok, {'counts': counts, 'expected': fixture.extra['counts']}, lines


def run_demo(config: RunConfig) -> RunResult:
    name = _inputs(config, 1, 'a demo name')[0]
    if name not in FIXTURES:
        raise InputError(f"unknown demo {name!r}", errors={'inputs': [f"expected one of {sorted(FIXTURES)}"]})
    fixture = demo_fixture(name)
    ok, data, lines = _demo(fixture, config)
    data = {'demo': name, 'expected': fixture.expected, 'matches': ok, 'result': data}
    if ok:
        return RunResult(success_report(data, 'outcome matches'), lines)
    return RunResult(negative_report(data, 'outcome differs from the expected one'), lines)


COMMANDS: Dict[str, Callable[[RunConfig], RunResult]] = {
    'hom': run_hom,
    'check-qcat': run_check_qcat,
    'check-cosk': run_check_cosk,
    'fill-horn': run_fill_horn,
    'resolve': run_resolve,
    'rigid-delta': run_rigid_delta,
    'iso': run_iso,
    'hc-nerve': run_hc_nerve,
    'detect-nerve': run_detect_nerve,
    'demo': run_demo,
}


def run(config: RunConfig) -> RunResult:
    """Run one subcommand; every library error becomes a report with its exit code."""
    logger.info("running %s on %s", config.command, config.inputs)
    try:
        return COMMANDS[config.command](config)
    except InputError as e:
        return RunResult(input_error_report(e.message, e.errors), [e.message])
    except NotQuasiCategoryError as e:
        return RunResult(negative_report({'certificate': e.certificate}, e.message), [e.message])
    except CapError as e:
        return RunResult(cap_error_report(e.message, e.detail), [e.message])
    except DomainError as e:
        return RunResult(input_error_report(e.message, e.detail), [e.message])
