from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from simplicial.helpers.errors import DomainError, NotQuasiCategoryError
from simplicial.helpers.fixtures import (
    demo_fixture,
    five_object_category,
    non_thin_poset,
    poset_category,
    rs_category,
    two_triangle_sset,
)
from simplicial.helpers.necklace import Flag, HomSimplex, Necklace, NecklaceMap, hom_face, hom_space
from simplicial.helpers.sset import FinSSet, find_fillers, iter_horns, iter_spheres, nerve, sample_spheres, shape
from simplicial.helpers.theorems import (
    HornInHom,
    SphereInHom,
    certify_unfillable,
    construct_badex_horn,
    construct_lowdim_horn,
    detect_nerve,
    fill_by_search,
    fill_lambda21,
    fill_sphere_cosk3,
    lowdim_pair_from_triangles,
    outer_horn_counterexample,
)


def top_simplex(n: int, *middle) -> HomSimplex:
    X = shape('simplex', n).sset
    whole = NecklaceMap(Necklace((n,)), (X.ref(','.join(map(str, range(n + 1)))),), '0', str(n))
    return HomSimplex(whole, Flag.of({0, n}, *middle, set(range(n + 1))))


class LambdaTwoOneTest(SimpleTestCase):

    def fill_every_horn(self, X, x, y, size_cap=4):
        space = hom_space(X, x, y, 2, size_cap)
        filled = 0
        for family in iter_horns(space.sset, 2, 1):
            faces = tuple(None if ref is None else space.simplex(ref) for ref in family)
            result = fill_lambda21(HornInHom(X, x, y, 2, 1, faces))
            self.assertFalse(result.fallback, (x, y, result.note))
            self.assertEqual(hom_face(X, result.filler, 0), faces[0])
            self.assertEqual(hom_face(X, result.filler, 2), faces[2])
            filled += 1
        return filled

    def test_every_horn_in_a_nerve_is_filled(self):
        X = nerve(poset_category(3), 4)
        space = hom_space(X, '0', '3', 2, 4)
        filled = 0
        for family in iter_horns(space.sset, 2, 1):
            faces = tuple(None if ref is None else space.simplex(ref) for ref in family)
            horn = HornInHom(X, '0', '3', 2, 1, faces)
            result = fill_lambda21(horn)
            self.assertEqual(hom_face(X, result.filler, 0), faces[0])
            self.assertEqual(hom_face(X, result.filler, 2), faces[2])
            self.assertIn(result.filler, fill_by_search(horn, 4))
            filled += 1
        self.assertGreater(filled, 0)

    def test_horns_over_the_fixture_categories(self):
        cases = [(nerve(rs_category(), 4), x, y) for x in 'xy' for y in 'xy']
        cases += [
            (nerve(non_thin_poset(), 4), 'a', 'b'),
            (nerve(five_object_category(), 4), 'a', 'e'),
            (nerve(poset_category(4), 4), '0', '4'),
            (nerve(poset_category(5), 4), '0', '5'),
            (two_triangle_sset(), 'x', 'z'),
        ]
        filled = 0
        for X, x, y in cases:
            with self.subTest(sset=X.name, x=x, y=y):
                filled += self.fill_every_horn(X, x, y)
        self.assertGreater(filled, 0)

    def test_only_lambda_two_one(self):
        fixture = demo_fixture('rs-horns')
        with self.assertRaises(DomainError):
            fill_lambda21(fixture.horns['Λ³₁'])

    def test_face_slots_are_checked(self):
        edge = top_simplex(2)
        X = shape('simplex', 2).sset
        with self.assertRaises(DomainError):
            HornInHom(X, '0', '2', 2, 1, (edge, None))
        with self.assertRaises(DomainError):
            HornInHom(X, '0', '2', 2, 1, (edge, edge, edge))


class SphereTest(SimpleTestCase):

    def test_three_sphere_without_filler(self):
        fixture = demo_fixture('cosk-sphere')
        sphere = fixture.sphere
        self.assertTrue(sphere.check())
        self.assertEqual(fixture.space.find_fillers(sphere.faces), [])
        with self.assertRaises(DomainError):
            fill_sphere_cosk3(sphere)

    def test_four_sphere_has_its_filler(self):
        X = shape('simplex', 5).sset
        simplex = top_simplex(5, {0, 1, 5}, {0, 1, 2, 5}, {0, 1, 2, 3, 5})
        sphere = SphereInHom(X, '0', '5', 4, [hom_face(X, simplex, i) for i in range(5)])
        self.assertTrue(sphere.check())
        self.assertEqual(fill_sphere_cosk3(sphere), simplex)

    def test_every_four_sphere_of_a_four_cube(self):
        X = shape('simplex', 5).sset
        space = hom_space(X, '0', '5', 4, 6)
        checked = 0
        for family in iter_spheres(space.sset, 4):
            sphere = SphereInHom(X, '0', '5', 4, [space.simplex(ref) for ref in family])
            filler = fill_sphere_cosk3(sphere)
            self.assertEqual(space.find_fillers(sphere.faces), [filler])
            checked += 1
        # weakly increasing 5-chains in the poset of subsets of {1,2,3,4}
        self.assertEqual(checked, 6 ** 4)


class HighDimensionTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.X = shape('simplex', 7).sset
        cls.space = hom_space(cls.X, '0', '7', 5, 8)

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.data())
    def test_five_horns_have_one_filler(self, data):
        Y = self.space.sset
        simplex = data.draw(st.sampled_from(Y.simplices(5)))
        k = data.draw(st.integers(min_value=0, max_value=5))
        horn = [None if i == k else Y.face(simplex, i) for i in range(6)]
        self.assertEqual(find_fillers(Y, horn), [simplex])

    def test_sampled_five_spheres(self):
        X = shape('simplex', 6).sset
        space = hom_space(X, '0', '6', 5, 7)
        spheres = sample_spheres(space.sset, 5, 25, seed=5, limit=1000)
        self.assertEqual(len(spheres), 25)
        for family in spheres:
            sphere = SphereInHom(X, '0', '6', 5, [space.simplex(ref) for ref in family])
            filler = fill_sphere_cosk3(sphere)
            self.assertEqual(space.find_fillers(sphere.faces), [filler])


class CertificateTest(SimpleTestCase):

    def test_rs_horns_are_unfillable(self):
        fixture = demo_fixture('rs-horns')
        for label, horn in fixture.horns.items():
            horn.check()
            certificate = certify_unfillable(horn, fixture.space.size_cap)
            self.assertTrue(certificate.unfillable, label)
            self.assertEqual(certificate.exhaustive_fillers, 0, label)

    def test_outer_horns_of_a_two_simplex(self):
        X = shape('simplex', 3).sset
        s = top_simplex(3, {0, 1, 3})
        result = outer_horn_counterexample(X, s)
        self.assertEqual(set(result.certificates), {'Λ²₀', 'Λ²₂'})
        for name, certificate in result.certificates.items():
            self.assertTrue(certificate.unfillable, name)

    def test_outer_horns_need_a_nondegenerate_simplex(self):
        X = shape('simplex', 3).sset
        s = top_simplex(3)
        with self.assertRaises(DomainError):
            outer_horn_counterexample(X, s)


class NerveDetectionTest(SimpleTestCase):

    def test_two_tetrahedra_give_an_unfillable_horn(self):
        fixture = demo_fixture('two-tetrahedra')
        sigma, tau = fixture.extra['pair']
        horn = construct_badex_horn(fixture.X, sigma, tau, (0, 1, 3))
        self.assertEqual(horn.missing, 1)
        self.assertTrue(certify_unfillable(horn).unfillable)

    def test_badex_vertex_set_must_be_proper(self):
        fixture = demo_fixture('two-tetrahedra')
        sigma, tau = fixture.extra['pair']
        for J in ((0, 3), (0, 1, 2, 3), (1, 2, 3)):
            with self.assertRaises(DomainError):
                construct_badex_horn(fixture.X, sigma, tau, J)
        with self.assertRaises(DomainError):
            construct_badex_horn(fixture.X, sigma, sigma, (0, 1, 3))

    def test_triangles_with_equal_boundary(self):
        fixture = demo_fixture('two-triangle')
        X = fixture.X
        sigma, tau = lowdim_pair_from_triangles(X, *fixture.extra['pair'])
        self.assertEqual(X.face(sigma, 0), X.face(tau, 0))
        self.assertEqual(X.face(sigma, 2), X.face(tau, 2))
        horn = construct_lowdim_horn(X, sigma, tau)
        self.assertTrue(horn.check())
        certificate = certify_unfillable(horn)
        self.assertTrue(certificate.unfillable)
        self.assertEqual(certificate.exhaustive_fillers, 0)

    def test_nerve_is_recognised(self):
        result = detect_nerve(nerve(poset_category(2), 4), 3)
        self.assertEqual(result.kind, 'nerve')
        self.assertIsNotNone(result.category.isomorphism(poset_category(2)))

    def test_nerves_of_the_fixture_categories(self):
        for A in (rs_category(), five_object_category()):
            with self.subTest(category=A.name):
                result = detect_nerve(nerve(A, 4), 3)
                self.assertEqual(result.kind, 'nerve')
                self.assertIsNotNone(result.category.isomorphism(A))

    def test_two_triangles_are_not_a_nerve(self):
        result = detect_nerve(demo_fixture('two-triangle').X, 3)
        self.assertEqual(result.kind, 'counterexample')
        self.assertTrue(result.certificate.unfillable)
        self.assertEqual(result.as_dict()['verdict'], 'counterexample')

    def test_detection_needs_a_quasicategory(self):
        X = FinSSet(2)
        a, b, c = X.add_simplex('a'), X.add_simplex('b'), X.add_simplex('c')
        X.add_simplex('f', [b, a])
        X.add_simplex('g', [c, b])
        with self.assertRaises(NotQuasiCategoryError):
            detect_nerve(X, 2)
