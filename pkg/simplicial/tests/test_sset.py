from django.test import SimpleTestCase

from simplicial.helpers.delta import DegeneracyWord
from simplicial.helpers.errors import CapError, DomainError
from simplicial.helpers.fixtures import five_object_category, non_thin_poset, poset_category, rs_category
from simplicial.helpers.sset import (
    FinSSet,
    SimplexRef,
    coskeletal_completion,
    extract_category,
    find_fillers,
    is_coskeletal,
    is_nerve_like,
    is_quasicategory,
    iter_spheres,
    nerve,
    sample_spheres,
    shape,
    solve_extension,
)


def path_of_two_edges() -> FinSSet:
    X = FinSSet(2, name='path')
    a, b, c = X.add_simplex('a'), X.add_simplex('b'), X.add_simplex('c')
    X.add_simplex('f', [b, a])
    X.add_simplex('g', [c, b])
    return X


class FinSSetTest(SimpleTestCase):

    def test_nerve_of_an_ordinal(self):
        X = nerve(poset_category(2), 3)
        self.assertEqual([X.nondeg_count(k) for k in range(4)], [3, 3, 1, 0])
        self.assertTrue(X.validate())
        triangle = X.ref('01|12')
        self.assertEqual(X.face(triangle, 0), X.ref('12'))
        self.assertEqual(X.face(triangle, 1), X.ref('02'))
        self.assertEqual(X.face(triangle, 2), X.ref('01'))

    def test_degenerate_names(self):
        X = nerve(poset_category(2), 3)
        edge = X.ref('01')
        s0 = X.degeneracy(edge, 0)
        self.assertEqual(str(s0), 's0(01)')
        self.assertEqual(X.face(s0, 0), edge)
        self.assertEqual(X.face(s0, 1), edge)
        self.assertEqual(X.face(s0, 2), X.degeneracy(X.ref('0'), 0))
        self.assertEqual(X.vertices(s0), ('0', '0', '1'))

    def test_simplicial_identities_on_every_simplex(self):
        X = shape('simplex', 4).sset
        for k in range(1, 5):
            for s in X.simplices(k):
                for j in range(k + 1):
                    for i in range(j):
                        if k >= 2:
                            self.assertEqual(X.face(X.face(s, j), i), X.face(X.face(s, i), j - 1))
                for i in range(k + 1):
                    self.assertEqual(X.face(X.degeneracy(s, i), i), s)
                    self.assertEqual(X.face(X.degeneracy(s, i), i + 1), s)

    def test_shapes(self):
        self.assertEqual(shape('boundary', 3).sset.nondeg_count(3), 0)
        self.assertEqual(shape('horn', 3, 1).sset.nondeg_count(2), 3)
        necklace = shape('spine_necklace', dims=(2, 1))
        self.assertEqual(necklace.generators, [(0, 1, 2), (2, 3)])
        overlap = shape('overlap', 2, 2)
        self.assertEqual(overlap.ambient_dim, 3)
        self.assertEqual(overlap.generators, [(0, 1, 2), (0, 2, 3)])

    def test_adding_a_simplex_with_unknown_faces_fails(self):
        X = FinSSet(1)
        X.add_simplex('a')
        with self.assertRaises(DomainError):
            X.add_simplex('e', [X.ref('a'), SimplexRef(DegeneracyWord(), 'b', 0)])


class ExtensionTest(SimpleTestCase):

    def test_horn_fillers_in_a_nerve_are_unique(self):
        X = nerve(poset_category(3), 3)
        fillers = find_fillers(X, [X.ref('12|23'), None, X.ref('01|13'), X.ref('01|12')])
        self.assertEqual(fillers, [X.ref('01|12|23')])

    def test_solve_extension_along_the_spine(self):
        X = nerve(poset_category(2), 2)
        spine = shape('spine_necklace', dims=(1, 1))
        found = solve_extension(X, spine, {'0,1': X.ref('01'), '1,2': X.ref('12')})
        self.assertEqual(found, [X.ref('01|12')])

    def test_incompatible_faces_are_rejected(self):
        X = nerve(poset_category(2), 2)
        with self.assertRaises(DomainError):
            find_fillers(X, [X.ref('01'), None, X.ref('12')])

    def test_filling_above_the_cap(self):
        X = nerve(poset_category(2), 1)
        with self.assertRaises(CapError):
            find_fillers(X, [X.ref('12'), None, X.ref('01')])


class QuasiCategoryTest(SimpleTestCase):

    def test_nerves_are_quasicategories_with_unique_fillers(self):
        for cat in (poset_category(2), rs_category(), non_thin_poset()):
            report = is_quasicategory(nerve(cat, 3), 3)
            self.assertTrue(report.ok, cat.name)
            self.assertTrue(report.unique_fillers, cat.name)

    def test_missing_composite(self):
        report = is_quasicategory(path_of_two_edges(), 2)
        self.assertFalse(report.ok)
        self.assertEqual(report.missing, 1)
        self.assertEqual(report.as_dict()['certificate']['fillers'], 0)

    def test_nerve_is_two_coskeletal(self):
        report = is_coskeletal(nerve(poset_category(3), 4), 2, 4)
        self.assertTrue(report.ok)
        self.assertGreater(report.spheres_checked, 0)

    def test_seeded_sphere_samples_repeat(self):
        X = nerve(poset_category(3), 4)
        everything = list(iter_spheres(X, 3))
        self.assertEqual(len(everything), 35)
        self.assertEqual(sample_spheres(X, 3, 4, seed=11, limit=1000), everything)
        sample = sample_spheres(X, 3, 4, seed=11, limit=10)
        self.assertEqual(len(sample), 4)
        self.assertEqual(sample, sample_spheres(X, 3, 4, seed=11, limit=10))
        for sphere in sample:
            self.assertIn(sphere, everything)

    def test_coskeletality_on_sampled_spheres(self):
        X = nerve(poset_category(3), 4)
        first = is_coskeletal(X, 2, 4, seed=11, sample=4, limit=10)
        second = is_coskeletal(X, 2, 4, seed=11, sample=4, limit=10)
        self.assertTrue(first.ok)
        self.assertEqual(first.sampled, [3, 4])
        self.assertEqual(first.spheres_checked, 8)
        self.assertEqual(first.as_dict(), second.as_dict())
        self.assertEqual(is_coskeletal(X, 2, 4).spheres_checked, 35 + 56)

    def test_completion_fills_the_composite(self):
        X = path_of_two_edges()
        X.add_simplex('h', [X.ref('c'), X.ref('a')])
        X.add_simplex('t', [X.ref('g'), X.ref('h'), X.ref('f')])
        completed = coskeletal_completion(X, 2, 3)
        self.assertTrue(is_coskeletal(completed, 2, 3).ok)
        self.assertTrue(is_quasicategory(completed, 3).ok)


class NerveDetectionTest(SimpleTestCase):

    def test_category_is_recovered(self):
        report = is_nerve_like(nerve(rs_category(), 4), 3)
        self.assertTrue(report.ok)
        self.assertIsNotNone(report.category.isomorphism(rs_category()))
        self.assertTrue(report.category.check())

    def test_extracted_category_of_an_ordinal(self):
        A = extract_category(nerve(poset_category(2), 3))
        self.assertEqual(len(A.morphisms), 6)
        self.assertIsNotNone(A.isomorphism(poset_category(2)))

    def test_low_caps_are_rejected(self):
        with self.assertRaises(DomainError):
            is_nerve_like(nerve(poset_category(1), 3), 2)

    def test_idempotent_on_a_chain(self):
        A = five_object_category()
        self.assertTrue(A.check())
        self.assertEqual(A.compose('p', 'p'), 'p')
        X = nerve(A, 3)
        self.assertTrue(is_quasicategory(X, 3).ok)
        self.assertIsNotNone(extract_category(X).isomorphism(A))
