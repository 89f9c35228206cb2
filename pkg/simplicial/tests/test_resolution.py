from django.test import SimpleTestCase

from simplicial.helpers.errors import BudgetError, DomainError
from simplicial.helpers.fixtures import (
    five_object_category,
    non_thin_poset,
    poset_category,
    rs_category,
    terminal_category,
)
from simplicial.helpers.resolution import (
    DiscreteCategory,
    ParenWord,
    free_resolution,
    hc_nerve,
    iso_check,
    rigid_delta,
    rigidify,
    rigidify_nerve,
)
from simplicial.helpers.sset import nerve, shape


class ParenWordTest(SimpleTestCase):

    def setUp(self):
        self.A = poset_category(3)

    def test_render(self):
        self.assertEqual(ParenWord('0', '2', ('01', '12'), ((0, 2),)).render(), '(01 12)')
        self.assertEqual(ParenWord('0', '3', ('01', '12', '23'), ((0, 3), (0, 1, 3))).render(), '((01)(12 23))')
        self.assertEqual(ParenWord('0', '2', ('01', '12')).render(), '01 12')
        self.assertEqual(ParenWord('1', '1', ()).render(), 'id_1')

    def test_faces(self):
        pw = ParenWord('0', '3', ('01', '12', '23'), ((0, 3), (0, 1, 3)))
        self.assertEqual(pw.face(self.A, 0).render(), '(01)(12 23)')
        self.assertEqual(pw.face(self.A, 1).render(), '(01 12 23)')
        self.assertEqual(pw.face(self.A, 2).render(), '(01 13)')

    def test_degeneracies(self):
        pw = ParenWord('0', '2', ('01', '12'), ((0, 2),))
        for i in range(2):
            s = pw.degeneracy(i)
            self.assertTrue(s.is_degenerate())
            self.assertEqual(s.face(self.A, i), pw)
            self.assertEqual(s.face(self.A, i + 1), pw)

    def test_levels_must_refine(self):
        with self.assertRaises(DomainError):
            ParenWord('0', '3', ('01', '12', '23'), ((0, 1, 3), (0, 2, 3)))
        with self.assertRaises(DomainError):
            ParenWord('0', '2', ('01', '12'), ((0, 1),))


class FreeResolutionTest(SimpleTestCase):

    def test_hom_of_an_ordinal(self):
        R = free_resolution(poset_category(2), 2, 3)
        H = R.hom('0', '2')
        self.assertEqual([H.nondeg_count(k) for k in range(3)], [2, 1, 0])
        edge = H.ref('(01 12)')
        self.assertEqual(H.face(edge, 0), H.ref('01 12'))
        self.assertEqual(H.face(edge, 1), H.ref('02'))
        self.assertIsNone(R.hom('2', '0'))

    def test_composition_concatenates_words(self):
        R = free_resolution(poset_category(2), 2, 3)
        composite = R.compose('0', '1', '2', R.hom('1', '2').ref('12'), R.hom('0', '1').ref('01'))
        self.assertEqual(composite, R.hom('0', '2').ref('01 12'))

    def test_laws(self):
        self.assertTrue(free_resolution(poset_category(2), 1, 3).check_laws(1))
        self.assertTrue(DiscreteCategory(rs_category(), 2).check_laws(2))
        self.assertTrue(rigid_delta(2).check_laws(2))


class CubeTest(SimpleTestCase):

    def test_cube_counts(self):
        H = rigid_delta(3).hom('0', '3')
        self.assertEqual([len(H.simplices(k)) for k in range(3)], [4, 9, 16])
        self.assertEqual([H.nondeg_count(k) for k in range(3)], [4, 5, 2])

    def test_composition_is_union(self):
        C = rigid_delta(2)
        composite = C.compose('0', '1', '2', C.hom('1', '2').ref('{1,2}'), C.hom('0', '1').ref('{0,1}'))
        self.assertEqual(composite, C.hom('0', '2').ref('{0,1,2}'))


class IsomorphismTest(SimpleTestCase):

    def test_words_and_necklaces_agree(self):
        for A, caps in ((poset_category(2), (2, 3)), (rs_category(), (2, 4))):
            report = iso_check(free_resolution(A, *caps), rigidify_nerve(A, *caps), caps[0])
            self.assertTrue(report.ok, report.certificate)
            self.assertEqual(report.correspondence, 'word-to-necklace')
            self.assertGreater(report.checked['composites'], 0)

    def test_necklaces_and_cubes_agree(self):
        A = poset_category(2)
        report = iso_check(rigidify_nerve(A, 2, 3), rigid_delta(2, 2), 2)
        self.assertTrue(report.ok, report.certificate)
        self.assertEqual(report.correspondence, 'necklace-to-cube')

    def test_corrupted_faces_are_caught(self):
        A = poset_category(2)
        R = free_resolution(A, 2, 3)
        H = R.homs[('0', '2')]
        H.faces['(01 12)'] = tuple(reversed(H.faces['(01 12)']))
        H.invalidate()
        report = iso_check(R, rigidify_nerve(A, 2, 3), 2)
        self.assertFalse(report.ok)
        self.assertEqual(report.certificate['check'], 'face d0')
        self.assertEqual(report.certificate['simplex'], '(01 12)')

    def test_simplices_rigidify_to_cubes(self):
        for n in range(4):
            report = iso_check(rigidify(shape('simplex', n).sset, n, n + 1), rigid_delta(n), n)
            self.assertTrue(report.ok, (n, report.certificate))

    def test_more_categories(self):
        for A in (poset_category(1), non_thin_poset(), terminal_category()):
            report = iso_check(free_resolution(A, 2, 3), rigidify_nerve(A, 2, 3), 2)
            self.assertTrue(report.ok, (A.name, report.certificate))

    def test_larger_categories(self):
        for A, caps in ((poset_category(3), (3, 5)), (rs_category(), (3, 5)), (five_object_category(), (2, 5))):
            with self.subTest(category=A.name):
                report = iso_check(free_resolution(A, *caps), rigidify_nerve(A, *caps), caps[0])
                self.assertTrue(report.ok, report.certificate)
                self.assertIsNone(report.certificate)

    def test_unrelated_categories_have_no_correspondence(self):
        with self.assertRaises(DomainError):
            iso_check(rigid_delta(2), free_resolution(poset_category(2), 2, 3), 2)


class CoherentNerveTest(SimpleTestCase):

    def test_discrete_category_gives_its_nerve(self):
        A = poset_category(2)
        N = hc_nerve(DiscreteCategory(A, 2), 2)
        ordinary = nerve(A, 2)
        self.assertEqual([N.nondeg_count(k) for k in range(3)], [3, 3, 1])
        self.assertEqual([N.nondeg_count(k) for k in range(3)], [ordinary.nondeg_count(k) for k in range(3)])
        self.assertTrue(N.validate())

    def test_budget(self):
        with self.assertRaises(BudgetError):
            hc_nerve(DiscreteCategory(rs_category(), 2), 2, budget=1)

    def test_dimension_limit(self):
        with self.assertRaises(DomainError):
            hc_nerve(rigid_delta(1), 4)

    def test_identity_of_the_three_cube_is_a_coherent_square(self):
        N = hc_nerve(rigid_delta(3), 3)
        upper = ((0, 3), (0, 1, 3), (0, 1, 2, 3))
        lower = ((0, 3), (0, 2, 3), (0, 1, 2, 3))

        def keeps(F, chain):
            ref = F.table()[(0, 3)][chain]
            return not ref.word and ref.id == '<'.join('{' + ','.join(map(str, s)) + '}' for s in chain)

        squares = [N.labels[sid] for sid in N.nondeg[3]
                   if N.labels[sid].objects == ('0', '1', '2', '3')
                   and keeps(N.labels[sid], upper) and keeps(N.labels[sid], lower)]
        self.assertEqual(len(squares), 1)
        self.assertTrue(N.validate())
