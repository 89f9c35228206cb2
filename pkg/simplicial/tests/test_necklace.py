from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from simplicial.helpers.errors import CapError, DomainError
from simplicial.helpers.fixtures import demo_fixture, poset_category, rs_category
from simplicial.helpers.necklace import (
    Flag,
    HomSimplex,
    Necklace,
    NecklaceMap,
    concatenate,
    enumerate_necklaces,
    hom_degeneracy,
    hom_face,
    hom_space,
    restrict,
    split,
    strict_flags,
    tnd_quotient,
)
from simplicial.helpers.sset import is_coskeletal, nerve, shape


class NecklaceTest(SimpleTestCase):

    def test_joins_and_vertices(self):
        T = Necklace((3, 2))
        self.assertEqual(T.vertex_count, 6)
        self.assertEqual(T.joins, frozenset({0, 3, 5}))
        self.assertEqual(T.bead_ranges(), [(0, 3), (3, 5)])
        self.assertEqual(Necklace().joins, frozenset({0}))

    def test_split_and_restrict(self):
        T = Necklace((3, 2))
        self.assertEqual(split(T, {0, 1, 3, 5}), Necklace((1, 2, 2)))
        self.assertEqual(restrict(T, {0, 1, 3, 5}), Necklace((2, 1)))

    def test_cut_must_hold_the_joins(self):
        with self.assertRaises(DomainError):
            split(Necklace((3, 2)), {0, 5})
        with self.assertRaises(DomainError):
            restrict(Necklace((1,)), {0, 1, 2})

    def test_beads_are_positive(self):
        with self.assertRaises(DomainError):
            Necklace((2, 0))

    def test_strict_flags_on_a_bead(self):
        flags = list(strict_flags(Necklace((3,)), 2))
        # {0,3} < {0,1,2,3}, then the two orders of adding 1 and 2
        self.assertEqual(len(flags), 3)
        self.assertEqual(flags[0], Flag.of({0, 3}, {0, 1, 2, 3}))

    @settings(derandomize=True, max_examples=80, deadline=None)
    @given(st.lists(st.integers(min_value=1, max_value=3), max_size=4), st.data())
    def test_cuts_keep_or_count_vertices(self, dims, data):
        T = Necklace(tuple(dims))
        interior = sorted(T.vertices - T.joins)
        extra = data.draw(st.sets(st.sampled_from(interior)) if interior else st.just(set()))
        K = set(T.joins) | extra
        self.assertEqual(split(T, K).vertex_count, T.vertex_count)
        self.assertEqual(restrict(T, K).vertex_count, len(K))
        self.assertEqual(len(restrict(T, K).bead_dims), len(T.bead_dims))


class HomSimplexTest(SimpleTestCase):

    def setUp(self):
        self.X = shape('simplex', 2).sset

    def test_flag_must_span_the_necklace(self):
        m = NecklaceMap(Necklace((2,)), (self.X.ref('0,1,2'),), '0', '2')
        with self.assertRaises(DomainError):
            HomSimplex(m, Flag.of({0, 1}, {0, 1, 2}))
        with self.assertRaises(DomainError):
            Flag.of({0, 1}, {0, 2})

    def test_bead_images_must_meet(self):
        m = NecklaceMap(Necklace((1, 1)), (self.X.ref('0,1'), self.X.ref('0,2')), '0', '2')
        with self.assertRaises(DomainError):
            m.check(self.X)

    def test_quotient_collapses_degenerate_beads(self):
        degenerate = self.X.degeneracy(self.X.ref('0,1'), 1)
        m = NecklaceMap(Necklace((2,)), (degenerate,), '0', '1')
        h = tnd_quotient(self.X, m, Flag.of({0, 2}, {0, 1, 2}))
        self.assertEqual(h.shape, Necklace((1,)))
        self.assertEqual(h.flag, Flag.of({0, 1}, {0, 1}))
        self.assertTrue(h.is_degenerate())
        self.assertEqual(tnd_quotient(self.X, h.map, h.flag), h)

    def test_faces_of_an_edge(self):
        whole = NecklaceMap(Necklace((2,)), (self.X.ref('0,1,2'),), '0', '2')
        edge = HomSimplex(whole, Flag.of({0, 2}, {0, 1, 2}))
        self.assertEqual(hom_face(self.X, edge, 0).serialize(), '1,1/0,1;1,2/{0,1,2}')
        self.assertEqual(hom_face(self.X, edge, 1).serialize(), '1/0,2/{0,1}')

    def test_degeneracy_then_face(self):
        whole = NecklaceMap(Necklace((2,)), (self.X.ref('0,1,2'),), '0', '2')
        edge = HomSimplex(whole, Flag.of({0, 2}, {0, 1, 2}))
        for i in range(2):
            s = hom_degeneracy(edge, i)
            self.assertTrue(s.is_degenerate())
            self.assertEqual(hom_face(self.X, s, i), edge)
            self.assertEqual(hom_face(self.X, s, i + 1), edge)

    def test_concatenation(self):
        f = HomSimplex(NecklaceMap(Necklace((1,)), (self.X.ref('0,1'),), '0', '1'), Flag.of({0, 1}))
        g = HomSimplex(NecklaceMap(Necklace((1,)), (self.X.ref('1,2'),), '1', '2'), Flag.of({0, 1}))
        self.assertEqual(concatenate(g, f).serialize(), '1,1/0,1;1,2/{0,1,2}')
        with self.assertRaises(DomainError):
            concatenate(f, g)

    def test_point_necklace(self):
        point = HomSimplex(NecklaceMap(Necklace(), (), '1', '1'), Flag.of({0}))
        self.assertEqual(point.serialize(), '-/@1/{0}')
        with self.assertRaises(DomainError):
            NecklaceMap(Necklace(), (), '0', '1')


class HomSpaceTest(SimpleTestCase):

    def test_worked_example_faces(self):
        fixture = demo_fixture('worked-example')
        simplex = fixture.extra['simplex']
        for i, expected in fixture.extra['faces'].items():
            self.assertEqual(hom_face(fixture.X, simplex, i), expected, i)

    def test_inner_faces_keep_the_necklace(self):
        fixture = demo_fixture('worked-example')
        simplex = fixture.extra['simplex']
        for i in (1, 2):
            self.assertEqual(hom_face(fixture.X, simplex, i).map, simplex.map)

    def test_hom_space_of_a_triangle_is_an_interval(self):
        X = shape('simplex', 2).sset
        space = hom_space(X, '0', '2', 2, 3)
        self.assertEqual(space.counts(), {0: 2, 1: 1, 2: 0})

    def test_cube(self):
        fixture = demo_fixture('cube')
        self.assertEqual(fixture.space.counts(), fixture.extra['counts'])
        self.assertTrue(fixture.space.sset.validate())

    def test_three_cube(self):
        space = hom_space(shape('simplex', 4).sset, '0', '4', 3, 5)
        self.assertEqual(space.counts(), {0: 8, 1: 19, 2: 18, 3: 6})
        self.assertFalse(space.size_cap_reached)

    def test_necklace_enumeration_respects_the_size_cap(self):
        X = shape('simplex', 3).sset
        self.assertEqual(len(enumerate_necklaces(X, '0', '3', 4)), 9)
        self.assertEqual(len(enumerate_necklaces(X, '0', '3', 3)), 5)
        self.assertTrue(hom_space(X, '0', '3', 2, 3).size_cap_reached)

    def test_simplices_outside_the_caps(self):
        X = shape('simplex', 3).sset
        space = hom_space(X, '0', '3', 2, 3)
        whole = HomSimplex(NecklaceMap(Necklace((3,)), (X.ref('0,1,2,3'),), '0', '3'),
                           Flag.of({0, 3}, {0, 1, 2, 3}))
        self.assertFalse(space.contains(whole))
        with self.assertRaises(CapError):
            space.ref_of(whole)

    def test_nerve_hom_space_is_a_simplicial_set(self):
        X = nerve(rs_category(), 4)
        space = hom_space(X, 'x', 'y', 2, 4)
        self.assertTrue(space.sset.validate())
        for h in space.simplices(2):
            self.assertEqual(space.simplex(space.ref_of(h)), h)

    def test_nerve_hom_spaces_are_two_coskeletal(self):
        X = nerve(poset_category(3), 4)
        space = hom_space(X, '0', '3', 4, 4)
        self.assertTrue(is_coskeletal(space.sset, 2, 4).ok)

    def test_endpoints_must_be_vertices(self):
        X = shape('simplex', 2).sset
        with self.assertRaises(DomainError):
            hom_space(X, '0,1', '2', 2, 3)
