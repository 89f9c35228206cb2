from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from simplicial.helpers.delta import (
    DegeneracyWord,
    OrdinalMap,
    codegeneracy,
    coface,
    collapse_repeats,
    compose,
    epi_mono_factor,
    expand_repeats,
    identity,
    monotone_maps,
    surjection_words,
)
from simplicial.helpers.errors import DomainError


class CosimplicialIdentityTest(SimpleTestCase):

    def test_cofaces_commute(self):
        for n in range(2, 6):
            for j in range(n + 1):
                for i in range(j):
                    left = compose(coface(i, n - 1), coface(j, n))
                    right = compose(coface(j - 1, n - 1), coface(i, n))
                    self.assertEqual(left, right, (n, i, j))

    def test_codegeneracies_commute(self):
        for n in range(0, 5):
            for j in range(n + 1):
                for i in range(j + 1):
                    left = compose(codegeneracy(i, n + 1), codegeneracy(j, n))
                    right = compose(codegeneracy(j + 1, n + 1), codegeneracy(i, n))
                    self.assertEqual(left, right, (n, i, j))

    def test_codegeneracy_after_coface(self):
        for n in range(1, 6):
            for j in range(n):
                for i in (j, j + 1):
                    self.assertEqual(compose(coface(i, n), codegeneracy(j, n - 1)), identity(n - 1))

    def test_out_of_range_maps_are_rejected(self):
        with self.assertRaises(DomainError):
            coface(3, 2)
        with self.assertRaises(DomainError):
            OrdinalMap((1, 0), 2)
        with self.assertRaises(DomainError):
            compose(coface(0, 2), coface(0, 2))


class FactorizationTest(SimpleTestCase):

    def test_epi_mono_factorization_is_exhaustively_correct(self):
        for m in range(0, 5):
            for n in range(0, 5):
                for f in monotone_maps(m, n):
                    word, mono = epi_mono_factor(f)
                    self.assertTrue(mono.is_injective())
                    epi = word.as_map(mono.source_dim)
                    self.assertTrue(epi.is_surjective())
                    self.assertEqual(compose(epi, mono), f)

    def test_words_and_surjections_correspond(self):
        for m in range(0, 4):
            for k in range(m, m + 3):
                words = list(surjection_words(k, m))
                maps = {w.as_map(m) for w in words}
                self.assertEqual(len(maps), len(words))
                for w in words:
                    self.assertEqual(DegeneracyWord.from_surjection(w.as_map(m)), w)
                    self.assertEqual(DegeneracyWord.normalize(w.indices, m), w)

    def test_normalize_reorders_composites(self):
        # s0 s1 on a 1-simplex equals s2 s0
        self.assertEqual(DegeneracyWord.normalize((0, 1), 1), DegeneracyWord((2, 0)))
        self.assertEqual(DegeneracyWord.normalize((1, 0), 0), DegeneracyWord((1, 0)))

    def test_word_must_decrease(self):
        with self.assertRaises(DomainError):
            DegeneracyWord((0, 1))

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.lists(st.integers(min_value=0, max_value=4), min_size=1, max_size=8))
    def test_any_monotone_map_factors(self, raw):
        values = tuple(sorted(raw))
        f = OrdinalMap(values, max(values) + 2)
        word, mono = epi_mono_factor(f)
        self.assertEqual(compose(word.as_map(mono.source_dim), mono), f)
        self.assertEqual(mono.values, tuple(sorted(set(values))))


class RepeatsTest(SimpleTestCase):

    def test_collapse_and_expand(self):
        strict, word = collapse_repeats(('a', 'a', 'b', 'c', 'c', 'c'))
        self.assertEqual(strict, ('a', 'b', 'c'))
        self.assertEqual(word, DegeneracyWord((4, 3, 0)))
        self.assertEqual(expand_repeats(strict, word), ('a', 'a', 'b', 'c', 'c', 'c'))
