"""
Testes para o módulo universe.py.
"""
import unittest

from app.modules.terms import is_ground, term_depth
from app.modules.textio import parse_signature
from app.modules.universe import (
    UniverseError, UniverseTooLargeError, build_universe, count_ground, enumerate_ground,
    sample_ground, select_symbols,
)


class TestUniverse(unittest.TestCase):
    """Testes da enumeração e da amostragem de termos fechados."""

    def setUp(self):
        self.signature = parse_signature("sym f/2\nsym g/1\nsym a/0\nsym b/0")

    def test_counts(self):
        """Testa a contagem sem enumeração."""
        self.assertEqual(count_ground(list(self.signature), 3), 74)
        self.assertEqual(count_ground(select_symbols(self.signature, ["f", "a", "b"]), 3), 38)
        ternary = parse_signature("sym f/3\nsym a/0\nsym b/0\nsym c/0")
        self.assertEqual(count_ground(list(ternary), 2), 30)

    def test_enumeration_matches_count(self):
        """Testa que a enumeração produz termos distintos, fechados e dentro da profundidade."""
        universe = enumerate_ground(list(self.signature), 3)
        self.assertEqual(len(universe), 74)
        self.assertEqual(len(set(universe)), 74)
        self.assertTrue(all(is_ground(t) and term_depth(t) <= 3 for t in universe))

    def test_canonical_order(self):
        """Testa a ordem: por profundidade, depois ordem dos símbolos e dos argumentos."""
        symbols = select_symbols(self.signature, ["f", "a", "b"])
        universe = enumerate_ground(symbols, 2)
        self.assertEqual([str(t) for t in universe],
                         ["a", "b", "f(a, a)", "f(a, b)", "f(b, a)", "f(b, b)"])
        depths = [term_depth(t) for t in enumerate_ground(symbols, 3)]
        self.assertEqual(depths, sorted(depths))

    def test_cap_is_checked_before_building(self):
        """Testa o erro quando o universo excede o limite."""
        with self.assertRaises(UniverseTooLargeError):
            enumerate_ground(list(self.signature), 3, cap=73)
        self.assertEqual(len(enumerate_ground(list(self.signature), 3, cap=74)), 74)

    def test_unknown_symbols(self):
        """Testa a seleção de símbolos não declarados."""
        with self.assertRaises(UniverseError):
            select_symbols(self.signature, ["f", "h"])

    def test_sampling_is_reproducible(self):
        """Testa que a mesma semente produz a mesma amostra."""
        symbols = list(self.signature)
        first = sample_ground(symbols, 4, 50, seed=7)
        self.assertEqual(first, sample_ground(symbols, 4, 50, seed=7))
        self.assertEqual(len(first), 50)
        self.assertTrue(all(is_ground(t) and term_depth(t) <= 4 for t in first))

    def test_sampling_needs_constants(self):
        """Testa que sem constantes não há termos fechados."""
        with self.assertRaises(UniverseError):
            sample_ground(select_symbols(self.signature, ["f", "g"]), 3, 10, seed=1)

    def test_build_universe(self):
        """Testa os modos exaustivo e amostrado e a profundidade inválida."""
        self.assertEqual(len(build_universe(self.signature, 2, ["f", "a", "b"])), 6)
        self.assertEqual(len(build_universe(self.signature, 6, cap=25, seed=3)), 25)
        with self.assertRaises(UniverseError):
            build_universe(self.signature, 0)


if __name__ == '__main__':
    unittest.main()
