"""
Testes para o módulo ca.py.
"""
import unittest

from app.models.automata import StateKind
from app.models.models import PositionPair
from app.modules.apma import check_well_formed
from app.modules.ca import (
    NotConsistencyStateError, Redundancy, construct_ca, detect_redundant, eval_ca,
    match_two_phase, remove_redundant, unique_pairs,
)
from app.modules.strategy import Strategy, left_to_right, scripted
from app.modules.terms import is_consistent_naive, match_naive, term_depth
from app.modules.textio import parse_signature
from app.modules.universe import enumerate_ground
from tests.fixtures import (
    NESTED_FILE, load, pairwise_partitions, term, ternary_signature, three_partitions,
    unpruned_three_partition_ca,
)

P = PositionPair.of


class TestCaConstruction(unittest.TestCase):
    """Testes da construção e avaliação do CA sobre três partições."""

    def setUp(self):
        self.signature = ternary_signature()
        self.partitions = three_partitions()
        self.strategy = scripted([P((1,), (2,)), P((1,), (3,)), P((2,), (3,))])

    def test_literal_construction(self):
        """Testa o CA literal de 9 estados."""
        m = construct_ca(self.partitions, self.strategy)
        self.assertEqual(m.state_count, 9)
        self.assertEqual(m.count(StateKind.CONSISTENCY), 4)
        self.assertEqual(m.state(m.root).label, P((1,), (2,)))
        self.assertEqual(check_well_formed(m), [])

    def test_mapping_input(self):
        """Testa que partições em dicionário produzem o mesmo autômato."""
        m = construct_ca(dict(self.partitions), Strategy("left-to-right", left_to_right))
        self.assertEqual(m.state_count, 9)

    def test_evaluation(self):
        """Testa f(a,a,b): consistente apenas com P1, após duas comparações."""
        m = construct_ca(self.partitions, self.strategy)
        result, trace = eval_ca(m, term(self.signature, "f(a, a, b)"))
        self.assertEqual(result, frozenset({"P1"}))
        self.assertEqual(trace.length, 3)
        self.assertEqual(trace.comparisons, 2)
        result, _ = eval_ca(m, term(self.signature, "f(c, c, c)"))
        self.assertEqual(result, frozenset({"P1", "P2", "P3"}))

    def test_agrees_with_naive_consistency(self):
        """Testa a equivalência com a verificação ingênua em todos os termos f(_, _, _)."""
        m = construct_ca(self.partitions, self.strategy)
        pruned = remove_redundant(m)
        universe = [t for t in enumerate_ground(list(self.signature), 2) if term_depth(t) == 2]
        self.assertEqual(len(universe), 27)
        for t in universe:
            expected = frozenset(i for i, p in self.partitions if is_consistent_naive(t, p))
            self.assertEqual(eval_ca(m, t)[0], expected, str(t))
            self.assertEqual(eval_ca(pruned, t)[0], expected, str(t))

    def test_unique_pairs(self):
        """Testa os pares distintos que ocorrem nas partições."""
        self.assertEqual(unique_pairs(self.partitions),
                         frozenset({P((1,), (2,)), P((1,), (3,)), P((2,), (3,))}))
        self.assertEqual(unique_pairs({}), frozenset())

    def test_empty_partitions(self):
        """Testa que sem partições resta um único estado final ∅."""
        m = construct_ca([], self.strategy)
        self.assertEqual(m.state_count, 1)
        self.assertEqual(m.state(m.root).label, frozenset())


class TestRedundancy(unittest.TestCase):
    """Testes da detecção e remoção de estados redundantes."""

    def test_detects_both_redundant_states(self):
        """Testa a detecção por transitividade e por N∘E."""
        m, ids = unpruned_three_partition_ca()
        self.assertEqual(m.state_count, 11)
        self.assertIs(detect_redundant(m, ids["23_eq"]), Redundancy.CHECK_EQ)
        self.assertIs(detect_redundant(m, ids["23_neq"]), Redundancy.CHECK_NEQ)
        self.assertIs(detect_redundant(m, ids["root"]), Redundancy.NOT_DETECTED)
        self.assertIs(detect_redundant(m, ids["13_right"]), Redundancy.NOT_DETECTED)

    def test_detect_requires_consistency_state(self):
        """Testa o erro ao consultar um estado final."""
        m, _ = unpruned_three_partition_ca()
        final = next(s.id for s in m.states.values() if s.kind is StateKind.FINAL)
        with self.assertRaises(NotConsistencyStateError):
            detect_redundant(m, final)

    def test_remove_redundant_reaches_seven_states(self):
        """Testa a remoção até o ponto fixo: 7 estados e no máximo duas comparações."""
        m, _ = unpruned_three_partition_ca()
        pruned = remove_redundant(m)
        self.assertEqual(pruned.state_count, 7)
        self.assertEqual(pruned.max_depth, 2)
        self.assertEqual(check_well_formed(pruned), [])
        for s in pruned.walk():
            if pruned.state(s).kind is StateKind.CONSISTENCY:
                self.assertIs(detect_redundant(pruned, s), Redundancy.NOT_DETECTED)

    def test_remove_redundant_on_constructed_ca(self):
        """Testa que o CA literal também é reduzido a 7 estados."""
        strategy = scripted([P((1,), (2,)), P((1,), (3,)), P((2,), (3,))])
        literal = construct_ca(three_partitions(), strategy)
        self.assertEqual(remove_redundant(literal).state_count, 7)

    def test_pairwise_partitions_need_every_comparison(self):
        """Testa que f(a,b,c,d) faz as 6 comparações mesmo após a remoção."""
        signature = parse_signature("sym f/4\nsym a/0\nsym b/0\nsym c/0\nsym d/0")
        partitions = pairwise_partitions(4)
        m = construct_ca(partitions, Strategy("left-to-right", left_to_right))
        t = term(signature, "f(a, b, c, d)")
        for automaton in (m, remove_redundant(m)):
            result, trace = eval_ca(automaton, t)
            self.assertEqual(result, frozenset())
            self.assertEqual(trace.comparisons, 6)


class TestTwoPhaseMatching(unittest.TestCase):
    """Testes do casamento em duas fases."""

    def test_agrees_with_oracle(self):
        """Testa o casamento em duas fases contra o oráculo ingênuo."""
        pattern_file = load(NESTED_FILE)
        for t in enumerate_ground(list(pattern_file.signature), 3):
            self.assertEqual(match_two_phase(pattern_file.patterns, t),
                             match_naive(pattern_file.patterns, t), str(t))

    def test_empty_patterns(self):
        """Testa que nenhum padrão casa com o conjunto vazio."""
        self.assertEqual(match_two_phase([], term(ternary_signature(), "a")), frozenset())


if __name__ == '__main__':
    unittest.main()
