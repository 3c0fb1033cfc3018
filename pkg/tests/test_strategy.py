"""
Testes para o módulo strategy.py.
"""
import unittest

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.models.models import ConsistencyPartition, PositionPair
from app.modules.strategy import (
    ScriptExhaustedError, SelectionContext, Strategy, StrategyContractError, StrategyError,
    UnknownStrategyError, adaptive, builtin_strategies, consistency_eager, get_strategy,
    index_first, left_to_right, max_branching, scripted, select,
)
from tests.fixtures import term, ternary_signature

P12 = PositionPair.of((1,), (2,))
P13 = PositionPair.of((1,), (3,))


class TestBuiltinStrategies(unittest.TestCase):
    """Testes das estratégias embutidas."""

    def setUp(self):
        self.signature = ternary_signature()

    def _patterns(self, *texts):
        return tuple(term(self.signature, text) for text in texts)

    def test_left_to_right_prefers_positions(self):
        """Testa que a menor posição vem antes de qualquer par."""
        context = SelectionContext(work_f=frozenset({(2,), (1, 3)}), work_c=frozenset({P12}))
        self.assertEqual(left_to_right(context), (1, 3))
        self.assertEqual(left_to_right(SelectionContext(work_c=frozenset({P13, P12}))), P12)

    def test_max_branching(self):
        """Testa a escolha da posição com mais símbolos distintos."""
        context = SelectionContext(
            work_f=frozenset({(1,), (2,)}),
            live_patterns=self._patterns("f(x, a, c)", "f(y, b, c)", "f(a, c, z)"),
        )
        self.assertEqual(max_branching(context), (2,))

    def test_index_first(self):
        """Testa que posições índice têm prioridade."""
        context = SelectionContext(
            work_f=frozenset({(1,), (2,)}),
            live_patterns=self._patterns("f(x, a, c)", "f(y, b, c)"),
        )
        self.assertEqual(index_first(context), (2,))
        self.assertEqual(left_to_right(context), (1,))

    def test_consistency_eager(self):
        """Testa que pares vêm antes de posições."""
        context = SelectionContext(work_f=frozenset({(1,)}), work_c=frozenset({P13}))
        self.assertEqual(consistency_eager(context), P13)

    def test_adaptive_prefers_shrinking_pairs(self):
        """Testa que, sem posições índice, o par que elimina mais padrões é escolhido."""
        context = SelectionContext(
            work_c=frozenset({P12, P13}),
            live_partitions=(
                ConsistencyPartition.of([[(1,), (3,)]]),
                ConsistencyPartition.of([[(1,), (2,), (3,)]]),
                ConsistencyPartition.of([[(1,), (3,)], [(2,)]]),
            ),
        )
        self.assertEqual(adaptive(context), P13)

    def test_catalog(self):
        """Testa o catálogo de estratégias por nome."""
        catalog = builtin_strategies()
        self.assertEqual(
            sorted(catalog),
            ["consistency-eager", "default", "index-first", "left-to-right", "max-branching"],
        )
        self.assertEqual(get_strategy("left-to-right").name, "left-to-right")
        with self.assertRaises(UnknownStrategyError):
            get_strategy("random")
        with self.assertRaises(UnknownStrategyError):
            get_strategy("scripted")


class TestScriptedStrategy(unittest.TestCase):
    """Testes da estratégia de roteiro fixo."""

    def test_first_available_item(self):
        """Testa que o primeiro item disponível do roteiro é escolhido."""
        strategy = scripted([(2,), (1,), P12])
        self.assertEqual(select(strategy, SelectionContext(work_f=frozenset({(1,), (2,)}))), (2,))
        self.assertEqual(select(strategy, SelectionContext(work_f=frozenset({(1,)}))), (1,))
        self.assertEqual(select(strategy, SelectionContext(work_c=frozenset({P12}))), P12)

    def test_exhausted_script(self):
        """Testa o erro quando nenhum item do roteiro está disponível."""
        strategy = scripted([(2,)])
        with self.assertRaises(ScriptExhaustedError):
            select(strategy, SelectionContext(work_f=frozenset({(3,)})))


class TestSelectContract(unittest.TestCase):
    """Testes do contrato de pertinência."""

    def test_choice_outside_work_sets(self):
        """Testa que escolhas fora de workF ⊎ workC são rejeitadas."""
        rogue = Strategy("rogue", lambda context: (9,))
        with self.assertRaises(StrategyContractError):
            select(rogue, SelectionContext(work_f=frozenset({(1,)})))

    def test_empty_work_sets(self):
        """Testa que a seleção exige trabalho disponível."""
        with self.assertRaises(StrategyError):
            select(Strategy("left-to-right", left_to_right), SelectionContext())


positions = st.lists(st.integers(min_value=1, max_value=3), max_size=3).map(tuple)
pairs = st.tuples(positions, positions).filter(lambda pq: pq[0] != pq[1]).map(
    lambda pq: PositionPair.of(*pq)
)
LIVE_PATTERNS = ("f(x, a, c)", "f(y, b, c)", "f(a, c, z)", "f(f(a, x, y), b, z)")
LIVE_PARTITIONS = (
    ConsistencyPartition.of([[(1,), (2,)], [(3,)]]),
    ConsistencyPartition.of([[(1,), (3,)], [(2,)]]),
    ConsistencyPartition.of([[(1,), (2,), (3,)]]),
)


class TestMembershipContract(unittest.TestCase):
    """Toda estratégia embutida escolhe um elemento de workF ⊎ workC."""

    @settings(max_examples=200, deadline=None)
    @given(st.frozensets(positions, max_size=5), st.frozensets(pairs, max_size=5),
           st.lists(st.sampled_from(LIVE_PATTERNS), max_size=4),
           st.lists(st.sampled_from(LIVE_PARTITIONS), max_size=3))
    def test_builtins_choose_from_work_sets(self, work_f, work_c, texts, partitions):
        """Testa a pertinência da escolha em conjuntos de trabalho aleatórios."""
        assume(work_f or work_c)
        signature = ternary_signature()
        context = SelectionContext(
            work_f=work_f, work_c=work_c,
            live_patterns=tuple(term(signature, text) for text in texts),
            live_partitions=tuple(partitions),
        )
        for name, strategy in builtin_strategies().items():
            choice = select(strategy, context)
            if isinstance(choice, PositionPair):
                self.assertIn(choice, work_c, name)
            else:
                self.assertIn(choice, work_f, name)


if __name__ == '__main__':
    unittest.main()
