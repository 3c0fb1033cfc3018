"""
Testes para o módulo apma.py (construção, avaliação, prefixos e boa formação).
"""
import unittest

from app.models.automata import Apma, AutomatonBuilder, StateKind
from app.models.models import NEQ, IndexedPattern
from app.modules.anpma import Dominance, compare_efficiency
from app.modules.apma import (
    DuplicateIndexError, NonLinearPatternError, UnreachableStateError, check_well_formed,
    construct_apma, eval_apma, replay, state_prefix,
)
from app.modules.strategy import Strategy, left_to_right, scripted
from app.modules.terms import DEFAULT_STORE, match_naive
from app.modules.universe import enumerate_ground
from tests.fixtures import linear_patterns, term


def _final_with(m, labels):
    return next(s for s in m.states.values()
                if s.kind is StateKind.FINAL and s.label == frozenset(labels))


class TestApmaConstruction(unittest.TestCase):
    """Testes da construção do APMA sobre três padrões lineares."""

    def setUp(self):
        self.signature, self.patterns = linear_patterns()
        self.index_first = scripted([(), (2,), (1,), (3,)])
        self.left_first = scripted([(), (1,), (2,), (3,)])

    def test_inspecting_index_position_first_saves_a_state(self):
        """Testa 8 estados com a posição 2 antes da 1 e 9 na ordem inversa."""
        m = construct_apma(self.patterns, self.index_first, signature=self.signature)
        self.assertEqual(m.state_count, 8)
        self.assertEqual(m.count(StateKind.MATCH), 5)
        self.assertEqual(m.breadth, 3)
        other = construct_apma(self.patterns, self.left_first, signature=self.signature)
        self.assertEqual(other.state_count, 9)

    def test_nonredundant_work_sets(self):
        """Testa que a restrição do trabalho elimina o estado com uma única transição ≠."""
        m = construct_apma(self.patterns, self.index_first, nonredundant=True,
                           signature=self.signature)
        self.assertEqual(m.state_count, 7)

    def test_literal_final_states(self):
        """Testa que todo estado final do APMA literal é não vazio e todo padrão chega a algum."""
        for strategy in (self.index_first, self.left_first, Strategy("left-to-right", left_to_right)):
            m = construct_apma(self.patterns, strategy, signature=self.signature)
            labels = [s.label for s in m.states.values() if s.kind is StateKind.FINAL]
            self.assertTrue(all(labels))
            self.assertEqual(frozenset().union(*labels), frozenset({"l1", "l2", "l3"}))

    def test_nonredundant_states_have_distinguishing_terms(self):
        """Testa que cada estado de casamento é deixado por transições diferentes em algum par de termos."""
        universe = enumerate_ground(list(self.signature), 2)
        for strategy in (self.index_first, self.left_first, Strategy("left-to-right", left_to_right)):
            m = construct_apma(self.patterns, strategy, nonredundant=True, signature=self.signature)
            outcomes = {s: set() for s, state in m.states.items() if state.kind is StateKind.MATCH}
            for t in universe:
                for step in eval_apma(m, t)[1].steps:
                    if step.state in outcomes:
                        outcomes[step.state].add(step.action)
            for s, actions in outcomes.items():
                self.assertGreaterEqual(len(actions), 2, f"{strategy.name}: estado {s}")

    def test_transitions_follow_signature_order(self):
        """Testa a ordem das transições (ordem de declaração, ≠ por último)."""
        m = construct_apma(self.patterns, self.index_first, signature=self.signature)
        inspect_one = next(s.id for s in m.states.values() if s.label == (1,))
        self.assertEqual([str(label) for label in m.edges(inspect_one)], ["a", "c"])
        c_branch = m.edges(inspect_one)[self.signature.lookup("c")]
        self.assertEqual([str(label) for label in m.edges(c_branch)], ["c", "<>"])

    def test_rejects_nonlinear_patterns(self):
        """Testa que padrões não lineares são rejeitados, citando o índice."""
        patterns = self.patterns + [IndexedPattern("l4", term(self.signature, "f(x, x, a)"))]
        with self.assertRaises(NonLinearPatternError) as context:
            construct_apma(patterns, self.index_first)
        self.assertIn("l4", str(context.exception))

    def test_rejects_duplicate_indices(self):
        """Testa que índices repetidos são rejeitados."""
        patterns = [IndexedPattern("l1", p.pattern) for p in self.patterns]
        with self.assertRaises(DuplicateIndexError):
            construct_apma(patterns, self.index_first)

    def test_empty_pattern_set(self):
        """Testa que o conjunto vazio produz um único estado final ∅."""
        m = construct_apma([], Strategy("left-to-right", left_to_right))
        self.assertEqual(m.state_count, 1)
        self.assertTrue(m.is_final(m.root))
        result, trace = eval_apma(m, term(self.signature, "f(a, b, c)"))
        self.assertEqual(result, frozenset())
        self.assertEqual(trace.length, 1)


class TestApmaEvaluation(unittest.TestCase):
    """Testes da avaliação do APMA."""

    def setUp(self):
        self.signature, self.patterns = linear_patterns()
        self.m = construct_apma(self.patterns, scripted([(), (2,), (1,), (3,)]),
                                signature=self.signature)

    def test_worked_evaluations(self):
        """Testa as três avaliações de referência."""
        cases = {
            "f(a, b, a)": {"l1"},
            "f(b, b, b)": set(),
            "f(c, b, b)": {"l2"},
            "f(c, b, c)": {"l2", "l3"},
        }
        for text, expected in cases.items():
            result, _ = eval_apma(self.m, term(self.signature, text))
            self.assertEqual(result, frozenset(expected), text)

    def test_trace_counts_visited_states(self):
        """Testa o comprimento do traço, incluindo o estado em que a avaliação para."""
        _, trace = eval_apma(self.m, term(self.signature, "f(a, b, a)"))
        self.assertEqual(trace.length, 5)
        self.assertEqual(trace.inspections, 4)
        self.assertEqual(trace.comparisons, 0)
        self.assertIsNone(trace.steps[-1].action)
        _, stuck = eval_apma(self.m, term(self.signature, "f(b, b, b)"))
        self.assertEqual(stuck.length, 3)

    def test_inspection_orders_are_incomparable(self):
        """Testa que nenhuma das duas ordens de inspeção domina a outra."""
        left_first = construct_apma(self.patterns, scripted([(), (1,), (2,), (3,)]),
                                    signature=self.signature)
        universe = enumerate_ground(list(self.signature), 2)
        verdict = compare_efficiency(self.m, left_first, universe)
        self.assertIs(verdict.kind, Dominance.INCOMPARABLE)
        self.assertEqual(verdict.terms, len(universe))
        self.assertIn(term(self.signature, "f(a, a, a)"), verdict.m1_better)
        self.assertIn(term(self.signature, "f(b, b, b)"), verdict.m2_better)

    def test_agrees_with_oracle(self):
        """Testa a equivalência com o oráculo ingênuo em todos os termos de profundidade <= 2."""
        universe = enumerate_ground(list(self.signature), 2)
        for strategy in (scripted([(), (1,), (2,), (3,)]), Strategy("left-to-right", left_to_right)):
            for nonredundant in (False, True):
                m = construct_apma(self.patterns, strategy, nonredundant, signature=self.signature)
                for t in universe:
                    result, trace = eval_apma(m, t)
                    self.assertEqual(result, match_naive(self.patterns, t), str(t))
                    visited = [m.state(step.state).label for step in trace.steps
                               if m.state(step.state).kind is StateKind.MATCH]
                    self.assertEqual(len(visited), len(set(visited)))


class TestPrefixReplay(unittest.TestCase):
    """Testes da reconstrução de prefixos e da boa formação."""

    def setUp(self):
        self.signature, self.patterns = linear_patterns()
        self.m = construct_apma(self.patterns, scripted([(), (2,), (1,), (3,)]),
                                signature=self.signature)

    def test_state_prefix(self):
        """Testa o prefixo dos estados reconstruído pelo caminho."""
        self.assertIs(state_prefix(self.m, self.m.root), DEFAULT_STORE.position_variable(()))
        only_first = _final_with(self.m, {"l1"})
        self.assertEqual(str(state_prefix(self.m, only_first.id)), "f(a, b, ≠)")
        _, knowledge = replay(self.m, only_first.id)
        self.assertEqual(knowledge.equal, frozenset())

    def test_unknown_state(self):
        """Testa o erro para estados inexistentes."""
        with self.assertRaises(UnreachableStateError):
            replay(self.m, 999)

    def test_well_formed(self):
        """Testa que os APMAs construídos são bem formados."""
        self.assertEqual(check_well_formed(self.m), [])
        nonredundant = construct_apma(self.patterns, Strategy("left-to-right", left_to_right), True)
        self.assertEqual(check_well_formed(nonredundant), [])

    def test_repeated_position_is_reported(self):
        """Testa que inspecionar a mesma posição duas vezes viola a canonicidade."""
        f = self.signature.lookup("f")
        builder = AutomatonBuilder(DEFAULT_STORE)
        root = builder.new_state(StateKind.MATCH, ())
        again = builder.new_state(StateKind.MATCH, ())
        final = builder.new_state(StateKind.FINAL, frozenset())
        builder.add_edge(root, f, again)
        builder.add_edge(again, NEQ, final)
        violations = check_well_formed(builder.build(Apma))
        kinds = {v.kind for v in violations}
        self.assertIn("canonical", kinds)
        self.assertIn("top-down", kinds)

    def test_unreachable_state_is_reported(self):
        """Testa que estados soltos violam a forma de árvore."""
        builder = AutomatonBuilder(DEFAULT_STORE)
        builder.new_state(StateKind.FINAL, frozenset())
        builder.new_state(StateKind.FINAL, frozenset({"l1"}))
        violations = check_well_formed(builder.build(Apma))
        self.assertEqual([v.kind for v in violations], ["tree"])


if __name__ == '__main__':
    unittest.main()
