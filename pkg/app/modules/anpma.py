"""
Módulo de autômatos adaptativos para padrões não lineares (ANPMA).

Um ANPMA intercala estados de casamento (inspecionam o símbolo numa posição)
e estados de consistência (comparam dois subtermos). A construção renomeia os
padrões, e em cada estado calcula:

- os padrões vivos (unificam com o prefixo e não contradizem E/N);
- workF, as posições do fringe do prefixo ainda por inspecionar;
- workC, os pares das partições vivas definidos no prefixo e fora de E.

Os níveis de poda controlam quanto conhecimento é usado nesses cálculos:

- none: o algoritmo literal (só E e N como conjuntos);
- basic: transitividade/congruência de E, N∘E, desigualdade de subtermo e
  símbolos já observados no prefixo;
- aggressive: além disso, propaga símbolos entre posições iguais e descarta
  padrões incompatíveis com E ou que exigiriam igualdade em um par de N.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from config import DEBUG_CHECKS, LOG_FORMAT, LOG_LEVEL
from app.models.automata import Anpma, Automaton, AutomatonBuilder, StateKind
from app.models.models import (
    NEQ, Check, EvalTrace, IndexedPattern, Position, PositionPair, RenamedPattern, Signature,
    format_position,
)
from app.modules.apma import check_distinct_indices, evaluate, ordered_symbols, replay
from app.modules.ca import Redundancy, RedundancyVerdict
from app.modules.knowledge import (
    EqualityKnowledge, effective_prefix, prefix_forces_equal, prefix_forces_unequal,
)
from app.modules.strategy import SelectionContext, Strategy, left_to_right, select
from app.modules.terms import (
    DEFAULT_STORE, Term, TermStore, extend_prefix, fringe, has_variable_at_or_above, is_ground,
    make_pattern, rename, subterm_at, symbol_at, unifies_with_prefix, walk,
)

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('anpma')


class AnpmaError(Exception):
    """Exceção personalizada para erros de ANPMA."""
    pass


class CorrectnessViolationError(AnpmaError):
    """Exceção para autômatos que discordam sobre o resultado de um termo."""
    pass


class KnowledgeViolationError(AnpmaError):
    """Exceção para conhecimento derivado que não vale no termo avaliado."""
    pass


class Pruning(Enum):
    NONE = "none"
    BASIC = "basic"
    AGGRESSIVE = "aggressive"


@dataclass
class _Analysis:
    view: Term
    live: List[RenamedPattern]
    work_f: FrozenSet[Position]
    work_c: FrozenSet[PositionPair]


class _Rules:
    """Regras de vivacidade e de trabalho para um nível de poda."""

    def __init__(self, renamed: Sequence[RenamedPattern], pruning: Pruning, nonredundant: bool):
        self.pruning = pruning
        self.nonredundant = nonredundant
        self.symbol_positions = frozenset(
            p for r in renamed for p, sub in walk(r.linear) if sub.is_application
        )

    def relevant(self, position: Position) -> bool:
        return position in self.symbol_positions

    def view(self, prefix: Term, knowledge: EqualityKnowledge) -> Term:
        if self.pruning is Pruning.AGGRESSIVE:
            return effective_prefix(prefix, knowledge, self.relevant)
        return prefix

    def alive(self, r: RenamedPattern, view: Term, knowledge: EqualityKnowledge) -> bool:
        if not unifies_with_prefix(r.linear, view):
            return False
        if self.pruning is Pruning.NONE:
            return not any(r.partition.contains_pair(pair) for pair in knowledge.unequal)
        for pair in r.partition.pairs():
            if knowledge.known_unequal(pair.first, pair.second):
                return False
            if prefix_forces_unequal(view, pair.first, pair.second):
                return False
        if self.pruning is Pruning.AGGRESSIVE:
            return _compatible_with_equalities(r, knowledge) and \
                _compatible_with_inequalities(r, knowledge)
        return True

    def settled(self, view: Term, knowledge: EqualityKnowledge, pair: PositionPair) -> bool:
        """O par já é conhecido igual e não precisa ser comparado."""
        if self.pruning is Pruning.NONE:
            return pair in knowledge.equal
        return knowledge.known_equal(pair.first, pair.second) or \
            prefix_forces_equal(view, pair.first, pair.second)

    def analyse(self, prefix: Term, knowledge: EqualityKnowledge,
                candidates: Sequence[RenamedPattern]) -> _Analysis:
        view = self.view(prefix, knowledge)
        live = [r for r in candidates if self.alive(r, view, knowledge)]
        work_f = set(fringe(view))
        if self.nonredundant:
            work_f = {p for p in work_f if any(symbol_at(r.linear, p) is not None for r in live)}
        work_c = set()
        for r in live:
            for pair in r.partition.pairs():
                if subterm_at(view, pair.first) is None or subterm_at(view, pair.second) is None:
                    continue
                if not self.settled(view, knowledge, pair):
                    work_c.add(pair)
        return _Analysis(view, live, frozenset(work_f), frozenset(work_c))


def _compatible(a: Term, b: Term) -> bool:
    """Os dois padrões lineares admitem um termo comum (variáveis são curingas)."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x.is_variable or y.is_variable:
            continue
        if x.symbol != y.symbol:
            return False
        stack.extend(zip(x.children, y.children))
    return True


def _compatible_with_equalities(r: RenamedPattern, knowledge: EqualityKnowledge) -> bool:
    """Descarta padrões que exigem formas incompatíveis em posições sabidamente iguais."""
    if not knowledge.equal:
        return True
    for x, sub in walk(r.linear):
        if not sub.is_application:
            continue
        for y in knowledge.equivalents(x):
            other = subterm_at(r.linear, y)
            if y != x and other is not None and not _compatible(sub, other):
                return False
    return True


def _compatible_with_inequalities(r: RenamedPattern, knowledge: EqualityKnowledge) -> bool:
    """Descarta padrões que exigem o mesmo termo fechado em posições sabidamente diferentes."""
    for pair in knowledge.unequal:
        for x in knowledge.equivalents(pair.first):
            left = subterm_at(r.linear, x)
            if left is None or not is_ground(left):
                continue
            for y in knowledge.equivalents(pair.second):
                if subterm_at(r.linear, y) is left:
                    return False
    return True


def _as_pruning(pruning: Union[str, Pruning]) -> Pruning:
    if isinstance(pruning, Pruning):
        return pruning
    try:
        return Pruning(pruning)
    except ValueError:
        raise AnpmaError(f"Nível de poda desconhecido: {pruning}")


def construct_anpma(patterns: Iterable[IndexedPattern], strategy: Strategy,
                    pruning: Union[str, Pruning] = Pruning.NONE,
                    nonredundant: Optional[bool] = None, signature: Optional[Signature] = None,
                    store: Optional[TermStore] = None) -> Anpma:
    """
    Constrói um ANPMA para padrões possivelmente não lineares.

    Args:
        patterns: Padrões indexados.
        strategy: Função de seleção sobre workF ⊎ workC.
        pruning: Nível de poda (none, basic ou aggressive).
        nonredundant: Restringe workF às posições com símbolo em algum padrão
            vivo. Padrão: ativo sempre que pruning != none.
        signature: Assinatura usada para ordenar as transições.
        store: Tabela de internação dos prefixos.

    Returns:
        Anpma: O autômato construído.

    Raises:
        AnpmaError: Para níveis de poda desconhecidos.
        DuplicateIndexError: Se dois padrões tiverem o mesmo índice.
    """
    pruning = _as_pruning(pruning)
    if nonredundant is None:
        nonredundant = pruning is not Pruning.NONE
    patterns = tuple(make_pattern(p.index, p.pattern) for p in patterns)
    check_distinct_indices([p.index for p in patterns])
    renamed = tuple(rename(p) for p in patterns)
    store = store or (patterns[0].pattern.store if patterns else DEFAULT_STORE)
    builder = AutomatonBuilder(store)

    if not patterns:
        logger.warning("Conjunto de padrões vazio: ANPMA com um único estado final ∅")
        builder.new_state(StateKind.FINAL, frozenset())
        return builder.build(Anpma, patterns=patterns, renamed=renamed)

    rules = _Rules(renamed, pruning, nonredundant)
    _build(builder, rules, strategy, signature, store.position_variable(()), EqualityKnowledge(),
           list(renamed))
    anpma = builder.build(Anpma, patterns=patterns, renamed=renamed)
    logger.info(
        f"ANPMA construído (estratégia {strategy.name}, poda {pruning.value}): "
        f"{anpma.state_count} estados, {anpma.count(StateKind.CONSISTENCY)} de consistência"
    )
    return anpma


def _build(builder: AutomatonBuilder, rules: _Rules, strategy: Strategy,
           signature: Optional[Signature], prefix: Term, knowledge: EqualityKnowledge,
           candidates: List[RenamedPattern]) -> int:
    analysis = rules.analyse(prefix, knowledge, candidates)
    if not analysis.live or (not analysis.work_f and not analysis.work_c):
        return builder.new_state(StateKind.FINAL, frozenset(r.index for r in analysis.live))

    context = SelectionContext(
        work_f=analysis.work_f,
        work_c=analysis.work_c,
        live_patterns=tuple(r.linear for r in analysis.live),
        live_partitions=tuple(r.partition for r in analysis.live),
        prefix=analysis.view,
    )
    choice = select(strategy, context)
    view = analysis.view

    if isinstance(choice, PositionPair):
        state = builder.new_state(StateKind.CONSISTENCY, choice)
        logger.debug(f"Estado {state}: compara {choice} com {knowledge}")
        on_equal = _build(builder, rules, strategy, signature, view,
                          knowledge.assume_equal(choice), analysis.live)
        builder.add_edge(state, Check.EQ, on_equal)
        on_unequal = _build(builder, rules, strategy, signature, view,
                            knowledge.assume_unequal(choice), analysis.live)
        builder.add_edge(state, Check.NEQ, on_unequal)
        return state

    state = builder.new_state(StateKind.MATCH, choice)
    logger.debug(f"Estado {state}: inspeciona {format_position(choice)} em {view}")
    symbols = ordered_symbols(
        [s for s in (symbol_at(r.linear, choice) for r in analysis.live) if s is not None],
        signature,
    )
    for symbol in symbols:
        target = _build(builder, rules, strategy, signature, extend_prefix(view, choice, symbol),
                        knowledge, analysis.live)
        builder.add_edge(state, symbol, target)
    if any(has_variable_at_or_above(r.linear, choice) for r in analysis.live):
        target = _build(builder, rules, strategy, signature, extend_prefix(view, choice, NEQ),
                        knowledge, analysis.live)
        builder.add_edge(state, NEQ, target)
    return state


def eval_anpma(m: Anpma, t: Term,
               check_knowledge: Optional[bool] = None) -> Tuple[FrozenSet[Hashable], EvalTrace]:
    """
    Avalia o ANPMA sobre o termo fechado t.

    Args:
        m: ANPMA construído.
        t: Termo fechado.
        check_knowledge: Verifica, a cada comparação, que o resultado não
            contradiz o que E e N já implicavam (padrão: config.DEBUG_CHECKS).

    Returns:
        Tuple: Padrões que casam com t e o traço da avaliação.

    Raises:
        KnowledgeViolationError: Se a verificação estiver ativa e falhar.
    """
    result, trace = evaluate(m, t)
    if check_knowledge if check_knowledge is not None else DEBUG_CHECKS:
        _verify_knowledge(m, t, trace)
    return result, trace


def _verify_knowledge(m: Automaton, t: Term, trace: EvalTrace) -> None:
    knowledge = EqualityKnowledge()
    for step in trace.steps:
        state = m.state(step.state)
        if state.kind is not StateKind.CONSISTENCY or step.action is None:
            continue
        pair = state.label
        equal = step.action is Check.EQ
        if equal and knowledge.known_unequal(pair.first, pair.second):
            raise KnowledgeViolationError(f"{pair} igual em {t}, mas {knowledge} implica diferença")
        if not equal and knowledge.known_equal(pair.first, pair.second):
            raise KnowledgeViolationError(f"{pair} diferente em {t}, mas {knowledge} implica igualdade")
        knowledge = knowledge.assume_equal(pair) if equal else knowledge.assume_unequal(pair)


def detect_redundant_anpma(m: Anpma, s: int) -> RedundancyVerdict:
    """
    Detecta se o estado s é redundante.

    Reconstrói o prefixo e o conhecimento do caminho e aplica todas as regras
    disponíveis (as do nível aggressive). A detecção é correta mas não
    completa.

    Args:
        m: ANPMA.
        s: Estado não final.

    Returns:
        RedundancyVerdict: Tipo da redundância e a aresta sempre tomada.

    Raises:
        AnpmaError: Se s for um estado final.
    """
    state = m.state(s)
    if state.kind is StateKind.FINAL:
        raise AnpmaError(f"Estado {s} é final")
    prefix, knowledge = replay(m, s)
    rules = _Rules(m.renamed, Pruning.AGGRESSIVE, True)
    view = rules.view(prefix, knowledge)
    live = [r for r in m.renamed if rules.alive(r, view, knowledge)]
    if not live:
        return RedundancyVerdict(Redundancy.DEAD)
    edges = m.edges(s)

    if state.kind is StateKind.CONSISTENCY:
        pair = state.label
        if knowledge.known_equal(pair.first, pair.second) or \
                prefix_forces_equal(view, pair.first, pair.second):
            return RedundancyVerdict(Redundancy.CHECK_EQ, Check.EQ)
        if knowledge.known_unequal(pair.first, pair.second) or \
                prefix_forces_unequal(view, pair.first, pair.second):
            return RedundancyVerdict(Redundancy.CHECK_NEQ, Check.NEQ)
        return RedundancyVerdict(Redundancy.NOT_DETECTED)

    position = state.label
    known = subterm_at(view, position)
    if known is not None and known.is_application:
        forced = known.symbol if known.symbol in edges else (NEQ if NEQ in edges else None)
        if forced is not None:
            return RedundancyVerdict(Redundancy.F_REDUNDANT, forced)
    if NEQ in edges and all(symbol_at(r.linear, position) is None for r in live):
        return RedundancyVerdict(Redundancy.F_REDUNDANT, NEQ)
    return RedundancyVerdict(Redundancy.NOT_DETECTED)


def remove_redundant_anpma(m: Anpma) -> Anpma:
    """
    Remove estados redundantes detectados até o ponto fixo.

    Estados com aresta forçada são substituídos pelo filho forçado; estados
    mortos viram estados finais ∅.
    """
    current = m
    while True:
        target = None
        for state_id in current.walk():
            if current.is_final(state_id):
                continue
            verdict = detect_redundant_anpma(current, state_id)
            if verdict.kind is not Redundancy.NOT_DETECTED:
                target = (state_id, verdict)
                break
        if target is None:
            return current
        state_id, verdict = target
        builder = AutomatonBuilder.from_automaton(current)
        if verdict.kind is Redundancy.DEAD:
            for child in list(current.edges(state_id).values()):
                builder.drop_subtree(child)
            builder.relabel(state_id, StateKind.FINAL, frozenset())
        else:
            builder.splice(state_id, verdict.forced)
        logger.debug(f"Estado {state_id} removido: {verdict.kind.value}")
        current = builder.build(Anpma, patterns=m.patterns, renamed=m.renamed)


class Dominance(Enum):
    M1_DOMINATES = "m1-dominates"
    M2_DOMINATES = "m2-dominates"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass
class EfficiencyVerdict:
    """Resultado da comparação ponto a ponto das profundidades de avaliação."""
    kind: Dominance
    m1_better: List[Term] = field(default_factory=list)
    m2_better: List[Term] = field(default_factory=list)
    terms: int = 0

    @property
    def witnesses(self) -> List[Term]:
        if self.kind is Dominance.M1_DOMINATES:
            return self.m1_better
        if self.kind is Dominance.M2_DOMINATES:
            return self.m2_better
        if self.kind is Dominance.INCOMPARABLE:
            return [self.m1_better[0], self.m2_better[0]]
        return []


def compare_efficiency(m1: Automaton, m2: Automaton, universe: Iterable[Term],
                       witness_limit: int = 20) -> EfficiencyVerdict:
    """
    Compara dois autômatos do mesmo conjunto de padrões termo a termo.

    Args:
        m1: Primeiro autômato.
        m2: Segundo autômato.
        universe: Termos fechados a avaliar.
        witness_limit: Máximo de testemunhas guardadas por direção.

    Returns:
        EfficiencyVerdict: Dominância e termos testemunha.

    Raises:
        CorrectnessViolationError: Se os autômatos discordam em algum termo.
    """
    m1_better: List[Term] = []
    m2_better: List[Term] = []
    strict_m1 = strict_m2 = 0
    count = 0
    for t in universe:
        count += 1
        r1, trace1 = evaluate(m1, t)
        r2, trace2 = evaluate(m2, t)
        if r1 != r2:
            logger.error(f"Autômatos discordam em {t}")
            raise CorrectnessViolationError(
                f"Resultados diferentes para {t}: {sorted(map(str, r1))} vs {sorted(map(str, r2))}"
            )
        if trace1.length < trace2.length:
            strict_m1 += 1
            if len(m1_better) < witness_limit:
                m1_better.append(t)
        elif trace2.length < trace1.length:
            strict_m2 += 1
            if len(m2_better) < witness_limit:
                m2_better.append(t)
    if strict_m1 and strict_m2:
        kind = Dominance.INCOMPARABLE
    elif strict_m1:
        kind = Dominance.M1_DOMINATES
    elif strict_m2:
        kind = Dominance.M2_DOMINATES
    else:
        kind = Dominance.EQUAL
    return EfficiencyVerdict(kind, m1_better, m2_better, count)


def two_phase_baseline(patterns: Iterable[IndexedPattern],
                       signature: Optional[Signature] = None) -> Anpma:
    """
    ANPMA de referência: esgota workF antes de qualquer comparação.

    Equivale a um APMA sem estados redundantes sobre as partes lineares
    seguido de um CA literal sobre as partições dos sobreviventes.
    """
    return construct_anpma(
        patterns, Strategy("two-phase", left_to_right), Pruning.NONE,
        nonredundant=True, signature=signature,
    )
