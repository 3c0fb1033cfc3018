"""
Módulo de autômatos de consistência (CA).

Um CA decide, por comparações de subtermos, com quais partições de
consistência um termo é consistente. Estados redundantes (cuja comparação
já é implicada pelo caminho) podem ser detectados e removidos.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Hashable, Iterable, Mapping, Optional, Sequence, Tuple, Union

from config import LOG_FORMAT, LOG_LEVEL
from app.models.automata import AutomatonBuilder, Ca, StateKind
from app.models.models import Check, ConsistencyPartition, EdgeLabel, EvalTrace, IndexedPattern, PositionPair
from app.modules.apma import check_distinct_indices, construct_apma, evaluate, eval_apma, replay
from app.modules.knowledge import EqualityKnowledge
from app.modules.strategy import SelectionContext, Strategy, left_to_right, select
from app.modules.terms import DEFAULT_STORE, Term, TermStore, is_consistent_naive, rename

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('ca')


class CaError(Exception):
    """Exceção personalizada para erros de autômatos de consistência."""
    pass


class NotConsistencyStateError(CaError):
    """Exceção para consultas que exigem um estado de consistência."""
    pass


class Redundancy(Enum):
    F_REDUNDANT = "f-redundant"
    CHECK_EQ = "check-eq-redundant"
    CHECK_NEQ = "check-neq-redundant"
    DEAD = "dead"
    NOT_DETECTED = "not-detected"


@dataclass(frozen=True)
class RedundancyVerdict:
    """Resultado da detecção: tipo de redundância e a aresta sempre tomada."""
    kind: Redundancy
    forced: Optional[EdgeLabel] = None


IndexedPartitions = Union[Mapping[Hashable, ConsistencyPartition],
                          Iterable[Tuple[Hashable, ConsistencyPartition]]]


def construct_ca(partitions: IndexedPartitions, strategy: Strategy,
                 store: Optional[TermStore] = None) -> Ca:
    """
    Constrói um CA para as partições indexadas.

    Em cada estado, as partições vivas são as que não têm nenhum par em N; o
    trabalho são os pares dessas partições ainda fora de E.

    Args:
        partitions: Partições por índice (mapa ou pares (índice, partição)).
        strategy: Função de seleção de pares.
        store: Tabela de internação (usada só para reconstruir prefixos).

    Returns:
        Ca: O autômato construído.
    """
    items = tuple(partitions.items()) if isinstance(partitions, Mapping) else tuple(partitions)
    check_distinct_indices([index for index, _ in items])
    builder = AutomatonBuilder(store or DEFAULT_STORE)
    _build_ca(builder, items, frozenset(), frozenset(), strategy)
    ca = builder.build(Ca, partitions=items)
    logger.info(f"CA construído com estratégia {strategy.name}: {ca.state_count} estados")
    return ca


def _build_ca(builder: AutomatonBuilder, items: Sequence[Tuple[Hashable, ConsistencyPartition]],
              equal: FrozenSet[PositionPair], unequal: FrozenSet[PositionPair],
              strategy: Strategy) -> int:
    live = [(i, p) for i, p in items if not any(p.contains_pair(pair) for pair in unequal)]
    work = set()
    for _, partition in live:
        work |= partition.pairs()
    work -= equal
    if not work:
        return builder.new_state(StateKind.FINAL, frozenset(i for i, _ in live))

    context = SelectionContext(work_c=frozenset(work), live_partitions=tuple(p for _, p in live))
    pair = select(strategy, context)
    if not isinstance(pair, PositionPair):
        raise CaError(f"Estratégia {strategy.name} devolveu uma posição na construção de CA")
    state = builder.new_state(StateKind.CONSISTENCY, pair)
    on_equal = _build_ca(builder, items, equal | {pair}, unequal, strategy)
    builder.add_edge(state, Check.EQ, on_equal)
    on_unequal = _build_ca(builder, items, equal, unequal | {pair}, strategy)
    builder.add_edge(state, Check.NEQ, on_unequal)
    return state


def eval_ca(m: Ca, t: Term) -> Tuple[FrozenSet[Hashable], EvalTrace]:
    """
    Avalia o CA sobre t.

    Returns:
        Tuple: Índices das partições com as quais t é consistente e o traço.

    Raises:
        UndefinedPositionError: Se algum par comparado não existe em t.
    """
    return evaluate(m, t)


def detect_redundant(m: Ca, s: int) -> Redundancy:
    """
    Detecta se a comparação do estado s já é implicada pelo caminho.

    Usa o fecho transitivo de E, a composição N∘E e a desigualdade de
    subtermo. A detecção é correta mas não completa.

    Raises:
        NotConsistencyStateError: Se s não é um estado de consistência.
    """
    state = m.state(s)
    if state.kind is not StateKind.CONSISTENCY:
        raise NotConsistencyStateError(f"Estado {s} não é de consistência")
    _, knowledge = replay(m, s)
    return _pair_redundancy(knowledge, state.label)


def _pair_redundancy(knowledge: EqualityKnowledge, pair: PositionPair) -> Redundancy:
    if knowledge.known_equal(pair.first, pair.second):
        return Redundancy.CHECK_EQ
    if knowledge.known_unequal(pair.first, pair.second):
        return Redundancy.CHECK_NEQ
    return Redundancy.NOT_DETECTED


def remove_redundant(m: Ca) -> Ca:
    """
    Remove estados redundantes até o ponto fixo.

    Cada estado detectado é substituído pelo filho forçado (a aresta de entrada
    é redirecionada) e a outra subárvore é descartada. Varreduras em
    profundidade se repetem até nenhuma redundância ser detectada.

    Args:
        m: CA bem formado.

    Returns:
        Ca: CA equivalente, sem estados redundantes detectáveis.
    """
    current = m
    removed = 0
    while True:
        target = None
        for state_id in current.walk():
            if current.state(state_id).kind is not StateKind.CONSISTENCY:
                continue
            verdict = detect_redundant(current, state_id)
            if verdict is not Redundancy.NOT_DETECTED:
                target = (state_id, Check.EQ if verdict is Redundancy.CHECK_EQ else Check.NEQ)
                break
        if target is None:
            break
        builder = AutomatonBuilder.from_automaton(current)
        builder.splice(*target)
        current = builder.build(Ca, partitions=m.partitions)
        removed += 1
        logger.debug(f"Estado {target[0]} removido (aresta forçada {target[1]})")
    if removed:
        logger.info(f"{removed} estado(s) redundante(s) removido(s); restam {current.state_count}")
    return current


def unique_pairs(partitions: IndexedPartitions) -> FrozenSet[PositionPair]:
    """Pares de posições distintos que ocorrem nas partições."""
    items = partitions.items() if isinstance(partitions, Mapping) else partitions
    result = set()
    for _, partition in items:
        result |= partition.pairs()
    return frozenset(result)


def match_two_phase(patterns: Iterable[IndexedPattern], t: Term,
                    strategy: Optional[Strategy] = None) -> FrozenSet[Hashable]:
    """
    Casamento em duas fases: APMA sobre as partes lineares e depois o filtro
    de consistência sobre os sobreviventes.

    Args:
        patterns: Padrões indexados (lineares ou não).
        t: Termo fechado.
        strategy: Estratégia do APMA (padrão: esquerda para a direita).

    Returns:
        FrozenSet: Índices dos padrões que casam com t.
    """
    renamed = [rename(p) for p in patterns]
    if not renamed:
        return frozenset()
    linear = [IndexedPattern(r.index, r.linear) for r in renamed]
    apma = construct_apma(linear, strategy or Strategy("left-to-right", left_to_right))
    survivors, _ = eval_apma(apma, t)
    partitions = {r.index: r.partition for r in renamed}
    return frozenset(i for i in survivors if is_consistent_naive(t, partitions[i]))
