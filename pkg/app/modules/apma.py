"""
Módulo de autômatos adaptativos de casamento de padrões (APMA) para conjuntos
de padrões lineares.

Contém também o que é comum aos três tipos de autômato: o laço de avaliação,
a reconstrução do prefixo de um estado e a verificação de boa formação.
"""
import logging
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from config import LOG_FORMAT, LOG_LEVEL
from app.models.automata import Anpma, Apma, Automaton, AutomatonBuilder, StateKind
from app.models.models import (
    NEQ, Check, EvalTrace, IndexedPattern, Neq, Position, PositionPair, Signature, Symbol,
    TraceStep, Violation, format_position,
)
from app.modules.knowledge import EqualityKnowledge, effective_prefix
from app.modules.strategy import SelectionContext, Strategy, select
from app.modules.terms import (
    DEFAULT_STORE, Term, TermStore, UndefinedPositionError, extend_prefix, fringe,
    has_variable_at_or_above, is_linear, rename, subterm_at, symbol_at, unifies_with_prefix, walk,
)

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('apma')


class ApmaError(Exception):
    """Exceção personalizada para erros de construção de APMA."""
    pass


class NonLinearPatternError(ApmaError):
    """Exceção para padrões não lineares na entrada de um APMA."""
    pass


class DuplicateIndexError(ApmaError):
    """Exceção para índices de padrão repetidos."""
    pass


class UnreachableStateError(ApmaError):
    """Exceção para estados que não são alcançáveis a partir da raiz."""
    pass


def ordered_symbols(symbols: Iterable[Symbol], signature: Optional[Signature]) -> List[Symbol]:
    """Ordena símbolos pela ordem de declaração (ou por nome, sem assinatura)."""
    if signature is None:
        return sorted(set(symbols), key=lambda s: (s.name, s.arity))
    return sorted(set(symbols), key=lambda s: (signature.order_of(s), s.name, s.arity))


def check_distinct_indices(patterns: Sequence[Hashable]) -> None:
    seen = set()
    for index in patterns:
        if index in seen:
            raise DuplicateIndexError(f"Índice repetido: {index}")
        seen.add(index)


def construct_apma(patterns: Iterable[IndexedPattern], strategy: Strategy,
                   nonredundant: bool = False, signature: Optional[Signature] = None,
                   store: Optional[TermStore] = None) -> Apma:
    """
    Constrói um APMA para um conjunto de padrões lineares.

    Padrões lineares ainda não anotados são anotados com variáveis de posição.
    Com nonredundant=True, o trabalho de cada estado exclui as posições em que
    nenhum padrão vivo tem símbolo de função, de modo que nenhum estado é
    morto ou tem uma única transição forçada.

    Args:
        patterns: Padrões indexados lineares.
        strategy: Função de seleção de posições.
        nonredundant: Aplica a restrição do conjunto de trabalho.
        signature: Assinatura usada para ordenar as transições.
        store: Tabela de internação dos prefixos.

    Returns:
        Apma: O autômato construído.

    Raises:
        NonLinearPatternError: Se algum padrão não for linear.
        DuplicateIndexError: Se dois padrões tiverem o mesmo índice.
    """
    patterns = tuple(patterns)
    check_distinct_indices([p.index for p in patterns])
    for p in patterns:
        if not is_linear(p.pattern):
            logger.error(f"Padrão {p.index} não é linear: {p.pattern}")
            raise NonLinearPatternError(f"Padrão {p.index} não é linear: {p.pattern}")
    store = store or (patterns[0].pattern.store if patterns else DEFAULT_STORE)
    builder = AutomatonBuilder(store)

    if not patterns:
        logger.warning("Conjunto de padrões vazio: APMA com um único estado final ∅")
        builder.new_state(StateKind.FINAL, frozenset())
        return builder.build(Apma, patterns=patterns)

    live = [(p.index, rename(p).linear) for p in patterns]
    _build_apma(builder, store.position_variable(()), live, strategy, nonredundant, signature)
    apma = builder.build(Apma, patterns=patterns)
    logger.info(
        f"APMA construído com estratégia {strategy.name}: {apma.state_count} estados, "
        f"{apma.breadth} finais"
    )
    return apma


def _build_apma(builder: AutomatonBuilder, prefix: Term, live: List[Tuple[Hashable, Term]],
                strategy: Strategy, nonredundant: bool, signature: Optional[Signature]) -> int:
    work = set(fringe(prefix))
    if nonredundant:
        work = {p for p in work if any(symbol_at(pattern, p) is not None for _, pattern in live)}
    if not work:
        return builder.new_state(StateKind.FINAL, frozenset(index for index, _ in live))

    context = SelectionContext(
        work_f=frozenset(work),
        live_patterns=tuple(pattern for _, pattern in live),
        prefix=prefix,
    )
    position = select(strategy, context)
    state = builder.new_state(StateKind.MATCH, position)
    logger.debug(f"Estado {state}: inspeciona {format_position(position)} em {prefix}")

    symbols = ordered_symbols(
        [s for s in (symbol_at(pattern, position) for _, pattern in live) if s is not None],
        signature,
    )
    for symbol in symbols:
        child_prefix = extend_prefix(prefix, position, symbol)
        child_live = [(i, p) for i, p in live if unifies_with_prefix(p, child_prefix)]
        target = _build_apma(builder, child_prefix, child_live, strategy, nonredundant, signature)
        builder.add_edge(state, symbol, target)
    if any(has_variable_at_or_above(pattern, position) for _, pattern in live):
        child_prefix = extend_prefix(prefix, position, NEQ)
        child_live = [(i, p) for i, p in live if unifies_with_prefix(p, child_prefix)]
        target = _build_apma(builder, child_prefix, child_live, strategy, nonredundant, signature)
        builder.add_edge(state, NEQ, target)
    return state


def evaluate(m: Automaton, t: Term,
             observer: Optional[Callable[[PositionPair, bool], None]] = None
             ) -> Tuple[FrozenSet[Hashable], EvalTrace]:
    """
    Avalia qualquer autômato em árvore sobre o termo t.

    Estados de casamento seguem a aresta do símbolo na posição, ou a aresta ≠;
    sem nenhuma das duas o resultado é ∅. Estados de consistência comparam os
    dois subtermos por identidade.

    Args:
        m: Autômato (APMA, CA ou ANPMA).
        t: Termo fechado.
        observer: Chamado com (par, igual?) a cada comparação.

    Returns:
        Tuple: Conjunto de índices do estado final e o traço da avaliação.

    Raises:
        UndefinedPositionError: Se um estado de consistência cita posição indefinida.
    """
    steps: List[TraceStep] = []
    current = m.root
    while True:
        state = m.state(current)
        edges = m.edges(current)
        if state.kind is StateKind.FINAL:
            steps.append(TraceStep(current))
            return state.label, EvalTrace(tuple(steps), state.label)
        if state.kind is StateKind.MATCH:
            sub = subterm_at(t, state.label)
            action = None
            if sub is not None:
                if sub.is_application and sub.symbol in edges:
                    action = sub.symbol
                elif NEQ in edges:
                    action = NEQ
        else:
            pair = state.label
            left, right = subterm_at(t, pair.first), subterm_at(t, pair.second)
            if left is None or right is None:
                raise UndefinedPositionError(f"Comparação {pair} indefinida em {t}")
            equal = left is right
            action = Check.EQ if equal else Check.NEQ
            if observer is not None:
                observer(pair, equal)
            if action not in edges:
                action = None
        if action is None:
            steps.append(TraceStep(current))
            return frozenset(), EvalTrace(tuple(steps), frozenset())
        steps.append(TraceStep(current, action))
        current = edges[action]


def eval_apma(m: Apma, t: Term) -> Tuple[FrozenSet[Hashable], EvalTrace]:
    """
    Avalia o APMA sobre o termo fechado t.

    Returns:
        Tuple: Padrões que casam com t e o traço da avaliação.
    """
    return evaluate(m, t)

def replay(m: Automaton, s: int) -> Tuple[Term, EqualityKnowledge]:
    """
    Reconstrói o prefixo e o conhecimento (E, N) ao longo do caminho até s.

    O prefixo devolvido é o mais informado: inclui os símbolos deduzidos de
    igualdades conhecidas.

    Raises:
        UnreachableStateError: Se s não é alcançável a partir da raiz.
    """
    if s not in m.states:
        raise UnreachableStateError(f"Estado {s} não existe")
    path = m.path_to(s)
    if path is None:
        raise UnreachableStateError(f"Estado {s} não é alcançável a partir da raiz")
    relevant = relevance(m)
    literal = tracked = m.store.position_variable(())
    knowledge = EqualityKnowledge()
    for state_id, label in path:
        state = m.state(state_id)
        view = effective_prefix(tracked, knowledge, relevant)
        if state.kind is StateKind.MATCH:
            literal, tracked = advance_prefix(literal, view, state.label, label)
        elif label is Check.EQ:
            tracked, knowledge = view, knowledge.assume_equal(state.label)
        else:
            tracked, knowledge = view, knowledge.assume_unequal(state.label)
    return tracked, knowledge


def state_prefix(m: Automaton, s: int) -> Term:
    """
    Prefixo do estado s, reconstruído ao longo do caminho desde a raiz.

    Raises:
        UnreachableStateError: Se s não é alcançável.
    """
    prefix, _ = replay(m, s)
    return prefix


def relevance(m: Automaton) -> Callable[[Position], bool]:
    """
    Posições que o prefixo efetivo completa: as que têm símbolo em algum
    padrão renomeado, ou, sem padrões, as de comprimento até o maior rótulo.
    """
    renamed = getattr(m, "renamed", ())
    if renamed:
        positions = frozenset(p for r in renamed for p, sub in walk(r.linear) if sub.is_application)
        return lambda x: x in positions
    bound = label_bound(m)
    return lambda x: len(x) <= bound


def label_bound(m: Automaton) -> int:
    """Maior comprimento de posição citado em rótulos de estados."""
    bound = 0
    for state in m.states.values():
        if state.kind is StateKind.MATCH:
            bound = max(bound, len(state.label))
        elif state.kind is StateKind.CONSISTENCY:
            bound = max(bound, len(state.label.first), len(state.label.second))
    return bound


def check_well_formed(m: Automaton) -> List[Violation]:
    """
    Verifica a boa formação de um autômato.

    Verifica forma de árvore (uma aresta de entrada por estado, nenhuma na
    raiz, todos alcançáveis), estados top-down, canonicidade (nenhuma posição
    inspecionada duas vezes no mesmo caminho) e as arestas de cada tipo de
    estado. Em ANPMAs, os pares de consistência também precisam estar
    definidos no prefixo.

    Cada caminho carrega dois prefixos: o literal, que só registra as
    inspeções, e o efetivo, completado pelas igualdades conhecidas. Uma
    posição inspecionada é visível se é um buraco em qualquer um deles.

    Args:
        m: Autômato a verificar.

    Returns:
        List[Violation]: Lista vazia quando o autômato é bem formado.
    """
    violations: List[Violation] = []
    incoming: Dict[int, int] = {}
    for source, edges in m.transitions.items():
        for target in edges.values():
            incoming[target] = incoming.get(target, 0) + 1
            if target not in m.states:
                violations.append(Violation(source, "tree", f"aresta para estado inexistente {target}"))
    if incoming.get(m.root):
        violations.append(Violation(m.root, "tree", "a raiz tem aresta de entrada"))
    for state_id, count in sorted(incoming.items()):
        if count > 1:
            violations.append(Violation(state_id, "tree", f"{count} arestas de entrada"))
    reachable = set(m.walk())
    for state_id in sorted(set(m.states) - reachable):
        violations.append(Violation(state_id, "tree", "estado inalcançável"))

    relevant = relevance(m)
    check_pairs = isinstance(m, Anpma)
    root = m.store.position_variable(())
    stack = [(m.root, root, root, EqualityKnowledge(), frozenset())]
    visited = set()
    while stack:
        state_id, literal, tracked, knowledge, inspected = stack.pop()
        if state_id in visited or state_id not in m.states:
            continue
        visited.add(state_id)
        state = m.state(state_id)
        edges = m.edges(state_id)
        view = effective_prefix(tracked, knowledge, relevant)
        if state.kind is StateKind.FINAL:
            if edges:
                violations.append(Violation(state_id, "edges", "estado final com transições"))
            continue
        if state.kind is StateKind.CONSISTENCY:
            if set(edges) != {Check.EQ, Check.NEQ}:
                violations.append(Violation(state_id, "edges", "estado de consistência sem Y/N"))
            if check_pairs and any(subterm_at(view, p) is None for p in state.label):
                violations.append(Violation(state_id, "top-down", f"par {state.label} fora do prefixo"))
            for label, target in edges.items():
                if label is Check.EQ:
                    stack.append((target, literal, view, knowledge.assume_equal(state.label), inspected))
                elif label is Check.NEQ:
                    stack.append((target, literal, view, knowledge.assume_unequal(state.label), inspected))
            continue

        position = state.label
        if not (_is_hole(literal, position) or _is_hole(view, position)):
            violations.append(Violation(
                state_id, "top-down", f"posição {format_position(position)} não visível em {view}"
            ))
        if position in inspected:
            violations.append(Violation(
                state_id, "canonical", f"posição {format_position(position)} repetida no caminho"
            ))
        for label, target in edges.items():
            if not isinstance(label, (Symbol, Neq)):
                violations.append(Violation(state_id, "edges", f"aresta inválida {label}"))
                continue
            child_literal, child_view = advance_prefix(literal, view, position, label)
            stack.append((target, child_literal, child_view, knowledge, inspected | {position}))
    return violations


def _is_hole(prefix: Term, position: Position) -> bool:
    sub = subterm_at(prefix, position)
    return sub is not None and sub.is_variable


def advance_prefix(literal: Term, view: Term, position: Position, label) -> Tuple[Term, Term]:
    """
    Registra o que foi observado em `position` nos dois prefixos do caminho.

    O literal muda só quando a posição é um buraco nele; o efetivo (`view`,
    já completado pelas igualdades) muda só quando a posição é um buraco nele.
    """
    if _is_hole(literal, position):
        literal = extend_prefix(literal, position, label)
    if _is_hole(view, position):
        view = extend_prefix(view, position, label)
    return literal, view
