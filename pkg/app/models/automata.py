"""
Representação dos autômatos em árvore (APMA, CA e ANPMA) e do construtor
compartilhado pelas três construções.
"""
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import TYPE_CHECKING, Dict, FrozenSet, Hashable, Iterator, List, Mapping, Optional, Tuple, Union

from app.models.models import (
    Check, ConsistencyPartition, EdgeLabel, IndexedPattern, Position, PositionPair, RenamedPattern,
    format_position,
)

if TYPE_CHECKING:
    from app.modules.terms import TermStore


class StateKind(Enum):
    MATCH = "match"
    CONSISTENCY = "consistency"
    FINAL = "final"


StateLabel = Union[Position, PositionPair, FrozenSet[Hashable]]


@dataclass(frozen=True)
class State:
    """Estado rotulado: posição (casamento), par (consistência) ou conjunto de índices (final)."""
    id: int
    kind: StateKind
    label: StateLabel

    def describe(self) -> str:
        """Rótulo textual no formato usado pela saída da CLI e pelo DOT."""
        if self.kind is StateKind.MATCH:
            return format_position(self.label)
        if self.kind is StateKind.CONSISTENCY:
            return str(self.label)
        return "{" + ",".join(sorted(str(i) for i in self.label)) + "}"


@dataclass(frozen=True, eq=False)
class Automaton:
    """
    Autômato em árvore com raiz, estados rotulados e transições parciais.

    Instâncias são imutáveis: os mapas são expostos como MappingProxyType.
    """
    root: int
    states: Mapping[int, State]
    transitions: Mapping[int, Mapping[EdgeLabel, int]]
    store: "TermStore"

    kind_name = "automaton"

    def state(self, state_id: int) -> State:
        return self.states[state_id]

    def edges(self, state_id: int) -> Mapping[EdgeLabel, int]:
        return self.transitions.get(state_id, MappingProxyType({}))

    def is_final(self, state_id: int) -> bool:
        return self.states[state_id].kind is StateKind.FINAL

    def parents(self) -> Dict[int, Tuple[int, EdgeLabel]]:
        """Mapa filho -> (pai, rótulo da aresta)."""
        result = {}
        for source, edges in self.transitions.items():
            for label, target in edges.items():
                result[target] = (source, label)
        return result

    def path_to(self, state_id: int) -> Optional[List[Tuple[int, EdgeLabel]]]:
        """
        Caminho da raiz até o estado, como lista de (estado, aresta tomada).

        Returns:
            Optional[List]: O caminho, ou None se o estado não é alcançável.
        """
        parents = self.parents()
        path = []
        current = state_id
        visited = set()
        while current != self.root:
            if current not in parents or current in visited:
                return None
            visited.add(current)
            parent, label = parents[current]
            path.append((parent, label))
            current = parent
        path.reverse()
        return path

    def walk(self) -> Iterator[int]:
        """Estados alcançáveis em profundidade, na ordem das arestas."""
        stack = [self.root]
        seen = set()
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            yield current
            stack.extend(reversed(list(self.edges(current).values())))

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def breadth(self) -> int:
        """Número de estados finais."""
        return self.count(StateKind.FINAL)

    def count(self, kind: StateKind) -> int:
        return sum(1 for s in self.states.values() if s.kind is kind)

    @property
    def max_depth(self) -> int:
        """Comprimento (em arestas) do maior caminho da raiz até uma folha."""
        depth = {self.root: 0}
        best = 0
        for state_id in self.walk():
            for target in self.edges(state_id).values():
                depth[target] = depth[state_id] + 1
                best = max(best, depth[target])
        return best


@dataclass(frozen=True, eq=False)
class Apma(Automaton):
    """Autômato adaptativo para padrões lineares anotados."""
    patterns: Tuple[IndexedPattern, ...] = ()

    kind_name = "apma"


@dataclass(frozen=True, eq=False)
class Ca(Automaton):
    """Autômato de consistência sobre partições indexadas."""
    partitions: Tuple[Tuple[Hashable, ConsistencyPartition], ...] = ()

    kind_name = "ca"


@dataclass(frozen=True, eq=False)
class Anpma(Automaton):
    """Autômato adaptativo para padrões não lineares (casamento + consistência)."""
    patterns: Tuple[IndexedPattern, ...] = ()
    renamed: Tuple[RenamedPattern, ...] = ()

    kind_name = "anpma"


@dataclass
class AutomatonBuilder:
    """
    Construtor mutável de autômatos.

    Os identificadores de estado são alocados por um contador monótono, na
    ordem de construção.
    """
    store: "TermStore"
    states: Dict[int, State] = field(default_factory=dict)
    transitions: Dict[int, Dict[EdgeLabel, int]] = field(default_factory=dict)
    root: Optional[int] = None
    next_id: int = 0

    @classmethod
    def from_automaton(cls, automaton: Automaton) -> "AutomatonBuilder":
        """Cria um construtor com uma cópia dos estados e transições."""
        builder = cls(store=automaton.store)
        builder.states = dict(automaton.states)
        builder.transitions = {s: dict(e) for s, e in automaton.transitions.items()}
        builder.root = automaton.root
        builder.next_id = max(automaton.states, default=-1) + 1
        return builder

    def new_state(self, kind: StateKind, label: StateLabel) -> int:
        state_id = self.next_id
        self.next_id += 1
        self.states[state_id] = State(state_id, kind, label)
        if self.root is None:
            self.root = state_id
        return state_id

    def relabel(self, state_id: int, kind: StateKind, label: StateLabel) -> None:
        """Troca o tipo e o rótulo de um estado já alocado."""
        self.states[state_id] = State(state_id, kind, label)
        if kind is StateKind.FINAL:
            self.transitions.pop(state_id, None)

    def add_edge(self, source: int, label: EdgeLabel, target: int) -> None:
        self.transitions.setdefault(source, {})[label] = target

    def drop_subtree(self, state_id: int) -> None:
        """Remove o estado e todos os seus descendentes."""
        stack = [state_id]
        while stack:
            current = stack.pop()
            self.states.pop(current, None)
            stack.extend(self.transitions.pop(current, {}).values())

    def splice(self, state_id: int, keep: EdgeLabel) -> None:
        """
        Remove um estado cuja aresta `keep` é sempre tomada.

        A aresta de entrada passa a apontar para o filho forçado e as demais
        subárvores do estado são descartadas.
        """
        edges = self.transitions.pop(state_id, {})
        forced = edges.pop(keep)
        for other in edges.values():
            self.drop_subtree(other)
        self.states.pop(state_id)
        if state_id == self.root:
            self.root = forced
            return
        for source, out in self.transitions.items():
            for label, target in out.items():
                if target == state_id:
                    out[label] = forced
                    return

    def build(self, cls=Automaton, **extra) -> Automaton:
        """Congela o construtor em um autômato imutável do tipo pedido."""
        states = MappingProxyType(dict(self.states))
        transitions = MappingProxyType({
            s: MappingProxyType(dict(e)) for s, e in self.transitions.items() if e
        })
        return cls(root=self.root, states=states, transitions=transitions, store=self.store, **extra)


CHECK_LABELS = (Check.EQ, Check.NEQ)
