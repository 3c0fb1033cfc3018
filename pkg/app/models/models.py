"""
Classes que representam os tipos de domínio do compilador: símbolos, assinaturas,
posições, padrões indexados, partições de consistência e traços de avaliação.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Tuple, Union

if TYPE_CHECKING:
    from app.modules.terms import Term


# Uma posição é a sequência de índices (a partir de 1) dos filhos; () é a raiz ε
Position = Tuple[int, ...]

ROOT: Position = ()


class SignatureError(Exception):
    """Exceção personalizada para erros de assinatura."""
    pass


class DuplicateSymbolError(SignatureError):
    """Exceção para símbolos declarados mais de uma vez."""
    pass


class InvalidPositionPairError(ValueError):
    """Exceção para pares de posições inválidos (posições iguais)."""
    pass


def format_position(position: Position) -> str:
    """
    Formata uma posição como índices separados por ponto; a raiz é "e".

    Args:
        position: Posição a ser formatada.

    Returns:
        str: Representação textual da posição.
    """
    if not position:
        return "e"
    return ".".join(str(i) for i in position)


def is_prefix(p: Position, q: Position) -> bool:
    """Retorna True se p ⊑ q."""
    return len(p) <= len(q) and q[:len(p)] == p


def is_strict_prefix(p: Position, q: Position) -> bool:
    """Retorna True se p é prefixo estrito de q."""
    return len(p) < len(q) and q[:len(p)] == p


def ancestors(position: Position) -> Iterator[Position]:
    """Percorre as posições p' ⊑ position, da raiz até a própria posição."""
    for size in range(len(position) + 1):
        yield position[:size]


@dataclass(frozen=True)
class Symbol:
    """Símbolo de função de um alfabeto ranqueado."""
    name: str
    arity: int

    def __str__(self) -> str:
        return self.name


class Neq(Enum):
    """Sentinela ≠: nenhum símbolo dos padrões vivos casou na posição."""
    NEQ = "neq"

    def __str__(self) -> str:
        return "<>"


class Check(Enum):
    """Resultado de uma comparação em um estado de consistência."""
    EQ = "check-eq"
    NEQ = "check-neq"

    def __str__(self) -> str:
        return "Y" if self is Check.EQ else "N"


NEQ = Neq.NEQ

# Rótulo de transição: símbolo, ≠ ou resultado de comparação
EdgeLabel = Union[Symbol, Neq, Check]


@dataclass
class Signature:
    """
    Alfabeto ranqueado com ordem de declaração.

    Identificadores declarados são símbolos de função; qualquer outro
    identificador em um termo lido é uma variável.
    """
    symbols: Dict[str, Symbol] = field(default_factory=dict)

    def declare(self, name: str, arity: int) -> Symbol:
        """
        Declara um novo símbolo.

        Args:
            name: Nome do símbolo.
            arity: Aridade (número natural).

        Returns:
            Symbol: O símbolo declarado.

        Raises:
            DuplicateSymbolError: Se o nome já estiver declarado.
            SignatureError: Se o nome for vazio ou a aridade negativa.
        """
        if not name:
            raise SignatureError("Nome de símbolo vazio")
        if arity < 0:
            raise SignatureError(f"Aridade inválida para {name}: {arity}")
        if name in self.symbols:
            existing = self.symbols[name]
            raise DuplicateSymbolError(
                f"Símbolo {name} já declarado com aridade {existing.arity}"
            )
        symbol = Symbol(name, arity)
        self.symbols[name] = symbol
        return symbol

    def lookup(self, name: str) -> Optional[Symbol]:
        return self.symbols.get(name)

    def is_variable_name(self, name: str) -> bool:
        return name not in self.symbols

    def order_of(self, symbol: Symbol) -> int:
        """Índice de declaração do símbolo (símbolos desconhecidos vão para o fim)."""
        for index, declared in enumerate(self.symbols.values()):
            if declared == symbol:
                return index
        return len(self.symbols)

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols.values())

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True, order=True)
class PositionPair:
    """Par não ordenado de posições distintas, guardado em ordem lexicográfica."""
    first: Position
    second: Position

    def __post_init__(self):
        if self.first == self.second:
            raise InvalidPositionPairError(
                f"Par de posições iguais: {format_position(self.first)}"
            )
        if self.first > self.second:
            raise InvalidPositionPairError(
                f"Par fora da ordem canônica: {{{format_position(self.first)},"
                f"{format_position(self.second)}}}"
            )

    @classmethod
    def of(cls, p: Position, q: Position) -> "PositionPair":
        """Cria o par canônico {p, q}."""
        p, q = tuple(p), tuple(q)
        return cls(p, q) if p < q else cls(q, p)

    def __iter__(self) -> Iterator[Position]:
        yield self.first
        yield self.second

    def __str__(self) -> str:
        return f"{{{format_position(self.first)},{format_position(self.second)}}}"


# Escolha de uma estratégia: posição (workF) ou par (workC)
Choice = Union[Position, PositionPair]


@dataclass(frozen=True)
class ConsistencyPartition:
    """Partição das posições do fringe em classes que devem ser iguais no termo."""
    classes: FrozenSet[FrozenSet[Position]] = frozenset()

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            if not cls:
                raise ValueError("Classe de consistência vazia")
            if seen & cls:
                raise ValueError("Classes de consistência não são disjuntas")
            seen |= cls

    @classmethod
    def of(cls, classes: Iterable[Iterable[Position]]) -> "ConsistencyPartition":
        return cls(frozenset(frozenset(tuple(p) for p in c) for c in classes))

    def pairs(self) -> FrozenSet[PositionPair]:
        """Todos os pares {p, q} contidos em alguma classe (a relação ⊆∈)."""
        result = set()
        for cls in self.classes:
            ordered = sorted(cls)
            for i, p in enumerate(ordered):
                for q in ordered[i + 1:]:
                    result.add(PositionPair(p, q))
        return frozenset(result)

    def contains_pair(self, pair: PositionPair) -> bool:
        return any(pair.first in cls and pair.second in cls for cls in self.classes)

    def positions(self) -> FrozenSet[Position]:
        return frozenset(p for cls in self.classes for p in cls)

    def sorted_classes(self) -> List[List[Position]]:
        return sorted(sorted(cls) for cls in self.classes)

    def __str__(self) -> str:
        rendered = [
            "{" + ",".join(format_position(p) for p in cls) + "}"
            for cls in self.sorted_classes()
        ]
        return "{" + ",".join(rendered) + "}"


@dataclass(frozen=True)
class IndexedPattern:
    """Padrão rotulado por um índice; a cabeça é sempre um símbolo de função."""
    index: Hashable
    pattern: "Term"


@dataclass(frozen=True)
class RenamedPattern:
    """Resultado do renomeamento: padrão linear anotado, partição e índice original."""
    index: Hashable
    linear: "Term"
    partition: ConsistencyPartition


@dataclass(frozen=True)
class TraceStep:
    """Um passo de avaliação: estado visitado e a transição tomada (None no fim)."""
    state: int
    action: Optional[EdgeLabel] = None


@dataclass(frozen=True)
class EvalTrace:
    """Sequência de passos de uma avaliação e o conjunto resultante."""
    steps: Tuple[TraceStep, ...]
    result: FrozenSet[Hashable]

    @property
    def length(self) -> int:
        """Profundidade de avaliação: número de estados visitados."""
        return len(self.steps)

    @property
    def comparisons(self) -> int:
        return sum(1 for step in self.steps if isinstance(step.action, Check))

    @property
    def inspections(self) -> int:
        return sum(1 for step in self.steps if isinstance(step.action, (Symbol, Neq)))


@dataclass(frozen=True)
class Violation:
    """Violação de boa formação encontrada em um autômato."""
    state: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"estado {self.state}: {self.kind}: {self.message}"


@dataclass
class TermReport:
    """Resultado da avaliação de um termo."""
    term: str
    result: List[str]
    trace_length: int
    comparisons: int
    inspections: int
    steps: List[str] = field(default_factory=list)


@dataclass
class RunReport:
    """Relatório de uma execução: resultados por termo e tamanho do autômato."""
    kind: str
    states: int
    breadth: int
    max_depth: int
    terms: List[TermReport] = field(default_factory=list)

    def to_dict(self) -> dict:
        """
        Converte o relatório para um dicionário.

        Returns:
            dict: Representação do relatório como dicionário.
        """
        data = {key: value for key, value in self.__dict__.items() if key != "terms"}
        data["terms"] = [dict(report.__dict__) for report in self.terms]
        return data
