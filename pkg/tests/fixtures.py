"""
Conjuntos de padrões e partições compartilhados pelos testes.
"""
from typing import List, Tuple

from app.models.automata import AutomatonBuilder, Ca, StateKind
from app.models.models import Check, ConsistencyPartition, IndexedPattern, PositionPair, Signature
from app.modules.terms import DEFAULT_STORE, Term
from app.modules.textio import PatternFile, parse_pattern_file, parse_signature, parse_term


# f(a,b,x), f(c,b,x), f(c,b,c): a posição 2 é índice; inspecioná-la antes de 1 economiza um estado
LINEAR_FILE = """\
# três padrões lineares
sym f/3
sym a/0
sym b/0
sym c/0
script: e, 2, 1, 3
l1: f(a, b, x)
l2: f(c, b, x)
l3: f(c, b, c)
"""

SMALL_NONLINEAR_FILE = """\
sym f/2
sym a/0
sym b/0
l1: f(x, x)
l2: f(a, b)
l3: f(a, a)
"""

DIAGONAL_FILE = """\
sym f/2
sym a/0
sym b/0
l1: f(x, x)
l2: f(a, b)
"""

NESTED_FILE = """\
sym f/2
sym a/0
sym b/0
l1: f(x, x)
l2: f(x, f(x, y))
l3: f(x, f(y, x))
l4: f(f(x, y), x)
l5: f(f(y, x), x)
"""

SUCCESSOR_FILE = """\
sym f/2
sym s/1
sym a/0
l1: f(x, x)
l2: f(s(s(x)), s(s(y)))
"""


def load(text: str) -> PatternFile:
    return parse_pattern_file(text)


def linear_patterns() -> Tuple[Signature, List[IndexedPattern]]:
    pattern_file = load(LINEAR_FILE)
    return pattern_file.signature, pattern_file.patterns


def term(signature: Signature, text: str) -> Term:
    return parse_term(signature, text)


def three_partitions() -> List[Tuple[str, ConsistencyPartition]]:
    """P1 = {{1,2},{3}}, P2 = {{1,3},{2}}, P3 = {{1,2,3}}."""
    return [
        ("P1", ConsistencyPartition.of([[(1,), (2,)], [(3,)]])),
        ("P2", ConsistencyPartition.of([[(1,), (3,)], [(2,)]])),
        ("P3", ConsistencyPartition.of([[(1,), (2,), (3,)]])),
    ]


def pairwise_partitions(k: int) -> List[Tuple[str, ConsistencyPartition]]:
    """Uma partição por par {i,j} de posições 1..k; as demais posições ficam sozinhas."""
    result = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            others = [[(n,)] for n in range(1, k + 1) if n not in (i, j)]
            result.append((f"P{i}{j}", ConsistencyPartition.of([[(i,), (j,)]] + others)))
    return result


def ternary_signature() -> Signature:
    return parse_signature("sym f/3\nsym a/0\nsym b/0\nsym c/0")


def unpruned_three_partition_ca() -> Tuple[Ca, dict]:
    """
    CA de 11 estados para as três partições, com os dois estados redundantes
    explícitos. Retorna o autômato e os ids dos estados nomeados.
    """
    builder = AutomatonBuilder(DEFAULT_STORE)
    pair = PositionPair.of
    ids = {}
    ids["root"] = builder.new_state(StateKind.CONSISTENCY, pair((1,), (2,)))
    ids["13"] = builder.new_state(StateKind.CONSISTENCY, pair((1,), (3,)))
    ids["23_eq"] = builder.new_state(StateKind.CONSISTENCY, pair((2,), (3,)))
    all_three = builder.new_state(StateKind.FINAL, frozenset({"P1", "P2", "P3"}))
    first_two = builder.new_state(StateKind.FINAL, frozenset({"P1", "P2"}))
    ids["23_neq"] = builder.new_state(StateKind.CONSISTENCY, pair((2,), (3,)))
    empty_left = builder.new_state(StateKind.FINAL, frozenset())
    only_first = builder.new_state(StateKind.FINAL, frozenset({"P1"}))
    ids["13_right"] = builder.new_state(StateKind.CONSISTENCY, pair((1,), (3,)))
    only_second = builder.new_state(StateKind.FINAL, frozenset({"P2"}))
    empty_right = builder.new_state(StateKind.FINAL, frozenset())

    builder.add_edge(ids["root"], Check.EQ, ids["13"])
    builder.add_edge(ids["root"], Check.NEQ, ids["13_right"])
    builder.add_edge(ids["13"], Check.EQ, ids["23_eq"])
    builder.add_edge(ids["13"], Check.NEQ, ids["23_neq"])
    builder.add_edge(ids["23_eq"], Check.EQ, all_three)
    builder.add_edge(ids["23_eq"], Check.NEQ, first_two)
    builder.add_edge(ids["23_neq"], Check.EQ, empty_left)
    builder.add_edge(ids["23_neq"], Check.NEQ, only_first)
    builder.add_edge(ids["13_right"], Check.EQ, only_second)
    builder.add_edge(ids["13_right"], Check.NEQ, empty_right)
    return builder.build(Ca, partitions=tuple(three_partitions())), ids
