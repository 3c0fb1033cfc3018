"""
Ponto de entrada principal do compilador de autômatos de casamento de padrões.

Subcomandos:
    compile  Constrói o autômato e imprime o tamanho (e o DOT, com --dot).
    match    Avalia o autômato sobre um arquivo de termos fechados.
    check    Verifica todas as configurações contra os oráculos ingênuos.
    bench    Compara o ANPMA em duas fases com o ANPMA intercalado e podado.
"""
import argparse
import sys
from typing import List, Optional

from config import (
    AUTOMATON_KINDS, CHECK_WORKERS, DEFAULT_KIND, DEFAULT_MAX_DEPTH, DEFAULT_PRUNING,
    DEFAULT_STRATEGY, PRUNING_LEVELS, UNIVERSE_CAP,
)
from app.infra.file_store import FileStoreError
from app.models.models import SignatureError
from app.modules.anpma import AnpmaError
from app.modules.apma import ApmaError
from app.modules.ca import CaError
from app.modules.cli import CliError, cmd_bench, cmd_check, cmd_compile, cmd_match
from app.modules.strategy import StrategyError
from app.modules.terms import TermError
from app.modules.textio import TextIOError
from app.modules.universe import UniverseError


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _add_universe_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH,
                        help="profundidade máxima dos termos (constantes têm profundidade 1)")
    parser.add_argument("--symbols", type=_split, default=None,
                        help="subconjunto de símbolos, separados por vírgula")
    parser.add_argument("--cap", type=int, default=UNIVERSE_CAP,
                        help="limite do universo exaustivo ou tamanho da amostra")
    parser.add_argument("--seed", type=int, default=None,
                        help="sorteia --cap termos com esta semente em vez de enumerar")
    parser.add_argument("--workers", type=int, default=CHECK_WORKERS,
                        help="threads para avaliar os termos")


def build_parser() -> argparse.ArgumentParser:
    """Cria o parser de argumentos com os quatro subcomandos."""
    parser = argparse.ArgumentParser(
        prog="pma", description="Compilador de autômatos adaptativos de casamento de padrões"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    compile_parser = commands.add_parser("compile", help="constrói o autômato")
    compile_parser.add_argument("patterns", help="arquivo de padrões")
    compile_parser.add_argument("--kind", choices=AUTOMATON_KINDS, default=DEFAULT_KIND)
    compile_parser.add_argument("--strategy", default=DEFAULT_STRATEGY)
    compile_parser.add_argument("--pruning", choices=PRUNING_LEVELS, default=DEFAULT_PRUNING)
    compile_parser.add_argument("--dot", metavar="PATH", default=None, help="grava o DOT")
    compile_parser.add_argument("--nonredundant", action=argparse.BooleanOptionalAction,
                                default=None, help="restringe o trabalho às posições com símbolos")

    match_parser = commands.add_parser("match", help="avalia o autômato sobre termos")
    match_parser.add_argument("patterns", help="arquivo de padrões")
    match_parser.add_argument("terms", help="arquivo de termos fechados, um por linha")
    match_parser.add_argument("--kind", choices=AUTOMATON_KINDS, default=DEFAULT_KIND)
    match_parser.add_argument("--strategy", default=DEFAULT_STRATEGY)
    match_parser.add_argument("--pruning", choices=PRUNING_LEVELS, default=DEFAULT_PRUNING)
    match_parser.add_argument("--trace", action="store_true", help="imprime os passos")
    match_parser.add_argument("--json", action="store_true", help="imprime o relatório em JSON")

    check_parser = commands.add_parser("check", help="verifica contra os oráculos")
    check_parser.add_argument("patterns", help="arquivo de padrões")
    check_parser.add_argument("--strategy", type=_split, default=[DEFAULT_STRATEGY],
                              help="estratégias separadas por vírgula")
    check_parser.add_argument("--pruning", type=_split, default=list(PRUNING_LEVELS),
                              help="níveis de poda separados por vírgula")
    _add_universe_arguments(check_parser)

    bench_parser = commands.add_parser("bench", help="compara com a linha de base em duas fases")
    bench_parser.add_argument("patterns", help="arquivo de padrões")
    bench_parser.add_argument("--strategy", default=DEFAULT_STRATEGY)
    bench_parser.add_argument("--pruning", choices=PRUNING_LEVELS, default=DEFAULT_PRUNING)
    _add_universe_arguments(bench_parser)
    return parser


def run(args: argparse.Namespace) -> int:
    """Executa o subcomando escolhido e devolve o código de saída."""
    if args.command == "compile":
        return cmd_compile(args.patterns, args.kind, args.strategy, args.pruning, args.dot,
                           args.nonredundant)
    if args.command == "match":
        return cmd_match(args.patterns, args.terms, args.kind, args.strategy, args.pruning,
                         args.trace, args.json)
    if args.command == "check":
        return cmd_check(args.patterns, args.strategy, args.pruning, args.max_depth, args.symbols,
                         args.cap, args.seed, args.workers)
    return cmd_bench(args.patterns, args.strategy, args.pruning, args.max_depth, args.symbols,
                     args.cap, args.seed, args.workers)


def main(argv: Optional[List[str]] = None) -> int:
    """Função principal do aplicativo."""
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except KeyboardInterrupt:
        print("\n\nOperação cancelada pelo usuário.", file=sys.stderr)
        return 1
    except FileStoreError as e:
        print(f"Erro: {str(e)}", file=sys.stderr)
        return 1
    except (TextIOError, TermError, SignatureError) as e:
        print(f"Erro de leitura: {str(e)}", file=sys.stderr)
        return 1
    except (ApmaError, CaError, AnpmaError, StrategyError) as e:
        print(f"Erro na construção do autômato: {str(e)}", file=sys.stderr)
        return 1
    except (UniverseError, CliError) as e:
        print(f"Erro: {str(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
