"""
Configuração central/constantes do compilador de autômatos de casamento de padrões.
"""
import os

from dotenv import load_dotenv

load_dotenv()


# Configurações de logging
LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Tipos de autômato e níveis de poda aceitos pela CLI
AUTOMATON_KINDS = ("apma", "ca", "anpma")
PRUNING_LEVELS = ("none", "basic", "aggressive")

# Valores padrão das opções de compilação
DEFAULT_KIND = os.environ.get("PMA_KIND", "anpma")
DEFAULT_STRATEGY = os.environ.get("PMA_STRATEGY", "default")
DEFAULT_PRUNING = os.environ.get("PMA_PRUNING", "basic")

# Universo de termos usado por check/bench
DEFAULT_MAX_DEPTH = int(os.environ.get("PMA_MAX_DEPTH", "3"))
UNIVERSE_CAP = int(os.environ.get("PMA_UNIVERSE_CAP", "200000"))  # Limite de termos enumerados

# Número de threads para avaliar termos em paralelo (1 = sequencial)
CHECK_WORKERS = int(os.environ.get("PMA_CHECK_WORKERS", "1"))

# Verificação em tempo de execução de que E e N valem no termo avaliado
DEBUG_CHECKS = os.environ.get("PMA_DEBUG_CHECKS", "false").lower() == "true"

# Rótulos usados na saída textual
POSITION_ROOT_LABEL = "e"
NO_MATCH_LABEL = "(none)"
