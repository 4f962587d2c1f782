from pathlib import Path
import os

from dotenv import load_dotenv

# .env in the working directory may override the defaults below
load_dotenv()

DATA_DIR = Path(__file__).parent.parent / 'data'

# User-configurable settings
SETTINGS = {
    'partition_cap': 8,          # largest m for enumerate_partitions
    'naive_variable_cap': 8,     # decide_naive walks n^n leaves
    'node_budget': int(os.environ.get('EQQCSP_NODE_BUDGET', 2_000_000)),
    'workers': int(os.environ.get('EQQCSP_WORKERS', 1)),
    'memo_liveness': False,
    'zeta_cap': 4,               # (2n)^n matrix copies
    'classify_arity_cap': 6,
    'proof_block_cap': 10,       # variables per quantifier block in proof search
    'check_variable_cap': 24,    # largest generated formula --check will decide
    'log_level': os.environ.get('EQQCSP_LOG_LEVEL', 'WARNING'),
    'data_directory': DATA_DIR
}

# CLI exit codes
EXIT_CODES = {
    'true': 0,
    'false': 1,
    'usage': 2,
    'budget': 3
}

# Verdict classes per fragment, keyed by mode; citations live in data/verdicts.json
VERDICT_MODES = ('full', 'pi_k')

# Error messages
ERROR_MESSAGES = {
    'partition_cap': "partition enumeration over {m} variables exceeds the cap of {cap}",
    'naive_cap': "naive evaluation over {n} variables exceeds the cap of {cap}",
    'zeta_cap': "zeta over n={n} blocks exceeds the cap of {cap}; pass --force",
    'arity_cap': "relation arity {m} exceeds the classifier cap of {cap}",
    'block_cap': "quantifier block of {size} variables exceeds the proof search cap of {cap}",
    'check_cap': "--check skipped: {n} variables exceed the oracle cap of {cap}",
    'budget': "node budget of {budget} exhausted",
    'not_sentence': "formula has {free} free variables; a sentence is required",
    'strategy_false': "no winning strategy: the sentence is false"
}
