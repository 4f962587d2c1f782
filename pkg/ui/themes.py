from rich.console import Console
from rich.theme import Theme

# Rich theme
custom_theme = Theme({
    "primary": "bold cyan",
    "success": "bold #51CF66",
    "warning": "bold #FFD93D",
    "info": "#6C5CE7",
    "error": "bold #FF4757",
    "muted": "dim white",
    "universal": "magenta",
    "existential": "green"
})

# Tables and logs go to stderr; result text is written to stdout unstyled
console = Console(theme=custom_theme, stderr=True)

# Verdict word -> style
VERDICT_STYLES = {
    'TRUE': 'success',
    'ACCEPT': 'success',
    'DEFINABLE': 'success',
    'GENERATED': 'success',
    'CHECKED': 'success',
    'FALSE': 'error',
    'REJECT': 'error',
    'MISMATCH': 'error',
    'NOT-DEFINABLE': 'error',
    'ERROR': 'error',
    'BUDGET-EXHAUSTED': 'warning'
}


def verdict_style(verdict: str) -> str:
    return VERDICT_STYLES.get(verdict.split()[0], 'primary')

