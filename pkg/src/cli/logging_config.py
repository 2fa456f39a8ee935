# "src/cli/logging_config.py"

## Console plumbing for the command line:
## - configure_logging installs one RichHandler on the root logger (stderr)
## - console / print_line / print_table write the results (stdout)

import logging

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

LEVELS = {-1: logging.WARNING, 0: logging.INFO, 1: logging.DEBUG}


def configure_logging(verbosity=0):
    """-1 quiet (WARNING), 0 default (INFO), 1 or more verbose (DEBUG)."""
    level = LEVELS[max(-1, min(verbosity, 1))]
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(level)
    return root


def console():
    # a fresh Console picks up the current sys.stdout
    return Console(highlight=False, soft_wrap=True)


def print_line(text):
    console().print(text, markup=False)


def print_table(title, frame):
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column))
    for row in frame.itertuples(index=False):
        table.add_row(*("" if value is None else str(value) for value in row))
    console().print(table)


# Example use case
if __name__ == "__main__":
    import pandas as pd

    configure_logging(1)
    logging.getLogger(__name__).debug("debug records are visible")
    print_table("demo", pd.DataFrame({"theorem": ["thmE"], "status": ["pass"]}))
