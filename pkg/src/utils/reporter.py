import io
from typing import Any, Iterable, List, Sequence, Tuple

from rich.console import Console
from rich.table import Table

Pair = Tuple[str, Any]


class Reporter:
    """Renders reports as stable key=value lines (structured) or rich tables (human)"""

    def __init__(self, structured: bool = False, width: int = 110):
        self.structured = structured
        self.width = width

    @staticmethod
    def export_structured(pairs: Iterable[Pair]) -> str:
        # Order is the caller's order; never sorted, never timestamped
        return ''.join(f"{key}={_scalar(value)}\n" for key, value in pairs)

    def export_table(self, title: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        table = Table(title=title, title_justify="left")
        for column in columns:
            table.add_column(column)
        for row in rows:
            table.add_row(*(_scalar(v) for v in row))
        buffer = io.StringIO()
        Console(file=buffer, width=self.width, color_system=None, highlight=False).print(table)
        return buffer.getvalue()

    def render(self, title: str, pairs: List[Pair]) -> str:
        if self.structured:
            return self.export_structured(pairs)
        return self.export_table(title, ["field", "value"], pairs)


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_scalar(v) for v in value)
    if value is None:
        return "-"
    return str(value)
