import texttable

from typing import Any, Sequence

__all__ = ['render_table']


def render_table(header: Sequence[str], rows: Sequence[Sequence[Any]], precision: int = 6) -> str:
    t = texttable.Texttable()
    t.set_precision(precision)
    t.set_deco(texttable.Texttable.HEADER)
    t.add_rows([list(header), *[list(row) for row in rows]])
    return t.draw()
