"""Bundled data files and the plain polynomial-list format.

A polynomial list file has an optional ``vars:`` line naming the variables,
then one polynomial per line; ``#`` starts a comment.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import ParseError
from .multipoly import GREVLEX, VarSet, parse_poly

A_ALPHA = "a_alpha.txt"
POLYNOMIAL_RING = "polynomial_ring.txt"
POINT_GOLDEN = "appendix_5_1.txt"
LINE_GOLDEN = "appendix_5_2.txt"


def data_path(name):
    return Path(str(resources.files("lineschemes") / "data" / name))


def read_poly_list(text, varset=None, alpha=None):
    """Parse a polynomial list; returns ``(varset, polys)``."""
    polys = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            names = tuple(line[5:].split())
            if not names:
                raise ParseError(f"line {lineno}: empty vars declaration")
            varset = VarSet(names)
            continue
        lines.append((lineno, line))
    if varset is None:
        raise ParseError("no 'vars:' line and no variable set given")
    for lineno, line in lines:
        try:
            polys.append(parse_poly(line, varset, alpha))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return varset, polys


def load_poly_list(path, varset=None, alpha=None):
    return read_poly_list(Path(path).read_text(), varset, alpha)


def format_poly_list(polys, order=GREVLEX, header=None):
    """One polynomial per line with a ``vars:`` header, for diffing against fixtures."""
    out = []
    if header:
        out.append(f"# {header}")
    if polys:
        out.append("vars: " + " ".join(polys[0].varset.names))
    out.extend(p.to_str(order) for p in polys)
    return "\n".join(out) + "\n"
