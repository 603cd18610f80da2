"""CPLEX-LP text export for cross-checking against external solvers."""

from __future__ import annotations

import math
from pathlib import Path

from .model import EQ, GE, LE, LinearProgram

_OP = {LE: "<=", EQ: "=", GE: ">="}


def _num(v: float) -> str:
    return repr(float(v))


def _terms(pairs) -> str:
    out = []
    for h, a in pairs:
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        out.append(f"{sign} {_num(abs(a))} x{h}")
    text = " ".join(out) or "0 x0"
    return text[2:] if text.startswith("+ ") else text


def write_lp(lp: LinearProgram, path: str | Path) -> Path:
    """Write ``lp`` in CPLEX LP format. Variable ``x<k>`` is handle k, row ``c<k>`` likewise.

    Tags are emitted as backslash comments so the file can be mapped back.
    """
    path = Path(path)
    lines = [f"\\ {lp.name}", "Minimize"]
    lines.append(" obj: " + _terms((h, c) for h, c in enumerate(lp.cost)))
    lines.append("Subject To")
    for k, ((idx, val), sense, rhs, tag) in enumerate(zip(lp.rows, lp.senses, lp.rhs, lp.con_tags)):
        lines.append(f" \\ {tag!r}")
        lines.append(f" c{k}: {_terms(zip(idx.tolist(), val.tolist()))} {_OP[sense]} {_num(rhs)}")
    lines.append("Bounds")
    for h, (lo, hi) in enumerate(zip(lp.lower, lp.upper)):
        lo_s = "-inf" if lo == -math.inf else _num(lo)
        hi_s = "+inf" if hi == math.inf else _num(hi)
        lines.append(f" {lo_s} <= x{h} <= {hi_s}")
    lines.append("End")
    path.write_text("\n".join(lines) + "\n")
    return path
