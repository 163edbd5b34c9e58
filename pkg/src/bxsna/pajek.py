"""Pajek ``.net`` and ``.clu`` interchange.

Two-mode networks are written with the ``*Vertices n n1`` header, where
``n1`` is the number of users (first mode). Labels are double-quoted; a
literal ``"`` or ``\\`` inside a label is backslash-escaped.
"""

from __future__ import annotations

import re
from os import PathLike
from typing import Sequence

import numpy as np

from .netcore import BipartiteNetwork, Network, WeightedNetwork


class PajekFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, path=None):
        self.lineno = lineno
        self.path = path
        where = f"{path or '<pajek>'}:{lineno}: " if lineno else ""
        super().__init__(where + message)


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


_LABEL_RE = re.compile(r'^\s*(\d+)\s+"((?:[^"\\]|\\.)*)"')


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text)


def _line_triple(a: int, b: int, w: int) -> str:
    return f"{a} {b}" if w == 1 else f"{a} {b} {w}"


def format_net(net: Network) -> str:
    lines = []
    if isinstance(net, BipartiteNetwork):
        lines.append(f"*Vertices {net.dimension} {net.n_users}")
    else:
        lines.append(f"*Vertices {net.dimension}")
    lines.extend(f"{i} {_quote(label)}" for i, label in enumerate(net.labels, 1))
    if isinstance(net, BipartiteNetwork):
        lines.append("*Arcs")
        pairs = zip(net.src.tolist(), net.dst.tolist(), net.values.tolist())
    else:
        lines.append("*Edges")
        pairs = zip(net.u.tolist(), net.v.tolist(), net.weights.tolist())
    lines.extend(_line_triple(a + 1, b + 1, w) for a, b, w in pairs)
    return "\n".join(lines) + "\n"


def export_pajek(net: Network, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_net(net))


def parse_net(text: str, path=None) -> Network:
    lines = text.splitlines()
    pos = 0

    def fail(msg, lineno):
        raise PajekFormatError(msg, lineno, path)

    while pos < len(lines) and (not lines[pos].strip() or lines[pos].lstrip().startswith("%")):
        pos += 1
    if pos >= len(lines):
        fail("missing *Vertices line", 1)
    head = lines[pos].split()
    if not head or head[0].lower() != "*vertices" or len(head) not in (2, 3):
        fail("expected '*Vertices n'", pos + 1)
    try:
        n = int(head[1])
        n_first = int(head[2]) if len(head) == 3 else None
    except ValueError:
        fail("vertex count is not an integer", pos + 1)
    pos += 1

    labels = [str(i) for i in range(1, n + 1)]
    while pos < len(lines) and not lines[pos].lstrip().startswith("*"):
        line = lines[pos]
        if line.strip() and not line.lstrip().startswith("%"):
            m = _LABEL_RE.match(line)
            if m:
                idx, label = int(m.group(1)), _unquote(m.group(2))
            else:
                parts = line.split()
                try:
                    idx = int(parts[0])
                except ValueError:
                    fail(f"bad vertex line {line!r}", pos + 1)
                label = parts[1] if len(parts) > 1 else str(idx)
            if not 1 <= idx <= n:
                fail(f"vertex index {idx} outside 1..{n}", pos + 1)
            labels[idx - 1] = label
        pos += 1

    kind = None
    a_list, b_list, w_list = [], [], []
    while pos < len(lines):
        line = lines[pos].strip()
        if line.startswith("*"):
            word = line.split()[0].lower()
            if word not in ("*arcs", "*edges"):
                fail(f"unsupported section {line.split()[0]}", pos + 1)
            if kind is not None and kind != word:
                fail("mixing *Arcs and *Edges is not supported", pos + 1)
            kind = word
        elif line and not line.startswith("%"):
            if kind is None:
                fail("line data before *Arcs/*Edges", pos + 1)
            parts = line.split()
            try:
                a, b = int(parts[0]), int(parts[1])
                w = int(float(parts[2])) if len(parts) > 2 else 1
            except (ValueError, IndexError):
                fail(f"bad line {line!r}", pos + 1)
            if not (1 <= a <= n and 1 <= b <= n):
                fail(f"vertex index outside 1..{n}", pos + 1)
            a_list.append(a - 1)
            b_list.append(b - 1)
            w_list.append(w)
        pos += 1

    a = np.array(a_list, dtype=np.int64)
    b = np.array(b_list, dtype=np.int64)
    w = np.array(w_list, dtype=np.int64)
    try:
        if kind == "*arcs" or (kind is None and n_first is not None):
            n_users = n_first if n_first is not None else (int(a.max()) + 1 if len(a) else n)
            return BipartiteNetwork(tuple(labels), n_users, a, b, w)
        return WeightedNetwork(tuple(labels), a, b, w)
    except ValueError as exc:
        raise PajekFormatError(str(exc), None, path) from exc


def import_pajek(path: str | PathLike) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse_net(fh.read(), path)


def export_clu(values: Sequence[int] | np.ndarray, path: str | PathLike) -> None:
    """Write a partition, one integer per vertex in network order."""
    values = np.asarray(values, dtype=np.int64)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"*Vertices {len(values)}\n")
        fh.writelines(f"{v}\n" for v in values.tolist())


def import_clu(path: str | PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("%")]
    if not lines or not lines[0].lower().startswith("*vertices"):
        raise PajekFormatError("expected '*Vertices n'", 1, path)
    n = int(lines[0].split()[1])
    values = np.array([int(x) for x in lines[1:]], dtype=np.int64)
    if len(values) != n:
        raise PajekFormatError(f"expected {n} values, found {len(values)}", None, path)
    return values
