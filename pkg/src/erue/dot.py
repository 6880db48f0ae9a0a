"""Derivation graphs of verified scripts as Graphviz DOT text."""

from __future__ import annotations

import re

from .checker import CheckReport


def derivation_graph(report: CheckReport) -> tuple[dict[str, str], list[tuple[str, str, str]]]:
    """Nodes ``id -> clause text`` and edges ``(premise, conclusion, rule)``."""
    nodes = {c.id: str(c) for c in report.inputs}
    edges = []
    for s in report.steps:
        for c in s.clauses:
            nodes[c.id] = str(c)
            for p in s.step.premises:
                edges.append((p, c.id, s.step.rule))
    return nodes, edges


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(report: CheckReport, name: str = "derivation") -> str:
    nodes, edges = derivation_graph(report)
    lines = [f"digraph {_quote(name)} {{", "  node [shape=box];"]
    for nid, text in nodes.items():
        lines.append(f"  {_quote(nid)} [label={_quote(f'{nid}: {text}')}];")
    for src, dst, rule in edges:
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(rule)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_STR = r'"((?:[^"\\]|\\.)*)"'
_NODE = re.compile(rf"^\s*{_STR}\s*\[label={_STR}\];$")
_EDGE = re.compile(rf"^\s*{_STR}\s*->\s*{_STR}\s*\[label={_STR}\];$")


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s)


def read_dot(text: str) -> tuple[dict[str, str], list[tuple[str, str, str]]]:
    """Inverse of ``to_dot`` for the subset it writes."""
    nodes: dict[str, str] = {}
    edges = []
    for line in text.splitlines():
        m = _EDGE.match(line)
        if m:
            edges.append(tuple(_unquote(g) for g in m.groups()))
            continue
        m = _NODE.match(line)
        if m:
            nid, label = (_unquote(g) for g in m.groups())
            nodes[nid] = label.split(": ", 1)[1] if label.startswith(f"{nid}: ") else label
    return nodes, edges
