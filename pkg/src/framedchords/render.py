"""Render diagrams as Graphviz DOT or TikZ pictures.

Endpoints sit on a circle (or a line for arc diagrams); chords of framing
1 are drawn dashed, framing 0 and unframed chords solid.
"""

from __future__ import annotations

import math
import shutil
import subprocess

from .diagrams import ArcDiagram, ChordDiagram, Diagram


def _chord_styles(d: Diagram) -> list[tuple[int, int, bool]]:
    """(endpoint, endpoint, dashed) per chord, by first endpoint."""
    out = []
    seen = set()
    labels = {}
    for i, j in enumerate(d.pairing):
        e1, e2 = (i, j) if i < j else (j, i)
        if e1 in seen:
            continue
        seen.add(e1)
        labels[e1] = len(labels)
        dashed = bool(d.is_framed and d.framing[labels[e1]])
        out.append((e1, e2, dashed))
    return out


def render_dot(d: Diagram) -> str:
    """Graphviz (neato) source with endpoints pinned on a circle or line."""
    m = 2 * d.order
    circle = isinstance(d, ChordDiagram)
    lines = ["graph diagram {", "  layout=neato;", "  node [shape=point, width=0.08];"]
    if m == 0:
        lines.append('  empty [shape=circle, label="", width=0.8];')
        lines.append("}")
        return "\n".join(lines)
    for i in range(m):
        if circle:
            ang = math.pi / 2 - 2 * math.pi * i / m
            x, y = 2 * math.cos(ang), 2 * math.sin(ang)
        else:
            x, y = i * 0.8, 0.0
        lines.append(f'  p{i} [pos="{x:.4f},{y:.4f}!"];')
    boundary = 'style=bold, color=gray'
    for i in range(m - 1):
        lines.append(f"  p{i} -- p{i + 1} [{boundary}];")
    if circle:
        lines.append(f"  p{m - 1} -- p0 [{boundary}];")
    for e1, e2, dashed in _chord_styles(d):
        style = "dashed" if dashed else "solid"
        lines.append(f"  p{e1} -- p{e2} [style={style}];")
    lines.append("}")
    return "\n".join(lines)


def render_tikz(d: Diagram) -> str:
    m = 2 * d.order
    circle = isinstance(d, ChordDiagram)
    lines = ["\\begin{tikzpicture}"]
    if circle:
        lines.append("  \\draw (0,0) circle (2);")
    elif m:
        lines.append(f"  \\draw[->] (-0.5,0) -- ({0.8 * (m - 1) + 0.5:.2f},0);")
    else:
        lines.append("  \\draw[->] (-0.5,0) -- (0.5,0);")
    coords = []
    for i in range(m):
        if circle:
            ang = 90 - 360 * i / m
            coords.append(f"({ang:.2f}:2)")
        else:
            coords.append(f"({i * 0.8:.2f},0)")
    for i, c in enumerate(coords):
        lines.append(f"  \\fill {c} circle (1.5pt);")
    for e1, e2, dashed in _chord_styles(d):
        style = "[dashed] " if dashed else ""
        lines.append(f"  \\draw {style}{coords[e1]} .. controls (0,0) .. {coords[e2]};"
                     if circle else
                     f"  \\draw {style}{coords[e1]} to[bend left=60] {coords[e2]};")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines)


def render_svg_via_dot(d: Diagram) -> str:
    """Pipe the DOT source through the graphviz 'dot' binary."""
    dot = shutil.which("dot") or shutil.which("neato")
    if dot is None:
        raise RuntimeError("graphviz 'dot'/'neato' binary not found on PATH")
    proc = subprocess.run(
        [dot, "-Kneato", "-n2", "-Tsvg"],
        input=render_dot(d).encode(),
        capture_output=True,
        check=True,
    )
    return proc.stdout.decode()


def render(d: Diagram, fmt: str) -> str:
    if fmt == "dot":
        return render_dot(d)
    if fmt == "tikz":
        return render_tikz(d)
    if fmt == "svg-via-dot":
        return render_svg_via_dot(d)
    raise ValueError(f"unknown render format {fmt!r}")
