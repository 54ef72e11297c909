"""CSV / JSON writers and a minimal log-log SVG line plot.

Floats are written with ``repr`` so outputs are byte-stable for identical
inputs.  JSON documents carry ``"schema": 1``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np

SCHEMA = 1


def _plain(obj):
    """Convert numpy scalars, fractions and tuples into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def json_text(payload):
    doc = {"schema": SCHEMA}
    doc.update(_plain(payload))
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path, payload):
    text = json_text(payload)
    if path in (None, "-"):
        return text
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    text = csv_text(header, rows)
    if path in (None, "-"):
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def svg_loglog(series, title="", xlabel="x", ylabel="y", width=640, height=420):
    """Log-log line plot as SVG text.

    Parameters
    ----------
    series : list of (label, xs, ys)
        Non-positive points are skipped.
    """
    pts = []
    for label, xs, ys in series:
        xy = [(math.log10(x), math.log10(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
        pts.append((label, xy))
    allx = [p[0] for _, xy in pts for p in xy] or [0.0, 1.0]
    ally = [p[1] for _, xy in pts for p in xy] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    sx = lambda v: ml + (v - x0) / (x1 - x0) * pw
    sy = lambda v: mt + (1 - (v - y0) / (y1 - y0)) * ph
    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>',
           f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for d in range(math.floor(x0), math.ceil(x1) + 1):
        if x0 <= d <= x1:
            out.append(f'<text x="{sx(d):.1f}" y="{mt + ph + 16}" text-anchor="middle" '
                       f'font-size="11">1e{d}</text>')
    for d in range(math.floor(y0), math.ceil(y1) + 1):
        if y0 <= d <= y1:
            out.append(f'<text x="{ml - 6}" y="{sy(d) + 4:.1f}" text-anchor="end" '
                       f'font-size="11">1e{d}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" '
               f'font-size="12">{_esc(xlabel)}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{_esc(ylabel)}</text>')
    for i, (label, xy) in enumerate(pts):
        if not xy:
            continue
        c = colours[i % len(colours)]
        path = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in xy)
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{path}"/>')
        out.append(f'<text x="{ml + 8}" y="{mt + 16 + 14 * i}" font-size="11" fill="{c}">'
                   f'{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, series, **kw):
    text = svg_loglog(series, **kw)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text


def _esc(s):
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
