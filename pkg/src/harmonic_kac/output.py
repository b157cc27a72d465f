"""CSV, JSON and SVG writers shared by the command-line tools."""
import json
import math
import os
from xml.sax.saxutils import escape

from . import __version__


def fmt(x):
    """Round-trip exact text for floats; plain text for everything else."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (list, tuple)):
        return ",".join(fmt(v) for v in x)
    if x is None:
        return "none"
    return str(x)


def header_line(subcommand, params):
    parts = " ".join(f"{k}={fmt(v)}" for k, v in params.items())
    return f"# krh {__version__} {subcommand} {parts}"


def write_csv(path, subcommand, params, columns, rows):
    """'#'-prefixed header, a column line, then one line per row."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(header_line(subcommand, params) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_csv(path):
    """Return (header_lines, columns, rows-as-strings)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    head = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    cols = body[0].split(",")
    return head, cols, [ln.split(",") for ln in body[1:]]


def data_section(path):
    """File content with header lines removed (used for reproducibility checks)."""
    with open(path) as fh:
        return "".join(ln for ln in fh if not ln.startswith("#"))


def write_json(path, subcommand, params, data):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    doc = {"header": {"tool": "krh", "version": __version__, "subcommand": subcommand,
                      "params": {k: fmt(v) for k, v in params.items()}},
           "data": data}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=False)
        fh.write("\n")


def _ticks(lo, hi, count=5):
    if hi == lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def write_svg(path, title, xs, series, xlabel="r", ylabel=""):
    """Static line chart: 800x500 viewBox, five ticks per axis, one polyline per series."""
    W, H = 800, 500
    L, R, T, B = 70, 20, 40, 50
    finite = [v for _, ys in series for v in ys if math.isfinite(v)]
    ylo, yhi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if yhi == ylo:
        yhi = ylo + 1.0
    xlo, xhi = min(xs), max(xs)
    if xhi == xlo:
        xhi = xlo + 1.0

    def px(x):
        return L + (x - xlo) / (xhi - xlo) * (W - L - R)

    def py(y):
        return H - B - (y - ylo) / (yhi - ylo) * (H - T - B)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" '
           f'width="{W}" height="{H}">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<text x="{W / 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
           f'<line x1="{L}" y1="{H - B}" x2="{W - R}" y2="{H - B}" stroke="black"/>',
           f'<line x1="{L}" y1="{T}" x2="{L}" y2="{H - B}" stroke="black"/>']
    for t in _ticks(xlo, xhi):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{H - B}" x2="{x:.2f}" y2="{H - B + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{H - B + 20}" text-anchor="middle" '
                   f'font-size="12">{t:.3g}</text>')
    for t in _ticks(ylo, yhi):
        y = py(t)
        out.append(f'<line x1="{L - 5}" y1="{y:.2f}" x2="{L}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{L - 8}" y="{y + 4:.2f}" text-anchor="end" '
                   f'font-size="12">{t:.3g}</text>')
    out.append(f'<text x="{(L + W - R) / 2}" y="{H - 10}" text-anchor="middle" '
               f'font-size="13">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{(T + H - B) / 2}" font-size="13" '
                   f'transform="rotate(-90 16 {(T + H - B) / 2})" '
                   f'text-anchor="middle">{escape(ylabel)}</text>')
    for i, (name, ys) in enumerate(series):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys) if math.isfinite(y))
        col = colors[i % len(colors)]
        out.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" '
                   f'points="{pts}"><title>{escape(name)}</title></polyline>')
        out.append(f'<text x="{W - R - 160}" y="{T + 16 * (i + 1)}" fill="{col}" '
                   f'font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
