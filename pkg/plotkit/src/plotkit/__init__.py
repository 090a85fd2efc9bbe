"""Figure rendering for annealing-trace CSV files.

Renders the CSV outputs of the analysis CLI into paper-style figures.
Six figure kinds are supported; colors follow the fixed legend: same-sign
curves in green/blue solids, opposite-sign curves in red dashes, bare
closed-form curves dashed.  Rendering never alters data — the echo mode
re-emits every plotted value bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("spectrum", "gap", "seesaw", "steering", "negativity", "signedprob")

# fixed legend colors
SAME_SIGN_GREEN = "tab:green"
SAME_SIGN_BLUE = "tab:blue"
OPPOSITE_RED = "tab:red"
BARE_STYLE = {"linestyle": "--", "linewidth": 1.2}

EXPECTED_HEADERS = {
    "spectrum": "t,E0,E1,E2",
    "gap": "t,E0,E1",
    "seesaw": "t,bare-LM,bare-GM,AS0",
    "steering": "t,wL0,wR_cum_1,...",
    "negativity": "t,fraction",
    "signedprob": "t,alpha,beta,sp_comp_<state>,...,sp_ang_<state>,...",
}


class ColumnError(ValueError):
    """A referenced CSV column does not exist."""


@dataclass
class Table:
    """One parsed CSV: header, float columns, and the raw text cells."""

    path: str
    header: list[str]
    columns: dict[str, np.ndarray]
    raw_rows: list[list[str]]

    def require(self, kind: str, names: list[str]) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise ColumnError(
                f"{self.path}: missing column(s) {', '.join(missing)}; "
                f"expected a header like '{EXPECTED_HEADERS[kind]}'")


def read_table(path) -> Table:
    text = Path(path).read_text()
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ColumnError(f"{path}: empty file")
    header = lines[0].split(",")
    raw_rows = [ln.split(",") for ln in lines[1:]]
    for i, row in enumerate(raw_rows):
        if len(row) != len(header):
            raise ColumnError(
                f"{path}: row {i + 2} has {len(row)} fields, "
                f"header has {len(header)}")
    cols = {
        name: np.array([float(row[j]) for row in raw_rows])
        for j, name in enumerate(header)
    }
    return Table(str(path), header, cols, raw_rows)


def echo_table(table: Table, out_path) -> None:
    """Re-emit the plotted values byte-identically from the raw cells."""
    lines = [",".join(table.header)]
    lines.extend(",".join(row) for row in table.raw_rows)
    Path(out_path).write_text("\n".join(lines) + "\n")


@dataclass
class FigureSpec:
    kind: str
    csv_paths: list[str]
    title: str | None = None
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}; expected one of "
                f"{', '.join(KINDS)}")
        if not self.csv_paths:
            raise ValueError("at least one CSV path is required")


def _level_columns(table: Table) -> list[str]:
    return [c for c in table.header
            if c.startswith("E") and c[1:].isdigit()]


def _plot_spectrum(ax, tables):
    main = tables[0]
    levels = _level_columns(main)
    if not levels:
        main.require("spectrum", ["E0"])
    main.require("spectrum", ["t"] + levels)
    t = main.columns["t"]
    palette = [SAME_SIGN_GREEN, SAME_SIGN_BLUE, "steelblue", "slateblue",
               "cadetblue", "darkcyan"]
    for i, name in enumerate(levels):
        ax.plot(t, main.columns[name], color=palette[i % len(palette)],
                linewidth=1.6, label=name)
    for table in tables[1:]:
        table.require("spectrum", ["t"])
        for name in table.header:
            if name == "t":
                continue
            color = OPPOSITE_RED if name.startswith("AS") else "0.3"
            ax.plot(table.columns["t"], table.columns[name], color=color,
                    label=name, **BARE_STYLE)
    ax.set_xlabel("t")
    ax.set_ylabel("energy")


def _plot_gap(ax, tables):
    table = tables[0]
    table.require("gap", ["t", "E0", "E1"])
    gap = table.columns["E1"] - table.columns["E0"]
    ax.plot(table.columns["t"], gap, color=SAME_SIGN_BLUE, linewidth=1.6,
            label="E1 - E0")
    ax.set_xlabel("t")
    ax.set_ylabel("gap")
    ax.set_ylim(bottom=0.0)


def _plot_seesaw(ax, tables):
    table = tables[0]
    bare = [c for c in table.header if c.startswith("bare-")]
    if not bare:
        table.require("seesaw", ["bare-LM", "bare-GM"])
    table.require("seesaw", ["t"] + bare)
    t = table.columns["t"]
    for name in bare:
        color = SAME_SIGN_BLUE if "GM" in name else SAME_SIGN_GREEN
        ax.plot(t, table.columns[name], color=color, label=name, **BARE_STYLE)
    if "AS0" in table.columns:
        ax.plot(t, table.columns["AS0"], color=OPPOSITE_RED, label="AS0",
                **BARE_STYLE)
    ax.set_xlabel("t")
    ax.set_ylabel("energy")


def _plot_steering(ax, tables):
    table = tables[0]
    table.require("steering", ["t", "wL0"])
    cums = [c for c in table.header if c.startswith("wR_cum_")]
    if not cums:
        table.require("steering", ["wR_cum_1"])
    t = table.columns["t"]
    ax.plot(t, table.columns["wL0"], color="tab:orange", label="wL0",
            **BARE_STYLE)
    shades = ["0.5", SAME_SIGN_GREEN, SAME_SIGN_BLUE, "navy", "indigo"]
    for i, name in enumerate(sorted(cums, key=lambda c: int(c.rsplit("_", 1)[-1]))):
        ax.plot(t, table.columns[name], color=shades[min(i, len(shades) - 1)],
                linewidth=1.5, label=name)
    ax.set_xlabel("t")
    ax.set_ylabel("weight")
    ax.set_ylim(-0.02, 1.02)


def _plot_negativity(ax, tables):
    table = tables[0]
    table.require("negativity", ["t", "fraction"])
    ax.plot(table.columns["t"], table.columns["fraction"],
            color=OPPOSITE_RED, linewidth=1.6, label="negative fraction")
    ax.set_xlabel("t")
    ax.set_ylabel("fraction")


def _plot_signedprob(fig, tables):
    table = tables[0]
    table.require("signedprob", ["t"])
    groups = []
    for prefix in ("sp_comp_", "sp_ang_"):
        names = [c for c in table.header if c.startswith(prefix)]
        if names:
            groups.append((prefix.rstrip("_"), names))
    if not groups:
        table.require("signedprob", ["sp_comp_<state>"])
    t = table.columns["t"]
    vmax = max(np.abs(table.columns[n]).max()
               for _g, names in groups for n in names)
    vmax = vmax if vmax > 0 else 1.0
    axes = fig.subplots(len(groups), 1, squeeze=False)[:, 0]
    im = None
    for ax, (gname, names) in zip(axes, groups):
        strip = np.vstack([table.columns[n] for n in names])
        im = ax.imshow(strip, aspect="auto", cmap="RdBu_r",
                       vmin=-vmax, vmax=vmax,
                       extent=(t[0], t[-1], len(names) - 0.5, -0.5))
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels([n.split("_", 2)[-1] for n in names], fontsize=7)
        ax.set_ylabel(gname)
    axes[-1].set_xlabel("t")
    fig.colorbar(im, ax=list(axes), label="signed probability")
    return im


def render(spec: FigureSpec, out_path) -> tuple[str, str]:
    """Render the figure; writes both SVG and PNG, returns their paths."""
    tables = [read_table(p) for p in spec.csv_paths]
    plt.rcParams["svg.hashsalt"] = "plotkit"
    fig = plt.figure(figsize=(6.0, 3.6), dpi=120)
    try:
        if spec.kind == "signedprob":
            _plot_signedprob(fig, tables)
        else:
            ax = fig.subplots()
            {
                "spectrum": _plot_spectrum,
                "gap": _plot_gap,
                "seesaw": _plot_seesaw,
                "steering": _plot_steering,
                "negativity": _plot_negativity,
            }[spec.kind](ax, tables)
            ax.legend(fontsize=7, loc="best")
        if spec.title:
            fig.suptitle(spec.title)
        out = Path(out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        svg = out.with_suffix(".svg")
        png = out.with_suffix(".png")
        fig.savefig(svg, format="svg", metadata={"Date": None})
        fig.savefig(png, format="png",
                    metadata={"Software": None, "creationDate": None})
        return str(svg), str(png)
    finally:
        plt.close(fig)


def echo(csv_paths, out_dir) -> list[str]:
    """Re-emit each input CSV's plotted values; returns the output paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for p in csv_paths:
        table = read_table(p)
        dest = out_dir / Path(p).name
        echo_table(table, dest)
        written.append(str(dest))
    return written
