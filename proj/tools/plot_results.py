#!/usr/bin/env python3
"""Plots the CSV files written by subthz-linksim.

Each input is recognised by its header: sweep.csv (BLER curves),
backoff.csv (required back-off bars), papr.csv (CCDF) or pn_psd.csv
(model versus periodogram).
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_sweeps(paths, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    for path in paths:
        curves = defaultdict(list)
        for r in read_rows(path):
            curves[r["config_id"]].append((float(r["snr_db"]), float(r["bler"])))
        for label, pts in curves.items():
            pts.sort()
            # Zero-error points cannot be drawn on a log axis.
            xs = [p[0] for p in pts if p[1] > 0]
            ys = [p[1] for p in pts if p[1] > 0]
            ax.semilogy(xs, ys, marker="o", label=label)
    ax.axhline(0.1, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BLER")
    ax.set_ylim(1e-3, 1.05)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_backoff(path, out):
    rows = read_rows(path)
    mods = sorted({r["modulation"] for r in rows}, key=[r["modulation"] for r in rows].index)
    wfs = sorted({r["waveform"] for r in rows})
    width = 0.8 / len(wfs)
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, wf in enumerate(wfs):
        vals = {r["modulation"]: float(r["backoff_db"]) for r in rows if r["waveform"] == wf}
        ax.bar([m + i * width for m in range(len(mods))], [vals.get(m, 0.0) for m in mods], width, label=wf)
    ax.set_xticks([m + 0.4 - width / 2 for m in range(len(mods))], mods)
    ax.set_ylabel("required back-off (dB)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_papr(path, out):
    curves = defaultdict(list)
    for r in read_rows(path):
        curves[f'{r["waveform"]} {r["modulation"]}'].append((float(r["papr_db"]), float(r["ccdf"])))
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, pts in curves.items():
        pts = [p for p in sorted(pts) if p[1] > 0]
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], label=label)
    ax.set_xlabel("instantaneous power over mean (dB)")
    ax.set_ylabel("CCDF")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_pn(path, out):
    curves = defaultdict(list)
    for r in read_rows(path):
        curves[r["profile"]].append(
            (float(r["offset_hz"]), float(r["model_dbc_hz"]), float(r["measured_dbc_hz"]))
        )
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, pts in curves.items():
        pts.sort()
        line, = ax.semilogx([p[0] for p in pts], [p[1] for p in pts], label=f"{label} model")
        ax.semilogx([p[0] for p in pts], [p[2] for p in pts], ".", color=line.get_color(), label=f"{label} measured")
    ax.set_xlabel("offset (Hz)")
    ax.set_ylabel("PSD (dBc/Hz)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", type=Path, help="CSV files from subthz-linksim")
    ap.add_argument("--out", type=Path, default=Path("plots"), help="output directory")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    sweeps = []
    for path in args.csv:
        header = path.read_text().splitlines()[0].split(",")
        if "bler" in header:
            sweeps.append(path)
        elif "backoff_db" in header:
            plot_backoff(path, args.out / f"{path.stem}.png")
        elif "ccdf" in header:
            plot_papr(path, args.out / f"{path.stem}.png")
        elif "measured_dbc_hz" in header:
            plot_pn(path, args.out / f"{path.stem}.png")
        else:
            raise SystemExit(f"{path}: unrecognised CSV header")
    if sweeps:
        plot_sweeps(sweeps, args.out / "bler.png")


if __name__ == "__main__":
    main()
