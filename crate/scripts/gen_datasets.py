#!/usr/bin/env python3
"""Generate the bundled data files under data/.

Iris and Wine are written out from scikit-learn's bundled copies of the
canonical UCI files. The other five datasets (Abalone, Breast Cancer
Wisconsin, E-coli, Glass, ILPD) are synthetic stand-ins generated to match
the published row/feature/class shapes, class distributions, and file
layouts of the originals, so the harness runs offline out of the box.
Replace them with the canonical files from archive.ics.uci.edu if you have
network access; the recipes parse both.

Deterministic: fixed seeds throughout. Run from the repository root:

    python3 scripts/gen_datasets.py
"""

import os

import numpy as np
from sklearn.datasets import load_iris, load_wine

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


def fmt(v):
    """Format a float the way the UCI files do: no trailing zeros."""
    f = float(v)
    if f == int(f):
        return str(int(f))
    return repr(round(f, 6))


def write_lines(name, lines):
    path = os.path.join(OUT_DIR, name)
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
    print(f"wrote {path} ({len(lines)} rows)")


def gen_iris():
    ds = load_iris()
    names = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
    lines = []
    for row, t in zip(ds.data, ds.target):
        feats = ",".join(f"{v:.1f}" for v in row)
        lines.append(f"{feats},{names[t]}")
    write_lines("iris.data", lines)


def gen_wine():
    ds = load_wine()
    lines = []
    for row, t in zip(ds.data, ds.target):
        feats = ",".join(fmt(v) for v in row)
        lines.append(f"{t + 1},{feats}")
    write_lines("wine.data", lines)


def gen_abalone():
    # Ring-count histogram: heavily skewed, 28 distinct classes, 4177 total.
    ring_counts = {
        1: 1, 2: 1, 3: 15, 4: 57, 5: 115, 6: 259, 7: 391, 8: 568,
        9: 689, 10: 634, 11: 487, 12: 267, 13: 203, 14: 126, 15: 103,
        16: 67, 17: 58, 18: 42, 19: 32, 20: 26, 21: 14, 22: 6, 23: 9,
        24: 2, 25: 1, 26: 1, 27: 2, 29: 1,
    }
    assert sum(ring_counts.values()) == 4177
    rng = np.random.default_rng(20250801)
    rows = []
    for rings, count in ring_counts.items():
        for _ in range(count):
            # Saturating growth curve plus heavy multiplicative noise, so
            # neighbouring ring counts overlap strongly.
            length = 0.82 * (1.0 - np.exp(-0.22 * rings))
            length *= np.exp(rng.normal(0.0, 0.16))
            length = float(np.clip(length, 0.06, 0.83))
            diameter = length * 0.80 * np.exp(rng.normal(0.0, 0.05))
            height = length * 0.30 * np.exp(rng.normal(0.0, 0.12))
            whole = 1.65 * length ** 3 * np.exp(rng.normal(0.0, 0.15))
            shucked = whole * 0.43 * np.exp(rng.normal(0.0, 0.12))
            viscera = whole * 0.22 * np.exp(rng.normal(0.0, 0.12))
            shell = whole * 0.28 * np.exp(rng.normal(0.0, 0.12))
            p_infant = float(np.clip(0.95 - 0.085 * rings, 0.02, 0.95))
            u = rng.random()
            if u < p_infant:
                sex = "I"
            elif u < p_infant + (1.0 - p_infant) * 0.52:
                sex = "M"
            else:
                sex = "F"
            rows.append(
                f"{sex},{length:.3f},{diameter:.3f},{height:.3f},"
                f"{whole:.4f},{shucked:.4f},{viscera:.4f},{shell:.4f},{rings}"
            )
    order = rng.permutation(len(rows))
    write_lines("abalone.data", [rows[i] for i in order])


def gen_breast_cancer():
    # 458 benign (class 2) / 241 malignant (class 4); nine 1..10 integer
    # features; 16 missing '?' cells in the bare-nuclei column (file col 6).
    rng = np.random.default_rng(20250802)
    rows = []
    specs = [(2, 458, 1.9, 1.3), (4, 241, 6.3, 2.6)]
    for cls, count, mean, sd in specs:
        for _ in range(count):
            feats = np.clip(np.rint(rng.normal(mean, sd, size=9)), 1, 10)
            rows.append((int(rng.integers(10_000, 9_999_999)), feats.astype(int), cls))
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    missing = rng.choice(len(rows), size=16, replace=False)
    lines = []
    for i, (ident, feats, cls) in enumerate(rows):
        cells = [str(v) for v in feats]
        if i in missing:
            cells[5] = "?"  # bare nuclei, file column 6
        lines.append(f"{ident},{','.join(cells)},{cls}")
    write_lines("breast-cancer-wisconsin.data", lines)


def gen_ecoli():
    # Protein localization sites: 8 classes, whitespace-delimited, a
    # sequence-name column, 7 features in [0,1].
    classes = [
        ("cp", 143, [0.36, 0.38, 0.48, 0.50, 0.44, 0.30, 0.32]),
        ("im", 77, [0.46, 0.45, 0.48, 0.50, 0.50, 0.66, 0.62]),
        ("pp", 52, [0.58, 0.52, 0.48, 0.50, 0.56, 0.34, 0.38]),
        ("imU", 35, [0.50, 0.47, 0.48, 0.50, 0.50, 0.72, 0.70]),
        ("om", 20, [0.72, 0.62, 0.48, 0.50, 0.62, 0.44, 0.50]),
        ("omL", 5, [0.76, 0.66, 1.00, 0.50, 0.60, 0.46, 0.50]),
        ("imL", 2, [0.47, 0.45, 1.00, 0.50, 0.50, 0.64, 0.60]),
        ("imS", 2, [0.48, 0.46, 0.48, 0.50, 0.50, 0.62, 0.58]),
    ]
    assert sum(c for _, c, _ in classes) == 336
    rng = np.random.default_rng(20250803)
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    lines = []
    charge_marker_done = False
    for label, count, center in classes:
        for _ in range(count):
            feats = np.clip(rng.normal(center, 0.085), 0.0, 1.0)
            feats[2] = center[2]  # lip is effectively binary in the original
            feats[3] = 0.50  # charge is constant apart from one outlier
            if label == "om" and not charge_marker_done:
                feats[3] = 1.00
                charge_marker_done = True
            name = "".join(rng.choice(list(letters), size=4)) + "_ECOLI"
            cells = "  ".join(f"{v:.2f}" for v in feats)
            lines.append(f"{name:<12}{cells}  {label}")
    write_lines("ecoli.data", lines)


def gen_glass():
    # Six glass types present (type 4 absent in the original too). Types 1,
    # 2 and 3 overlap heavily; 5 and 6 are tiny.
    classes = [
        (1, 70, [1.5185, 13.2, 3.52, 1.20, 72.6, 0.45, 8.6, 0.03, 0.06]),
        (2, 76, [1.5187, 13.1, 3.05, 1.40, 72.6, 0.52, 9.0, 0.05, 0.08]),
        (3, 17, [1.5186, 13.3, 3.45, 1.25, 72.4, 0.43, 8.7, 0.03, 0.06]),
        (5, 13, [1.5190, 12.9, 1.00, 2.00, 72.1, 1.40, 10.1, 0.20, 0.06]),
        (6, 9, [1.5175, 14.3, 1.40, 1.35, 72.8, 0.05, 9.2, 0.00, 0.00]),
        (7, 29, [1.5172, 14.2, 0.45, 2.10, 73.0, 0.25, 8.5, 1.00, 0.01]),
    ]
    assert sum(c for _, c, _ in classes) == 214
    sds = [0.0022, 0.55, 0.45, 0.30, 0.65, 0.30, 0.85, 0.12, 0.06]
    los = [1.511, 10.7, 0.0, 0.29, 69.8, 0.0, 5.4, 0.0, 0.0]
    his = [1.534, 17.4, 4.5, 3.5, 75.4, 6.2, 16.2, 3.2, 0.5]
    rng = np.random.default_rng(20250804)
    lines = []
    ident = 1
    for cls, count, center in classes:
        for _ in range(count):
            feats = np.clip(rng.normal(center, sds), los, his)
            cells = [f"{feats[0]:.5f}"] + [f"{v:.2f}" for v in feats[1:]]
            lines.append(f"{ident},{','.join(cells)},{cls}")
            ident += 1
    write_lines("glass.data", lines)


def gen_ilpd():
    # Liver patient records: 416 patients (class 1), 167 non-patients
    # (class 2); a categorical gender column; lab values on very different
    # scales. Substantial overlap keeps the task moderately hard.
    rng = np.random.default_rng(20250805)
    rows = []
    for cls, count in [(1, 416), (2, 167)]:
        sick = cls == 1
        for _ in range(count):
            age = int(np.clip(rng.normal(46 if sick else 42, 15), 4, 90))
            gender = "Male" if rng.random() < 0.77 else "Female"
            tb = np.clip(np.exp(rng.normal(0.5 if sick else -0.1, 0.9)), 0.4, 75.0)
            db = np.clip(tb * np.clip(rng.normal(0.42, 0.12), 0.05, 0.9), 0.1, 20.0)
            alkphos = np.clip(np.exp(rng.normal(5.6 if sick else 5.3, 0.45)), 63, 2110)
            sgpt = np.clip(np.exp(rng.normal(3.9 if sick else 3.3, 0.85)), 10, 2000)
            sgot = np.clip(sgpt * np.exp(rng.normal(0.1, 0.4)), 10, 2000)
            tp = np.clip(rng.normal(6.5 if sick else 6.8, 1.0), 2.7, 9.6)
            alb = np.clip(tp * np.clip(rng.normal(0.47, 0.07), 0.2, 0.75), 0.9, 5.5)
            ag = np.clip(alb / np.clip(tp - alb, 0.5, None), 0.3, 2.8)
            rows.append(
                f"{age},{gender},{tb:.1f},{db:.1f},{int(alkphos)},"
                f"{int(sgpt)},{int(sgot)},{tp:.1f},{alb:.1f},{ag:.2f},{cls}"
            )
    order = rng.permutation(len(rows))
    write_lines("ilpd.csv", [rows[i] for i in order])


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    gen_iris()
    gen_wine()
    gen_abalone()
    gen_breast_cancer()
    gen_ecoli()
    gen_glass()
    gen_ilpd()


if __name__ == "__main__":
    main()
