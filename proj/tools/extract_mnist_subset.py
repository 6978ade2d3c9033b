#!/usr/bin/env python3
"""Build the desk-scale MNIST CSVs shipped in data/.

Source: the 5000-image MNIST sample bundled with the mlxtend wheel
(mlxtend/data/data/mnist_5k.csv.gz, 784 pixel columns then the label).

    pip download mlxtend --no-deps -d /tmp/mlx
    python3 tools/extract_mnist_subset.py /tmp/mlx/mlxtend-*.whl data/

Training rows are interleaved by class (0,1,...,9,0,1,...) so every
prefix of a training file is class balanced, and the 100-row file is
the first 100 rows of the 200-row file. Test rows are disjoint from
every training row.
"""
import csv
import gzip
import io
import sys
import zipfile


def load_rows(wheel):
    with zipfile.ZipFile(wheel) as zf:
        raw = zf.read("mlxtend/data/data/mnist_5k.csv.gz")
    text = gzip.decompress(raw).decode()
    return [list(map(int, map(float, r))) for r in csv.reader(io.StringIO(text)) if r]


def write(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"p{i}" for i in range(784)] + ["label"])
        w.writerows(rows)


def main():
    wheel, outdir = sys.argv[1], sys.argv[2]
    rows = load_rows(wheel)
    per_class = {c: [] for c in range(10)}
    for idx, r in enumerate(rows):
        per_class[r[-1]].append(idx)
    used = set()
    for size in (200, 100):
        k = size // 10
        picked = [per_class[c][j] for j in range(k) for c in range(10)]
        used.update(picked)
        write(f"{outdir}/mnist_train_{size}.csv", [rows[i] for i in picked])
    # the source file is grouped by label; take 50 unused rows per class
    test = sorted(i for c in range(10) for i in [j for j in per_class[c] if j not in used][:50])
    write(f"{outdir}/mnist_test_500.csv", [rows[i] for i in test])


if __name__ == "__main__":
    main()
