# Copyright 2026 The twoview Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert a Planetoid citation dataset (ind.<name>.* files) to the text
formats read by `twoview`: edges.tsv, features.txt, labels.txt, split.txt.

Usage: python3 tools/planetoid_to_twoview.py <raw_dir> <name> <out_dir> [--raw-features]

The standard split is kept: the first len(y) nodes train, the next 500
validate, and the nodes listed in ind.<name>.test.index test. Features are
row-normalized unless --raw-features is given.
"""

import argparse
import os
import pickle
import sys

import numpy as np
import scipy.sparse as sp


def _load(raw_dir, name, part):
    with open(os.path.join(raw_dir, f"ind.{name}.{part}"), "rb") as f:
        return pickle.load(f, encoding="latin1")


def convert(raw_dir, name, out_dir, normalize=True):
    x, y, tx, ty, allx, ally, graph = (
        _load(raw_dir, name, p) for p in ("x", "y", "tx", "ty", "allx", "ally", "graph"))
    with open(os.path.join(raw_dir, f"ind.{name}.test.index")) as f:
        test_index = [int(line) for line in f if line.strip()]
    test_range = np.sort(test_index)

    lo, hi = test_range.min(), test_range.max()
    if hi - lo + 1 != len(test_index):
        # Some test ids are isolated nodes missing from tx; pad with zero rows.
        full = hi - lo + 1
        tx_pad = sp.lil_matrix((full, tx.shape[1]))
        tx_pad[test_range - lo, :] = tx
        tx = tx_pad
        ty_pad = np.zeros((full, ty.shape[1]))
        ty_pad[test_range - lo, :] = ty
        ty = ty_pad

    features = sp.vstack((allx, tx)).tolil()
    features[test_index, :] = features[test_range, :]
    labels = np.vstack((ally, ty))
    labels[test_index, :] = labels[test_range, :]
    features = np.asarray(features.todense(), dtype=np.float64)
    if normalize:
        sums = features.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        features = features / sums

    n = features.shape[0]
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "edges.tsv"), "w") as f:
        for u, nbrs in sorted(graph.items()):
            for v in nbrs:
                if u < n and v < n:
                    f.write(f"{u}\t{v}\n")
    with open(os.path.join(out_dir, "features.txt"), "w") as f:
        f.write(f"{n} {features.shape[1]}\n")
        for row in features:
            f.write(" ".join(repr(float(v)) for v in row) + "\n")
    with open(os.path.join(out_dir, "labels.txt"), "w") as f:
        f.write(f"multiclass {labels.shape[1]}\n")
        for u in range(n):
            if labels[u].any():
                f.write(f"{u}\t{int(labels[u].argmax())}\n")
    train = list(range(len(y)))
    test_set = set(test_range.tolist())
    val = [u for u in range(len(y), min(len(y) + 500, n)) if u not in test_set]
    with open(os.path.join(out_dir, "split.txt"), "w") as f:
        f.write("train: " + " ".join(map(str, train)) + "\n")
        f.write("val: " + " ".join(map(str, val)) + "\n")
        f.write("test: " + " ".join(map(str, test_range.tolist())) + "\n")
    return n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("raw_dir")
    ap.add_argument("name")
    ap.add_argument("out_dir")
    ap.add_argument("--raw-features", action="store_true")
    args = ap.parse_args(argv)
    n = convert(args.raw_dir, args.name, args.out_dir, normalize=not args.raw_features)
    print(f"wrote {n} nodes to {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
