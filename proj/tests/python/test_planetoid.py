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

import os
import pickle
import sys
from collections import defaultdict

import numpy as np
import scipy.sparse as sp

import twoview

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "tools"))
import planetoid_to_twoview  # noqa: E402


def _write(raw, name, part, obj):
    with open(raw / f"ind.{name}.{part}", "wb") as f:
        pickle.dump(obj, f)


def test_converted_planetoid_loads(tmp_path):
    # 10 nodes: 2 train, 4 unlabeled-train pool, 4 test listed out of order.
    rng = np.random.default_rng(0)
    feats = (rng.random((10, 5)) < 0.5).astype(float)
    onehot = np.eye(3)[rng.integers(0, 3, size=10)]
    test_index = [9, 6, 8, 7]
    raw = tmp_path / "raw"
    raw.mkdir()
    _write(raw, "toy", "x", sp.csr_matrix(feats[:2]))
    _write(raw, "toy", "y", onehot[:2])
    _write(raw, "toy", "allx", sp.csr_matrix(feats[:6]))
    _write(raw, "toy", "ally", onehot[:6])
    _write(raw, "toy", "tx", sp.csr_matrix(feats[test_index]))
    _write(raw, "toy", "ty", onehot[test_index])
    graph = defaultdict(list, {0: [1, 1, 0], 1: [0, 2], 2: [1], 6: [9], 9: [6]})
    _write(raw, "toy", "graph", graph)
    (raw / "ind.toy.test.index").write_text("\n".join(map(str, test_index)) + "\n")

    out = tmp_path / "out"
    planetoid_to_twoview.convert(str(raw), "toy", str(out), normalize=True)

    ds = twoview.load_dataset(out)
    assert ds.num_nodes == 10
    assert sorted(ds.edges) == [(0, 1), (1, 2), (6, 9)]
    assert ds.train_nodes == [0, 1]
    assert ds.val_nodes == [2, 3, 4, 5]
    assert ds.test_nodes == [6, 7, 8, 9]
    expected = feats / np.maximum(feats.sum(axis=1, keepdims=True), 1.0)
    assert np.allclose(ds.features[[0, 1, 2, 3, 4, 5]], expected[:6])
    assert np.allclose(ds.features[test_index], expected[test_index])
    assert ds.labels[7] == int(onehot[7].argmax())
