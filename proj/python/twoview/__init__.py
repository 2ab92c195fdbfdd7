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

"""Contrastive self-supervised node embeddings."""

from ._twoview import (
    ConfigError,
    ContractViolation,
    Dataset,
    EncoderParams,
    Error,
    FormatError,
    ParseError,
    Regime,
    TrainConfig,
    TrainingError,
    Variant,
    batch_loss,
    batch_loss_and_gradient,
    batch_mi_bound,
    embed,
    fanout_nodes,
    generate_sbm,
    l_hop_nodes,
    load_checkpoint,
    load_dataset,
    probe,
    run_cli,
    save_checkpoint,
    save_dataset,
    selfcheck,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")]
