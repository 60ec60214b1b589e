// Copyright 2026 The qmalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JLLW obfuscator in the QPrO model: a depth-D tree of one-key FE
// ciphertexts. Level d decrypts to the two child ciphertexts masked by PRF
// pads that only the QPrO can strip (branching B = 2 blocks per level).

#pragma once

#include <optional>
#include <vector>

#include "qmalab/obf_primitives.hpp"

namespace qmalab::obf {

inline constexpr int kJllwMaxDepth = 5;
inline constexpr int kJllwBlocks = 2;
inline constexpr std::size_t kJllwSeed = 16;

enum class JllwFlag : std::uint8_t { Normal = 0, Hyb = 1, Sim = 2 };

// keys[i][j], handles[i][j] for level i < D and block j < B.
struct KeyHandlePairs {
  std::vector<std::vector<std::uint64_t>> keys;
  std::vector<std::vector<std::uint64_t>> handles;
  Bytes serialize_keys() const;
};

KeyHandlePairs sample_key_handle_pairs(const QPrOSim& q, std::size_t instance, int depth, Rng& rng);

struct JllwObfuscation {
  int depth = 0;
  int out_width = 0;
  std::size_t instance = 0;
  Bytes root_ct;
  std::vector<FeSecretKey> sks;  // sks[d], d = 0..D
  std::vector<std::vector<std::uint64_t>> handles;

  Bytes serialize() const;
  static JllwObfuscation parse(const Bytes& b);
};

// Deterministic in (c, pairs, instance, randomness).
JllwObfuscation jllw_obfuscate(const CircuitDesc& c, const KeyHandlePairs& pairs, std::size_t instance,
                               const Bytes& randomness);

// Test hook: flip one byte of the pad at a given level.
struct PadTamper {
  int level;
  std::size_t byte;
};

BitVector jllw_eval(const QPrOSim& q, const JllwObfuscation& o, const BitVector& x,
                    const std::optional<PadTamper>& tamper = std::nullopt);
// Pad length consumed at each level along the path of x.
std::vector<std::size_t> jllw_pad_lengths(const QPrOSim& q, const JllwObfuscation& o, const BitVector& x);

// Plaintext layout shared by all levels: (flag, chi, info).
Bytes jllw_plaintext(JllwFlag flag, const BitVector& chi, const Bytes& info);
// Info of a simulated leaf: the output y.
Bytes jllw_sim_leaf_info(const BitVector& y);
// Info of a simulated inner node: block length and B seeds.
Bytes jllw_sim_node_info(std::size_t block_len, const std::vector<Bytes>& sigmas);

}  // namespace qmalab::obf
