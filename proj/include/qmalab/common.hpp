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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmalab {

using Bytes = std::vector<std::uint8_t>;

// Error taxonomy. Every failure the library reports derives from Error so
// callers can catch one type; the subclasses let tests pin the kind.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedInput : Error {  // parse / validation failures
  using Error::Error;
};
struct SizingError : Error {  // requested instance exceeds a cap
  using Error::Error;
};
struct IntegrityError : Error {  // MAC / pad / length check failed
  using Error::Error;
};
struct ExtractionError : Error {
  using Error::Error;
};
struct NotAWitness : Error {
  using Error::Error;
};
struct UnsupportedMode : Error {
  using Error::Error;
};

// Deterministic RNG used by every randomized operation (xoshiro256**).
// The samplers are hand-written so a seed reproduces the same run on any
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();
  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p);
  double normal();
  Bytes bytes(std::size_t n);
  // Independent child stream; advances this stream by one draw.
  Rng split();

 private:
  std::uint64_t state_[4];
};

std::string to_hex(const Bytes& b);
std::string base64_encode(const Bytes& b);
Bytes base64_decode(const std::string& s);

}  // namespace qmalab
