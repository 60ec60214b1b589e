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

// Classical circuit descriptions. A CircuitDesc is an immutable handle to a
// polymorphic implementation with a canonical byte encoding; decoding goes
// through a registry keyed by the kind tag, so modules can add their own
// circuit families (the registry plays the role of the universal circuit).

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qmalab/crypto.hpp"
#include "qmalab/gf2.hpp"

namespace qmalab::circ {

using gf2::BitVector;

class CircuitImpl {
 public:
  virtual ~CircuitImpl() = default;
  virtual std::string kind() const = 0;
  virtual int input_arity() const = 0;
  virtual int output_width() const = 0;
  virtual BitVector eval(const BitVector& x) const = 0;
  virtual void encode(crypto::Writer& w) const = 0;
};

class CircuitDesc {
 public:
  CircuitDesc() = default;
  explicit CircuitDesc(std::shared_ptr<const CircuitImpl> impl);

  std::string kind() const { return impl_->kind(); }
  int input_arity() const { return impl_->input_arity(); }
  int output_width() const { return impl_->output_width(); }
  // Rejects inputs of the wrong length.
  BitVector eval(const BitVector& x) const;
  Bytes canonical() const;
  static CircuitDesc decode(const Bytes& canonical);
  const CircuitImpl& impl() const { return *impl_; }
  bool valid() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const CircuitImpl> impl_;
};

using Decoder = std::function<std::shared_ptr<const CircuitImpl>(crypto::Reader&)>;
void register_kind(const std::string& kind, Decoder d);

enum class Op : std::uint8_t { And = 0, Xor = 1, Or = 2, Not = 3 };

struct Gate {
  Op op;
  int a, b;  // input wires; b ignored for Not
};

// Wires 0..arity-1 are inputs, gate g writes wire arity+g.
class GateCircuit : public CircuitImpl {
 public:
  GateCircuit(int arity, std::vector<Gate> gates, std::vector<int> outputs);
  std::string kind() const override { return "gates"; }
  int input_arity() const override { return arity_; }
  int output_width() const override { return static_cast<int>(outputs_.size()); }
  BitVector eval(const BitVector& x) const override;
  void encode(crypto::Writer& w) const override;

 private:
  int arity_;
  std::vector<Gate> gates_;
  std::vector<int> outputs_;
};

class TruthTable : public CircuitImpl {
 public:
  TruthTable(int arity, int width, std::vector<std::uint64_t> rows);
  std::string kind() const override { return "table"; }
  int input_arity() const override { return arity_; }
  int output_width() const override { return width_; }
  BitVector eval(const BitVector& x) const override;
  void encode(crypto::Writer& w) const override;

 private:
  int arity_, width_;
  std::vector<std::uint64_t> rows_;
};

// Outputs all zeros.
class NullCircuit : public CircuitImpl {
 public:
  NullCircuit(int arity, int width);
  std::string kind() const override { return "null"; }
  int input_arity() const override { return arity_; }
  int output_width() const override { return width_; }
  BitVector eval(const BitVector& x) const override;
  void encode(crypto::Writer& w) const override;

 private:
  int arity_, width_;
};

CircuitDesc random_gate_circuit(int arity, int gates, int width, Rng& rng);
CircuitDesc null_circuit(int arity, int width);

}  // namespace qmalab::circ
