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

#include "qmalab/circuit.hpp"

#include <map>
#include <mutex>

namespace qmalab::circ {

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, Decoder> decoders;
};

Registry& registry() {
  static Registry* r = [] {
    auto* reg = new Registry;
    reg->decoders["gates"] = [](crypto::Reader& r) -> std::shared_ptr<const CircuitImpl> {
      const int arity = static_cast<int>(r.u32());
      const std::uint32_t ng = r.u32();
      std::vector<Gate> gates;
      for (std::uint32_t g = 0; g < ng; ++g) {
        Gate gate;
        gate.op = static_cast<Op>(r.u8());
        gate.a = static_cast<int>(r.u32());
        gate.b = static_cast<int>(r.u32());
        gates.push_back(gate);
      }
      const std::uint32_t no = r.u32();
      std::vector<int> outs;
      for (std::uint32_t o = 0; o < no; ++o) outs.push_back(static_cast<int>(r.u32()));
      return std::make_shared<GateCircuit>(arity, std::move(gates), std::move(outs));
    };
    reg->decoders["table"] = [](crypto::Reader& r) -> std::shared_ptr<const CircuitImpl> {
      const int arity = static_cast<int>(r.u32());
      const int width = static_cast<int>(r.u32());
      if (arity > 20) throw MalformedInput("circuit: truth table arity too large");
      std::vector<std::uint64_t> rows(std::size_t{1} << arity);
      for (auto& row : rows) row = r.u64();
      return std::make_shared<TruthTable>(arity, width, std::move(rows));
    };
    reg->decoders["null"] = [](crypto::Reader& r) -> std::shared_ptr<const CircuitImpl> {
      const int arity = static_cast<int>(r.u32());
      const int width = static_cast<int>(r.u32());
      return std::make_shared<NullCircuit>(arity, width);
    };
    return reg;
  }();
  return *r;
}

void check_shape(int arity, int width) {
  if (arity < 0 || arity > gf2::kMaxAmbient || width < 0 || width > gf2::kMaxAmbient)
    throw MalformedInput("circuit: arity / width must be in [0,64]");
}

}  // namespace

void register_kind(const std::string& kind, Decoder d) {
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  reg.decoders[kind] = std::move(d);
}

CircuitDesc::CircuitDesc(std::shared_ptr<const CircuitImpl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw MalformedInput("circuit: null implementation");
}

BitVector CircuitDesc::eval(const BitVector& x) const {
  if (x.size() != input_arity()) throw MalformedInput("circuit: input length differs from arity");
  return impl_->eval(x);
}

Bytes CircuitDesc::canonical() const {
  crypto::Writer w;
  w.str(kind());
  impl_->encode(w);
  return w.take();
}

CircuitDesc CircuitDesc::decode(const Bytes& canonical) {
  crypto::Reader r(canonical);
  const std::string kind = r.str();
  Decoder d;
  {
    auto& reg = registry();
    std::lock_guard lock(reg.mu);
    auto it = reg.decoders.find(kind);
    if (it == reg.decoders.end()) throw MalformedInput("circuit: unknown kind '" + kind + "'");
    d = it->second;
  }
  CircuitDesc c(d(r));
  r.expect_done();
  return c;
}

GateCircuit::GateCircuit(int arity, std::vector<Gate> gates, std::vector<int> outputs)
    : arity_(arity), gates_(std::move(gates)), outputs_(std::move(outputs)) {
  check_shape(arity, static_cast<int>(outputs_.size()));
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const int wire = arity + static_cast<int>(g);
    const auto& gate = gates_[g];
    if (static_cast<std::uint8_t>(gate.op) > 3) throw MalformedInput("circuit: unknown gate op");
    if (gate.a < 0 || gate.a >= wire || (gate.op != Op::Not && (gate.b < 0 || gate.b >= wire)))
      throw MalformedInput("circuit: gate reads a wire that is not yet defined");
  }
  const int wires = arity + static_cast<int>(gates_.size());
  for (int o : outputs_)
    if (o < 0 || o >= wires) throw MalformedInput("circuit: output wire out of range");
}

BitVector GateCircuit::eval(const BitVector& x) const {
  std::vector<std::uint8_t> w(arity_ + gates_.size());
  for (int i = 0; i < arity_; ++i) w[i] = x.get(i);
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const auto& gate = gates_[g];
    std::uint8_t v = 0;
    switch (gate.op) {
      case Op::And: v = w[gate.a] & w[gate.b]; break;
      case Op::Xor: v = w[gate.a] ^ w[gate.b]; break;
      case Op::Or: v = w[gate.a] | w[gate.b]; break;
      case Op::Not: v = !w[gate.a]; break;
    }
    w[arity_ + g] = v;
  }
  std::uint64_t out = 0;
  for (std::size_t o = 0; o < outputs_.size(); ++o) out |= static_cast<std::uint64_t>(w[outputs_[o]]) << o;
  return BitVector(static_cast<int>(outputs_.size()), out);
}

void GateCircuit::encode(crypto::Writer& w) const {
  w.u32(arity_).u32(static_cast<std::uint32_t>(gates_.size()));
  for (const auto& g : gates_) w.u8(static_cast<std::uint8_t>(g.op)).u32(g.a).u32(g.b);
  w.u32(static_cast<std::uint32_t>(outputs_.size()));
  for (int o : outputs_) w.u32(o);
}

TruthTable::TruthTable(int arity, int width, std::vector<std::uint64_t> rows)
    : arity_(arity), width_(width), rows_(std::move(rows)) {
  check_shape(arity, width);
  if (arity > 20 || rows_.size() != (std::size_t{1} << arity)) throw MalformedInput("circuit: table needs 2^arity rows");
  const std::uint64_t mask = width == 64 ? ~0ULL : (1ULL << width) - 1;
  for (auto r : rows_)
    if (r & ~mask) throw MalformedInput("circuit: table row wider than output width");
}

BitVector TruthTable::eval(const BitVector& x) const { return BitVector(width_, rows_[x.word()]); }

void TruthTable::encode(crypto::Writer& w) const {
  w.u32(arity_).u32(width_);
  for (auto r : rows_) w.u64(r);
}

NullCircuit::NullCircuit(int arity, int width) : arity_(arity), width_(width) { check_shape(arity, width); }

BitVector NullCircuit::eval(const BitVector&) const { return BitVector::zeros(width_); }

void NullCircuit::encode(crypto::Writer& w) const { w.u32(arity_).u32(width_); }

CircuitDesc random_gate_circuit(int arity, int gates, int width, Rng& rng) {
  if (arity < 1) throw MalformedInput("circuit: random circuit needs at least one input");
  std::vector<Gate> gs;
  for (int g = 0; g < gates; ++g) {
    const auto wires = static_cast<std::uint64_t>(arity + g);
    Gate gate;
    gate.op = static_cast<Op>(rng.uniform_below(4));
    gate.a = static_cast<int>(rng.uniform_below(wires));
    gate.b = gate.op == Op::Not ? 0 : static_cast<int>(rng.uniform_below(wires));
    gs.push_back(gate);
  }
  std::vector<int> outs;
  const auto total = static_cast<std::uint64_t>(arity + gates);
  for (int o = 0; o < width; ++o) outs.push_back(static_cast<int>(rng.uniform_below(total)));
  return CircuitDesc(std::make_shared<GateCircuit>(arity, std::move(gs), std::move(outs)));
}

CircuitDesc null_circuit(int arity, int width) { return CircuitDesc(std::make_shared<NullCircuit>(arity, width)); }

}  // namespace qmalab::circ
