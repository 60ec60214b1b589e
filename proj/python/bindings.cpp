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

// Python bindings. JSON-shaped values (configs, reports, proofs, instances)
// cross the boundary as strings; the package wrapper converts them to dicts.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmalab/experiments.hpp"
#include "qmalab/protocol.hpp"

namespace py = pybind11;
using namespace qmalab;

namespace {

sim::StateVector to_state(const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw MalformedInput("state must be a 1-d array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  if (n < 2 || (n & (n - 1))) throw MalformedInput("state length must be a power of two");
  std::vector<sim::Complex> amps(a.data(), a.data() + n);
  return sim::StateVector::from_amplitudes(std::countr_zero(n), std::move(amps));
}

py::array_t<std::complex<double>> from_state(const sim::StateVector& s) {
  const auto n = static_cast<py::ssize_t>(s.dim());
  py::array_t<std::complex<double>> out({n}, {static_cast<py::ssize_t>(sizeof(std::complex<double>))});
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < s.dim(); ++i) p[i] = s[i];
  return out;
}

zx::HamiltonianInstance instance_of(const std::optional<std::string>& j) {
  return j ? zx::HamiltonianInstance::from_json(nlohmann::json::parse(*j)) : zx::reference_instance();
}

// One protocol world in extraction mode: CRS plus trapdoor.
class Session {
 public:
  Session(std::uint64_t seed, const std::string& config, const std::optional<std::string>& instance)
      : rng_(exp::trial_rng(seed, 0)),
        world_(obf::OracleWorld::create(seed)),
        cfg_(protocol::Config::from_json(nlohmann::json::parse(config))),
        h_(instance_of(instance)) {
    auto [crs, td] = protocol::ext0(world_, rng_);
    crs_ = crs;
    td_ = td;
  }

  std::string prove(const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& copy) {
    return protocol::prove(world_, crs_, h_, to_state(copy), cfg_, rng_).to_json().dump();
  }

  py::dict verify(const std::string& proof) {
    const auto out = protocol::verify(world_, crs_, h_, protocol::Proof::from_json(nlohmann::json::parse(proof)),
                                      cfg_, rng_);
    py::dict d;
    d["accept"] = out.accept;
    d["prob_accept"] = out.prob_accept;
    d["eigenvalue"] = out.eigenvalue;
    d["diagnostics"] = out.diagnostics;
    d["residual"] = out.residual ? py::object(py::str(out.residual->to_json().dump())) : py::object(py::none());
    return d;
  }

  py::array_t<std::complex<double>> extract(const std::string& residual) {
    return from_state(
        protocol::ext1(world_, crs_, td_, h_, protocol::Proof::from_json(nlohmann::json::parse(residual)), cfg_));
  }

  std::vector<double> per_copy_acceptance(
      const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& s) const {
    return protocol::per_copy_acceptance(h_, to_state(s));
  }

 private:
  Rng rng_;
  obf::OracleWorld world_;
  protocol::Config cfg_;
  zx::HamiltonianInstance h_;
  protocol::Crs crs_;
  obf::PcTrapdoor td_;
};

py::dict simulate_and_verify(std::uint64_t seed, const std::string& config, const std::optional<std::string>& instance) {
  Rng rng = exp::trial_rng(seed, 0);
  auto world = obf::OracleWorld::create(seed);
  const auto cfg = protocol::Config::from_json(nlohmann::json::parse(config));
  const auto h = instance_of(instance);
  const auto s = protocol::simulate(world, h, cfg, rng);
  const auto out = protocol::verify(world, s.crs, h, s.proof, cfg, rng);
  py::dict d;
  d["accept"] = out.accept;
  d["prob_accept"] = out.prob_accept;
  d["diagnostics"] = out.diagnostics;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qmalab, m) {
  m.doc() = "qmalab core bindings";

  // Translators registered later take precedence, so the base goes first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<MalformedInput>(m, "MalformedInput", base);
  py::register_exception<SizingError>(m, "SizingError", base);
  py::register_exception<IntegrityError>(m, "IntegrityError", base);
  py::register_exception<ExtractionError>(m, "ExtractionError", base);
  py::register_exception<NotAWitness>(m, "NotAWitness", base);
  py::register_exception<UnsupportedMode>(m, "UnsupportedMode", base);

  m.def("scenario_names", &exp::scenario_names);
  m.def(
      "run_scenario",
      [](const std::string& name, const std::string& config) {
        py::gil_scoped_release nogil;
        return exp::run_scenario(name, nlohmann::json::parse(config)).to_json().dump();
      },
      py::arg("name"), py::arg("config"));
  m.def(
      "permver_bench",
      [](const std::string& config) {
        py::gil_scoped_release nogil;
        return exp::permver_bench_summary(exp::permver_bench(exp::RunConfig::from_json(nlohmann::json::parse(config))))
            .dump();
      },
      py::arg("config"));

  m.def("recommended_k", &permver::recommended_k, py::arg("n"), py::arg("a"), py::arg("b"), py::arg("j_count"));
  m.def("bernstein_tail", &permver::bernstein_tail, py::arg("d"), py::arg("r"), py::arg("n"), py::arg("t"));
  m.def("matrix_bernstein_tail", &permver::matrix_bernstein_tail, py::arg("d1"), py::arg("d2"), py::arg("sigma2"),
        py::arg("r"), py::arg("t"));
  m.def(
      "thresholds_from_energy",
      [](double a_prime, double b_prime, double w) {
        const auto t = permver::thresholds_from_energy(a_prime, b_prime, w);
        return std::make_pair(t.a, t.b);
      },
      py::arg("a_prime"), py::arg("b_prime"), py::arg("weight_sum"));

  m.def(
      "rref",
      [](const std::vector<std::string>& rows) {
        std::vector<gf2::BitVector> v;
        for (const auto& r : rows) v.push_back(gf2::BitVector::parse(r));
        std::vector<std::string> out;
        for (const auto& r : gf2::rref(v)) out.push_back(r.str());
        return out;
      },
      py::arg("rows"));

  m.def(
      "ground_state",
      [](const std::optional<std::string>& instance) {
        const auto g = zx::ground_state(instance_of(instance));
        return std::make_pair(g.energy, from_state(g.state));
      },
      py::arg("instance") = py::none());

  py::class_<Session>(m, "Session")
      .def(py::init<std::uint64_t, const std::string&, const std::optional<std::string>&>(), py::arg("seed"),
           py::arg("config") = "{}", py::arg("instance") = py::none())
      .def("prove", &Session::prove, py::arg("witness_copy"))
      .def("verify", &Session::verify, py::arg("proof"))
      .def("extract", &Session::extract, py::arg("residual"))
      .def("per_copy_acceptance", &Session::per_copy_acceptance, py::arg("state"));
  m.def("simulate_and_verify", &simulate_and_verify, py::arg("seed"), py::arg("config") = "{}",
        py::arg("instance") = py::none());
}
