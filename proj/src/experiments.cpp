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

#include "qmalab/experiments.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "qmalab/protocol.hpp"

namespace qmalab::exp {

using gf2::BitVector;
using sim::StateVector;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Tolerance at_most(double b) { return {"<=", b}; }
Tolerance at_least(double b) { return {">=", b}; }
Tolerance below(double b) { return {"<", b}; }
Tolerance above(double b) { return {">", b}; }

double rate(std::size_t k, std::size_t n) { return n ? static_cast<double>(k) / n : 0.0; }

}  // namespace

bool Tolerance::holds(double v) const {
  if (op == "<=") return v <= bound;
  if (op == ">=") return v >= bound;
  if (op == "<") return v < bound;
  if (op == ">") return v > bound;
  if (op == "==") return v == bound;
  throw MalformedInput("unknown tolerance operator " + op);
}

bool Report::passed() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass(); });
}

Metric& Report::add(std::string name, double value, std::optional<Tolerance> tol) {
  metrics.push_back({std::move(name), value, std::move(tol), nlohmann::json::object()});
  return metrics.back();
}

const Metric& Report::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m;
  throw MalformedInput("report has no metric " + name);
}

nlohmann::json Report::to_json() const {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : metrics) {
    nlohmann::json j{{"name", m.name}, {"value", m.value}};
    if (m.tolerance) {
      j["tolerance"] = {{"op", m.tolerance->op}, {"bound", m.tolerance->bound}};
      j["pass"] = m.pass();
    } else {
      j["tolerance"] = nullptr;
      j["pass"] = nullptr;
    }
    if (!m.extra.empty()) j["extra"] = m.extra;
    ms.push_back(std::move(j));
  }
  return {{"scenario", scenario}, {"config", config},   {"metrics", ms},
          {"details", details},   {"wall_clock_s", wall_clock_s}, {"passed", passed()}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("config must be a JSON object");
  if (!j.contains("seed") || !j["seed"].is_number_integer())
    throw MalformedInput("config: integer \"seed\" is mandatory");
  RunConfig c;
  c.seed = j["seed"].get<std::uint64_t>();
  c.threads = j.value("threads", 0);
  c.raw = j;
  return c;
}

int RunConfig::get_int(const char* key, int def) const {
  if (!raw.contains(key)) return def;
  if (!raw[key].is_number_integer()) throw MalformedInput(std::string("config: \"") + key + "\" must be an integer");
  const int v = raw[key].get<int>();
  return v;
}

double RunConfig::get_double(const char* key, double def) const {
  if (!raw.contains(key)) return def;
  if (!raw[key].is_number()) throw MalformedInput(std::string("config: \"") + key + "\" must be a number");
  return raw[key].get<double>();
}

namespace {

int positive(const RunConfig& c, const char* key, int def) {
  const int v = c.get_int(key, def);
  if (v < 1) throw MalformedInput(std::string("config: \"") + key + "\" must be at least 1");
  return v;
}

zx::HamiltonianInstance instance_or(const RunConfig& c, const char* key, zx::HamiltonianInstance def) {
  if (!c.raw.contains(key)) return def;
  const auto& v = c.raw[key];
  if (v.is_string()) return zx::HamiltonianInstance::load(v.get<std::string>());
  return zx::HamiltonianInstance::from_json(v);
}

protocol::Config protocol_config(const RunConfig& c) {
  nlohmann::json p = c.raw.value("protocol", nlohmann::json::object());
  if (c.raw.contains("backend")) p["backend"] = c.raw["backend"];
  return protocol::Config::from_json(p);
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng trial_rng(std::uint64_t seed, std::uint64_t i) { return Rng(mix(seed) ^ mix(i + 0x5151)); }

Interval wilson(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double p = static_cast<double>(k) / n, z2 = z * z, d = 1 + z2 / n;
  const double c = (p + z2 / (2 * n)) / d;
  const double h = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / d;
  return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

double chi2_two_sample_pvalue(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) throw MalformedInput("chi2: histograms differ in size");
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) na += a[i], nb += b[i];
  if (na == 0 || nb == 0) throw MalformedInput("chi2: empty sample");
  // Pool adjacent categories until each pooled cell has expected count >= 5
  // in both samples.
  std::vector<std::pair<double, double>> cells;
  double ca = 0, cb = 0;
  auto enough = [&](double x, double y) {
    const double tot = x + y;
    return tot * na / (na + nb) >= 5 && tot * nb / (na + nb) >= 5;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i], cb += b[i];
    if (enough(ca, cb)) cells.emplace_back(ca, cb), ca = cb = 0;
  }
  if (ca + cb > 0) {
    if (cells.empty()) cells.emplace_back(ca, cb);
    else cells.back().first += ca, cells.back().second += cb;
  }
  if (cells.size() < 2) return 1.0;
  double stat = 0;
  for (const auto& [x, y] : cells) {
    const double tot = x + y;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    stat += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  const double df = static_cast<double>(cells.size() - 1);
  return boost::math::gamma_q(df / 2, stat / 2);
}

// --- csa -----------------------------------------------------------------

Report csa_correctness(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "csa-correctness";
  const auto t0 = Clock::now();
  Rng rng = trial_rng(cfg.seed, 0);
  const int keys_per_n = positive(cfg, "keys_per_n", 3);
  double worst = 0;
  std::size_t cases = 0;
  for (int n = 1; n <= 2; ++n) {
    std::vector<sim::BasisPredicate> fs{{n, [](std::uint64_t) { return false; }},
                                        {n, [](std::uint64_t) { return true; }},
                                        {n, [](std::uint64_t v) { return std::popcount(v) % 2 == 1; }},
                                        {n, [n](std::uint64_t v) { return v == (1ULL << n) - 1; }}};
    for (int i = 0; i < n; ++i) fs.push_back({n, [i](std::uint64_t v) { return ((v >> i) & 1) != 0; }});
    for (int kk = 0; kk < keys_per_n; ++kk) {
      const auto key = csa::keygen(1, n, rng);
      for (std::uint64_t theta = 0; theta < (1ULL << n); ++theta)
        for (const auto& f : fs) {
          worst = std::max(worst, csa::logical_measure_deviation(key, BitVector(n, theta), f));
          ++cases;
        }
    }
  }
  const double t_corr = seconds_since(t0);
  const auto t1 = Clock::now();
  const int keys = positive(cfg, "codespace_keys", 20);
  double cs = 0;
  for (int kk = 0; kk < keys; ++kk) cs = std::max(cs, csa::codespace_projector_check(csa::keygen(1, 1, rng)));
  const double t_cs = seconds_since(t1);
  rep.add("correctness_max_deviation", worst, at_most(1e-9)).extra = {{"cases", cases}};
  rep.add("correctness_runtime_s", t_corr, below(10));
  rep.add("codespace_max_deviation", cs, at_most(1e-9)).extra = {{"keys", keys}};
  rep.add("codespace_runtime_s", t_cs, below(5));
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- permuting verifier ----------------------------------------------------

namespace {

double product_frequency(const permver::PermutingVerifier& v, const StateVector& copy, std::size_t trials,
                         std::uint64_t seed, int threads) {
  auto hits = parallel_trials<int>(trials, threads, [&](std::size_t i) {
    Rng r = trial_rng(seed, i);
    return permver::verify_product(v, copy, r) ? 1 : 0;
  });
  std::size_t k = 0;
  for (int h : hits) k += h;
  return rate(k, trials);
}

// Three Z terms on a triangle: no assignment anti-aligns all three edges.
zx::HamiltonianInstance frustrated_triangle() {
  const double p = 1.0 / 6;
  return zx::HamiltonianInstance(
      3, {{0, 1, zx::Basis::Z, 0, p}, {1, 2, zx::Basis::Z, 0, p}, {0, 2, zx::Basis::Z, 0, p}});
}

}  // namespace

Report permver_bench(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "permver-bench";
  const auto t0 = Clock::now();
  const auto h = instance_or(cfg, "instance", zx::z_only_instance());
  const int k = positive(cfg, "k", 6);
  const std::size_t trials = positive(cfg, "trials", 10000);
  const double w = h.weight_sum();
  const auto th = permver::thresholds_from_energy(cfg.get_double("a_prime", -w), cfg.get_double("b_prime", w / 2), w);
  const auto v = permver::build(h, k, th);
  const double delta = permver::hoeffding_delta(v);

  // Ground and highest excited eigenstates of the single-copy Hamiltonian.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(zx::hamiltonian_matrix(h));
  auto eig_state = [&](Eigen::Index col) {
    const Eigen::VectorXcd c = es.eigenvectors().col(col);
    return StateVector::from_amplitudes(h.qubits(), std::vector<sim::Complex>(c.data(), c.data() + c.size()));
  };
  const StateVector ground = eig_state(0);
  const StateVector excited = eig_state(es.eigenvalues().size() - 1);
  const double q_excited = zx::zxver_accept_probability(h, excited);

  std::uint64_t stream = 1;
  const double yes = product_frequency(v, ground, trials, cfg.seed + stream++, cfg.threads);
  rep.add("accept_freq_yes", yes, at_least(1 - delta - 0.03));
  const double tail_ex = permver::binomial_upper_tail(v.len(), q_excited, v.threshold());
  const double no = product_frequency(v, excited, trials, cfg.seed + stream++, cfg.threads);
  rep.add("accept_freq_no", no, at_most(tail_ex + 0.03)).extra = {{"q", q_excited}, {"bin_tail", tail_ex}};

  // Soundness trend: cos(a)|ground> + sin(a)|excited> has per-test
  // acceptance interpolating between the two.
  nlohmann::json trend = nlohmann::json::array();
  for (double c2 : {0.25, 0.5, 0.75}) {
    std::vector<sim::Complex> amps(ground.dim());
    for (std::size_t i = 0; i < amps.size(); ++i)
      amps[i] = std::sqrt(c2) * ground[i] + std::sqrt(1 - c2) * excited[i];
    const auto s = StateVector::from_amplitudes(h.qubits(), amps);
    const double q = zx::zxver_accept_probability(h, s);
    const double tail = permver::binomial_upper_tail(v.len(), q, v.threshold());
    const double f = product_frequency(v, s, trials, cfg.seed + stream++, cfg.threads);
    char name[48];
    std::snprintf(name, sizeof name, "trend_q%.4f", q);
    rep.add(name, f, at_most(tail + 0.03)).extra = {{"q", q}, {"bin_tail", tail}};
    trend.push_back({{"q", q}, {"freq", f}, {"bin_tail", tail}});
  }

  // A NO instance: thresholds with b at the best achievable acceptance.
  {
    const auto tri = frustrated_triangle();
    const Eigen::MatrixXcd e = zx::acceptance_operator(tri);
    const double q_max = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(e).eigenvalues().maxCoeff();
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < e.rows(); ++i)
      if (e(i, i).real() > e(best, best).real()) best = i;
    const auto vt = permver::build(tri, k, {1.0, q_max});
    const double tail = permver::binomial_upper_tail(vt.len(), q_max, vt.threshold());
    const double f = product_frequency(vt, StateVector::basis(3, best), trials, cfg.seed + stream++, cfg.threads);
    rep.add("no_instance_best_basis_freq", f, at_most(tail + 0.03)).extra = {
        {"q_max", q_max}, {"bin_tail", tail}, {"threshold", vt.threshold()}, {"len", vt.len()}};
  }
  rep.add("runtime_s", seconds_since(t0), below(30));
  rep.details = {{"k", k},       {"len", v.len()},       {"threshold", v.threshold()}, {"a", th.a},
                 {"b", th.b},    {"hoeffding_bound", delta}, {"trials", trials},       {"trend", trend},
                 {"recommended_k", permver::recommended_k(h.qubits(), th.a, th.b, static_cast<double>(h.pair_count()))}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

nlohmann::json permver_bench_summary(const Report& r) {
  return {{"k", r.details.at("k")},
          {"threshold", r.details.at("threshold")},
          {"accept_freq_yes", r.metric("accept_freq_yes").value},
          {"accept_freq_no", r.metric("accept_freq_no").value},
          {"hoeffding_bound", r.details.at("hoeffding_bound")}};
}

Report bound_check(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "bound-check";
  const auto t0 = Clock::now();
  const int trials = positive(cfg, "bound_trials", 100000);
  const int n = 100;
  nlohmann::json cells = nlohmann::json::array();
  std::size_t violations = 0;
  double min_slack = 1.0;
  auto record = [&](const std::string& kind, double d, double t, double bound, std::size_t hits) {
    const double freq = rate(hits, trials);
    if (freq > bound) ++violations;
    min_slack = std::min(min_slack, bound - freq);
    cells.push_back({{"kind", kind}, {"d", d}, {"t", t}, {"bound", bound}, {"empirical", freq}});
  };
  const std::vector<double> ts{5, 10, 20, 30, 50};

  // Vector Bernstein: sums of n uniformly random indicator vectors in R^d
  // (d = 1: Bernoulli(1/2) scalars), R = 1.
  std::uint64_t stream = 0;
  for (int d : {1, 2, 4}) {
    Rng rng = trial_rng(cfg.seed, 1000 + stream++);
    std::vector<std::size_t> hits(ts.size(), 0);
    std::vector<double> counts(d);
    for (int tr = 0; tr < trials; ++tr) {
      std::fill(counts.begin(), counts.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        if (d == 1) counts[0] += rng.bernoulli(0.5) ? 1 : 0;
        else counts[rng.uniform_below(d)] += 1;
      }
      const double mean = d == 1 ? n * 0.5 : static_cast<double>(n) / d;
      double norm2 = 0;
      for (double c : counts) norm2 += (c - mean) * (c - mean);
      const double norm = std::sqrt(norm2);
      for (std::size_t j = 0; j < ts.size(); ++j) hits[j] += norm >= ts[j];
    }
    for (std::size_t j = 0; j < ts.size(); ++j)
      record("vector", d, ts[j], permver::bernstein_tail(d, 1, n, ts[j]), hits[j]);
  }
  // Matrix Bernstein: +-1 scalars (d1 = d2 = 1) and diagonal 2x2 matrices
  // with independent +-1 entries (d1 = d2 = 2); sigma^2 = n, R = 1.
  for (int d : {1, 2}) {
    Rng rng = trial_rng(cfg.seed, 2000 + d);
    std::vector<std::size_t> hits(ts.size(), 0);
    for (int tr = 0; tr < trials; ++tr) {
      double s[2] = {0, 0};
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) s[c] += rng.bernoulli(0.5) ? 1 : -1;
      const double spec = d == 1 ? std::abs(s[0]) : std::max(std::abs(s[0]), std::abs(s[1]));
      for (std::size_t j = 0; j < ts.size(); ++j) hits[j] += spec >= ts[j];
    }
    for (std::size_t j = 0; j < ts.size(); ++j)
      record("matrix", d, ts[j], permver::matrix_bernstein_tail(d, d, n, 1, ts[j]), hits[j]);
  }
  rep.add("bound_violations", static_cast<double>(violations), at_most(0)).extra = {{"cells", cells.size()}};
  rep.add("min_slack", min_slack, at_least(0));
  rep.add("recommended_k_n2_gap05_j2", static_cast<double>(permver::recommended_k(2, 1.0, 0.5, 2)), Tolerance{"==", 106});
  rep.add("recommended_k_n1_gap1_j0", static_cast<double>(permver::recommended_k(1, 1.0, 0.0, 0)), Tolerance{"==", 4});
  rep.details = {{"cells", cells}, {"trials", trials}, {"n", n}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- ATI -------------------------------------------------------------------

namespace {

// Projector onto span(u, r random vectors).
Eigen::MatrixXcd projector_with(const Eigen::VectorXcd& u, int extra, Rng& rng) {
  const Eigen::Index dim = u.size();
  Eigen::MatrixXcd cols(dim, extra + 1);
  cols.col(0) = u;
  for (int c = 1; c <= extra; ++c)
    for (Eigen::Index i = 0; i < dim; ++i) cols(i, c) = {rng.normal(), rng.normal()};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cols);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, extra + 1);
  return q * q.adjoint();
}

}  // namespace

Report ati_check(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "ati-check";
  const auto t0 = Clock::now();
  const int qubits = positive(cfg, "qubits", 4);
  const int comps = positive(cfg, "components", 5);
  const std::size_t trials = positive(cfg, "trials", 1000);
  const double gamma = cfg.get_double("gamma", 0.2);
  if (!(gamma > 0 && gamma < 1)) throw MalformedInput("config: gamma must be in (0,1)");
  const std::size_t dim = std::size_t{1} << qubits;

  // Every component contains a common vector u, so E has eigenvalue 1.
  Rng rng = trial_rng(cfg.seed, 0);
  const StateVector us = StateVector::random(qubits, rng);
  const Eigen::VectorXcd u = ati::to_vec(us);
  std::vector<std::pair<double, Eigen::MatrixXcd>> parts;
  for (int c = 0; c < comps; ++c)
    parts.emplace_back(0.5 + rng.uniform01(), projector_with(u, 1 + static_cast<int>(rng.uniform_below(dim / 2)), rng));
  const auto povm = ati::MixturePOVM::from_dense(parts);
  const auto spec = ati::spectral_decomposition(povm);
  const Eigen::MatrixXcd e = ati::mixture_operator(povm);

  struct Trial {
    int agree = 0, accepted = 0;
    double eig = 2.0, rayleigh = 2.0;
  };
  auto outs = parallel_trials<Trial>(trials, cfg.threads, [&](std::size_t i) {
    Rng r = trial_rng(cfg.seed, 10 + i);
    // Half the trials start near u so both outcomes are exercised.
    StateVector s = StateVector::random(qubits, r);
    if (i % 2) {
      std::vector<sim::Complex> a(dim);
      for (std::size_t j = 0; j < dim; ++j) a[j] = 2.0 * us[j] + s[j];
      s = StateVector::normalized(qubits, a);
    }
    Trial t;
    t.agree = ati::repeat_projectivity_check(spec, s, gamma, 1, r) == 1.0;
    const auto o = ati::threshold_measure(spec, s, gamma, r);
    if (o.accept) {
      t.accepted = 1;
      t.eig = o.eigenvalue;
      const auto v = ati::to_vec(*o.post);
      t.rayleigh = (v.adjoint() * e * v)(0, 0).real();
    }
    return t;
  });
  std::size_t agree = 0, accepted = 0;
  double min_eig = 1.0, min_ray = 1.0;
  for (const auto& t : outs) {
    agree += t.agree;
    accepted += t.accepted;
    if (t.accepted) min_eig = std::min(min_eig, t.eig), min_ray = std::min(min_ray, t.rayleigh);
  }

  // Global rejection: E = (1/4) sum of four basis projectors.
  std::vector<std::pair<double, Eigen::MatrixXcd>> flat;
  for (int b = 0; b < 4; ++b) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    p(b, b) = 1;
    flat.emplace_back(1.0, p);
  }
  const auto flat_spec = ati::spectral_decomposition(ati::MixturePOVM::from_dense(flat));
  auto rej = parallel_trials<int>(trials, cfg.threads, [&](std::size_t i) {
    Rng r = trial_rng(cfg.seed, 10 + trials + i);
    return ati::threshold_measure(flat_spec, StateVector::random(qubits, r), gamma, r).accept ? 1 : 0;
  });
  std::size_t rej_acc = 0;
  for (int a : rej) rej_acc += a;

  const double cut = ati::cutoff(gamma);
  rep.add("projectivity_agreement", rate(agree, trials), at_least(1.0));
  rep.add("global_rejection_accept_rate", rate(rej_acc, trials), at_most(0.0));
  rep.add("min_accepted_eigenvalue", min_eig, at_least(cut)).extra = {{"accepted_trials", accepted}};
  rep.add("min_accepted_residual_expectation", min_ray, at_least(cut - 1e-9));
  rep.add("accepted_trials", static_cast<double>(accepted), above(0));
  rep.add("runtime_s", seconds_since(t0), below(20));
  nlohmann::json eig = nlohmann::json::array();
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) eig.push_back(spec.values(i));
  rep.details = {{"cutoff", cut}, {"eigenvalues", eig}, {"dim", dim}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- end-to-end protocol -----------------------------------------------------

Report e2e_complete(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "e2e-complete";
  const auto t0 = Clock::now();
  const auto pc = protocol_config(cfg);
  const auto h = instance_or(cfg, "instance", zx::reference_instance());
  const std::size_t runs = positive(cfg, "runs", 200);
  const auto witness = zx::ground_state(h).state;
  const auto v = protocol::make_verifier(h, pc);

  struct Run {
    bool accept = false, extracted = false;
    double prob_accept = 0, min_copy = 1, family = 0;
    std::string error;
  };
  auto outs = parallel_trials<Run>(runs, cfg.threads, [&](std::size_t i) {
    Rng rng = trial_rng(cfg.seed, i);
    auto world = obf::OracleWorld::create(mix(cfg.seed) ^ i);
    auto [crs, td] = protocol::ext0(world, rng);
    const auto proof = protocol::prove(world, crs, h, witness, pc, rng);
    const auto out = protocol::verify(world, crs, h, proof, pc, rng);
    Run r;
    r.accept = out.accept;
    r.prob_accept = out.prob_accept;
    if (!out.accept) return r;
    try {
      const auto w = protocol::ext1(world, crs, td, h, *out.residual, pc);
      r.extracted = true;
      const auto per = protocol::per_copy_acceptance(h, w);
      r.min_copy = *std::min_element(per.begin(), per.end());
      r.family = protocol::family_acceptance(v, w, pc);
    } catch (const Error& e) {
      r.error = e.what();
    }
    return r;
  });
  std::size_t acc = 0, ext = 0, viol = 0;
  double min_copy = 1, fam = 0, pacc = 0;
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& r : outs) {
    pacc += r.prob_accept;
    if (!r.accept) continue;
    ++acc;
    if (r.extracted) {
      ++ext;
      fam += r.family;
      min_copy = std::min(min_copy, r.min_copy);
      if (r.min_copy < 1 - pc.gamma) ++viol;
    } else {
      ++viol;
      if (errors.size() < 5) errors.push_back(r.error);
    }
  }
  const auto ci = wilson(acc, runs);
  rep.add("accept_rate", rate(acc, runs), at_least(0.9)).extra = {{"wilson95", {ci.lo, ci.hi}}};
  rep.add("mean_prob_accept", pacc / runs);
  rep.add("extraction_success_rate", acc ? rate(ext, acc) : 0.0, at_least(1.0));
  rep.add("contract_violations", static_cast<double>(viol), at_most(0));
  rep.add("min_per_copy_acceptance", min_copy, at_least(1 - pc.gamma));
  rep.add("mean_family_acceptance", ext ? fam / ext : 0.0);
  rep.add("runtime_s", seconds_since(t0), below(90));
  rep.details = {{"runs", runs},
                 {"accepted", acc},
                 {"extracted", ext},
                 {"errors", errors},
                 {"physical_qubits", v.total_qubits() * (2 * pc.lambda_code + 1)},
                 {"protocol", pc.to_json()}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

namespace {

// The reference instance with the sign flipped: ground state |Phi+>.
zx::HamiltonianInstance aligned_reference() {
  return zx::HamiltonianInstance(2, {{0, 1, zx::Basis::Z, 1, 0.5}, {0, 1, zx::Basis::X, 1, 0.5}});
}

struct TranscriptStats {
  std::vector<std::size_t> open_sizes;
  std::vector<std::size_t> commit_nibbles = std::vector<std::size_t>(16, 0);
};

void tally(TranscriptStats& s, const obf::PcObfuscation& o) {
  if (s.open_sizes.empty()) s.open_sizes.assign(o.lambda_cc + 1, 0);
  ++s.open_sizes[o.opened.size()];
  for (const auto& c : o.commitments) ++s.commit_nibbles[c.at(0) >> 4];
}

}  // namespace

Report e2e_simulate(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "e2e-simulate";
  const auto t0 = Clock::now();
  const auto pc = protocol_config(cfg);
  const auto h = instance_or(cfg, "instance", zx::reference_instance());
  const auto h2 = instance_or(cfg, "alt_instance", aligned_reference());
  if (h2.qubits() != h.qubits() || protocol::make_verifier(h2, pc).len() != protocol::make_verifier(h, pc).len())
    throw MalformedInput("config: alt_instance must have the same size as instance");
  const std::size_t runs = positive(cfg, "runs", 200);

  auto sims = parallel_trials<std::pair<int, obf::PcObfuscation>>(runs, cfg.threads, [&](std::size_t i) {
    Rng rng = trial_rng(cfg.seed, i);
    auto world = obf::OracleWorld::create(mix(cfg.seed) ^ i);
    auto s = protocol::simulate(world, h, pc, rng);
    const bool ok = protocol::verify(world, s.crs, h, s.proof, pc, rng).accept;
    return std::make_pair(ok ? 1 : 0, s.proof.obf);
  });
  auto honest = [&](const zx::HamiltonianInstance& inst, std::uint64_t salt) {
    const auto witness = zx::ground_state(inst).state;
    return parallel_trials<obf::PcObfuscation>(runs, cfg.threads, [&](std::size_t i) {
      Rng rng = trial_rng(cfg.seed + salt, i);
      auto world = obf::OracleWorld::create(mix(cfg.seed + salt) ^ i);
      const auto crs = protocol::setup(world, rng);
      return protocol::prove(world, crs, inst, witness, pc, rng).obf;
    });
  };
  const auto ha = honest(h, 7001), hb = honest(h2, 9001);
  std::size_t ok = 0;
  TranscriptStats sa, sb, ss;
  for (const auto& [v, o] : sims) ok += v, tally(ss, o);
  for (const auto& o : ha) tally(sa, o);
  for (const auto& o : hb) tally(sb, o);
  const double p_open = chi2_two_sample_pvalue(sa.open_sizes, sb.open_sizes);
  const double p_commit = chi2_two_sample_pvalue(sa.commit_nibbles, sb.commit_nibbles);
  const auto ci = wilson(ok, runs);
  rep.add("sim_verify_rate", rate(ok, runs), at_least(0.9)).extra = {{"wilson95", {ci.lo, ci.hi}}};
  rep.add("chi2_p_open_set_size", p_open, above(0.01));
  rep.add("chi2_p_commitment_bytes", p_commit, above(0.01));
  rep.add("chi2_p_open_set_size_sim_vs_real", chi2_two_sample_pvalue(ss.open_sizes, sa.open_sizes));
  rep.add("runtime_s", seconds_since(t0), below(120));
  rep.details = {{"runs", runs}, {"open_sizes_a", sa.open_sizes}, {"open_sizes_b", sb.open_sizes},
                 {"open_sizes_sim", ss.open_sizes}, {"protocol", pc.to_json()}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- obfuscation stack -------------------------------------------------------

Report jllw_correctness(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "jllw-correctness";
  const auto t0 = Clock::now();
  const std::size_t circuits = positive(cfg, "circuits", 50);
  const int max_depth = positive(cfg, "max_depth", 4);
  if (max_depth > obf::kJllwMaxDepth) throw SizingError("config: max_depth exceeds the JLLW cap");
  struct Out {
    std::size_t inputs = 0, agree = 0, tampers = 0, detected = 0;
  };
  auto outs = parallel_trials<Out>(circuits, cfg.threads, [&](std::size_t i) {
    Rng rng = trial_rng(cfg.seed, i);
    obf::QPrOSim q(64, rng);
    const int depth = 1 + static_cast<int>(i % max_depth);
    const auto c = circ::random_gate_circuit(depth, 2 + static_cast<int>(rng.uniform_below(10)),
                                             1 + static_cast<int>(rng.uniform_below(3)), rng);
    const auto o = obf::jllw_obfuscate(c, obf::sample_key_handle_pairs(q, 1, depth, rng), 1, rng.bytes(16));
    Out out;
    for (std::uint64_t x = 0; x < (1ULL << depth); ++x) {
      ++out.inputs;
      out.agree += obf::jllw_eval(q, o, BitVector(depth, x)) == c.eval(BitVector(depth, x));
    }
    // Flip every pad byte of every level; the input is chosen so that the
    // flipped half of the pad is on the evaluation path.
    const std::uint64_t base = rng.uniform_below(1ULL << depth);
    const auto lens = obf::jllw_pad_lengths(q, o, BitVector(depth, base));
    for (int d = 0; d < depth; ++d)
      for (std::size_t b = 0; b < lens[d]; ++b) {
        BitVector x(depth, base);
        x.set(d, b >= lens[d] / 2);
        ++out.tampers;
        try {
          out.detected += obf::jllw_eval(q, o, x, obf::PadTamper{d, b}) != c.eval(x);
        } catch (const Error&) {
          ++out.detected;
        }
      }
    return out;
  });
  Out tot;
  for (const auto& o : outs)
    tot.inputs += o.inputs, tot.agree += o.agree, tot.tampers += o.tampers, tot.detected += o.detected;
  rep.add("eval_agreement_rate", rate(tot.agree, tot.inputs), at_least(1.0)).extra = {{"inputs", tot.inputs}};
  rep.add("tamper_detection_rate", rate(tot.detected, tot.tampers), at_least(1.0)).extra = {{"tampers", tot.tampers}};
  rep.add("runtime_s", seconds_since(t0), below(30));
  rep.details = {{"circuits", circuits}, {"max_depth", max_depth}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

Report cutchoose_detect(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "cutchoose-detect";
  const auto t0 = Clock::now();
  const std::size_t runs = positive(cfg, "runs", 1000);
  const int lambda_cc = positive(cfg, "lambda_cc", 8);
  const int corrupt = cfg.get_int("corrupt", 3);
  if (corrupt < 0 || corrupt > lambda_cc) throw MalformedInput("config: corrupt must be in [0, lambda_cc]");
  const auto backend = obf::parse_backend(cfg.raw.value("backend", std::string("ideal")));
  const obf::Phi any{"any-circuit", [](const circ::CircuitDesc&) { return true; }};
  const obf::PcParams params{lambda_cc, backend};

  auto outs = parallel_trials<int>(runs, cfg.threads, [&](std::size_t i) {
    Rng rng = trial_rng(cfg.seed, i);
    auto world = obf::OracleWorld::create(mix(cfg.seed) ^ i);
    const auto pp = obf::pc_setup(world, rng);
    const auto c = circ::random_gate_circuit(3, 6, 1, rng);
    obf::PcOptions opts;
    while (static_cast<int>(opts.corrupt.size()) < corrupt) opts.corrupt.insert(rng.uniform_below(lambda_cc));
    const auto o = obf::pc_obfuscate(world, pp, any, c, params, rng, opts);
    return obf::pc_verify(world, pp, any, o).ok ? 0 : 1;
  });
  std::size_t rejected = 0;
  for (int r : outs) rejected += r;
  const double model = 1 - std::pow(0.5, corrupt);
  const auto ci = wilson(rejected, runs);
  rep.add("reject_rate", rate(rejected, runs), at_least(model - 0.05))
      .extra = {{"model", model}, {"wilson95", {ci.lo, ci.hi}}};
  rep.add("runtime_s", seconds_since(t0), below(120));
  rep.details = {{"runs", runs}, {"lambda_cc", lambda_cc}, {"corrupt", corrupt}, {"backend", obf::backend_name(backend)}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- distinguishing games ----------------------------------------------------

namespace {

struct GameResult {
  std::size_t ones0 = 0, ones1 = 0, trials = 0;
};

nlohmann::json game_json(const std::string& name, const GameResult& g, nlohmann::json extra = {}) {
  const auto c0 = wilson(g.ones0, g.trials), c1 = wilson(g.ones1, g.trials);
  const double p0 = rate(g.ones0, g.trials), p1 = rate(g.ones1, g.trials);
  nlohmann::json j{{"game", name},
                   {"trials_per_world", g.trials},
                   {"p_world0", p0},
                   {"p_world1", p1},
                   {"advantage", p1 - p0},
                   {"advantage_ci95", {c1.lo - c0.hi, c1.hi - c0.lo}}};
  if (!extra.is_null()) j.update(extra);
  return j;
}

// Runs `tester(world_bit, rng)` for both worlds.
GameResult play(std::size_t trials, const RunConfig& cfg, std::uint64_t salt,
                const std::function<int(int, Rng&)>& tester) {
  auto outs = parallel_trials<int>(2 * trials, cfg.threads, [&](std::size_t i) {
    Rng rng = trial_rng(cfg.seed + salt, i);
    return tester(static_cast<int>(i % 2), rng);
  });
  GameResult g;
  g.trials = trials;
  for (std::size_t i = 0; i < outs.size(); ++i) (i % 2 ? g.ones1 : g.ones0) += outs[i];
  return g;
}

// x == point, as an AND of per-bit literals.
circ::CircuitDesc point_function(int n, std::uint64_t point) {
  std::vector<circ::Gate> gates;
  std::vector<int> lits;
  for (int i = 0; i < n; ++i) {
    if ((point >> i) & 1) gates.push_back({circ::Op::And, i, i});
    else gates.push_back({circ::Op::Not, i, i});
    lits.push_back(n + static_cast<int>(gates.size()) - 1);
  }
  int acc = lits[0];
  for (int i = 1; i < n; ++i) {
    gates.push_back({circ::Op::And, acc, lits[i]});
    acc = n + static_cast<int>(gates.size()) - 1;
  }
  return circ::CircuitDesc(std::make_shared<circ::GateCircuit>(n, std::move(gates), std::vector<int>{acc}));
}

}  // namespace

Report distinguish_game(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "distinguish-game";
  const auto t0 = Clock::now();
  const std::size_t trials = positive(cfg, "trials", 1000);
  const int q = positive(cfg, "queries", 8);
  const int key_bits = cfg.get_int("key_bits", 16);
  nlohmann::json games = nlohmann::json::array();

  // A tester that ignores its oracle.
  games.push_back(game_json("null-tester", play(trials, cfg, 1, [](int, Rng& r) { return r.bernoulli(0.5); })));

  // QPrO key swap: world 1 reprograms an unknown handle to a fresh key. The
  // tester queries q handles of its choice and hashes the answers.
  {
    auto g = play(trials, cfg, 2, [&](int b, Rng& r) {
      obf::QPrOSim qp(key_bits, r);
      const std::uint64_t k0 = r.next_u64() & qp.key_mask();
      const std::uint64_t h = qp.gen(0, k0);
      if (b) qp.override_handle(0, h, (k0 + 1 + r.uniform_below(qp.key_mask())) & qp.key_mask());
      Bytes acc;
      for (int i = 0; i < q; ++i) {
        const auto out = qp.eval(0, r.next_u64() & qp.key_mask(), Bytes{static_cast<std::uint8_t>(i)}, 4);
        acc.insert(acc.end(), out.begin(), out.end());
      }
      return crypto::sha256(acc)[0] & 1;
    });
    games.push_back(game_json("qpro-keyswap", g, {{"key_bits", key_bits}, {"queries", q}}));
  }

  // CSA hiding: Enc_k|0> vs Enc_k|1> at lambda_code = 1; the tester measures
  // in the computational basis and may query Ver_{k,0}.
  for (const char* tester : {"measure-parity", "ver-query"}) {
    const std::string name = tester;
    auto g = play(trials, cfg, name == "measure-parity" ? 3 : 4, [&](int b, Rng& r) {
      const auto key = csa::keygen(1, 1, r);
      const auto s = sim::sample_basis(csa::enc_basis(key, static_cast<std::uint64_t>(b)), r);
      if (name == "measure-parity") return std::popcount(s) % 2;
      const auto ver = csa::ver_predicate(key, BitVector::zeros(1));
      int acc = 0;
      for (int i = 0; i < q; ++i) acc ^= ver.fn(s ^ (1ULL << r.uniform_below(3)));
      return acc;
    });
    games.push_back(game_json("csa-hiding/" + name, g, {{"queries", q}}));
  }

  // Evasive composability in the ideal model: obfuscated point function vs
  // obfuscated null circuit under q random queries.
  const int n = cfg.get_int("point_bits", 16);
  const double eps = std::pow(2.0, -n);
  auto g = play(trials, cfg, 5, [&](int b, Rng& r) {
    obf::IdealRegistry reg;
    const auto c = b ? circ::null_circuit(n, 1) : point_function(n, r.next_u64() & ((1ULL << n) - 1));
    const auto handle = obf::ideal_obf(reg, c, r);
    int hit = 0;
    for (int i = 0; i < q; ++i)
      hit |= obf::ideal_eval(reg, handle, BitVector(n, r.next_u64() & ((1ULL << n) - 1))).get(0);
    return hit;
  });
  const double bound = 4 * q * std::sqrt(eps);
  games.push_back(game_json("evasive-composability", g, {{"queries", q}, {"epsilon", eps}, {"bound", bound}}));
  const double adv = std::abs(rate(g.ones1, trials) - rate(g.ones0, trials));
  rep.add("evasive_advantage", adv, at_most(bound));
  for (const auto& gj : games)
    rep.add("advantage/" + gj["game"].get<std::string>(), gj["advantage"].get<double>()).extra = gj;
  rep.details = {{"games", games}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- NIZK for NP -------------------------------------------------------------

Report nizk_np_check(const RunConfig& cfg) {
  Report rep;
  rep.scenario = "nizk-np";
  const auto t0 = Clock::now();
  const std::size_t runs = positive(cfg, "runs", 1000);
  struct Out {
    int complete = 0, extracted = 0, forgeries = 0, rejected = 0;
  };
  auto outs = parallel_trials<Out>(runs, cfg.threads, [&](std::size_t i) {
    Rng rng = trial_rng(cfg.seed, i);
    nizk::TranscriptOracle oracle(rng);
    auto [crs, sk] = nizk::np_ext0(oracle, rng);
    nizk::NpStatement st;
    Bytes w;
    if (i % 2 == 0) {
      w = rng.bytes(1 + rng.uniform_below(32));
      st = {"sha256-preimage", crypto::sha256(w),
            [](const Bytes& x, const Bytes& wit) { return crypto::sha256(wit) == x; }};
    } else {
      // Subset sum over 12 random 32-bit weights; the witness is a mask.
      crypto::Writer inst;
      std::vector<std::uint64_t> weights(12);
      const std::uint64_t mask = rng.uniform_below(1ULL << 12);
      std::uint64_t target = 0;
      for (int j = 0; j < 12; ++j) {
        weights[j] = rng.next_u64() & 0xFFFFFFFFULL;
        inst.u64(weights[j]);
        if ((mask >> j) & 1) target += weights[j];
      }
      inst.u64(target);
      crypto::Writer wit;
      wit.u32(static_cast<std::uint32_t>(mask));
      w = wit.take();
      st = {"subset-sum-12", inst.take(), [](const Bytes& x, const Bytes& wt) {
              try {
                crypto::Reader xr(x), wr(wt);
                const std::uint32_t m = wr.u32();
                wr.expect_done();
                if (m >> 12) return false;
                std::uint64_t sum = 0;
                for (int j = 0; j < 12; ++j) {
                  const std::uint64_t v = xr.u64();
                  if ((m >> j) & 1) sum += v;
                }
                return sum == xr.u64();
              } catch (const Error&) {
                return false;
              }
            }};
    }
    Out o;
    const auto proof = nizk::np_prove(oracle, crs, st, w, rng);
    o.complete = nizk::np_verify(oracle, crs, st, proof);
    try {
      o.extracted = st.relation(st.instance, nizk::np_ext1(crs, sk, st, proof));
    } catch (const Error&) {
    }
    // Ciphertext swaps: a fresh encryption of the witness, and of junk.
    for (const Bytes& m : {w, rng.bytes(w.size())}) {
      auto forged = proof;
      forged.ct = nizk::pke_enc(crs.pk, m, rng.bytes(16));
      ++o.forgeries;
      o.rejected += !nizk::np_verify(oracle, crs, st, forged);
    }
    return o;
  });
  Out t;
  for (const auto& o : outs)
    t.complete += o.complete, t.extracted += o.extracted, t.forgeries += o.forgeries, t.rejected += o.rejected;
  rep.add("completeness_rate", rate(t.complete, runs), at_least(1.0));
  rep.add("extraction_rate", rate(t.extracted, runs), at_least(1.0));
  rep.add("swap_rejection_rate", rate(t.rejected, t.forgeries), at_least(1.0)).extra = {{"forgeries", t.forgeries}};
  rep.details = {{"runs", runs}};
  rep.wall_clock_s = seconds_since(t0);
  return rep;
}

// --- dispatch ----------------------------------------------------------------

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"csa-correctness", "permver-bench",   "ati-check",
                                              "e2e-complete",    "e2e-extract",     "e2e-simulate",
                                              "jllw-correctness", "cutchoose-detect", "distinguish-game"};
  return names;
}

Report run_scenario(const std::string& name, const nlohmann::json& config) {
  const auto cfg = RunConfig::from_json(config);
  const auto t0 = Clock::now();
  Report r;
  if (name == "csa-correctness") r = csa_correctness(cfg);
  else if (name == "permver-bench") {
    r = permver_bench(cfg);
    const auto b = bound_check(cfg);
    for (auto m : b.metrics) {
      m.name = "bounds/" + m.name;
      r.metrics.push_back(std::move(m));
    }
    r.details["bounds"] = b.details;
  } else if (name == "ati-check") r = ati_check(cfg);
  else if (name == "e2e-complete") r = e2e_complete(cfg);
  else if (name == "e2e-extract") {
    r = e2e_complete(cfg);
    r.scenario = "e2e-extract";
  } else if (name == "e2e-simulate") r = e2e_simulate(cfg);
  else if (name == "jllw-correctness") r = jllw_correctness(cfg);
  else if (name == "cutchoose-detect") r = cutchoose_detect(cfg);
  else if (name == "distinguish-game") r = distinguish_game(cfg);
  else throw MalformedInput("unknown scenario: " + name);
  r.config = config;
  r.wall_clock_s = seconds_since(t0);
  return r;
}

}  // namespace qmalab::exp
