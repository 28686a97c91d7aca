#include "xorlab/io.hpp"

#include <fstream>
#include <sstream>

namespace xorlab::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' is not a number");
  return v.get<T>();
}

std::vector<std::size_t> size_list(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of counts");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw FormatError("expected a non-negative integer");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

Json matrix_list(const std::vector<ComplexMatrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(to_json(m));
  return arr;
}

}  // namespace

Json document(Json body) {
  Json out = Json::object();
  out["schema"] = kSchema;
  for (auto& [k, v] : body.items()) {
    if (k != "schema") out[k] = std::move(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Core values

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(to_json(m(r, c)));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const ComplexVector& v) {
  Json data = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) data.push_back(to_json(v(k)));
  return data;
}

Json to_json(const PureState& s) {
  return Json{{"dim", s.dim()}, {"amplitudes", to_json(s.amplitudes())}};
}

Json to_json(const DensityOperator& rho) {
  return Json{{"dim", rho.dim()}, {"matrix", to_json(rho.matrix())}};
}

Json to_json(const Projector& p) {
  return Json{{"dim", p.dim()}, {"matrix", to_json(p.matrix())}};
}

Json to_json(const Povm& m) {
  return Json{{"dim", m.dim()}, {"labels", m.labels()}, {"elements", matrix_list(m.elements())}};
}

Json to_json(const SplitSystem& s) {
  return Json{{"dims", s.dims()}, {"alice_registers", s.alice_registers()},
              {"bob_registers", s.bob_registers()}};
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("complex scalars are [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto rows = number<Eigen::Index>(j, "rows");
  const auto cols = number<Eigen::Index>(j, "cols");
  const Json& data = field(j, "data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      data.size() != static_cast<std::size_t>(rows * cols)) {
    throw FormatError("matrix data length differs from rows * cols");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(data[static_cast<std::size_t>(r * cols + c)]);
    }
  }
  if (!is_finite(m)) throw FormatError("matrix has non-finite entries");
  return m;
}

PureState pure_state_from_json(const Json& j) {
  const Json& amps = field(j, "amplitudes");
  if (!amps.is_array()) throw FormatError("amplitudes must be an array");
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != amps.size()) {
    throw FormatError("state dim differs from the amplitude count");
  }
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = complex_from_json(amps[k]);
  }
  return PureState(std::move(v));
}

DensityOperator density_from_json(const Json& j) {
  if (j.contains("amplitudes")) return DensityOperator::from_pure(pure_state_from_json(j));
  const Json& m = j.contains("matrix") ? j.at("matrix") : j;
  return DensityOperator(matrix_from_json(m));
}

Povm povm_from_json(const Json& j) {
  const Json& els = field(j, "elements");
  if (!els.is_array()) throw FormatError("POVM elements must be an array");
  std::vector<ComplexMatrix> elements;
  for (const auto& e : els) elements.push_back(matrix_from_json(e));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return Povm(std::move(elements), std::move(labels));
}

SplitSystem split_system_from_json(const Json& j) {
  return SplitSystem(size_list(field(j, "dims")), size_list(field(j, "alice_registers")));
}

// ---------------------------------------------------------------------------
// Encodings and strategies

Json to_json(const encodings::XorEncoding& enc) {
  Json entries = Json::array();
  for (const auto& e : enc.entries) {
    entries.push_back(Json{{"x0", bitstring(e.x0, enc.n)},
                           {"x1", bitstring(e.x1, enc.n)},
                           {"prior", e.prior},
                           {"state", to_json(e.state)}});
  }
  return document(Json{{"n", enc.n}, {"entries", std::move(entries)}});
}

encodings::XorEncoding encoding_from_json(const Json& j) {
  encodings::XorEncoding enc;
  enc.n = number<unsigned>(j, "n");
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) throw FormatError("entries must be an array");
  for (const auto& e : entries) {
    const auto x0 = field(e, "x0").get<std::string>();
    const auto x1 = field(e, "x1").get<std::string>();
    if (x0.size() != enc.n || x1.size() != enc.n) {
      throw FormatError("entry labels must have n characters");
    }
    enc.entries.push_back({parse_bitstring(x0), parse_bitstring(x1), number<double>(e, "prior"),
                           density_from_json(field(e, "state"))});
  }
  enc.validate();
  return enc;
}

Json to_json(const games::QuantumStrategy& s) {
  Json alice = Json::array();
  for (const auto& m : s.alice) alice.push_back(to_json(m));
  Json bob = Json::array();
  for (const auto& m : s.bob) bob.push_back(to_json(m));
  return document(Json{{"system", to_json(s.system)},
                       {"state", to_json(s.state)},
                       {"alice", std::move(alice)},
                       {"bob", std::move(bob)}});
}

games::QuantumStrategy strategy_from_json(const Json& j) {
  std::vector<Povm> alice;
  for (const auto& m : field(j, "alice")) alice.push_back(povm_from_json(m));
  std::vector<Povm> bob;
  for (const auto& m : field(j, "bob")) bob.push_back(povm_from_json(m));
  games::QuantumStrategy s{pure_state_from_json(field(j, "state")),
                           split_system_from_json(field(j, "system")), std::move(alice),
                           std::move(bob)};
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// SDP

Json to_json(const sdp::SparseTerm& t) {
  return Json{{"block", t.block}, {"row", t.row}, {"col", t.col}, {"value", to_json(t.value)}};
}

namespace {

Json terms_json(const std::vector<sdp::SparseTerm>& terms) {
  Json arr = Json::array();
  for (const auto& t : terms) arr.push_back(to_json(t));
  return arr;
}

std::vector<sdp::SparseTerm> terms_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("terms must be an array");
  std::vector<sdp::SparseTerm> out;
  for (const auto& t : j) {
    out.push_back({number<std::size_t>(t, "block"), number<std::size_t>(t, "row"),
                   number<std::size_t>(t, "col"), complex_from_json(field(t, "value"))});
  }
  return out;
}

// Dense matrices in "objective" / "constraints[].matrix" are accepted for
// single-block problems.
std::vector<sdp::SparseTerm> coefficient_from_json(const Json& j, const char* dense,
                                                   const char* sparse) {
  if (j.contains(sparse)) return terms_from_json(j.at(sparse));
  if (j.contains(dense)) return sdp::SdpProblem::terms_of(0, matrix_from_json(j.at(dense)));
  throw FormatError(std::string("missing '") + dense + "' or '" + sparse + "'");
}

}  // namespace

Json to_json(const sdp::SdpProblem& p) {
  Json cons = Json::array();
  for (const auto& c : p.constraints) {
    cons.push_back(Json{{"terms", terms_json(c.terms)}, {"rhs", c.rhs}});
  }
  return document(Json{{"blocks", p.blocks},
                       {"sense", p.sense == sdp::Sense::maximize ? "maximize" : "minimize"},
                       {"real", p.real},
                       {"objective_terms", terms_json(p.objective)},
                       {"constraints", std::move(cons)}});
}

sdp::SdpProblem sdp_problem_from_json(const Json& j) {
  sdp::SdpProblem p;
  if (j.contains("blocks")) {
    p.blocks = size_list(j.at("blocks"));
  } else {
    p.blocks = {number<std::size_t>(j, "dim")};
  }
  const std::string sense = j.value("sense", "maximize");
  if (sense == "maximize") {
    p.sense = sdp::Sense::maximize;
  } else if (sense == "minimize") {
    p.sense = sdp::Sense::minimize;
  } else {
    throw FormatError("sense must be maximize or minimize");
  }
  p.real = j.value("real", false);
  p.objective = coefficient_from_json(j, "objective", "objective_terms");
  for (const auto& c : field(j, "constraints")) {
    p.constraints.push_back({coefficient_from_json(c, "matrix", "terms"), number<double>(c, "rhs")});
  }
  p.validate();
  return p;
}

Json to_json(const sdp::SdpSolution& s) {
  return document(Json{{"status", sdp::to_string(s.status)},
                       {"value", s.value},
                       {"dual_value", s.dual_value},
                       {"primal_residual", s.primal_residual},
                       {"dual_residual", s.dual_residual},
                       {"dual_gap", s.dual_gap},
                       {"iterations", s.iterations},
                       {"primal", matrix_list(s.primal)}});
}

// ---------------------------------------------------------------------------
// Reports

Json to_json(const sequential::SandwichReport& r) {
  return Json{{"alpha", r.alpha},           {"beta", r.beta},
              {"observed", r.observed},     {"lower", r.lower},
              {"upper", r.upper},           {"margin_low", r.margin_low},
              {"margin_high", r.margin_high}, {"in_regime", r.in_regime}};
}

Json to_json(const sequential::GammaReport& r) {
  return Json{{"gamma", r.gamma},
              {"bound", r.bound},
              {"saturated_positive", r.saturated_positive},
              {"saturated_negative", r.saturated_negative}};
}

Json to_json(const sequential::SweepRecord& r, std::uint64_t seed) {
  Json j{{"seed", seed},
         {"dim", r.dim},
         {"shard", r.shard},
         {"index", r.index},
         {"rank_c", r.rank_c},
         {"rank_d", r.rank_d},
         {"alpha", r.sandwich.alpha},
         {"beta", r.sandwich.beta},
         {"observed", r.sandwich.observed},
         {"lower", r.sandwich.lower},
         {"upper", r.sandwich.upper},
         {"observed_swapped", r.swapped.observed},
         {"gamma", r.gamma.gamma},
         {"gamma_bound", r.gamma.bound},
         {"pass", r.pass}};
  if (r.psi) j["psi"] = to_json(*r.psi);
  if (r.c) j["c"] = to_json(*r.c);
  if (r.d) j["d"] = to_json(*r.d);
  return j;
}

Json to_json(const sequential::DimSummary& s) {
  return Json{{"dim", s.dim},
              {"accepted", s.accepted},
              {"attempted", s.attempted},
              {"acceptance_rate", s.acceptance_rate()},
              {"sandwich_violations", s.sandwich_violations},
              {"gamma_violations", s.gamma_violations},
              {"symmetry_violations", s.symmetry_violations},
              {"outside_regime", s.outside_regime},
              {"outside_regime_out_of_bounds", s.outside_regime_out_of_bounds}};
}

Json to_json(const encodings::LearningReport& r) {
  Json j{{"n", r.n},
         {"p0", r.p0},
         {"p1", r.p1},
         {"c", r.c},
         {"p_xor_optimal", r.p_xor_optimal},
         {"p_xor_sequential", nullptr},
         {"p_pair", r.p_pair},
         {"p_xor_upper", r.p_xor_upper},
         {"p_pair_upper", r.p_pair_upper},
         {"bit_bound", r.bit_bound},
         {"string_bound", r.string_bound},
         {"bit_ok", r.bit_ok},
         {"string_ok", r.string_ok},
         {"string_asserted", r.string_asserted},
         {"theorem1_ok", r.theorem1_ok},
         {"solver_gap", r.solver_gap}};
  if (r.p_xor_sequential) j["p_xor_sequential"] = *r.p_xor_sequential;
  return j;
}

Json to_json(const protocols::OtInstance& ot) {
  return Json{{"n", ot.n},
              {"mode", protocols::to_string(ot.mode)},
              {"encoding_dim", ot.encoding.dim()},
              {"honest_p", ot.honest_p},
              {"per_choice", ot.per_choice},
              {"output_nonuniformity", ot.output_nonuniformity}};
}

Json to_json(const protocols::CheatReport& r) {
  return Json{{"honest_p", r.honest_p},         {"a_ot", r.a_ot},
              {"b_ot", r.b_ot},                 {"b_pair", r.b_pair},
              {"theorem2_rhs", r.theorem2_rhs}, {"kitaev_product", r.kitaev_product},
              {"theorem2_ok", r.theorem2_ok}};
}

Json to_json(const protocols::CoinFlipReport& r) {
  return Json{{"honest_abort", r.honest_abort}, {"a_cf", r.a_cf},
              {"b_cf_ceiling", r.b_cf},        {"kitaev_product", r.kitaev_product},
              {"kitaev_ok", r.kitaev_ok}};
}

Json to_json(const protocols::TradeoffBound& r) {
  return Json{{"bound", r.bound},
              {"t_star", r.t_star},
              {"grid_bound", r.grid_bound},
              {"grid_t", r.grid_t}};
}

Json to_json(const protocols::TradeoffCurve& c) {
  return Json{{"t", c.t}, {"a_bc", c.a_bc}, {"b_bc", c.b_bc}};
}

Json to_json(const protocols::BitCommitmentReport& r) {
  return Json{{"a_bc", r.a_bc}, {"b_bc_bound", r.b_bc_bound}, {"curve", to_json(r.curve)}};
}

// ---------------------------------------------------------------------------
// Files

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    Json j = Json::parse(in);
    if (j.is_object() && j.contains("schema") && j.at("schema") != kSchema) {
      throw FormatError("unsupported schema in '" + path + "'");
    }
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace xorlab::io
