// JSON forms of the library's values (schema "xorlab/v1").
//
// Complex scalars are [re, im]; matrices {"rows", "cols", "data"} row-major;
// pure states {"dim", "amplitudes"}. Top-level documents carry a "schema"
// field. Numbers are written at full double precision.

#pragma once

#include <string>

#include <json.hpp>

#include "xorlab/core.hpp"
#include "xorlab/encodings.hpp"
#include "xorlab/games.hpp"
#include "xorlab/protocols.hpp"
#include "xorlab/sdp.hpp"
#include "xorlab/sequential.hpp"

namespace xorlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "xorlab/v1";

// Thrown for malformed documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

Json to_json(Complex z);
Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);
Json to_json(const PureState& s);
Json to_json(const DensityOperator& rho);
Json to_json(const Projector& p);
Json to_json(const Povm& m);
Json to_json(const SplitSystem& s);

Complex complex_from_json(const Json& j);
ComplexMatrix matrix_from_json(const Json& j);
PureState pure_state_from_json(const Json& j);
// Accepts either a matrix object or {"dim", "matrix"}; pure states are also
// accepted and converted.
DensityOperator density_from_json(const Json& j);
Povm povm_from_json(const Json& j);
SplitSystem split_system_from_json(const Json& j);

Json to_json(const encodings::XorEncoding& enc);
encodings::XorEncoding encoding_from_json(const Json& j);

Json to_json(const games::QuantumStrategy& s);
games::QuantumStrategy strategy_from_json(const Json& j);

Json to_json(const sdp::SparseTerm& t);
Json to_json(const sdp::SdpProblem& p);
sdp::SdpProblem sdp_problem_from_json(const Json& j);
Json to_json(const sdp::SdpSolution& s);

Json to_json(const sequential::SandwichReport& r);
Json to_json(const sequential::GammaReport& r);
Json to_json(const sequential::SweepRecord& r, std::uint64_t seed);
Json to_json(const sequential::DimSummary& s);

Json to_json(const encodings::LearningReport& r);
Json to_json(const protocols::OtInstance& ot);  // without the encoding
Json to_json(const protocols::CheatReport& r);
Json to_json(const protocols::CoinFlipReport& r);
Json to_json(const protocols::TradeoffBound& r);
Json to_json(const protocols::TradeoffCurve& c);
Json to_json(const protocols::BitCommitmentReport& r);

// Adds the schema field in front of an object.
Json document(Json body);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace xorlab::io
