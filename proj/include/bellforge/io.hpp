#pragma once

#include <string>

#include "json.hpp"

#include "bellforge/construction.hpp"
#include "bellforge/entanglement.hpp"
#include "bellforge/scenario.hpp"
#include "bellforge/sdp.hpp"

namespace bellforge {

using Json = nlohmann::json;

/// {"n_inputs", "n_outputs", "coeffs": [x][y][a][b]}.
Json to_json(const BellFunctional& m);
/// Throws SchemaError naming the JSON pointer of the first bad node.
BellFunctional bell_from_json(const Json& j);

/// {"n_inputs", "n_outputs", "p": [x][y][a][b]}.
Json to_json(const ProbabilityTable& p);
ProbabilityTable table_from_json(const Json& j);

/// {"m", "sense", "obj": [[i,j,v]...], "constraints": [{"A": [[i,j,v]...], "b"}]}
/// with i ≤ j and the off-diagonal convention of SparseSym.
Json to_json(const GramProblem& p);
GramProblem gram_from_json(const Json& j);

/// Bernoulli tensors store the entries as packed bits (bit i set ⇔ entry i
/// is −1, little-endian within each byte, hex encoded); Gaussian tensors
/// store the values. Metadata: n, seed, distribution, fingerprint.
Json to_json(const SignTensor& s);
/// Rebuilds the tensor and checks the stored fingerprint if present.
SignTensor sign_tensor_from_json(const Json& j);

Json to_json(const ClassicalResult& r);
Json to_json(const ConstructionReport& r);

/// {"source_dim", "terms": [{"beta", "indices"}]}.
Json to_json(const DyadicDecomposition& d);
DyadicDecomposition dyadic_from_json(const Json& j);

std::string hex_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> hex_decode(const std::string& s);

}  // namespace bellforge
