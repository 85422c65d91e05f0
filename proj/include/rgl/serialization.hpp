#pragma once

// JSON documents for matrices, states and channels.
// A matrix is {"dim": n, "re": [[...]], "im": [[...]]}; rectangular Kraus
// operators add "rows" and "cols". A channel is {"kraus": [matrix, ...]}.

#include "json.hpp"

#include "rgl/quantum_states.hpp"

namespace rgl {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const HermitianOperator& h);
Json to_json(const DensityState& rho);
Json to_json(const QuantumChannel& channel);

HermitianOperator hermitian_from_json(const Json& j);
DensityState state_from_json(const Json& j);
QuantumChannel channel_from_json(const Json& j);

/// Reads a state document from disk. Throws ValidationError on I/O or schema errors.
DensityState load_state(const std::string& path);

}  // namespace rgl
