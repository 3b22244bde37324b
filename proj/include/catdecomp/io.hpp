#ifndef CATDECOMP_IO_HPP
#define CATDECOMP_IO_HPP

#include <json.hpp>

#include "catdecomp/channels.hpp"

namespace catdecomp {

using Json = nlohmann::ordered_json;

/// Matrix <-> {"rows": r, "cols": c, "data": [[re, im], ...]} (row-major).
Json matrix_to_wire(const Matrix& m);
Matrix matrix_from_wire(const Json& j);

/// State file: {"dims": [...], "matrix": WireMatrix}.
Json state_to_json(const QuantumState& s);
QuantumState state_from_json(const Json& j);

/// Channel file: {"dim_in": n, "dim_out": m, "kraus": [WireMatrix, ...]}
/// or {"dim_in": n, "dim_out": m, "choi": WireMatrix}.
Json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const Json& j);

/// FNV-1a 64-bit digest of a byte string, as 16 hex characters.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace catdecomp

#endif  // CATDECOMP_IO_HPP
