#pragma once

#include "crossnorm/channels.hpp"
#include "crossnorm/states.hpp"
#include "crossnorm/tensor_decomposition.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace crossnorm {

// Entries are [re, im] pairs. A matrix is a list of rows of entries; state
// files carry a flat row-major entry list instead.

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);

/// {"kind": "density"|"pure", "dims": [...], "data": [[re, im], ...]}
nlohmann::json state_to_json(const AnyState& s);
AnyState state_from_json(const nlohmann::json& j);
AnyState read_state(const std::filesystem::path& path);
void write_state(const AnyState& s, const std::filesystem::path& path);

/// {"dims": [...], "terms": [{"factors": [matrix, ...]}, ...], "cost": c}
nlohmann::json witness_to_json(const TensorDecomposition& d);
/// The stored cost is informational; the returned decomposition recomputes it.
TensorDecomposition witness_from_json(const nlohmann::json& j);
TensorDecomposition read_witness(const std::filesystem::path& path);
void write_witness(const TensorDecomposition& d, const std::filesystem::path& path);

/// {"kraus": [matrix, ...], "dims_in": d, "dims_out": d'}
KrausChannel channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const KrausChannel& c);
KrausChannel read_channel(const std::filesystem::path& path);

/// {"projectors": [matrix, ...]}
LudersOperation luders_from_json(const nlohmann::json& j);
nlohmann::json luders_to_json(const LudersOperation& l);
LudersOperation read_luders(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace crossnorm
