#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qcaveat/error_lab.hpp"
#include "qcaveat/hhl.hpp"
#include "qcaveat/phase_estimation.hpp"
#include "qcaveat/qml.hpp"
#include "qcaveat/statevector.hpp"

namespace qcaveat {

using Json = nlohmann::ordered_json;

// Matrices: {"dim": M, "re": [[...]], "im": [[...]]}; non-square matrices use
// "rows" and "cols" instead of "dim". Vectors: {"dim": M, "re": [...], "im": [...]}.
Json matrix_to_json(const CMatrix& m);
Json vector_to_json(const CVector& v);
CMatrix matrix_from_json(const Json& j);
CVector vector_from_json(const Json& j);
HermitianMatrix hermitian_from_json(const Json& j);

/// {"layout": {name: width, ...}, "re": [...], "im": [...]}, registers in order.
Json state_to_json(const QuantumState& s);
QuantumState state_from_json(const Json& j);

Json to_json(const QpeOutcome& q);
Json to_json(const HhlResult& r);
Json to_json(const ErrorReport& r);
Json to_json(const ShotEstimate& e);
Json to_json(const ClassificationEstimate& e);
Json to_json(const TraceEstimate& e);
Json to_json(const RegressionPrediction& p);

/// One vector per row, comma-separated real entries; blank lines and lines
/// starting with '#' are skipped. Throws ParseError with the line number.
Dataset dataset_from_csv(const std::string& text);
/// A JSON matrix whose rows are the vectors.
Dataset dataset_from_json(const Json& j);
/// Dispatches on the file extension (.csv or .json).
Dataset load_dataset(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace qcaveat
