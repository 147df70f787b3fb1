#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "posfactor/complex_matrix.hpp"
#include "posfactor/factorlab.hpp"
#include "posfactor/obstruction.hpp"

namespace posfactor {

using Json = nlohmann::json;

/// {"n": int, "entries": [[re, im], ...]} with n² row-major entries.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json schedule_to_json(const FactorizationSchedule& s);
FactorizationSchedule schedule_from_json(const Json& j);

Json factorization_to_json(const PositiveFactorization& f);
PositiveFactorization factorization_from_json(const Json& j);

Json report_to_json(const ObstructionReport& r);

/// Shortest decimal that round-trips, independent of the C locale.
std::string format_double(double v);

/// Throws Error on I/O or parse failures.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace posfactor
