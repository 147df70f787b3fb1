#include "posfactor/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "posfactor/error.hpp"

namespace posfactor {

Json matrix_to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (const Complex& z : m.row_major()) entries.push_back({z.real(), z.imag()});
    return {{"n", m.n()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        const Json& entries = j.at("entries");
        if (n == 0 || !entries.is_array()) throw InvalidArgument("matrix JSON: bad shape");
        std::vector<Complex> values;
        values.reserve(entries.size());
        for (const auto& e : entries) {
            if (!e.is_array() || e.size() != 2) {
                throw InvalidArgument("matrix JSON: entries must be [re, im] pairs");
            }
            values.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        return ComplexMatrix::from_row_major(n, values);
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("matrix JSON: ") + e.what());
    }
}

Json schedule_to_json(const FactorizationSchedule& s) {
    return {{"trotter", s.trotter_steps},
            {"commutator", s.commutator_steps},
            {"maxFactors", s.max_factors}};
}

FactorizationSchedule schedule_from_json(const Json& j) {
    try {
        FactorizationSchedule s;
        s.trotter_steps = j.at("trotter").get<int>();
        s.commutator_steps = j.at("commutator").get<int>();
        s.max_factors = j.at("maxFactors").get<std::size_t>();
        return s;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("schedule JSON: ") + e.what());
    }
}

Json factorization_to_json(const PositiveFactorization& f) {
    Json factors = Json::array();
    for (const auto& m : f.factors) factors.push_back(matrix_to_json(m));
    return {{"target", matrix_to_json(f.target)},
            {"factors", std::move(factors)},
            {"error", f.error},
            {"method", f.method},
            {"schedule", schedule_to_json(f.schedule)}};
}

PositiveFactorization factorization_from_json(const Json& j) {
    try {
        PositiveFactorization f;
        f.target = matrix_from_json(j.at("target"));
        for (const auto& m : j.at("factors")) f.factors.push_back(matrix_from_json(m));
        f.error = j.at("error").get<double>();
        f.method = j.at("method").get<std::string>();
        f.schedule = schedule_from_json(j.at("schedule"));
        return f;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("factorization JSON: ") + e.what());
    }
}

Json report_to_json(const ObstructionReport& r) {
    Json distance = std::isfinite(r.best_distance) ? Json(r.best_distance) : Json(nullptr);
    return {{"lambda", {r.lambda.real(), r.lambda.imag()}},
            {"n", r.n},
            {"bestDistance", std::move(distance)},
            {"inGroup", r.in_group},
            {"budget", schedule_to_json(r.budget)}};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error("cannot parse " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

} // namespace posfactor
