#include "posfactor/tolerances.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "posfactor/error.hpp"

namespace posfactor {

namespace {

double* field(Tolerances& t, std::string_view key) {
    if (key == "reconstruction") return &t.reconstruction;
    if (key == "hermitian") return &t.hermitian;
    if (key == "unitary") return &t.unitary;
    if (key == "positivity") return &t.positivity;
    if (key == "determinant") return &t.determinant;
    if (key == "root_of_unity") return &t.root_of_unity;
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

} // namespace

Tolerances parse_tolerances(std::string_view spec) {
    Tolerances t;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const auto item = trim(spec.substr(0, comma));
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        if (item.empty()) continue;

        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("tolerance entry '" + std::string(item) + "' is not key=value");
        }
        const auto key = trim(item.substr(0, eq));
        const auto text = trim(item.substr(eq + 1));
        double* slot = field(t, key);
        if (slot == nullptr) throw InvalidArgument("unknown tolerance '" + std::string(key) + "'");

        double value = 0.0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || end != text.data() + text.size() || !(value > 0.0)) {
            throw InvalidArgument("bad value for tolerance '" + std::string(key) + "'");
        }
        *slot = value;
    }
    return t;
}

const Tolerances& tolerances() {
    static const Tolerances instance = [] {
        const char* env = std::getenv("POSFACTOR_TOL");
        return env == nullptr ? Tolerances{} : parse_tolerances(env);
    }();
    return instance;
}

} // namespace posfactor
