#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posfactor/factorlab.hpp"
#include "posfactor/obstruction.hpp"

namespace posfactor {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    std::uint64_t seed = 20240601;
    std::vector<std::size_t> dimensions{2};
    std::vector<int> steps{4, 8, 16, 32, 64};
    std::vector<FactorizationSchedule> ladder = default_budget_ladder();
    std::vector<double> epsilons{1.0, 0.5, 0.25};
    double acceptance_epsilon = 0.25;
    std::size_t grid = 0;           // 0 picks 4n
    std::size_t max_dimension = 4;  // landscape guard
    bool commuting = false;         // sweeps: use commuting inputs
    bool timing = false;            // emit wall-clock column (breaks byte determinism)
    OutputFormat format = OutputFormat::csv;
};

struct SweepRow {
    int n = 0;
    double error = 0.0;
    std::size_t factor_count = 0;
    double wall_seconds = 0.0;
};

struct SweepResult {
    std::string kind; // "trotter" or "commutator"
    std::size_t dimension = 0;
    std::vector<SweepRow> rows;
    std::optional<double> fitted_order; // empty when every error sits at the rounding floor
};

struct DensityRow {
    double epsilon = 0.0;
    int m = 0;
    std::size_t N = 0;
    double max_gap = 0.0;        // worst grid point distance to the corrected set
    double product_defect = 0.0; // |Π μ − 1|
    bool pass = false;
};

struct LandscapeResult {
    std::vector<GroupEstimate> estimates; // one per dimension
};

/// Errors below this are treated as exact and excluded from order fits.
inline constexpr double kSweepFloor = 1e-10;

/// −slope of the least-squares line through (log n, log error).
double fitted_order(const std::vector<SweepRow>& rows);

SweepResult run_trotter_sweep(const ExperimentConfig& config);
SweepResult run_commutator_sweep(const ExperimentConfig& config);
LandscapeResult run_obstruction_landscape(const ExperimentConfig& config);
std::vector<DensityRow> run_density_check(const ExperimentConfig& config);

/// Max over a grid of spacing ε/10 on the circle of the distance to the
/// nearest point of `points`.
double circle_scan_gap(const std::vector<Complex>& points, double eps);

std::string sweep_to_text(const SweepResult& r, const ExperimentConfig& config);
std::string landscape_to_text(const LandscapeResult& r, const ExperimentConfig& config);
std::string density_to_text(const std::vector<DensityRow>& rows, const ExperimentConfig& config);

} // namespace posfactor
