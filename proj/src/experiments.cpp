#include "posfactor/experiments.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "posfactor/error.hpp"
#include "posfactor/io.hpp"
#include "posfactor/matcore.hpp"
#include "posfactor/random.hpp"

namespace posfactor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream ids for the seeded inputs.
constexpr std::uint64_t kStreamA = 1;
constexpr std::uint64_t kStreamB = 2;
constexpr std::uint64_t kStreamDensity = 100;
constexpr std::uint64_t kStreamLandscape = 200;

std::size_t sweep_dimension(const ExperimentConfig& config) {
    if (config.dimensions.empty() || config.dimensions.front() == 0) {
        throw InvalidArgument("sweep needs a positive dimension");
    }
    return config.dimensions.front();
}

void check_steps(const ExperimentConfig& config) {
    if (config.steps.size() < 2) throw InvalidArgument("sweep needs at least two step values");
    for (int n : config.steps) {
        if (n < 1) throw InvalidArgument("sweep step values must be positive");
    }
}

template <typename Measure>
SweepResult run_sweep(const char* kind, const ExperimentConfig& config, Measure measure) {
    check_steps(config);
    SweepResult out;
    out.kind = kind;
    out.dimension = sweep_dimension(config);
    bool floor_only = true;
    for (int n : config.steps) {
        const auto start = std::chrono::steady_clock::now();
        SweepRow row = measure(n);
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        floor_only = floor_only && row.error <= kSweepFloor;
        out.rows.push_back(row);
    }
    if (!floor_only) out.fitted_order = fitted_order(out.rows);
    return out;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

} // namespace

double fitted_order(const std::vector<SweepRow>& rows) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double count = 0.0;
    for (const auto& r : rows) {
        if (!(r.error > 0.0)) continue;
        const double x = std::log(static_cast<double>(r.n));
        const double y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1.0;
    }
    const double denom = count * sxx - sx * sx;
    if (count < 2.0 || denom == 0.0) throw InvalidArgument("order fit needs two distinct points");
    return -(count * sxy - sx * sy) / denom;
}

SweepResult run_trotter_sweep(const ExperimentConfig& config) {
    const std::size_t dim = sweep_dimension(config);
    Rng ra = Rng::stream(config.seed, kStreamA);
    Rng rb = Rng::stream(config.seed, kStreamB);
    const Mat a = unit_norm(random_complex(dim, ra));
    const Mat b = config.commuting ? unit_norm(a * a) : unit_norm(random_complex(dim, rb));
    const ComplexMatrix am(a), bm(b);
    const Mat exact = matrix_exp(Mat(a + b));

    return run_sweep("trotter", config, [&](int n) {
        const auto factors = trotter_factors(am, bm, n);
        const Mat product = ordered_product(factors, dim);
        return SweepRow{n, op_norm(product - exact), factors.size(), 0.0};
    });
}

SweepResult run_commutator_sweep(const ExperimentConfig& config) {
    const std::size_t dim = sweep_dimension(config);
    Rng ra = Rng::stream(config.seed, kStreamA);
    Rng rb = Rng::stream(config.seed, kStreamB);
    const Mat b = unit_norm(random_hermitian(dim, rb));
    const Mat a = config.commuting ? unit_norm(b * b) : unit_norm(random_complex(dim, ra));
    const ComplexMatrix am(a), bm(b);

    return run_sweep("commutator", config, [&](int n) {
        const PositiveFactorization f = commutator_exp_factors(am, bm, n);
        return SweepRow{n, f.error, f.factors.size(), 0.0};
    });
}

LandscapeResult run_obstruction_landscape(const ExperimentConfig& config) {
    LandscapeResult out;
    for (std::size_t n : config.dimensions) {
        if (n == 0) throw InvalidArgument("landscape dimension must be positive");
        if (n > config.max_dimension) {
            throw InvalidArgument("landscape dimension " + std::to_string(n) +
                                  " exceeds the desk-scale guard " +
                                  std::to_string(config.max_dimension));
        }
        const std::size_t grid = config.grid == 0 ? 4 * n : config.grid;
        out.estimates.push_back(estimate_group_G(n, grid, config.acceptance_epsilon, config.ladder,
                                                 splitmix64(config.seed ^ (kStreamLandscape + n))));
    }
    return out;
}

double circle_scan_gap(const std::vector<Complex>& points, double eps) {
    const double spacing = eps / 10.0;
    const auto steps = static_cast<std::size_t>(std::ceil(kTwoPi / spacing));
    double worst = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        const Complex probe = std::polar(1.0, kTwoPi * static_cast<double>(s) / static_cast<double>(steps));
        double nearest = std::numeric_limits<double>::infinity();
        for (const Complex& p : points) nearest = std::min(nearest, std::abs(probe - p));
        worst = std::max(worst, nearest);
    }
    return worst;
}

std::vector<DensityRow> run_density_check(const ExperimentConfig& config) {
    std::vector<DensityRow> out;
    for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
        const double eps = config.epsilons[i];
        if (!(eps > 0.0 && eps <= 2.0)) throw InvalidArgument("density eps must lie in (0, 2]");
        const TorusParameters params = torus_parameters(eps);
        Rng rng = Rng::stream(config.seed, kStreamDensity + i);
        std::vector<Complex> lambdas(params.N);
        for (auto& l : lambdas) l = std::polar(1.0, kTwoPi * rng.uniform());

        const TorusCorrection corr = eps_dense_correction(lambdas, eps);
        Complex product = 1.0;
        for (const Complex& mu : corr.mus) product *= mu;

        DensityRow row;
        row.epsilon = eps;
        row.m = corr.m;
        row.N = corr.N;
        row.max_gap = circle_scan_gap(corr.corrected(), eps);
        row.product_defect = std::abs(product - 1.0);
        row.pass = row.max_gap < eps && row.product_defect <= 1e-12;
        out.push_back(row);
    }
    return out;
}

std::string sweep_to_text(const SweepResult& r, const ExperimentConfig& config) {
    if (config.format == OutputFormat::json) {
        Json rows = Json::array();
        for (const auto& row : r.rows) {
            Json j = {{"n", row.n}, {"error", row.error}, {"factors", row.factor_count}};
            if (config.timing) j["wallSeconds"] = row.wall_seconds;
            rows.push_back(std::move(j));
        }
        Json doc = {{"kind", r.kind},
                    {"dimension", r.dimension},
                    {"seed", config.seed},
                    {"rows", std::move(rows)},
                    {"fittedOrder", r.fitted_order ? Json(*r.fitted_order) : Json(nullptr)},
                    {"fitSkipped", !r.fitted_order.has_value()}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "n,error,factors" << (config.timing ? ",wall_seconds" : "") << "\n";
    for (const auto& row : r.rows) {
        os << row.n << "," << format_double(row.error) << "," << row.factor_count;
        if (config.timing) os << "," << format_double(row.wall_seconds);
        os << "\n";
    }
    return os.str();
}

std::string landscape_to_text(const LandscapeResult& r, const ExperimentConfig& config) {
    if (config.format == OutputFormat::json) {
        Json rows = Json::array();
        for (const auto& est : r.estimates) {
            for (const auto& rep : est.reports) rows.push_back(report_to_json(rep));
        }
        return rows.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "n,phase,lambda_re,lambda_im,in_group,best_distance,accepted,trotter,commutator,status\n";
    for (const auto& est : r.estimates) {
        for (const auto& rep : est.reports) {
            double phase = std::arg(rep.lambda) / kTwoPi;
            if (phase < 0.0) phase += 1.0;
            os << rep.n << "," << format_double(phase) << "," << format_double(rep.lambda.real())
               << "," << format_double(rep.lambda.imag()) << "," << csv_bool(rep.in_group) << ","
               << format_double(rep.best_distance) << ","
               << csv_bool(rep.best_distance < est.epsilon) << "," << rep.budget.trotter_steps
               << "," << rep.budget.commutator_steps << "," << rep.status << "\n";
        }
    }
    return os.str();
}

std::string density_to_text(const std::vector<DensityRow>& rows, const ExperimentConfig& config) {
    if (config.format == OutputFormat::json) {
        Json out = Json::array();
        for (const auto& row : rows) {
            out.push_back({{"eps", row.epsilon},
                           {"m", row.m},
                           {"N", row.N},
                           {"maxGap", row.max_gap},
                           {"productDefect", row.product_defect},
                           {"pass", row.pass}});
        }
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "eps,m,N,max_gap,product_defect,pass\n";
    for (const auto& row : rows) {
        os << format_double(row.epsilon) << "," << row.m << "," << row.N << ","
           << format_double(row.max_gap) << "," << format_double(row.product_defect) << ","
           << csv_bool(row.pass) << "\n";
    }
    return os.str();
}

} // namespace posfactor
