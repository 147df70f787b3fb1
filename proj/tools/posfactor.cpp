// posfactor: factorization runs and reproducible experiments.
//
// Exit codes: 0 success, 1 I/O or configuration error, 2 mathematical
// obstruction (det not a positive real, singular target), 3 failed verification.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "posfactor/error.hpp"
#include "posfactor/experiments.hpp"
#include "posfactor/factorlab.hpp"
#include "posfactor/io.hpp"
#include "posfactor/matcore.hpp"
#include "posfactor/obstruction.hpp"

namespace {

using namespace posfactor;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitObstruction = 2;
constexpr int kExitVerify = 3;

// Reference factor count printed by --benchmark; not asserted.
constexpr int kLandmarkFactorCount = 11;

struct Options {
    std::vector<std::size_t> n;
    std::uint64_t seed = ExperimentConfig{}.seed;
    std::vector<double> eps;
    std::string schedule;
    std::size_t max_factors = 100000;
    std::string format = "csv";
    std::string out;
    std::string input;
    std::vector<int> steps;
    std::size_t grid = 0;
    bool verify = false;
    bool perturb = false;
    bool commuting = false;
    bool timing = false;
    bool benchmark = false;
    bool allow_large = false;
};

void add_shared(CLI::App* app, Options& o) {
    app->add_option("--n", o.n, "Matrix dimension(s)")->delimiter(',');
    app->add_option("--seed", o.seed, "RNG seed");
    app->add_option("--eps", o.eps, "Epsilon value(s)")->delimiter(',');
    app->add_option("--schedule", o.schedule, "Schedule as TROTTER,COMMUTATOR");
    app->add_option("--max-factors", o.max_factors, "Factor budget");
    app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", o.out, "Output path (default stdout)");
    app->add_flag("--verify", o.verify, "Re-check every invariant of the result");
    app->add_flag("--perturb", o.perturb, "Replace a singular target by a nearby invertible one");
}

FactorizationSchedule parse_schedule(const std::string& text, std::size_t max_factors) {
    FactorizationSchedule s;
    s.max_factors = max_factors;
    if (text.empty()) return s;
    char comma = 0;
    std::istringstream is(text);
    if (!(is >> s.trotter_steps >> comma >> s.commutator_steps) || comma != ',' || !is.eof()) {
        throw InvalidArgument("--schedule expects T,C (e.g. 16,16)");
    }
    s.validate();
    return s;
}

ExperimentConfig make_config(const Options& o) {
    ExperimentConfig c;
    c.seed = o.seed;
    if (!o.n.empty()) c.dimensions = o.n;
    if (!o.steps.empty()) c.steps = o.steps;
    if (!o.eps.empty()) c.epsilons = o.eps;
    if (!o.schedule.empty()) c.ladder = {parse_schedule(o.schedule, o.max_factors)};
    for (auto& s : c.ladder) s.max_factors = o.max_factors;
    c.grid = o.grid;
    c.commuting = o.commuting;
    c.timing = o.timing;
    c.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (o.allow_large) c.max_dimension = static_cast<std::size_t>(-1);
    return c;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(o.out, text);
    }
}

void print_audit(const FactorizationAudit& a) {
    std::cerr << "verify: " << (a.passed() ? "pass" : "FAIL")
              << " min_eigenvalue=" << format_double(a.min_eigenvalue)
              << " hermitian_defect=" << format_double(a.max_hermitian_defect)
              << " recomputed_error=" << format_double(a.recomputed_error) << "\n";
    for (const auto& f : a.failures) std::cerr << "  " << f << "\n";
}

int run_factor(const Options& o) {
    ComplexMatrix target = matrix_from_json(read_json_file(o.input));
    const FactorizationSchedule schedule = parse_schedule(o.schedule, o.max_factors);
    if (o.perturb) {
        const double eps = o.eps.empty() ? 1e-6 : o.eps.front();
        target = approximate_invertible(target, eps);
    }
    const PositiveFactorization f = matrix_to_positive_factors(target, schedule);
    emit(o, factorization_to_json(f).dump() + "\n");

    std::cerr << "method=" << f.method << " factors=" << f.factors.size()
              << " error=" << format_double(f.error) << "\n";
    if (o.benchmark) {
        std::cerr << "benchmark: " << f.factors.size() << " factors vs landmark "
                  << kLandmarkFactorCount << " (exact factorization count, report only)\n";
    }
    if (o.verify) {
        const FactorizationAudit audit = audit_factorization(f);
        print_audit(audit);
        if (!audit.passed()) return kExitVerify;
    }
    return kExitOk;
}

int run_verify(const Options& o) {
    const PositiveFactorization f = factorization_from_json(read_json_file(o.input));
    const FactorizationAudit audit = audit_factorization(f);
    print_audit(audit);
    std::ostringstream os;
    os << "check,pass\n"
       << "factors_positive," << (audit.factors_positive ? "true" : "false") << "\n"
       << "error_consistent," << (audit.error_consistent ? "true" : "false") << "\n"
       << "determinant_nonnegative," << (audit.determinant_ok ? "true" : "false") << "\n"
       << "trace_identity," << (audit.trace_identity_ok ? "true" : "false") << "\n";
    emit(o, os.str());
    return audit.passed() ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Factor matrices into products of positive definite matrices"};
    app.require_subcommand(1);
    Options o;

    auto* factor = app.add_subcommand("factor", "Factor a target matrix (JSON) into positives");
    add_shared(factor, o);
    factor->add_option("target", o.input, "Target matrix JSON")->required();
    factor->add_flag("--benchmark", o.benchmark, "Report the factor count against the landmark");

    auto* trotter = app.add_subcommand("sweep-trotter", "Convergence of the Trotter product");
    auto* comm = app.add_subcommand("sweep-commutator", "Convergence of the commutator product");
    for (auto* sweep : {trotter, comm}) {
        add_shared(sweep, o);
        sweep->add_option("--steps", o.steps, "Step counts n")->delimiter(',');
        sweep->add_flag("--commuting", o.commuting, "Use commuting inputs");
        sweep->add_flag("--timing", o.timing, "Add a wall-clock column");
    }

    auto* obstruction = app.add_subcommand("obstruction", "Scalar obstruction landscape");
    add_shared(obstruction, o);
    obstruction->add_option("--grid", o.grid, "Number of λ samples on the circle (default 4n)");
    obstruction->add_flag("--allow-large", o.allow_large, "Lift the n <= 4 guard");

    auto* density = app.add_subcommand("density", "ε-density check of the torus correction");
    add_shared(density, o);

    auto* verify = app.add_subcommand("verify", "Re-check a factorization JSON");
    add_shared(verify, o);
    verify->add_option("factorization", o.input, "Factorization JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (factor->parsed()) return run_factor(o);
        if (verify->parsed()) return run_verify(o);

        const ExperimentConfig config = make_config(o);
        if (trotter->parsed() || comm->parsed()) {
            const SweepResult r =
                trotter->parsed() ? run_trotter_sweep(config) : run_commutator_sweep(config);
            emit(o, sweep_to_text(r, config));
            std::cerr << r.kind << " sweep: ";
            if (r.fitted_order) {
                std::cerr << "fitted order " << format_double(*r.fitted_order) << "\n";
            } else {
                std::cerr << "order fit skipped (errors at rounding floor)\n";
            }
        } else if (obstruction->parsed()) {
            if (o.eps.size() == 1) {
                ExperimentConfig c = config;
                c.acceptance_epsilon = o.eps.front();
                emit(o, landscape_to_text(run_obstruction_landscape(c), c));
            } else {
                emit(o, landscape_to_text(run_obstruction_landscape(config), config));
            }
        } else if (density->parsed()) {
            emit(o, density_to_text(run_density_check(config), config));
        }
        return kExitOk;
    } catch (const DeterminantObstruction& e) {
        std::cerr << "obstruction: " << e.what()
                  << "\n(a limit of products of positive matrices has det >= 0)\n";
        return kExitObstruction;
    } catch (const NotInvertible& e) {
        std::cerr << "obstruction: " << e.what() << " (use --perturb)\n";
        return kExitObstruction;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
