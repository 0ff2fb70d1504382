#include "cli.hpp"

#include "fractal_tube/checks.hpp"
#include "fractal_tube/error.hpp"
#include "fractal_tube/oracle.hpp"
#include "fractal_tube/spec_io.hpp"
#include "fractal_tube/tube.hpp"
#include "fractal_tube/zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace fractal_tube::cli {

using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double sig12(double x)
{
    if (!std::isfinite(x)) {
        return x;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

template <class Json>
void round_floats(Json& j)
{
    if (j.is_number_float()) {
        j = sig12(j.template get<double>());
    } else if (j.is_structured()) {
        for (auto& child : j) {
            round_floats(child);
        }
    }
}

std::string csv_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::size_t node_budget()
{
    const char* env = std::getenv("FRACTAL_TUBE_NODE_BUDGET");
    if (env == nullptr || *env == '\0') {
        return kDefaultNodeBudget;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) {
        throw UsageError(std::string("FRACTAL_TUBE_NODE_BUDGET must be a positive integer, got '") + env + "'");
    }
    return static_cast<std::size_t>(v);
}

const char* kind_name(LatticeKind k) { return k == LatticeKind::Lattice ? "lattice" : "non-lattice"; }

ordered_json lattice_json(const LatticeClass& cls)
{
    ordered_json j;
    j["kind"] = kind_name(cls.kind);
    if (cls.lattice()) {
        j["base_r"] = cls.base_r;
        j["multipliers"] = cls.multipliers;
        j["period"] = cls.period;
    }
    return j;
}

// Deepest cloud with at most ~2e6 points.
int cloud_depth(const IfsSystem& system)
{
    int depth = 1;
    double count = std::pow(static_cast<double>(system.size()), 2);
    while (depth < 16 && count * system.size() <= 2e6) {
        count *= system.size();
        ++depth;
    }
    return depth;
}

ordered_json condition_json(const ConditionReport& r)
{
    return {{"tileset", r.tileset},
            {"nontrivial", r.nontrivial},
            {"pearse_winter", r.pearse_winter},
            {"hull_area", r.hull_area},
            {"overlap_area", r.overlap_area},
            {"tile_area", r.tile_area},
            {"max_boundary_gap", r.max_boundary_gap},
            {"gap_threshold", r.gap_threshold},
            {"images_inside_hull", r.images_inside_hull},
            {"depth", r.depth},
            {"notes", r.notes}};
}

void emit_json(ordered_json j, std::ostream& out)
{
    round_floats(j);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string spec;
    double t_max = 30.0;
    int n_max = 10;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 200'000;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out)
{
    const SystemSpec spec = load_system_spec(a.spec);
    const IfsSystem& sys = spec.system;
    const LatticeClass cls = lattice_of(spec);
    const double dim = moran_dimension(sys);
    const DTilde dt = dtilde(sys);

    ordered_json j;
    j["name"] = spec.name;
    j["ambient_dim"] = sys.ambient_dim();
    j["ratios"] = sys.ratios();
    j["D"] = dim;
    j["dtilde"] = {{"value", dt.value}, {"degenerate", dt.degenerate}};
    j["lattice"] = lattice_json(cls);
    if (cls.lattice()) {
        j["p"] = cls.period;
    }
    j["residue_at_D"] = (1.0 / dirichlet_f_prime(sys, cplx(dim, 0.0))).real();
    j["pole_real_part_lower_bound"] = pole_real_part_lower_bound(sys);

    if (!spec.profiles.empty()) {
        ordered_json diag = ordered_json::array();
        for (const GeneratorProfile& p : spec.profiles) {
            const ProfileDiagnostics pd = validate_profile(p);
            diag.push_back({{"continuity", pd.continuity},
                            {"monotone", pd.monotone},
                            {"decay", pd.decay},
                            {"numerator_degree", pd.numerator_degree}});
        }
        j["generators"] = diag;
        if (cls.lattice()) {
            j["average_content"] = average_content(sys, spec.profiles);
            const FourierCoeffs fc = lattice_fourier_coeffs(sys, cls, spec.profiles, a.n_max);
            j["oscillation_amplitude"] = oscillation_amplitude(fc, 1000);
            j["truncation_bound"] = fc.truncation_bound();
            j["fourier_n_max"] = a.n_max;
        } else {
            j["content"] = minkowski_content(sys, spec.profiles, cls);
        }
    }
    if (sys.planar()) {
        if (a.seed) {
            j["condition_report"] = condition_json(condition_report(sys, a.samples, *a.seed));
        } else {
            j["condition_report"] = "skipped: sampling needs --seed";
        }
    }
    emit_json(std::move(j), out);
    return kExitOk;
}

// ---------------------------------------------------------------- poles

struct PolesArgs {
    std::string spec;
    double t_max = 30.0;
    std::optional<double> sigma_min;
    std::optional<double> sigma_max;
};

int cmd_poles(const PolesArgs& a, std::ostream& out)
{
    const SystemSpec spec = load_system_spec(a.spec);
    PoleWindow window = full_strip_window(spec.system, a.t_max);
    if (a.sigma_min) {
        window.sigma_min = *a.sigma_min;
    }
    if (a.sigma_max) {
        window.sigma_max = *a.sigma_max;
    }
    if (!(window.sigma_min < window.sigma_max)) {
        throw UsageError("sigma-min must be below sigma-max");
    }
    const PoleSearchResult res = find_poles(spec.system, window);
    out << "re,im,res_re,res_im,simple\n";
    for (const ComplexDimension& p : res.poles) {
        out << csv_number(p.omega.real()) << ',' << csv_number(p.omega.imag()) << ','
            << csv_number(p.residue.real()) << ',' << csv_number(p.residue.imag()) << ','
            << (p.simple ? "true" : "false") << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- tube

struct TubeArgs {
    std::string spec;
    double eps_min = 1e-4;
    std::optional<double> eps_max;
    int points = 50;
    std::string method = "both";
    std::string out_path;
    double t_max = 50.0;
};

int cmd_tube(const TubeArgs& a, std::ostream& out)
{
    const SystemSpec spec = load_system_spec(a.spec);
    const IfsSystem& sys = spec.system;
    if (spec.profiles.empty()) {
        throw UsageError("tube needs at least one generator in the system description");
    }
    const double eps_max = a.eps_max.value_or(largest_inradius(spec.profiles));
    if (!(a.eps_min > 0.0) || !(a.eps_min < eps_max)) {
        throw UsageError("need 0 < eps-min < eps-max");
    }
    if (a.points < 2) {
        throw UsageError("points must be at least 2");
    }
    const bool want_residue = a.method != "direct";
    const bool want_direct = a.method != "residue";
    const std::size_t budget = node_budget();
    const double dim = moran_dimension(sys);
    const int d = sys.ambient_dim();

    std::vector<ComplexDimension> poles;
    if (want_residue) {
        poles = tube_poles(sys, lattice_of(spec), a.t_max);
    }

    std::ostringstream csv;
    csv << "epsilon";
    if (want_residue) {
        csv << ",V_residue";
    }
    if (want_direct) {
        csv << ",V_direct";
    }
    if (spec.hull) {
        csv << ",V_F";
    }
    csv << ",scaled";
    if (want_residue && want_direct) {
        csv << ",rel_diff";
    }
    csv << '\n';
    for (double eps : log_epsilon_grid(a.eps_min, eps_max, a.points)) {
        double residue = 0.0;
        double direct = 0.0;
        if (want_residue) {
            residue = residue_tube_volume(sys, spec.profiles, poles, eps).value;
        }
        if (want_direct) {
            direct = tiling_volume_direct(sys, spec.profiles, eps, budget);
        }
        const double tiling = want_direct ? direct : residue;
        csv << csv_number(eps);
        if (want_residue) {
            csv << ',' << csv_number(residue);
        }
        if (want_direct) {
            csv << ',' << csv_number(direct);
        }
        if (spec.hull) {
            csv << ',' << csv_number(tiling + spec.hull->excess(eps));
        }
        csv << ',' << csv_number(std::pow(eps, dim - d) * tiling);
        if (want_residue && want_direct) {
            csv << ',' << csv_number(std::abs(residue - direct) / std::abs(direct));
        }
        csv << '\n';
    }
    if (a.out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(a.out_path);
        if (!file) {
            throw UsageError("cannot write " + a.out_path);
        }
        file << csv.str();
    }
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string spec;
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = 0;
    double t_avg = 1e4;
    double t_max = 50.0;
    int k_max = 16;
};

template <class F>
ordered_json guarded(F&& body, bool& failed)
{
    try {
        return body();
    } catch (const Error& e) {
        failed = true;
        return {{"error", e.what()}};
    }
}

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    const SystemSpec spec = load_system_spec(a.spec);
    const IfsSystem& sys = spec.system;
    if (spec.profiles.empty()) {
        throw UsageError("verify needs at least one generator in the system description");
    }
    const LatticeClass cls = lattice_of(spec);
    const std::size_t budget = node_budget();
    const double dim = moran_dimension(sys);
    const int d = sys.ambient_dim();
    const double g = largest_inradius(spec.profiles);
    bool failed = false;

    ordered_json j;
    j["name"] = spec.name;
    j["D"] = dim;
    j["lattice"] = lattice_json(cls);

    j["quadrature"] = guarded(
        [&] {
            double worst = 0.0;
            for (const GeneratorProfile& p : spec.profiles) {
                for (double s : {d - 0.9, d - 0.5, dim}) {
                    if (s > d - 1 && s < d) {
                        const double exact = generator_mellin(p, s).real();
                        worst = std::max(worst, std::abs(mellin_quadrature(p, s) - exact) / std::abs(exact));
                    }
                }
            }
            return ordered_json{{"max_rel_error", worst}};
        },
        failed);

    j["residue_vs_direct"] = guarded(
        [&] {
            const std::vector<ComplexDimension> poles = tube_poles(sys, cls, a.t_max);
            const GridComparison c = compare_residue_direct(sys, spec.profiles, poles, 1e-4, g, 50, budget);
            return ordered_json{{"t_max", a.t_max},
                                {"poles", poles.size()},
                                {"points", c.points},
                                {"max_rel_error", c.max_rel_error},
                                {"worst_epsilon", c.worst_epsilon}};
        },
        failed);

    j["average_content"] = guarded(
        [&] {
            const double closed = average_content(sys, spec.profiles);
            const double numeric = average_content_numeric(sys, spec.profiles, a.t_avg, 2000, budget);
            return ordered_json{{"closed_form", closed},
                                {"numeric", numeric},
                                {"T", a.t_avg},
                                {"rel_error", std::abs(numeric - closed) / closed}};
        },
        failed);

    if (cls.lattice()) {
        j["oscillation"] = guarded(
            [&] {
                const FourierCoeffs fc = lattice_fourier_coeffs(sys, cls, spec.profiles, 10);
                const double amp = oscillation_amplitude(fc, 1000);
                const double empirical = empirical_lattice_amplitude(sys, spec.profiles, cls, 30, 1000, budget);
                return ordered_json{{"amplitude", amp},
                                    {"truncation_bound", fc.truncation_bound()},
                                    {"empirical", empirical},
                                    {"rel_error", std::abs(empirical - amp) / amp}};
            },
            failed);
    } else {
        j["scaling_limit"] = guarded(
            [&] {
                const double content = minkowski_content(sys, spec.profiles, cls);
                std::vector<int> ks;
                for (int k = std::max(1, a.k_max - 4); k <= a.k_max; ++k) {
                    ks.push_back(k);
                }
                const std::vector<double> seq = scaled_direct_sequence(sys, spec.profiles, ks, budget);
                const auto [lo, hi] = std::minmax_element(seq.begin(), seq.end());
                return ordered_json{{"content", content},
                                    {"k", ks},
                                    {"scaled", seq},
                                    {"spread", (*hi - *lo) / content},
                                    {"offset", std::abs(seq.back() - content) / content}};
            },
            failed);
    }

    if (sys.planar() && spec.hull) {
        const int depth = cloud_depth(sys);
        ordered_json pw = ordered_json::array();
        for (double eps : {0.05, 0.1}) {
            pw.push_back(guarded(
                [&] {
                    const PearseWinterCheck c =
                        pearse_winter_residual(sys, spec.profiles, *spec.hull, eps, {depth, a.mc_samples, a.seed});
                    return ordered_json{{"epsilon", eps},
                                        {"mc_mean", c.mc.mean},
                                        {"mc_std_error", c.mc.std_error},
                                        {"predicted", c.predicted},
                                        {"residual_sigmas", c.residual},
                                        {"samples", c.mc.samples},
                                        {"seed", c.mc.seed},
                                        {"depth", depth}};
                },
                failed));
        }
        j["pearse_winter"] = pw;
    }
    emit_json(std::move(j), out);
    return failed ? kExitNumerical : kExitOk;
}

// ---------------------------------------------------------------- example

struct ExampleArgs {
    std::string name;
    std::vector<double> angles;
    std::string out_path;
};

int cmd_example(const ExampleArgs& a, std::ostream& out)
{
    nlohmann::json doc;
    if (a.name == "cantor") {
        doc = cantor_spec();
    } else if (a.name == "gasket") {
        doc = gasket_spec();
    } else if (a.name == "string") {
        doc = string_spec();
    } else {
        const std::vector<double> angles = a.angles.empty() ? std::vector<double>{50, 60, 70} : a.angles;
        if (angles.size() != 3) {
            throw UsageError("--angles takes three values A,B,C");
        }
        doc = orthic_spec(angles[0], angles[1], angles[2]);
    }
    round_floats(doc);
    if (a.out_path.empty()) {
        out << doc.dump(2) << '\n';
    } else {
        std::ofstream file(a.out_path);
        if (!file) {
            throw UsageError("cannot write " + a.out_path);
        }
        file << doc.dump(2) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Complex dimensions and tube volumes of self-similar tilings", "fractal-tube"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Dimension, lattice class, contents and condition report");
    analyze_cmd->add_option("spec", analyze.spec, "System description (JSON)")->required();
    analyze_cmd->add_option("--fourier-n", analyze.n_max, "Fourier terms for the lattice amplitude")
        ->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--seed", analyze.seed, "Seed for the sampled condition report");
    analyze_cmd->add_option("--samples", analyze.samples, "Samples for the condition report")
        ->check(CLI::PositiveNumber);

    PolesArgs poles;
    auto* poles_cmd = app.add_subcommand("poles", "Complex dimensions as CSV");
    poles_cmd->add_option("spec", poles.spec, "System description (JSON)")->required();
    poles_cmd->add_option("--tmax", poles.t_max, "Largest |Im|")->check(CLI::NonNegativeNumber);
    poles_cmd->add_option("--sigma-min", poles.sigma_min, "Left edge of the search window");
    poles_cmd->add_option("--sigma-max", poles.sigma_max, "Right edge of the search window");

    TubeArgs tube;
    auto* tube_cmd = app.add_subcommand("tube", "Tube volume curve as CSV");
    tube_cmd->add_option("spec", tube.spec, "System description (JSON)")->required();
    tube_cmd->add_option("--eps-min", tube.eps_min, "Smallest epsilon");
    tube_cmd->add_option("--eps-max", tube.eps_max, "Largest epsilon (default: largest inradius)");
    tube_cmd->add_option("--points", tube.points, "Log-spaced grid points");
    tube_cmd->add_option("--method", tube.method, "residue, direct or both")
        ->check(CLI::IsMember({"residue", "direct", "both"}));
    tube_cmd->add_option("--out", tube.out_path, "Output CSV file (default: stdout)");
    tube_cmd->add_option("--tmax", tube.t_max, "Pole truncation |Im| for the residue sum")
        ->check(CLI::PositiveNumber);

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Residue formulas against the brute-force oracles (JSON)");
    verify_cmd->add_option("spec", verify.spec, "System description (JSON)")->required();
    verify_cmd->add_option("--seed", verify.seed, "Monte Carlo seed")->required();
    verify_cmd->add_option("--mc-samples", verify.mc_samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--T", verify.t_avg, "Upper limit 1/eps_min of the logarithmic average");
    verify_cmd->add_option("--tmax", verify.t_max, "Pole truncation |Im|")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--kmax", verify.k_max, "Deepest eps = g 2^-k of the scaling sequence")
        ->check(CLI::PositiveNumber);

    ExampleArgs example;
    auto* example_cmd = app.add_subcommand("example", "Write a built-in system description");
    example_cmd->add_option("name", example.name, "cantor, gasket, string or orthic")
        ->required()
        ->check(CLI::IsMember({"cantor", "gasket", "string", "orthic"}));
    example_cmd->add_option("--angles", example.angles, "Orthic triangle angles in degrees: A,B,C")
        ->delimiter(',');
    example_cmd->add_option("--out", example.out_path, "Output file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "UsageError: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*analyze_cmd) {
            return cmd_analyze(analyze, out);
        }
        if (*poles_cmd) {
            return cmd_poles(poles, out);
        }
        if (*tube_cmd) {
            return cmd_tube(tube, out);
        }
        if (*verify_cmd) {
            return cmd_verify(verify, out);
        }
        return cmd_example(example, out);
    } catch (const UsageError& e) {
        err << "UsageError: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << e.what() << '\n';
        const bool usage = e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidArgument;
        return usage ? kExitUsage : kExitNumerical;
    }
}

}  // namespace fractal_tube::cli
