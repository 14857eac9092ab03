// Command-line front end: coefficients, densities, definiteness audits,
// counterexample certificates, Brownian field simulation and Haar samples.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levy/levy.hpp"

namespace {

using namespace levy;

enum class Command { Coeffs, Densities, Check, Witness, Simulate, Haar };

struct RunConfig {
    Command command = Command::Coeffs;
    std::string group;  // per-command default
    int n = 0;
    int lmax = 50;
    int points = -1;  // -1: per-command default
    int trials = 10;
    int realizations = 10000;
    std::int64_t samples = -1;
    std::string seed = "0";
    std::uint64_t stream = 0;
    double tol = 1e-10;
    std::string format;  // per-command default
    std::string out;
    int threads = 0;
    bool no_meta = false;
    int bins = 50;
    double jitter = 1e-10;
    std::string values_out;
    std::string values_format = "csv";

    std::uint64_t seed_value = 0;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_points(Command c) {
    switch (c) {
        case Command::Check: return 100;
        case Command::Witness: return 100;
        case Command::Simulate: return 50;
        case Command::Haar: return 10;
        default: return 0;
    }
}

GroupSpec group_spec(const RunConfig& cfg) {
    if (cfg.group == "su2") return GroupSpec::su2();
    if (cfg.group == "so3") return GroupSpec::so3();
    return GroupSpec::son(cfg.n);
}

void validate(RunConfig& cfg) {
    if (cfg.group.empty()) cfg.group = cfg.command == Command::Simulate ? "su2" : "so3";
    if (cfg.format.empty()) cfg.format = cfg.command == Command::Witness ? "json" : "csv";
    if (cfg.group == "son") {
        if (cfg.n < 2) throw UsageError("--n: --group son needs --n >= 2");
    } else if (cfg.n != 0) {
        throw UsageError("--n: only valid together with --group son");
    }
    if (cfg.points < 0) cfg.points = default_points(cfg.command);
    if (cfg.lmax < 0) throw UsageError("--lmax: must be non-negative");
    if (!(cfg.tol > 0.0)) throw UsageError("--tol: must be positive");
    if (cfg.trials < 1) throw UsageError("--trials: must be at least 1");
    if (cfg.threads < 0) throw UsageError("--threads: must be non-negative");
    if (cfg.threads == 0) {
        cfg.threads = 1;
        if (const char* env = std::getenv("LEVY_GROUPS_THREADS")) {
            try {
                cfg.threads = std::max(1, std::stoi(env));
            } catch (const std::exception&) {
                throw UsageError("--threads: LEVY_GROUPS_THREADS is not an integer");
            }
        }
    }
    if (cfg.seed == "random") {
        cfg.seed_value = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    } else {
        try {
            std::size_t used = 0;
            cfg.seed_value = std::stoull(cfg.seed, &used);
            if (used != cfg.seed.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError("--seed: expected an unsigned integer or 'random'");
        }
    }
    switch (cfg.command) {
        case Command::Coeffs:
            if (cfg.group == "son") throw UsageError("--group: coeffs supports su2 and so3");
            if (cfg.samples < 0) cfg.samples = 1000000;
            if (cfg.samples != 0 && cfg.samples < 1000)
                throw UsageError("--samples: Monte Carlo needs 0 (off) or at least 1000");
            break;
        case Command::Densities:
            if (cfg.group == "son") throw UsageError("--group: densities supports su2 and so3");
            if (cfg.samples < 0) cfg.samples = 100000;
            if (cfg.samples < 1) throw UsageError("--samples: must be positive");
            if (cfg.bins < 1) throw UsageError("--bins: must be positive");
            break;
        case Command::Check:
            if (cfg.points < 2) throw UsageError("--points: check needs at least 2 points");
            break;
        case Command::Witness:
            if (cfg.points < 4) throw UsageError("--points: witness needs at least 4 points");
            if (cfg.group == "son" && cfg.n < 3) throw UsageError("--n: witness on SO(n) needs n >= 3");
            if (cfg.format != "json") throw UsageError("--format: witness certificates are json only");
            break;
        case Command::Simulate:
            if (cfg.group == "son") throw UsageError("--group: simulate supports su2 (and so3 as a diagnostic)");
            if (cfg.points < 1) throw UsageError("--points: must be positive");
            if (cfg.realizations < 100) throw UsageError("--realizations: need at least 100");
            if (!(cfg.jitter > 0.0)) throw UsageError("--jitter: must be positive");
            break;
        case Command::Haar:
            if (cfg.points < 1) throw UsageError("--points: must be positive");
            break;
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json header(const RunConfig& cfg, const char* kind) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    j["group"] = cfg.group;
    j["n"] = group_spec(cfg).n;
    j["seed"] = cfg.seed_value;
    j["stream"] = cfg.stream;
    return j;
}

void add_meta(const RunConfig& cfg, Json& j) {
    if (!cfg.no_meta) {
        j["meta"] = {{"tool_version", kToolVersion}, {"generated_at", utc_timestamp()}};
    }
}

GroupTag tag_of(const RunConfig& cfg) { return cfg.group == "su2" ? GroupTag::SU2 : GroupTag::SO3; }

// ---------------------------------------------------------------------------

int run_coeffs(const RunConfig& cfg, std::ostream& os) {
    CoefficientOptions opt;
    opt.lmax = cfg.lmax;
    opt.tol = cfg.tol;
    opt.mc_samples = cfg.samples;
    opt.chunks = cfg.threads;
    const auto table = coefficient_table(tag_of(cfg), opt, RngStream(cfg.seed_value, cfg.stream));
    if (cfg.format == "csv") {
        os << "l,closed,quadrature,monte_carlo,mc_stderr\n";
        for (int l = 0; l <= cfg.lmax; ++l) {
            os << l << ',' << format_double(table.find(l, CoefficientMethod::Closed)->alpha) << ','
               << format_double(table.find(l, CoefficientMethod::Quadrature)->alpha) << ',';
            if (const auto mc = table.find(l, CoefficientMethod::MonteCarlo)) {
                os << format_double(mc->alpha) << ',' << format_double(*mc->std_error);
            } else {
                os << ',';
            }
            os << '\n';
        }
        return 0;
    }
    Json j = header(cfg, "coefficient_table");
    j["lmax"] = cfg.lmax;
    j["samples"] = cfg.samples;
    j["tol"] = cfg.tol;
    Json rows = Json::array();
    for (const auto& e : table.entries) {
        Json r;
        r["l"] = e.l;
        r["method"] = std::string(to_string(e.method));
        r["alpha"] = e.alpha;
        if (e.std_error) r["stderr"] = *e.std_error;
        rows.push_back(std::move(r));
    }
    j["entries"] = std::move(rows);
    add_meta(cfg, j);
    os << canonical_json(j) << '\n';
    return 0;
}

struct Curve {
    std::string quantity;
    double lo, hi;
    std::vector<double> sample;
    std::function<double(double)> density;
    std::function<double(double)> cdf;
};

int run_densities(const RunConfig& cfg, std::ostream& os) {
    constexpr double pi = std::numbers::pi;
    RngStream rng(cfg.seed_value, cfg.stream);
    std::vector<Curve> curves;
    if (cfg.group == "su2") {
        Curve c{"angle", 0.0, pi, {}, [](double t) { return angle_density(GroupTag::SU2, t); },
                [](double t) { return angle_cdf(GroupTag::SU2, t); }};
        for (std::int64_t i = 0; i < cfg.samples; ++i) c.sample.push_back(angle_su2(haar_su2(rng)));
        curves.push_back(std::move(c));
    } else {
        Curve a{"angle", 0.0, pi, {}, [](double t) { return angle_density(GroupTag::SO3, t); },
                [](double t) { return angle_cdf(GroupTag::SO3, t); }};
        Curve t{"trace", -1.0, 3.0, {}, trace_density_so3, trace_cdf_so3};
        for (std::int64_t i = 0; i < cfg.samples; ++i) {
            const auto g = haar_son(3, rng);
            a.sample.push_back(rotation_angle_so3(g));
            t.sample.push_back(g.matrix().trace());
        }
        curves.push_back(std::move(a));
        curves.push_back(std::move(t));
    }
    Json j = header(cfg, "densities");
    j["samples"] = cfg.samples;
    j["bins"] = cfg.bins;
    Json jc = Json::array();
    if (cfg.format == "csv") os << "quantity,x_lo,x_hi,x_mid,density,empirical\n";
    for (const auto& c : curves) {
        const auto hist = histogram_density(c.sample, c.lo, c.hi, cfg.bins);
        const auto ks = ks_test(c.sample, c.cdf);
        const double w = (c.hi - c.lo) / cfg.bins;
        Json bins = Json::array();
        for (int b = 0; b < cfg.bins; ++b) {
            const double lo = c.lo + b * w, hi = lo + w, mid = lo + 0.5 * w;
            // bin-averaged model density, comparable with the histogram
            const double model = (c.cdf(hi) - c.cdf(lo)) / w;
            if (cfg.format == "csv") {
                os << c.quantity << ',' << format_double(lo) << ',' << format_double(hi) << ','
                   << format_double(mid) << ',' << format_double(model) << ','
                   << format_double(hist[static_cast<std::size_t>(b)]) << '\n';
            } else {
                bins.push_back({{"x_lo", lo}, {"x_hi", hi}, {"x_mid", mid}, {"density", model},
                                {"density_at_mid", c.density(mid)},
                                {"empirical", hist[static_cast<std::size_t>(b)]}});
            }
        }
        jc.push_back({{"quantity", c.quantity}, {"ks_statistic", ks.statistic},
                      {"ks_p_value", ks.p_value}, {"bins", std::move(bins)}});
    }
    if (cfg.format == "json") {
        j["curves"] = std::move(jc);
        add_meta(cfg, j);
        os << canonical_json(j) << '\n';
    }
    return 0;
}

template <class T, class Metric, class Sampler>
int emit_audit(const RunConfig& cfg, std::ostream& os, const Metric& d, const Sampler& sample,
               const T& x0) {
    RngStream rng(cfg.seed_value, cfg.stream);
    std::vector<T> pts;
    for (int i = 0; i < cfg.points; ++i) pts.push_back(sample(rng));
    const auto audit = gram_audit<T>(pts, d, x0);
    const bool psd = audit.kernel_psd();
    const bool rnd = audit.distance_restricted_nd();
    const bool agree = lemma_equivalence_check(audit);
    if (cfg.format == "csv") {
        os << "group,n,points,max_centered_eig,min_kernel_eig,kernel_psd,distance_restricted_nd,"
              "lemma_equivalence\n"
           << cfg.group << ',' << group_spec(cfg).n << ',' << audit.points.size() << ','
           << format_double(audit.max_centered_eig) << ',' << format_double(audit.min_kernel_eig)
           << ',' << psd << ',' << rnd << ',' << agree << '\n';
    } else {
        Json j = header(cfg, "gram_audit");
        j["points"] = audit.points.size();
        j["base"] = "identity";
        j["max_centered_eig"] = audit.max_centered_eig;
        j["min_kernel_eig"] = audit.min_kernel_eig;
        j["kernel_psd"] = psd;
        j["distance_restricted_nd"] = rnd;
        j["lemma_equivalence"] = agree;
        add_meta(cfg, j);
        os << canonical_json(j) << '\n';
    }
    if (!psd || !rnd) {
        std::cerr << "levy_groups: Brownian kernel is not positive definite on this sample "
                     "(max_centered_eig = " << format_double(audit.max_centered_eig) << ")\n";
        return 1;
    }
    return 0;
}

int run_check(const RunConfig& cfg, std::ostream& os) {
    if (cfg.group == "su2") {
        return emit_audit<SU2Element>(
            cfg, os, [](const SU2Element& a, const SU2Element& b) { return dist_su2(a, b); },
            [](RngStream& r) { return haar_su2(r); }, SU2Element::identity());
    }
    const int n = group_spec(cfg).n;
    return emit_audit<SOnElement>(
        cfg, os, [](const SOnElement& a, const SOnElement& b) { return dist_son(a, b); },
        [n](RngStream& r) { return haar_son(n, r); }, SOnElement::identity(n));
}

int run_witness(const RunConfig& cfg, std::ostream& os) {
    try {
        const auto cert = find_witness(group_spec(cfg), cfg.points, cfg.trials,
                                       RngStream(cfg.seed_value, cfg.stream));
        Json j = certificate_to_json(cert);
        add_meta(cfg, j);
        os << canonical_json(j) << '\n';
        return 0;
    } catch (const WitnessNotFound& e) {
        std::cerr << "levy_groups: " << e.what() << '\n';
        return 1;
    }
}

template <class T>
int emit_field(const RunConfig& cfg, std::ostream& os, FieldSample<T> fs) {
    sample_field(fs, cfg.realizations, RngStream(cfg.seed_value, cfg.stream).split(1));
    const auto vg = empirical_variogram(fs);
    if (cfg.format == "csv") {
        write_variogram_csv(os, vg);
    } else {
        Json j = header(cfg, "variogram");
        j["points"] = fs.size();
        j["realizations"] = cfg.realizations;
        j["jitter"] = fs.jitter_used;
        j["coverage_3sigma"] = variogram_coverage(vg);
        Json rows = Json::array();
        for (const auto& e : vg) {
            rows.push_back({{"pair_i", e.i}, {"pair_j", e.j}, {"distance", e.distance},
                            {"estimate", e.estimate}, {"stderr", e.std_error}});
        }
        j["entries"] = std::move(rows);
        add_meta(cfg, j);
        os << canonical_json(j) << '\n';
    }
    if (!cfg.values_out.empty()) {
        std::ofstream vf(cfg.values_out, std::ios::binary);
        if (!vf) throw std::runtime_error("cannot open " + cfg.values_out);
        if (cfg.values_format == "bin") {
            write_field_binary(vf, fs.values);
        } else {
            write_field_csv(vf, fs.values);
        }
    }
    return 0;
}

int run_simulate(const RunConfig& cfg, std::ostream& os) {
    RngStream rng = RngStream(cfg.seed_value, cfg.stream).split(0);
    try {
        if (cfg.group == "su2") {
            std::vector<SU2Element> pts;
            for (int i = 1; i < cfg.points; ++i) pts.push_back(haar_su2(rng));
            return emit_field(cfg, os, build_field_su2(pts, SU2Element::identity(), cfg.jitter));
        }
        std::vector<SOnElement> pts;
        for (int i = 1; i < cfg.points; ++i) pts.push_back(haar_son(3, rng));
        return emit_field(
            cfg, os,
            build_field<SOnElement>(pts, SOnElement::identity(3),
                                    [](const SOnElement& a, const SOnElement& b) { return dist_son(a, b); },
                                    cfg.jitter));
    } catch (const KernelNotPsd& e) {
        std::cerr << "levy_groups: " << e.what() << '\n';
        return 1;
    }
}

int run_haar(const RunConfig& cfg, std::ostream& os) {
    RngStream rng(cfg.seed_value, cfg.stream);
    std::vector<std::vector<double>> rows;
    const int n = group_spec(cfg).n;
    for (int i = 0; i < cfg.points; ++i) {
        if (cfg.group == "su2") {
            const auto g = haar_su2(rng);
            rows.push_back({g.a1, g.a2, g.b1, g.b2});
        } else {
            const auto g = haar_son(n, rng);
            std::vector<double> r;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) r.push_back(g(a, b));
            rows.push_back(std::move(r));
        }
    }
    if (cfg.format == "csv") {
        os << "index";
        if (cfg.group == "su2") {
            os << ",a1,a2,b1,b2";
        } else {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) os << ",g" << a << b;
        }
        os << '\n';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << i;
            for (double v : rows[i]) os << ',' << format_double(v);
            os << '\n';
        }
        return 0;
    }
    Json j = header(cfg, "haar_samples");
    j["layout"] = cfg.group == "su2" ? "a1,a2,b1,b2" : "row-major";
    j["samples"] = rows;
    add_meta(cfg, j);
    os << canonical_json(j) << '\n';
    return 0;
}

int run(const RunConfig& cfg) {
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out, std::ios::binary);
        if (!file) {
            std::cerr << "levy_groups: --out: cannot open " << cfg.out << '\n';
            return 2;
        }
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    switch (cfg.command) {
        case Command::Coeffs: return run_coeffs(cfg, os);
        case Command::Densities: return run_densities(cfg, os);
        case Command::Check: return run_check(cfg, os);
        case Command::Witness: return run_witness(cfg, os);
        case Command::Simulate: return run_simulate(cfg, os);
        case Command::Haar: return run_haar(cfg, os);
    }
    return 2;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--group", cfg.group, "Group: su2, so3 or son (default so3; su2 for simulate)")
        ->check(CLI::IsMember({"su2", "so3", "son"}));
    sub->add_option("--n", cfg.n, "Matrix size for --group son");
    sub->add_option("--seed", cfg.seed, "Seed (unsigned integer, or 'random')");
    sub->add_option("--stream", cfg.stream, "Stream id");
    sub->add_option("--format", cfg.format, "Output format (default csv; json for witness)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "Output path (default: standard output)");
    sub->add_option("--threads", cfg.threads, "Stream-splitting width (env LEVY_GROUPS_THREADS)");
    sub->add_flag("--no-meta", cfg.no_meta, "Omit volatile metadata");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brownian kernels on compact groups: harmonic coefficients, definiteness audits, "
                 "witnesses and field simulation"};
    app.set_version_flag("--version", std::string(levy::kToolVersion));
    app.require_subcommand(1);
    RunConfig cfg;

    auto* coeffs = app.add_subcommand("coeffs", "Character coefficients of d(., e) by three methods");
    add_common(coeffs, cfg);
    coeffs->add_option("--lmax", cfg.lmax, "Largest degree");
    coeffs->add_option("--tol", cfg.tol, "Quadrature tolerance");
    coeffs->add_option("--samples", cfg.samples, "Monte Carlo pairs per degree (0 disables)");

    auto* dens = app.add_subcommand("densities", "Angle/trace densities against Haar histograms");
    add_common(dens, cfg);
    dens->add_option("--samples", cfg.samples, "Number of Haar samples");
    dens->add_option("--bins", cfg.bins, "Histogram bins");

    auto* check = app.add_subcommand("check", "Definiteness audit of the Brownian kernel");
    add_common(check, cfg);
    check->add_option("--points", cfg.points, "Number of Haar points");

    auto* witness = app.add_subcommand("witness", "Certificate that d is not negative definite");
    add_common(witness, cfg);
    witness->add_option("--points", cfg.points, "Points per trial");
    witness->add_option("--trials", cfg.trials, "Independent trials");

    auto* sim = app.add_subcommand("simulate", "Brownian field on SU(2); emits the variogram");
    add_common(sim, cfg);
    sim->add_option("--points", cfg.points, "Number of points including the base point");
    sim->add_option("--realizations", cfg.realizations, "Number of realizations");
    sim->add_option("--jitter", cfg.jitter, "Initial relative Cholesky jitter");
    sim->add_option("--values-out", cfg.values_out, "Also write field values to this path");
    sim->add_option("--values-format", cfg.values_format, "Field values format")
        ->check(CLI::IsMember({"csv", "bin"}));

    auto* haar = app.add_subcommand("haar", "Raw Haar samples");
    add_common(haar, cfg);
    haar->add_option("--points", cfg.points, "Number of samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::pair<CLI::App*, Command> table[] = {
        {coeffs, Command::Coeffs}, {dens, Command::Densities}, {check, Command::Check},
        {witness, Command::Witness}, {sim, Command::Simulate}, {haar, Command::Haar}};
    for (const auto& [sub, cmd] : table) {
        if (sub->parsed()) cfg.command = cmd;
    }
    try {
        validate(cfg);
        return run(cfg);
    } catch (const UsageError& e) {
        std::cerr << "levy_groups: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "levy_groups: error: " << e.what() << '\n';
        return 1;
    }
}
