// phasexform: run verification suites, transform field files, emit kernels.
//
// Exit codes: 0 success / all cases pass, 1 verification failure,
// 2 usage, config or input errors.

#include "verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace phasexform;
using pxcli::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// "min,max,n;min,max,n" -> grid (p axis first).
PhaseGrid parse_grid_spec(const std::string& spec)
{
    auto bad = [&](const std::string& why) {
        return std::invalid_argument("grid spec '" + spec + "': " + why);
    };
    const auto semi = spec.find(';');
    if (semi == std::string::npos || spec.find(';', semi + 1) != std::string::npos)
        throw bad("expected two axes separated by ';'");
    auto axis = [&](std::string part, const char* which) {
        double v[3];
        for (int i = 0; i < 3; ++i) {
            const auto comma = part.find(',');
            if ((i < 2) != (comma != std::string::npos)) throw bad(std::string(which) + " axis needs min,max,n");
            const std::string tok = part.substr(0, comma);
            std::size_t used = 0;
            try {
                v[i] = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw bad(std::string(which) + " axis: invalid number '" + tok + "'");
            }
            if (used != tok.size()) throw bad(std::string(which) + " axis: invalid number '" + tok + "'");
            part = i < 2 ? part.substr(comma + 1) : "";
        }
        if (v[2] != std::floor(v[2]) || v[2] < 2) throw bad(std::string(which) + " axis: n must be an integer >= 2");
        try {
            return Axis(v[0], v[1], static_cast<std::size_t>(v[2]));
        } catch (const std::exception& e) {
            throw bad(std::string(which) + " axis: " + e.what());
        }
    };
    return {axis(spec.substr(0, semi), "first"), axis(spec.substr(semi + 1), "second")};
}

void write_output(const std::string& path, const SampledField& f)
{
    save_field(path, f);
    std::cout << "wrote " << path << " (" << f.grid().p.size() << "x" << f.grid().q.size() << ")\n";
}

void print_report(const pxcli::Report& r)
{
    for (const auto& c : r.cases)
        std::cout << (c.pass ? "PASS " : "FAIL ") << r.suite << " | " << c.name << " [" << c.anchor
                  << "] residual=" << std::scientific << std::setprecision(3) << c.residual
                  << " tol=" << c.tolerance << std::defaultfloat << " (" << std::fixed << std::setprecision(1)
                  << c.runtime_ms << " ms)" << std::defaultfloat << '\n';
}

int cmd_verify(const std::string& suite, const std::string& config_file, const std::vector<double>& alphas,
               const std::vector<double>& epsilons, const std::string& out_dir,
               const std::vector<std::string>& tol_overrides)
{
    pxcli::RunConfig cfg;
    try {
        if (!pxcli::known_suite(suite)) throw pxcli::ConfigError("suite", "unknown suite '" + suite + "'");
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw pxcli::ConfigError("--config", "cannot open '" + config_file + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw pxcli::ConfigError("--config", std::string("invalid JSON: ") + e.what());
            }
            pxcli::apply_json(cfg, j);
        }
        if (!alphas.empty()) cfg.chirplet_alphas = cfg.kernel_alphas = alphas;
        if (!epsilons.empty()) cfg.epsilons = epsilons;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        for (const auto& kv : tol_overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw pxcli::ConfigError("--tol", "expected key=value, got '" + kv + "'");
            const std::string key = kv.substr(0, eq);
            if (!pxcli::default_tolerances().contains(key))
                throw pxcli::ConfigError("tolerances." + key, "unknown tolerance key");
            try {
                std::size_t used = 0;
                cfg.tolerances[key] = std::stod(kv.substr(eq + 1), &used);
                if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
            } catch (const std::exception&) {
                throw pxcli::ConfigError("tolerances." + key, "invalid number '" + kv.substr(eq + 1) + "'");
            }
        }
        pxcli::validate(cfg);
    } catch (const pxcli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::vector<pxcli::Report> reports;
    try {
        for (const auto& [name, fn] : pxcli::suites())
            if (suite == "all" || suite == name) reports.push_back(fn(cfg));
    } catch (const std::exception& e) {
        std::cerr << "error while running suite: " << e.what() << '\n';
        return kExitFail;
    }

    bool ok = true;
    json doc;
    if (suite == "all") {
        json cases = json::array(), summary = json::array();
        for (const auto& r : reports) {
            for (const auto& c : r.cases) {
                auto j = pxcli::to_json(c);
                j["suite"] = r.suite;
                cases.push_back(j);
            }
            std::vector<std::string> anchors;
            for (const auto& c : r.cases)
                if (std::find(anchors.begin(), anchors.end(), c.anchor) == anchors.end()) anchors.push_back(c.anchor);
            summary.push_back({{"suite", r.suite}, {"anchors", anchors}, {"pass", r.overall_pass()}});
            ok = ok && r.overall_pass();
        }
        doc = {{"suite", "all"},
               {"suites", summary},
               {"cases", cases},
               {"overall_pass", ok},
               {"config_echo", pxcli::to_json(cfg)}};
    } else {
        ok = reports.front().overall_pass();
        doc = pxcli::to_json(reports.front(), cfg);
    }

    for (const auto& r : reports) print_report(r);
    std::cout << (ok ? "OVERALL PASS" : "OVERALL FAIL") << " (" << suite << ")\n";

    if (!cfg.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        const auto path = std::filesystem::path(cfg.out_dir) / ("report-" + suite + ".json");
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot write report to " << path << '\n';
            return kExitUsage;
        }
        out << doc.dump(2) << '\n';
        std::cout << "report: " << path.string() << '\n';
    }
    return ok ? 0 : kExitFail;
}

int cmd_transform(const std::string& in_path, const std::string& direction, const std::string& path,
                  const std::string& grid_spec, const std::string& out_path)
{
    SampledField h = [&] {
        try {
            return load_field(in_path);
        } catch (const ParseError& e) {
            throw std::invalid_argument(in_path + ": parse error at " + e.what());
        }
    }();
    const PhaseGrid out = parse_grid_spec(grid_spec);
    const Direction dir = direction == "forward" ? Direction::forward : Direction::inverse;

    auto timed = [&](Path p) {
        const auto t0 = std::chrono::steady_clock::now();
        auto f = transform(h, out, dir, p);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "wall time " << to_string(p) << ": " << std::fixed << std::setprecision(2) << ms << " ms\n"
                  << std::defaultfloat;
        return f;
    };
    if (path == "both") {
        const auto fast = timed(Path::fast);
        const auto direct = timed(Path::direct);
        std::cout << "max |fast - direct| = " << std::scientific << std::setprecision(3)
                  << max_abs_diff(fast, direct) << std::defaultfloat << '\n';
        write_output(out_path, fast);
    } else {
        write_output(out_path, timed(path == "direct" ? Path::direct : Path::fast));
    }
    return 0;
}

int cmd_kernel(double alpha, const std::string& grid_spec, const std::string& method, const std::string& out_path,
               int terms, double damping)
{
    if (!(std::abs(std::sin(alpha)) >= kSingularityGuard)) {
        std::ostringstream msg;
        msg << "kernel: alpha = " << alpha << " rejected, |sin(alpha)| = " << std::abs(std::sin(alpha)) << " < "
            << kSingularityGuard << " (kernel singular near multiples of pi)";
        throw std::domain_error(msg.str());
    }
    const PhaseGrid grid = parse_grid_spec(grid_spec);
    const cplx angle{alpha, -damping};
    const auto closed = sample_field([&](double x, double y) { return frft_kernel(angle, x, y); }, grid);
    if (method == "closed") {
        write_output(out_path, closed);
        return 0;
    }
    const auto mehler = frft_kernel_hermite_field(angle, grid, terms);
    std::cout << "max deviation from closed form (" << terms << " terms, damping " << damping
              << "): " << std::scientific << std::setprecision(3) << max_abs_diff(mehler, closed)
              << std::defaultfloat << '\n';
    write_output(out_path, mehler);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Phase-space chirp transform toolkit"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "Run a named verification suite and report residuals");
    std::string suite, config_file, out_dir;
    std::vector<double> alphas, epsilons;
    std::vector<std::string> tols;
    verify->add_option("suite", suite, "roundtrip|parseval|gaussian|chirplet-kernel|hermite-oracle|weyl|"
                                       "symbol-identity|kirkwood|charfun|all")
        ->required();
    verify->add_option("--config", config_file, "JSON config file");
    verify->add_option("--alpha", alphas, "angle in radians (repeatable)")->allow_extra_args(false);
    verify->add_option("--epsilon", epsilons, "damping ladder value (repeatable)")->allow_extra_args(false);
    verify->add_option("--out", out_dir, "directory for the JSON report");
    verify->add_option("--tol", tols, "tolerance override key=value (repeatable)")->allow_extra_args(false);

    auto* xf = app.add_subcommand("transform", "Transform a field CSV onto an output grid");
    std::string in_path, direction = "forward", path = "fast", grid_spec, out_path;
    xf->add_option("--in", in_path, "input field CSV")->required();
    xf->add_option("--direction", direction)->check(CLI::IsMember({"forward", "inverse"}));
    xf->add_option("--path", path)->check(CLI::IsMember({"direct", "fast", "both"}));
    xf->add_option("--grid", grid_spec, "output grid \"min,max,n;min,max,n\"")->required();
    xf->add_option("--out", out_path, "output field CSV")->required();

    auto* kern = app.add_subcommand("kernel", "Sample the fractional Fourier kernel");
    double alpha = 0.0, damping = 0.0;
    std::string method = "closed", kgrid, kout;
    int terms = 100;
    kern->add_option("--alpha", alpha, "angle in radians")->required();
    kern->add_option("--grid", kgrid, "grid \"min,max,n;min,max,n\" (x first)")->required();
    kern->add_option("--method", method)->check(CLI::IsMember({"closed", "hermite"}));
    kern->add_option("--out", kout, "output field CSV")->required();
    kern->add_option("--terms", terms, "Mehler terms for method=hermite")->check(CLI::Range(1, 400));
    kern->add_option("--damping", damping, "evaluate at the complex angle alpha - i*damping")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(suite, config_file, alphas, epsilons, out_dir, tols);
        if (*xf) return cmd_transform(in_path, direction, path, grid_spec, out_path);
        if (*kern) return cmd_kernel(alpha, kgrid, method, kout, terms, damping);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
