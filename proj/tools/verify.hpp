#pragma once
// Named verification suites behind `phasexform verify`.
//
// Each suite returns a Report whose cases carry the residual, the tolerance
// it was judged against and an anchor naming the identity being checked.

#include <phasexform/phasexform.hpp>

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pxcli {

using namespace phasexform;
using json = nlohmann::json;

// Raised for anything wrong with the configuration; `path` names the field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path)
    {
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct GridSpec {
    double min = -6.0;
    double max = 6.0;
    std::size_t n = 128;
};

inline const std::map<std::string, double>& default_tolerances()
{
    static const std::map<std::string, double> t{
        {"roundtrip", 1e-6},          {"parseval", 1e-6},          {"gaussian", 1e-6},
        {"chirplet.closed", 1e-10},   {"chirplet.monotone", 0.0},  {"chirplet.extrapolated", 1e-2},
        {"headline", 1e-6},           {"hermite.damped", 1e-8},    {"hermite.composition", 1e-6},
        {"weyl.roundtrip", 1e-6},     {"weyl.spectral", 1e-6},     {"symbol-identity", 1e-6},
        {"kirkwood", 1e-6},           {"charfun", 1e-8},
    };
    return t;
}

struct RunConfig {
    GridSpec grid;
    std::size_t fields = 10;
    std::size_t direct_fields = 2;
    std::uint64_t seed = 20240601;
    std::vector<double> lambdas{0.5, 1.0, 2.0};
    std::vector<double> chirplet_alphas{pi / 3, pi / 2, 2 * pi / 3};
    std::vector<double> kernel_alphas{0.3, 1.0, pi / 2, 2.0, 2.8};
    std::vector<double> epsilons{0.1, 0.05, 0.02, 0.01};
    int hermite_terms = 100;
    double damping = 0.2;
    std::size_t n_max = 120;
    std::map<std::string, double> tolerances = default_tolerances();
    std::string out_dir;

    double tol(const std::string& key) const { return tolerances.at(key); }
};

inline void validate(const RunConfig& c)
{
    auto finite = [](const std::string& path, double v) {
        if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    };
    finite("grid.min", c.grid.min);
    finite("grid.max", c.grid.max);
    if (c.grid.n < 2) throw ConfigError("grid.n", "need at least 2 samples");
    if (c.grid.n > 256) throw ConfigError("grid.n", "at most 256 samples per axis");
    if (!(c.grid.max > c.grid.min)) throw ConfigError("grid.max", "must exceed grid.min");
    if (c.fields < 1) throw ConfigError("fields", "need at least one field");
    if (c.direct_fields > c.fields) throw ConfigError("direct_fields", "cannot exceed fields");
    for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
        const std::string path = "lambdas[" + std::to_string(i) + "]";
        finite(path, c.lambdas[i]);
        if (c.lambdas[i] <= 0.0) throw ConfigError(path, "Gaussian width must be > 0");
    }
    auto check_alphas = [&](const std::string& name, const std::vector<double>& as) {
        if (as.empty()) throw ConfigError(name, "empty list");
        for (std::size_t i = 0; i < as.size(); ++i) {
            const std::string path = name + "[" + std::to_string(i) + "]";
            finite(path, as[i]);
            const double s = std::abs(std::sin(as[i]));
            if (s < kSingularityGuard) {
                std::ostringstream msg;
                msg << "alpha = " << as[i] << " has |sin(alpha)| = " << s << " < " << kSingularityGuard;
                throw ConfigError(path, msg.str());
            }
        }
    };
    check_alphas("chirplet_alphas", c.chirplet_alphas);
    check_alphas("kernel_alphas", c.kernel_alphas);
    if (c.epsilons.empty()) throw ConfigError("epsilons", "empty ladder");
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
        const std::string path = "epsilons[" + std::to_string(i) + "]";
        finite(path, c.epsilons[i]);
        if (c.epsilons[i] <= 0.0) throw ConfigError(path, "epsilon must be > 0");
        for (std::size_t j = 0; j < i; ++j)
            if (c.epsilons[j] == c.epsilons[i]) throw ConfigError(path, "duplicate epsilon");
    }
    if (c.hermite_terms < 1 || c.hermite_terms > 200) throw ConfigError("hermite_terms", "must be in [1, 200]");
    finite("damping", c.damping);
    if (c.damping < 0.0) throw ConfigError("damping", "must be >= 0");
    if (c.n_max < 10 || c.n_max > 200) throw ConfigError("n_max", "must be in [10, 200]");
    for (const auto& [k, v] : c.tolerances) {
        if (!default_tolerances().contains(k)) throw ConfigError("tolerances." + k, "unknown tolerance key");
        if (!std::isfinite(v) || v < 0.0) throw ConfigError("tolerances." + k, "must be finite and >= 0");
    }
}

namespace detail {

template <class T>
T get_as(const json& j, const std::string& path)
{
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path, "wrong type");
    }
}

template <class T>
std::vector<T> get_list(const json& j, const std::string& path)
{
    if (!j.is_array()) throw ConfigError(path, "expected a list");
    std::vector<T> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_as<T>(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::size_t get_count(const json& j, const std::string& path)
{
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

} // namespace detail

// Layers a JSON config object over `c`. Unknown keys are errors.
inline void apply_json(RunConfig& c, const json& j)
{
    using detail::get_as;
    using detail::get_count;
    using detail::get_list;
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "grid") {
            if (!v.is_object()) throw ConfigError("grid", "expected an object");
            for (auto g = v.begin(); g != v.end(); ++g) {
                if (g.key() == "min") c.grid.min = get_as<double>(g.value(), "grid.min");
                else if (g.key() == "max") c.grid.max = get_as<double>(g.value(), "grid.max");
                else if (g.key() == "n") c.grid.n = get_count(g.value(), "grid.n");
                else throw ConfigError("grid." + g.key(), "unknown key");
            }
        } else if (k == "fields") c.fields = get_count(v, k);
        else if (k == "direct_fields") c.direct_fields = get_count(v, k);
        else if (k == "seed") c.seed = get_count(v, k);
        else if (k == "lambdas") c.lambdas = get_list<double>(v, k);
        else if (k == "chirplet_alphas") c.chirplet_alphas = get_list<double>(v, k);
        else if (k == "kernel_alphas") c.kernel_alphas = get_list<double>(v, k);
        else if (k == "epsilons") c.epsilons = get_list<double>(v, k);
        else if (k == "hermite_terms") c.hermite_terms = static_cast<int>(get_count(v, k));
        else if (k == "damping") c.damping = get_as<double>(v, k);
        else if (k == "n_max") c.n_max = get_count(v, k);
        else if (k == "out") c.out_dir = get_as<std::string>(v, k);
        else if (k == "tolerances") {
            if (!v.is_object()) throw ConfigError(k, "expected an object");
            for (auto t = v.begin(); t != v.end(); ++t) {
                const std::string path = "tolerances." + t.key();
                if (!default_tolerances().contains(t.key())) throw ConfigError(path, "unknown tolerance key");
                c.tolerances[t.key()] = get_as<double>(t.value(), path);
            }
        } else throw ConfigError(k, "unknown key");
    }
}

inline json to_json(const RunConfig& c)
{
    return json{{"grid", {{"min", c.grid.min}, {"max", c.grid.max}, {"n", c.grid.n}}},
                {"fields", c.fields},
                {"direct_fields", c.direct_fields},
                {"seed", c.seed},
                {"lambdas", c.lambdas},
                {"chirplet_alphas", c.chirplet_alphas},
                {"kernel_alphas", c.kernel_alphas},
                {"epsilons", c.epsilons},
                {"hermite_terms", c.hermite_terms},
                {"damping", c.damping},
                {"n_max", c.n_max},
                {"tolerances", c.tolerances}};
}

struct Case {
    std::string name;
    std::string anchor;
    double residual;
    double tolerance;
    bool pass;
    double runtime_ms;
};

struct Report {
    std::string suite;
    std::vector<Case> cases;

    bool overall_pass() const
    {
        for (const auto& c : cases)
            if (!c.pass) return false;
        return !cases.empty();
    }
};

inline json to_json(const Case& c)
{
    return json{{"name", c.name},           {"anchor", c.anchor}, {"residual", c.residual},
                {"tolerance", c.tolerance}, {"pass", c.pass},     {"runtime_ms", c.runtime_ms}};
}

inline json to_json(const Report& r, const RunConfig& cfg)
{
    json cases = json::array();
    for (const auto& c : r.cases) cases.push_back(to_json(c));
    return json{{"suite", r.suite}, {"cases", cases}, {"overall_pass", r.overall_pass()}, {"config_echo", to_json(cfg)}};
}

namespace detail {

class Recorder {
public:
    explicit Recorder(std::string suite) : report_{std::move(suite), {}} {}

    // Times `residual_fn` and records the case.
    void run(const std::string& name, const std::string& anchor, double tolerance,
             const std::function<double()>& residual_fn)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double r = residual_fn();
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        report_.cases.push_back({name, anchor, r, tolerance, std::isfinite(r) && r <= tolerance, ms});
    }

    Report take() { return std::move(report_); }

private:
    Report report_;
};

inline std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// Gaussian times a random complex polynomial of degree <= 2, off-centre and
// with a random width. Deterministic for a given seed.
inline SampledField random_field(std::mt19937_64& rng, const PhaseGrid& grid)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0), width(0.8, 1.5), shift(-0.5, 0.5);
    cplx c[6];
    for (auto& v : c) v = {coef(rng), coef(rng)};
    const double a = width(rng), p0 = shift(rng), q0 = shift(rng);
    return sample_field(
        [&](double p, double q) {
            const double u = p - p0, v = q - q0;
            const cplx poly = c[0] + c[1] * u + c[2] * v + c[3] * u * u + c[4] * u * v + c[5] * v * v;
            return poly * std::exp(-a * (u * u + v * v));
        },
        grid);
}

inline std::vector<SampledField> field_family(const RunConfig& cfg, const PhaseGrid& grid)
{
    std::mt19937_64 rng(cfg.seed);
    std::vector<SampledField> out;
    for (std::size_t i = 0; i < cfg.fields; ++i) out.push_back(random_field(rng, grid));
    return out;
}

inline PhaseGrid config_grid(const RunConfig& cfg) { return square_grid(cfg.grid.min, cfg.grid.max, cfg.grid.n); }

// Forward images of the field family spread a little past the input square;
// the forward output keeps the input lattice with a margin of 2.
inline PhaseGrid image_grid(const PhaseGrid& g) { return {extend_axis(g.p, 2.0), extend_axis(g.q, 2.0)}; }

// Axis with samples at lo, lo+step, ... up to hi (inclusive when aligned).
inline Axis stepped_axis(double lo, double hi, double step)
{
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    return Axis(lo, lo + static_cast<double>(n - 1) * step, n);
}

} // namespace detail

inline Report suite_roundtrip(const RunConfig& cfg)
{
    detail::Recorder rec("roundtrip");
    const auto g = detail::config_grid(cfg);
    const auto img = detail::image_grid(g);
    const auto fields = detail::field_family(cfg, g);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& h = fields[i];
        rec.run("field " + std::to_string(i) + " fast", "inverse-after-forward", cfg.tol("roundtrip"),
                [&] { return relative_l2(inverse_fast(forward_fast(h, img), g), h); });
        if (i < cfg.direct_fields)
            rec.run("field " + std::to_string(i) + " direct", "inverse-after-forward", cfg.tol("roundtrip"),
                    [&] { return relative_l2(inverse_direct(forward_direct(h, img), g), h); });
    }
    return rec.take();
}

inline Report suite_parseval(const RunConfig& cfg)
{
    detail::Recorder rec("parseval");
    const auto g = detail::config_grid(cfg);
    const auto fields = detail::field_family(cfg, g);
    for (std::size_t i = 0; i < fields.size(); ++i)
        rec.run("field " + std::to_string(i), "parseval", cfg.tol("parseval"),
                [&] { return parseval_residual(fields[i], detail::image_grid(g)); });
    return rec.take();
}

inline Report suite_gaussian(const RunConfig& cfg)
{
    detail::Recorder rec("gaussian");
    const auto in = square_grid(-8.0, 8.0, 128);
    const auto out = square_grid(-2.0, 2.0, 41);
    for (double lam : cfg.lambdas) {
        rec.run("lambda=" + detail::fmt(lam), "gaussian-closed-form", cfg.tol("gaussian"), [&] {
            const auto h = sample_field([&](double p, double q) { return std::exp(-lam * (p * p + q * q)); }, in);
            const auto num = forward_fast(h, out);
            const auto ref =
                sample_field([&](double x, double y) { return gaussian_transform_closed(lam, x, y); }, out);
            double scale = 0.0;
            for (const auto& v : ref.values()) scale = std::max(scale, std::abs(v));
            return max_abs_diff(num, ref) / scale;
        });
    }
    return rec.take();
}

inline Report suite_chirplet(const RunConfig& cfg)
{
    detail::Recorder rec("chirplet-kernel");
    const auto out = square_grid(-2.0, 2.0, 17);
    for (double a : cfg.chirplet_alphas) {
        const std::string tag = "alpha=" + detail::fmt(a);
        rec.run("closed " + tag, "chirplet-to-frft", cfg.tol("chirplet.closed"),
                [&] { return chirplet_continuation_residual(a, out); });
        ChirpletSweep sweep{};
        rec.run("epsilon-monotone " + tag, "chirplet-to-frft", cfg.tol("chirplet.monotone"), [&] {
            sweep = chirplet_sweep(a, cfg.epsilons, out);
            return sweep.monotone ? 0.0 : 1.0;
        });
        rec.run("epsilon-extrapolated " + tag, "chirplet-to-frft", cfg.tol("chirplet.extrapolated"),
                [&] { return sweep.extrapolated; });
    }
    // oscillator exponential symbol at f = i(pi/2 - alpha), transformed in closed form
    const auto kg = square_grid(-3.0, 3.0, 25);
    for (double a : cfg.kernel_alphas)
        rec.run("oscillator-symbol alpha=" + detail::fmt(a), "frft-kernel", cfg.tol("headline"), [&] {
            const cplx f = I * (pi / 2 - a);
            double worst = 0.0;
            for (double x : kg.p.samples())
                for (double y : kg.q.samples())
                    worst = std::max(worst, std::abs(oscillator_exponential_transform_closed(f, x, y) -
                                                     std::sqrt(2 * pi) * frft_kernel(a, x, y) *
                                                         std::exp(I * (x * y))));
            return worst;
        });
    return rec.take();
}

inline Report suite_hermite(const RunConfig& cfg)
{
    detail::Recorder rec("hermite-oracle");
    const auto g = square_grid(-3.0, 3.0, 25);
    for (double a : cfg.kernel_alphas) {
        const cplx angle{a, -cfg.damping};
        rec.run("mehler-damped alpha=" + detail::fmt(a) + " delta=" + detail::fmt(cfg.damping), "frft-kernel",
                cfg.tol("hermite.damped"), [&] {
                    double worst = 0.0;
                    for (double x : g.p.samples())
                        for (double y : g.q.samples())
                            worst = std::max(worst, std::abs(frft_kernel_hermite(angle, x, y, cfg.hermite_terms) -
                                                             frft_kernel(angle, x, y)));
                    return worst;
                });
    }
    rec.run("composition pi/4+pi/4", "frft-kernel", cfg.tol("hermite.composition"), [&] {
        // truncated kernels composed by trapezoid quadrature over t
        const auto n = static_cast<std::size_t>(cfg.hermite_terms - 1);
        const HermiteBasis basis(n, hermite_axis(n, 512));
        const auto& tab = basis.table();
        const auto& ax = basis.axis();
        const auto M = static_cast<Eigen::Index>(ax.size());
        Eigen::VectorXcd phase_q(tab.rows()), phase_h(tab.rows());
        for (Eigen::Index k = 0; k < tab.rows(); ++k) {
            phase_q(k) = std::exp(-I * (pi / 4) * static_cast<double>(k));
            phase_h(k) = std::exp(-I * (pi / 2) * static_cast<double>(k));
        }
        const Eigen::MatrixXcd T = tab.cast<cplx>();
        const Eigen::MatrixXcd Kq = T.transpose() * phase_q.asDiagonal() * T;
        const Eigen::MatrixXcd Kh = T.transpose() * phase_h.asDiagonal() * T;
        Eigen::VectorXd w(M);
        for (Eigen::Index i = 0; i < M; ++i) w(i) = ax.weight(static_cast<std::size_t>(i)) * ax.step();
        const Eigen::MatrixXcd comp = Kq * w.asDiagonal() * Kq;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < M; ++i)
            for (Eigen::Index j = 0; j < M; ++j)
                if (std::abs(ax[static_cast<std::size_t>(i)]) <= 3.0 && std::abs(ax[static_cast<std::size_t>(j)]) <= 3.0)
                    worst = std::max(worst, std::abs(comp(i, j) - Kh(i, j)));
        return worst;
    });
    return rec.take();
}

inline Report suite_weyl(const RunConfig& cfg)
{
    detail::Recorder rec("weyl");
    const Axis oax(-8.0, 8.0, 129);
    // q-step half the kernel step puts every midpoint on a symbol sample
    const PhaseGrid hg{Axis(-8.0, 8.0, 128), Axis(-8.0, 8.0, 257)};
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < 3; ++i) {
        const auto h = detail::random_field(rng, hg);
        rec.run("roundtrip symbol " + std::to_string(i), "weyl-correspondence", cfg.tol("weyl.roundtrip"),
                [&] { return relative_l2(weyl_symbol(weyl_quantize(h, oax), hg), h); });
    }
    rec.run("oscillator f=-ln3 vs spectral sum", "oscillator-exponential-symbol", cfg.tol("weyl.spectral"), [&] {
        const cplx f = -std::log(3.0);
        const auto Hq = weyl_quantize(oscillator_exponential_symbol(f, hg), oax);
        const auto Hs = oscillator_exponential_kernel(f, HermiteBasis(cfg.n_max, oax));
        return (Hq.values() - Hs.values()).cwiseAbs().maxCoeff();
    });
    return rec.take();
}

inline Report suite_symbol_identity(const RunConfig& cfg)
{
    detail::Recorder rec("symbol-identity");
    const Axis ax(-8.0, 8.0, 128);
    const PhaseGrid g{ax, ax};
    for (std::size_t n : {0u, 1u}) {
        SymbolIdentityResidual r{};
        rec.run("|" + std::to_string(n) + "><" + std::to_string(n) + "| forward", "mixed-element",
                cfg.tol("symbol-identity"), [&] {
                    r = symbol_identity_residual(number_projector(n, ax), g, g);
                    return r.forward;
                });
        rec.run("|" + std::to_string(n) + "><" + std::to_string(n) + "| inverse", "mixed-element",
                cfg.tol("symbol-identity"), [&] { return r.inverse; });
    }
    return rec.take();
}

inline Report suite_kirkwood(const RunConfig& cfg)
{
    detail::Recorder rec("kirkwood");
    const auto wg = square_grid(-5.0, 5.0, 128);
    const auto ax = extend_axis(wg.q, 3.0);
    for (std::size_t n : {0u, 1u}) {
        KirkwoodResidual r{};
        const std::string tag = "n=" + std::to_string(n);
        rec.run("wigner to q-p " + tag, "wigner-to-kirkwood", cfg.tol("kirkwood"), [&] {
            r = wigner_to_kirkwood_residual(number_state(n, ax), wg, wg);
            return r.qp;
        });
        rec.run("wigner to p-q " + tag, "wigner-to-kirkwood", cfg.tol("kirkwood"), [&] { return r.pq; });
    }
    return rec.take();
}

inline Report suite_charfun(const RunConfig& cfg)
{
    detail::Recorder rec("charfun");
    const auto ax = hermite_axis(cfg.n_max, 512);
    const HermiteBasis basis(cfg.n_max, ax);
    const CharacteristicFunction cf(number_projector(0, ax), basis);
    const auto uv = detail::stepped_axis(-3.0, 3.0, 0.25).samples();
    rec.run("ground q-p at origin", "characteristic-function", cfg.tol("charfun"), [&] {
        const auto t = cf.qp_table(0.0, 0.0, uv, uv);
        double worst = 0.0;
        for (std::size_t a = 0; a < uv.size(); ++a)
            for (std::size_t b = 0; b < uv.size(); ++b) {
                const double u = uv[a], v = uv[b];
                const cplx ref = std::exp(-(u * u + v * v) / 4) * std::exp(-I * (u * v / 2));
                worst = std::max(worst, std::abs(t(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - ref));
            }
        return worst;
    });
    rec.run("ground p-q at origin", "characteristic-function", cfg.tol("charfun"), [&] {
        double worst = 0.0;
        for (double u : {-3.0, -1.0, 0.5, 2.0})
            for (double v : {-2.5, 0.0, 1.5, 3.0})
                worst = std::max(worst, std::abs(cf.pq(0.0, 0.0, u, v) -
                                                 std::exp(-(u * u + v * v) / 4) * std::exp(I * (u * v / 2))));
        return worst;
    });
    return rec.take();
}

inline const std::vector<std::pair<std::string, std::function<Report(const RunConfig&)>>>& suites()
{
    static const std::vector<std::pair<std::string, std::function<Report(const RunConfig&)>>> s{
        {"roundtrip", suite_roundtrip},
        {"parseval", suite_parseval},
        {"gaussian", suite_gaussian},
        {"chirplet-kernel", suite_chirplet},
        {"hermite-oracle", suite_hermite},
        {"weyl", suite_weyl},
        {"symbol-identity", suite_symbol_identity},
        {"kirkwood", suite_kirkwood},
        {"charfun", suite_charfun},
    };
    return s;
}

inline bool known_suite(const std::string& name)
{
    if (name == "all") return true;
    for (const auto& [n, fn] : suites())
        if (n == name) return true;
    return false;
}

} // namespace pxcli
