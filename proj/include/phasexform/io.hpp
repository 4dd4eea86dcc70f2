#pragma once
// CSV exchange format for sampled fields and operator kernels.
//
// Fields:  header "p,q,re,im", one row per grid point in storage order.
// Kernels: header "q1,q2,re,im", row-major.
// Values are written with 17 significant digits so a write/read cycle is exact.

#include "grid.hpp"
#include "quantum.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phasexform {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

struct GridTable {
    Axis a;
    Axis b;
    std::vector<cplx> values;
};

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view tok, std::size_t line)
{
    tok = trim(tok);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError(line, "invalid number '" + std::string(tok) + "'");
    return v;
}

inline Axis axis_from_samples(const std::vector<double>& s, std::size_t line, const char* name)
{
    if (s.size() < 2) throw ParseError(line, std::string("axis '") + name + "' needs at least 2 distinct samples");
    Axis ax(s.front(), s.back(), s.size());
    const double tol = 1e-9 * std::max(1.0, ax.max() - ax.min());
    for (std::size_t k = 0; k < s.size(); ++k)
        if (std::abs(s[k] - ax[k]) > tol) throw ParseError(line, std::string("axis '") + name + "' is not uniform");
    return ax;
}

inline GridTable read_table(std::istream& in, std::string_view a_name, std::string_view b_name)
{
    const std::string expected = std::string(a_name) + "," + std::string(b_name) + ",re,im";
    std::string text;
    std::size_t line = 0;
    std::string header;
    while (std::getline(in, text)) {
        ++line;
        if (!trim(text).empty()) {
            header = std::string(trim(text));
            break;
        }
    }
    if (header.empty()) throw ParseError(line == 0 ? 1 : line, "empty input, expected header '" + expected + "'");
    if (header != expected) throw ParseError(line, "bad header '" + header + "', expected '" + expected + "'");

    struct Row {
        double a, b;
        cplx v;
        std::size_t line;
    };
    std::vector<Row> rows;
    while (std::getline(in, text)) {
        ++line;
        std::string_view sv = trim(text);
        if (sv.empty()) continue;
        double f[4];
        for (int c = 0; c < 4; ++c) {
            auto comma = sv.find(',');
            if ((c < 3) != (comma != std::string_view::npos))
                throw ParseError(line, "expected 4 comma-separated columns");
            f[c] = parse_number(sv.substr(0, comma), line);
            sv = c < 3 ? sv.substr(comma + 1) : std::string_view{};
        }
        rows.push_back({f[0], f[1], {f[2], f[3]}, line});
    }
    if (rows.empty()) throw ParseError(line, "no data rows");

    std::size_t nb = 0;
    while (nb < rows.size() && rows[nb].a == rows[0].a) ++nb;
    if (rows.size() % nb != 0) throw ParseError(rows.back().line, "ragged grid: incomplete final block");
    std::vector<double> as, bs;
    std::vector<cplx> vals;
    vals.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Row& row = rows[r];
        if (r % nb == 0) as.push_back(row.a);
        if (r < nb) bs.push_back(row.b);
        if (row.a != as.back())
            throw ParseError(row.line, "ragged grid: first-axis value changes inside a block");
        if (std::abs(row.b - bs[r % nb]) > 1e-9 * std::max(1.0, std::abs(bs[r % nb])))
            throw ParseError(row.line, "second-axis value does not repeat the first block");
        vals.push_back(row.v);
    }
    return {axis_from_samples(as, rows.back().line, std::string(a_name).c_str()),
            axis_from_samples(bs, rows.back().line, std::string(b_name).c_str()), std::move(vals)};
}

inline void write_table(std::ostream& out, std::string_view a_name, std::string_view b_name, const Axis& a,
                        const Axis& b, auto&& value)
{
    out << a_name << ',' << b_name << ",re,im\n";
    out << std::setprecision(17);
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t k = 0; k < b.size(); ++k) {
            const cplx v = value(j, k);
            out << a[j] << ',' << b[k] << ',' << v.real() << ',' << v.imag() << '\n';
        }
}

} // namespace detail

inline void write_field_csv(std::ostream& out, const SampledField& f)
{
    detail::write_table(out, "p", "q", f.grid().p, f.grid().q, [&](auto j, auto k) { return f(j, k); });
}

inline SampledField read_field_csv(std::istream& in)
{
    auto t = detail::read_table(in, "p", "q");
    return SampledField(PhaseGrid{t.a, t.b}, std::move(t.values));
}

inline void write_kernel_csv(std::ostream& out, const OperatorKernel& k)
{
    detail::write_table(out, "q1", "q2", k.q1_axis(), k.q2_axis(), [&](auto i, auto j) { return k(i, j); });
}

inline OperatorKernel read_kernel_csv(std::istream& in)
{
    auto t = detail::read_table(in, "q1", "q2");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(t.a.size()), static_cast<Eigen::Index>(t.b.size()));
    for (std::size_t i = 0; i < t.a.size(); ++i)
        for (std::size_t j = 0; j < t.b.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.values[i * t.b.size() + j];
    return OperatorKernel(t.a, t.b, std::move(m));
}

// Reads a kernel and checks it is a valid density operator.
inline OperatorKernel read_density_csv(std::istream& in, double tol = 1e-8)
{
    auto k = read_kernel_csv(in);
    k.validate_density(tol);
    return k;
}

inline void save_field(const std::string& path, const SampledField& f)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_field_csv(out, f);
}

inline SampledField load_field(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_field_csv(in);
}

} // namespace phasexform
