#pragma once

// Serialization of reports, profiles, traced branches and slope fits:
// CSV with a one-line header, JSON objects keyed by the same names, and SVG
// plots at 400 px per unit length.
//
// CSV numbers use %.17g, so doubles round-trip exactly. JSON cannot hold
// inf or nan, those are written as the strings "inf", "-inf", "nan".

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymptotics.hpp"
#include "constraints.hpp"
#include "profile.hpp"
#include "quantities.hpp"
#include "solvers.hpp"

namespace grainsteady::io {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fmt(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_number(const std::string& s)
{
    if (s.empty()) throw ParseError("empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError("bad numeric field: " + s);
    return v;
}

inline json jnum(double x)
{
    if (std::isfinite(x)) return x;
    return fmt(x);
}

inline double from_jnum(const json& j)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_number(j.get<std::string>());
    throw ParseError("expected a number");
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// Header plus rows of fields; blank lines skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ParseError("missing column " + name);
    }
};

inline CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (first) {
            t.header = std::move(f);
            first = false;
            continue;
        }
        if (f.size() != t.header.size()) throw ParseError("row width differs from header");
        t.rows.push_back(std::move(f));
    }
    if (first) throw ParseError("no CSV header");
    return t;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
}

// ---- constraint reports ----

inline const char* to_string(ConstraintMode m)
{
    return m == ConstraintMode::sufficient ? "sufficient" : "necessary_and_sufficient";
}

inline ConstraintMode mode_from_string(const std::string& s)
{
    if (s == "sufficient") return ConstraintMode::sufficient;
    if (s == "necessary_and_sufficient") return ConstraintMode::necessary_and_sufficient;
    throw ParseError("unknown constraint mode " + s);
}

inline void write_report_csv(std::ostream& out, const ConstraintReport<double>& r)
{
    write_csv_row(out, {"name", "satisfied", "margin"});
    for (const auto& x : r.records) write_csv_row(out, {x.name, x.satisfied ? "1" : "0", fmt(x.margin)});
}

inline ConstraintReport<double> read_report_csv(std::istream& in, ConstraintMode mode)
{
    const auto t = read_csv(in);
    const auto cn = t.column("name"), cs = t.column("satisfied"), cm = t.column("margin");
    ConstraintReport<double> r;
    r.mode = mode;
    for (const auto& row : t.rows) r.records.push_back({row[cn], row[cs] == "1", parse_number(row[cm])});
    return r;
}

inline json report_to_json(const ConstraintReport<double>& r)
{
    json j;
    j["mode"] = to_string(r.mode);
    j["all_satisfied"] = r.all_satisfied();
    j["records"] = json::array();
    for (const auto& x : r.records) {
        j["records"].push_back({{"name", x.name}, {"satisfied", x.satisfied}, {"margin", jnum(x.margin)}});
    }
    return j;
}

inline ConstraintReport<double> report_from_json(const json& j)
{
    ConstraintReport<double> r;
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    for (const auto& x : j.at("records")) {
        r.records.push_back({x.at("name").get<std::string>(), x.at("satisfied").get<bool>(), from_jnum(x.at("margin"))});
    }
    return r;
}

// ---- traced branches ----

inline const std::vector<std::string>& trace_base_columns()
{
    static const std::vector<std::string> cols{"A", "sigma", "theta_c", "lambda", "a_ell", "k", "r_bar", "z_bar", "E_eff", "V"};
    return cols;
}

// One CSV row. Gap rows carry A and theta_c, everything else is NaN.
struct TraceRow {
    std::vector<double> values;   // trace_base_columns() order
    std::vector<double> margins;  // TraceTable::margin_names order

    double get(std::size_t i) const { return values.at(i); }
    bool gap() const { return std::isnan(values.at(1)); }
};

struct TraceTable {
    std::vector<std::string> margin_names = constraint_names(ConstraintMode::necessary_and_sufficient);
    std::vector<TraceRow> rows;
};

inline TraceTable trace_table(const std::vector<ASigmaCurve<double>>& curves, const QuantityOptions<double>& qopt = {})
{
    TraceTable t;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : curves) {
        std::vector<TraceRow> rows;
        for (const auto& p : c.points) {
            const auto& d = p.params;
            const auto q = steady_diagnostics(d, c.angles, qopt);
            TraceRow r;
            r.values = {p.A, p.sigma, c.angles.theta_c, d.lambda, d.a_ell, d.k, d.r_bar, d.z_bar, q.E_eff, q.V};
            for (const auto& n : t.margin_names) {
                const auto* rec = p.report.find(n);
                r.margins.push_back(rec ? rec->margin : nan);
            }
            rows.push_back(std::move(r));
        }
        for (double A : c.gaps) {
            TraceRow r;
            r.values.assign(trace_base_columns().size(), nan);
            r.values[0] = A;
            r.values[2] = c.angles.theta_c;
            r.margins.assign(t.margin_names.size(), nan);
            rows.push_back(std::move(r));
        }
        std::stable_sort(rows.begin(), rows.end(), [](const TraceRow& a, const TraceRow& b) { return a.values[0] < b.values[0]; });
        t.rows.insert(t.rows.end(), rows.begin(), rows.end());
    }
    return t;
}

inline void write_trace_csv(std::ostream& out, const TraceTable& t)
{
    std::vector<std::string> h = trace_base_columns();
    h.insert(h.end(), t.margin_names.begin(), t.margin_names.end());
    write_csv_row(out, h);
    for (const auto& r : t.rows) {
        std::vector<std::string> f;
        for (double v : r.values) f.push_back(fmt(v));
        for (double v : r.margins) f.push_back(fmt(v));
        write_csv_row(out, f);
    }
}

inline TraceTable read_trace_csv(std::istream& in)
{
    const auto c = read_csv(in);
    const auto& base = trace_base_columns();
    if (c.header.size() < base.size()) throw ParseError("trace CSV has too few columns");
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (c.header[i] != base[i]) throw ParseError("unexpected trace column " + c.header[i]);
    }
    TraceTable t;
    t.margin_names.assign(c.header.begin() + long(base.size()), c.header.end());
    for (const auto& row : c.rows) {
        TraceRow r;
        for (std::size_t i = 0; i < row.size(); ++i) (i < base.size() ? r.values : r.margins).push_back(parse_number(row[i]));
        t.rows.push_back(std::move(r));
    }
    return t;
}

inline json trace_to_json(const TraceTable& t)
{
    json j;
    j["margin_names"] = t.margin_names;
    j["records"] = json::array();
    for (const auto& r : t.rows) {
        json o;
        for (std::size_t i = 0; i < r.values.size(); ++i) o[trace_base_columns()[i]] = jnum(r.values[i]);
        for (std::size_t i = 0; i < r.margins.size(); ++i) o[t.margin_names[i]] = jnum(r.margins[i]);
        j["records"].push_back(o);
    }
    return j;
}

inline TraceTable trace_from_json(const json& j)
{
    TraceTable t;
    t.margin_names = j.at("margin_names").get<std::vector<std::string>>();
    for (const auto& o : j.at("records")) {
        TraceRow r;
        for (const auto& n : trace_base_columns()) r.values.push_back(from_jnum(o.at(n)));
        for (const auto& n : t.margin_names) r.margins.push_back(from_jnum(o.at(n)));
        t.rows.push_back(std::move(r));
    }
    return t;
}

// ---- profiles ----

struct CurveSamples {
    std::string name;
    std::vector<double> theta, r, z;
};

struct ProfileRecord {
    std::map<std::string, double> scalars;  // derived parameters, theta_c, E_eff, V, ...
    std::vector<CurveSamples> curves;       // gamma1, gamma2, gamma3
};

inline ProfileRecord profile_record(const Profile<double>& p, const SteadyDiagnostics<double>& q)
{
    const auto& d = p.params;
    ProfileRecord rec;
    rec.scalars = {
        {"A", d.A}, {"sigma", d.sigma}, {"beta", d.beta}, {"m", -2 * std::cos(d.beta)}, {"theta_c", p.theta_c},
        {"r_bar", d.r_bar}, {"z_bar", d.z_bar}, {"theta1_bar", d.theta1_bar}, {"theta2_bar", d.theta2_bar},
        {"theta3_bar", d.theta3_bar}, {"lambda", d.lambda}, {"a_ell", d.a_ell}, {"k", d.k}, {"k2", d.k2},
        {"r1_star", q.r1_star}, {"z2_star", q.z2_star}, {"E_eff", q.E_eff}, {"V", q.V},
        {"arclen_gamma3", q.arclen_gamma3},
        {"junction_r", p.junction().r}, {"junction_z", p.junction().z},
        {"substrate_contact_r", p.substrate_contact().r}, {"substrate_contact_z", p.substrate_contact().z},
        {"wall_contact_r", p.wall_contact().r}, {"wall_contact_z", p.wall_contact().z},
        {"neck_r", p.neck().r}, {"neck_z", p.neck().z},
    };
    auto add = [&](const char* name, const Polyline<double>& pl) {
        CurveSamples c;
        c.name = name;
        c.theta = pl.theta;
        for (const auto& pt : pl.points) {
            c.r.push_back(pt.r);
            c.z.push_back(pt.z);
        }
        rec.curves.push_back(std::move(c));
    };
    add("gamma1", p.gamma1);
    add("gamma2", p.gamma2);
    add("gamma3", p.gamma3);
    return rec;
}

inline json profile_to_json(const ProfileRecord& p)
{
    json j;
    for (const auto& [k, v] : p.scalars) j[k] = jnum(v);
    for (const auto& c : p.curves) {
        json a = json::object();
        for (const char* key : {"theta", "r", "z"}) a[key] = json::array();
        for (std::size_t i = 0; i < c.r.size(); ++i) {
            a["theta"].push_back(jnum(c.theta[i]));
            a["r"].push_back(jnum(c.r[i]));
            a["z"].push_back(jnum(c.z[i]));
        }
        j["curves"][c.name] = a;
    }
    return j;
}

inline ProfileRecord profile_from_json(const json& j)
{
    ProfileRecord p;
    for (const auto& [k, v] : j.items()) {
        if (k != "curves") p.scalars[k] = from_jnum(v);
    }
    for (const auto& [name, a] : j.at("curves").items()) {
        CurveSamples c;
        c.name = name;
        for (const auto& x : a.at("theta")) c.theta.push_back(from_jnum(x));
        for (const auto& x : a.at("r")) c.r.push_back(from_jnum(x));
        for (const auto& x : a.at("z")) c.z.push_back(from_jnum(x));
        p.curves.push_back(std::move(c));
    }
    return p;
}

// CSV holds the polylines only; scalars live in the JSON form.
inline void write_profile_csv(std::ostream& out, const ProfileRecord& p)
{
    write_csv_row(out, {"curve", "theta", "r", "z"});
    for (const auto& c : p.curves) {
        for (std::size_t i = 0; i < c.r.size(); ++i) write_csv_row(out, {c.name, fmt(c.theta[i]), fmt(c.r[i]), fmt(c.z[i])});
    }
}

inline ProfileRecord read_profile_csv(std::istream& in)
{
    const auto t = read_csv(in);
    const auto cc = t.column("curve"), ct = t.column("theta"), cr = t.column("r"), cz = t.column("z");
    ProfileRecord p;
    for (const auto& row : t.rows) {
        if (p.curves.empty() || p.curves.back().name != row[cc]) p.curves.push_back({row[cc], {}, {}, {}});
        auto& c = p.curves.back();
        c.theta.push_back(parse_number(row[ct]));
        c.r.push_back(parse_number(row[cr]));
        c.z.push_back(parse_number(row[cz]));
    }
    return p;
}

// ---- slope fits ----

inline json fit_to_json(const SlopeFit<double>& f)
{
    json j;
    j["beta"] = jnum(f.beta);
    j["formula_slope"] = jnum(f.formula_slope);
    j["fitted_slope"] = jnum(f.fitted_slope);
    j["relative_gap"] = jnum(f.relative_gap);
    j["grid"] = json::array();
    for (std::size_t i = 0; i < f.grid.size(); ++i) j["grid"].push_back({{"A", jnum(f.grid[i])}, {"sigma", jnum(f.sigma[i])}});
    return j;
}

inline SlopeFit<double> fit_from_json(const json& j)
{
    SlopeFit<double> f;
    f.beta = from_jnum(j.at("beta"));
    f.formula_slope = from_jnum(j.at("formula_slope"));
    f.fitted_slope = from_jnum(j.at("fitted_slope"));
    f.relative_gap = from_jnum(j.at("relative_gap"));
    for (const auto& g : j.at("grid")) {
        f.grid.push_back(from_jnum(g.at("A")));
        f.sigma.push_back(from_jnum(g.at("sigma")));
    }
    return f;
}

inline void write_fit_csv(std::ostream& out, const SlopeFit<double>& f)
{
    write_csv_row(out, {"A", "sigma"});
    for (std::size_t i = 0; i < f.grid.size(); ++i) write_csv_row(out, {fmt(f.grid[i]), fmt(f.sigma[i])});
}

// ---- SVG ----

struct Series {
    std::string label;
    std::vector<std::vector<std::pair<double, double>>> pieces;  // broken at gaps
};

struct PlotFrame {
    double x_max = 1, y_max = 1;  // plotted region is [0, x_max] x [0, y_max]
    std::string x_label, y_label;
};

constexpr double px_per_unit = 400;

inline std::string svg_coord(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string render_svg(const PlotFrame& f, const std::vector<Series>& series)
{
    static const char* colors[] = {"#000000", "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"};
    const double pad = 50;
    const double w = f.x_max * px_per_unit + 2 * pad, h = f.y_max * px_per_unit + 2 * pad;
    auto X = [&](double x) { return svg_coord(pad + x * px_per_unit); };
    auto Y = [&](double y) { return svg_coord(h - pad - y * px_per_unit); };
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_coord(w) << "\" height=\"" << svg_coord(h)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<path d=\"M" << X(0) << " " << Y(f.y_max) << " L" << X(0) << " " << Y(0) << " L" << X(f.x_max) << " " << Y(0)
      << "\" stroke=\"#444\" fill=\"none\"/>\n";
    for (int i = 0; i <= 10; ++i) {
        const double t = 0.1 * i;
        if (t <= f.x_max + 1e-12) {
            s << "<text x=\"" << X(t) << "\" y=\"" << svg_coord(h - pad + 16) << "\" text-anchor=\"middle\">" << svg_coord(t).substr(0, 3)
              << "</text>\n";
        }
        if (t <= f.y_max + 1e-12) {
            s << "<text x=\"" << svg_coord(pad - 6) << "\" y=\"" << Y(t) << "\" text-anchor=\"end\">" << svg_coord(t).substr(0, 3)
              << "</text>\n";
        }
    }
    s << "<text x=\"" << X(f.x_max / 2) << "\" y=\"" << svg_coord(h - 8) << "\" text-anchor=\"middle\">" << f.x_label << "</text>\n";
    s << "<text x=\"16\" y=\"" << Y(f.y_max / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << Y(f.y_max / 2)
      << ")\">" << f.y_label << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* col = colors[k % 6];
        for (const auto& piece : series[k].pieces) {
            if (piece.empty()) continue;
            s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < piece.size(); ++i) s << (i ? " " : "") << X(piece[i].first) << "," << Y(piece[i].second);
            s << "\"/>\n";
        }
        s << "<text x=\"" << svg_coord(w - pad) << "\" y=\"" << svg_coord(pad + 16 * double(k)) << "\" text-anchor=\"end\" fill=\""
          << col << "\">" << series[k].label << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

// Meridian cross-section on [0, 1] x [0, z_max].
inline std::string profile_svg(const ProfileRecord& p)
{
    double zmax = 0;
    std::vector<Series> ser;
    for (const auto& c : p.curves) {
        Series s{c.name, {{}}};
        for (std::size_t i = 0; i < c.r.size(); ++i) {
            s.pieces[0].emplace_back(c.r[i], c.z[i]);
            zmax = std::max(zmax, c.z[i]);
        }
        ser.push_back(std::move(s));
    }
    PlotFrame f{1.0, std::max(0.1, std::ceil(zmax * 1.1 * 10) / 10), "r", "z"};
    return render_svg(f, ser);
}

// sigma against A, one series per contact angle, broken at gap rows.
inline std::string trace_svg(const TraceTable& t)
{
    std::vector<Series> ser;
    std::vector<double> tcs;
    double smax = 0;
    for (const auto& r : t.rows) {
        const double tc = r.values[2];
        std::size_t k = 0;
        while (k < tcs.size() && tcs[k] != tc) ++k;
        if (k == tcs.size()) {
            tcs.push_back(tc);
            ser.push_back({"theta_c = " + svg_coord(tc), {{}}});
        }
        if (r.gap()) {
            if (!ser[k].pieces.back().empty()) ser[k].pieces.emplace_back();
            continue;
        }
        ser[k].pieces.back().emplace_back(r.values[0], r.values[1]);
        smax = std::max(smax, r.values[1]);
    }
    PlotFrame f{1.0, std::max(0.1, std::ceil(smax * 1.1 * 10) / 10), "A", "sigma"};
    return render_svg(f, ser);
}

} // namespace grainsteady::io
