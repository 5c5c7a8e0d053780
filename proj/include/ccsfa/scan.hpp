#pragma once

// Parameter scans, PMD dumps and the self-check table behind the command-line
// driver. Points are computed concurrently and written in order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ccsfa/amplitude.hpp"
#include "ccsfa/errors.hpp"
#include "ccsfa/hqa.hpp"
#include "ccsfa/model.hpp"
#include "ccsfa/oracle.hpp"

namespace ccsfa {

enum class ScanKind { field, gamma, pmd, hqa, check };
enum class Spacing { linear, log };

struct Range {
    double start = 0.0, stop = 0.0;
    int points = 0;
    Spacing spacing = Spacing::linear;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double u = points == 1 ? 0.0 : double(i) / (points - 1);
            v[i] = spacing == Spacing::log ? start * std::pow(stop / start, u) : start + (stop - start) * u;
        }
        if (points > 1) v.back() = stop;
        return v;
    }
};

/// "a:b:n" or "a:b:n:log".
inline Range parse_range(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 4) throw spec_error("range '" + s + "' is not a:b:n");
    Range r;
    try {
        std::size_t used = 0;
        r.start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw spec_error("");
        r.stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw spec_error("");
        r.points = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw spec_error("");
    } catch (const std::exception&) {
        throw spec_error("range '" + s + "' has a malformed number");
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") r.spacing = Spacing::log;
        else if (parts[3] != "lin" && parts[3] != "linear") throw spec_error("unknown spacing '" + parts[3] + "'");
    }
    return r;
}

struct ScanSpec {
    ScanKind kind = ScanKind::field;
    double kappa = 1.0;
    double charge = 1.0;
    std::optional<double> e0, omega, gamma;
    std::optional<Range> range;
    std::vector<Variant> variants{Variant::S0, Variant::S1, Variant::S2qc, Variant::S2qu};
    std::string out;
    bool with_hqa = false;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency

    void validate() const;
    /// Variants in canonical column order, without repeats.
    std::vector<Variant> ordered_variants() const {
        std::vector<Variant> v = variants;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }
    Range resolved_range() const;
};

inline const char* to_string(ScanKind k) {
    switch (k) {
        case ScanKind::field: return "scan-field";
        case ScanKind::gamma: return "scan-gamma";
        case ScanKind::pmd: return "pmd";
        case ScanKind::hqa: return "hqa";
        case ScanKind::check: return "check";
    }
    return "?";
}

inline std::vector<Variant> parse_variants(const std::string& s) {
    std::vector<Variant> v;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item.empty()) continue;
        try {
            v.push_back(parse_variant(item));
        } catch (const domain_error& e) {
            throw spec_error(e.what());
        }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Flat key=value text; '#' starts a comment. Keys are the long flag names.
inline std::map<std::string, std::string> read_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw spec_error("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));
        if (key.empty()) throw spec_error("config line " + std::to_string(line_no) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

inline double parse_number(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw spec_error(key + ": '" + s + "' is not a number");
}

/// Applies config entries to a spec. Unknown keys are errors.
inline void apply_config(ScanSpec& spec, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "kappa") spec.kappa = parse_number(k, v);
        else if (k == "Z") spec.charge = parse_number(k, v);
        else if (k == "E0") spec.e0 = parse_number(k, v);
        else if (k == "omega") spec.omega = parse_number(k, v);
        else if (k == "gamma") spec.gamma = parse_number(k, v);
        else if (k == "f-range" || k == "gamma-range" || k == "p-range") spec.range = parse_range(v);
        else if (k == "variants") spec.variants = parse_variants(v);
        else if (k == "out") spec.out = v;
        else if (k == "hqa") spec.with_hqa = v == "1" || v == "true" || v == "yes";
        else if (k == "threads") spec.threads = static_cast<unsigned>(parse_number(k, v));
        else throw spec_error("unknown config key '" + k + "'");
    }
}

inline void ScanSpec::validate() const {
    if (!(kappa > 0.0)) throw spec_error("kappa must be positive");
    if (!(charge >= 0.0)) throw spec_error("Z must be non-negative");
    if (e0 && !(*e0 > 0.0)) throw spec_error("E0 must be positive");
    if (omega && !(*omega > 0.0)) throw spec_error("omega must be positive");
    if (gamma && !(*gamma > 0.0)) throw spec_error("gamma must be positive");
    if (kind != ScanKind::check && kind != ScanKind::hqa && variants.empty())
        throw spec_error("variant list is empty");
    if (range) {
        if (range->points < 2) throw spec_error("a range needs at least 2 points");
        if (!(range->start > 0.0) || !(range->stop > 0.0)) throw spec_error("range bounds must be positive");
    }
    if (kind == ScanKind::gamma && !omega && !e0) throw spec_error("scan-gamma needs --omega or --E0");
    if ((kind == ScanKind::field || kind == ScanKind::hqa) && e0)
        throw spec_error("the field strength is the scan variable; drop --E0");
    if ((kind == ScanKind::field || kind == ScanKind::hqa) && omega && gamma)
        throw spec_error("give --omega or --gamma, not both");
    if (kind == ScanKind::gamma && omega && e0) throw spec_error("scan-gamma holds --omega or --E0 fixed, not both");
}

inline Range ScanSpec::resolved_range() const {
    if (range) return *range;
    switch (kind) {
        case ScanKind::field:
        case ScanKind::hqa: return {0.005, 0.05, 20, Spacing::linear};
        case ScanKind::gamma: return {0.2, 2.0, 19, Spacing::linear};
        default: throw spec_error("no default range for " + std::string(to_string(kind)));
    }
}

/// Atom and pulse of a field-strength point f = E0/E_a.
inline std::pair<AtomicSystem, HalfCyclePulse> field_point(const ScanSpec& s, double f) {
    const AtomicSystem atom(s.kappa, s.charge);
    const double e0 = f * atom.atomic_field();
    if (s.omega) return {atom, HalfCyclePulse(e0, *s.omega)};
    return {atom, pulse_from_gamma(atom, e0, s.gamma.value_or(0.1))};
}

/// Atom and pulse of a Keldysh-parameter point; omega or E0 is held fixed.
inline std::pair<AtomicSystem, HalfCyclePulse> gamma_point(const ScanSpec& s, double g) {
    const AtomicSystem atom(s.kappa, s.charge);
    if (s.omega) return {atom, HalfCyclePulse(*s.omega * s.kappa / g, *s.omega)};
    return {atom, HalfCyclePulse(*s.e0, g * *s.e0 / s.kappa)};
}

/// Atom and pulse of a single-setting run (pmd).
inline std::pair<AtomicSystem, HalfCyclePulse> single_point(const ScanSpec& s) {
    const AtomicSystem atom(s.kappa, s.charge);
    const double g = s.gamma.value_or(0.1);
    if (s.e0 && s.omega) return {atom, HalfCyclePulse(*s.e0, *s.omega)};
    const double e0 = s.e0.value_or(s.omega ? *s.omega * s.kappa / g : 0.02 * atom.atomic_field());
    if (s.omega) return {atom, HalfCyclePulse(e0, *s.omega)};
    return {atom, pulse_from_gamma(atom, e0, g)};
}

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Evaluates fn(i) for i in [0, n) on a small pool; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, unsigned threads = 0) {
    std::vector<T> out(n);
    unsigned w = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    w = static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = fn(i);
    };
    if (w <= 1) {
        work();
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(work);
    pool.clear();
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    void write(std::ostream& os) const {
        os << "# schema=1\n";
        for (const auto& c : comments) os << "# " << c << '\n';
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
            os << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
    }
};

inline std::string csv_escape(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '\n') c = ' ';
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

namespace detail {

inline std::string join_errors(const std::vector<std::string>& e) {
    std::string s;
    for (const auto& m : e) s += (s.empty() ? "" : "; ") + m;
    return csv_escape(s);
}

inline std::vector<std::string> peak_cells(const AtomicSystem& atom, const HalfCyclePulse& pulse,
                                           const std::vector<Variant>& variants, std::vector<std::string>& errors) {
    std::vector<std::string> cells;
    for (Variant v : variants) {
        try {
            const PeakResult r = peak(atom, pulse, v);
            cells.push_back(format_number(r.coulomb_shift));
            cells.push_back(format_number(r.probability));
            cells.push_back(format_number(r.ratio_to_arm));
        } catch (const std::exception& e) {
            errors.push_back(std::string(to_string(v)) + ": " + e.what());
            cells.insert(cells.end(), 3, "nan");
        }
    }
    return cells;
}

inline std::vector<std::string> hqa_cells(const AtomicSystem& atom, const HalfCyclePulse& pulse,
                                          std::vector<std::string>& errors) {
    try {
        const HqaSolution s = shoot(atom, pulse);
        return {format_number(pulse.drift_momentum() - s.p_final), format_number(hqa_probability(atom, pulse, s)),
                format_number(s.t_s.real()), format_number(s.t_s.imag())};
    } catch (const std::exception& e) {
        errors.push_back(std::string("HQA: ") + e.what());
        return {"nan", "nan", "nan", "nan"};
    }
}

}  // namespace detail

/// Field or gamma scan: scan variable, derived E0/omega/gamma, per-variant
/// (shift, peak_probability, ratio_to_arm), analytic estimates, optional HQA.
inline Table scan_table(const ScanSpec& spec) {
    spec.validate();
    const bool by_gamma = spec.kind == ScanKind::gamma;
    const std::vector<double> grid = spec.resolved_range().values();
    Table t;
    t.header = {by_gamma ? "gamma" : "f", "E0", "omega", by_gamma ? "f" : "gamma"};
    const std::vector<Variant> variants = spec.ordered_variants();
    for (Variant v : variants)
        for (const char* c : {"_shift", "_peak_probability", "_ratio_to_arm"})
            t.header.push_back(to_string(v) + std::string(c));
    t.header.insert(t.header.end(), {"estimate_static", "estimate_nonadiabatic", "estimate_trajectory"});
    if (spec.with_hqa) t.header.insert(t.header.end(), {"HQA_shift", "HQA_probability", "HQA_re_ts", "HQA_im_ts"});
    t.header.push_back("error");
    t.comments.push_back(std::string(to_string(spec.kind)) + " kappa=" + format_number(spec.kappa) +
                         " Z=" + format_number(spec.charge));

    t.rows = parallel_map<std::vector<std::string>>(
        grid.size(),
        [&](std::size_t i) {
            std::vector<std::string> errors;
            std::vector<std::string> row{format_number(grid[i])};
            try {
                const auto [atom, pulse] = by_gamma ? gamma_point(spec, grid[i]) : field_point(spec, grid[i]);
                const DerivedParams d = derive(atom, pulse);
                row.insert(row.end(), {format_number(pulse.amplitude()), format_number(pulse.omega()),
                                       format_number(by_gamma ? d.f : d.gamma)});
                const auto cells = detail::peak_cells(atom, pulse, variants, errors);
                row.insert(row.end(), cells.begin(), cells.end());
                row.push_back(format_number(shift_estimate(atom, pulse, ShiftRegime::static_field)));
                row.push_back(format_number(shift_estimate(atom, pulse, ShiftRegime::nonadiabatic)));
                double traj = std::nan("");
                try {
                    traj = shift_estimate(atom, pulse, ShiftRegime::trajectory_integral, ExitModel::nonadiabatic);
                } catch (const std::exception& e) {
                    errors.push_back(std::string("estimate: ") + e.what());
                }
                row.push_back(format_number(traj));
                if (spec.with_hqa) {
                    const auto h = detail::hqa_cells(atom, pulse, errors);
                    row.insert(row.end(), h.begin(), h.end());
                }
            } catch (const std::exception& e) {
                errors.push_back(e.what());
                row.resize(t.header.size() - 1, "nan");
            }
            row.push_back(detail::join_errors(errors));
            return row;
        },
        spec.threads);
    return t;
}

/// HQA scan over the field strength: shooting data next to the S0 reference.
inline Table hqa_table(const ScanSpec& spec) {
    spec.validate();
    const std::vector<double> grid = spec.resolved_range().values();
    Table t;
    t.header = {"f", "E0", "omega", "gamma", "p_final", "shift", "re_ts", "im_ts", "t_exit", "x_exit", "probability",
                "sfa0_probability", "residual", "error"};
    t.comments.push_back("hqa kappa=" + format_number(spec.kappa) + " Z=" + format_number(spec.charge));
    t.rows = parallel_map<std::vector<std::string>>(
        grid.size(),
        [&](std::size_t i) {
            std::vector<std::string> row{format_number(grid[i])};
            std::string err;
            try {
                const auto [atom, pulse] = field_point(spec, grid[i]);
                const DerivedParams d = derive(atom, pulse);
                row.insert(row.end(), {format_number(pulse.amplitude()), format_number(pulse.omega()),
                                       format_number(d.gamma)});
                const HqaSolution s = shoot(atom, pulse);
                const PptReference ref = ppt_reference(atom, pulse);
                row.insert(row.end(), {format_number(s.p_final), format_number(d.p0 - s.p_final),
                                       format_number(s.t_s.real()), format_number(s.t_s.imag()),
                                       format_number(s.t_e), format_number(s.x_e),
                                       format_number(hqa_probability(atom, pulse, s)),
                                       format_number(ref.sfa0_probability(d.p0)),
                                       format_number(detail::norm3(s.residual))});
            } catch (const std::exception& e) {
                err = csv_escape(e.what());
                row.resize(t.header.size() - 1, "nan");
            }
            row.push_back(err);
            return row;
        },
        spec.threads);
    return t;
}

/// Momentum distribution: p, probability per variant, probability normalized
/// to the column maximum.
inline Table pmd_table(const ScanSpec& spec) {
    spec.validate();
    const auto [atom, pulse] = single_point(spec);
    const double p0 = pulse.drift_momentum();
    const double w = sfa0_width(atom, pulse);
    const Range r = spec.range.value_or(Range{std::max(p0 - 3.0 * w, 0.05 * p0), p0 + 3.0 * w, 61, Spacing::linear});
    const std::vector<double> grid = r.values();

    Table t;
    const std::vector<Variant> variants = spec.ordered_variants();
    t.header = {"p"};
    for (Variant v : variants) t.header.push_back(to_string(v) + std::string("_probability"));
    for (Variant v : variants) t.header.push_back(to_string(v) + std::string("_normalized"));
    t.header.push_back("error");
    const DerivedParams d = derive(atom, pulse);
    t.comments.push_back("pmd kappa=" + format_number(spec.kappa) + " Z=" + format_number(spec.charge) +
                         " E0=" + format_number(pulse.amplitude()) + " omega=" + format_number(pulse.omega()) +
                         " gamma=" + format_number(d.gamma));

    struct Point {
        std::vector<double> w;
        std::vector<std::string> errors;
    };
    const auto pts = parallel_map<Point>(
        grid.size(),
        [&](std::size_t i) {
            Point pt;
            for (Variant v : variants) {
                try {
                    pt.w.push_back(amplitude(atom, pulse, grid[i], v).probability);
                } catch (const std::exception& e) {
                    pt.w.push_back(std::nan(""));
                    pt.errors.push_back(std::string(to_string(v)) + ": " + e.what());
                }
            }
            return pt;
        },
        spec.threads);

    std::vector<double> peak(variants.size(), 0.0);
    for (const auto& pt : pts)
        for (std::size_t k = 0; k < peak.size(); ++k)
            if (std::isfinite(pt.w[k])) peak[k] = std::max(peak[k], pt.w[k]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row{format_number(grid[i])};
        for (double v : pts[i].w) row.push_back(format_number(v));
        for (std::size_t k = 0; k < peak.size(); ++k)
            row.push_back(format_number(peak[k] > 0.0 ? pts[i].w[k] / peak[k] : std::nan("")));
        row.push_back(detail::join_errors(pts[i].errors));
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// gnuplot script plotting every numeric column against the first.
inline std::string plot_script(const Table& t, const std::string& csv_path, const std::string& title) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel '" << t.header.front() << "'\n";
    bool first = true;
    for (std::size_t c = 1; c + 1 < t.header.size(); ++c) {
        const std::string& h = t.header[c];
        const bool wanted = h.find("_shift") != std::string::npos || h.rfind("estimate_", 0) == 0 ||
                            h.find("_normalized") != std::string::npos || h == "shift";
        if (!wanted) continue;
        os << (first ? "plot " : ", \\\n     ") << "'" << csv_path << "' using 1:" << c + 1 << " with linespoints";
        first = false;
    }
    if (first) os << "plot '" << csv_path << "' using 1:2 with linespoints";
    os << '\n';
    return os.str();
}

struct CheckRow {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Oracle comparisons at kappa = Z = 1, gamma = 0.1, f = 0.02.
inline std::vector<CheckRow> run_check() {
    std::vector<CheckRow> rows;
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    auto add = [&](std::string name, const std::function<CheckRow()>& fn) {
        try {
            CheckRow r = fn();
            r.name = std::move(name);
            rows.push_back(r);
        } catch (const std::exception&) {
            rows.push_back({std::move(name), std::nan(""), 0.0, 0.0, false});
        }
    };
    const AtomicSystem atom(1.0, 1.0);
    const HalfCyclePulse pulse = pulse_from_gamma(atom, 0.02, 0.1);
    const double p = pulse.drift_momentum() - 0.05;

    add("jet derivatives vs finite differences", [&] {
        const SaddleSolution s = solve_zeroth(atom, pulse, p);
        const ZetaJet a = zeta_jet(atom, pulse, s.x0, s.t0, p, 2);
        const ZetaJet n = finite_difference_jet(atom, pulse, s.x0, s.t0, p, 2);
        // z0 gradients vanish at the saddle and are measured on the Hessian scale
        double worst = std::max(std::abs(a.z0.x - n.z0.x), std::abs(a.z0.t - n.z0.t)) / std::abs(a.z0.xt);
        for (auto [u, v] : {std::pair{a.z0.xx, n.z0.xx}, {a.z0.xt, n.z0.xt}, {a.z0.tt, n.z0.tt},
                            {a.z0_ttt, n.z0_ttt}, {a.z1.x, n.z1.x}, {a.z1.t, n.z1.t}, {a.z1.xx, n.z1.xx},
                            {a.z1.xt, n.z1.xt}, {a.z1.tt, n.z1.tt}, {a.z2qc.x, n.z2qc.x}, {a.z2qc.t, n.z2qc.t},
                            {a.z2qu.x, n.z2qu.x}, {a.z2qu.t, n.z2qu.t}})
            worst = std::max(worst, rel(u, v));
        return CheckRow{"", worst, 0.0, 1e-6, worst < 1e-6};
    });
    add("second-order integrals vs nested quadrature", [&] {
        const SaddleSolution s = solve_zeroth(atom, pulse, p);
        const CoulombIntegrals c = coulomb_integrals(atom, pulse, s.x0, s.t0, p);
        const double e = std::max(rel(nested_riemann_s2(atom, pulse, s.x0, s.t0, p, S2Part::qc).value, c.s2qc),
                                  rel(nested_riemann_s2(atom, pulse, s.x0, s.t0, p, S2Part::qu).value,
                                      cplx{0.0, -1.0} * c.q));
        return CheckRow{"", e, 0.0, 1e-6, e < 1e-6};
    });
    add("zero charge reduces every order to S0", [&] {
        const AtomicSystem sr(1.0, 0.0);
        const double w0 = amplitude(sr, pulse, p, Variant::S0).probability;
        double e = 0.0;
        for (Variant v : {Variant::S1, Variant::S2qc, Variant::S2qu})
            e = std::max(e, std::abs(amplitude(sr, pulse, p, v).probability / w0 - 1.0));
        return CheckRow{"", e, 0.0, 1e-12, e < 1e-12};
    });
    add("S0 distribution vs Gaussian reference", [&] {
        const PptReference ref = ppt_reference(AtomicSystem(1.0, 0.0), pulse);
        double e = 0.0;
        for (double u : {-1.0, 0.0, 1.0}) {
            const double q = ref.p0 + u * ref.width;
            e = std::max(e, std::abs(amplitude(AtomicSystem(1.0, 0.0), pulse, q, Variant::S0).probability /
                                         ref.sfa0_probability(q) -
                                     1.0));
        }
        return CheckRow{"", e, 0.0, 0.03, e < 0.03};
    });
    add("capture factor at gamma = e/2", [&] {
        const double c = capture_factor(atom, euler_e / 2.0);
        return CheckRow{"", c, 1.0, 1e-12, std::abs(c - 1.0) < 1e-12};
    });
    add("third-order term below f/36", [&] {
        const SaddleSolution s = solve_zeroth(atom, pulse, pulse.drift_momentum());
        const double v = third_order_spi_estimate(zeta_jet(atom, pulse, s.x0, s.t0, pulse.drift_momentum(), 0));
        const double bound = derive(atom, pulse).f / 36.0;
        return CheckRow{"", v, bound, 0.0, v < bound};
    });
    add("half-line coordinate factor", [&] {
        const ExactXReport r = exact_x_amplitude(AtomicSystem(1.0, 0.0), pulse, pulse.drift_momentum(), Variant::S0);
        const double target = std::pow(1.0 + std::erf(1.0), 2) * pi / (4.0 * euler_e);
        const double v = r.half_line_ratio();
        return CheckRow{"", v, target, 0.02, std::abs(v / target - 1.0) < 0.02};
    });
    add("HQA instantaneous start", [&] {
        const HqaSolution s = shoot(atom, pulse);
        const double v = std::abs(s.t_s.real());
        return CheckRow{"", v, 0.0, 1e-8, v < 1e-8};
    });
    return rows;
}

inline void print_check(const std::vector<CheckRow>& rows, std::ostream& os) {
    for (const auto& r : rows) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-46s %-4s value=%-13.6g ref=%-11.6g tol=%.3g\n", r.name.c_str(),
                      r.pass ? "PASS" : "FAIL", r.value, r.reference, r.tolerance);
        os << buf;
    }
}

/// Writes the CSV and its plot script (CSV path with .gp appended).
inline void write_outputs(const Table& t, const std::string& path, const std::string& title) {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw spec_error("cannot open '" + path + "' for writing");
    t.write(csv);
    std::ofstream gp(path + ".gp", std::ios::binary);
    if (!gp) throw spec_error("cannot open '" + path + ".gp' for writing");
    gp << plot_script(t, path, title);
}

}  // namespace ccsfa
