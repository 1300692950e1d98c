#include "fractaldim/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "fractaldim/errors.hpp"

namespace fractaldim {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_vector(const Vec& v) {
    std::string out = "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out + "]";
}

std::string fmt_matrix(const Mat& m) {
    std::string out = "[";
    for (int r = 0; r < m.rows(); ++r) {
        if (r) out += ", ";
        out += "[";
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out += ", ";
            out += fmt(m(r, c));
        }
        out += "]";
    }
    return out + "]";
}

json matrix_json(const Mat& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const Vec& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---- config loading ---------------------------------------------------

const json& require_field(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw UsageError("config: missing field '" + key + "' in " + where);
    return *it;
}

double number_field(const json& v, const std::string& where) {
    if (!v.is_number()) throw UsageError("config: field " + where + " must be a number");
    return v.get<double>();
}

Vec parse_vector(const json& v, const std::string& where) {
    if (!v.is_array()) throw UsageError("config: field " + where + " must be an array");
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = number_field(v[i], where);
    return out;
}

Mat parse_matrix(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty())
        throw UsageError("config: field " + where + " must be a non-empty array of rows");
    const size_t rows = v.size();
    size_t cols = 0;
    Mat out;
    for (size_t r = 0; r < rows; ++r) {
        Vec row = parse_vector(v[r], where);
        if (r == 0) {
            cols = static_cast<size_t>(row.size());
            out.resize(static_cast<int>(rows), static_cast<int>(cols));
        } else if (static_cast<size_t>(row.size()) != cols) {
            throw UsageError("config: ragged matrix in " + where);
        }
        out.row(static_cast<int>(r)) = row.transpose();
    }
    return out;
}

}  // namespace

JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!root.is_object()) throw UsageError("config root must be an object");

    JobConfig cfg;
    const json& sys = require_field(root, "system", "config root");
    cfg.system.ambient_dim =
        static_cast<int>(number_field(require_field(sys, "ambient_dim", "system"), "ambient_dim"));
    const json& branches = require_field(sys, "branches", "system");
    if (!branches.is_array() || branches.empty())
        throw UsageError("config: system.branches must be a non-empty array");
    for (size_t i = 0; i < branches.size(); ++i) {
        const json& b = branches[i];
        const std::string where = "branches[" + std::to_string(i) + "]";
        AffineBranch br;
        br.linear = parse_matrix(require_field(b, "linear", where), where + ".linear");
        br.translation = parse_vector(require_field(b, "translation", where), where + ".translation");
        if (b.contains("label")) br.label = b["label"].get<std::string>();
        cfg.system.branches.push_back(std::move(br));
    }

    if (root.contains("params")) {
        const json& p = root["params"];
        if (p.contains("delta")) {
            cfg.params.delta = number_field(p["delta"], "params.delta");
            cfg.delta_given = true;
        }
        if (p.contains("rho")) {
            cfg.params.rho = number_field(p["rho"], "params.rho");
            cfg.rho_given = true;
        }
        if (p.contains("boxdim_estimate") && !p["boxdim_estimate"].is_null())
            cfg.params.boxdim_estimate = number_field(p["boxdim_estimate"], "params.boxdim_estimate");
        if (p.contains("hausdim_estimate") && !p["hausdim_estimate"].is_null())
            cfg.params.hausdim_estimate =
                number_field(p["hausdim_estimate"], "params.hausdim_estimate");
        if (p.contains("sigma_lower_override") && !p["sigma_lower_override"].is_null())
            cfg.params.sigma_lower_override =
                number_field(p["sigma_lower_override"], "params.sigma_lower_override");
        if (p.contains("sigma_upper_override") && !p["sigma_upper_override"].is_null())
            cfg.params.sigma_upper_override =
                number_field(p["sigma_upper_override"], "params.sigma_upper_override");
    }

    if (root.contains("sweep") && !root["sweep"].is_null()) {
        const json& s = root["sweep"];
        SweepConfig sw;
        sw.t_min = number_field(require_field(s, "t_min", "sweep"), "sweep.t_min");
        sw.t_max = number_field(require_field(s, "t_max", "sweep"), "sweep.t_max");
        sw.steps = static_cast<int>(number_field(require_field(s, "steps", "sweep"), "sweep.steps"));
        if (sw.steps < 2) throw UsageError("config: sweep.steps must be at least 2");
        if (!(sw.t_min < sw.t_max)) throw UsageError("config: sweep needs t_min < t_max");
        cfg.sweep = sw;
    }

    if (root.contains("estimator") && !root["estimator"].is_null()) {
        const json& e = root["estimator"];
        EstimatorConfig est;
        if (e.contains("mode")) {
            const std::string mode = e["mode"].get<std::string>();
            if (mode == "chaos_game")
                est.mode = CloudMode::chaos_game;
            else if (mode == "deterministic_cylinders")
                est.mode = CloudMode::deterministic_cylinders;
            else
                throw UsageError("config: estimator.mode must be chaos_game or "
                                 "deterministic_cylinders");
        }
        if (e.contains("samples"))
            est.samples = static_cast<long long>(number_field(e["samples"], "estimator.samples"));
        if (e.contains("depth"))
            est.depth = static_cast<long long>(number_field(e["depth"], "estimator.depth"));
        if (e.contains("seed"))
            est.seed = static_cast<std::uint64_t>(number_field(e["seed"], "estimator.seed"));
        if (e.contains("drop_two_coarsest")) est.drop_two_coarsest = e["drop_two_coarsest"].get<bool>();
        if (e.contains("scales"))
            for (const auto& s : e["scales"]) est.scales.push_back(number_field(s, "estimator.scales"));
        if (e.contains("sigma_depths"))
            for (const auto& s : e["sigma_depths"])
                est.sigma_depths.push_back(static_cast<int>(number_field(s, "estimator.sigma_depths")));
        if (e.contains("track_word"))
            for (const auto& s : e["track_word"])
                est.track_word.push_back(static_cast<int>(number_field(s, "estimator.track_word")));
        cfg.estimator = est;
    }

    if (root.contains("output") && root["output"].contains("dir"))
        cfg.out_dir = root["output"]["dir"].get<std::string>();
    return cfg;
}

// ---- analysis orchestration -------------------------------------------

const Violation* fatal_violation(const ValidationReport& vr) {
    for (const auto& v : vr.violations)
        if (v.kind == "open_condition" || v.kind == "containment") return &v;
    return nullptr;
}

AnalysisBundle analyze_system(const JobConfig& cfg, std::optional<double> sigma_override) {
    AnalysisBundle bundle;
    bundle.validation = validate(cfg.system);
    bundle.stats = derivative_stats(cfg.system);
    const int d = cfg.system.ambient_dim;

    BoundParams p = cfg.params;
    if (sigma_override) {
        p.sigma_lower_override = *sigma_override;
        p.sigma_upper_override = *sigma_override;
    }
    if (!cfg.rho_given) p.rho = std::min(0.1, bundle.stats.inf_Jf / 10.0);
    if (!cfg.delta_given) {
        p.delta = 0.1;
        if (!is_conformal(bundle.stats)) {
            BoundParams provisional = p;
            const double est = p.boxdim_estimate
                                   ? *p.boxdim_estimate
                                   : box_bounds(bundle.stats, provisional, d).upper_clamped;
            p.delta = std::min(0.1, delta_thresholds(bundle.stats, d, est).delta1 / 2.0);
        }
    }
    bundle.params = p;
    bundle.report = full_report(bundle.stats, p, d, bundle.validation.border_gap);
    return bundle;
}

// ---- report rendering ---------------------------------------------------

namespace {

json system_json(const SystemSpec& spec) {
    json branches = json::array();
    for (int i = 0; i < spec.branch_count(); ++i) {
        const auto& br = spec.branches[static_cast<size_t>(i)];
        branches.push_back({{"label", spec.branch_label(i)},
                            {"linear", matrix_json(br.linear)},
                            {"translation", vector_json(br.translation)}});
    }
    return {{"ambient_dim", spec.ambient_dim},
            {"branch_count", spec.branch_count()},
            {"branches", branches}};
}

json validation_json(const ValidationReport& vr) {
    json violations = json::array();
    for (const auto& v : vr.violations) violations.push_back({{"kind", v.kind}, {"detail", v.detail}});
    return {{"regular", vr.regular},
            {"border_gap", vr.border_gap},
            {"volume_reducibility_flag", vr.volume_reducibility_flag},
            {"violations", violations}};
}

json stats_json(const DerivativeStats& st) {
    return {{"per_branch_singular_values", st.per_branch_singular_values},
            {"per_branch_jacobian", st.per_branch_jacobian},
            {"norm_Dg", st.norm_Dg},
            {"min_Jg", st.min_Jg},
            {"norm_Df", st.norm_Df},
            {"inf_Jf", st.inf_Jf},
            {"sup_Jf", st.sup_Jf}};
}

json params_json(const BoundParams& p) {
    return {{"delta", p.delta},
            {"rho", p.rho},
            {"boxdim_estimate", opt_json(p.boxdim_estimate)},
            {"hausdim_estimate", opt_json(p.hausdim_estimate)},
            {"sigma_lower_override", opt_json(p.sigma_lower_override)},
            {"sigma_upper_override", opt_json(p.sigma_upper_override)}};
}

json dim_bounds_json(const DimBounds& b) {
    return {{"upper_raw", b.upper_raw},     {"lower_raw", b.lower_raw},
            {"upper", b.upper_clamped},     {"lower", b.lower_clamped},
            {"upper_vacuous", b.upper_vacuous}, {"lower_vacuous", b.lower_vacuous}};
}

json bounds_json(const BoundsReport& rep) {
    json out = {{"d", rep.d},
                {"delta", rep.delta},
                {"rho", rep.rho},
                {"epsilon", rep.epsilon},
                {"log_epsilon", rep.log_epsilon},
                {"n0", opt_json(rep.n0)},
                {"lambda0", rep.lambdas.lambda0},
                {"lambda1", rep.lambdas.lambda1},
                {"lambda2", rep.lambdas.lambda2},
                {"alpha0", rep.alpha0},
                {"box", dim_bounds_json(rep.box)},
                {"conformal", rep.conformal}};
    out["delta0"] = rep.thresholds ? json(rep.thresholds->delta0) : json(nullptr);
    out["delta1"] = rep.thresholds ? json(rep.thresholds->delta1) : json(nullptr);
    if (rep.sigma) {
        out["sigma"] = {{"lower", rep.sigma->sigma_lower},
                        {"upper", rep.sigma->sigma_upper},
                        {"lower_used", opt_json(rep.sigma_lower_used)},
                        {"upper_used", opt_json(rep.sigma_upper_used)},
                        {"lower_nonpositive", rep.sigma->lower_nonpositive}};
    } else {
        out["sigma"] = nullptr;
    }
    out["alpha_bar"] = opt_json(rep.alpha_bar);
    out["alpha_underbar"] = opt_json(rep.alpha_underbar);
    out["hausdorff"] = rep.hausdorff ? dim_bounds_json(*rep.hausdorff) : json(nullptr);
    out["notes"] = rep.notes;
    return out;
}

void render_system_text(std::ostringstream& os, const SystemSpec& spec) {
    os << "== system ==\n";
    os << "ambient dimension: " << spec.ambient_dim << "\n";
    for (int i = 0; i < spec.branch_count(); ++i) {
        const auto& br = spec.branches[static_cast<size_t>(i)];
        os << "branch " << spec.branch_label(i) << ": linear " << fmt_matrix(br.linear)
           << "  translation " << fmt_vector(br.translation) << "\n";
    }
}

void render_validation_text(std::ostringstream& os, const ValidationReport& vr) {
    os << "== validation ==\n";
    os << "regular: " << (vr.regular ? "true" : "false") << "\n";
    os << "border gap: " << fmt(vr.border_gap) << "\n";
    os << "volume-reducibility flag: " << (vr.volume_reducibility_flag ? "yes" : "no") << "\n";
    for (const auto& v : vr.violations) os << "violation [" << v.kind << "]: " << v.detail << "\n";
}

void render_stats_text(std::ostringstream& os, const DerivativeStats& st) {
    os << "== derivative stats ==\n";
    for (int i = 0; i < st.branch_count(); ++i) {
        os << "branch " << i << ": singular values";
        for (double s : st.per_branch_singular_values[static_cast<size_t>(i)]) os << " " << fmt(s);
        os << "  jacobian " << fmt(st.per_branch_jacobian[static_cast<size_t>(i)]) << "\n";
    }
    os << "norm_Dg: " << fmt(st.norm_Dg) << "\n";
    os << "min_Jg: " << fmt(st.min_Jg) << "\n";
    os << "norm_Df: " << fmt(st.norm_Df) << "\n";
    os << "inf_Jf: " << fmt(st.inf_Jf) << "\n";
    os << "sup_Jf: " << fmt(st.sup_Jf) << "\n";
}

void render_bounds_text(std::ostringstream& os, const BoundsReport& rep, const BoundParams& p) {
    os << "== parameters ==\n";
    os << "delta: " << fmt(rep.delta) << "\n";
    os << "rho: " << fmt(rep.rho) << "\n";
    os << "boxdim_estimate: " << (p.boxdim_estimate ? fmt(*p.boxdim_estimate) : "(box upper bound)")
       << "\n";
    os << "hausdim_estimate: "
       << (p.hausdim_estimate ? fmt(*p.hausdim_estimate) : "(boxdim estimate)") << "\n";
    os << "== bounds ==\n";
    os << "epsilon: " << fmt(rep.epsilon) << "\n";
    os << "log epsilon: " << fmt(rep.log_epsilon) << "\n";
    if (rep.n0)
        os << "n0: " << fmt(*rep.n0) << "\n";
    else
        os << "n0: unavailable (border gap is zero)\n";
    os << "lambda0: " << fmt(rep.lambdas.lambda0) << "\n";
    os << "lambda1: " << fmt(rep.lambdas.lambda1) << "\n";
    os << "lambda2: " << fmt(rep.lambdas.lambda2) << "\n";
    os << "alpha0: " << fmt(rep.alpha0) << "\n";
    os << "box upper: raw " << fmt(rep.box.upper_raw) << "  clamped " << fmt(rep.box.upper_clamped)
       << (rep.box.upper_vacuous ? "  (vacuous)" : "") << "\n";
    os << "box lower: raw " << fmt(rep.box.lower_raw) << "  clamped " << fmt(rep.box.lower_clamped)
       << (rep.box.lower_vacuous ? "  (vacuous)" : "") << "\n";
    if (rep.thresholds) {
        os << "delta0: " << fmt(rep.thresholds->delta0) << "\n";
        os << "delta1: " << fmt(rep.thresholds->delta1) << "\n";
    } else {
        os << "delta0: skipped (conformal)\ndelta1: skipped (conformal)\n";
    }
    if (rep.sigma) {
        os << "sigma interval: [" << fmt(rep.sigma->sigma_lower) << ", "
           << fmt(rep.sigma->sigma_upper) << "]"
           << (rep.sigma->lower_nonpositive ? "  (lower endpoint not positive)" : "") << "\n";
        os << "sigma used: [" << fmt(*rep.sigma_lower_used) << ", " << fmt(*rep.sigma_upper_used)
           << "]\n";
        os << "alpha_bar: " << fmt(*rep.alpha_bar) << "\n";
        os << "alpha_underbar: " << fmt(*rep.alpha_underbar) << "\n";
        os << "hausdorff upper: raw " << fmt(rep.hausdorff->upper_raw) << "  clamped "
           << fmt(rep.hausdorff->upper_clamped) << (rep.hausdorff->upper_vacuous ? "  (vacuous)" : "")
           << "\n";
        os << "hausdorff lower: raw " << fmt(rep.hausdorff->lower_raw) << "  clamped "
           << fmt(rep.hausdorff->lower_clamped) << (rep.hausdorff->lower_vacuous ? "  (vacuous)" : "")
           << "\n";
    } else {
        os << "sigma interval: skipped (conformal)\n";
        os << "hausdorff bounds: skipped (conformal)\n";
    }
    if (!rep.notes.empty()) {
        os << "== notes ==\n";
        for (const auto& n : rep.notes) os << "- " << n << "\n";
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write output file: " + path.string());
    out << content;
}

std::filesystem::path prepare_out_dir(const JobConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory: " + dir.string());
    return dir;
}

// ---- sweep artifacts ----------------------------------------------------

std::string sweep_csv(const std::vector<std::array<double, 3>>& rows) {
    std::string out = "sigma,alpha,d_lower\n";
    for (const auto& r : rows) out += fmt(r[0]) + "," + fmt(r[1]) + "," + fmt(r[2]) + "\n";
    return out;
}

std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string sweep_svg(const std::vector<std::array<double, 3>>& rows) {
    constexpr double W = 640, H = 420, ml = 78, mr = 24, mt = 24, mb = 58;
    double tmin = rows.front()[0], tmax = rows.back()[0];
    double vmin = rows.front()[2], vmax = rows.front()[2];
    for (const auto& r : rows) {
        vmin = std::min(vmin, r[2]);
        vmax = std::max(vmax, r[2]);
    }
    if (!(vmax > vmin)) {
        vmin -= 0.5;
        vmax += 0.5;
    }
    auto X = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (W - ml - mr); };
    auto Y = [&](double v) { return H - mb - (v - vmin) / (vmax - vmin) * (H - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
          "viewBox=\"0 0 640 420\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << svg_coord(ml) << "\" y1=\"" << svg_coord(H - mb) << "\" x2=\""
       << svg_coord(W - mr) << "\" y2=\"" << svg_coord(H - mb)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << svg_coord(ml) << "\" y1=\"" << svg_coord(mt) << "\" x2=\""
       << svg_coord(ml) << "\" y2=\"" << svg_coord(H - mb)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // ticks
    for (int i = 0; i <= 4; ++i) {
        const double t = tmin + (tmax - tmin) * i / 4.0;
        const double v = vmin + (vmax - vmin) * i / 4.0;
        char lab[32];
        os << "<line x1=\"" << svg_coord(X(t)) << "\" y1=\"" << svg_coord(H - mb) << "\" x2=\""
           << svg_coord(X(t)) << "\" y2=\"" << svg_coord(H - mb + 5) << "\" stroke=\"black\"/>\n";
        std::snprintf(lab, sizeof(lab), "%.4g", t);
        os << "<text x=\"" << svg_coord(X(t)) << "\" y=\"" << svg_coord(H - mb + 20)
           << "\" font-size=\"12\" text-anchor=\"middle\">" << lab << "</text>\n";
        os << "<line x1=\"" << svg_coord(ml - 5) << "\" y1=\"" << svg_coord(Y(v)) << "\" x2=\""
           << svg_coord(ml) << "\" y2=\"" << svg_coord(Y(v)) << "\" stroke=\"black\"/>\n";
        std::snprintf(lab, sizeof(lab), "%.4g", v);
        os << "<text x=\"" << svg_coord(ml - 8) << "\" y=\"" << svg_coord(Y(v) + 4)
           << "\" font-size=\"12\" text-anchor=\"end\">" << lab << "</text>\n";
    }
    // axis labels
    os << "<text x=\"" << svg_coord((ml + W - mr) / 2) << "\" y=\"" << svg_coord(H - 12)
       << "\" font-size=\"14\" text-anchor=\"middle\">Σ</text>\n";
    os << "<text x=\"18\" y=\"" << svg_coord((mt + H - mb) / 2)
       << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << svg_coord((mt + H - mb) / 2) << ")\">L(Σ)</text>\n";
    // the curve itself
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i) os << " ";
        os << svg_coord(X(rows[i][0])) << "," << svg_coord(Y(rows[i][2]));
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

int grade_validation(const ValidationReport& vr, const char* command) {
    if (const Violation* v = fatal_violation(vr)) {
        std::cerr << command << ": validation failed [" << v->kind << "]: " << v->detail << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

// ---- commands -----------------------------------------------------------

int cmd_analyze(const JobConfig& cfg, std::optional<double> sigma_override) {
    const auto dir = prepare_out_dir(cfg);
    const ValidationReport vr = validate(cfg.system);

    if (const Violation* fatal = fatal_violation(vr)) {
        std::ostringstream os;
        render_system_text(os, cfg.system);
        render_validation_text(os, vr);
        os << "system is not regular: bounds skipped\n";
        json doc = {{"command", "analyze"},
                    {"system", system_json(cfg.system)},
                    {"validation", validation_json(vr)}};
        write_file(dir / "report.txt", os.str());
        write_file(dir / "report.json", doc.dump(2) + "\n");
        std::cout << os.str();
        std::cerr << "analyze: validation failed [" << fatal->kind << "]: " << fatal->detail << "\n";
        return 2;
    }

    const AnalysisBundle bundle = analyze_system(cfg, sigma_override);
    std::ostringstream os;
    render_system_text(os, cfg.system);
    render_validation_text(os, bundle.validation);
    render_stats_text(os, bundle.stats);
    render_bounds_text(os, bundle.report, bundle.params);

    json doc = {{"command", "analyze"},
                {"system", system_json(cfg.system)},
                {"validation", validation_json(bundle.validation)},
                {"derivative_stats", stats_json(bundle.stats)},
                {"params", params_json(bundle.params)},
                {"bounds", bounds_json(bundle.report)}};
    write_file(dir / "report.txt", os.str());
    write_file(dir / "report.json", doc.dump(2) + "\n");
    std::cout << os.str();
    return 0;
}

int cmd_sweep(const JobConfig& cfg, std::optional<double> sigma_override) {
    if (!cfg.sweep) throw UsageError("sweep requires a 'sweep' block in the config");
    const auto dir = prepare_out_dir(cfg);
    const AnalysisBundle bundle = analyze_system(cfg, sigma_override);
    if (int rc = grade_validation(bundle.validation, "sweep")) return rc;

    const SweepConfig& sw = *cfg.sweep;
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(sw.steps));
    for (int i = 0; i < sw.steps; ++i)
        grid.push_back(sw.t_min + (sw.t_max - sw.t_min) * i / (sw.steps - 1));

    const int d = cfg.system.ambient_dim;
    const auto curve = dimension_curve(bundle.stats, bundle.params, d, grid);
    const auto roots = alpha_curve(bundle.stats, grid, 1e-12);

    std::vector<std::array<double, 3>> rows;
    rows.reserve(curve.size());
    for (size_t i = 0; i < curve.size(); ++i)
        rows.push_back({curve[i].first, roots[i].alpha, curve[i].second});

    write_file(dir / "sweep.csv", sweep_csv(rows));
    write_file(dir / "sweep.svg", sweep_svg(rows));
    std::cout << "sweep: " << rows.size() << " rows over sigma [" << fmt(sw.t_min) << ", "
              << fmt(sw.t_max) << "], d_lower from " << fmt(rows.front()[2]) << " down to "
              << fmt(rows.back()[2]) << "\n";
    return 0;
}

int cmd_boxdim(const JobConfig& cfg) {
    if (!cfg.estimator) throw UsageError("boxdim requires an 'estimator' block in the config");
    if (cfg.estimator->scales.empty())
        throw UsageError("boxdim requires estimator.scales to be non-empty");
    const auto dir = prepare_out_dir(cfg);
    const AnalysisBundle bundle = analyze_system(cfg, std::nullopt);
    if (int rc = grade_validation(bundle.validation, "boxdim")) return rc;

    const EstimatorConfig& est = *cfg.estimator;
    const long long budget =
        est.mode == CloudMode::chaos_game ? est.samples : est.depth;
    const PointCloud cloud = generate(cfg.system, est.mode, budget, est.seed);
    const GridEstimate grid = box_count(cloud, est.scales, est.drop_two_coarsest);

    const double lo = bundle.report.box.lower_clamped, hi = bundle.report.box.upper_clamped;
    const bool pass = grid.slope >= lo - 0.05 && grid.slope <= hi + 0.05;

    std::ostringstream os;
    os << "== box-counting estimate ==\n";
    os << "mode: "
       << (est.mode == CloudMode::chaos_game ? "chaos_game" : "deterministic_cylinders") << "\n";
    os << (est.mode == CloudMode::chaos_game ? "samples: " : "depth: ") << budget << "\n";
    os << "seed: " << est.seed << "\n";
    os << "points: " << cloud.sample_count << "\n";
    for (size_t i = 0; i < grid.scales.size(); ++i)
        os << "scale " << fmt(grid.scales[i]) << ": count " << grid.counts[i] << "\n";
    os << "slope: " << fmt(grid.slope) << "\n";
    os << "slope stderr: " << fmt(grid.slope_stderr) << "\n";
    os << "r_squared: " << fmt(grid.r_squared) << "\n";
    os << "clamped bounds: [" << fmt(lo) << ", " << fmt(hi) << "]\n";
    os << "sandwich band: [" << fmt(lo - 0.05) << ", " << fmt(hi + 0.05) << "]\n";
    os << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";

    json doc = {{"command", "boxdim"},
                {"mode", est.mode == CloudMode::chaos_game ? "chaos_game" : "deterministic_cylinders"},
                {"samples_or_depth", budget},
                {"seed", est.seed},
                {"points", cloud.sample_count},
                {"estimate",
                 {{"scales", grid.scales},
                  {"counts", grid.counts},
                  {"slope", grid.slope},
                  {"slope_stderr", grid.slope_stderr},
                  {"r_squared", grid.r_squared}}},
                {"bounds", {{"lower", lo}, {"upper", hi}}},
                {"band", {lo - 0.05, hi + 0.05}},
                {"verdict", pass ? "PASS" : "FAIL"}};

    if (!est.sigma_depths.empty()) {
        const std::vector<int> word = est.track_word.empty() ? std::vector<int>{0} : est.track_word;
        const SigmaEstimate se = estimate_sigma(cfg.system, bundle.report.epsilon, word,
                                                est.sigma_depths, est.samples, est.seed);
        os << "== sigma decay estimate ==\n";
        json per_depth = json::array();
        for (const auto& [n, frac] : se.per_depth) {
            os << "depth " << n << ": covered fraction " << fmt(frac) << "\n";
            per_depth.push_back({{"depth", n}, {"fraction", frac}});
        }
        os << "decay rate: " << fmt(se.rate) << "\n";
        doc["sigma_estimate"] = {{"per_depth", per_depth}, {"rate", se.rate}};
        if (bundle.report.sigma) {
            os << "sigma interval: [" << fmt(bundle.report.sigma->sigma_lower) << ", "
               << fmt(bundle.report.sigma->sigma_upper) << "]\n";
            doc["sigma_interval"] = {{"lower", bundle.report.sigma->sigma_lower},
                                     {"upper", bundle.report.sigma->sigma_upper}};
        }
    }

    write_file(dir / "boxdim.txt", os.str());
    write_file(dir / "boxdim.json", doc.dump(2) + "\n");
    std::cout << os.str();
    return 0;
}

int cmd_invert(const JobConfig& cfg, std::optional<double> sigma_override, double target) {
    const auto dir = prepare_out_dir(cfg);
    const AnalysisBundle bundle = analyze_system(cfg, sigma_override);
    if (int rc = grade_validation(bundle.validation, "invert")) return rc;

    const int d = cfg.system.ambient_dim;
    const double sigma = invert_dimension(bundle.stats, bundle.params, d, target, 1e-10);
    const auto curve = dimension_curve(bundle.stats, bundle.params, d, {sigma});
    const double residual = std::abs(curve.front().second - target);

    std::ostringstream os;
    os << "== invert ==\n";
    os << "target: " << fmt(target) << "\n";
    os << "sigma: " << fmt(sigma) << "\n";
    os << "residual: " << fmt(residual) << "\n";
    json doc = {{"command", "invert"},
                {"target", target},
                {"sigma", sigma},
                {"residual", residual}};
    write_file(dir / "invert.txt", os.str());
    write_file(dir / "invert.json", doc.dump(2) + "\n");
    std::cout << os.str();
    return 0;
}

// ---- entry point ----------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"rigorous dimension bounds for affine iterated function systems"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    double sigma_override = 0.0, target = 0.0;

    struct SubState {
        CLI::App* sub = nullptr;
        CLI::Option* config = nullptr;
        CLI::Option* out = nullptr;
        CLI::Option* sigma = nullptr;
        CLI::Option* target_opt = nullptr;
    };
    std::vector<SubState> subs;
    for (const char* name : {"analyze", "sweep", "boxdim", "invert"}) {
        SubState st;
        st.sub = app.add_subcommand(name);
        st.config = st.sub->add_option("--config", config_path, "path to the JSON job config")
                        ->required();
        st.out = st.sub->add_option("--out", out_dir, "output directory (overrides config)");
        st.sigma = st.sub->add_option("--sigma-override", sigma_override,
                                      "use this value for both sigma endpoints");
        if (std::string(name) == "invert")
            st.target_opt =
                st.sub->add_option("--target", target, "dimension value to invert")->required();
        subs.push_back(st);
    }

    try {
        std::vector<std::string> argv_copy = args;
        std::reverse(argv_copy.begin(), argv_copy.end());
        app.parse(argv_copy);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        JobConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;

        for (const auto& st : subs) {
            if (!st.sub->parsed()) continue;
            std::optional<double> so;
            if (st.sigma->count() > 0) so = sigma_override;
            const std::string name = st.sub->get_name();
            if (name == "analyze") return cmd_analyze(cfg, so);
            if (name == "sweep") return cmd_sweep(cfg, so);
            if (name == "boxdim") return cmd_boxdim(cfg);
            if (name == "invert") return cmd_invert(cfg, so, target);
        }
        std::cerr << "usage error: no command selected\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_validation() ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace fractaldim
