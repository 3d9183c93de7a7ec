#include "fermigibbs/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "fermigibbs/analysis.hpp"

namespace fg::io {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

double get_number(const json& j, const std::string& key, const std::string& path, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) field_error(path + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& path, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) field_error(path + key, "expected an integer");
    return v.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key, const std::string& path, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) field_error(path + key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) field_error(path + key, "expected a string");
    return v.get<std::string>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& path) {
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) field_error(path + k, "unknown field");
}

template <typename T, typename Get>
std::vector<T> get_array(const json& j, const std::string& key, const std::string& path, Get get) {
    std::vector<T> out;
    if (!j.contains(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array()) field_error(path + key, "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get(v[i], path + key + "[" + std::to_string(i) + "]"));
    return out;
}

ModelConfig parse_model(const json& j) {
    if (!j.is_object()) field_error("model", "expected an object");
    reject_unknown(j, {"type", "epsilon", "n_modes", "hopping", "mu", "U", "dims", "seed", "scale", "r0", "h_imag", "terms"},
                   "model.");
    ModelConfig m;
    m.type = get_string(j, "type", "model.", m.type);
    static const std::set<std::string> types{"single_mode", "quadratic", "random_quadratic", "chain", "hubbard", "custom"};
    if (!types.count(m.type)) field_error("model.type", "unknown model type '" + m.type + "'");
    m.epsilon = get_number(j, "epsilon", "model.", m.epsilon);
    m.n_modes = get_int(j, "n_modes", "model.", m.n_modes);
    m.hopping = get_number(j, "hopping", "model.", m.hopping);
    m.mu = get_number(j, "mu", "model.", m.mu);
    m.U = get_number(j, "U", "model.", m.U);
    m.seed = get_u64(j, "seed", "model.", m.seed);
    m.scale = get_number(j, "scale", "model.", m.scale);
    m.r0 = get_number(j, "r0", "model.", m.r0);
    if (j.contains("dims")) {
        m.dims = get_array<int>(j, "dims", "model.", [](const json& v, const std::string& p) {
            if (!v.is_number_integer() || v.get<int>() < 1) field_error(p, "expected a positive integer");
            return v.get<int>();
        });
        if (m.dims.empty()) field_error("model.dims", "must be nonempty");
    }
    if (m.n_modes < 1) field_error("model.n_modes", "must be positive, got " + std::to_string(m.n_modes));
    if (m.U < 0.0) field_error("model.U", "must be nonnegative");
    if (!(m.r0 > 0.0)) field_error("model.r0", "must be positive");
    if (j.contains("h_imag")) {
        const json& h = j.at("h_imag");
        if (!h.is_array() || h.empty()) field_error("model.h_imag", "expected a square array of arrays");
        const auto D = static_cast<Eigen::Index>(h.size());
        m.h_imag.resize(D, D);
        for (Eigen::Index r = 0; r < D; ++r) {
            const std::string p = "model.h_imag[" + std::to_string(r) + "]";
            if (!h[r].is_array() || static_cast<Eigen::Index>(h[r].size()) != D) field_error(p, "row length mismatch");
            for (Eigen::Index c = 0; c < D; ++c) {
                if (!h[r][c].is_number()) field_error(p + "[" + std::to_string(c) + "]", "expected a number");
                m.h_imag(r, c) = h[r][c].get<double>();
            }
        }
        if (D % 2) field_error("model.h_imag", "dimension must be even (2 Majoranas per mode)");
        m.n_modes = static_cast<int>(D / 2);
    }
    if (j.contains("terms")) {
        const json& t = j.at("terms");
        if (!t.is_array()) field_error("model.terms", "expected an array");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string p = "model.terms[" + std::to_string(i) + "].";
            if (!t[i].is_object()) field_error(p.substr(0, p.size() - 1), "expected an object");
            reject_unknown(t[i], {"word", "re", "im"}, p);
            const auto word = get_array<int>(t[i], "word", p, [](const json& v, const std::string& q) {
                if (!v.is_number_integer() || v.get<int>() < 0) field_error(q, "expected a Majorana index >= 0");
                return v.get<int>();
            });
            m.terms.push_back({word, cd(get_number(t[i], "re", p, 0.0), get_number(t[i], "im", p, 0.0))});
        }
    }
    if (m.type == "quadratic" && m.h_imag.size() == 0) field_error("model.h_imag", "required for quadratic models");
    if (m.type == "custom" && m.terms.empty()) field_error("model.terms", "required for custom models");
    return m;
}

Tolerances parse_tolerances(const json& j) {
    if (!j.is_object()) field_error("tolerances", "expected an object");
    Tolerances t;
    std::vector<std::pair<std::string, double*>> fields{
        {"algebra", &t.algebra},         {"stationarity", &t.stationarity},
        {"kms", &t.kms},                 {"negative_control", &t.negative_control},
        {"spectrum", &t.spectrum},       {"hermiticity", &t.hermiticity},
        {"route", &t.route},             {"free_parent", &t.free_parent},
        {"closed_form_rel", &t.closed_form_rel}, {"decoupling", &t.decoupling},
        {"mixing_slack", &t.mixing_slack}, {"rate", &t.rate},
        {"overlap", &t.overlap},         {"expectation", &t.expectation},
        {"norm", &t.norm},               {"dissipator_dual", &t.dissipator_dual},
        {"coherent_dual", &t.coherent_dual}, {"kernel", &t.kernel},
        {"b1_hat_zero", &t.b1_hat_zero}};
    std::set<std::string> known;
    for (auto& [k, p] : fields) known.insert(k);
    reject_unknown(j, known, "tolerances.");
    for (auto& [k, p] : fields) {
        *p = get_number(j, k, "tolerances.", *p);
        if (!(*p > 0.0)) field_error("tolerances." + k, "must be positive");
    }
    return t;
}

void check_config(const ExperimentConfig& cfg) {
    if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) {
        std::ostringstream os;
        os << "must be positive and finite, got " << cfg.beta;
        field_error("beta", os.str());
    }
    if (cfg.max_modes < 1 || cfg.max_modes > kMaxModes)
        field_error("max_modes", "must lie in [1, " + std::to_string(kMaxModes) + "]");
    static const std::set<std::string> methods{"closed", "quadrature", "both"};
    if (!methods.count(cfg.method)) field_error("method", "expected closed, quadrature or both");
    if (cfg.coherent != "bohr_product" && cfg.coherent != "double_quadrature")
        field_error("coherent", "expected bohr_product or double_quadrature");
    for (double u : cfg.U_grid)
        if (!(u >= 0.0)) field_error("U_grid", "entries must be nonnegative");
    check_capacity(model_mode_count(cfg.model), cfg.max_modes);
}

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ":" + line_col(text, e.byte) + ": parse error: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(source + ": top level must be an object");
    reject_unknown(j, {"model", "beta", "U_grid", "jumps", "method", "coherent", "tolerances", "out_dir", "seed", "max_modes"},
                   "");
    ExperimentConfig cfg;
    if (j.contains("model")) cfg.model = parse_model(j.at("model"));
    cfg.beta = get_number(j, "beta", "", cfg.beta);
    if (j.contains("U_grid")) {
        cfg.U_grid = get_array<double>(j, "U_grid", "", [](const json& v, const std::string& p) {
            if (!v.is_number()) field_error(p, "expected a number");
            return v.get<double>();
        });
        if (cfg.U_grid.empty()) field_error("U_grid", "must be nonempty");
    }
    cfg.jumps = get_array<int>(j, "jumps", "", [](const json& v, const std::string& p) {
        if (!v.is_number_integer() || v.get<int>() < 0) field_error(p, "expected a Majorana index >= 0");
        return v.get<int>();
    });
    cfg.method = get_string(j, "method", "", cfg.method);
    cfg.coherent = get_string(j, "coherent", "", cfg.coherent);
    if (j.contains("tolerances")) cfg.tol = parse_tolerances(j.at("tolerances"));
    cfg.out_dir = get_string(j, "out_dir", "", cfg.out_dir);
    cfg.seed = get_u64(j, "seed", "", cfg.seed);
    cfg.max_modes = get_int(j, "max_modes", "", cfg.max_modes);
    check_config(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

json to_json(const ExperimentConfig& cfg) {
    json m{{"type", cfg.model.type},   {"epsilon", cfg.model.epsilon}, {"n_modes", cfg.model.n_modes},
           {"hopping", cfg.model.hopping}, {"mu", cfg.model.mu},       {"U", cfg.model.U},
           {"dims", cfg.model.dims},   {"seed", cfg.model.seed},       {"scale", cfg.model.scale},
           {"r0", cfg.model.r0}};
    if (cfg.model.h_imag.size()) {
        json h = json::array();
        for (Eigen::Index r = 0; r < cfg.model.h_imag.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < cfg.model.h_imag.cols(); ++c) row.push_back(cfg.model.h_imag(r, c));
            h.push_back(row);
        }
        m["h_imag"] = h;
    }
    if (!cfg.model.terms.empty()) {
        json t = json::array();
        for (const auto& [w, c] : cfg.model.terms) t.push_back({{"word", w}, {"re", c.real()}, {"im", c.imag()}});
        m["terms"] = t;
    }
    const Tolerances& t = cfg.tol;
    json tol{{"algebra", t.algebra},       {"stationarity", t.stationarity}, {"kms", t.kms},
             {"negative_control", t.negative_control}, {"spectrum", t.spectrum}, {"hermiticity", t.hermiticity},
             {"route", t.route},           {"free_parent", t.free_parent},   {"closed_form_rel", t.closed_form_rel},
             {"decoupling", t.decoupling}, {"mixing_slack", t.mixing_slack}, {"rate", t.rate},
             {"overlap", t.overlap},       {"expectation", t.expectation},   {"norm", t.norm},
             {"dissipator_dual", t.dissipator_dual}, {"coherent_dual", t.coherent_dual}, {"kernel", t.kernel},
             {"b1_hat_zero", t.b1_hat_zero}};
    return json{{"model", m},          {"beta", cfg.beta},     {"U_grid", cfg.U_grid},
                {"jumps", cfg.jumps},  {"method", cfg.method}, {"coherent", cfg.coherent},
                {"tolerances", tol},   {"seed", cfg.seed},     {"max_modes", cfg.max_modes}};
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string s = to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

int model_mode_count(const ModelConfig& m) {
    if (m.type == "single_mode") return 1;
    if (m.type == "hubbard") {
        int sites = 1;
        for (int d : m.dims) sites *= d;
        return 2 * sites;
    }
    if (m.type == "quadratic") return static_cast<int>(m.h_imag.rows() / 2);
    return m.n_modes;
}

Model build_model(const ModelConfig& m, int max_modes) { return build_model_with_U(m, m.U, max_modes); }

Model build_model_with_U(const ModelConfig& m, double U, int max_modes) {
    check_capacity(model_mode_count(m), max_modes);
    if (m.type == "single_mode") return single_mode_model(m.epsilon);
    if (m.type == "hubbard") return fermi_hubbard_model(m.dims, U, m.mu, m.hopping);
    if (m.type == "chain") return spinless_chain_model(m.n_modes, m.hopping, m.mu, U);
    if (m.type == "random_quadratic") return random_quadratic_chain(m.n_modes, m.seed, m.scale);
    const ModeLayout layout = ModeLayout::chain(m.n_modes, m.r0);
    if (m.type == "quadratic") {
        const CMat h = cd(0.0, 1.0) * m.h_imag.cast<cd>();
        return make_model(build_quadratic(h, layout), InteractionSpec{MajoranaPolynomial(m.n_modes), 0.0, m.r0},
                          "quadratic n=" + std::to_string(m.n_modes));
    }
    // custom: U rescales the degree >= 4 part relative to the configured strength
    MajoranaPolynomial p(m.n_modes);
    const double ratio = m.U > 0.0 ? U / m.U : 1.0;
    for (const auto& [word, c] : m.terms) {
        for (int k : word)
            if (k >= 2 * m.n_modes) field_error("model.terms", "Majorana index " + std::to_string(k) + " out of range");
        MajoranaPolynomial w(m.n_modes);
        w.add_word(word, word.size() > 2 ? ratio * c : c);
        p += w;
    }
    return model_from_polynomial(p, layout, U, "custom n=" + std::to_string(m.n_modes));
}

bool RunReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

json RunReport::to_json(const ExperimentConfig& cfg) const {
    json checks_json = json::array();
    for (const auto& c : checks)
        checks_json.push_back(
            {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"relation", c.relation}, {"tolerance", c.tolerance}});
    return json{{"subcommand", subcommand},
                {"provenance",
                 {{"config_hash", config_hash(cfg)},
                  {"fermigibbs", kVersion},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)}}},
                {"config", io::to_json(cfg)},
                {"checks", checks_json},
                {"all_passed", all_passed()},
                {"results", payload}};
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s{"build", "gap", "mix", "sweep", "correlations", "kernels", "validate"};
    return s;
}

namespace {

struct Runner {
    const ExperimentConfig& cfg;
    RunReport report;
    std::filesystem::path out;

    void check(const std::string& name, double value, double tol, const std::string& relation = "<=") {
        const bool ok = std::isfinite(value) && (relation == "<=" ? value <= tol : value >= tol);
        report.checks.push_back({name, ok, value, tol, relation});
    }

    LindbladOptions options(DissipatorMethod d) const {
        LindbladOptions o;
        o.dissipator = d;
        o.coherent = cfg.coherent == "double_quadrature" ? CoherentMethod::DoubleQuadrature : CoherentMethod::BohrProduct;
        o.jumps = cfg.jumps;
        return o;
    }
    LindbladOptions options() const {
        return options(cfg.method == "quadrature" ? DissipatorMethod::Quadrature : DissipatorMethod::ClosedForm);
    }

    void write_csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows) {
        std::ofstream f(out / name);
        f << header << '\n';
        for (const auto& r : rows) f << r << '\n';
    }

    static std::string fmt(double x) {
        std::ostringstream os;
        os << std::setprecision(17) << x;
        return os.str();
    }

    static std::vector<double> sorted_desc(const RVec& v) {
        std::vector<double> s(v.data(), v.data() + v.size());
        std::sort(s.rbegin(), s.rend());
        return s;
    }

    static json gap_json(const GapReport& g) {
        return {{"sector", sector_name(g.sector)}, {"top", g.top}, {"second", g.second}, {"gap", g.gap},
                {"degenerate", g.degenerate}};
    }

    void build() {
        const Model model = build_model(cfg.model, cfg.max_modes);
        const int n = model.n_modes();
        const LindbladModel m = prepare_lindblad(model.dense_H(), cfg.beta, options());
        const LindbladSuperops ops = assemble_lindbladian(m);
        const ParentHamiltonian ph = build_parent_hamiltonian(model, cfg.beta, options());
        check("stationarity", ops.L.apply(m.gibbs.sigma).norm(), cfg.tol.stationarity);
        check("parent_hermiticity", (ph.total - ph.total.adjoint()).norm(), cfg.tol.hermiticity);
        std::vector<std::string> rows;
        auto dump = [&](const std::string& op, const std::string& sector, const std::vector<double>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) rows.push_back(op + "," + sector + "," + std::to_string(i) + "," + fmt(v[i]));
        };
        dump("L_dagger", "even", sorted_desc(lindbladian_spectrum(ops.L_dagger, Sector::Even)));
        dump("L_dagger", "odd", sorted_desc(lindbladian_spectrum(ops.L_dagger, Sector::Odd)));
        const SectorSpectrum ss = sector_spectrum(ph.total, n);
        dump("parent", "even", sorted_desc(ss.even_eigenvalues));
        dump("parent", "odd", sorted_desc(ss.odd_eigenvalues));
        write_csv("spectra.csv", "operator,sector,index,eigenvalue", rows);
        report.payload = {{"model", model.name},
                          {"n_modes", n},
                          {"beta", cfg.beta},
                          {"parent_parts_norm",
                           {{"C_free", ph.C_free.norm()}, {"C_int", ph.C_int.norm()}, {"D_free", ph.D_free.norm()},
                            {"D_int", ph.D_int.norm()}}},
                          {"coherent_term_norm", m.B.norm()},
                          {"calibrated_C", calibrate_single_mode_constant(1.0)}};
    }

    void gap() {
        const Model model = build_model(cfg.model, cfg.max_modes);
        const int n = model.n_modes();
        const LindbladModel m = prepare_lindblad(model.dense_H(), cfg.beta, options());
        const LindbladSuperops ops = assemble_lindbladian(m);
        const CMat parent = phi_tilde(ops.L_dagger, m.gibbs);
        const GapReport full = spectral_gap(parent, n, Sector::Full);
        const GapReport even = spectral_gap(parent, n, Sector::Even);
        const GapReport odd = spectral_gap(parent, n, Sector::Odd);
        const GapReport leven = lindbladian_gap(ops.L_dagger, Sector::Even);
        check("spectrum_correspondence",
              spectrum_distance(sector_spectrum(parent, n).even_eigenvalues, lindbladian_spectrum(ops.L_dagger, Sector::Even)),
              cfg.tol.spectrum);
        check("gap_ordering_excess", full.gap - even.gap, 1e-9);
        check("top_eigenvalue_abs", std::abs(full.top), cfg.tol.route);
        check("top_nondegenerate", full.degenerate ? 0.0 : 1.0, 1.0, ">=");
        report.payload = {{"model", model.name},
                          {"parent", {gap_json(full), gap_json(even), gap_json(odd)}},
                          {"lindbladian_even", gap_json(leven)}};
    }

    void mix() {
        const Model model = build_model(cfg.model, cfg.max_modes);
        const LindbladModel m = prepare_lindblad(model.dense_H(), cfg.beta, options());
        const LindbladSuperops ops = assemble_lindbladian(m);
        const double g = lindbladian_gap(ops.L_dagger, Sector::Even).gap;
        const MixingReport r = mixing_bound_verify(ops, m.gibbs, g, cfg.seed, 10, cfg.tol.mixing_slack);
        const MixingEstimate est = mixing_time_empirical(ops.L, m.gibbs, 0.1, cfg.seed);
        check("mixing_state_bound_violation", r.max_state_violation, cfg.tol.mixing_slack);
        check("mixing_observable_bound_violation", r.max_observable_violation, cfg.tol.mixing_slack);
        check("empirical_rate_minus_gap", r.empirical_rate - g, -cfg.tol.rate, ">=");
        report.payload = {{"model", model.name},
                          {"gap_even", g},
                          {"sigma_min", r.sigma_min},
                          {"n_states", r.n_states},
                          {"n_observables", r.n_observables},
                          {"times", r.times},
                          {"empirical_rate", r.empirical_rate},
                          {"mixing_time_eps_0.1", {{"t_mix", est.t_mix}, {"converged", est.converged}}}};
    }

    void sweep() {
        std::vector<double> grid = cfg.U_grid.empty() ? std::vector<double>{cfg.model.U} : cfg.U_grid;
        const auto family = [&](double U) { return build_model_with_U(cfg.model, U, cfg.max_modes); };
        const SweepResult res = gap_vs_U_sweep(family, cfg.beta, grid, options(), true);
        std::vector<std::string> rows;
        json pts = json::array();
        for (const auto& p : res.points) {
            const double ratio = p.U > 0.0 ? p.v_parent_norm / p.U : std::nan("");
            rows.push_back(fmt(p.beta) + "," + fmt(p.U) + "," + fmt(p.top) + "," + fmt(p.gap) + "," +
                           (p.degenerate ? "1" : "0") + "," + fmt(p.v_parent_norm) + "," + fmt(ratio) + "," +
                           fmt(p.free_gap) + "," + fmt(p.mixing_time));
            pts.push_back({{"U", p.U}, {"top", p.top}, {"gap", p.gap}, {"degenerate", p.degenerate},
                           {"v_parent_norm", p.v_parent_norm}, {"free_gap", p.free_gap}, {"mixing_time", p.mixing_time}});
        }
        write_csv("sweep.csv", "beta,U,top,gap,degenerate,v_parent_norm,v_parent_over_U,free_gap,mixing_time", rows);
        check("sweep_top_zero_nondegenerate", res.top_zero_nondegenerate ? 1.0 : 0.0, 1.0, ">=");
        json fit = nullptr;
        if (res.fitted) {
            fit = {{"gap0", res.gap0}, {"slope", res.slope}, {"continuous", res.continuous},
                   {"v_parent_over_U_spread", res.v_over_u_spread}};
            check("sweep_continuity", res.continuous ? 1.0 : 0.0, 1.0, ">=");
            int positive = 0;
            for (double u : grid) positive += u > 0.0;
            if (positive >= 2) check("v_parent_over_U_spread", res.v_over_u_spread, 0.1);
        }
        for (const auto& p : res.points)
            if (p.U == 0.0) {
                const Model free_model = family(0.0);
                const double C = calibrate_single_mode_constant(1.0);
                const FreeDecoupling fd = decouple_free_parent(free_model.h0, cfg.beta, C);
                const double pred = spectral_gap(fd.sum, free_model.n_modes(), Sector::Full).gap;
                check("sweep_U0_matches_decoupled_gap", std::abs(p.gap - pred) / pred, cfg.tol.closed_form_rel);
            }
        report.payload = {{"beta", cfg.beta}, {"points", pts}, {"fit", fit}};
    }

    void correlations() {
        const Model model = build_model(cfg.model, cfg.max_modes);
        const int n = model.n_modes();
        std::vector<int> ys(n);
        for (int i = 0; i < n; ++i) ys[i] = i;
        const DecayFit corr = correlation_decay(model, cfg.beta, 0, ys);
        std::vector<double> radii;
        const auto& lay = model.layout;
        double diameter = 0.0;
        for (int s = 0; s < lay.n_sites; ++s) diameter = std::max(diameter, lay.distance(lay.majorana_site[0], s));
        for (int r = 0; r <= static_cast<int>(std::ceil(diameter)); ++r) radii.push_back(r);
        std::vector<std::string> rows;
        double max_corr = 0.0;
        for (const auto& [d, v] : corr.samples) {
            rows.push_back("correlation," + fmt(d) + "," + fmt(v));
            max_corr = std::max(max_corr, v);
        }
        check("correlation_bound", max_corr, 2.0);
        json ql = nullptr;
        if (radii.size() >= 2) {
            const DecayFit q = quasi_locality_profile(model, cfg.beta, 0, 0.0, radii);
            for (const auto& [r, v] : q.samples) rows.push_back("quasi_locality," + fmt(r) + "," + fmt(v));
            check("quasi_locality_monotone", q.monotone ? 1.0 : 0.0, 1.0, ">=");
            ql = {{"rate", q.rate}, {"residual", q.residual}, {"fitted", q.fitted}, {"monotone", q.monotone}};
        }
        write_csv("decay.csv", "kind,x,value", rows);
        report.payload = {{"model", model.name},
                          {"correlation",
                           {{"rate", corr.rate}, {"residual", corr.residual}, {"fitted", corr.fitted},
                            {"monotone", corr.monotone}, {"note", corr.note}}},
                          {"quasi_locality", ql}};
    }

    void kernels() {
        const KernelDiagnostics k = kernel_diagnostics(cfg.beta);
        check("F1_closed_vs_quadrature", k.F1_max_error, cfg.tol.kernel);
        check("F1_modulus_spread", k.F1_modulus_spread, cfg.tol.kernel);
        check("b1_hat_zero", k.b1_hat_zero, cfg.tol.b1_hat_zero);
        check("eta_at_minus_inv_beta_minus_1", std::abs(k.eta_at_minus_inv_beta - 1.0), 1e-12);
        check("F2_rate", k.F2_radial.rate, 0.0, ">=");
        check("F2_ratio_minus_envelope", k.F2_ratio_4_2 - k.F2_envelope_4_2, 0.0);
        report.payload = {{"beta", cfg.beta}, {"F1_max_error", k.F1_max_error}, {"b1_hat_zero", k.b1_hat_zero},
                          {"eta_at_minus_inv_beta", k.eta_at_minus_inv_beta}, {"f_hat_zero", k.f_hat_zero},
                          {"F2_rate", k.F2_radial.rate}, {"F2_ratio_4_2", k.F2_ratio_4_2},
                          {"F2_envelope_4_2", k.F2_envelope_4_2}};
    }

    void validate() {
        const Model model = build_model(cfg.model, cfg.max_modes);
        const int n = model.n_modes();
        const Tolerances& t = cfg.tol;
        check("source_anticommutation", anticommutation_residual(build_majorana_matrices(n, cfg.max_modes)), t.algebra);
        if (2 * n <= kMaxModes)
            check("a_fermion_anticommutation", anticommutation_residual(build_a_fermion_space(n).hat_gammas), t.algebra);

        const LindbladModel m = prepare_lindblad(model.dense_H(), cfg.beta, options());
        const LindbladSuperops ops = assemble_lindbladian(m);
        check("stationarity", ops.L.apply(m.gibbs.sigma).norm(), t.stationarity);
        check("kms_detailed_balance", kms_dbc_residual(ops.L_dagger, m.gibbs), t.kms);
        check("generator_routes", (heisenberg_generator_explicit(m).matrix - ops.L_dagger.matrix).norm(), t.route);
        if (m.B.norm() > 1e-8) {
            LindbladOptions doubled = options();
            doubled.coherent_scale *= 2.0;
            const LindbladModel m2 = prepare_lindblad(model.dense_H(), cfg.beta, doubled);
            check("negative_control_doubled_B", kms_dbc_residual(assemble_lindbladian(m2).L_dagger, m2.gibbs),
                  t.negative_control, ">=");
        }
        const DissipatorCoefficients gq = dissipator_coefficients(m.grid.nus, m.kernels, DissipatorMethod::Quadrature);
        const DissipatorCoefficients gc = dissipator_coefficients(m.grid.nus, m.kernels, DissipatorMethod::ClosedForm);
        check("dissipator_closed_vs_quadrature", (gq.g - gc.g).cwiseAbs().maxCoeff(), t.dissipator_dual);
        double coh = 0.0;
        for (int s = 0; s < static_cast<int>(m.jumps.size()); ++s)
            coh = std::max(coh, (coherent_term(m, s, CoherentMethod::BohrProduct) -
                                 coherent_term(m, s, CoherentMethod::DoubleQuadrature)).norm());
        check("coherent_bohr_vs_double_quadrature", coh, t.coherent_dual);

        const ParentHamiltonian ph = build_parent_hamiltonian(model, cfg.beta, options());
        check("parent_routes", (parent_hamiltonian_explicit(m) - ph.total).norm(), t.route);
        if (cfg.method == "both") {
            const ParentHamiltonian pq = build_parent_hamiltonian(model, cfg.beta, options(DissipatorMethod::Quadrature));
            check("parent_closed_vs_quadrature", (pq.total - ph.total).norm(), t.route);
        }
        check("parent_hermiticity", (ph.total - ph.total.adjoint()).norm(), t.hermiticity);
        check("parts_sum", (ph.C_free + ph.C_int + ph.D_free + ph.D_int - ph.total).norm(), 1e-10);
        check("spectrum_correspondence",
              spectrum_distance(sector_spectrum(ph.total, n).even_eigenvalues, lindbladian_spectrum(ops.L_dagger, Sector::Even)),
              t.spectrum);
        const GapReport full = spectral_gap(ph.total, n, Sector::Full);
        const GapReport leven = lindbladian_gap(ops.L_dagger, Sector::Even);
        check("gap_ordering_excess", full.gap - leven.gap, 1e-9);
        check("top_eigenvalue_abs", std::abs(full.top), t.route);
        check("top_eigenvector_overlap_deficit", 1.0 - top_eigenvector_overlap(ph.total, m.gibbs), t.overlap);
        check("expectation_correspondence", expectation_correspondence_error(ph.total, m.gibbs, 20, cfg.seed), t.expectation);
        check("coherent_free_norm", ph.C_free.norm(), t.free_parent);
        if (model.v.terms.terms().empty()) check("interacting_part_norm_at_U0", ph.interacting().norm(), t.free_parent);

        const double C = calibrate_single_mode_constant(1.0);
        const FreeDecoupling fd = decouple_free_parent(model.h0, cfg.beta, C);
        check("free_decoupling", (ph.free() - fd.sum).norm(), t.decoupling);
        double worst_rel = 0.0;
        for (double eps : {0.3, 0.5, 1.0}) {
            const ParentHamiltonian p1 = build_parent_hamiltonian(single_mode_model(eps), cfg.beta);
            const double pred = C * std::exp(-4.0 * cfg.beta * cfg.beta * eps * eps) * std::cosh(2.0 * cfg.beta * eps);
            worst_rel = std::max(worst_rel, std::abs(spectral_gap(p1.total, 1, Sector::Full).gap - pred) / pred);
        }
        check("single_mode_gap_formula", worst_rel, t.closed_form_rel);

        const MixingReport mr = mixing_bound_verify(ops, m.gibbs, leven.gap, cfg.seed, 10, t.mixing_slack);
        check("mixing_state_bound_violation", mr.max_state_violation, t.mixing_slack);
        check("mixing_observable_bound_violation", mr.max_observable_violation, t.mixing_slack);
        check("empirical_rate_minus_gap", mr.empirical_rate - leven.gap, -t.rate, ">=");

        std::mt19937_64 rng(cfg.seed);
        const int nn = std::min(n, 2);
        double left = 0.0, right = 0.0, adj = 0.0;
        for (int par = 0; par < 2; ++par)
            for (int i = 0; i < 20; ++i) {
                const NormPreservation np = norm_preservation_check(random_parity_operator(nn, par, rng, false));
                left = std::max(left, std::abs(np.norm_left - np.norm_A));
                right = std::max(right, np.norm_right - np.norm_A);
                adj = std::max(adj, np.adjoint_rule_residual);
            }
        check("norm_preservation_left", left, t.norm);
        check("norm_preservation_right_excess", right, t.norm);
        check("right_adjoint_rule", adj, t.norm);
        const CounterexampleReport ce = naive_vectorization_counterexample();
        check("appendix_superop_commutator", ce.superop_commutator, t.algebra);
        check("appendix_naive_anticommutator", ce.naive_anticommutator, t.algebra);
        check("appendix_corrected_commutator", ce.corrected_commutator, t.algebra);
        const KernelDiagnostics k = kernel_diagnostics(cfg.beta);
        check("F1_closed_vs_quadrature", k.F1_max_error, t.kernel);
        check("b1_hat_zero", k.b1_hat_zero, t.b1_hat_zero);
        report.payload = {{"model", model.name},
                          {"n_modes", n},
                          {"calibrated_C", C},
                          {"gap_parent_full", full.gap},
                          {"gap_lindbladian_even", leven.gap},
                          {"empirical_rate", mr.empirical_rate}};
    }
};

}  // namespace

RunReport run(const std::string& subcommand, const ExperimentConfig& cfg) {
    check_config(cfg);
    Runner r{cfg, {}, cfg.out_dir};
    r.report.subcommand = subcommand;
    std::filesystem::create_directories(r.out);
    if (subcommand == "build") r.build();
    else if (subcommand == "gap") r.gap();
    else if (subcommand == "mix") r.mix();
    else if (subcommand == "sweep") r.sweep();
    else if (subcommand == "correlations") r.correlations();
    else if (subcommand == "kernels") r.kernels();
    else if (subcommand == "validate") r.validate();
    else throw ConfigError("unknown subcommand '" + subcommand + "'");
    std::ofstream f(r.out / "report.json");
    f << r.report.to_json(cfg).dump(2) << '\n';
    return r.report;
}

}  // namespace fg::io
