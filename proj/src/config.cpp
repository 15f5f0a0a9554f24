#include "nlbeam/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "nlbeam/errors.hpp"

namespace nlbeam {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<Entry> tokenize(const std::string& text) {
    static const std::set<std::string> sections{"",       "model",      "damping",   "source",
                                                "forcing", "integrator", "experiment"};
    std::vector<Entry> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto cut = raw.find_first_of("#;");
        const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!sections.count(section)) throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
        Entry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
        if (e.key.empty()) throw ConfigError(line, "missing key before '='");
        if (e.value.empty()) throw ConfigError(line, "missing value for " + e.key);
        if (!seen.insert({section, e.key}).second) throw ConfigError(line, "duplicate key " + e.key);
        out.push_back(std::move(e));
    }
    return out;
}

double to_double(const Entry& e) {
    if (e.value == "pi") return std::numbers::pi;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != e.value.size() || !std::isfinite(v))
        throw ConfigError(e.line, e.key + " must be a finite number, got '" + e.value + "'");
    return v;
}

long long to_integer(const Entry& e) {
    const double v = to_double(e);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(e.line, e.key + " must be an integer");
    return static_cast<long long>(v);
}

std::uint64_t to_seed(const Entry& e) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!e.value.empty() && e.value.front() != '-') v = std::stoull(e.value, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != e.value.size()) throw ConfigError(e.line, "seed must be an unsigned 64-bit integer");
    return v;
}

// mode:j:amplitude
bool parse_mode(const std::string& v, int& j, double& amp) {
    if (v.rfind("mode:", 0) != 0) return false;
    const auto rest = v.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) return false;
    try {
        std::size_t u1 = 0, u2 = 0;
        j = std::stoi(rest.substr(0, colon), &u1);
        amp = std::stod(rest.substr(colon + 1), &u2);
        return u1 == colon && u2 == rest.size() - colon - 1;
    } catch (const std::exception&) {
        return false;
    }
}

std::string number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

const char* damping_name(const DampingLaw& law) {
    if (const auto* k2 = std::get_if<K2Positive>(&law)) {
        switch (k2->kind) {
        case K2Positive::Kind::Constant: return "k2_constant";
        case K2Positive::Kind::ExpDecay: return "k2_exp_decay";
        case K2Positive::Kind::Rational: return "k2_rational";
        }
    }
    if (const auto* k3 = std::get_if<K3Threshold>(&law))
        return k3->kind == K3Threshold::Kind::Rational ? "k3_rational" : "k3_shifted_exp";
    return "k1";
}

double gamma_of(const DampingLaw& law) {
    return std::visit([](const auto& l) { return l.gamma; }, law);
}

DampingLaw make_damping(const std::string& name, double gamma, double q, int line) {
    if (name == "k1") return K1Monomial{gamma, q};
    if (name == "k2_constant") return K2Positive{K2Positive::Kind::Constant, gamma};
    if (name == "k2_exp_decay") return K2Positive{K2Positive::Kind::ExpDecay, gamma};
    if (name == "k2_rational") return K2Positive{K2Positive::Kind::Rational, gamma};
    if (name == "k3_rational") return K3Threshold{K3Threshold::Kind::Rational, gamma};
    if (name == "k3_shifted_exp") return K3Threshold{K3Threshold::Kind::ShiftedExp, gamma};
    throw ConfigError(line, "unknown damping variant '" + name + "'");
}

template <class F>
void guarded(int line, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& ex) {
        throw ConfigError(line, ex.what());
    }
}

const Entry* find(const std::vector<Entry>& es, const std::string& section, const std::string& key) {
    for (const auto& e : es)
        if (e.section == section && e.key == key) return &e;
    return nullptr;
}

}  // namespace

RunConfig reference_config(const std::string& id) {
    RunConfig c;
    if (id == "simulate") {
        c.setup.id = "simulate";
        return c;
    }
    const auto* info = find_experiment(id);
    if (!info) throw InvalidConfiguration("unknown experiment '" + id + "'");
    c.setup = info->reference();
    return c;
}

RunConfig parse_config(const std::string& text, const std::string& default_id) {
    const auto entries = tokenize(text);
    std::string id = default_id;
    int id_line = 0;
    if (const auto* e = find(entries, "experiment", "id")) {
        id = e->value;
        id_line = e->line;
    }
    RunConfig cfg;
    try {
        cfg = reference_config(id);
    } catch (const Error& ex) {
        throw ConfigError(id_line, ex.what());
    }
    auto& s = cfg.setup;
    const ExperimentInfo* info = find_experiment(id);

    std::string damping_variant = damping_name(s.damping);
    double gamma = gamma_of(s.damping);
    double q = std::holds_alternative<K1Monomial>(s.damping) ? std::get<K1Monomial>(s.damping).q : 1.0;
    const Entry* q_entry = nullptr;
    const Entry* h_entry = nullptr;
    int source_line = 0, integ_line = 0, model_line = 0;

    for (const auto& e : entries) {
        const int line = e.line;
        if (e.section.empty()) {
            if (e.key == "seed")
                s.seed = to_seed(e);
            else if (e.key == "output_dir")
                cfg.output_dir = e.value;
            else
                throw ConfigError(line, "unknown key " + e.key);
        } else if (e.section == "model") {
            model_line = model_line ? model_line : line;
            if (e.key == "n_modes") {
                const auto n = to_integer(e);
                if (n < 1 || n > 4096) throw ConfigError(line, "n_modes must lie in [1, 4096]");
                s.n_modes = static_cast<int>(n);
            } else if (e.key == "length") {
                s.length = to_double(e);
                if (!(s.length > 0.0)) throw ConfigError(line, "length must be > 0");
            } else if (e.key == "kappa") {
                s.kappa = to_double(e);
                if (!(s.kappa >= 0.0)) throw ConfigError(line, "kappa must be >= 0");
            } else if (e.key == "quad_points") {
                s.quad_points = e.value == "auto" ? 0 : static_cast<int>(to_integer(e));
                if (s.quad_points < 0) throw ConfigError(line, "quad_points must be positive or auto");
            } else {
                throw ConfigError(line, "unknown key " + e.key + " in [model]");
            }
        } else if (e.section == "damping") {
            if (e.key == "variant") {
                damping_variant = e.value;
            } else if (e.key == "gamma") {
                gamma = to_double(e);
            } else if (e.key == "q") {
                q = to_double(e);
                q_entry = &e;
            } else {
                throw ConfigError(line, "unknown key " + e.key + " in [damping]");
            }
            guarded(line, [&] {
                s.damping = make_damping(damping_variant, gamma, q, line);
                validate(s.damping);
            });
        } else if (e.section == "source") {
            source_line = line;
            DoublePower dp = std::holds_alternative<DoublePower>(s.source) ? std::get<DoublePower>(s.source)
                                                                            : DoublePower{};
            if (e.key == "variant") {
                if (e.value == "zero")
                    s.source = ZeroSource{};
                else if (e.value == "double_power")
                    s.source = dp;
                else
                    throw ConfigError(line, "unknown source variant '" + e.value + "'");
                continue;
            }
            if (!std::holds_alternative<DoublePower>(s.source) && !find(entries, "source", "variant"))
                s.source = dp;
            if (std::holds_alternative<ZeroSource>(s.source))
                throw ConfigError(line, e.key + " does not apply to the zero source");
            auto& law = std::get<DoublePower>(s.source);
            if (e.key == "delta")
                law.delta = to_double(e);
            else if (e.key == "r")
                law.r = to_double(e);
            else if (e.key == "sigma")
                law.sigma = to_double(e);
            else
                throw ConfigError(line, "unknown key " + e.key + " in [source]");
        } else if (e.section == "forcing") {
            if (e.key == "lambda") {
                s.lambda = to_double(e);
                if (!(s.lambda >= 0.0 && s.lambda <= 1.0)) throw ConfigError(line, "lambda must lie in [0, 1]");
            } else if (e.key == "h") {
                h_entry = &e;
            } else {
                throw ConfigError(line, "unknown key " + e.key + " in [forcing]");
            }
        } else if (e.section == "integrator") {
            integ_line = integ_line ? integ_line : line;
            auto& ic = s.integ;
            if (e.key == "dt") {
                ic.dt = to_double(e);
                if (!(ic.dt > 0.0)) throw ConfigError(line, "dt must be > 0");
            } else if (e.key == "scheme") {
                if (e.value == "strang")
                    ic.scheme = Scheme::SplitStrang;
                else if (e.value == "rk4")
                    ic.scheme = Scheme::RK4;
                else
                    throw ConfigError(line, "scheme must be strang or rk4");
            } else if (e.key == "horizon") {
                ic.horizon = to_double(e);
                if (!(ic.horizon > 0.0)) throw ConfigError(line, "horizon must be > 0");
            } else if (e.key == "sample_stride") {
                const auto v = to_integer(e);
                if (v < 1 || v > std::numeric_limits<int>::max()) throw ConfigError(line, "sample_stride must be >= 1");
                ic.sample_stride = static_cast<int>(v);
            } else if (e.key == "alpha") {
                ic.alpha = to_double(e);
                if (!(ic.alpha >= 0.0 && ic.alpha <= 1.0)) throw ConfigError(line, "alpha must lie in [0, 1]");
            } else {
                throw ConfigError(line, "unknown key " + e.key + " in [integrator]");
            }
        } else {  // experiment
            if (e.key == "id") continue;
            if (e.key == "initial") {
                int j = 0;
                double amp = 0.0;
                if (e.value == "random")
                    s.initial.kind = InitialSpec::Kind::Random;
                else if (e.value == "zero")
                    s.initial.kind = InitialSpec::Kind::Zero;
                else if (parse_mode(e.value, j, amp)) {
                    s.initial.kind = InitialSpec::Kind::Mode;
                    s.initial.mode = j;
                    s.initial.amplitude = amp;
                } else
                    throw ConfigError(line, "initial must be random, zero or mode:j:amplitude");
            } else if (e.key == "initial_energy") {
                s.initial.energy = to_double(e);
                if (!(s.initial.energy > 0.0)) throw ConfigError(line, "initial_energy must be > 0");
            } else {
                const bool known = info && std::any_of(info->params.begin(), info->params.end(),
                                                       [&](const ParamSpec& p) { return p.key == e.key; });
                if (!known) throw ConfigError(line, "unknown key " + e.key + " for experiment " + id);
                s.params[e.key] = e.value;
            }
        }
    }

    if (q_entry && !std::holds_alternative<K1Monomial>(s.damping))
        throw ConfigError(q_entry->line, "q applies only to the k1 damping variant");
    guarded(source_line, [&] { validate(s.source); });

    // forcing depends on the final number of modes
    if (h_entry) {
        const auto& v = h_entry->value;
        int j = 0;
        double amp = 0.0;
        if (v == "zero") {
            s.h.clear();
        } else if (parse_mode(v, j, amp)) {
            if (j < 1 || j > s.n_modes) throw ConfigError(h_entry->line, "forcing mode outside [1, n_modes]");
            s.h.assign(s.n_modes, 0.0);
            s.h[j - 1] = amp;
        } else {
            s.h.clear();
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) s.h.push_back(to_double({"forcing", "h", trim(item), h_entry->line}));
            if (static_cast<int>(s.h.size()) != s.n_modes)
                throw ConfigError(h_entry->line, "h lists " + std::to_string(s.h.size()) + " coefficients for " +
                                                     std::to_string(s.n_modes) + " modes");
        }
    } else if (!s.h.empty() && static_cast<int>(s.h.size()) != s.n_modes) {
        s.h.resize(s.n_modes, 0.0);  // reference forcing follows a changed mode count
    }

    if (s.initial.kind == InitialSpec::Kind::Mode && (s.initial.mode < 1 || s.initial.mode > s.n_modes))
        throw ConfigError(find(entries, "experiment", "initial")->line, "initial mode outside [1, n_modes]");

    guarded(model_line, [&] {
        const auto model = s.model();
        guarded(integ_line, [&] { validate(s.integ, model); });
    });
    for (const auto& [key, value] : s.params) {
        const Entry* e = find(entries, "experiment", key);
        guarded(e ? e->line : 0, [&] {
            try {
                (void)s.list(key);
            } catch (const std::invalid_argument&) {
                throw ConfigError(e ? e->line : 0, key + " must be a number or a comma-separated list");
            }
        });
    }
    return cfg;
}

std::string emit_config(const RunConfig& config) {
    const auto& s = config.setup;
    std::ostringstream os;
    os << "seed = " << s.seed << '\n';
    os << "output_dir = " << config.output_dir << "\n\n";
    os << "[model]\n";
    os << "n_modes = " << s.n_modes << '\n';
    os << "length = " << number(s.length) << '\n';
    os << "kappa = " << number(s.kappa) << '\n';
    os << "quad_points = " << (s.quad_points > 0 ? std::to_string(s.quad_points) : "auto") << "\n\n";
    os << "[damping]\n";
    os << "variant = " << damping_name(s.damping) << '\n';
    os << "gamma = " << number(gamma_of(s.damping)) << '\n';
    if (const auto* k1 = std::get_if<K1Monomial>(&s.damping)) os << "q = " << number(k1->q) << '\n';
    os << "\n[source]\n";
    if (const auto* dp = std::get_if<DoublePower>(&s.source)) {
        os << "variant = double_power\n";
        os << "delta = " << number(dp->delta) << '\n';
        os << "r = " << number(dp->r) << '\n';
        os << "sigma = " << number(dp->sigma) << '\n';
    } else {
        os << "variant = zero\n";
    }
    os << "\n[forcing]\n";
    os << "lambda = " << number(s.lambda) << '\n';
    os << "h = ";
    if (s.h.empty()) {
        os << "zero";
    } else {
        for (std::size_t j = 0; j < s.h.size(); ++j) os << (j ? ", " : "") << number(s.h[j]);
    }
    os << "\n\n[integrator]\n";
    os << "dt = " << number(s.integ.dt) << '\n';
    os << "scheme = " << (s.integ.scheme == Scheme::RK4 ? "rk4" : "strang") << '\n';
    os << "horizon = " << number(s.integ.horizon) << '\n';
    os << "sample_stride = " << s.integ.sample_stride << '\n';
    os << "alpha = " << number(s.integ.alpha) << '\n';
    os << "\n[experiment]\n";
    os << "id = " << s.id << '\n';
    switch (s.initial.kind) {
    case InitialSpec::Kind::Random: os << "initial = random\n"; break;
    case InitialSpec::Kind::Zero: os << "initial = zero\n"; break;
    case InitialSpec::Kind::Mode:
        os << "initial = mode:" << s.initial.mode << ':' << number(s.initial.amplitude) << '\n';
        break;
    }
    os << "initial_energy = " << number(s.initial.energy) << '\n';
    for (const auto& [k, v] : s.params) os << k << " = " << v << '\n';
    return os.str();
}

std::string list_experiments() {
    std::ostringstream os;
    for (const auto& e : experiment_registry()) {
        os << e.id << "\n    " << e.description << "\n    checks: " << e.claim << '\n';
    }
    return os.str();
}

int run(const RunConfig& config, std::ostream& log, bool quiet) {
    const auto& s = config.setup;
    RunContext ctx;
    ctx.output_dir = config.output_dir;
    ctx.quiet = quiet;

    ExperimentReport report;
    try {
        if (s.id == "simulate") {
            report = simulate(s, ctx);
        } else {
            const auto* info = find_experiment(s.id);
            if (!info) throw InvalidConfiguration("unknown experiment '" + s.id + "'");
            report = info->run(s, ctx);
        }
    } catch (const Error& ex) {
        report = ExperimentReport{};
        report.id = s.id;
        report.seed = s.seed;
        report.check("run completed", false, ex.what());
        if (const auto dir = ctx.run_dir(s.id, s.seed); !dir.empty()) {
            std::ofstream os(dir / "report.txt");
            os << report.render();
        }
    }
    if (const auto dir = ctx.run_dir(s.id, s.seed); !dir.empty()) {
        std::ofstream os(dir / "manifest.txt");
        os << "# nlbeam " << kSoftwareVersion << '\n' << emit_config(config);
    }
    if (!quiet) log << report.render();
    return report.passed() ? 0 : 1;
}

}  // namespace nlbeam
