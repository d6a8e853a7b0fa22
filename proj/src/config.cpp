#include "tfiq/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tfiq/scaling.hpp"

namespace tfiq {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw Error(ErrorCode::config_error, key + ": " + why);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) bad_key(key, "not a number: '" + value + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        bad_key(key, "not a number: '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    int v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        bad_key(key, "not an integer: '" + value + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

int parse_spin(const std::string& token) {
    const std::string t = trim(token);
    const std::size_t slash = t.find('/');
    if (slash != std::string::npos) {
        if (t.substr(slash + 1) != "2") bad_key("spin", "only halves supported: '" + t + "'");
        const int num = parse_int("spin", t.substr(0, slash));
        if (num < 1) bad_key("spin", "must be positive");
        return num;
    }
    const int whole = parse_int("spin", t);
    if (whole < 1) bad_key("spin", "must be positive");
    return 2 * whole;
}

std::string spin_to_string(int two_s) {
    if (two_s % 2 == 0) return std::to_string(two_s / 2);
    return std::to_string(two_s) + "/2";
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream lines(text);
    std::string raw;
    while (std::getline(lines, raw)) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::config_error, "expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(ErrorCode::config_error, "empty key in '" + line + "'");

        if (key == "spin") {
            cfg.two_s = parse_spin(value);
        } else if (key == "n") {
            cfg.n_sites = parse_int(key, value);
            if (*cfg.n_sites < 2) bad_key(key, "must be >= 2");
        } else if (key == "model") {
            if (value == "nn")
                cfg.model = Model::nn;
            else if (value == "nnn")
                cfg.model = Model::nnn;
            else
                bad_key(key, "expected nn or nnn");
        } else if (key == "ratio") {
            cfg.ratio = parse_double(key, value);
        } else if (key == "boundary") {
            if (value == "open")
                cfg.boundary = Boundary::open;
            else if (value == "periodic")
                cfg.boundary = Boundary::periodic;
            else
                bad_key(key, "expected open or periodic");
        } else if (key == "convention") {
            if (value == "pauli")
                cfg.convention = Convention::pauli;
            else if (value == "raw")
                cfg.convention = Convention::raw;
            else
                bad_key(key, "expected pauli or raw");
        } else if (key == "lambda") {
            cfg.lambda = parse_double(key, value);
            if (!(*cfg.lambda >= 0.0)) bad_key(key, "must be >= 0");
        } else if (key == "lambda_min") {
            cfg.lambda_min = parse_double(key, value);
            if (!(cfg.lambda_min >= 0.0)) bad_key(key, "must be >= 0");
        } else if (key == "lambda_max") {
            cfg.lambda_max = parse_double(key, value);
        } else if (key == "lambda_step") {
            cfg.lambda_step = parse_double(key, value);
            if (!(cfg.lambda_step > 0.0)) bad_key(key, "must be > 0");
        } else if (key == "q_list") {
            cfg.q_list.clear();
            for (const std::string& tok : split_csv(value)) {
                const double q = (tok == "special") ? q_special_ising() : parse_double(key, tok);
                if (!(q > 0.0)) bad_key(key, "q must be > 0");
                cfg.q_list.push_back(q);
            }
            if (cfg.q_list.empty()) bad_key(key, "must not be empty");
        } else if (key == "target") {
            if (value == "scan") {
                cfg.target_kind = RunConfig::TargetKind::scan;
            } else if (value.rfind("site:", 0) == 0) {
                cfg.target_kind = RunConfig::TargetKind::site;
                cfg.target_index = parse_int(key, value.substr(5));
            } else if (value.rfind("block:", 0) == 0) {
                cfg.target_kind = RunConfig::TargetKind::block;
                cfg.target_index = parse_int(key, value.substr(6));
                if (cfg.target_index < 1) bad_key(key, "block size must be >= 1");
            } else {
                bad_key(key, "expected site:<i>, block:<L> or scan");
            }
        } else if (key == "n_list") {
            cfg.n_list.clear();
            for (const std::string& tok : split_csv(value)) {
                const int n = parse_int(key, tok);
                if (n < 2) bad_key(key, "N must be >= 2");
                cfg.n_list.push_back(n);
            }
        } else if (key == "mode") {
            if (value == "peak") {
                cfg.mode = RunConfig::GammaMode::peak;
            } else if (value.rfind("fixed:", 0) == 0) {
                cfg.mode = RunConfig::GammaMode::fixed;
                cfg.fixed_lambda = parse_double(key, value.substr(6));
            } else {
                bad_key(key, "expected peak or fixed:<lambda>");
            }
        } else if (key == "tol") {
            cfg.tol = parse_double(key, value);
            if (!(cfg.tol > 0.0)) bad_key(key, "must be > 0");
        } else if (key == "max_krylov") {
            cfg.max_krylov = parse_int(key, value);
            if (cfg.max_krylov < 2) bad_key(key, "must be >= 2");
        } else if (key == "workers") {
            cfg.workers = parse_int(key, value);
            if (cfg.workers < 1) bad_key(key, "must be >= 1");
        } else if (key == "out_dir") {
            if (value.empty()) bad_key(key, "must not be empty");
            cfg.out_dir = value;
        } else if (key == "gamma_list") {
            cfg.gamma_list.clear();
            for (const std::string& tok : split_csv(value))
                cfg.gamma_list.push_back(parse_double(key, tok));
        } else if (key == "spin_list") {
            cfg.spin_list.clear();
            for (const std::string& tok : split_csv(value)) cfg.spin_list.push_back(parse_spin(tok));
        } else if (key == "gamma_infinity_list") {
            cfg.gamma_infinity_list.clear();
            for (const std::string& tok : split_csv(value))
                cfg.gamma_infinity_list.push_back(parse_double(key, tok));
        } else if (key == "csv") {
            cfg.csv = value;
        } else if (key == "x") {
            cfg.x = value;
        } else if (key == "y") {
            cfg.y = value;
        } else if (key == "series") {
            cfg.series = value;
        } else if (key == "title") {
            cfg.title = value;
        } else {
            throw Error(ErrorCode::config_error, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

std::string canonical_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "spin=" << spin_to_string(cfg.two_s) << "\n";
    if (cfg.n_sites) out << "n=" << *cfg.n_sites << "\n";
    out << "model=" << to_string(cfg.model) << "\n";
    out << "ratio=" << fmt17(cfg.ratio) << "\n";
    if (cfg.boundary) out << "boundary=" << to_string(*cfg.boundary) << "\n";
    if (cfg.convention) out << "convention=" << to_string(*cfg.convention) << "\n";
    if (cfg.lambda) out << "lambda=" << fmt17(*cfg.lambda) << "\n";
    out << "lambda_min=" << fmt17(cfg.lambda_min) << "\n";
    out << "lambda_max=" << fmt17(cfg.lambda_max) << "\n";
    out << "lambda_step=" << fmt17(cfg.lambda_step) << "\n";
    out << "q_list=";
    for (std::size_t i = 0; i < cfg.q_list.size(); ++i)
        out << (i ? "," : "") << fmt17(cfg.q_list[i]);
    out << "\n";
    switch (cfg.target_kind) {
        case RunConfig::TargetKind::site_default: break;
        case RunConfig::TargetKind::site: out << "target=site:" << cfg.target_index << "\n"; break;
        case RunConfig::TargetKind::block: out << "target=block:" << cfg.target_index << "\n"; break;
        case RunConfig::TargetKind::scan: out << "target=scan\n"; break;
    }
    if (!cfg.n_list.empty()) {
        out << "n_list=";
        for (std::size_t i = 0; i < cfg.n_list.size(); ++i) out << (i ? "," : "") << cfg.n_list[i];
        out << "\n";
    }
    if (cfg.mode == RunConfig::GammaMode::fixed)
        out << "mode=fixed:" << fmt17(cfg.fixed_lambda) << "\n";
    else
        out << "mode=peak\n";
    out << "tol=" << fmt17(cfg.tol) << "\n";
    out << "max_krylov=" << cfg.max_krylov << "\n";
    out << "workers=" << cfg.workers << "\n";
    out << "out_dir=" << cfg.out_dir << "\n";
    if (!cfg.gamma_list.empty()) {
        out << "gamma_list=";
        for (std::size_t i = 0; i < cfg.gamma_list.size(); ++i)
            out << (i ? "," : "") << fmt17(cfg.gamma_list[i]);
        out << "\n";
    }
    if (!cfg.spin_list.empty()) {
        out << "spin_list=";
        for (std::size_t i = 0; i < cfg.spin_list.size(); ++i)
            out << (i ? "," : "") << spin_to_string(cfg.spin_list[i]);
        out << "\n";
    }
    if (!cfg.gamma_infinity_list.empty()) {
        out << "gamma_infinity_list=";
        for (std::size_t i = 0; i < cfg.gamma_infinity_list.size(); ++i)
            out << (i ? "," : "") << fmt17(cfg.gamma_infinity_list[i]);
        out << "\n";
    }
    if (!cfg.csv.empty()) out << "csv=" << cfg.csv << "\n";
    out << "x=" << cfg.x << "\n";
    out << "y=" << cfg.y << "\n";
    if (!cfg.series.empty()) out << "series=" << cfg.series << "\n";
    if (!cfg.title.empty()) out << "title=" << cfg.title << "\n";
    return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return canonical_config_text(a) == canonical_config_text(b);
}

ChainSpec chain_spec_from(const RunConfig& cfg) {
    if (!cfg.n_sites) throw Error(ErrorCode::config_error, "n: required key missing");
    ChainSpec spec = ChainSpec::with_defaults(cfg.two_s, *cfg.n_sites, cfg.model, cfg.ratio);
    if (cfg.boundary) spec.boundary = *cfg.boundary;
    if (cfg.convention) spec.convention = *cfg.convention;
    try {
        validate(spec);
    } catch (const Error& e) {
        throw Error(ErrorCode::config_error, e.what());
    }
    return spec;
}

LanczosConfig lanczos_config_from(const RunConfig& cfg) {
    LanczosConfig lz;
    lz.tol = cfg.tol;
    lz.max_krylov = cfg.max_krylov;
    return lz;
}

EntanglementTarget target_from(const RunConfig& cfg) {
    switch (cfg.target_kind) {
        case RunConfig::TargetKind::site: return EntanglementTarget::site(cfg.target_index);
        case RunConfig::TargetKind::block: return EntanglementTarget::block(cfg.target_index);
        case RunConfig::TargetKind::scan:
        case RunConfig::TargetKind::site_default: return EntanglementTarget::site(-1);
    }
    return EntanglementTarget::site(-1);
}

} // namespace tfiq
