#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ggt/conedoff.hpp"
#include "ggt/errors.hpp"
#include "ggt/floyd.hpp"
#include "ggt/quasiconvex.hpp"
#include "ggt/words.hpp"

namespace ggt {

// Scenario files are plain-text key-value sections, parsed strictly:
// unknown sections or keys are errors, so stale fixtures fail loudly.
//
//   [basis]
//   letters = a b            # factors separated by '|': x1 x2 | y1 y2
//
//   [scaling]
//   kind = geometric         # or polynomial
//   mu = 1/2                 # geometric ratio (rational)
//   exponent = 2.0           # polynomial exponent
//
//   [ball]
//   radius = 3
//   cap = 500000
//
//   [peripheral]             # one line per subgroup
//   subgroup = a : hyperbolic
//   subgroup = a b : parabolic : nested a
//
//   [qc]
//   subgroup = a             # letters, or: cyclic a b
//   radii = 4 5 6 7 8
//   depth_offset = 1
//   window = 3
//
//   [bounds]
//   geodesic_cap = 100000
//   margin = 0
//
//   [freeinf]
//   n = 2
//   m = 3
//   conjugator_bound = 4
//   word_bound = 6
//   tree_radius = 2
struct ScenarioConfig {
    std::optional<Basis> basis;
    std::optional<ScalingFunction> scaling;
    std::optional<int> ball_radius;
    size_t ball_cap = 2'000'000;
    std::optional<PeripheralStructure> peripheral;
    std::optional<SubgroupDescriptor> qc_subgroup;
    std::vector<int> qc_radii;
    int qc_depth_offset = 1;
    int qc_window = 3;
    size_t geodesic_cap = 100'000;
    int margin = 0;
    std::optional<int> freeinf_n, freeinf_m;
    int freeinf_conjugator_bound = 4;
    int freeinf_word_bound = 6;
    int freeinf_tree_radius = 2;

    const Basis& need_basis() const {
        if (!basis) throw config_error("config needs a [basis] section");
        return *basis;
    }
    int need_radius() const {
        if (!ball_radius) throw config_error("config needs [ball] radius");
        return *ball_radius;
    }
    const PeripheralStructure& need_peripheral() const {
        if (!peripheral) throw config_error("config needs a [peripheral] section");
        return *peripheral;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline int parse_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("cannot parse integer " + what + ": '" + s + "'");
    }
}

inline std::vector<int> parse_letter_list(const Basis& basis, const std::string& text) {
    std::vector<int> letters;
    for (const auto& tok : split_ws(text)) {
        int idx = basis.find(tok);
        if (idx < 0) throw config_error("unknown generator '" + tok + "'");
        letters.push_back(idx);
    }
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    return letters;
}

inline PeripheralSubgroup parse_peripheral_line(const Basis& basis, const std::string& value) {
    auto parts = split_on(value, ':');
    PeripheralSubgroup sub;
    sub.letters = parse_letter_list(basis, trim(parts[0]));
    if (parts.size() > 1) {
        std::string mode = trim(parts[1]);
        if (mode == "none")
            sub.mode = ConeMode::None;
        else if (mode == "hyperbolic")
            sub.mode = ConeMode::Hyperbolic;
        else if (mode == "parabolic")
            sub.mode = ConeMode::Parabolic;
        else
            throw config_error("unknown peripheral mode '" + mode + "'");
    }
    for (size_t i = 2; i < parts.size(); ++i) {
        std::string nested = trim(parts[i]);
        if (nested.rfind("nested", 0) != 0)
            throw config_error("expected 'nested <letters>' in peripheral line");
        sub.nested.push_back(parse_letter_list(basis, nested.substr(6)));
    }
    return sub;
}

inline SubgroupDescriptor parse_subgroup(const Basis& basis, const std::string& value) {
    auto toks = split_ws(value);
    if (!toks.empty() && toks[0] == "cyclic") {
        std::string rest;
        for (size_t i = 1; i < toks.size(); ++i) rest += toks[i] + " ";
        return SubgroupDescriptor::cyclic(parse_word(basis, rest));
    }
    return SubgroupDescriptor::free_factor(parse_letter_list(basis, value));
}

}  // namespace detail

inline ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line, section;
    int lineno = 0;
    std::optional<std::string> scaling_kind;
    std::optional<Rational> scaling_mu;
    std::optional<double> scaling_exponent;
    std::optional<Rational> scaling_lambda;
    std::vector<std::string> peripheral_lines;
    std::optional<std::string> qc_subgroup_line;

    auto fail = [&](const std::string& msg) {
        throw config_error("config line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "basis" && section != "scaling" && section != "ball" &&
                section != "peripheral" && section != "qc" && section != "bounds" &&
                section != "freeinf")
                fail("unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) fail("key outside any section");

        if (section == "basis") {
            if (key != "letters") fail("unknown key '" + key + "' in [basis]");
            std::vector<std::vector<std::string>> factors;
            for (const auto& part : detail::split_on(value, '|'))
                factors.push_back(detail::split_ws(part));
            cfg.basis = Basis(factors);
        } else if (section == "scaling") {
            if (key == "kind")
                scaling_kind = value;
            else if (key == "mu")
                scaling_mu = parse_rational(value);
            else if (key == "exponent")
                scaling_exponent = std::stod(value);
            else if (key == "lambda")
                scaling_lambda = parse_rational(value);
            else
                fail("unknown key '" + key + "' in [scaling]");
        } else if (section == "ball") {
            if (key == "radius")
                cfg.ball_radius = detail::parse_int(value, "radius");
            else if (key == "cap")
                cfg.ball_cap = size_t(detail::parse_int(value, "cap"));
            else
                fail("unknown key '" + key + "' in [ball]");
        } else if (section == "peripheral") {
            if (key != "subgroup") fail("unknown key '" + key + "' in [peripheral]");
            peripheral_lines.push_back(value);
        } else if (section == "qc") {
            if (key == "subgroup")
                qc_subgroup_line = value;
            else if (key == "radii") {
                for (const auto& tok : detail::split_ws(value))
                    cfg.qc_radii.push_back(detail::parse_int(tok, "radius"));
            } else if (key == "depth_offset")
                cfg.qc_depth_offset = detail::parse_int(value, "depth_offset");
            else if (key == "window")
                cfg.qc_window = detail::parse_int(value, "window");
            else
                fail("unknown key '" + key + "' in [qc]");
        } else if (section == "bounds") {
            if (key == "geodesic_cap")
                cfg.geodesic_cap = size_t(detail::parse_int(value, "geodesic_cap"));
            else if (key == "margin")
                cfg.margin = detail::parse_int(value, "margin");
            else
                fail("unknown key '" + key + "' in [bounds]");
        } else if (section == "freeinf") {
            if (key == "n")
                cfg.freeinf_n = detail::parse_int(value, "n");
            else if (key == "m")
                cfg.freeinf_m = detail::parse_int(value, "m");
            else if (key == "conjugator_bound")
                cfg.freeinf_conjugator_bound = detail::parse_int(value, "conjugator_bound");
            else if (key == "word_bound")
                cfg.freeinf_word_bound = detail::parse_int(value, "word_bound");
            else if (key == "tree_radius")
                cfg.freeinf_tree_radius = detail::parse_int(value, "tree_radius");
            else
                fail("unknown key '" + key + "' in [freeinf]");
        }
    }

    if (scaling_kind) {
        if (*scaling_kind == "geometric")
            cfg.scaling = ScalingFunction::geometric(scaling_mu.value_or(Rational(1, 2)));
        else if (*scaling_kind == "polynomial")
            cfg.scaling = ScalingFunction::polynomial(scaling_exponent.value_or(2.0));
        else
            throw config_error("unknown scaling kind '" + *scaling_kind + "'");
        if (scaling_lambda) cfg.scaling->set_lambda_override(*scaling_lambda);
    }
    if (!peripheral_lines.empty()) {
        PeripheralStructure ps;
        for (const auto& l : peripheral_lines)
            ps.subgroups.push_back(detail::parse_peripheral_line(cfg.need_basis(), l));
        ps.validate(cfg.need_basis());
        cfg.peripheral = ps;
    }
    if (qc_subgroup_line)
        cfg.qc_subgroup = detail::parse_subgroup(cfg.need_basis(), *qc_subgroup_line);

    if (cfg.ball_radius && *cfg.ball_radius < 0) throw config_error("radius must be >= 0");
    if (cfg.ball_cap == 0 || cfg.geodesic_cap == 0) throw config_error("caps must be positive");
    for (size_t i = 1; i < cfg.qc_radii.size(); ++i)
        if (cfg.qc_radii[i] <= cfg.qc_radii[i - 1])
            throw config_error("qc radii must be strictly increasing");
    return cfg;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config '" + path + "'");
    return parse_scenario_config(in);
}

}  // namespace ggt
