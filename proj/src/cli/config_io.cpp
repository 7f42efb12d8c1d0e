#include "dispersal/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "dispersal/errors.hpp"

namespace dispersal {

namespace {

constexpr std::string_view figure1_text = R"(# Dispersal selection experiment: D = 1.5 theta, hump-shaped K, eps = 0.01,
# dirichlet conditions in x and theta.
[domain]
length = 1
n_x = 200
bc = dirichlet

[trait]
n_theta = 200
bc = dirichlet

[model]
epsilon = 0.01
dispersal = linear
dispersal_params = 0, 1.5
capacity = hump
capacity_params = 1, 20, 8
initial_center = 0.7
initial_width = 0.05

[output]
final_time = 0.2
snapshot_times = 0.02, 0.063, 0.2
sample_every = 20
)";

constexpr std::string_view smooth_periodic_text = R"(# Analysis setting: neumann in x, periodic in theta, smooth D with a single
# minimum at theta = 0.5.
[domain]
length = 1
n_x = 100
bc = neumann

[trait]
n_theta = 100
bc = periodic

[model]
epsilon = 0.05
dispersal = cosine
dispersal_params = 1, 0.1
capacity = cosine
capacity_params = 10, 2
theta_m = 0.5
initial_center = 0.2
initial_width = 0.1
epsilons = 0.1, 0.05, 0.025

[solver]
steady_tol = 1e-8
max_time = 400
)";

constexpr std::string_view canonical_text = R"(# Quasi-static trait dynamics with D increasing on the trait range.
[domain]
length = 1
n_x = 100
bc = neumann

[trait]
n_theta = 101
bc = dirichlet

[model]
epsilon = 0.05
dispersal = linear
dispersal_params = 0.2, 1.5
capacity = hump
capacity_params = 1, 20, 8

[hj]
theta0 = 0.7
final_time = 2
gradient_factor = D
initial_curvature = 5
stall_steps = 1000
)";

struct Entry {
    std::string value;
    int line = 0;
};

using EntryMap = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"domain", {"length", "n_x", "bc"}},
        {"trait", {"n_theta", "bc"}},
        {"model", {"epsilon", "dispersal", "dispersal_params", "capacity", "capacity_params", "theta_m",
                   "initial_center", "initial_width", "epsilons"}},
        {"solver", {"eigen_tol", "newton_tol", "eigen_max_iter", "newton_max_iter", "steady_tol",
                    "max_time", "dt", "reaction"}},
        {"hj", {"gradient_factor", "curvature_floor", "tol_ess", "theta0", "final_time", "dt",
                "stall_steps", "stall_tol", "initial_curvature"}},
        {"output", {"final_time", "snapshot_times", "sample_every"}},
    };
    return keys;
}

void check_key(const std::string& section, const std::string& key, int line) {
    const auto it = schema().find(section);
    if (it == schema().end())
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line, section), line);
    if (!it->second.contains(key))
        throw ConfigError(fmt::format("line {}: unknown key '{}.{}'", line, section, key), line);
}

void parse_into(std::string_view text, EntryMap& entries, int depth);

void load_preset_into(const std::string& name, EntryMap& entries, int line, int depth) {
    if (depth > 2) throw ConfigError(fmt::format("line {}: presets nest too deeply", line), line);
    std::string text;
    try {
        text = preset_text(name);
    } catch (const ConfigError&) {
        throw ConfigError(fmt::format("line {}: unknown preset '{}'", line, name), line);
    }
    parse_into(text, entries, depth + 1);
}

void parse_into(std::string_view text, EntryMap& entries, int depth) {
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(fmt::format("line {}: malformed section header", line_no), line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().contains(section))
                throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section), line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no), line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no), line_no);
        if (section.empty()) {
            if (key != "preset")
                throw ConfigError(fmt::format("line {}: key '{}' outside a section", line_no, key), line_no);
            load_preset_into(value, entries, line_no, depth);
            continue;
        }
        check_key(section, key, line_no);
        entries[section + "." + key] = Entry{value, line_no};
    }
}

void apply_overrides(const std::vector<std::string>& overrides, EntryMap& entries) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        const auto dot = o.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError(fmt::format("override '{}': expected section.key=value", o));
        const std::string section = trim(o.substr(0, dot));
        const std::string key = trim(o.substr(dot + 1, eq - dot - 1));
        const auto it = schema().find(section);
        if (it == schema().end() || !it->second.contains(key))
            throw ConfigError(fmt::format("override '{}': unknown key '{}.{}'", o, section, key));
        entries[section + "." + key] = Entry{trim(o.substr(eq + 1)), 0};
    }
}

class Reader {
public:
    explicit Reader(const EntryMap& e) : entries_(e) {}

    bool has(const std::string& key) const { return entries_.contains(key); }

    const Entry& require(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(fmt::format("missing required key '{}'", key));
        return it->second;
    }

    double real(const std::string& key) const { return to_real(key, require(key)); }
    double real(const std::string& key, double fallback) const {
        return has(key) ? real(key) : fallback;
    }
    int integer(const std::string& key) const {
        const auto& e = require(key);
        const double v = to_real(key, e);
        if (v != static_cast<double>(static_cast<long long>(v)) || std::abs(v) > 1e9)
            throw error(key, e, "expected an integer");
        return static_cast<int>(v);
    }
    int integer(const std::string& key, int fallback) const {
        return has(key) ? integer(key) : fallback;
    }
    std::string word(const std::string& key, const std::string& fallback) const {
        return has(key) ? require(key).value : fallback;
    }
    std::vector<double> list(const std::string& key) const {
        if (!has(key)) return {};
        const auto& e = require(key);
        std::vector<double> out;
        std::string item;
        std::istringstream in(e.value);
        while (std::getline(in, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) throw error(key, e, "empty list item");
            out.push_back(parse_number(key, e, t));
        }
        return out;
    }
    ConfigError error(const std::string& key, const Entry& e, const std::string& what) const {
        if (e.line > 0)
            return ConfigError(fmt::format("line {}: '{}': {}", e.line, key, what), e.line);
        return ConfigError(fmt::format("override '{}': {}", key, what));
    }

private:
    double to_real(const std::string& key, const Entry& e) const {
        return parse_number(key, e, e.value);
    }
    double parse_number(const std::string& key, const Entry& e, const std::string& text) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw error(key, e, fmt::format("'{}' is not a number", text));
        }
    }

    const EntryMap& entries_;
};

ModelConfig build(const EntryMap& entries) {
    const Reader r(entries);
    ModelConfig c;

    // Required keys first so their absence is reported by name.
    for (const char* key : {"domain.n_x", "trait.n_theta", "model.epsilon", "model.dispersal",
                            "model.capacity"})
        r.require(key);

    const std::string xbc = r.word("domain.bc", "neumann");
    if (xbc != "neumann" && xbc != "dirichlet")
        throw r.error("domain.bc", r.require("domain.bc"), "expected neumann or dirichlet");
    const std::string tbc = r.word("trait.bc", "periodic");
    if (tbc != "periodic" && tbc != "dirichlet")
        throw r.error("trait.bc", r.require("trait.bc"), "expected periodic or dirichlet");

    try {
        c.spatial = SpatialGrid(r.real("domain.length", 1.0), r.integer("domain.n_x"),
                                xbc == "neumann" ? SpatialBc::neumann : SpatialBc::dirichlet);
    } catch (const std::invalid_argument& e) {
        throw r.error("domain.n_x", r.require("domain.n_x"), e.what());
    }
    try {
        c.trait = TraitGrid(r.integer("trait.n_theta"),
                            tbc == "periodic" ? TraitBc::periodic : TraitBc::dirichlet);
    } catch (const std::invalid_argument& e) {
        throw r.error("trait.n_theta", r.require("trait.n_theta"), e.what());
    }

    c.epsilon = r.real("model.epsilon");
    try {
        c.dispersal = TraitFunction::from_name(r.require("model.dispersal").value,
                                               r.list("model.dispersal_params"));
    } catch (const std::invalid_argument& e) {
        throw r.error("model.dispersal", r.require("model.dispersal"), e.what());
    }
    try {
        c.capacity = SpatialFunction::from_name(r.require("model.capacity").value,
                                                r.list("model.capacity_params"));
    } catch (const std::invalid_argument& e) {
        throw r.error("model.capacity", r.require("model.capacity"), e.what());
    }
    if (r.has("model.theta_m")) c.theta_m = r.real("model.theta_m");
    c.initial_center = r.real("model.initial_center", c.initial_center);
    c.initial_width = r.real("model.initial_width", c.initial_width);
    c.epsilons = r.list("model.epsilons");

    auto& s = c.solver;
    s.eigen_tol = r.real("solver.eigen_tol", s.eigen_tol);
    s.newton_tol = r.real("solver.newton_tol", s.newton_tol);
    s.eigen_max_iter = r.integer("solver.eigen_max_iter", s.eigen_max_iter);
    s.newton_max_iter = r.integer("solver.newton_max_iter", s.newton_max_iter);
    s.steady_tol = r.real("solver.steady_tol", s.steady_tol);
    s.max_time = r.real("solver.max_time", s.max_time);
    s.dt = r.real("solver.dt", s.dt);
    const std::string reaction = r.word("solver.reaction", "semi_implicit");
    if (reaction == "explicit") s.reaction = ReactionTreatment::explicit_euler;
    else if (reaction == "semi_implicit") s.reaction = ReactionTreatment::semi_implicit;
    else throw r.error("solver.reaction", r.require("solver.reaction"), "expected explicit or semi_implicit");

    auto& h = c.hj;
    const std::string factor = r.word("hj.gradient_factor", "D");
    if (factor == "D") h.gradient_factor = GradientFactor::dispersal;
    else if (factor == "one") h.gradient_factor = GradientFactor::one;
    else throw r.error("hj.gradient_factor", r.require("hj.gradient_factor"), "expected one or D");
    h.curvature_floor = r.real("hj.curvature_floor", h.curvature_floor);
    h.tol_ess = r.real("hj.tol_ess", h.tol_ess);
    h.theta0 = r.real("hj.theta0", h.theta0);
    h.final_time = r.real("hj.final_time", h.final_time);
    h.dt = r.real("hj.dt", h.dt);
    h.stall_steps = r.integer("hj.stall_steps", h.stall_steps);
    h.stall_tol = r.real("hj.stall_tol", h.stall_tol);
    h.initial_curvature = r.real("hj.initial_curvature", h.initial_curvature);

    auto& o = c.output;
    o.final_time = r.real("output.final_time", o.final_time);
    o.snapshot_times = r.list("output.snapshot_times");
    o.sample_every = r.integer("output.sample_every", o.sample_every);
    return c;
}

std::string number(double v) { return fmt::format("{:.17g}", v); }

std::string numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += number(v[i]);
    }
    return out;
}

}  // namespace

ModelConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides) {
    EntryMap entries;
    parse_into(text, entries, 0);
    apply_overrides(overrides, entries);
    return build(entries);
}

ModelConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), overrides);
}

std::vector<std::string> preset_names() { return {"figure1", "smooth_periodic", "canonical"}; }

std::string preset_text(const std::string& name) {
    if (name == "figure1") return std::string(figure1_text);
    if (name == "smooth_periodic") return std::string(smooth_periodic_text);
    if (name == "canonical") return std::string(canonical_text);
    throw ConfigError(fmt::format("unknown preset '{}'", name));
}

ModelConfig preset_config(const std::string& name, const std::vector<std::string>& overrides) {
    return parse_config_text(preset_text(name), overrides);
}

std::string canonical_config(const ModelConfig& c) {
    std::string s;
    auto put = [&](std::string_view key, const std::string& value) {
        s += fmt::format("{} = {}\n", key, value);
    };
    put("domain.length", number(c.spatial.length()));
    put("domain.n_x", std::to_string(c.spatial.size()));
    put("domain.bc", c.spatial.bc() == SpatialBc::neumann ? "neumann" : "dirichlet");
    put("trait.n_theta", std::to_string(c.trait.size()));
    put("trait.bc", c.trait.periodic() ? "periodic" : "dirichlet");
    put("model.epsilon", number(c.epsilon));
    put("model.dispersal", c.dispersal.name());
    put("model.dispersal_params", numbers(c.dispersal.params()));
    put("model.capacity", c.capacity.name());
    put("model.capacity_params", numbers(c.capacity.params()));
    put("model.theta_m", c.theta_m ? number(*c.theta_m) : "auto");
    put("model.initial_center", number(c.initial_center));
    put("model.initial_width", number(c.initial_width));
    put("model.epsilons", numbers(c.epsilons));
    put("solver.eigen_tol", number(c.solver.eigen_tol));
    put("solver.newton_tol", number(c.solver.newton_tol));
    put("solver.eigen_max_iter", std::to_string(c.solver.eigen_max_iter));
    put("solver.newton_max_iter", std::to_string(c.solver.newton_max_iter));
    put("solver.steady_tol", number(c.solver.steady_tol));
    put("solver.max_time", number(c.solver.max_time));
    put("solver.dt", number(c.solver.dt));
    put("solver.reaction",
        c.solver.reaction == ReactionTreatment::explicit_euler ? "explicit" : "semi_implicit");
    put("hj.gradient_factor", c.hj.gradient_factor == GradientFactor::dispersal ? "D" : "one");
    put("hj.curvature_floor", number(c.hj.curvature_floor));
    put("hj.tol_ess", number(c.hj.tol_ess));
    put("hj.theta0", number(c.hj.theta0));
    put("hj.final_time", number(c.hj.final_time));
    put("hj.dt", number(c.hj.dt));
    put("hj.stall_steps", std::to_string(c.hj.stall_steps));
    put("hj.stall_tol", number(c.hj.stall_tol));
    put("hj.initial_curvature", number(c.hj.initial_curvature));
    put("output.final_time", number(c.output.final_time));
    put("output.snapshot_times", numbers(c.output.snapshot_times));
    put("output.sample_every", std::to_string(c.output.sample_every));
    return s;
}

std::string config_digest(const ModelConfig& config) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : canonical_config(config)) {
        hash ^= ch;
        hash *= 1099511628211ull;
    }
    return fmt::format("{:016x}", hash);
}

}  // namespace dispersal
