#include "ampsim/config.hpp"

#include "ampsim/csv.hpp"
#include "ampsim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <sstream>

namespace ampsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double to_double(std::string_view key, std::string_view text) {
    const std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError(std::string(key) + ": '" + s + "' is not a number");
    return v;
}

std::size_t to_count(std::string_view key, std::string_view text) {
    const std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s.front() == '-' || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError(std::string(key) + ": '" + s + "' is not a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string_view rest = trim(text);
    while (!rest.empty()) {
        const auto cut = rest.find(',');
        out.push_back(to_double(key, rest.substr(0, cut)));
        rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 1);
    }
    if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + format_double(v[k]);
    return out;
}

std::string optional_text(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::optional<double> to_optional(std::string_view key, std::string_view text) {
    if (trim(text).empty()) return std::nullopt;
    return to_double(key, text);
}

struct Setting {
    const char* section;
    const char* key;
    void (*set)(RunConfig&, std::string_view);
    std::string (*get)(const RunConfig&);
};

#define AMPSIM_NUMBER(SECTION, KEY, FIELD)                                                     \
    Setting {                                                                                  \
        SECTION, KEY, [](RunConfig& c, std::string_view v) { c.FIELD = to_double(KEY, v); },   \
            [](const RunConfig& c) { return format_double(c.FIELD); }                          \
    }
#define AMPSIM_COUNT(SECTION, KEY, FIELD)                                                      \
    Setting {                                                                                  \
        SECTION, KEY, [](RunConfig& c, std::string_view v) { c.FIELD = to_count(KEY, v); },    \
            [](const RunConfig& c) { return std::to_string(c.FIELD); }                         \
    }
#define AMPSIM_OPTIONAL(SECTION, KEY, FIELD)                                                   \
    Setting {                                                                                  \
        SECTION, KEY, [](RunConfig& c, std::string_view v) { c.FIELD = to_optional(KEY, v); }, \
            [](const RunConfig& c) { return optional_text(c.FIELD); }                          \
    }

const std::vector<Setting>& settings() {
    static const std::vector<Setting> table{
        AMPSIM_NUMBER("early", "va", early.va),
        AMPSIM_NUMBER("early", "s", early.s),
        AMPSIM_NUMBER("circuit", "vcc", circuit.vcc),
        AMPSIM_NUMBER("circuit", "r", circuit.r_load),
        AMPSIM_NUMBER("circuit", "c", circuit.c_load),
        AMPSIM_OPTIONAL("circuit", "r_b", circuit.r_b),
        AMPSIM_OPTIONAL("circuit", "r_i", circuit.r_i),
        AMPSIM_OPTIONAL("circuit", "v_r", circuit.v_r),
        AMPSIM_NUMBER("stimulus", "offset", stimulus.offset),
        AMPSIM_NUMBER("stimulus", "amplitude", stimulus.amplitude),
        AMPSIM_NUMBER("stimulus", "f", stimulus.frequency),
        AMPSIM_NUMBER("stimulus", "phase", stimulus.phase),
        AMPSIM_COUNT("sim", "nt", sim.n_steps),
        AMPSIM_COUNT("sim", "cycles", sim.n_cycles),
        AMPSIM_COUNT("sim", "discard", sim.discard_cycles),
        Setting{"sim", "scheme",
                [](RunConfig& c, std::string_view v) {
                    v = trim(v);
                    if (v == "euler") c.sim.scheme = Scheme::euler;
                    else if (v == "trapezoidal") c.sim.scheme = Scheme::trapezoidal;
                    else throw ConfigError("scheme must be euler or trapezoidal");
                },
                [](const RunConfig& c) {
                    return std::string(c.sim.scheme == Scheme::euler ? "euler" : "trapezoidal");
                }},
        Setting{"sim", "initial",
                [](RunConfig& c, std::string_view v) {
                    v = trim(v);
                    if (v == "discharged") c.sim.initial = InitialState::discharged;
                    else if (v == "dc") c.sim.initial = InitialState::dc_operating_point;
                    else throw ConfigError("initial must be discharged or dc");
                },
                [](const RunConfig& c) {
                    return std::string(c.sim.initial == InitialState::discharged ? "discharged"
                                                                                  : "dc");
                }},
        AMPSIM_NUMBER("sweep", "va_min", grid.va_min),
        AMPSIM_NUMBER("sweep", "va_max", grid.va_max),
        AMPSIM_NUMBER("sweep", "s_min", grid.s_min),
        AMPSIM_NUMBER("sweep", "s_max", grid.s_max),
        AMPSIM_COUNT("sweep", "n_va", grid.n_va),
        AMPSIM_COUNT("sweep", "n_s", grid.n_s),
        Setting{"sweep", "r_values",
                [](RunConfig& c, std::string_view v) { c.scan.r_values = to_list("r_values", v); },
                [](const RunConfig& c) { return list_text(c.scan.r_values); }},
        AMPSIM_NUMBER("scan", "ib_max", scan.ib_max),
        AMPSIM_COUNT("scan", "ib_points", scan.ib_points),
        AMPSIM_NUMBER("scan", "xi", scan.xi),
        Setting{"output", "out",
                [](RunConfig& c, std::string_view v) { c.output_path = std::string(trim(v)); },
                [](const RunConfig& c) { return c.output_path.string(); }},
    };
    return table;
}

#undef AMPSIM_NUMBER
#undef AMPSIM_COUNT
#undef AMPSIM_OPTIONAL

const Setting* find_setting(std::string_view key) {
    const auto& table = settings();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Setting& s) { return key == s.key; });
    return it == table.end() ? nullptr : &*it;
}

bool known_section(std::string_view name) {
    const auto& table = settings();
    return std::any_of(table.begin(), table.end(),
                       [&](const Setting& s) { return name == s.section; });
}

// Splits "a=1, b=2" into assignments. A comma piece without '=' continues the
// previous value, so list values such as r_values=30,60,150 survive.
std::vector<std::string_view> split_assignments(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const auto cut = line.find(',', start);
        const std::size_t end = cut == std::string_view::npos ? line.size() : cut;
        const std::string_view piece = line.substr(start, end - start);
        if (piece.find('=') != std::string_view::npos || out.empty()) {
            out.push_back(piece);
        } else {
            const char* first = out.back().data();
            out.back() = std::string_view(first, static_cast<std::size_t>(piece.data() + piece.size() - first));
        }
        if (cut == std::string_view::npos) break;
        start = cut + 1;
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    early.validate();
    circuit.validate();
    stimulus.validate();
    sim.validate();
    grid.validate();
    if (scan.r_values.empty()) throw ConfigError("r_values must not be empty");
    for (double r : scan.r_values)
        if (!(r >= 0.0)) throw ConfigError("r_values must be non-negative");
    if (!(scan.ib_max > 0.0)) throw ConfigError("ib_max must be positive");
    if (scan.ib_points < 2) throw ConfigError("ib_points must be at least 2");
    if (!(scan.xi > 0.0)) throw ConfigError("xi must be positive");
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    const Setting* s = find_setting(trim(key));
    if (!s) throw ConfigError("unknown key '" + std::string(trim(key)) + "'");
    s->set(cfg, value);
}

RunConfig parse_config_unvalidated(std::string_view text) {
    RunConfig cfg;
    bool offset_given = false;
    std::string section;
    std::size_t line_no = 0;
    std::string_view rest = text;
    while (!rest.empty()) {
        ++line_no;
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);

        const auto hash = line.find_first_of("#;");
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section))
                throw ConfigError(where + "unknown section '" + section + "'");
            continue;
        }
        for (std::string_view piece : split_assignments(line)) {
            piece = trim(piece);
            if (piece.empty()) continue;
            const auto eq = piece.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(where + "expected key=value, got '" + std::string(piece) + "'");
            const std::string_view key = trim(piece.substr(0, eq));
            const Setting* s = find_setting(key);
            if (!s) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
            if (!section.empty() && section != s->section)
                throw ConfigError(where + "key '" + std::string(key) + "' belongs in [" +
                                  s->section + "], not [" + section + "]");
            try {
                s->set(cfg, piece.substr(eq + 1));
            } catch (const ConfigError& e) {
                throw ConfigError(where + e.what());
            }
            if (key == "offset") offset_given = true;
        }
    }
    // Bias convention: without an explicit offset the drive spans [0, 2*amplitude].
    if (!offset_given) cfg.stimulus.offset = cfg.stimulus.amplitude;
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg = parse_config_unvalidated(text);
    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const Setting& s : settings()) {
        if (section != s.section) {
            section = s.section;
            out << (out.tellp() > 0 ? "\n" : "") << '[' << section << "]\n";
        }
        out << s.key << " = " << s.get(cfg) << '\n';
    }
    return out.str();
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const Setting& s : settings()) keys.emplace_back(s.key);
    return keys;
}

EnvLookup process_environment() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

RunConfig resolve_run_config(std::optional<std::string_view> document, const EnvLookup& env,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig cfg = document ? parse_config_unvalidated(*document) : RunConfig{};
    for (const std::string& key : config_keys()) {
        std::string name(kEnvPrefix);
        for (char ch : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (const auto v = env(name)) {
            try {
                apply_setting(cfg, key, *v);
            } catch (const ConfigError& e) {
                throw ConfigError(name + ": " + e.what());
            }
        }
    }
    for (const auto& [key, value] : overrides) apply_setting(cfg, key, value);
    cfg.validate();
    return cfg;
}

}  // namespace ampsim
