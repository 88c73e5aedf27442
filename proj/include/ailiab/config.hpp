#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ailiab/errors.hpp"
#include "ailiab/insurability.hpp"
#include "ailiab/io.hpp"
#include "ailiab/risk.hpp"

namespace ailiab {

namespace detail {

inline std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

} // namespace detail

// Raw sectioned key=value document. `#` starts a comment line; sections are
// `[name]` headers. Every key must be consumed by the loader, otherwise it
// is reported as unknown with its line number.
class ConfigDoc {
public:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };

    static ConfigDoc parse(std::string_view text) {
        ConfigDoc doc;
        std::string current;
        int current_line = 0;
        int line_no = 0;
        std::istringstream in{std::string(text)};
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string line = detail::trim(raw);
            if (line.empty() || line[0] == '#') continue;
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3) {
                    throw ConfigError("malformed section header", line_no);
                }
                current = detail::trim(line.substr(1, line.size() - 2));
                if (current.empty()) throw ConfigError("empty section name", line_no);
                current_line = line_no;
                doc.section_lines_[current] = current_line;
                doc.sections_.try_emplace(current);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("expected `key = value` or `[section]`", line_no);
            }
            if (current.empty()) {
                throw ConfigError("key outside of any [section]", line_no);
            }
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", line_no);
            auto [it, inserted] = doc.sections_[current].try_emplace(key, Entry{value, line_no});
            if (!inserted) {
                throw ConfigError("duplicate key `" + current + "." + key + "`", line_no);
            }
        }
        return doc;
    }

    // Applies a `section.key=value` override (used by --set and --seed).
    void apply_override(std::string_view assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("override must look like section.key=value: " +
                              std::string(assignment));
        }
        const std::string target = detail::trim(assignment.substr(0, eq));
        const std::string value = detail::trim(assignment.substr(eq + 1));
        const auto dot = target.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == target.size()) {
            throw ConfigError("override must look like section.key=value: " +
                              std::string(assignment));
        }
        const std::string section = target.substr(0, dot);
        const std::string key = target.substr(dot + 1);
        sections_[section][key] = Entry{value, 0};
        section_lines_.try_emplace(section, 0);
    }

    const Entry* find(const std::string& section, const std::string& key) const {
        const auto sit = sections_.find(section);
        if (sit == sections_.end()) return nullptr;
        const auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return nullptr;
        kit->second.used = true;
        return &kit->second;
    }

    const Entry& require(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) {
            throw ConfigError("missing required key `" + section + "." + key + "`",
                              section_line(section));
        }
        return *e;
    }

    bool has_section(const std::string& section) const {
        return sections_.count(section) != 0;
    }

    int section_line(const std::string& section) const {
        const auto it = section_lines_.find(section);
        return it == section_lines_.end() ? 0 : it->second;
    }

    // Marks every key of a section as consumed (checklist keys are free-form).
    void consume_section(const std::string& section) const {
        const auto sit = sections_.find(section);
        if (sit == sections_.end()) return;
        for (const auto& [key, entry] : sit->second) entry.used = true;
    }

    void reject_unknown() const {
        for (const auto& [section, keys] : sections_) {
            for (const auto& [key, entry] : keys) {
                if (!entry.used) {
                    throw ConfigError("unknown key `" + section + "." + key + "`", entry.line);
                }
            }
        }
    }

    // Canonical `section.key=value` listing (sorted), used for digests and
    // the `# ` provenance comments of every output file.
    std::string canonical_text() const {
        std::string out;
        for (const auto& [section, keys] : sections_) {
            for (const auto& [key, entry] : keys) {
                out += section;
                out += '.';
                out += key;
                out += '=';
                out += entry.value;
                out += '\n';
            }
        }
        return out;
    }

    double get_double(const std::string& section, const std::string& key) const {
        return parse_double(require(section, key), section, key);
    }

    std::optional<double> get_double_opt(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        return parse_double(*e, section, key);
    }

    std::optional<std::int64_t> get_int_opt(const std::string& section,
                                            const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        try {
            std::size_t pos = 0;
            const std::int64_t v = std::stoll(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key `" + section + "." + key + "`: not an integer: " + e->value,
                              e->line);
        }
    }

    std::optional<std::uint64_t> get_uint_opt(const std::string& section,
                                              const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
            return static_cast<std::uint64_t>(v);
        } catch (const std::exception&) {
            throw ConfigError("key `" + section + "." + key +
                                  "`: not an unsigned integer: " + e->value,
                              e->line);
        }
    }

    const auto& sections() const { return sections_; }

private:
    static double parse_double(const Entry& e, const std::string& section, const std::string& key) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key `" + section + "." + key + "`: not a number: " + e.value,
                              e.line);
        }
    }

    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::map<std::string, int> section_lines_;
};

// Analysis parameters shared by the CLI subcommands.
struct MarketParams {
    double max_premium = 0.0;
    double rho = 1.0;
    double epsilon = 0.0;
    std::optional<std::uint64_t> seed;
    int resolution = 200;
    std::vector<double> t_grid;
    PricePoint price_point = PricePoint::lower;
    double agent_wealth = 0.0;
    double effort = 0.0; // effort level whose cost enters the IR check
};

struct LabParams {
    int dimension = 5;
    double separation = 1.0;
    double prior = 0.5;
    std::vector<double> a_grid;
    double iters_per_sample = 10.0;
    double step_scale = 1.0;
    double smoothness = 1.0;
    int batch_size = 1;
    int n_eval = 2000;
    int n_thresholds = 200;
};

// Fully validated scenario configuration.
struct ScenarioConfig {
    RiskScenario scenario;
    OperatingPoint op;
    MarketParams market;
    QualityChecklist checklist;
    std::optional<LabParams> lab;
    std::optional<double> effort_a_low;
    std::optional<double> effort_a_high;
    std::string canonical_text;
    std::string config_digest;
};

namespace detail {

inline std::vector<double> parse_number_list(const ConfigDoc::Entry& e, const std::string& where) {
    // Either `start:stop:count` or a comma-separated list.
    std::vector<double> out;
    const std::string& v = e.value;
    const auto ncolons = std::count(v.begin(), v.end(), ':');
    try {
        if (ncolons == 2) {
            const auto c1 = v.find(':');
            const auto c2 = v.find(':', c1 + 1);
            const double start = std::stod(v.substr(0, c1));
            const double stop = std::stod(v.substr(c1 + 1, c2 - c1 - 1));
            const long count = std::stol(v.substr(c2 + 1));
            if (count < 1) throw std::invalid_argument("count must be >= 1");
            if (count == 1) {
                out.push_back(start);
            } else {
                for (long i = 0; i < count; ++i) {
                    out.push_back(start + (stop - start) * static_cast<double>(i) /
                                              static_cast<double>(count - 1));
                }
            }
        } else {
            std::istringstream ss(v);
            std::string piece;
            while (std::getline(ss, piece, ',')) {
                out.push_back(std::stod(trim(piece)));
            }
            if (out.empty()) throw std::invalid_argument("empty list");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(where + ": expected `start:stop:count` or a comma list (" + ex.what() +
                              "): " + v,
                          e.line);
    }
    return out;
}

inline bool parse_checklist_value(const ConfigDoc::Entry& e, const std::string& name,
                                  std::string& note) {
    // `true`, `false`, optionally followed by `: evidence note`.
    std::string v = e.value;
    const auto colon = v.find(':');
    if (colon != std::string::npos) {
        note = trim(v.substr(colon + 1));
        v = trim(v.substr(0, colon));
    }
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("checklist flag `" + name + "` must be true or false (got: " + v + ")",
                      e.line);
}

} // namespace detail

// Builds the validated scenario from a parsed document. Domain-type
// invariant violations are reported as config errors with the section's
// line number.
inline ScenarioConfig build_scenario_config(const ConfigDoc& doc) {
    auto wrap = [&doc](const std::string& section, auto&& fn) {
        try {
            return fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("[" + section + "] " + e.what(), doc.section_line(section));
        }
    };

    PopulationModel population = wrap("population", [&] {
        return PopulationModel(doc.get_double("population", "k"), doc.get_double("population", "n"),
                               doc.get_double("population", "d_doc"));
    });
    DamageModel damages = wrap("damages", [&] {
        return DamageModel(doc.get_double("damages", "alpha"), doc.get_double("damages", "beta"),
                           doc.get_double("damages", "w"), doc.get_double("damages", "t_quarantine"),
                           doc.get_double("damages", "m_treatment"), doc.get_double("damages", "r0"));
    });
    UncertaintyModel uncertainty = wrap("uncertainty", [&] {
        return UncertaintyModel(doc.get_double("uncertainty", "v"),
                                doc.get_double("uncertainty", "sigma0_sq"),
                                doc.get_double("uncertainty", "m"));
    });
    RocModel roc_model = wrap("roc", [&] { return RocModel(doc.get_double("roc", "d_const")); });
    OperatingPoint op = wrap("roc", [&] {
        OperatingPoint p{doc.get_double("roc", "p_f"), doc.get_double("roc", "p_t")};
        p.validate();
        return p;
    });
    EffortModel effort_model = wrap("effort", [&] {
        return EffortModel::quadratic_linear(doc.get_double("effort", "c0"),
                                             doc.get_double("effort", "h0"));
    });

    MarketParams market;
    market.max_premium = doc.get_double("market", "max_premium");
    market.rho = doc.get_double("market", "rho");
    market.epsilon = doc.get_double("market", "epsilon");
    market.seed = doc.get_uint_opt("market", "seed");
    if (const auto res = doc.get_int_opt("market", "resolution")) {
        if (*res != 100 && *res != 200 && *res != 500) {
            throw ConfigError("market.resolution must be 100, 200 or 500",
                              doc.section_line("market"));
        }
        market.resolution = static_cast<int>(*res);
    }
    if (const auto* e = doc.find("market", "t_grid")) {
        market.t_grid = detail::parse_number_list(*e, "market.t_grid");
        for (std::size_t i = 0; i < market.t_grid.size(); ++i) {
            if (!(market.t_grid[i] >= 0.0)) {
                throw ConfigError("market.t_grid entries must be >= 0", e->line);
            }
            if (i > 0 && market.t_grid[i] < market.t_grid[i - 1]) {
                throw ConfigError("market.t_grid must be nondecreasing", e->line);
            }
        }
    }
    if (const auto* e = doc.find("market", "price_point")) {
        if (e->value == "lower") market.price_point = PricePoint::lower;
        else if (e->value == "mid") market.price_point = PricePoint::mid;
        else if (e->value == "upper") market.price_point = PricePoint::upper;
        else throw ConfigError("market.price_point must be lower|mid|upper", e->line);
    }
    if (const auto w = doc.get_double_opt("market", "agent_wealth")) market.agent_wealth = *w;
    if (const auto a = doc.get_double_opt("market", "effort")) market.effort = *a;
    if (!(market.max_premium >= 0.0)) {
        throw ConfigError("market.max_premium must be >= 0", doc.section_line("market"));
    }
    if (!(market.rho > 0.0 && market.rho <= 1.0)) {
        throw ConfigError("market.rho must lie in (0,1]", doc.section_line("market"));
    }
    if (!(market.agent_wealth >= 0.0)) {
        throw ConfigError("market.agent_wealth must be >= 0", doc.section_line("market"));
    }
    if (!(market.effort >= 0.0)) {
        throw ConfigError("market.effort must be >= 0", doc.section_line("market"));
    }

    QualityChecklist checklist;
    if (doc.has_section("checklist")) {
        const auto& keys = doc.sections().at("checklist");
        for (const auto& [name, entry] : keys) {
            std::string note;
            const bool ok = detail::parse_checklist_value(entry, name, note);
            checklist.items.push_back({name, ok, note});
        }
        doc.consume_section("checklist");
    }

    std::optional<LabParams> lab;
    if (doc.has_section("lab")) {
        LabParams lp;
        if (const auto d = doc.get_int_opt("lab", "dimension")) lp.dimension = static_cast<int>(*d);
        if (const auto s = doc.get_double_opt("lab", "separation")) lp.separation = *s;
        if (const auto p = doc.get_double_opt("lab", "prior")) lp.prior = *p;
        if (const auto* e = doc.find("lab", "a_grid")) {
            lp.a_grid = detail::parse_number_list(*e, "lab.a_grid");
        }
        if (const auto v = doc.get_double_opt("lab", "iters_per_sample")) lp.iters_per_sample = *v;
        if (const auto v = doc.get_double_opt("lab", "step_scale")) lp.step_scale = *v;
        if (const auto v = doc.get_double_opt("lab", "smoothness")) lp.smoothness = *v;
        if (const auto v = doc.get_int_opt("lab", "batch_size")) {
            lp.batch_size = static_cast<int>(*v);
        }
        if (const auto v = doc.get_int_opt("lab", "n_eval")) lp.n_eval = static_cast<int>(*v);
        if (const auto v = doc.get_int_opt("lab", "n_thresholds")) {
            lp.n_thresholds = static_cast<int>(*v);
        }
        lab = lp;
    }

    std::optional<double> a_low = doc.get_double_opt("effort", "a_low");
    std::optional<double> a_high = doc.get_double_opt("effort", "a_high");

    doc.reject_unknown();

    ScenarioConfig cfg{
        RiskScenario{population, damages, uncertainty, roc_model, effort_model},
        op,
        std::move(market),
        std::move(checklist),
        std::move(lab),
        a_low,
        a_high,
        doc.canonical_text(),
        {},
    };
    cfg.config_digest = digest_hex(cfg.canonical_text);
    return cfg;
}

inline ScenarioConfig load_scenario_config(std::string_view text,
                                           std::span<const std::string> overrides = {}) {
    ConfigDoc doc = ConfigDoc::parse(text);
    for (const auto& o : overrides) doc.apply_override(o);
    return build_scenario_config(doc);
}

inline ScenarioConfig load_scenario_config_file(const std::string& path,
                                                std::span<const std::string> overrides = {}) {
    return load_scenario_config(read_file(path), overrides);
}

// `# section.key=value` provenance block for output files.
inline std::string config_comment_block(const ScenarioConfig& cfg) {
    std::string out;
    std::istringstream in(cfg.canonical_text);
    std::string line;
    while (std::getline(in, line)) {
        out += "# ";
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace ailiab
