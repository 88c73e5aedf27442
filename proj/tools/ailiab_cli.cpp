// ailiab — actuarial engine CLI for AI liability insurance analysis.
//
// Subcommands: assess, region, schedule, effort, price, lab.
// Exit codes: 0 success / insurable, 1 input or config error,
// 2 numerical failure, 3 valid-but-negative verdict.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ailiab/config.hpp"
#include "ailiab/contract.hpp"
#include "ailiab/effort.hpp"
#include "ailiab/insurability.hpp"
#include "ailiab/io.hpp"
#include "ailiab/lab.hpp"
#include "ailiab/risk.hpp"
#include "ailiab/roc.hpp"
#include "ailiab/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ailiab;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input_error = 1;
constexpr int exit_numerical = 2;
constexpr int exit_negative = 3;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    bool as_json = false;
};

struct OutputFile {
    std::string path;
    std::string digest;
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ScenarioConfig load(const CommonOpts& opts) {
    std::vector<std::string> overrides = opts.sets;
    if (opts.seed) {
        overrides.push_back("market.seed=" + std::to_string(*opts.seed));
    }
    return load_scenario_config_file(opts.config_path, overrides);
}

json manifest_json(const ScenarioConfig& cfg, const std::vector<OutputFile>& outputs) {
    json m;
    m["tool_version"] = version_string;
    m["config_digest"] = cfg.config_digest;
    if (cfg.market.seed) {
        m["seed"] = *cfg.market.seed;
    } else {
        m["seed"] = nullptr;
    }
    json files = json::array();
    for (const auto& f : outputs) {
        files.push_back({{"path", f.path}, {"digest", f.digest}});
    }
    m["outputs"] = files;
    return m;
}

void print_manifest_text(const ScenarioConfig& cfg, const std::vector<OutputFile>& outputs) {
    std::cout << "manifest\n";
    std::cout << "  tool version:  " << version_string << "\n";
    std::cout << "  config digest: " << cfg.config_digest << "\n";
    if (cfg.market.seed) {
        std::cout << "  seed:          " << *cfg.market.seed << "\n";
    } else {
        std::cout << "  seed:          (none)\n";
    }
    std::cout << "  timestamp:     " << utc_timestamp() << "\n";
    if (outputs.empty()) {
        std::cout << "  outputs:       (none)\n";
    } else {
        std::cout << "  outputs:\n";
        for (const auto& f : outputs) {
            std::cout << "    " << f.path << "  digest=" << f.digest << "\n";
        }
    }
}

std::string provenance_header(const ScenarioConfig& cfg, const std::string& command) {
    std::string out;
    out += "# ailiab " + command + " output\n";
    out += "# tool_version=" + std::string(version_string) + "\n";
    out += "# config_digest=" + cfg.config_digest + "\n";
    out += config_comment_block(cfg);
    return out;
}

OutputFile write_output(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    atomic_write_file(path, content);
    return {path.string(), digest_hex(content)};
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------- assess --

int cmd_assess(const CommonOpts& opts) {
    const ScenarioConfig cfg = load(opts);
    const double sigma_sq = cfg.scenario.uncertainty.sigma0_sq;
    const InsurabilityVerdict v =
        assess(cfg.scenario, cfg.op, sigma_sq, cfg.market.max_premium, cfg.checklist);

    if (opts.as_json) {
        json j;
        j["command"] = "assess";
        j["verdict"] = {
            {"accuracy_ok", v.accuracy_ok},       {"premium_ok", v.premium_ok},
            {"prerequisites_ok", v.prerequisites_ok}, {"insurable", v.insurable},
            {"acc_value", v.acc_value},           {"premium_value", v.premium_value},
        };
        j["operating_point"] = {{"p_f", cfg.op.p_f}, {"p_t", cfg.op.p_t}};
        j["sigma_sq"] = sigma_sq;
        j["max_premium"] = cfg.market.max_premium;
        j["manifest"] = manifest_json(cfg, {});
        std::cout << j.dump(2) << "\n";
    } else {
        std::size_t satisfied = 0;
        for (const auto& item : cfg.checklist.items) satisfied += item.satisfied ? 1 : 0;
        std::cout << "insurability assessment\n";
        std::cout << "  operating point: p_f=" << format_double(cfg.op.p_f)
                  << " p_t=" << format_double(cfg.op.p_t) << "\n";
        std::cout << "  sigma_sq:        " << format_double(sigma_sq) << "\n";
        std::cout << "  accuracy:        " << format_double(v.acc_value)
                  << "  (> 0.8: " << yesno(v.accuracy_ok) << ")\n";
        std::cout << "  fair premium:    " << format_double(v.premium_value)
                  << "  (<= " << format_double(cfg.market.max_premium)
                  << ": " << yesno(v.premium_ok) << ")\n";
        std::cout << "  prerequisites:   " << satisfied << "/" << cfg.checklist.items.size()
                  << " satisfied (" << yesno(v.prerequisites_ok) << ")\n";
        for (const auto& item : cfg.checklist.items) {
            if (!item.satisfied) {
                std::cout << "    failing: " << item.name
                          << (item.note.empty() ? "" : " — " + item.note) << "\n";
            }
        }
        std::cout << "  insurable:       " << yesno(v.insurable) << "\n";
        if (!v.accuracy_ok) std::cout << "  failing constraint: accuracy\n";
        if (!v.premium_ok) std::cout << "  failing constraint: premium\n";
        if (!v.prerequisites_ok) std::cout << "  failing constraint: prerequisites\n";
        print_manifest_text(cfg, {});
    }
    return v.insurable ? exit_ok : exit_negative;
}

// ---------------------------------------------------------------- region --

int cmd_region(const CommonOpts& opts, const std::string& out_path,
               std::optional<int> resolution_flag) {
    const ScenarioConfig cfg = load(opts);
    const int resolution = resolution_flag.value_or(cfg.market.resolution);
    const double sigma_sq = cfg.scenario.uncertainty.sigma0_sq;
    const RegionGrid grid =
        insurable_region(cfg.scenario, sigma_sq, cfg.market.max_premium, resolution);

    std::string csv = provenance_header(cfg, "region");
    csv += "# sigma_sq=" + format_double(sigma_sq) + "\n";
    csv += "# resolution=1/" + std::to_string(resolution) + "\n";
    csv += "p_f,p_t,acc_ok,premium_ok,insurable,premium\n";
    for (const auto& c : grid.cells) {
        csv += format_double(c.p_f);
        csv += ',';
        csv += format_double(c.p_t);
        csv += ',';
        csv += c.accuracy_ok ? '1' : '0';
        csv += ',';
        csv += c.premium_ok ? '1' : '0';
        csv += ',';
        csv += c.insurable ? '1' : '0';
        csv += ',';
        csv += format_double(c.premium);
        csv += '\n';
    }
    const OutputFile out = write_output(out_path, csv);

    int insurable_cells = 0;
    for (const auto& c : grid.cells) insurable_cells += c.insurable ? 1 : 0;
    if (opts.as_json) {
        json j;
        j["command"] = "region";
        j["resolution"] = resolution;
        j["sigma_sq"] = sigma_sq;
        j["cells"] = grid.cells.size();
        j["insurable_cells"] = insurable_cells;
        j["manifest"] = manifest_json(cfg, {out});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "insurable region sweep\n";
        std::cout << "  resolution:      1/" << resolution << "\n";
        std::cout << "  sigma_sq:        " << format_double(sigma_sq) << "\n";
        std::cout << "  insurable cells: " << insurable_cells << " of " << grid.cells.size()
                  << "\n";
        print_manifest_text(cfg, {out});
    }
    return exit_ok;
}

// -------------------------------------------------------------- schedule --

int cmd_schedule(const CommonOpts& opts, const std::string& out_path,
                 const std::string& price_point_flag) {
    const ScenarioConfig cfg = load(opts);
    PricePoint pp = cfg.market.price_point;
    if (!price_point_flag.empty()) {
        if (price_point_flag == "lower") pp = PricePoint::lower;
        else if (price_point_flag == "mid") pp = PricePoint::mid;
        else if (price_point_flag == "upper") pp = PricePoint::upper;
        else throw ConfigError("--price-point must be lower|mid|upper");
    }
    if (cfg.market.t_grid.empty()) {
        throw ConfigError("cmd schedule requires market.t_grid");
    }
    const PremiumSchedule ps = premium_schedule(cfg.scenario, cfg.op, cfg.market.rho,
                                                cfg.market.t_grid, pp, cfg.market.epsilon);

    std::string csv = provenance_header(cfg, "schedule");
    const char* pp_name = pp == PricePoint::lower ? "lower" : pp == PricePoint::mid ? "mid" : "upper";
    csv += std::string("# price_point=") + pp_name + "\n";
    csv += "# floor=" + format_double(ps.floor) + "\n";
    csv += "t,premium,floor\n";
    int diverged = 0;
    for (std::size_t i = 0; i < ps.times.size(); ++i) {
        if (std::isinf(ps.premiums[i])) ++diverged;
        csv += format_double(ps.times[i]);
        csv += ',';
        csv += format_double(ps.premiums[i]);
        csv += ',';
        csv += format_double(ps.floor);
        csv += '\n';
    }
    const OutputFile out = write_output(out_path, csv);

    if (opts.as_json) {
        json j;
        j["command"] = "schedule";
        j["price_point"] = pp_name;
        j["floor"] = ps.floor;
        j["points"] = ps.times.size();
        j["diverged_points"] = diverged;
        j["manifest"] = manifest_json(cfg, {out});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "premium schedule\n";
        std::cout << "  price point: " << pp_name << "\n";
        std::cout << "  floor:       " << format_double(ps.floor) << "\n";
        std::cout << "  points:      " << ps.times.size() << "\n";
        if (diverged > 0) {
            std::cout << "  warning: MGF diverges at " << diverged
                      << " time(s); premium reported as inf (certainty bound is vacuous there)\n";
        }
        print_manifest_text(cfg, {out});
    }
    return exit_ok;
}

// ---------------------------------------------------------------- effort --

int cmd_effort(const CommonOpts& opts) {
    const ScenarioConfig cfg = load(opts);
    const double lbar = retained_exposure(cfg.scenario, cfg.market.rho);
    const EffortSolution sol =
        solve_optimal_effort(cfg.scenario.effort_model, cfg.scenario.roc, lbar);

    std::optional<TwoActionChoice> mh;
    if (cfg.effort_a_low && cfg.effort_a_high && lbar > 0.0) {
        mh = moral_hazard_check(cfg.scenario.effort_model, cfg.scenario.roc, lbar,
                                *cfg.effort_a_low, *cfg.effort_a_high);
    }

    if (opts.as_json) {
        json j;
        j["command"] = "effort";
        j["lbar"] = lbar;
        j["solution"] = {{"a_opt", sol.a_opt},
                         {"objective_value", sol.objective_value},
                         {"interior", sol.interior}};
        if (mh) {
            j["moral_hazard"] = {
                {"a_low", mh->a_low},
                {"a_high", mh->a_high},
                {"probability_gain", mh->probability_gain},
                {"cost_ratio", mh->cost_ratio},
                {"condition_satisfied", mh->condition_satisfied},
                {"chosen", mh->chosen == TwoActionChoice::Action::high ? "high" : "low"},
            };
        }
        j["manifest"] = manifest_json(cfg, {});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "hidden-action effort analysis\n";
        std::cout << "  retained exposure L: " << format_double(lbar) << "\n";
        std::cout << "  optimal effort:      " << format_double(sol.a_opt)
                  << (sol.interior ? "  (interior stationary point)" : "  (boundary, a=0)") << "\n";
        std::cout << "  objective value:     " << format_double(sol.objective_value) << "\n";
        if (mh) {
            std::cout << "moral hazard (two actions a_L=" << format_double(mh->a_low)
                      << ", a_H=" << format_double(mh->a_high) << ")\n";
            std::cout << "  probability gain p(a_L)-p(a_H): " << format_double(mh->probability_gain)
                      << "\n";
            std::cout << "  cost ratio (c(a_H)-c(a_L))/L:   " << format_double(mh->cost_ratio)
                      << "\n";
            std::cout << "  condition satisfied: " << yesno(mh->condition_satisfied) << "\n";
            std::cout << "  agent chooses:       "
                      << (mh->chosen == TwoActionChoice::Action::high ? "high" : "low") << "\n";
        } else if (cfg.effort_a_low || cfg.effort_a_high) {
            std::cout << "moral hazard: skipped (need both effort.a_low and effort.a_high, and "
                         "rho < 1 for a positive retained exposure)\n";
        }
        print_manifest_text(cfg, {});
    }
    return exit_ok;
}

// ----------------------------------------------------------------- price --

int cmd_price(const CommonOpts& opts, bool verify_ir, std::int64_t mc_n) {
    const ScenarioConfig cfg = load(opts);
    const double sigma_sq = cfg.scenario.uncertainty.sigma0_sq;
    const PremiumInterval iv = premium_interval(cfg.scenario, cfg.op, sigma_sq, cfg.market.rho,
                                                cfg.market.epsilon);
    const double fair = fair_premium(cfg.scenario, cfg.op, sigma_sq, cfg.market.rho);
    double posted = iv.lower;
    const char* pp_name = "lower";
    if (cfg.market.price_point == PricePoint::mid) {
        posted = 0.5 * (iv.lower + iv.upper);
        pp_name = "mid";
    } else if (cfg.market.price_point == PricePoint::upper) {
        posted = iv.upper;
        pp_name = "upper";
    }

    std::optional<IrCheck> ir;
    if (verify_ir) {
        if (!cfg.market.seed) {
            throw ConfigError("price --verify-ir requires market.seed (or --seed)");
        }
        if (!std::isfinite(posted)) {
            throw ConfigError("price --verify-ir: posted premium is not finite");
        }
        RandomStream stream(*cfg.market.seed, 0);
        const Participant agent(cfg.market.agent_wealth, cfg.market.epsilon);
        const double effort_cost = cfg.scenario.effort_model.cost.value(cfg.market.effort);
        ir = verify_participation(cfg.scenario, cfg.op, sigma_sq,
                                  Contract(posted, cfg.market.rho), agent, effort_cost, mc_n,
                                  stream);
    }

    if (opts.as_json) {
        json j;
        j["command"] = "price";
        j["interval"] = {{"lower", iv.lower},
                         {"upper", std::isfinite(iv.upper) ? json(iv.upper) : json("inf")},
                         {"nonempty", iv.nonempty}};
        j["fair_premium"] = fair;
        j["price_point"] = pp_name;
        j["posted_premium"] = std::isfinite(posted) ? json(posted) : json("inf");
        j["mgf_diverges"] = !std::isfinite(iv.upper);
        if (ir) {
            j["ir_check"] = {{"participates", ir->participates},
                             {"mean_difference", ir->mean_difference},
                             {"std_error", ir->std_error},
                             {"mc_n", mc_n}};
        }
        j["manifest"] = manifest_json(cfg, {});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "contract pricing (rho=" << format_double(cfg.market.rho)
                  << ", epsilon=" << format_double(cfg.market.epsilon) << ")\n";
        std::cout << "  premium interval: [" << format_double(iv.lower) << ", "
                  << format_double(iv.upper) << "]\n";
        std::cout << "  fair premium:     " << format_double(fair) << "\n";
        std::cout << "  posted (" << pp_name << "):   " << format_double(posted) << "\n";
        if (!std::isfinite(iv.upper)) {
            std::cout << "  warning: MGF diverges (epsilon*rho*D_AI*v*sigma_sq >= 1/2); the upper "
                         "bound is vacuous — Gaussian-tail artifact, not a real willingness to "
                         "pay\n";
        }
        if (ir) {
            std::cout << "  IR verification (n=" << mc_n << "): "
                      << (ir->participates ? "agent participates" : "agent declines")
                      << " (mean diff " << format_double(ir->mean_difference) << ", se "
                      << format_double(ir->std_error) << ")\n";
        }
        print_manifest_text(cfg, {});
    }
    if (ir && !ir->participates) return exit_negative;
    return exit_ok;
}

// ------------------------------------------------------------------- lab --

int cmd_lab(const CommonOpts& opts, const std::string& out_dir) {
    const ScenarioConfig cfg = load(opts);
    if (!cfg.lab) {
        throw ConfigError("cmd lab requires a [lab] section");
    }
    if (!cfg.market.seed) {
        throw ConfigError("cmd lab requires market.seed (or --seed)");
    }
    const LabParams& lp = *cfg.lab;
    if (lp.a_grid.empty()) {
        throw ConfigError("cmd lab requires lab.a_grid");
    }
    const std::uint64_t seed = *cfg.market.seed;

    fs::create_directories(out_dir);
    std::vector<OutputFile> outputs;
    std::string summary = provenance_header(cfg, "lab");
    summary += "a,n_samples,auc,train_log_loss,eval_log_loss\n";

    for (std::size_t i = 0; i < lp.a_grid.size(); ++i) {
        const double a = lp.a_grid[i];
        if (!(a >= 0.0)) throw ConfigError("lab.a_grid entries must be >= 0");
        const std::int64_t n =
            std::llround(cfg.scenario.effort_model.samples.value(a));
        if (n < 1) throw ConfigError("lab.a_grid maps to an empty dataset (h(a) < 1)");

        lab::SyntheticTask train_task(lp.dimension, lp.separation, lp.prior,
                                      RandomStream(seed, 2 * i));
        lab::SyntheticTask eval_task(lp.dimension, lp.separation, lp.prior,
                                     RandomStream(seed, 2 * i + 1));
        const lab::LabeledDataset train = lab::generate_dataset(train_task, n);
        const lab::LabeledDataset eval_set = lab::generate_dataset(eval_task, lp.n_eval);

        lab::SgdConfig sgd{static_cast<std::int64_t>(std::llround(lp.iters_per_sample *
                                                                  static_cast<double>(n))),
                           lp.step_scale, lp.smoothness, lp.batch_size};
        const lab::TrainedClassifier clf = lab::train_logistic_sgd(train, sgd);
        const EmpiricalRoc roc = lab::empirical_roc(clf, eval_set, lp.n_thresholds);
        const double auc_value = auc_empirical(roc);

        std::string roc_csv = provenance_header(cfg, "lab roc");
        roc_csv += "# a=" + format_double(a) + "\n";
        roc_csv += "# n_samples=" + std::to_string(n) + "\n";
        roc_csv += "p_f,p_t\n";
        for (const auto& pt : roc.points) {
            roc_csv += format_double(pt.p_f);
            roc_csv += ',';
            roc_csv += format_double(pt.p_t);
            roc_csv += '\n';
        }
        const fs::path roc_path = fs::path(out_dir) / ("roc_n" + std::to_string(n) + ".csv");
        outputs.push_back(write_output(roc_path, roc_csv));

        summary += format_double(a);
        summary += ',';
        summary += std::to_string(n);
        summary += ',';
        summary += format_double(auc_value);
        summary += ',';
        summary += format_double(clf.train_log_loss);
        summary += ',';
        summary += format_double(lab::log_loss(clf, eval_set));
        summary += '\n';
    }
    const fs::path summary_path = fs::path(out_dir) / "auc_vs_n.csv";
    outputs.push_back(write_output(summary_path, summary));

    if (opts.as_json) {
        json j;
        j["command"] = "lab";
        j["runs"] = lp.a_grid.size();
        j["manifest"] = manifest_json(cfg, outputs);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "classifier lab sweep\n";
        std::cout << "  runs: " << lp.a_grid.size() << "\n";
        print_manifest_text(cfg, outputs);
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ailiab — actuarial engine for AI liability insurance"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("-c,--config", opts.config_path, "scenario config file")->required();
        sub->add_option("--set", opts.sets, "override: section.key=value (repeatable)");
        sub->add_option("--seed", opts.seed, "override market.seed");
        sub->add_flag("--json", opts.as_json, "machine-readable JSON report on stdout");
    };

    auto* c_assess = app.add_subcommand("assess", "insurability verdict at the operating point");
    add_common(c_assess);

    auto* c_region = app.add_subcommand("region", "insurable-region sweep over the ROC square");
    add_common(c_region);
    std::string region_out;
    std::optional<int> resolution_flag;
    c_region->add_option("-o,--out", region_out, "output CSV path")->required();
    c_region->add_option("--resolution", resolution_flag, "cells per axis: 100, 200 or 500");

    auto* c_schedule = app.add_subcommand("schedule", "premium trajectory as uncertainty decays");
    add_common(c_schedule);
    std::string schedule_out;
    std::string price_point_flag;
    c_schedule->add_option("-o,--out", schedule_out, "output CSV path")->required();
    c_schedule->add_option("--price-point", price_point_flag, "lower|mid|upper");

    auto* c_effort = app.add_subcommand("effort", "optimal hidden-action effort and moral hazard");
    add_common(c_effort);

    auto* c_price = app.add_subcommand("price", "premium interval and IR verification");
    add_common(c_price);
    bool verify_ir = false;
    std::int64_t mc_n = 1000000;
    c_price->add_flag("--verify-ir", verify_ir, "Monte Carlo check of the participation constraint");
    c_price->add_option("--mc-n", mc_n, "Monte Carlo sample count (default 1e6)");

    auto* c_lab = app.add_subcommand("lab", "synthetic classifier sweeps over the effort grid");
    add_common(c_lab);
    std::string lab_out;
    c_lab->add_option("-o,--out", lab_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (app.got_subcommand(c_assess)) return cmd_assess(opts);
        if (app.got_subcommand(c_region)) return cmd_region(opts, region_out, resolution_flag);
        if (app.got_subcommand(c_schedule)) return cmd_schedule(opts, schedule_out, price_point_flag);
        if (app.got_subcommand(c_effort)) return cmd_effort(opts);
        if (app.got_subcommand(c_price)) return cmd_price(opts, verify_ir, mc_n);
        if (app.got_subcommand(c_lab)) return cmd_lab(opts, lab_out);
        std::cerr << "error: no subcommand\n";
        return exit_input_error;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const MgfDivergenceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::domain_error& e) {
        // precondition violations are bad inputs, not numerical failures
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    }
}
