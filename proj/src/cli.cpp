#include "coopsig/cli.h"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "coopsig/errors.h"
#include "coopsig/io.h"
#include "json.hpp"

namespace coopsig {

namespace {

using ordered_json = nlohmann::ordered_json;

// results.csv -> results.summary.csv / results.rbsb.csv / results.manifest.json
std::filesystem::path derived_path(const std::filesystem::path& out, const char* suffix) {
    std::filesystem::path base = out;
    base.replace_extension();
    return std::filesystem::path(base.string() + suffix);
}

struct OutputSet {
    std::vector<std::pair<std::string, std::string>> entries;  // path, blob hash

    void emit(const std::filesystem::path& path, const std::string& content) {
        atomic_write_text_file(path, content);
        entries.emplace_back(path.string(), git_blob_sha1(content));
    }
};

void write_manifest(const std::filesystem::path& out, const std::string& command,
                    ordered_json config, const OutputSet& outputs) {
    ordered_json manifest;
    manifest["command"] = command;
    manifest["config"] = std::move(config);
    ordered_json files = ordered_json::array();
    for (const auto& [path, hash] : outputs.entries) {
        ordered_json entry;
        entry["path"] = path;
        entry["git_blob_sha1"] = hash;
        files.push_back(std::move(entry));
    }
    manifest["outputs"] = std::move(files);
    atomic_write_text_file(derived_path(out, ".manifest.json"), manifest.dump(2) + "\n");
}

std::vector<Model> parse_model_list(const std::vector<std::string>& names) {
    std::vector<Model> models;
    models.reserve(names.size());
    for (const std::string& name : names) models.push_back(model_from_name(name));
    std::sort(models.begin(), models.end());
    models.erase(std::unique(models.begin(), models.end()), models.end());
    return models;
}

// Empirical rate of trials whose target shares a feature with another item,
// reported per item count by regenerating each distinct trial from its
// recorded seed (valid for battery records, whose trials are always sampled
// from the default grids). The guarantee is provable only at eight or more
// items, so the observed rates at lower counts are worth surfacing.
void report_overloading_per_count(const std::vector<TrialRecord>& records) {
    std::map<int, std::map<long long, const TrialRecord*>> by_count;
    for (const TrialRecord& rec : records) {
        by_count[rec.n_items].emplace(rec.trial_id, &rec);
    }
    for (const auto& [n_items, trials] : by_count) {
        int overloaded = 0;
        for (const auto& [id, rec] : trials) {
            (void)id;
            RandomStream stream(rec->seed);
            if (is_overloaded(sample_trial(stream, default_grid(rec->barrier), n_items))) {
                ++overloaded;
            }
        }
        std::cerr << "overloaded-signal rate at " << n_items
                  << " items: " << static_cast<double>(overloaded) / trials.size() << " over "
                  << trials.size() << " trials\n";
    }
}

// Emits records + summary (and the barrier comparison when both conditions
// appear), then the manifest naming every written file.
void emit_record_outputs(const std::filesystem::path& out, const std::string& command,
                         ordered_json config, const std::vector<TrialRecord>& records,
                         uint64_t seed) {
    OutputSet outputs;
    outputs.emit(out, records_to_csv(records));
    outputs.emit(derived_path(out, ".summary.csv"),
                 summary_to_csv(summarize(records, 10000, seed)));
    const bool has_rb = std::any_of(records.begin(), records.end(), [](const TrialRecord& r) {
        return r.barrier == BarrierCondition::RB;
    });
    const bool has_sb = std::any_of(records.begin(), records.end(), [](const TrialRecord& r) {
        return r.barrier == BarrierCondition::SB;
    });
    if (has_rb && has_sb) {
        outputs.emit(derived_path(out, ".rbsb.csv"), rbsb_to_csv(compare_rb_sb(records, seed)));
    }
    write_manifest(out, command, std::move(config), outputs);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Cooperative overloaded-signaling simulator: gridworld communication "
                 "models, trial batteries, and seeded reports"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML/INI file (flags take precedence)");
    app.allow_config_extras(CLI::config_extras_mode::error);  // typos should not pass silently

    // ---- gen-trials ------------------------------------------------------
    uint64_t gen_seed = 0;
    int gen_n = 100;
    int gen_n_items = 6;
    std::string gen_barrier = "rb";
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen-trials", "Sample trials to a JSON file");
    gen->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
    gen->add_option("--n", gen_n, "Number of trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen->add_option("--n-items", gen_n_items, "Items per trial")
        ->check(CLI::Range(2, 9))
        ->capture_default_str();
    gen->add_option("--barrier", gen_barrier, "Barrier condition")
        ->check(CLI::IsMember({"rb", "sb"}))
        ->capture_default_str();
    gen->add_option("--out", gen_out, "Output trial JSON path")->required();

    // ---- run -------------------------------------------------------------
    uint64_t run_seed = 0;
    double run_beta = 4.0;
    int run_n = 100;
    int run_n_items = 6;
    std::string run_barrier = "rb";
    std::vector<std::string> run_models = {"iw", "arsa", "ju", "self"};
    int run_s_level = 1;
    int run_r_level = 1;
    std::string run_trials_path;
    std::string run_out;
    int run_workers = 0;
    CLI::App* run = app.add_subcommand("run", "Roll models over sampled or loaded trials");
    run->add_option("--seed", run_seed, "Master seed")->capture_default_str();
    run->add_option("--beta", run_beta, "Soft-max rationality")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    CLI::Option* run_n_opt = run->add_option("--n", run_n, "Number of trials to sample")
                                 ->check(CLI::PositiveNumber)
                                 ->capture_default_str();
    CLI::Option* run_n_items_opt = run->add_option("--n-items", run_n_items, "Items per trial")
                                       ->check(CLI::Range(2, 9))
                                       ->capture_default_str();
    CLI::Option* run_barrier_opt = run->add_option("--barrier", run_barrier, "Barrier condition")
                                       ->check(CLI::IsMember({"rb", "sb"}))
                                       ->capture_default_str();
    run->add_option("--models", run_models, "Models to run")
        ->delimiter(',')
        ->check(CLI::IsMember({"iw", "arsa", "ju", "self"}))
        ->capture_default_str();
    run->add_option("--s-level", run_s_level, "Signaler recursion level")
        ->check(CLI::Range(1, 2))
        ->capture_default_str();
    run->add_option("--r-level", run_r_level, "Receiver recursion level")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    CLI::Option* run_trials_opt =
        run->add_option("--trials", run_trials_path, "Load trials from a JSON file")
            ->check(CLI::ExistingFile);
    run_trials_opt->excludes(run_n_opt, run_n_items_opt, run_barrier_opt);
    run->add_option("--out", run_out, "Output records CSV path")->required();
    run->add_option("--workers", run_workers, "Worker threads (0 = hardware)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // ---- sim1 ------------------------------------------------------------
    uint64_t sim1_seed = Sim1Config{}.master_seed;
    double sim1_beta = 4.0;
    int sim1_n = 500;
    int sim1_s_level = 1;
    int sim1_r_level = 1;
    int sim1_workers = 0;
    std::string sim1_filter = "fill";
    std::string sim1_out;
    CLI::App* sim1 = app.add_subcommand(
        "sim1", "Varying-scarcity battery: 2-9 items, all four models, RB arena");
    sim1->add_option("--seed", sim1_seed, "Master seed")->capture_default_str();
    sim1->add_option("--beta", sim1_beta, "Soft-max rationality")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sim1->add_option("--n", sim1_n, "Trials per item-count condition")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim1->add_option("--s-level", sim1_s_level, "Signaler recursion level")
        ->check(CLI::Range(1, 2))
        ->capture_default_str();
    sim1->add_option("--r-level", sim1_r_level, "Receiver recursion level")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    sim1->add_option("--workers", sim1_workers, "Worker threads (0 = hardware)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sim1->add_option("--filter-mode", sim1_filter,
                     "fill: draw until N pass the communication-optimal filter; "
                     "post: draw exactly N, keep the passing subset")
        ->check(CLI::IsMember({"fill", "post"}))
        ->capture_default_str();
    sim1->add_option("--out", sim1_out, "Output records CSV path")->required();

    // ---- sim2 ------------------------------------------------------------
    uint64_t sim2_seed = Sim2Config{}.master_seed;
    double sim2_beta = 4.0;
    int sim2_n = 200;
    int sim2_workers = 0;
    std::string sim2_filter = "fill";
    std::string sim2_out;
    CLI::App* sim2 = app.add_subcommand(
        "sim2", "Barrier-shift battery: 6 items, IW/aRSA level grid, RB and SB arenas");
    sim2->add_option("--seed", sim2_seed, "Master seed")->capture_default_str();
    sim2->add_option("--beta", sim2_beta, "Soft-max rationality")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sim2->add_option("--n", sim2_n, "Trials per cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim2->add_option("--workers", sim2_workers, "Worker threads (0 = hardware)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sim2->add_option("--filter-mode", sim2_filter,
                     "fill: draw until N pass the communication-optimal filter; "
                     "post: draw exactly N, keep the passing subset")
        ->check(CLI::IsMember({"fill", "post"}))
        ->capture_default_str();
    sim2->add_option("--out", sim2_out, "Output records CSV path")->required();

    // ---- report ----------------------------------------------------------
    std::string report_records;
    uint64_t report_seed = 0;
    std::string report_out;
    CLI::App* report = app.add_subcommand("report", "Summarize an existing records CSV");
    report->add_option("records", report_records, "Records CSV to summarize")
        ->required()
        ->check(CLI::ExistingFile);
    report->add_option("--seed", report_seed, "Seed for bootstrap/permutation resampling")
        ->capture_default_str();
    report->add_option("--out", report_out, "Output summary CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage diagnostic
        return 2;
    }

    try {
        if (app.got_subcommand(gen)) {
            const BarrierCondition condition = barrier_condition_from_name(gen_barrier);
            const GridSpec grid = default_grid(condition);
            const RandomStream base =
                RandomStream(gen_seed).derive(tags::kTrials, static_cast<uint64_t>(condition),
                                              static_cast<uint64_t>(gen_n_items));
            const std::vector<Trial> trials = sample_trials(grid, gen_n_items, gen_n, base);
            std::cerr << "overloaded-signal rate: " << overloaded_rate(trials) << " over "
                      << trials.size() << " trials\n";

            OutputSet outputs;
            outputs.emit(gen_out, trials_to_json(trials));
            ordered_json config;
            config["seed"] = gen_seed;
            config["n"] = gen_n;
            config["n_items"] = gen_n_items;
            config["barrier"] = gen_barrier;
            config["out"] = gen_out;
            write_manifest(gen_out, "gen-trials", std::move(config), outputs);
        } else if (app.got_subcommand(run)) {
            std::vector<Trial> trials;
            if (!run_trials_path.empty()) {
                trials = trials_from_json(read_text_file(run_trials_path));
            } else {
                const BarrierCondition condition = barrier_condition_from_name(run_barrier);
                const GridSpec grid = default_grid(condition);
                const RandomStream base =
                    RandomStream(run_seed).derive(tags::kTrials, static_cast<uint64_t>(condition),
                                                  static_cast<uint64_t>(run_n_items));
                trials = sample_trials(grid, run_n_items, run_n, base);
            }
            std::cerr << "overloaded-signal rate: " << overloaded_rate(trials) << " over "
                      << trials.size() << " trials\n";
            std::vector<ModelParams> params_list;
            for (Model m : parse_model_list(run_models)) {
                params_list.emplace_back(m, run_beta, run_s_level, run_r_level);
            }
            const std::vector<TrialRecord> records =
                run_batch(trials, params_list, run_seed, 0, run_workers);

            ordered_json config;
            config["seed"] = run_seed;
            config["beta"] = run_beta;
            if (run_trials_path.empty()) {
                config["n"] = run_n;
                config["n_items"] = run_n_items;
                config["barrier"] = run_barrier;
            } else {
                config["trials"] = run_trials_path;
            }
            ordered_json model_names = ordered_json::array();
            for (const ModelParams& p : params_list) model_names.push_back(model_name(p.model));
            config["models"] = std::move(model_names);
            config["s_level"] = run_s_level;
            config["r_level"] = run_r_level;
            config["workers"] = run_workers;
            config["out"] = run_out;
            emit_record_outputs(run_out, "run", std::move(config), records, run_seed);
        } else if (app.got_subcommand(sim1)) {
            Sim1Config config;
            config.n_per_condition = sim1_n;
            config.master_seed = sim1_seed;
            config.beta = sim1_beta;
            config.signaler_level = sim1_s_level;
            config.receiver_level = sim1_r_level;
            config.workers = sim1_workers;
            config.filter_mode = filter_mode_from_name(sim1_filter);
            const std::vector<TrialRecord> records = run_sim1(config);
            report_overloading_per_count(records);

            ordered_json echo;
            echo["seed"] = sim1_seed;
            echo["beta"] = sim1_beta;
            echo["n"] = sim1_n;
            echo["s_level"] = sim1_s_level;
            echo["r_level"] = sim1_r_level;
            echo["workers"] = sim1_workers;
            echo["filter_mode"] = sim1_filter;
            echo["out"] = sim1_out;
            emit_record_outputs(sim1_out, "sim1", std::move(echo), records, sim1_seed);
        } else if (app.got_subcommand(sim2)) {
            Sim2Config config;
            config.n_per_cell = sim2_n;
            config.master_seed = sim2_seed;
            config.beta = sim2_beta;
            config.workers = sim2_workers;
            config.filter_mode = filter_mode_from_name(sim2_filter);
            const std::vector<TrialRecord> records = run_sim2(config);
            report_overloading_per_count(records);

            ordered_json echo;
            echo["seed"] = sim2_seed;
            echo["beta"] = sim2_beta;
            echo["n"] = sim2_n;
            echo["workers"] = sim2_workers;
            echo["filter_mode"] = sim2_filter;
            echo["out"] = sim2_out;
            emit_record_outputs(sim2_out, "sim2", std::move(echo), records, sim2_seed);
        } else if (app.got_subcommand(report)) {
            const std::vector<TrialRecord> records =
                records_from_csv(read_text_file(report_records));

            OutputSet outputs;
            outputs.emit(report_out, summary_to_csv(summarize(records, 10000, report_seed)));
            const bool has_rb =
                std::any_of(records.begin(), records.end(), [](const TrialRecord& r) {
                    return r.barrier == BarrierCondition::RB;
                });
            const bool has_sb =
                std::any_of(records.begin(), records.end(), [](const TrialRecord& r) {
                    return r.barrier == BarrierCondition::SB;
                });
            if (has_rb && has_sb) {
                outputs.emit(derived_path(report_out, ".rbsb.csv"),
                             rbsb_to_csv(compare_rb_sb(records, report_seed)));
            }
            ordered_json config;
            config["records"] = report_records;
            config["seed"] = report_seed;
            config["out"] = report_out;
            write_manifest(report_out, "report", std::move(config), outputs);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace coopsig
