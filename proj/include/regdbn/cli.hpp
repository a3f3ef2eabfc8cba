#pragma once

#include <map>
#include <string>

#include "regdbn/pipeline.hpp"
#include "regdbn/synth.hpp"

namespace regdbn {

// Fully resolved run description. One RunConfig maps 1:1 onto a manifest
// file, and replaying a manifest reproduces the run byte for byte.
struct RunConfig {
    std::string command;          // synth | train | benchmark
    std::string preset = "case1"; // case1 | case2 | none
    std::string data_path;
    std::string train_path; // benchmark alternative to year splitting
    std::string test_path;
    std::string target_column = "target";
    std::string year_column = "year";
    std::string models = "regdbn";       // comma list for benchmark
    std::string fractions = "5:100:5";   // percent grammar: start:stop:step or list
    std::string train_years;             // e.g. 2000:2006
    std::string test_years;              // e.g. 2007:2008
    std::vector<std::size_t> hidden_sizes = {10, 10};
    std::size_t input_width = 0; // preset feature count; 0 skips the check
    std::size_t pretrain_epochs = 20;
    std::size_t finetune_epochs = 1000;
    double unsup_lr = 1.0;
    double sup_lr = 0.5;
    double alpha = 1.0;
    double beta = 0.01;
    bool reestimate = false;
    std::size_t reestimate_interval = 10;
    double sigma = 0.2;
    double noise_control = 1.0;
    std::size_t batch_size = 100;
    std::size_t rows = 0; // synth row override; 0 keeps the preset size
    std::size_t reps = 10;
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

// Verbatim model settings behind --preset.
struct Preset {
    std::string name;
    std::size_t input_width;
    std::vector<std::size_t> hidden_sizes;
    double unsup_lr;
    std::size_t pretrain_epochs;
    std::size_t finetune_epochs;
    std::string train_years;
    std::string test_years;
};

const std::vector<Preset>& preset_table();
void apply_preset(RunConfig& config, const std::string& name);

// Percent grammar: "5:100:5" sweeps start:stop:step, "5,25,50" lists values,
// "100" is a single value. Returns fractions in (0, 1].
VectorD parse_fractions(const std::string& text);

// "2000:2006" for a range, "2007,2008" for a list.
std::vector<int> parse_years(const std::string& text);

// key = value lines, sorted by key.
std::map<std::string, std::string> config_to_manifest(const RunConfig& config);
RunConfig config_from_manifest(const std::map<std::string, std::string>& manifest);
void write_manifest(const std::map<std::string, std::string>& manifest,
                    const std::string& path);
std::map<std::string, std::string> read_manifest(const std::string& path);

NetPipelineConfig pipeline_config(const RunConfig& config);

// Subcommand bodies; each writes its outputs plus a manifest under
// config.out_dir and returns the path of the primary output.
std::string run_synth(const RunConfig& config);
std::string run_train(const RunConfig& config);
std::string run_benchmark(const RunConfig& config);

} // namespace regdbn
