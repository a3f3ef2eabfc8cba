#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "regdbn/cli.hpp"

namespace {

int category_code(const std::string& category) {
    if (category == "invalid_input" || category == "dimension") return 2;
    if (category == "schema") return 3;
    if (category == "io") return 4;
    if (category == "divergence") return 5;
    if (category == "convergence") return 6;
    if (category == "experiment") return 7;
    return 9;
}

void add_model_flags(CLI::App* cmd, regdbn::RunConfig& cfg, std::string& preset,
                     std::string& hidden) {
    cmd->add_option("--preset", preset, "Model preset: case1, case2 or none");
    cmd->add_option("--structure", hidden, "Hidden layer sizes, e.g. 10,10");
    cmd->add_option("--pretrain-epochs", cfg.pretrain_epochs);
    cmd->add_option("--finetune-epochs", cfg.finetune_epochs);
    cmd->add_option("--unsup-lr", cfg.unsup_lr, "Unsupervised (CD-1) learning rate");
    cmd->add_option("--sup-lr", cfg.sup_lr, "Supervised learning rate");
    cmd->add_option("--alpha", cfg.alpha, "Error-term weight of the objective");
    cmd->add_option("--beta", cfg.beta, "Weight-penalty weight of the objective");
    cmd->add_flag("--reestimate", cfg.reestimate,
                  "Re-estimate alpha/beta by the evidence framework");
    cmd->add_option("--reestimate-interval", cfg.reestimate_interval);
    cmd->add_option("--sigma", cfg.sigma, "Pre-activation noise constant");
    cmd->add_option("--noise-a", cfg.noise_control, "Sigmoid slope parameter");
    cmd->add_option("--batch-size", cfg.batch_size, "CD-1 mini-batch size");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep-belief-network crash-frequency toolkit"};
    app.require_subcommand(1);

    regdbn::RunConfig cfg;
    std::string preset = "case1";
    std::string hidden;
    std::string manifest_path;

    CLI::App* synth = app.add_subcommand("synth", "Write a synthetic dataset CSV");
    synth->add_option("--preset", preset, "Dataset preset: case1 or case2");
    synth->add_option("--rows", cfg.rows, "Row count override");
    synth->add_option("--seed", cfg.seed);
    synth->add_option("--out", cfg.out_dir, "Output directory");

    CLI::App* train = app.add_subcommand("train", "Train one model on a dataset");
    train->add_option("--data", cfg.data_path, "Input CSV")->required();
    train->add_option("--target", cfg.target_column, "Target column name");
    train->add_option("--year-col", cfg.year_column, "Year column name");
    train->add_option("--model", cfg.models, "regdbn or bayesnn");
    train->add_option("--train-years", cfg.train_years,
                      "Keep only these years, e.g. 2000:2006");
    train->add_option("--seed", cfg.seed);
    train->add_option("--out", cfg.out_dir, "Output directory");
    add_model_flags(train, cfg, preset, hidden);

    CLI::App* bench = app.add_subcommand(
        "benchmark", "Bootstrap comparison of models over subset fractions");
    bench->add_option("--manifest", manifest_path,
                      "Replay a previously written manifest; other flags are ignored");
    bench->add_option("--data", cfg.data_path, "Input CSV (split by years)");
    bench->add_option("--train-file", cfg.train_path, "Pre-split training CSV");
    bench->add_option("--test-file", cfg.test_path, "Pre-split testing CSV");
    bench->add_option("--target", cfg.target_column, "Target column name");
    bench->add_option("--year-col", cfg.year_column, "Year column name");
    bench->add_option("--models", cfg.models, "Comma list: nb,kr,bayesnn,regdbn");
    bench->add_option("--fractions", cfg.fractions,
                      "Percent grammar: start:stop:step or comma list");
    bench->add_option("--train-years", cfg.train_years);
    bench->add_option("--test-years", cfg.test_years);
    bench->add_option("--reps", cfg.reps, "Repetitions per fraction");
    bench->add_option("--workers", cfg.workers, "Concurrent repetitions");
    bench->add_option("--seed", cfg.seed);
    bench->add_option("--out", cfg.out_dir, "Output directory");
    add_model_flags(bench, cfg, preset, hidden);

    CLI11_PARSE(app, argc, argv);

    try {
        std::string primary;
        if (synth->parsed()) {
            cfg.command = "synth";
            cfg.preset = preset;
            primary = regdbn::run_synth(cfg);
        } else if (train->parsed()) {
            cfg.command = "train";
            regdbn::apply_preset(cfg, preset);
            if (!hidden.empty()) {
                cfg.hidden_sizes.clear();
                for (const auto& part : CLI::detail::split(hidden, ','))
                    cfg.hidden_sizes.push_back(std::stoul(part));
                cfg.input_width = 0; // explicit structure overrides the preset check
            }
            primary = regdbn::run_train(cfg);
        } else {
            cfg.command = "benchmark";
            if (!manifest_path.empty()) {
                cfg = regdbn::config_from_manifest(regdbn::read_manifest(manifest_path));
                cfg.command = "benchmark";
            } else {
                regdbn::apply_preset(cfg, preset);
                if (!hidden.empty()) {
                    cfg.hidden_sizes.clear();
                    for (const auto& part : CLI::detail::split(hidden, ','))
                        cfg.hidden_sizes.push_back(std::stoul(part));
                    cfg.input_width = 0;
                }
            }
            primary = regdbn::run_benchmark(cfg);
        }
        std::printf("wrote %s\n", primary.c_str());
        return 0;
    } catch (const regdbn::Error& e) {
        std::fprintf(stderr, "error[%s]: %s\n", e.category().c_str(), e.what());
        return category_code(e.category());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[internal]: %s\n", e.what());
        return 9;
    }
}
