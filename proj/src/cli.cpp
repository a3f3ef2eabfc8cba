#include "regdbn/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regdbn/model_io.hpp"

namespace regdbn {

namespace fs = std::filesystem;

const std::vector<Preset>& preset_table() {
    static const std::vector<Preset> presets = {
        // structure 6-10-10-1, unsupervised lr 1.0, 20 + 1000 iterations
        {"case1", 6, {10, 10}, 1.0, 20, 1000, "2000:2006", "2007:2008"},
        // structure 16-30-30-1, unsupervised lr 2.0, 50 + 500 iterations
        {"case2", 16, {30, 30}, 2.0, 50, 500, "2000:2003", "2004:2005"},
    };
    return presets;
}

void apply_preset(RunConfig& config, const std::string& name) {
    if (name == "none") return;
    for (const Preset& p : preset_table()) {
        if (p.name == name) {
            config.preset = name;
            config.input_width = p.input_width;
            config.hidden_sizes = p.hidden_sizes;
            config.unsup_lr = p.unsup_lr;
            config.pretrain_epochs = p.pretrain_epochs;
            config.finetune_epochs = p.finetune_epochs;
            if (config.train_years.empty()) config.train_years = p.train_years;
            if (config.test_years.empty()) config.test_years = p.test_years;
            return;
        }
    }
    throw InvalidInputError("unknown preset '" + name + "' (case1, case2 or none)");
}

namespace {

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidInputError(std::string(what) + ": cannot parse '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const char* what) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidInputError(std::string(what) + ": cannot parse '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::stringstream ss(text);
    while (std::getline(ss, part, sep)) parts.push_back(part);
    return parts;
}

} // namespace

VectorD parse_fractions(const std::string& text) {
    if (text.empty()) throw InvalidInputError("fractions: empty specification");
    std::vector<double> percents;
    if (text.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(text, ':');
        if (parts.size() != 3)
            throw InvalidInputError("fractions: expected start:stop:step, got '" +
                                    text + "'");
        const double start = parse_double(parts[0], "fractions");
        const double stop = parse_double(parts[1], "fractions");
        const double step = parse_double(parts[2], "fractions");
        if (!(step > 0.0) || start > stop)
            throw InvalidInputError("fractions: need start <= stop and step > 0");
        for (double v = start; v <= stop + 1e-9; v += step) percents.push_back(v);
    } else {
        for (const std::string& part : split(text, ','))
            percents.push_back(parse_double(part, "fractions"));
    }
    VectorD fractions;
    for (double pct : percents) {
        if (!(pct > 0.0 && pct <= 100.0))
            throw InvalidInputError("fractions: values must lie in (0, 100]");
        fractions.push_back(pct / 100.0);
    }
    return fractions;
}

std::vector<int> parse_years(const std::string& text) {
    if (text.empty()) throw InvalidInputError("years: empty specification");
    std::vector<int> years;
    if (text.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(text, ':');
        if (parts.size() != 2)
            throw InvalidInputError("years: expected first:last, got '" + text + "'");
        const long first = parse_long(parts[0], "years");
        const long last = parse_long(parts[1], "years");
        if (first > last) throw InvalidInputError("years: range inverted");
        for (long y = first; y <= last; ++y) years.push_back(static_cast<int>(y));
    } else {
        for (const std::string& part : split(text, ','))
            years.push_back(static_cast<int>(parse_long(part, "years")));
    }
    return years;
}

namespace {

std::string size_list(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (const std::string& part : split(text, ',')) {
        const long v = parse_long(part, what);
        if (v < 1) throw InvalidInputError(std::string(what) + ": sizes must be >= 1");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw InvalidInputError(std::string(what) + ": empty list");
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::map<std::string, std::string> config_to_manifest(const RunConfig& c) {
    std::map<std::string, std::string> m;
    m["command"] = c.command;
    m["preset"] = c.preset;
    m["data"] = c.data_path;
    m["train_file"] = c.train_path;
    m["test_file"] = c.test_path;
    m["target_column"] = c.target_column;
    m["year_column"] = c.year_column;
    m["models"] = c.models;
    m["fractions"] = c.fractions;
    m["train_years"] = c.train_years;
    m["test_years"] = c.test_years;
    m["hidden_sizes"] = size_list(c.hidden_sizes);
    m["input_width"] = std::to_string(c.input_width);
    m["pretrain_epochs"] = std::to_string(c.pretrain_epochs);
    m["finetune_epochs"] = std::to_string(c.finetune_epochs);
    m["unsup_lr"] = format_double(c.unsup_lr);
    m["sup_lr"] = format_double(c.sup_lr);
    m["alpha"] = format_double(c.alpha);
    m["beta"] = format_double(c.beta);
    m["reestimate"] = c.reestimate ? "true" : "false";
    m["reestimate_interval"] = std::to_string(c.reestimate_interval);
    m["sigma"] = format_double(c.sigma);
    m["noise_control"] = format_double(c.noise_control);
    m["batch_size"] = std::to_string(c.batch_size);
    m["rows"] = std::to_string(c.rows);
    m["reps"] = std::to_string(c.reps);
    m["workers"] = std::to_string(c.workers);
    m["seed"] = std::to_string(c.seed);
    m["out_dir"] = c.out_dir;
    return m;
}

RunConfig config_from_manifest(const std::map<std::string, std::string>& m) {
    RunConfig c;
    const auto get = [&m](const char* key) -> const std::string& {
        const auto it = m.find(key);
        if (it == m.end())
            throw SchemaError("manifest: missing key '" + std::string(key) + "'");
        return it->second;
    };
    c.command = get("command");
    c.preset = get("preset");
    c.data_path = get("data");
    c.train_path = get("train_file");
    c.test_path = get("test_file");
    c.target_column = get("target_column");
    c.year_column = get("year_column");
    c.models = get("models");
    c.fractions = get("fractions");
    c.train_years = get("train_years");
    c.test_years = get("test_years");
    c.hidden_sizes = parse_size_list(get("hidden_sizes"), "hidden_sizes");
    c.input_width = static_cast<std::size_t>(parse_long(get("input_width"), "input_width"));
    c.pretrain_epochs = static_cast<std::size_t>(parse_long(get("pretrain_epochs"), "pretrain_epochs"));
    c.finetune_epochs = static_cast<std::size_t>(parse_long(get("finetune_epochs"), "finetune_epochs"));
    c.unsup_lr = parse_double(get("unsup_lr"), "unsup_lr");
    c.sup_lr = parse_double(get("sup_lr"), "sup_lr");
    c.alpha = parse_double(get("alpha"), "alpha");
    c.beta = parse_double(get("beta"), "beta");
    c.reestimate = get("reestimate") == "true";
    c.reestimate_interval = static_cast<std::size_t>(parse_long(get("reestimate_interval"), "reestimate_interval"));
    c.sigma = parse_double(get("sigma"), "sigma");
    c.noise_control = parse_double(get("noise_control"), "noise_control");
    c.batch_size = static_cast<std::size_t>(parse_long(get("batch_size"), "batch_size"));
    c.rows = static_cast<std::size_t>(parse_long(get("rows"), "rows"));
    c.reps = static_cast<std::size_t>(parse_long(get("reps"), "reps"));
    c.workers = static_cast<std::size_t>(parse_long(get("workers"), "workers"));
    c.seed = static_cast<std::uint64_t>(parse_long(get("seed"), "seed"));
    c.out_dir = get("out_dir");
    return c;
}

void write_manifest(const std::map<std::string, std::string>& manifest,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const auto& [key, value] : manifest) out << key << " = " << value << "\n";
    if (!out) throw IoError("write failed for " + path);
}

std::map<std::string, std::string> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::map<std::string, std::string> m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::size_t sep = line.find(" = ");
        if (sep == std::string::npos)
            throw SchemaError(path + ": line " + std::to_string(line_no) +
                              " is not 'key = value'");
        m[line.substr(0, sep)] = line.substr(sep + 3);
    }
    return m;
}

NetPipelineConfig pipeline_config(const RunConfig& c) {
    NetPipelineConfig pc;
    pc.hidden_sizes = c.hidden_sizes;
    pc.activation.sigma = c.sigma;
    pc.activation.noise_control = c.noise_control;
    pc.pretrain.epochs = c.pretrain_epochs;
    pc.pretrain.learning_rate = c.unsup_lr;
    pc.pretrain.batch_size = c.batch_size;
    pc.finetune.alpha = c.alpha;
    pc.finetune.beta = c.beta;
    pc.finetune.learning_rate = c.sup_lr;
    pc.finetune.epochs = c.finetune_epochs;
    pc.finetune.reestimate = c.reestimate;
    pc.finetune.reestimate_interval = c.reestimate_interval;
    return pc;
}

namespace {

void ensure_out_dir(const RunConfig& c) {
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + c.out_dir);
}

std::string out_path(const RunConfig& c, const std::string& name) {
    return (fs::path(c.out_dir) / name).string();
}

void save_run_manifest(const RunConfig& c, const std::string& name) {
    write_manifest(config_to_manifest(c), out_path(c, name));
}

} // namespace

std::string run_synth(const RunConfig& config) {
    if (config.preset != "case1" && config.preset != "case2")
        throw InvalidInputError("synth: preset must be case1 or case2");
    ensure_out_dir(config);

    SynthSpec spec = config.preset == "case1" ? synth_preset_case1(config.seed)
                                              : synth_preset_case2(config.seed);
    if (config.rows > 0) spec.n_rows = config.rows;
    const Dataset ds = synthesize(spec);

    const std::string csv_path = out_path(config, config.preset + ".csv");
    write_csv(ds, csv_path);

    nlohmann::json meta;
    meta["preset"] = config.preset;
    meta["seed"] = spec.seed;
    meta["n_rows"] = spec.n_rows;
    meta["dispersion"] = spec.dispersion;
    meta["coefficients"] = spec.coefficients;
    meta["year_start"] = spec.year_start;
    meta["year_end"] = spec.year_end;
    meta["features"] = nlohmann::json::array();
    for (const FeatureDist& f : spec.features)
        meta["features"].push_back(
            {{"name", f.name},
             {"kind", f.kind == FeatureDist::Kind::Integer ? "integer" : "uniform"},
             {"lo", f.lo},
             {"hi", f.hi}});
    write_text_file(out_path(config, config.preset + ".meta.json"), meta.dump(2));

    save_run_manifest(config, "synth.manifest");
    return csv_path;
}

std::string run_train(const RunConfig& config) {
    if (config.models != "regdbn" && config.models != "bayesnn")
        throw InvalidInputError("train: --model must be regdbn or bayesnn");
    if (config.data_path.empty()) throw InvalidInputError("train: --data is required");
    ensure_out_dir(config);

    std::optional<std::string> year_col;
    for (const std::string& col : csv_header(config.data_path))
        if (col == config.year_column) year_col = config.year_column;
    Dataset ds = load_csv(config.data_path, config.target_column, year_col);

    if (!config.train_years.empty() && ds.has_years()) {
        // keep only the training years; the complement goes unused here
        std::vector<int> keep = parse_years(config.train_years);
        std::vector<int> rest;
        for (std::size_t r = 0; r < ds.n_rows(); ++r) {
            const int y = ds.years[r];
            if (std::find(keep.begin(), keep.end(), y) == keep.end() &&
                std::find(rest.begin(), rest.end(), y) == rest.end())
                rest.push_back(y);
        }
        if (!rest.empty()) ds = split_by_year(ds, keep, rest).first;
    }

    if (config.input_width > 0 && config.input_width != ds.n_features())
        throw DimensionError("train: preset expects " +
                             std::to_string(config.input_width) + " features, data has " +
                             std::to_string(ds.n_features()));

    const NetPipelineConfig pc = pipeline_config(config);
    RngStream stream = RngStream(config.seed).child("train/" + config.models);

    const NetTrainResult result = config.models == "regdbn"
                                      ? train_regdbn(ds, pc, stream)
                                      : train_bayesnn(ds, pc, stream);

    const std::string model_path = out_path(config, "model.json");
    write_text_file(model_path, save_net_regressor(result.regressor));
    write_text_file(out_path(config, "history.csv"),
                    history_to_csv(result.finetune_history));

    if (!result.pretrain_history.empty()) {
        std::string csv = "layer,epoch,recon_error\n";
        char buf[96];
        for (std::size_t layer = 0; layer < result.pretrain_history.size(); ++layer) {
            const VectorD& errs = result.pretrain_history[layer];
            for (std::size_t e = 0; e < errs.size(); ++e) {
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", layer + 1, e + 1,
                              errs[e]);
                csv += buf;
            }
        }
        write_text_file(out_path(config, "pretrain_history.csv"), csv);
    }

    save_run_manifest(config, "train.manifest");
    return model_path;
}

std::string run_benchmark(const RunConfig& config) {
    ensure_out_dir(config);

    Dataset train_ds, test_ds;
    if (!config.train_path.empty() || !config.test_path.empty()) {
        if (config.train_path.empty() || config.test_path.empty())
            throw InvalidInputError("benchmark: need both --train-file and --test-file");
        train_ds = load_csv(config.train_path, config.target_column);
        test_ds = load_csv(config.test_path, config.target_column);
    } else {
        if (config.data_path.empty())
            throw InvalidInputError("benchmark: --data or --train-file/--test-file required");
        if (config.train_years.empty() || config.test_years.empty())
            throw InvalidInputError("benchmark: --train-years and --test-years required");
        const Dataset ds =
            load_csv(config.data_path, config.target_column, config.year_column);
        std::tie(train_ds, test_ds) = split_by_year(
            ds, parse_years(config.train_years), parse_years(config.test_years));
    }

    if (config.input_width > 0 && config.input_width != train_ds.n_features())
        throw DimensionError("benchmark: preset expects " +
                             std::to_string(config.input_width) +
                             " features, data has " +
                             std::to_string(train_ds.n_features()));

    const NetPipelineConfig pc = pipeline_config(config);
    std::vector<ModelBuilder> builders;
    for (const std::string& name : split(config.models, ','))
        builders.push_back(make_builder(name, pc));

    const VectorD fractions = parse_fractions(config.fractions);
    BootstrapOptions opts;
    opts.workers = config.workers;
    const BootstrapReport report = bootstrap_experiment(
        builders, train_ds, test_ds, fractions, config.reps, config.seed, opts);

    const std::string report_path = out_path(config, "report.csv");
    write_text_file(report_path, report_to_csv(report));
    write_text_file(out_path(config, "detail.csv"), detail_to_csv(report));
    save_run_manifest(config, "benchmark.manifest");
    return report_path;
}

} // namespace regdbn
