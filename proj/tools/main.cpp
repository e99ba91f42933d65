// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>

#include "spoofdet/commands.hpp"
#include "spoofdet/error.hpp"

#include <CLI11.hpp>

namespace {

using spoofdet::ConfigOverrides;
using spoofdet::Error;
using spoofdet::ErrorCode;
using spoofdet::ExperimentConfig;

// 0 success, 1 usage error, 2 data error, 3 stage failure
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitStage = 3;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadConfig:
            return kExitUsage;
        case ErrorCode::MalformedWav:
        case ErrorCode::UnsupportedEncoding:
        case ErrorCode::AllSilent:
        case ErrorCode::EmptyClass:
        case ErrorCode::DuplicatePath:
        case ErrorCode::ClipTooShort:
        case ErrorCode::EmptySeries:
        case ErrorCode::AllFeaturesDropped:
        case ErrorCode::NoFeatureSurvives:
        case ErrorCode::TooFewRows:
        case ErrorCode::ClassTooSmall:
        case ErrorCode::SchemaMismatch:
        case ErrorCode::SingleClass:
        case ErrorCode::TooManySkips:
        case ErrorCode::IoError:
            return kExitData;
        default:
            return kExitStage;
    }
}

struct CommonArgs {
    std::string config_path;
    ConfigOverrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config JSON file");
    cmd->add_option("--dataset", args.overrides.dataset,
                    "dataset root directory or manifest CSV");
    cmd->add_option("--out", args.overrides.out_dir, "run output directory");
    cmd->add_option("--condition", args.overrides.condition,
                    "condition name recorded in the artifacts");
    cmd->add_option("--models", args.overrides.models,
                    "comma-separated model list");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&args](const std::uint64_t& v) {
            args.overrides.seed = v;
            args.overrides.seed_set = true;
        },
        "random seed");
    cmd->add_option_function<unsigned>(
        "--threads",
        [&args](const unsigned& v) {
            args.overrides.threads = v;
            args.overrides.threads_set = true;
        },
        "worker threads (0 = auto)");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig config;
    if (!args.config_path.empty())
        config = spoofdet::load_config_file(args.config_path);
    apply_overrides(config, args.overrides);

    if (!args.config_path.empty()) {
        // keep the user's config verbatim next to the artifacts
        std::filesystem::create_directories(config.out_dir);
        std::ifstream in(args.config_path, std::ios::binary);
        std::ofstream out(
            std::filesystem::path(config.out_dir) / "config_input.json",
            std::ios::binary);
        out << in.rdbuf();
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical-ML synthetic speech detector"};
    app.require_subcommand(1);

    CommonArgs extract_args, analyze_args, train_args, eval_args, run_args,
        dump_args;
    std::string dump_wav;
    bool dump_spec = false, dump_pitch = false;

    add_common(app.add_subcommand("extract",
                                  "decode clips and write the feature table"),
               extract_args);
    add_common(app.add_subcommand(
                   "analyze", "ANOVA report, correlations, histograms"),
               analyze_args);
    add_common(app.add_subcommand("train", "train the configured models"),
               train_args);
    add_common(app.add_subcommand(
                   "evaluate", "metrics, curves, McNemar comparisons"),
               eval_args);
    add_common(app.add_subcommand("run-all", "all stages with checkpoints"),
               run_args);
    CLI::App* dump = app.add_subcommand(
        "dump", "debug dump of one WAV (spectrogram / pitch CSV)");
    add_common(dump, dump_args);
    dump->add_option("--wav", dump_wav, "input WAV file")->required();
    dump->add_flag("--spectrogram", dump_spec, "write <stem>_spectrogram.csv");
    dump->add_flag("--pitch", dump_pitch, "write <stem>_pitch.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("extract"))
            cmd_extract(resolve_config(extract_args));
        else if (app.got_subcommand("analyze"))
            cmd_analyze(resolve_config(analyze_args));
        else if (app.got_subcommand("train"))
            cmd_train(resolve_config(train_args));
        else if (app.got_subcommand("evaluate"))
            cmd_evaluate(resolve_config(eval_args));
        else if (app.got_subcommand("run-all"))
            cmd_run_all(resolve_config(run_args));
        else if (app.got_subcommand("dump")) {
            if (!dump_spec && !dump_pitch) dump_spec = dump_pitch = true;
            cmd_dump(resolve_config(dump_args), dump_wav, dump_spec,
                     dump_pitch);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitStage;
    }
    return kExitOk;
}
