// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "spoofdet/config.hpp"

namespace spoofdet {

// Pipeline stages. Each owns the run directory for its duration (lock
// file), writes its artifacts under config.out_dir, and stamps a
// `<stage>.done` marker with the stage's config hash. Failures throw; the
// CLI front end maps error codes to exit codes.
void cmd_extract(const ExperimentConfig& config);
void cmd_analyze(const ExperimentConfig& config);
void cmd_train(const ExperimentConfig& config);
void cmd_evaluate(const ExperimentConfig& config);

// extract -> analyze -> train -> evaluate, skipping stages whose marker
// matches the current config; writes artifacts.json and summary.txt.
void cmd_run_all(const ExperimentConfig& config);

// Debug dump of the spectrogram and/or pitch track of one WAV file.
void cmd_dump(const ExperimentConfig& config, const std::string& wav_path,
              bool spectrogram, bool pitch);

}  // namespace spoofdet
