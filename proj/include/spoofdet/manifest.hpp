// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "spoofdet/audio.hpp"

namespace spoofdet {

struct ManifestEntry {
    std::string source_path;
    ClipLabel label;
    SplitTag split;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::string condition_name;

    // counts indexed by [label][split]
    std::array<std::array<std::size_t, 2>, 2> counts() const;
};

// Scans `<root>/{training,testing}/{real,fake}/*.wav` when given a
// directory, or parses a `path,label,split` CSV when given a file.
// Entry order is lexicographic by path regardless of filesystem order.
// Throws EmptyClass when a (label, split) cell has no files, and
// DuplicatePath on repeated paths.
DatasetManifest scan_dataset(const std::string& root_or_manifest,
                             const std::string& condition_name = "");

void write_manifest_csv(const DatasetManifest& manifest,
                        const std::string& path);

}  // namespace spoofdet
