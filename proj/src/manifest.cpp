// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace spoofdet {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

DatasetManifest scan_directory(const fs::path& root) {
    DatasetManifest manifest;
    const std::pair<const char*, SplitTag> splits[] = {
        {"training", SplitTag::Train}, {"testing", SplitTag::Test}};
    const std::pair<const char*, ClipLabel> labels[] = {
        {"real", ClipLabel::Real}, {"fake", ClipLabel::Fake}};

    for (const auto& [split_dir, split] : splits) {
        for (const auto& [label_dir, label] : labels) {
            fs::path cell = root / split_dir / label_dir;
            if (!fs::is_directory(cell)) continue;
            for (const auto& de : fs::directory_iterator(cell)) {
                if (!de.is_regular_file()) continue;
                if (de.path().extension() != ".wav") continue;
                manifest.entries.push_back(
                    {de.path().string(), label, split});
            }
        }
    }
    return manifest;
}

DatasetManifest parse_csv(const fs::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + csv_path.string());

    DatasetManifest manifest;
    std::string line;
    bool header_seen = false;
    const fs::path base = csv_path.parent_path();
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            std::string lower = line;
            std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
            if (lower == "path,label,split") continue;
            throw Error(ErrorCode::BadConfig,
                        "manifest CSV must start with header path,label,split");
        }
        std::stringstream ss(line);
        std::string path_field, label_field, split_field;
        if (!std::getline(ss, path_field, ',') ||
            !std::getline(ss, label_field, ',') ||
            !std::getline(ss, split_field, ','))
            throw Error(ErrorCode::BadConfig, "bad manifest row: " + line);

        fs::path p = strip(path_field);
        if (p.is_relative()) p = base / p;
        manifest.entries.push_back({p.string(), parse_label(strip(label_field)),
                                    parse_split(strip(split_field))});
    }
    if (!header_seen)
        throw Error(ErrorCode::BadConfig, "empty manifest " + csv_path.string());
    return manifest;
}

}  // namespace

std::array<std::array<std::size_t, 2>, 2> DatasetManifest::counts() const {
    std::array<std::array<std::size_t, 2>, 2> c{};
    for (const auto& e : entries)
        ++c[static_cast<std::size_t>(e.label)][static_cast<std::size_t>(e.split)];
    return c;
}

DatasetManifest scan_dataset(const std::string& root_or_manifest,
                             const std::string& condition_name) {
    fs::path p(root_or_manifest);
    DatasetManifest manifest;
    if (fs::is_directory(p))
        manifest = scan_directory(p);
    else if (fs::is_regular_file(p))
        manifest = parse_csv(p);
    else
        throw Error(ErrorCode::IoError, "no such dataset: " + root_or_manifest);

    manifest.condition_name = condition_name;
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return a.source_path < b.source_path;
              });

    std::set<std::string> seen;
    for (const auto& e : manifest.entries)
        if (!seen.insert(e.source_path).second)
            throw Error(ErrorCode::DuplicatePath, e.source_path);

    auto c = manifest.counts();
    for (int label = 0; label < 2; ++label)
        for (int split = 0; split < 2; ++split)
            if (c[label][split] == 0)
                throw Error(ErrorCode::EmptyClass,
                            std::string("no clips for label=") +
                                label_name(static_cast<ClipLabel>(label)) +
                                " split=" +
                                split_name(static_cast<SplitTag>(split)));
    return manifest;
}

void write_manifest_csv(const DatasetManifest& manifest,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << "path,label,split\n";
    for (const auto& e : manifest.entries)
        out << e.source_path << ',' << label_name(e.label) << ','
            << split_name(e.split) << '\n';
}

}  // namespace spoofdet
