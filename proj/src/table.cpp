// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/table.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace spoofdet {

std::vector<std::size_t> FeatureTable::split_rows(SplitTag split) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].split == split) idx.push_back(i);
    return idx;
}

std::vector<std::size_t> FeatureTable::class_rows(
    ClipLabel label, std::optional<SplitTag> split) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].label == label && (!split || rows[i].split == *split))
            idx.push_back(i);
    return idx;
}

FeatureTable make_feature_table(std::vector<FeatureVector> rows) {
    FeatureTable table;
    table.names = canonical_feature_names();
    table.rows = std::move(rows);
    for (const auto& row : table.rows)
        if (row.values.size() != table.names.size())
            throw Error(ErrorCode::SchemaMismatch,
                        "row width does not match schema: " + row.clip_ref);
    return table;
}

void write_feature_csv(const FeatureTable& table, const std::string& path,
                       const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "clip,label,split";
    for (const auto& name : table.names) out << ',' << name;
    out << '\n';

    char buf[64];
    for (const auto& row : table.rows) {
        out << row.clip_ref << ',' << label_name(row.label) << ','
            << split_name(row.split);
        for (double v : row.values) {
            if (is_missing(v)) {
                out << ',';
            } else {
                std::snprintf(buf, sizeof(buf), ",%.17g", v);
                out << buf;
            }
        }
        out << '\n';
    }
}

FeatureTable read_feature_csv(const std::string& path,
                              std::string* comment_out) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

    FeatureTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (comment_out && !header_seen)
                *comment_out = line.size() > 2 ? line.substr(2) : "";
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        if (!header_seen) {
            header_seen = true;
            std::vector<std::string> cols;
            while (std::getline(ss, field, ',')) cols.push_back(field);
            if (cols.size() < 4 || cols[0] != "clip" || cols[1] != "label" ||
                cols[2] != "split")
                throw Error(ErrorCode::SchemaMismatch,
                            "bad feature CSV header in " + path);
            table.names.assign(cols.begin() + 3, cols.end());
            continue;
        }

        FeatureVector row;
        std::getline(ss, row.clip_ref, ',');
        std::getline(ss, field, ',');
        row.label = parse_label(field);
        std::getline(ss, field, ',');
        row.split = parse_split(field);
        row.values.reserve(table.names.size());
        while (std::getline(ss, field, ','))
            row.values.push_back(field.empty() ? kMissing
                                               : std::strtod(field.c_str(), nullptr));
        // a trailing empty field is swallowed by getline; pad it back
        if (row.values.size() + 1 == table.names.size() && line.back() == ',')
            row.values.push_back(kMissing);
        if (row.values.size() != table.names.size())
            throw Error(ErrorCode::SchemaMismatch,
                        "row width mismatch in " + path + ": " + row.clip_ref);
        table.rows.push_back(std::move(row));
    }
    if (!header_seen)
        throw Error(ErrorCode::SchemaMismatch, "empty feature CSV " + path);
    return table;
}

}  // namespace spoofdet
