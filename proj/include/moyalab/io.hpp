// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

// CSV / JSON emitters and '#'-headed field dumps. Every double goes through
// format_double, the shortest decimal that reads back to the same bits.

#pragma once

#include "moyalab/field.hpp"
#include "moyalab/propagators.hpp"
#include "moyalab/sweep.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace moyalab {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

std::string format_double(double v);

json to_json(const QuadSpec& q);
QuadSpec quad_from_json(const json& j, QuadSpec base = {});
json to_json(const SweepConfig& cfg);
/// Keys absent from j keep the values in base.
SweepConfig config_from_json(const json& j, SweepConfig base = {});
SweepConfig load_config(const std::filesystem::path& path, SweepConfig base = {});

json to_json(const SweepRecord& r);
SweepRecord record_from_json(const json& j);

struct SweepDocument {
  int schema_version = kSchemaVersion;
  SweepConfig config;
  std::vector<std::string> rounding;
  std::vector<SweepRecord> records;
};

json to_json(const SweepDocument& d);
SweepDocument document_from_json(const json& j);
/// Canonical text of a document (two-space indent, trailing newline).
std::string dump_document(const SweepDocument& d);

const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const SweepRecord& r);
void write_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path);
void write_timings(const std::vector<SweepRecord>& records, const std::filesystem::path& path);

/// Whitespace-separated (r, theta, value) rows, or (q, p, value) on a
/// cartesian grid; complex fields get value_re value_im. The header block is
/// '#'-prefixed "key value" lines.
void write_field(const PhaseSpaceField& f, const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, std::string>>& extra = {});
void write_field(const ReducedField& f, const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, std::string>>& extra = {});

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace moyalab
