// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

// Parameter scans over (hbar, epsilon) with a resumable journal.
//
// Output directory layout:
//   journal.jsonl  one record per line, flushed in index order (resume source)
//   records.csv    final table, fixed columns
//   sweep.json     schema-versioned document: config, rounding log, records
//   timings.csv    wall times; kept apart so the files above are reproducible

#pragma once

#include "moyalab/chord.hpp"
#include "moyalab/propagators.hpp"
#include "moyalab/quadrature.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace moyalab {

enum class PairMode { fixed_energy, fixed_quantum };

const char* to_string(PairMode m);
PairMode parse_pair_mode(const std::string& s);

struct SweepConfig {
  PairMode mode = PairMode::fixed_energy;
  double e_m = 14.5, e_n = 10.5;  // used in fixed_energy mode
  int m = 14, n = 10;             // used in fixed_quantum mode
  std::vector<double> hbars{1.0, 0.5, 0.25, 0.125};
  std::vector<double> epsilons{1e-3, 1e-2, 5e-2};
  std::vector<InteractionKind> kinds{InteractionKind::cubic, InteractionKind::quartic};
  int sign = 1;
  double time = 1.0;
  FlowMode flow_mode = FlowMode::perturbation_only;
  std::vector<Method> methods{Method::exact, Method::semiclassical};
  ShiftModel shift_model = ShiftModel::closed_form;
  QuadSpec quad;
  int x1_nr = 48;
  int x1_nth = 64;
  std::string output_dir = "sweep_out";
  std::uint64_t seed = 20260101;

  void validate() const;
};

/// Pair used at one hbar, with the rounding note for fixed_energy mode.
struct ResolvedPair {
  FockPair pair;
  std::string rounding;  // empty when nothing was rounded
};
ResolvedPair resolve_pair(const SweepConfig& cfg, double hbar);

inline constexpr int kProbeCount = 4;

struct SweepRecord {
  int index = 0;
  double hbar = 0.0;
  int m = 0, n = 0, sign = 1;
  double lambda = 0.0;
  InteractionKind kind = InteractionKind::cubic;
  FlowMode flow_mode = FlowMode::perturbation_only;
  double epsilon = 0.0;
  double time = 1.0;
  Method method = Method::exact;
  ShiftModel shift_model = ShiftModel::closed_form;
  std::string status;  // converged | non_converged | indistinguishable_from_zero | error
  double max_abs = 0.0;
  double l1 = 0.0;
  double estimate = 0.0;
  double norm_change = 0.0;  // exact: |norm - 1|; otherwise max |dN|
  double tail_mass = 0.0;
  int dimension = 0;
  std::array<double, kProbeCount> probes{};  // dW1 at seeded x1 grid nodes
  std::string message;                       // error text, if any
  double wall_time = 0.0;                    // seconds; not part of the reproducible outputs

  bool operator==(const SweepRecord& o) const;
};

/// The (hbar, kind, epsilon, method) points in record order.
struct SweepPoint {
  int index = 0;
  double hbar = 0.0;
  InteractionKind kind = InteractionKind::cubic;
  double epsilon = 0.0;
  Method method = Method::exact;
};
std::vector<SweepPoint> sweep_points(const SweepConfig& cfg);

SweepRecord run_point(const SweepConfig& cfg, const SweepPoint& pt);

struct SweepControl {
  int workers = 0;           // 0: MOYALAB_WORKERS or the hardware concurrency
  int stop_after = -1;       // stop once this many new records are flushed (simulated interrupt)
  bool resume = true;        // reuse journal records written under the same config
  std::function<void(const SweepRecord&)> on_record;
};

struct SweepOutcome {
  std::vector<SweepRecord> records;
  std::vector<std::string> rounding;
  int resumed = 0;
  bool complete = false;
};

SweepOutcome run_sweep(const SweepConfig& cfg, const SweepControl& ctl = {});

int default_workers();

struct ReportRow {
  double hbar = 0.0;
  double epsilon = 0.0;
  int records = 0;
  double converged_fraction = 0.0;  // converged or indistinguishable from zero
  double max_ratio = 0.0;           // max estimate / max_abs over the row
  bool monotone_in_epsilon = true;  // |dW1| nondecreasing in epsilon up to here, per kind and method
};

std::vector<ReportRow> convergence_report(const std::vector<SweepRecord>& records);
std::string format_report(const std::vector<ReportRow>& rows);

}  // namespace moyalab
