// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/sweep.hpp"

#include "moyalab/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace moyalab {

const char* to_string(PairMode m) { return m == PairMode::fixed_energy ? "fixed_energy" : "fixed_quantum"; }

PairMode parse_pair_mode(const std::string& s) {
  if (s == "fixed_energy" || s == "energy") return PairMode::fixed_energy;
  if (s == "fixed_quantum" || s == "quantum") return PairMode::fixed_quantum;
  throw DomainError("unknown pair mode '" + s + "'");
}

void SweepConfig::validate() const {
  if (hbars.empty() || epsilons.empty() || kinds.empty() || methods.empty())
    throw DomainError("sweep needs at least one hbar, epsilon, kind and method");
  for (double h : hbars)
    if (!(h > 0.0)) throw DomainError("sweep hbar values must be positive");
  for (double e : epsilons)
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("sweep epsilon values must be finite and >= 0");
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  if (!(time > 0.0)) throw DomainError("interaction time must be positive");
  if (mode == PairMode::fixed_energy && !(e_m > e_n && e_n > 0.0)) throw DomainError("need e_m > e_n > 0");
  if (mode == PairMode::fixed_quantum && !(m > n && n >= 0)) throw DomainError("need m > n >= 0");
  if (x1_nr < 1 || x1_nth < 4) throw DomainError("x1 grid too small");
  quad.validate();
}

ResolvedPair resolve_pair(const SweepConfig& cfg, double hbar) {
  if (cfg.mode == PairMode::fixed_quantum) return {FockPair(cfg.m, cfg.n, cfg.sign, hbar), ""};
  // (2k + 1) hbar = 2 e held fixed; ties round away from zero
  const double mr = cfg.e_m / hbar - 0.5, nr = cfg.e_n / hbar - 0.5;
  const long m = std::lround(mr), n = std::lround(nr);
  std::string note;
  if (std::abs(mr - m) > 1e-9 || std::abs(nr - n) > 1e-9)
    note = "hbar " + format_double(hbar) + ": m " + format_double(mr) + " -> " + std::to_string(m) + ", n " +
           format_double(nr) + " -> " + std::to_string(n);
  return {FockPair(static_cast<int>(m), static_cast<int>(n), cfg.sign, hbar), note};
}

bool SweepRecord::operator==(const SweepRecord& o) const { return to_json(*this) == to_json(o); }

std::vector<SweepPoint> sweep_points(const SweepConfig& cfg) {
  std::vector<SweepPoint> pts;
  for (double h : cfg.hbars)
    for (InteractionKind k : cfg.kinds)
      for (double e : cfg.epsilons)
        for (Method m : cfg.methods) pts.push_back({static_cast<int>(pts.size()), h, k, e, m});
  return pts;
}

SweepRecord run_point(const SweepConfig& cfg, const SweepPoint& pt) {
  SweepRecord r;
  r.index = pt.index;
  r.hbar = pt.hbar;
  r.sign = cfg.sign;
  r.kind = pt.kind;
  r.flow_mode = cfg.flow_mode;
  r.epsilon = pt.epsilon;
  r.time = cfg.time;
  r.method = pt.method;
  r.shift_model = cfg.shift_model;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const FockPair pair = resolve_pair(cfg, pt.hbar).pair;
    r.m = pair.m;
    r.n = pair.n;
    r.lambda = pair.lambda();
    const InteractionSpec in{pt.kind, pt.epsilon, cfg.time, cfg.flow_mode};
    DeltaOptions opt;
    opt.quad = cfg.quad;
    opt.policy = {cfg.quad.clamp_caustics, cfg.quad.caustic_width_multiplier};
    opt.shift_model = cfg.shift_model;
    const PolarGrid x1 = default_x1_grid(pair, cfg.x1_nr, cfg.x1_nth);
    const ReducedField d = delta_w1(pair, in, pt.method, x1, opt);
    r.status = to_string(d.status);
    r.max_abs = d.max_abs;
    r.l1 = d.l1;
    r.estimate = d.estimate;
    if (pt.method == Method::exact) {
      r.norm_change = d.diagnostics.at("norm_error");
      r.tail_mass = d.diagnostics.at("tail_mass");
      r.dimension = static_cast<int>(d.diagnostics.at("dimension"));
    } else {
      r.norm_change = std::max(std::abs(d.diagnostics.at("dN_m")), std::abs(d.diagnostics.at("dN_n")));
    }
    // same nodes for every method at a given hbar
    std::mt19937_64 rng(cfg.seed);
    for (double& p : r.probes) p = d.values[static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(x1.size()))];
  } catch (const std::exception& e) {
    r.status = "error";
    r.message = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("MOYALAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

json journal_header(const SweepConfig& cfg) {
  json c = to_json(cfg);
  c.erase("output_dir");
  return {{"journal", kSchemaVersion}, {"config", c}};
}

// Records already flushed under the same config: a contiguous prefix. A torn
// last line (killed mid-write) ends the prefix.
std::vector<SweepRecord> load_journal(const std::filesystem::path& path, const SweepConfig& cfg) {
  std::vector<SweepRecord> out;
  std::ifstream is(path);
  if (!is) return out;
  std::string line;
  if (!std::getline(is, line)) return out;
  try {
    if (json::parse(line) != journal_header(cfg)) return out;
  } catch (const json::exception&) {
    return out;
  }
  while (std::getline(is, line)) {
    try {
      const json j = json::parse(line);
      SweepRecord r = record_from_json(j);
      if (r.index != static_cast<int>(out.size())) break;
      r.wall_time = j.value("wall_time", 0.0);
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      break;
    }
  }
  return out;
}

std::string journal_line(const SweepRecord& r) {
  json j = to_json(r);
  j["wall_time"] = r.wall_time;
  return j.dump() + "\n";
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& cfg, const SweepControl& ctl) {
  cfg.validate();
  const std::vector<SweepPoint> pts = sweep_points(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const auto journal = dir / "journal.jsonl";

  SweepOutcome out;
  for (double h : cfg.hbars) {
    try {
      const std::string note = resolve_pair(cfg, h).rounding;
      if (!note.empty()) out.rounding.push_back(note);
    } catch (const DomainError& e) {
      out.rounding.push_back("hbar " + format_double(h) + ": " + e.what());
    }
  }

  if (ctl.resume) out.records = load_journal(journal, cfg);
  if (out.records.size() > pts.size()) out.records.clear();
  out.resumed = static_cast<int>(out.records.size());
  {
    // rewrite the journal as exactly the kept prefix
    std::string text = journal_header(cfg).dump() + "\n";
    for (const auto& r : out.records) text += journal_line(r);
    write_text(journal, text);
  }

  const int total = static_cast<int>(pts.size());
  const int start = out.resumed;
  std::vector<std::optional<SweepRecord>> slots(total);
  std::atomic<int> next{start};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable cv;

  const int workers = std::max(1, std::min(ctl.workers > 0 ? ctl.workers : default_workers(), total - start));
  std::vector<std::thread> pool;
  if (start < total) {
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          if (stop.load()) return;
          const int i = next.fetch_add(1);
          if (i >= total) return;
          SweepRecord rec = run_point(cfg, pts[i]);
          {
            std::lock_guard<std::mutex> lock(mu);
            slots[i] = std::move(rec);
          }
          cv.notify_all();
        }
      });
  }

  // single serializer: records reach the journal in index order
  std::ofstream js(journal, std::ios::binary | std::ios::app);
  if (!js) throw Error("cannot append to " + journal.string());
  int flushed = start, fresh = 0;
  while (flushed < total) {
    SweepRecord rec;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return slots[flushed].has_value(); });
      rec = std::move(*slots[flushed]);
      slots[flushed].reset();
    }
    js << journal_line(rec);
    js.flush();
    if (ctl.on_record) ctl.on_record(rec);
    out.records.push_back(std::move(rec));
    ++flushed;
    ++fresh;
    if (ctl.stop_after >= 0 && fresh >= ctl.stop_after && flushed < total) {
      stop.store(true);
      break;
    }
  }
  for (auto& t : pool) t.join();
  js.close();

  out.complete = flushed == total;
  if (out.complete) {
    SweepDocument doc;
    doc.config = cfg;
    doc.rounding = out.rounding;
    doc.records = out.records;
    write_csv(out.records, dir / "records.csv");
    write_text(dir / "sweep.json", dump_document(doc));
    write_timings(out.records, dir / "timings.csv");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

std::vector<ReportRow> convergence_report(const std::vector<SweepRecord>& records) {
  std::vector<ReportRow> rows;
  auto row_for = [&](double h, double e) -> ReportRow& {
    for (auto& r : rows)
      if (r.hbar == h && r.epsilon == e) return r;
    rows.push_back({h, e});
    return rows.back();
  };
  std::vector<int> good;
  for (const auto& rec : records) {
    ReportRow& row = row_for(rec.hbar, rec.epsilon);
    ++row.records;
    if (rec.status == "converged" || rec.status == "indistinguishable_from_zero") row.converged_fraction += 1.0;
    if (rec.status != "error" && rec.max_abs > 0.0) row.max_ratio = std::max(row.max_ratio, rec.estimate / rec.max_abs);
  }
  for (auto& row : rows) row.converged_fraction /= row.records;

  // monotonicity of max |dW1| in epsilon, per (hbar, kind, method), over converged records
  for (auto& row : rows) {
    for (const auto& a : records) {
      if (a.hbar != row.hbar || a.epsilon > row.epsilon || a.status != "converged") continue;
      for (const auto& b : records) {
        if (b.hbar != a.hbar || b.kind != a.kind || b.method != a.method || b.status != "converged") continue;
        if (b.epsilon > a.epsilon && b.epsilon <= row.epsilon && b.max_abs < a.max_abs) row.monotone_in_epsilon = false;
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& x, const ReportRow& y) {
    return x.hbar != y.hbar ? x.hbar > y.hbar : x.epsilon < y.epsilon;
  });
  return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %-10s %7s %10s %14s %9s\n", "hbar", "epsilon", "records", "converged",
                "max est/value", "monotone");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10.6g %-10.6g %7d %10.3f %14.3e %9s\n", r.hbar, r.epsilon, r.records,
                  r.converged_fraction, r.max_ratio, r.monotone_in_epsilon ? "yes" : "no");
    os << buf;
  }
  return os.str();
}

}  // namespace moyalab
