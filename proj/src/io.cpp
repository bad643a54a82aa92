// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moyalab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace moyalab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json to_json(const QuadSpec& q) {
  return {{"radial_panels", q.radial_panels},
          {"panel_order", q.panel_order},
          {"angular_samples", q.angular_samples},
          {"refinement", q.refinement},
          {"max_refinements", q.max_refinements},
          {"tolerance", q.tolerance},
          {"relative_tolerance", q.relative_tolerance},
          {"caustic_width_multiplier", q.caustic_width_multiplier},
          {"clamp_caustics", q.clamp_caustics}};
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename E, typename Parse>
void take_enum(const json& j, const char* key, E& out, Parse parse) {
  if (j.contains(key)) out = parse(j.at(key).get<std::string>());
}

template <typename E, typename Parse>
void take_enum_list(const json& j, const char* key, std::vector<E>& out, Parse parse) {
  if (!j.contains(key)) return;
  out.clear();
  for (const auto& s : j.at(key)) out.push_back(parse(s.get<std::string>()));
}

template <typename E>
json enum_list(const std::vector<E>& v) {
  json a = json::array();
  for (E e : v) a.push_back(to_string(e));
  return a;
}

}  // namespace

QuadSpec quad_from_json(const json& j, QuadSpec q) {
  take(j, "radial_panels", q.radial_panels);
  take(j, "panel_order", q.panel_order);
  take(j, "angular_samples", q.angular_samples);
  take(j, "refinement", q.refinement);
  take(j, "max_refinements", q.max_refinements);
  take(j, "tolerance", q.tolerance);
  take(j, "relative_tolerance", q.relative_tolerance);
  take(j, "caustic_width_multiplier", q.caustic_width_multiplier);
  take(j, "clamp_caustics", q.clamp_caustics);
  return q;
}

json to_json(const SweepConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"e_m", c.e_m},
          {"e_n", c.e_n},
          {"m", c.m},
          {"n", c.n},
          {"hbar", c.hbars},
          {"epsilon", c.epsilons},
          {"kinds", enum_list(c.kinds)},
          {"sign", c.sign},
          {"time", c.time},
          {"flow_mode", to_string(c.flow_mode)},
          {"methods", enum_list(c.methods)},
          {"shift_model", to_string(c.shift_model)},
          {"quad", to_json(c.quad)},
          {"x1_nr", c.x1_nr},
          {"x1_nth", c.x1_nth},
          {"output_dir", c.output_dir},
          {"seed", c.seed}};
}

namespace {

ShiftModel parse_shift_model(const std::string& s) {
  if (s == "closed_form") return ShiftModel::closed_form;
  if (s == "numeric_flow") return ShiftModel::numeric_flow;
  throw DomainError("unknown shift model '" + s + "'");
}

}  // namespace

SweepConfig config_from_json(const json& j, SweepConfig c) {
  if (!j.is_object()) throw DomainError("sweep config must be a JSON object");
  take_enum(j, "mode", c.mode, parse_pair_mode);
  take(j, "e_m", c.e_m);
  take(j, "e_n", c.e_n);
  take(j, "m", c.m);
  take(j, "n", c.n);
  take(j, "hbar", c.hbars);
  take(j, "epsilon", c.epsilons);
  take_enum_list(j, "kinds", c.kinds, parse_interaction_kind);
  take(j, "sign", c.sign);
  take(j, "time", c.time);
  take_enum(j, "flow_mode", c.flow_mode, parse_flow_mode);
  take_enum_list(j, "methods", c.methods, parse_method);
  take_enum(j, "shift_model", c.shift_model, parse_shift_model);
  if (j.contains("quad")) c.quad = quad_from_json(j.at("quad"), c.quad);
  take(j, "x1_nr", c.x1_nr);
  take(j, "x1_nth", c.x1_nth);
  take(j, "output_dir", c.output_dir);
  take(j, "seed", c.seed);
  return c;
}

SweepConfig load_config(const std::filesystem::path& path, SweepConfig base) {
  try {
    return config_from_json(json::parse(read_text(path)), std::move(base));
  } catch (const json::exception& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

json to_json(const SweepRecord& r) {
  return {{"index", r.index},
          {"hbar", r.hbar},
          {"m", r.m},
          {"n", r.n},
          {"sign", r.sign},
          {"lambda", r.lambda},
          {"kind", to_string(r.kind)},
          {"flow_mode", to_string(r.flow_mode)},
          {"epsilon", r.epsilon},
          {"time", r.time},
          {"method", to_string(r.method)},
          {"shift_model", to_string(r.shift_model)},
          {"status", r.status},
          {"max_abs", r.max_abs},
          {"l1", r.l1},
          {"estimate", r.estimate},
          {"norm_change", r.norm_change},
          {"tail_mass", r.tail_mass},
          {"dimension", r.dimension},
          {"probes", r.probes},
          {"message", r.message}};
}

SweepRecord record_from_json(const json& j) {
  SweepRecord r;
  r.index = j.at("index").get<int>();
  r.hbar = j.at("hbar").get<double>();
  r.m = j.at("m").get<int>();
  r.n = j.at("n").get<int>();
  r.sign = j.at("sign").get<int>();
  r.lambda = j.at("lambda").get<double>();
  r.kind = parse_interaction_kind(j.at("kind").get<std::string>());
  r.flow_mode = parse_flow_mode(j.at("flow_mode").get<std::string>());
  r.epsilon = j.at("epsilon").get<double>();
  r.time = j.at("time").get<double>();
  r.method = parse_method(j.at("method").get<std::string>());
  r.shift_model = parse_shift_model(j.at("shift_model").get<std::string>());
  r.status = j.at("status").get<std::string>();
  r.max_abs = j.at("max_abs").get<double>();
  r.l1 = j.at("l1").get<double>();
  r.estimate = j.at("estimate").get<double>();
  r.norm_change = j.at("norm_change").get<double>();
  r.tail_mass = j.at("tail_mass").get<double>();
  r.dimension = j.at("dimension").get<int>();
  r.probes = j.at("probes").get<std::array<double, kProbeCount>>();
  r.message = j.at("message").get<std::string>();
  return r;
}

json to_json(const SweepDocument& d) {
  json recs = json::array();
  for (const auto& r : d.records) recs.push_back(to_json(r));
  // the document describes results, not where they were written
  json cfg = to_json(d.config);
  cfg.erase("output_dir");
  return {{"schema_version", d.schema_version}, {"config", cfg}, {"rounding", d.rounding},
          {"records", recs}};
}

SweepDocument document_from_json(const json& j) {
  SweepDocument d;
  d.schema_version = j.at("schema_version").get<int>();
  if (d.schema_version != kSchemaVersion)
    throw DomainError("unsupported sweep schema version " + std::to_string(d.schema_version));
  d.config = config_from_json(j.at("config"));
  d.rounding = j.at("rounding").get<std::vector<std::string>>();
  for (const auto& r : j.at("records")) d.records.push_back(record_from_json(r));
  return d;
}

std::string dump_document(const SweepDocument& d) { return to_json(d).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "index",   "hbar",        "m",       "n",        "sign",      "lambda",    "kind",     "flow_mode",
      "epsilon", "time",        "method",  "shift_model", "status",  "max_abs",   "l1",       "estimate",
      "norm_change", "tail_mass", "dimension", "probe_0", "probe_1", "probe_2",   "probe_3",  "message"};
  return cols;
}

std::string csv_header() {
  std::string s;
  for (const auto& c : csv_columns()) s += (s.empty() ? "" : ",") + c;
  return s;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_row(const SweepRecord& r) {
  std::vector<std::string> f{std::to_string(r.index),  format_double(r.hbar),     std::to_string(r.m),
                             std::to_string(r.n),      std::to_string(r.sign),    format_double(r.lambda),
                             to_string(r.kind),        to_string(r.flow_mode),    format_double(r.epsilon),
                             format_double(r.time),    to_string(r.method),       to_string(r.shift_model),
                             r.status,                 format_double(r.max_abs),  format_double(r.l1),
                             format_double(r.estimate), format_double(r.norm_change), format_double(r.tail_mass),
                             std::to_string(r.dimension)};
  for (double p : r.probes) f.push_back(format_double(p));
  f.push_back(csv_quote(r.message));
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + f[i];
  return s;
}

void write_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  std::string text = csv_header() + "\n";
  for (const auto& r : records) text += csv_row(r) + "\n";
  write_text(path, text);
}

void write_timings(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  std::string text = "index,method,wall_time_s\n";
  for (const auto& r : records)
    text += std::to_string(r.index) + "," + to_string(r.method) + "," + format_double(r.wall_time) + "\n";
  write_text(path, text);
}

// ---------------------------------------------------------------------------
// Field dumps
// ---------------------------------------------------------------------------

namespace {

void grid_header(std::ostream& os, const GridSpec& g) {
  if (const auto* p = std::get_if<PolarGrid>(&g)) {
    os << "# grid polar\n# r_min " << format_double(p->r_min) << "\n# r_max " << format_double(p->r_max)
       << "\n# nr " << p->nr << "\n# nth " << p->nth << "\n";
  } else {
    const auto& c = std::get<CartesianGrid>(g);
    os << "# grid cartesian\n# q_min " << format_double(c.q_min) << "\n# q_max " << format_double(c.q_max)
       << "\n# p_min " << format_double(c.p_min) << "\n# p_max " << format_double(c.p_max) << "\n# nq " << c.nq
       << "\n# np " << c.np << "\n";
  }
}

// grid coordinates of node k as printed in the first two columns
std::pair<double, double> coords(const GridSpec& g, int k) {
  if (const auto* p = std::get_if<PolarGrid>(&g)) return {p->r(k / p->nth), p->theta(k % p->nth)};
  const PhasePoint x = grid_point(g, k);
  return {x.x(), x.y()};
}

void write_rows(const std::filesystem::path& path, const std::string& header, const GridSpec& g,
                const std::function<std::string(int)>& value) {
  std::ostringstream os;
  os << header;
  const int n = grid_size(g);
  for (int k = 0; k < n; ++k) {
    const auto [a, b] = coords(g, k);
    os << format_double(a) << ' ' << format_double(b) << ' ' << value(k) << '\n';
  }
  write_text(path, os.str());
}

}  // namespace

void write_field(const PhaseSpaceField& f, const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream h;
  h << "# moyalab field\n";
  grid_header(h, f.grid());
  const auto& m = f.meta();
  h << "# hbar " << format_double(m.hbar) << "\n# m " << m.m << "\n# n " << m.n << "\n# sign " << m.sign
    << "\n# channel " << (m.channel.empty() ? "-" : m.channel) << "\n# time " << format_double(m.time) << "\n";
  for (const auto& [k, v] : extra) h << "# " << k << ' ' << v << '\n';
  const bool polar = std::holds_alternative<PolarGrid>(f.grid());
  h << "# columns " << (polar ? "r theta" : "q p") << (f.is_complex() ? " value_re value_im" : " value") << '\n';
  write_rows(path, h.str(), f.grid(), [&](int k) {
    const Complex z = f.values()[k];
    return f.is_complex() ? format_double(z.real()) + ' ' + format_double(z.imag()) : format_double(z.real());
  });
}

void write_field(const ReducedField& f, const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream h;
  h << "# moyalab reduced field\n";
  grid_header(h, f.x1_grid);
  h << "# method " << to_string(f.method) << "\n# status " << to_string(f.status) << "\n# estimate "
    << format_double(f.estimate) << "\n# max_abs " << format_double(f.max_abs) << "\n# l1 " << format_double(f.l1)
    << '\n';
  for (const auto& [k, v] : f.diagnostics) h << "# diag." << k << ' ' << format_double(v) << '\n';
  for (const auto& [k, v] : extra) h << "# " << k << ' ' << v << '\n';
  const bool polar = std::holds_alternative<PolarGrid>(f.x1_grid);
  h << "# columns " << (polar ? "r theta" : "q p") << " value\n";
  write_rows(path, h.str(), f.x1_grid, [&](int k) { return format_double(f.values[k]); });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace moyalab
