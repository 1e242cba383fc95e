#include "pimecc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "pimecc/errors.hpp"
#include "pimecc/hamming.hpp"

namespace pimecc {

using nlohmann::json;

namespace {

constexpr double kSqnrCapDb = 200.0;  // stands in for +inf when averaging

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = static_cast<unsigned>(std::min<std::size_t>(t, n));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<Bits> random_inputs(std::size_t rows, std::size_t inputs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Bits> out(rows, Bits(inputs));
  for (auto& row : out) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < inputs; ++i) {
      if (i % 64 == 0) word = rng();
      row[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
  }
  return out;
}

RedundancyPlan redundancy_for(const SchemeSpec& s) {
  RedundancyPlan r;
  r.copies = s.kind == SchemeKind::Dmr ? 2 : 3;
  r.space_fraction = s.kind == SchemeKind::Hybrid ? s.alpha : 1.0;
  return r;
}

bool is_redundant(SchemeKind k) {
  return k == SchemeKind::Dmr || k == SchemeKind::Tmr || k == SchemeKind::Hybrid;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<TechnologyParams> technologies_of(const ExperimentConfig& c) {
  std::vector<TechnologyParams> all =
      c.technology_file.empty() ? default_technologies() : load_technologies(c.technology_file);
  if (c.technologies.empty()) return all;
  std::vector<TechnologyParams> out;
  for (const auto& name : c.technologies) {
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& t) { return t.name == name; });
    if (it == all.end()) throw ConfigError("unknown technology '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

std::vector<SchemeSpec> schemes_of(const ExperimentConfig& c) {
  std::vector<SchemeSpec> out;
  for (const auto& s : c.schemes) out.push_back(SchemeSpec::parse(s, c.alpha));
  return out;
}

json row_objects(const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
    arr.push_back(std::move(o));
  }
  return arr;
}

std::string make_summary(const ExperimentConfig& c, const Table& t, json extra) {
  json s;
  s["experiment"] = std::string(to_string(c.kind));
  s["config_hash"] = config_hash(c);
  s["config"] = json::parse(config_to_json(c));
  s["columns"] = t.columns;
  s["results"] = row_objects(t.columns, t.rows);
  if (!extra.is_null()) s["summary"] = std::move(extra);
  return s.dump(2) + "\n";
}

}  // namespace

// ---------------------------------------------------------------- names

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Coverage: return "coverage";
    case ExperimentKind::RSweep: return "rsweep";
    case ExperimentKind::FftAccuracy: return "fft-accuracy";
    case ExperimentKind::Energy: return "energy";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Coverage, ExperimentKind::RSweep, ExperimentKind::FftAccuracy,
                 ExperimentKind::Energy}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

SchemeSpec SchemeSpec::parse(std::string_view text, double default_alpha) {
  SchemeSpec s;
  s.alpha = default_alpha;
  if (text == "none") s.kind = SchemeKind::None;
  else if (text == "detection") s.kind = SchemeKind::Detection;
  else if (text == "hamming") s.kind = SchemeKind::Hamming;
  else if (text == "dmr") s.kind = SchemeKind::Dmr;
  else if (text == "tmr") s.kind = SchemeKind::Tmr;
  else if (text == "hybrid") s.kind = SchemeKind::Hybrid;
  else if (text.starts_with("hybrid(") && text.ends_with(")")) {
    s.kind = SchemeKind::Hybrid;
    const std::string_view arg = text.substr(7, text.size() - 8);
    if (arg == "iso") {
      s.alpha = -1.0;
    } else {
      double a = 0.0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), a);
      if (ec != std::errc() || ptr != arg.data() + arg.size()) {
        throw ConfigError("bad hybrid fraction in '" + std::string(text) + "'");
      }
      s.alpha = a;
    }
  } else {
    throw ConfigError("unknown scheme '" + std::string(text) + "'");
  }
  if (s.kind == SchemeKind::Hybrid && s.alpha != -1.0 && !(s.alpha >= 0.0 && s.alpha <= 1.0)) {
    throw ConfigError("hybrid fraction must be in [0, 1]");
  }
  return s;
}

std::string SchemeSpec::label() const {
  switch (kind) {
    case SchemeKind::None: return "none";
    case SchemeKind::Detection: return "detection";
    case SchemeKind::Hamming: return "hamming";
    case SchemeKind::Dmr: return "dmr";
    case SchemeKind::Tmr: return "tmr";
    case SchemeKind::Hybrid: return alpha < 0.0 ? "hybrid(iso)" : "hybrid(" + format_double(alpha) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::Coverage:
      c.netlist.generator = "random";
      c.netlist.gates = 64;
      c.netlist.inputs = 8;
      c.schemes = {"none", "detection", "hamming", "tmr"};
      c.p_grid = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
      c.trials = 2000;
      c.rows = 32;
      c.out = "coverage";
      break;
    case ExperimentKind::RSweep:
      c.netlist.generator = "synthetic";
      c.netlist.gates = 400000;
      c.netlist.inputs = 64;
      c.schemes = {"detection", "hamming", "hybrid(iso)"};
      c.r_values = {16, 64, 256, 1024};
      c.rows = 1;
      c.out = "rsweep";
      break;
    case ExperimentKind::FftAccuracy:
      c.netlist.generator = "fft";
      c.schemes = {"none", "hamming"};
      c.p_grid = {0.0, 1e-5, 1e-4};
      c.trials = 32;
      c.rows = 4;
      c.out = "fft_accuracy";
      break;
    case ExperimentKind::Energy:
      c.netlist.generator = "fft";
      c.schemes = {"none", "detection", "hamming", "dmr", "tmr", "hybrid"};
      c.technologies = {"ReRAM", "STT", "SOT_SHE"};
      c.rows = 1;
      c.out = "energy";
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> generators = {"random", "adder", "multiplier",
                                                      "fft",    "file",  "synthetic"};
  if (std::find(generators.begin(), generators.end(), netlist.generator) == generators.end()) {
    throw ConfigError("unknown netlist generator '" + netlist.generator + "'");
  }
  if (netlist.generator == "file" && netlist.path.empty()) throw ConfigError("netlist.path is required");
  if ((netlist.generator == "random" || netlist.generator == "synthetic") && netlist.gates == 0) {
    throw ConfigError("netlist.gates must be positive");
  }
  if (netlist.generator == "random" && netlist.inputs == 0) throw ConfigError("netlist.inputs must be positive");
  if ((netlist.generator == "adder" || netlist.generator == "multiplier") &&
      (netlist.bits == 0 || netlist.bits > 32)) {
    throw ConfigError("netlist.bits must be in [1, 32]");
  }
  if (netlist.generator == "fft") {
    netlist.format.validate();
    const unsigned n = netlist.points;
    if (n < 2 || n > 1024 || (n & (n - 1)) != 0) throw ConfigError("netlist.points must be a power of two in [2, 1024]");
  }
  if (netlist.generator == "synthetic" && kind != ExperimentKind::RSweep) {
    throw ConfigError("a synthetic netlist only supports the rsweep experiment");
  }
  if (schemes.empty()) throw ConfigError("schemes must not be empty");
  for (const auto& s : schemes) {
    const SchemeSpec parsed = SchemeSpec::parse(s, alpha);
    if (parsed.alpha < 0.0 && kind != ExperimentKind::RSweep) {
      throw ConfigError("hybrid(iso) is only meaningful in rsweep");
    }
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
  if (code_k == 0 || code_k > 4096) throw ConfigError("code_k must be in [1, 4096]");
  if (rows == 0) throw ConfigError("rows must be positive");
  if ((kind == ExperimentKind::Coverage || kind == ExperimentKind::FftAccuracy)) {
    if (trials == 0) throw ConfigError("trials must be positive");
    if (p_grid.empty()) throw ConfigError("p must list at least one error probability");
    for (double p : p_grid) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("error probabilities must be in [0, 1]");
    }
  }
  if (kind == ExperimentKind::RSweep && r_values.empty()) throw ConfigError("R_values must not be empty");
  if (kind == ExperimentKind::Energy) (void)technologies_of(*this);
  if (out.empty()) throw ConfigError("out must not be empty");
}

namespace {

template <class T>
void take(const json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError(std::string("unknown ") + where + " key '" + it.key() + "'");
    }
  }
}

json to_json_obj(const ExperimentConfig& c, bool for_hash) {
  json n;
  n["generator"] = c.netlist.generator;
  n["gates"] = c.netlist.gates;
  n["inputs"] = c.netlist.inputs;
  n["bits"] = c.netlist.bits;
  n["points"] = c.netlist.points;
  n["total_bits"] = c.netlist.format.total_bits;
  n["fraction_bits"] = c.netlist.format.fraction_bits;
  n["path"] = c.netlist.path;
  n["seed"] = c.netlist.seed;
  json j;
  j["experiment"] = std::string(to_string(c.kind));
  j["netlist"] = n;
  j["schemes"] = c.schemes;
  j["alpha"] = c.alpha;
  j["R"] = c.R;
  j["R_values"] = c.r_values;
  j["code_k"] = c.code_k;
  j["p"] = c.p_grid;
  j["trials"] = c.trials;
  j["rows"] = c.rows;
  j["seed"] = c.seed;
  j["technologies"] = c.technologies;
  j["technology_file"] = c.technology_file;
  j["simulate"] = c.simulate;
  if (!for_hash) {
    j["threads"] = c.threads;
    j["out"] = c.out;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"experiment", "netlist", "schemes", "alpha", "R", "R_values", "code_k", "p", "trials",
                  "rows", "seed", "technologies", "technology_file", "simulate", "threads", "out"},
                 "config");
  if (!j.contains("experiment")) throw ConfigError("config needs an \"experiment\" field");
  std::string kind;
  take(j, "experiment", kind);
  ExperimentConfig c = ExperimentConfig::defaults(parse_experiment_kind(kind));
  if (j.contains("netlist")) {
    const json& n = j["netlist"];
    if (!n.is_object()) throw ConfigError("netlist must be an object");
    reject_unknown(n, {"generator", "gates", "inputs", "bits", "points", "total_bits", "fraction_bits", "path", "seed"},
                   "netlist");
    take(n, "generator", c.netlist.generator);
    take(n, "gates", c.netlist.gates);
    take(n, "inputs", c.netlist.inputs);
    take(n, "bits", c.netlist.bits);
    take(n, "points", c.netlist.points);
    take(n, "total_bits", c.netlist.format.total_bits);
    take(n, "fraction_bits", c.netlist.format.fraction_bits);
    take(n, "path", c.netlist.path);
    take(n, "seed", c.netlist.seed);
  }
  take(j, "schemes", c.schemes);
  take(j, "alpha", c.alpha);
  take(j, "R", c.R);
  take(j, "R_values", c.r_values);
  take(j, "code_k", c.code_k);
  take(j, "p", c.p_grid);
  take(j, "trials", c.trials);
  take(j, "rows", c.rows);
  take(j, "seed", c.seed);
  take(j, "technologies", c.technologies);
  take(j, "technology_file", c.technology_file);
  take(j, "simulate", c.simulate);
  take(j, "threads", c.threads);
  take(j, "out", c.out);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string config_to_json(const ExperimentConfig& c, bool for_hash) {
  return to_json_obj(c, for_hash).dump();
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(c, true))));
  return buf;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return splitmix64(s ^ c);
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

NorNetlist build_netlist(const NetlistSpec& s) {
  if (s.generator == "random") return gen_random(s.gates, s.inputs, s.seed);
  if (s.generator == "adder") return gen_adder(s.bits);
  if (s.generator == "multiplier") return gen_multiplier(s.bits);
  if (s.generator == "fft") return gen_fft(s.points, s.format);
  if (s.generator == "file") return parse_netlist(read_file(s.path));
  throw ConfigError("generator '" + s.generator + "' does not produce a netlist");
}

// ---------------------------------------------------------------- executor

SchemeExecutor::SchemeExecutor(const NorNetlist& netlist, SchemeSpec scheme, std::size_t rows,
                               std::size_t R, std::size_t code_k)
    : netlist_(netlist), scheme_(scheme), rows_(rows) {
  if (is_redundant(scheme.kind)) redundancy_for(scheme).validate();
  const ArrayGeometry geo{rows, 0};
  PipelineOptions opt;
  opt.R = R;
  switch (scheme.kind) {
    case SchemeKind::Detection:
      plan_ = pimecc::plan(netlist, PipelineMode::Detection, std::nullopt, geo, opt);
      break;
    case SchemeKind::Hamming:
      plan_ = pimecc::plan(netlist, PipelineMode::Correction, HammingCode::build(code_k), geo, opt);
      break;
    default:
      plan_ = pimecc::plan(netlist, PipelineMode::Baseline, std::nullopt, geo, opt);
      break;
  }
}

SchemeExecutor::Result SchemeExecutor::execute(std::span<const Bits> inputs, FaultSource& faults) const {
  if (inputs.size() != rows_) throw ConfigError("input row count does not match the executor");
  Result r;
  if (is_redundant(scheme_.kind)) {
    RedundantOutcome o = run_redundant(netlist_, plan_, redundancy_for(scheme_), inputs, faults);
    r.data = std::move(o.final_data);
    r.flagged = std::move(o.detected);
    return r;
  }
  RunOptions opt;
  opt.faults = &faults;
  PipelineOutcome o = run(plan_.schedule, plan_.layout, netlist_, inputs, opt);
  r.data = std::move(o.final_data);
  r.flagged.assign(rows_, 0);
  if (scheme_.kind == SchemeKind::Detection) {
    r.flagged = o.detected;
  } else if (scheme_.kind == SchemeKind::Hamming) {
    for (std::size_t i = 0; i < rows_; ++i) {
      r.flagged[i] = (o.corrected_position[i].has_value() || o.uncorrectable[i]) ? 1 : 0;
    }
  }
  return r;
}

Interval exact_error_rate(const NorNetlist& netlist, SchemeSpec scheme, double p,
                          std::size_t max_faults, std::size_t R, std::size_t code_k) {
  const std::size_t I = netlist.input_count();
  if (I > 12) throw ConfigError("exact enumeration supports at most 12 inputs");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must be in [0, 1]");
  const SchemeExecutor ex(netlist, scheme, 1, R, code_k);
  const std::size_t assignments = std::size_t{1} << I;

  double lo = 0.0, hi = 0.0;
  std::vector<Bits> in(1, Bits(I));
  for (std::size_t a = 0; a < assignments; ++a) {
    for (std::size_t i = 0; i < I; ++i) in[0][i] = static_cast<std::uint8_t>((a >> i) & 1u);
    const Bits expected = evaluate(netlist, in[0]);
    // A pattern S of faulty writes fixes the run, hence the number T(S) of
    // cells written (correction replays add cells). Patterns are disjoint
    // events of probability p^|S| (1-p)^(T(S)-|S|); a new site can only be a
    // cell the run with S already writes.
    double a_err = 0.0, mass = 0.0;
    std::vector<std::uint64_t> sites;
    std::function<void(std::uint64_t)> visit = [&](std::uint64_t start) {
      ForcedFaults forced(sites);
      const auto res = ex.execute(in, forced);
      const std::uint64_t T = forced.cells_seen();
      const double j = static_cast<double>(sites.size());
      const double prob = std::pow(p, j) * std::pow(1.0 - p, static_cast<double>(T) - j);
      mass += prob;
      if (res.data[0] != expected) a_err += prob;
      if (sites.size() >= max_faults) return;
      for (std::uint64_t s = start; s < T; ++s) {
        sites.push_back(s);
        visit(s + 1);
        sites.pop_back();
      }
    };
    visit(0);
    lo += a_err;
    hi += a_err + std::max(0.0, 1.0 - mass);
  }
  const double n = static_cast<double>(assignments);
  return {lo / n, std::min(1.0, hi / n)};
}

// ---------------------------------------------------------------- tables

std::string Table::to_csv() const {
  std::string s;
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
    s += '\n';
  }
  return s;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  if (v == std::trunc(v) && std::abs(v) < 1e15) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
    (void)ec;
    return std::string(buf, ptr);
  }
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

Table run_coverage_sweep(const ExperimentConfig& c) {
  c.validate();
  const NorNetlist net = build_netlist(c.netlist);
  const std::string hash = config_hash(c);
  Table t;
  t.columns = {"config_hash", "scheme", "p", "trials", "rows", "samples", "errors", "flagged",
               "silent_errors", "uncorrected_error_rate", "ci_low", "ci_high"};
  json extra = json::object();
  for (const SchemeSpec& scheme : schemes_of(c)) {
    const SchemeExecutor ex(net, scheme, c.rows, c.R, c.code_k);
    const std::uint64_t scheme_key = fnv1a(scheme.label());
    for (std::size_t pi = 0; pi < c.p_grid.size(); ++pi) {
      const double p = c.p_grid[pi];
      struct Counts {
        std::size_t errors = 0, flagged = 0, silent = 0;
      };
      std::vector<Counts> per(c.trials);
      parallel_for(c.trials, c.threads, [&](std::size_t trial) {
        const auto inputs = random_inputs(c.rows, net.input_count(), derive_seed(c.seed, 0, 0, trial));
        ErrorModel em;
        em.p = p;
        em.seed = derive_seed(c.seed, scheme_key, std::bit_cast<std::uint64_t>(p), trial);
        BernoulliFaults faults(em);
        const auto res = ex.execute(inputs, faults);
        Counts& k = per[trial];
        for (std::size_t r = 0; r < c.rows; ++r) {
          const bool wrong = res.data[r] != evaluate(net, inputs[r]);
          k.errors += wrong;
          k.flagged += res.flagged[r] != 0;
          k.silent += wrong && !res.flagged[r];
        }
      });
      Counts tot;
      for (const auto& k : per) {
        tot.errors += k.errors;
        tot.flagged += k.flagged;
        tot.silent += k.silent;
      }
      const std::size_t samples = c.trials * c.rows;
      const Interval ci = wilson_interval(tot.errors, samples);
      const double rate = static_cast<double>(tot.errors) / static_cast<double>(samples);
      t.rows.push_back({hash, scheme.label(), format_double(p), std::to_string(c.trials), std::to_string(c.rows),
                        std::to_string(samples), std::to_string(tot.errors), std::to_string(tot.flagged),
                        std::to_string(tot.silent), format_double(rate), format_double(ci.low),
                        format_double(ci.high)});
    }
  }
  extra["gates"] = net.gate_count();
  extra["inputs"] = net.input_count();
  t.summary_json = make_summary(c, t, extra);
  return t;
}

Table run_r_sweep(const ExperimentConfig& c) {
  c.validate();
  const bool synthetic = c.netlist.generator == "synthetic";
  std::optional<NorNetlist> net;
  if (!synthetic) net = build_netlist(c.netlist);
  const std::size_t G = synthetic ? c.netlist.gates : net->gate_count();
  const std::size_t I = synthetic ? c.netlist.inputs : net->input_count();
  const HammingCode code = HammingCode::build(c.code_k);
  const std::string hash = config_hash(c);

  Table t;
  t.columns = {"config_hash",   "scheme",          "R",      "mode",
               "cycles",        "baseline_cycles", "parity_columns", "compute_columns",
               "latency_overhead_pct", "area_overhead_pct", "reallocations", "status"};
  auto push = [&](const std::string& scheme, std::size_t R, const char* mode, const std::string& cycles,
                  const std::string& base, const std::string& parity, const std::string& compute,
                  const std::string& lat, const std::string& area, const std::string& realloc,
                  const std::string& status) {
    t.rows.push_back({hash, scheme, std::to_string(R), mode, cycles, base, parity, compute, lat, area, realloc,
                      sanitize(status)});
  };

  std::optional<Plan> base_plan;
  if (net && c.simulate) base_plan = plan(*net, PipelineMode::Baseline, std::nullopt, {1, 0});

  for (std::size_t R : c.r_values) {
    double hamming_area = std::numeric_limits<double>::quiet_NaN();
    {
      AnalyticParams ap;
      ap.gate_count = G;
      ap.input_count = I;
      ap.R = R;
      ap.mode = PipelineMode::Correction;
      ap.parity_bits = code.parity_bits();
      hamming_area = analytic_cost(ap).area_overhead_pct;
    }
    for (const SchemeSpec& s : schemes_of(c)) {
      if (s.kind == SchemeKind::None) continue;
      if (s.kind == SchemeKind::Detection || s.kind == SchemeKind::Hamming) {
        AnalyticParams ap;
        ap.gate_count = G;
        ap.input_count = I;
        ap.R = R;
        ap.mode = s.kind == SchemeKind::Detection ? PipelineMode::Detection : PipelineMode::Correction;
        ap.parity_bits = s.kind == SchemeKind::Detection ? 1 : code.parity_bits();
        const AnalyticReport a = analytic_cost(ap);
        push(s.label(), R, "analytic", format_double(a.cycles), std::to_string(a.baseline_cycles),
             std::to_string(a.parity_columns), std::to_string(a.compute_columns),
             format_double(a.latency_overhead_pct), format_double(a.area_overhead_pct),
             std::to_string(a.reallocations_per_side), "ok");
        if (!c.simulate) continue;
        if (!net) {
          push(s.label(), R, "simulated", "", "", "", "", "", "", "", "skipped: synthetic workload");
          continue;
        }
        try {
          PipelineOptions opt;
          opt.R = R;
          const Plan pl = s.kind == SchemeKind::Detection
                              ? plan(*net, PipelineMode::Detection, std::nullopt, {1, 0}, opt)
                              : plan(*net, PipelineMode::Correction, code, {1, 0}, opt);
          const CostReport cr = cost_report(pl, *base_plan, {});
          const std::size_t realloc =
              std::max(pl.schedule.events_on(Side::Left), pl.schedule.events_on(Side::Right));
          push(s.label(), R, "simulated", std::to_string(cr.cycles), std::to_string(cr.baseline_cycles),
               std::to_string(cr.parity_area_columns), std::to_string(cr.compute_area_columns),
               format_double(cr.latency_overhead_pct), format_double(cr.area_overhead_pct),
               std::to_string(realloc), "ok");
        } catch (const Error& e) {
          push(s.label(), R, "simulated", "", "", "", "", "", "", "", std::string("error: ") + e.what());
        }
        continue;
      }
      // Redundancy baselines, evaluated against the same compute region.
      try {
        SchemeSpec eff = s;
        if (s.kind == SchemeKind::Hybrid && s.alpha < 0.0) eff.alpha = iso_area_alpha(hamming_area, 3);
        const RedundancyCost rc = redundancy_cost(redundancy_for(eff), G, G + I);
        push(s.label(), R, "analytic", format_double(rc.cycles), std::to_string(G),
             format_double(rc.extra_columns), std::to_string(G + I), format_double(rc.latency_overhead_pct),
             format_double(rc.area_overhead_pct), "0",
             s.alpha < 0.0 ? "ok: alpha=" + format_double(eff.alpha) : "ok");
      } catch (const ConfigError& e) {
        push(s.label(), R, "analytic", "", "", "", "", "", "", "", std::string("unreachable: ") + e.what());
      }
    }
  }
  json extra = json::object();
  extra["gates"] = G;
  extra["inputs"] = I;
  extra["parity_bits"] = code.parity_bits();
  t.summary_json = make_summary(c, t, extra);
  return t;
}

Table run_fft_accuracy(const ExperimentConfig& c) {
  c.validate();
  if (c.netlist.generator != "fft") throw ConfigError("fft-accuracy needs the fft generator");
  const NorNetlist net = build_netlist(c.netlist);
  const FixedPointFormat fmt = c.netlist.format;
  const unsigned N = c.netlist.points;
  const double floor_db = fft_quantization_floor_db(N, fmt);
  const std::string hash = config_hash(c);

  Table t;
  t.columns = {"config_hash", "scheme",         "p",           "trials",   "rows",          "samples",
               "mean_sqnr_db", "pooled_sqnr_db", "min_sqnr_db", "floor_db", "faulty_samples"};
  for (const SchemeSpec& scheme : schemes_of(c)) {
    const SchemeExecutor ex(net, scheme, c.rows, c.R, c.code_k);
    const std::uint64_t scheme_key = fnv1a(scheme.label());
    for (double p : c.p_grid) {
      struct Sample {
        double sqnr = 0.0, signal = 0.0, noise = 0.0;
        bool faulty = false;
      };
      std::vector<Sample> per(c.trials * c.rows);
      parallel_for(c.trials, c.threads, [&](std::size_t trial) {
        std::vector<std::vector<FixedComplex>> x(c.rows);
        std::vector<Bits> inputs(c.rows);
        for (std::size_t r = 0; r < c.rows; ++r) {
          x[r] = random_fft_input(N, fmt, derive_seed(c.seed, 0, trial, r));
          inputs[r] = fft_input_bits(x[r], fmt);
        }
        ErrorModel em;
        em.p = p;
        em.seed = derive_seed(c.seed, scheme_key, std::bit_cast<std::uint64_t>(p), trial);
        BernoulliFaults faults(em);
        const auto res = ex.execute(inputs, faults);
        for (std::size_t r = 0; r < c.rows; ++r) {
          const auto got = fft_output_values(res.data[r], fmt);
          const auto expected = dft_scaled(to_complex(x[r], fmt));
          const auto measured = to_complex(got, fmt);
          Sample& s = per[trial * c.rows + r];
          for (std::size_t i = 0; i < expected.size(); ++i) {
            s.signal += std::norm(expected[i]);
            s.noise += std::norm(measured[i] - expected[i]);
          }
          s.sqnr = std::min(kSqnrCapDb, sqnr_db(expected, measured));
          s.faulty = got != fixed_fft_reference(x[r], fmt);
        }
      });
      double sum_db = 0.0, signal = 0.0, noise = 0.0, min_db = std::numeric_limits<double>::infinity();
      std::size_t faulty = 0;
      for (const Sample& s : per) {
        sum_db += s.sqnr;
        signal += s.signal;
        noise += s.noise;
        min_db = std::min(min_db, s.sqnr);
        faulty += s.faulty;
      }
      const double pooled = noise > 0.0 ? 10.0 * std::log10(signal / noise) : kSqnrCapDb;
      t.rows.push_back({hash, scheme.label(), format_double(p), std::to_string(c.trials), std::to_string(c.rows),
                        std::to_string(per.size()), format_double(sum_db / static_cast<double>(per.size())),
                        format_double(pooled), format_double(min_db), format_double(floor_db),
                        std::to_string(faulty)});
    }
  }
  json extra = json::object();
  extra["gates"] = net.gate_count();
  extra["points"] = N;
  extra["format"] = std::to_string(fmt.total_bits - fmt.fraction_bits) + "." + std::to_string(fmt.fraction_bits);
  t.summary_json = make_summary(c, t, extra);
  return t;
}

Table run_energy_breakdown(const ExperimentConfig& c) {
  c.validate();
  const NorNetlist net = build_netlist(c.netlist);
  const auto techs = technologies_of(c);
  const std::string hash = config_hash(c);
  const double rows = static_cast<double>(c.rows);
  const double writes = static_cast<double>(net.input_count()) * rows;

  Table t;
  t.columns = {"config_hash", "scheme", "technology", "compute_energy", "ecc_energy",
               "input_write_energy", "total", "overhead_pct"};
  const SchemeExecutor base(net, SchemeSpec{}, c.rows, c.R, c.code_k);
  for (const SchemeSpec& s : schemes_of(c)) {
    const SchemeExecutor ex(net, s, c.rows, c.R, c.code_k);
    for (const auto& tech : techs) {
      const EnergyBreakdown b = energy(base.plan().schedule, tech, c.rows);
      const double base_total = b.total + writes * tech.write_energy;
      double compute = 0.0, ecc = 0.0, w = writes * tech.write_energy;
      if (is_redundant(s.kind)) {
        const double n = static_cast<double>(redundancy_for(s).copies);
        compute = b.compute;
        ecc = (n - 1.0) * b.compute;
        w *= n;
      } else {
        const EnergyBreakdown e = energy(ex.plan().schedule, tech, c.rows);
        compute = e.compute;
        ecc = e.ecc + e.redundant;
      }
      const double total = compute + ecc + w;
      t.rows.push_back({hash, s.label(), tech.name, format_double(compute), format_double(ecc), format_double(w),
                        format_double(total), format_double(100.0 * (total - base_total) / base_total)});
    }
  }
  json extra = json::object();
  extra["gates"] = net.gate_count();
  extra["rows"] = c.rows;
  t.summary_json = make_summary(c, t, extra);
  return t;
}

Table run_experiment(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::Coverage: return run_coverage_sweep(c);
    case ExperimentKind::RSweep: return run_r_sweep(c);
    case ExperimentKind::FftAccuracy: return run_fft_accuracy(c);
    case ExperimentKind::Energy: return run_energy_breakdown(c);
  }
  throw ConfigError("unknown experiment");
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path + "'");
  }
}

void write_outputs(const Table& table, const std::string& prefix) {
  const std::string csv = table.to_csv();
  write_file_atomic(prefix + ".csv", csv);
  write_file_atomic(prefix + ".json", table.summary_json);
}

}  // namespace pimecc
