#include "gcnet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "gcnet/error.hpp"
#include "gcnet/format.hpp"
#include "gcnet/lasso.hpp"
#include "gcnet/metrics.hpp"
#include "gcnet/parallel.hpp"
#include "gcnet/recovery.hpp"

namespace gcnet {

std::string TopologySpec::tag() const {
  if (kind == TopologyKind::scg) return "SCG";
  std::ostringstream os;
  os << q;
  return os.str();
}

const char* to_string(Algorithm a) {
  return a == Algorithm::pwgc ? "pwgc" : "alasso";
}

void BenchConfig::validate() const {
  if (topologies.empty()) throw std::invalid_argument("bench config: no topologies");
  for (const auto& t : topologies) {
    if (t.kind == TopologyKind::dag && !(t.q >= 0.0 && t.q <= 1.0)) {
      throw std::invalid_argument("bench config: q must lie in [0, 1]");
    }
  }
  if (n == 0 || p_true == 0 || p_max == 0) throw std::invalid_argument("bench config: n, p_true, p_max must be positive");
  if (T_values.empty()) throw std::invalid_argument("bench config: no sample sizes");
  for (std::size_t T : T_values) {
    if (T <= p_max) throw std::invalid_argument("bench config: every T must exceed p_max");
  }
  if (algorithms.empty()) throw std::invalid_argument("bench config: empty algorithm list");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("bench config: alpha must lie in (0, 1)");
  if (T_out == 0) throw std::invalid_argument("bench config: T_out must be positive");
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
  BenchConfig c;
  try {
    if (j.contains("topologies")) {
      c.topologies.clear();
      for (const auto& t : j.at("topologies")) {
        if (t.is_string() && t.get<std::string>() == "scg") {
          c.topologies.push_back({TopologyKind::scg, 0.0});
        } else if (t.is_object() && t.contains("dag")) {
          c.topologies.push_back({TopologyKind::dag, t.at("dag").get<double>()});
        } else {
          throw std::invalid_argument("bench config: topology must be \"scg\" or {\"dag\": q}");
        }
      }
    }
    c.n = j.value("n", c.n);
    c.p_true = j.value("p_true", c.p_true);
    c.p_max = j.value("p_max", c.p_max);
    if (j.contains("T")) c.T_values = j.at("T").get<std::vector<std::size_t>>();
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) {
        const auto name = a.get<std::string>();
        if (name == "pwgc") {
          c.algorithms.push_back(Algorithm::pwgc);
        } else if (name == "alasso") {
          c.algorithms.push_back(Algorithm::alasso);
        } else {
          throw std::invalid_argument("bench config: unknown algorithm '" + name + "'");
        }
      }
    }
    c.replicates = j.value("replicates", c.replicates);
    c.alpha = j.value("alpha", c.alpha);
    c.seed = j.value("seed", c.seed);
    c.T_out = j.value("T_out", c.T_out);
    c.records_path = j.value("records", c.records_path);
    c.summary_path = j.value("summary", c.summary_path);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bench config: ") + e.what());
  }
  c.validate();
  return c;
}

Replicate draw_replicate(const TopologySpec& topology, std::size_t n, std::size_t p,
                         std::size_t T, std::uint64_t seed) {
  Rng rng(seed);
  DirectedGraph g = topology.kind == TopologyKind::scg ? random_scg(n, rng)
                                                       : random_dag(n, topology.q, rng);
  VarModel m = build_var_model(g, p, rng);
  SeriesMatrix x = simulate(m, T, default_burn_in(n, p), rng);
  return Replicate{std::move(g), std::move(m), std::move(x)};
}

namespace {

struct Cell {
  std::size_t topology;
  std::size_t T_index;
  std::size_t replicate;
};

std::uint64_t replicate_seed(std::uint64_t master, const Cell& cell) {
  const std::uint64_t stream = (static_cast<std::uint64_t>(cell.topology) << 48) |
                               (static_cast<std::uint64_t>(cell.T_index) << 32) |
                               static_cast<std::uint64_t>(cell.replicate);
  Rng rng = make_stream(master, stream);
  return rng();
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (std::size_t t = 0; t < config.topologies.size(); ++t) {
    for (std::size_t k = 0; k < config.T_values.size(); ++k) {
      for (std::size_t r = 0; r < config.replicates; ++r) cells.push_back({t, k, r});
    }
  }
  const std::size_t algos = config.algorithms.size();
  std::vector<BenchRecord> records(cells.size() * algos);

  parallel_for(cells.size(), config.threads, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const auto& topo = config.topologies[cell.topology];
    const std::size_t T = config.T_values[cell.T_index];
    const std::uint64_t seed = replicate_seed(config.seed, cell);

    for (std::size_t a = 0; a < algos; ++a) {
      BenchRecord& rec = records[c * algos + a];
      rec.topology = topo.tag();
      rec.n = config.n;
      rec.p = config.p_true;
      rec.p_max = config.p_max;
      rec.T = T;
      rec.replicate = cell.replicate;
      rec.seed = seed;
      rec.algorithm = to_string(config.algorithms[a]);
    }

    Replicate rep;
    SeriesMatrix holdout;
    try {
      rep = draw_replicate(topo, config.n, config.p_true, T, seed);
      // Held-out stream continues from an independent generator so both
      // algorithms are scored on the same data.
      Rng out_rng = make_stream(seed, 1);
      holdout = simulate(rep.model, config.T_out + config.p_max,
                         default_burn_in(config.n, config.p_true), out_rng);
    } catch (const std::exception& e) {
      for (std::size_t a = 0; a < algos; ++a) records[c * algos + a].failure = e.what();
      return;
    }

    for (std::size_t a = 0; a < algos; ++a) {
      BenchRecord& rec = records[c * algos + a];
      const auto start = std::chrono::steady_clock::now();
      try {
        DirectedGraph est;
        VarModel model;
        if (config.algorithms[a] == Algorithm::pwgc) {
          PairwiseOptions opts;
          opts.threads = 1;
          auto res = pwgc_pipeline(rep.series, config.p_max, config.alpha, opts);
          est = std::move(res.recovery.graph);
          model = std::move(res.refit.model);
        } else {
          auto res = adalasso_graph(rep.series, config.p_max, {}, 1);
          est = std::move(res.graph);
          model = std::move(res.model);
        }
        const auto counts = confusion(rep.graph, est);
        rec.mcc = mcc(counts);
        rec.fdp = fdp(counts);
        try {
          rec.lre = lre_on(rep.model, model, holdout);
        } catch (const DegenerateError&) {
          rec.lre = std::numeric_limits<double>::quiet_NaN();
          rec.lre_valid = false;
        }
      } catch (const std::exception& e) {
        rec.failure = e.what();
      }
      rec.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });
  return records;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::string num(double v) { return std::isnan(v) ? std::string("nan") : format_double(v); }

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records, bool with_timing) {
  out << "topology,n,p,p_max,T,replicate,seed,algorithm,mcc,fdp,lre,lre_valid,failure";
  if (with_timing) out << ",wall_time";
  out << '\n';
  for (const auto& r : records) {
    const bool failed = !r.failure.empty();
    out << r.topology << ',' << r.n << ',' << r.p << ',' << r.p_max << ',' << r.T << ','
        << r.replicate << ',' << r.seed << ',' << r.algorithm << ','
        << (failed ? "nan" : num(r.mcc)) << ',' << (failed ? "nan" : num(r.fdp)) << ','
        << (failed ? "nan" : num(r.lre)) << ',' << (r.lre_valid && !failed ? 1 : 0) << ','
        << csv_field(r.failure);
    if (with_timing) out << ',' << format_double(r.wall_time);
    out << '\n';
  }
}

Quartiles quartiles(std::vector<double> values) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (values.empty()) return {nan, nan, nan, nan};
  std::sort(values.begin(), values.end());
  auto at = [&](double prob) {
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  double sum = 0.0;
  for (double v : values) sum += v;
  return {sum / static_cast<double>(values.size()), at(0.5), at(0.25), at(0.75)};
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  // Groups keep first-appearance order, which run_benchmark makes
  // topology-major.
  std::vector<std::tuple<std::string, std::size_t, std::string>> keys;
  std::map<std::tuple<std::string, std::size_t, std::string>, std::vector<const BenchRecord*>> groups;
  for (const auto& r : records) {
    auto key = std::make_tuple(r.topology, r.T, r.algorithm);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(&r);
  }
  // T-major, then first appearance of topology and algorithm.
  std::stable_sort(keys.begin(), keys.end(),
                   [](const auto& a, const auto& b) { return std::get<1>(a) < std::get<1>(b); });

  std::vector<SummaryRow> rows;
  for (const auto& key : keys) {
    SummaryRow row;
    row.topology = std::get<0>(key);
    row.T = std::get<1>(key);
    row.algorithm = std::get<2>(key);
    std::vector<double> m, f, l;
    for (const BenchRecord* r : groups[key]) {
      ++row.replicates;
      if (!r->failure.empty()) {
        ++row.failures;
        continue;
      }
      m.push_back(r->mcc);
      f.push_back(r->fdp);
      if (r->lre_valid) {
        l.push_back(r->lre);
      } else {
        ++row.lre_excluded;
      }
    }
    row.mcc = quartiles(std::move(m));
    row.fdp = quartiles(std::move(f));
    row.lre = quartiles(std::move(l));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "T,topology,algorithm,replicates,failures,lre_excluded";
  for (const char* metric : {"mcc", "fdp", "lre"}) {
    for (const char* stat : {"mean", "median", "q1", "q3"}) out << ',' << metric << '_' << stat;
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.T << ',' << r.topology << ',' << r.algorithm << ',' << r.replicates << ','
        << r.failures << ',' << r.lre_excluded;
    for (const Quartiles* q : {&r.mcc, &r.fdp, &r.lre}) {
      out << ',' << num(q->mean) << ',' << num(q->median) << ',' << num(q->q1) << ',' << num(q->q3);
    }
    out << '\n';
  }
}

}  // namespace gcnet
