// Experiment harness: generate instances, run solvers against oracles, time
// dynamic updates.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "maxrs/maxrs.hpp"

using namespace maxrs;
using io::json;

namespace {

struct Config {
  std::string kind;
  std::string algo;
  int d = 2;
  double eps = 0.2;
  double c_sample = 4.0;
  double c1 = 8.0;
  std::uint64_t seed = 1;
  int trials = 1;
  std::string in;
  std::string out;
  std::string format = "json";
  bool check = false;
  // generator
  int k = 20;
  int decoys = 200;
  int n = 100;
  int m = 5;
  double extent = 10.0;
  // reductions
  int mask = 0;
  // bench
  std::vector<long> ns{1000, 10000, 100000};
  int updates = 200;
  double region = 20.0;
};

using Row = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string cell_text(const Row& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return io::format_double(v.get<double>());
  return v.dump();
}

void emit(const Config& cfg, const std::vector<Row>& rows) {
  std::ostringstream os;
  if (cfg.format == "csv") {
    std::vector<std::string> cols;
    for (const auto& r : rows)
      for (const auto& [key, v] : r.items())
        if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_field(cols[i]);
    os << "\r\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << csv_field(r.contains(cols[i]) ? cell_text(r[cols[i]]) : "");
      os << "\r\n";
    }
  } else {
    os << Row(rows).dump(1) << "\n";
  }
  if (cfg.out.empty()) std::cout << os.str();
  else io::write_file(cfg.out, os.str());
}

int thread_count() {
  int t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("MAXRS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) t = std::min(t, cap);
  }
  return t;
}

// Runs fn(trial) for every trial on a small pool; results keep trial order.
template <class Fn>
std::vector<std::vector<Row>> fan_out(int trials, Fn fn) {
  std::vector<std::vector<Row>> out(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (int t; (t = next++) < trials;) {
      try {
        out[static_cast<std::size_t>(t)] = fn(t);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0, n = std::min(thread_count(), trials); i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- generate

io::Instance generate(const Config& c) {
  io::Instance inst;
  inst.d = c.d;
  inst.seed = c.seed;
  inst.generator = {{"kind", c.kind}};
  std::mt19937_64 rng(c.seed);
  if (c.kind == "planted" || c.kind == "planted_colored") {
    const bool colored = c.kind == "planted_colored";
    const auto p = oracle::make_planted({c.d, c.k, c.decoys, c.seed, colored, 0});
    inst.kind = colored ? "colored_disks" : "balls";
    inst.balls = p.balls;
    inst.colored = p.colored;
    inst.opt = p.value;
    inst.generator.update({{"k", c.k}, {"decoys", c.decoys}});
  } else if (c.kind == "random_balls" || c.kind == "random_colored") {
    std::uniform_real_distribution<double> u(0.0, c.extent);
    const bool colored = c.kind == "random_colored";
    inst.kind = colored ? "colored_disks" : "balls";
    for (int i = 0; i < c.n; ++i) {
      PointD p(c.d);
      for (int k = 0; k < c.d; ++k) p[k] = u(rng);
      if (colored) inst.colored.push_back({static_cast<BallId>(i + 1), p, 1 + static_cast<int>(rng() % c.m)});
      else inst.balls.push_back({static_cast<BallId>(i + 1), p, 1.0});
    }
    inst.generator.update({{"n", c.n}, {"m", c.m}, {"extent", io::format_double(c.extent)}});
  } else if (c.kind == "sequences") {
    inst.kind = "sequences";
    inst.d = 1;
    std::uniform_int_distribution<int> v(-50, 50);
    for (int i = 0; i < c.n; ++i) {
      inst.a.push_back(v(rng));
      inst.b.push_back(v(rng));
    }
    inst.generator.update({{"n", c.n}});
  } else if (c.kind == "trace") {
    inst.kind = "trace";
    std::uniform_real_distribution<double> u(0.0, c.extent);
    std::vector<BallId> live;
    BallId next = 1;
    for (int i = 0; i < c.n; ++i) {
      const auto r = rng() % 4;
      if (r == 0) {
        inst.trace.push_back({io::TraceOp::Kind::query, {}});
      } else if (r == 1 && !live.empty()) {
        const std::size_t j = rng() % live.size();
        inst.trace.push_back({io::TraceOp::Kind::erase, {live[j], PointD(c.d), 1.0}});
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        PointD p(c.d);
        for (int k = 0; k < c.d; ++k) p[k] = u(rng);
        inst.trace.push_back({io::TraceOp::Kind::insert, {next, p, 1.0}});
        live.push_back(next++);
      }
    }
    inst.trace.push_back({io::TraceOp::Kind::query, {}});
    inst.generator.update({{"ops", c.n}, {"extent", io::format_double(c.extent)}});
  } else {
    throw std::invalid_argument("unknown generator kind: " + c.kind);
  }
  return inst;
}

// --------------------------------------------------------------------- run

Row base_row(const Config& c, const io::Instance& inst, std::uint64_t seed) {
  std::size_t n = inst.balls.size() + inst.colored.size() + inst.a.size();
  std::set<int> colors;
  for (const auto& b : inst.colored) colors.insert(b.color);
  return {{"algorithm", c.algo}, {"n", n}, {"m", colors.size()}, {"d", inst.d}, {"eps", c.eps},
          {"c_sample", c.c_sample}, {"c1", c.c1}, {"seed", seed}, {"value", nullptr}, {"opt_if_known", nullptr},
          {"ratio", nullptr}, {"wall_ms", 0.0}};
}

// Known optimum: stored in the instance, else from a brute-force oracle when
// asked for and available.
std::optional<double> known_opt(const Config& c, const io::Instance& inst) {
  if (inst.opt) return inst.opt;
  if (!c.check || inst.d != 2) return std::nullopt;
  if (inst.kind == "balls") {
    const auto r = oracle::brute_maxrs_disks_2d(inst.balls);
    return r ? std::optional(r->value) : std::optional(0.0);
  }
  if (inst.kind == "colored_disks") {
    const auto r = oracle::brute_colored_maxrs_disks(inst.colored);
    return r ? std::optional(r->value) : std::optional(0.0);
  }
  return std::nullopt;
}

void finish(Row& row, double value, std::optional<double> opt, double lower_factor, bool honest) {
  row["value"] = value;
  bool pass = honest;
  if (opt) {
    row["opt_if_known"] = *opt;
    row["ratio"] = *opt > 0 ? value / *opt : 1.0;
    pass = pass && value <= *opt + 1e-9 && value >= lower_factor * *opt - 1e-9;
  }
  row["pass"] = pass;
}

std::vector<Row> run_trial(const Config& c, const io::Instance& inst, int trial, std::optional<double> opt) {
  const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(trial);
  Row row = base_row(c, inst, seed);
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& a = c.algo;
  auto need = [&](const char* kind) {
    if (inst.kind != kind) throw std::invalid_argument(a + " needs a '" + kind + "' instance");
  };
  if (a == "static" || a == "dynamic") {
    need("balls");
    std::optional<SampleHit> hit;
    if (a == "static") {
      hit = static_solve(inst.balls, inst.d, c.eps, seed, c.c_sample);
    } else {
      DynamicMaxRS st(inst.d, c.eps, c.c_sample, seed);
      st.bulk_load(inst.balls);
      hit = st.query();
    }
    row["wall_ms"] = ms_since(t0);
    const double v = hit ? hit->depth : 0.0;
    finish(row, v, opt, 0.5 - c.eps, !hit || oracle::brute_depth(hit->point, inst.balls) == v);
    return {row};
  }
  if (a == "colored_sample" || a == "colored_exact" || a == "colored_first" || a == "colored_approx") {
    need("colored_disks");
    PointD point(inst.d);
    int v = 0;
    double factor = 1.0;
    if (a == "colored_sample") {
      const auto r = colored_solve(inst.colored, inst.d, c.eps, c.c_sample, seed);
      if (r) point = r->point, v = r->depth;
      factor = 0.5 - c.eps;
    } else if (a == "colored_exact") {
      const auto r = exact_colored_maxrs(inst.colored);
      if (r) point = r->point, v = r->opt;
    } else if (a == "colored_first") {
      const auto r = colored_first_algorithm(inst.colored);
      if (r) point = r->point, v = r->opt;
    } else {
      const auto r = approx_colored_maxrs(inst.colored, c.eps, c.c1, seed, c.c_sample);
      if (r) {
        point = r->point, v = r->reported_depth;
        row["branch"] = r->plan.exact_branch ? "exact" : "sampled";
        row["lambda"] = r->plan.lambda;
        row["sampled_disks"] = r->plan.sampled_disks;
      }
      factor = 1.0 - c.eps;
    }
    row["wall_ms"] = ms_since(t0);
    finish(row, v, opt, factor, inst.colored.empty() || oracle::brute_colored_depth(point, inst.colored) == v);
    return {row};
  }
  if (a == "minplus_batched" || a == "minplus_bsei") {
    need("sequences");
    const std::size_t n = inst.a.size();
    const std::size_t m = c.mask > 0 ? std::min<std::size_t>(static_cast<std::size_t>(c.mask), n) : n;
    const auto got = a == "minplus_batched" ? conv::minplus_via_batched(inst.a, inst.b, m)
                                            : conv::minplus_via_bsei(inst.a, inst.b);
    row["wall_ms"] = ms_since(t0);
    const bool match = got == conv::minplus_bruteforce(inst.a, inst.b);
    Row v = Row::array();
    for (double x : got) v.push_back(x);
    row["value"] = v.dump();
    row["exact_match"] = match;
    row["pass"] = match;
    return {row};
  }
  if (a == "trace") {
    need("trace");
    DynamicMaxRS st(inst.d, c.eps, c.c_sample, seed);
    std::vector<Row> rows;
    int q = 0;
    for (const auto& op : inst.trace) {
      if (op.kind == io::TraceOp::Kind::insert) {
        st.insert(op.ball);
      } else if (op.kind == io::TraceOp::Kind::erase) {
        st.erase(op.ball.id);
      } else {
        const auto tq = std::chrono::steady_clock::now();
        const auto hit = st.query();
        Row r = row;
        r["wall_ms"] = ms_since(tq);
        r["query"] = q++;
        const auto balls = st.balls();
        r["n"] = balls.size();
        std::optional<double> o;
        if (c.check && inst.d == 2) {
          const auto b = oracle::brute_maxrs_disks_2d(balls);
          o = b ? b->value : 0.0;
        }
        const double v = hit ? hit->depth : 0.0;
        finish(r, v, o, 0.5 - c.eps, !hit || oracle::brute_depth(hit->point, balls) == v);
        rows.push_back(r);
      }
    }
    return rows;
  }
  throw std::invalid_argument("unknown algorithm: " + a);
}

int cmd_run(const Config& c) {
  if (c.in.empty()) throw std::invalid_argument("run needs --in");
  const auto inst = io::load_instance(c.in);
  const auto opt = known_opt(c, inst);
  const auto per_trial = fan_out(c.trials, [&](int t) { return run_trial(c, inst, t, opt); });
  std::vector<Row> rows;
  bool ok = true;
  for (const auto& rs : per_trial)
    for (const auto& r : rs) {
      ok = ok && r.value("pass", true);
      rows.push_back(r);
    }
  emit(c, rows);
  return ok ? 0 : 1;
}

// ------------------------------------------------------------------- bench

int cmd_bench(const Config& c) {
  std::vector<Row> rows;
  std::vector<double> logs, medians;
  for (const long n : c.ns) {
    std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> u(0.0, c.region);
    auto ball = [&](BallId id) {
      PointD p(c.d);
      for (int k = 0; k < c.d; ++k) p[k] = u(rng);
      return WeightedBall{id, p, 1.0};
    };
    std::vector<WeightedBall> balls;
    for (long i = 0; i < n; ++i) balls.push_back(ball(static_cast<BallId>(i + 1)));
    DynamicMaxRS st(c.d, c.eps, c.c_sample, c.seed);
    const auto tb = std::chrono::steady_clock::now();
    st.bulk_load(balls);
    const double build_ms = ms_since(tb);
    std::vector<double> times;
    BallId next = static_cast<BallId>(n + 1);
    for (int i = 0; i < c.updates; ++i) {
      const bool del = i % 2 == 0;
      const std::size_t j = static_cast<std::size_t>(rng() % balls.size());
      const WeightedBall fresh = ball(next);
      const auto t0 = std::chrono::steady_clock::now();
      if (del) st.erase(balls[j].id);
      else st.insert(fresh);
      times.push_back(ms_since(t0) * 1000.0);
      if (del) {
        balls[j] = balls.back();
        balls.pop_back();
      } else {
        balls.push_back(fresh);
        ++next;
      }
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    const double p95 = times[std::min(times.size() - 1, times.size() * 95 / 100)];
    logs.push_back(std::log(static_cast<double>(n)));
    medians.push_back(median);
    rows.push_back({{"algorithm", "dynamic_update"}, {"n", n}, {"d", c.d}, {"eps", c.eps}, {"c_sample", c.c_sample},
                    {"seed", c.seed}, {"samples_per_cell", st.samples_per_cell()}, {"build_ms", build_ms},
                    {"median_us", median}, {"p95_us", p95}});
  }
  // least-squares alpha for median ~ alpha * ln n
  double num = 0, den = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    num += logs[i] * medians[i];
    den += logs[i] * logs[i];
  }
  const double alpha = num / den;
  double worst = 1.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double r = medians[i] / (alpha * logs[i]);
    worst = std::max(worst, std::max(r, 1.0 / r));
  }
  rows.push_back({{"algorithm", "fit_alpha_log_n"}, {"alpha_us", alpha}, {"worst_factor", worst}});
  emit(c, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MaxRS experiment harness"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "base seed");
    s->add_option("--d", c.d, "dimension")->check(CLI::Range(1, kMaxDim));
    s->add_option("--out", c.out, "output path (default stdout)");
  };
  auto* gen = app.add_subcommand("generate", "write a JSON instance");
  common(gen);
  gen->add_option("--kind", c.kind, "planted|planted_colored|random_balls|random_colored|sequences|trace")
      ->required()
      ->check(CLI::IsMember({"planted", "planted_colored", "random_balls", "random_colored", "sequences", "trace"}));
  gen->add_option("--k", c.k, "planted depth")->check(CLI::PositiveNumber);
  gen->add_option("--decoys", c.decoys, "planted decoys")->check(CLI::NonNegativeNumber);
  gen->add_option("--n", c.n, "items or trace operations")->check(CLI::PositiveNumber);
  gen->add_option("--m", c.m, "colors")->check(CLI::PositiveNumber);
  gen->add_option("--extent", c.extent, "side of the sampling box")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "run a solver on an instance");
  common(run);
  run->add_option("--algo", c.algo,
                  "static|dynamic|trace|colored_sample|colored_exact|colored_first|colored_approx|minplus_batched|"
                  "minplus_bsei")
      ->required();
  run->add_option("--in", c.in, "instance file")->required();
  run->add_option("--eps", c.eps, "approximation parameter");
  run->add_option("--c-sample", c.c_sample, "samples per cell constant")->check(CLI::PositiveNumber);
  run->add_option("--c1", c.c1, "color sampling constant")->check(CLI::PositiveNumber);
  run->add_option("--trials", c.trials, "trials with seeds seed, seed+1, ...")->check(CLI::PositiveNumber);
  run->add_option("--mask", c.mask, "indices per batched sub-instance (default n)");
  run->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--check", c.check, "compare with brute-force oracles when no optimum is stored");

  auto* bench = app.add_subcommand("bench", "time dynamic updates at several sizes");
  common(bench);
  bench->add_option("--eps", c.eps);
  bench->add_option("--c-sample", c.c_sample)->check(CLI::PositiveNumber);
  bench->add_option("--ns", c.ns, "ball counts")->delimiter(',');
  bench->add_option("--updates", c.updates, "timed updates per size")->check(CLI::PositiveNumber);
  bench->add_option("--region", c.region, "side of the square holding the centers")->check(CLI::PositiveNumber);
  bench->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share exit code 2 with bad input; --help stays 0
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*gen) {
      const auto inst = generate(c);
      if (c.out.empty()) std::cout << io::to_json(inst).dump(1) << "\n";
      else io::save_instance(c.out, inst);
      return 0;
    }
    if (*run) return cmd_run(c);
    return cmd_bench(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
