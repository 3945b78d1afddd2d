#pragma once

// JSON instance files and JSONL dynamic traces.
//
// Top level: {"kind": ..., "d": int, "items": [...], "seed": int,
// "generator": {...}, "opt": "<value>"}. Every floating value is written as
// the shortest decimal string that reads back to the same double.
//
//   balls          items: {"id": int, "center": [str...], "weight": str}
//   colored_disks  items: {"id": int, "center": [str...], "color": int}
//   sequences      items: {"name": "A"|"B", "values": [str...]}
//   batched1d      items: {"x": str, "w": str}; also "lengths": [str...],
//                  "ks": [int...], "n": int
//   bsei           items: [str...]
//   trace          items: trace operations, as in the JSONL form
//
// Trace lines: {"op": "insert", "id": int, "center": [...], "weight": str},
// {"op": "delete", "id": int}, {"op": "query"}.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "convolution.hpp"
#include "geom_core.hpp"

namespace maxrs::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw FormatError("expected a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw FormatError("bad number: " + s);
  return v;
}

inline json point_json(const PointD& p) {
  json a = json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(format_double(p[i]));
  return a;
}

inline PointD parse_point(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) throw FormatError("center must have d coordinates");
  PointD p(d);
  for (int i = 0; i < d; ++i) p[i] = parse_double(j[static_cast<std::size_t>(i)]);
  return p;
}

struct TraceOp {
  enum class Kind { insert, erase, query };
  Kind kind = Kind::query;
  WeightedBall ball;  // insert: full ball; delete: id only
};

inline json trace_op_json(const TraceOp& op) {
  switch (op.kind) {
    case TraceOp::Kind::insert:
      return {{"op", "insert"}, {"id", op.ball.id}, {"center", point_json(op.ball.center)},
              {"weight", format_double(op.ball.weight)}};
    case TraceOp::Kind::erase:
      return {{"op", "delete"}, {"id", op.ball.id}};
    case TraceOp::Kind::query:
      break;
  }
  return {{"op", "query"}};
}

inline TraceOp parse_trace_op(const json& j, int d) {
  const std::string op = j.at("op").get<std::string>();
  TraceOp t;
  if (op == "insert") {
    t.kind = TraceOp::Kind::insert;
    t.ball = {j.at("id").get<BallId>(), parse_point(j.at("center"), d),
              j.contains("weight") ? parse_double(j.at("weight")) : 1.0};
  } else if (op == "delete") {
    t.kind = TraceOp::Kind::erase;
    t.ball.id = j.at("id").get<BallId>();
  } else if (op == "query") {
    t.kind = TraceOp::Kind::query;
  } else {
    throw FormatError("unknown trace op: " + op);
  }
  return t;
}

inline std::string trace_to_jsonl(const std::vector<TraceOp>& ops) {
  std::string out;
  for (const auto& op : ops) out += trace_op_json(op).dump() + "\n";
  return out;
}

inline std::vector<TraceOp> parse_trace_jsonl(const std::string& text, int d) {
  std::vector<TraceOp> ops;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ops.push_back(parse_trace_op(json::parse(line), d));
  }
  return ops;
}

struct Instance {
  std::string kind;
  int d = 2;
  std::uint64_t seed = 0;
  json generator = json::object();
  std::optional<double> opt;

  std::vector<WeightedBall> balls;
  std::vector<ColoredBall> colored;
  std::vector<double> a, b;
  conv::Batched1DInstance<double> batched;
  std::vector<double> bsei;
  std::vector<TraceOp> trace;

  bool operator==(const Instance& o) const {
    auto same_balls = [](const auto& x, const auto& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].id != y[i].id || !(x[i].center == y[i].center)) return false;
      return true;
    };
    if (kind != o.kind || d != o.d || seed != o.seed || generator != o.generator || opt != o.opt) return false;
    if (!same_balls(balls, o.balls) || !same_balls(colored, o.colored)) return false;
    for (std::size_t i = 0; i < balls.size(); ++i)
      if (balls[i].weight != o.balls[i].weight) return false;
    for (std::size_t i = 0; i < colored.size(); ++i)
      if (colored[i].color != o.colored[i].color) return false;
    if (a != o.a || b != o.b || bsei != o.bsei) return false;
    if (batched.lengths != o.batched.lengths || batched.ks != o.batched.ks || batched.n != o.batched.n ||
        batched.points.size() != o.batched.points.size())
      return false;
    for (std::size_t i = 0; i < batched.points.size(); ++i)
      if (batched.points[i].x != o.batched.points[i].x || batched.points[i].w != o.batched.points[i].w) return false;
    return trace_to_jsonl(trace) == trace_to_jsonl(o.trace);
  }
};

inline json to_json(const Instance& inst) {
  json j;
  j["kind"] = inst.kind;
  j["d"] = inst.d;
  j["seed"] = inst.seed;
  j["generator"] = inst.generator;
  if (inst.opt) j["opt"] = format_double(*inst.opt);
  json items = json::array();
  if (inst.kind == "balls") {
    for (const auto& b : inst.balls)
      items.push_back({{"id", b.id}, {"center", point_json(b.center)}, {"weight", format_double(b.weight)}});
  } else if (inst.kind == "colored_disks") {
    for (const auto& b : inst.colored) items.push_back({{"id", b.id}, {"center", point_json(b.center)}, {"color", b.color}});
  } else if (inst.kind == "sequences") {
    for (const auto& [name, seq] : {std::pair{"A", &inst.a}, std::pair{"B", &inst.b}}) {
      json v = json::array();
      for (double x : *seq) v.push_back(format_double(x));
      items.push_back({{"name", name}, {"values", v}});
    }
  } else if (inst.kind == "batched1d") {
    for (const auto& p : inst.batched.points) items.push_back({{"x", format_double(p.x)}, {"w", format_double(p.w)}});
    json len = json::array();
    for (double l : inst.batched.lengths) len.push_back(format_double(l));
    j["lengths"] = len;
    j["ks"] = inst.batched.ks;
    j["n"] = inst.batched.n;
  } else if (inst.kind == "bsei") {
    for (double x : inst.bsei) items.push_back(format_double(x));
  } else if (inst.kind == "trace") {
    for (const auto& op : inst.trace) items.push_back(trace_op_json(op));
  } else {
    throw FormatError("unknown instance kind: " + inst.kind);
  }
  j["items"] = std::move(items);
  return j;
}

inline Instance from_json(const json& j) {
  Instance inst;
  inst.kind = j.at("kind").get<std::string>();
  inst.d = j.at("d").get<int>();
  if (inst.d < 1 || inst.d > kMaxDim) throw FormatError("d out of range");
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("generator")) inst.generator = j.at("generator");
  if (j.contains("opt")) inst.opt = parse_double(j.at("opt"));
  const json& items = j.at("items");
  if (!items.is_array()) throw FormatError("items must be an array");
  if (inst.kind == "balls") {
    for (const auto& it : items) {
      WeightedBall b{it.at("id").get<BallId>(), parse_point(it.at("center"), inst.d),
                     it.contains("weight") ? parse_double(it.at("weight")) : 1.0};
      validate(b);
      inst.balls.push_back(b);
    }
  } else if (inst.kind == "colored_disks") {
    for (const auto& it : items) {
      ColoredBall b{it.at("id").get<BallId>(), parse_point(it.at("center"), inst.d), it.at("color").get<int>()};
      validate(b);
      inst.colored.push_back(b);
    }
  } else if (inst.kind == "sequences") {
    for (const auto& it : items) {
      const std::string name = it.at("name").get<std::string>();
      std::vector<double>* dst = name == "A" ? &inst.a : name == "B" ? &inst.b : nullptr;
      if (!dst) throw FormatError("sequence name must be A or B");
      for (const auto& v : it.at("values")) dst->push_back(parse_double(v));
    }
    if (inst.a.size() != inst.b.size() || inst.a.empty()) throw FormatError("sequences A and B must be nonempty and equal length");
  } else if (inst.kind == "batched1d") {
    for (const auto& it : items) inst.batched.points.push_back({parse_double(it.at("x")), parse_double(it.at("w"))});
    for (const auto& l : j.at("lengths")) inst.batched.lengths.push_back(parse_double(l));
    if (j.contains("ks")) inst.batched.ks = j.at("ks").get<std::vector<std::size_t>>();
    if (j.contains("n")) inst.batched.n = j.at("n").get<std::size_t>();
  } else if (inst.kind == "bsei") {
    for (const auto& it : items) inst.bsei.push_back(parse_double(it));
  } else if (inst.kind == "trace") {
    for (const auto& it : items) inst.trace.push_back(parse_trace_op(it, inst.d));
  } else {
    throw FormatError("unknown instance kind: " + inst.kind);
  }
  return inst;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline Instance load_instance(const std::string& path) { return from_json(json::parse(read_file(path))); }

inline void save_instance(const std::string& path, const Instance& inst) { write_file(path, to_json(inst).dump(1) + "\n"); }

}  // namespace maxrs::io
