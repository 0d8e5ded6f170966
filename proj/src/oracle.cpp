#include "slic/oracle.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slic/parser.hpp"

namespace slic {

using nlohmann::json;

namespace {

Value from_json(const json& j) {
  if (j.is_array()) {
    std::vector<Value> xs;
    for (const auto& e : j) xs.push_back(from_json(e));
    return Value::of_array(std::move(xs));
  }
  if (j.is_number_integer()) return Value::of_int(j.get<std::int64_t>());
  if (j.is_number()) return Value::of_real(j.get<double>());
  if (j.is_boolean()) return Value::of_int(j.get<bool>() ? 1 : 0);
  throw SlicError("unsupported JSON value " + j.dump());
}

json to_json(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return v.ival;
    case Value::Kind::Real: return v.real;
    case Value::Kind::Array: {
      json a = json::array();
      for (const auto& e : v.elems) a.push_back(to_json(e));
      return a;
    }
  }
  return nullptr;
}

State state_of(const json& j) {
  if (!j.is_object()) throw SlicError("expected a JSON object of variables");
  State s;
  for (const auto& [k, v] : j.items()) s[k] = from_json(v);
  return s;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SlicError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SlicError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Value jitter(const Value& v, std::mt19937_64& rng) {
  if (v.is_array()) {
    std::vector<Value> xs;
    for (const auto& e : v.elems) xs.push_back(jitter(e, rng));
    return Value::of_array(std::move(xs));
  }
  double x = v.num();
  if (x > 0.0 && x < 1.0) return Value::of_real(std::uniform_real_distribution<double>(0.02, 0.98)(rng));
  return Value::of_real(x + std::normal_distribution<double>(0.0, 1.0)(rng));
}

Value random_value(const BaseType& t, std::mt19937_64& rng) {
  switch (t.kind) {
    case BaseType::Kind::Real: return Value::of_real(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
    case BaseType::Kind::Int: {
      int hi = t.bound > 0 ? t.bound : 3;
      return Value::of_int(std::uniform_int_distribution<int>(1, hi)(rng));
    }
    case BaseType::Kind::Array: {
      std::vector<Value> xs;
      for (int i = 0; i < t.size; ++i) xs.push_back(random_value(*t.elem, rng));
      return Value::of_array(std::move(xs));
    }
  }
  return Value::of_real(0.0);
}

State base_store(const Gamma& gamma, const State& context) {
  State s;
  for (const auto& e : gamma.entries()) s[e.name] = default_value(e.type);
  for (const auto& [k, v] : context) s[k] = v;
  return s;
}

}  // namespace

Value value_from_json(const std::string& text) { return from_json(parse_json(text)); }
State state_from_json(const std::string& text) { return state_of(parse_json(text)); }

std::string state_to_json(const State& s, int indent) {
  json j = json::object();
  for (const auto& [k, v] : s) j[k] = to_json(v);
  return j.dump(indent);
}

State load_state(const std::string& path) { return state_from_json(read_file(path)); }

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  json j = parse_json(read_file(path));
  Fixture fx;
  if (j.contains("data")) fx.data = state_of(j["data"]);
  if (j.contains("example")) fx.example = state_of(j["example"]);
  return fx;
}

Value default_value(const BaseType& t) {
  switch (t.kind) {
    case BaseType::Kind::Real: return Value::of_real(0.0);
    case BaseType::Kind::Int: return Value::of_int(1);
    case BaseType::Kind::Array: {
      std::vector<Value> xs(static_cast<std::size_t>(t.size), default_value(*t.elem));
      return Value::of_array(std::move(xs));
    }
  }
  return Value::of_real(0.0);
}

State draw_context(const Program& p, const Fixture& fx, std::mt19937_64& rng) {
  State ctx = fx.data;
  for (const auto& e : p.gamma.entries()) {
    auto it = fx.example.find(e.name);
    if (it != fx.example.end() && !ctx.count(e.name)) ctx[e.name] = jitter(it->second, rng);
  }
  return ctx;
}

State random_store(const Gamma& gamma, const Fixture& fx, std::mt19937_64& rng) {
  State s;
  for (const auto& e : gamma.entries()) {
    auto d = fx.data.find(e.name);
    if (d != fx.data.end()) {
      s[e.name] = d->second;
      continue;
    }
    auto ex = fx.example.find(e.name);
    s[e.name] = ex != fx.example.end() ? jitter(ex->second, rng) : random_value(e.type, rng);
  }
  return s;
}

std::vector<int> JointTable::assignment(std::size_t flat) const {
  std::vector<int> out(axes.size());
  for (std::size_t i = axes.size(); i-- > 0;) {
    out[i] = static_cast<int>(flat % static_cast<std::size_t>(axes[i].K)) + 1;
    flat /= static_cast<std::size_t>(axes[i].K);
  }
  return out;
}

int JointTable::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (axes[i].name == name) return static_cast<int>(i);
  return -1;
}

double JointTable::total() const {
  double s = 0.0;
  for (double x : entries) s += x;
  return s;
}

JointTable JointTable::marginal(const std::vector<std::string>& keep) const {
  JointTable out;
  out.context = context;
  std::vector<int> src;
  for (const auto& k : keep) {
    int i = axis_index(k);
    if (i < 0) throw SlicError("no axis " + k);
    out.axes.push_back(axes[static_cast<std::size_t>(i)]);
    src.push_back(i);
  }
  std::size_t n = 1;
  for (const auto& a : out.axes) n *= static_cast<std::size_t>(a.K);
  out.entries.assign(n, 0.0);
  for (std::size_t f = 0; f < entries.size(); ++f) {
    auto a = assignment(f);
    std::size_t g = 0;
    for (std::size_t j = 0; j < src.size(); ++j)
      g = g * static_cast<std::size_t>(out.axes[j].K) + static_cast<std::size_t>(a[static_cast<std::size_t>(src[j])] - 1);
    out.entries[g] += entries[f];
  }
  return out;
}

std::vector<Axis> enumerable_axes(const Program& p, const State& context) {
  std::vector<Axis> axes;
  NameSet params = parameters(p);
  for (const auto& e : p.gamma.entries()) {
    if (!params.count(e.name) || context.count(e.name)) continue;
    if (!e.type.is_bounded_int()) throw SlicError("parameter " + e.name + " is not enumerable and has no value");
    axes.push_back({e.name, e.type.bound});
  }
  return axes;
}

JointTable enumerate_joint(const Program& p, const State& context, std::uint64_t cap) {
  JointTable t;
  t.context = context;
  t.axes = enumerable_axes(p, context);
  std::uint64_t n = 1;
  for (const auto& a : t.axes) {
    n *= static_cast<std::uint64_t>(a.K);
    if (n > cap) throw SlicError("joint table exceeds the enumeration cap");
  }
  State base = base_store(p.gamma, context);
  t.entries.resize(n);
  for (std::uint64_t f = 0; f < n; ++f) {
    State s = base;
    auto a = t.assignment(f);
    for (std::size_t i = 0; i < a.size(); ++i) s[t.axes[i].name] = Value::of_int(a[i]);
    t.entries[f] = eval_stmt(s, p.body).weight;
  }
  return t;
}

std::string PreservationReport::to_json() const {
  json j;
  j["max_rel_err"] = max_rel_err;
  j["num_points"] = num_points;
  j["pass"] = pass;
  j["tolerance"] = tolerance;
  j["worst_point"] = json::parse(state_to_json(worst_point, -1));
  return j.dump(2);
}

std::string PreservationReport::to_text() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << ": max relative error " << max_rel_err << " over " << num_points
     << " points (tolerance " << tolerance << ")";
  return os.str();
}

PreservationReport check_preservation(const Program& p1, const Program& p2, const Fixture& fx, int trials,
                                      double tol, std::uint64_t seed) {
  PreservationReport rep;
  rep.tolerance = tol;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    State ctx = draw_context(p1, fx, rng);
    JointTable a = enumerate_joint(p1, ctx);
    JointTable b = enumerate_joint(p2, ctx);
    std::vector<std::string> common;
    for (const auto& ax : a.axes)
      if (b.axis_index(ax.name) >= 0) common.push_back(ax.name);
    a = a.marginal(common);
    b = b.marginal(common);
    for (std::size_t i = 0; i < a.axes.size(); ++i)
      if (a.axes[i].K != b.axes[i].K) throw SlicError("support mismatch on " + a.axes[i].name);
    for (std::size_t f = 0; f < a.size(); ++f) {
      double e = rel_err(a.entries[f], b.entries[f]);
      ++rep.num_points;
      if (e > rep.max_rel_err || rep.num_points == 1) {
        rep.max_rel_err = std::max(rep.max_rel_err, e);
        State w = ctx;
        auto asg = a.assignment(f);
        for (std::size_t i = 0; i < asg.size(); ++i) w[a.axes[i].name] = Value::of_int(asg[i]);
        rep.worst_point = std::move(w);
      }
    }
  }
  rep.pass = rep.max_rel_err <= tol;
  return rep;
}

CITableReport check_ci_table_report(const JointTable& t, const CIPartition& part, double tol) {
  CITableReport rep;
  std::vector<std::string> k1, k2, k3;
  for (const auto& a : t.axes) {
    if (part.x1.count(a.name)) k1.push_back(a.name);
    else if (part.x2.count(a.name)) k2.push_back(a.name);
    else if (part.x3.count(a.name)) k3.push_back(a.name);
  }
  std::vector<std::string> keep = k1;
  keep.insert(keep.end(), k2.begin(), k2.end());
  keep.insert(keep.end(), k3.begin(), k3.end());
  JointTable m = t.marginal(keep);
  double z = m.total();
  if (!(z > 0.0)) {
    rep.vacuous = true;
    return rep;
  }
  auto size = [&](std::size_t from, std::size_t to) {
    std::size_t n = 1;
    for (std::size_t i = from; i < to; ++i) n *= static_cast<std::size_t>(m.axes[i].K);
    return n;
  };
  const std::size_t n1 = size(0, k1.size());
  const std::size_t n2 = size(k1.size(), k1.size() + k2.size());
  const std::size_t n3 = size(k1.size() + k2.size(), m.axes.size());
  for (std::size_t a = 0; a < n1; ++a) {
    auto cell = [&](std::size_t b, std::size_t c) { return m.entries[(a * n2 + b) * n3 + c] / z; };
    double pa = 0.0;
    std::vector<double> pb(n2, 0.0), pc(n3, 0.0);
    for (std::size_t b = 0; b < n2; ++b)
      for (std::size_t c = 0; c < n3; ++c) {
        double v = cell(b, c);
        pa += v;
        pb[b] += v;
        pc[c] += v;
      }
    if (!(pa > 0.0)) continue;
    for (std::size_t b = 0; b < n2; ++b)
      for (std::size_t c = 0; c < n3; ++c) {
        double err = std::abs(cell(b, c) / pa - (pb[b] / pa) * (pc[c] / pa));
        rep.max_abs_err = std::max(rep.max_abs_err, err);
      }
  }
  rep.holds = rep.max_abs_err <= tol;
  return rep;
}

bool check_ci_table(const JointTable& t, const CIPartition& part, double tol) {
  return check_ci_table_report(t, part, tol).holds;
}

EvalCounters measure_cost(const Program& p, const State& context) {
  State s = base_store(p.gamma, context);
  for (const auto& a : enumerable_axes(p, context)) s[a.name] = Value::of_int(1);
  return density_counted(Program{p.gamma, p.body}, s).second;
}

}  // namespace slic
