#include "flr/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace flr {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

BigInt as_bigint(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  std::size_t start = s.size() > 0 && s[0] == '-' ? 1 : 0;
  if (s.size() == start) fail(path, "empty decimal string");
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') fail(path, "malformed decimal string \"" + s + "\"");
  return BigInt(s);
}

json dyadic_to_json(const Dyadic& v) {
  return json{{"m", v.mantissa().str()}, {"e", v.exponent()}};
}

Dyadic as_dyadic(const json& j, const std::string& path) {
  BigInt m = as_bigint(field(j, path, "m"), path + ".m");
  std::int64_t e = as_int(field(j, path, "e"), path + ".e");
  return Dyadic(std::move(m), e);
}

json rational_to_json(const Rational& q) {
  return json{{"num", num(q).str()}, {"den", den(q).str()}};
}

Rational as_rational(const json& j, const std::string& path) {
  BigInt n = as_bigint(field(j, path, "num"), path + ".num");
  BigInt d = as_bigint(field(j, path, "den"), path + ".den");
  if (d <= 0) fail(path + ".den", "denominator must be positive");
  return Rational(n, d);
}

json affine_to_json(const AffineMap& m) {
  json w = json::array();
  for (const auto& row : m.w) {
    json r = json::array();
    for (const auto& v : row) r.push_back(dyadic_to_json(v));
    w.push_back(std::move(r));
  }
  json b = json::array();
  for (const auto& v : m.b) b.push_back(dyadic_to_json(v));
  return json{{"w", std::move(w)}, {"b", std::move(b)}};
}

AffineMap as_affine(const json& j, const std::string& path) {
  const json& w = field(j, path, "w");
  const json& b = field(j, path, "b");
  if (!w.is_array()) fail(path + ".w", "expected an array of rows");
  if (!b.is_array()) fail(path + ".b", "expected an array");
  if (w.size() != b.size())
    fail(path, "row count " + std::to_string(w.size()) + " != bias count " +
                   std::to_string(b.size()));
  AffineMap m;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string rp = path + ".w[" + std::to_string(i) + "]";
    if (!w[i].is_array()) fail(rp, "expected an array");
    if (i > 0 && w[i].size() != w[0].size()) fail(rp, "ragged row");
    std::vector<Dyadic> row;
    row.reserve(w[i].size());
    for (std::size_t k = 0; k < w[i].size(); ++k)
      row.push_back(as_dyadic(w[i][k], rp + "[" + std::to_string(k) + "]"));
    m.w.push_back(std::move(row));
    m.b.push_back(as_dyadic(b[i], path + ".b[" + std::to_string(i) + "]"));
  }
  return m;
}

json parse_document(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument(std::string(what) + ": not valid JSON");
  return j;
}

}  // namespace

std::string network_to_json(const Network& net) {
  json j;
  j["format"] = "flr-network-v1";
  j["input_dim"] = net.input_dim();
  json layers = json::array();
  for (const Layer& l : net.layers()) {
    json lj = affine_to_json(l.aff);
    json act = json::array(), nn = json::array();
    for (std::size_t i = 0; i < l.act.size(); ++i) {
      act.push_back(l.act[i] == Act::relu ? "relu" : "floor");
      nn.push_back(static_cast<int>(l.nonneg[i]));
    }
    lj["act"] = std::move(act);
    lj["nonneg"] = std::move(nn);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  j["out"] = affine_to_json(net.output());
  return j.dump(2) + "\n";
}

Network network_from_json(const std::string& text) {
  json j = parse_document(text, "network");
  const std::string root = "$";
  int input_dim = static_cast<int>(as_int(field(j, root, "input_dim"), root + ".input_dim"));
  const json& layers = field(j, root, "layers");
  if (!layers.is_array()) fail(root + ".layers", "expected an array");
  std::vector<Layer> ls;
  ls.reserve(layers.size());
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const std::string lp = root + ".layers[" + std::to_string(li) + "]";
    Layer l;
    l.aff = as_affine(layers[li], lp);
    const json& act = field(layers[li], lp, "act");
    const json& nn = field(layers[li], lp, "nonneg");
    if (!act.is_array() || act.size() != l.aff.b.size())
      fail(lp + ".act", "expected one activation per neuron");
    if (!nn.is_array() || nn.size() != l.aff.b.size())
      fail(lp + ".nonneg", "expected one flag per neuron");
    for (std::size_t i = 0; i < act.size(); ++i) {
      const std::string ap = lp + ".act[" + std::to_string(i) + "]";
      if (!act[i].is_string()) fail(ap, "expected \"relu\" or \"floor\"");
      const std::string& a = act[i].get_ref<const std::string&>();
      if (a == "relu")
        l.act.push_back(Act::relu);
      else if (a == "floor")
        l.act.push_back(Act::floor);
      else
        fail(ap, "unknown activation \"" + a + "\"");
      std::int64_t flag = nn[i].is_boolean()
                              ? static_cast<std::int64_t>(nn[i].get<bool>())
                              : as_int(nn[i], lp + ".nonneg[" + std::to_string(i) + "]");
      if (flag != 0 && flag != 1)
        fail(lp + ".nonneg[" + std::to_string(i) + "]", "expected 0 or 1");
      l.nonneg.push_back(static_cast<std::uint8_t>(flag));
    }
    ls.push_back(std::move(l));
  }
  AffineMap out = as_affine(field(j, root, "out"), root + ".out");
  try {
    return Network(input_dim, std::move(ls), std::move(out));
  } catch (const std::invalid_argument& e) {
    fail(root, e.what());
  }
}

namespace {

json target_to_json(const TargetDesc& t) {
  json j;
  j["name"] = t.name;
  j["d"] = t.d;
  if (t.alpha) j["alpha"] = rational_to_json(*t.alpha);
  if (t.value) j["value"] = rational_to_json(*t.value);
  if (t.center) {
    json c = json::array();
    for (const auto& v : *t.center) c.push_back(dyadic_to_json(v));
    j["center"] = std::move(c);
  }
  if (t.halfwidth) j["halfwidth"] = dyadic_to_json(*t.halfwidth);
  return j;
}

TargetDesc as_target(const json& j, const std::string& path) {
  TargetDesc t;
  const json& name = field(j, path, "name");
  if (!name.is_string()) fail(path + ".name", "expected a string");
  t.name = name.get<std::string>();
  t.d = static_cast<int>(as_int(field(j, path, "d"), path + ".d"));
  if (j.contains("alpha")) t.alpha = as_rational(j["alpha"], path + ".alpha");
  if (j.contains("value")) t.value = as_rational(j["value"], path + ".value");
  if (j.contains("center")) {
    const json& c = j["center"];
    if (!c.is_array()) fail(path + ".center", "expected an array");
    std::vector<Dyadic> center;
    for (std::size_t i = 0; i < c.size(); ++i)
      center.push_back(as_dyadic(c[i], path + ".center[" + std::to_string(i) + "]"));
    t.center = std::move(center);
  }
  if (j.contains("halfwidth")) t.halfwidth = as_dyadic(j["halfwidth"], path + ".halfwidth");
  return t;
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
  json j;
  j["format"] = "flr-certificate-v1";
  j["target"] = target_to_json(cert.target);
  j["theorem"] = cert.theorem;
  j["d"] = cert.d;
  j["N"] = cert.N;
  j["L"] = cert.L;
  j["N_eff"] = cert.N_eff;
  j["L_eff"] = cert.L_eff;
  j["K"] = cert.K;
  j["omega"] = dyadic_to_json(cert.omega);
  j["eps_guard"] = dyadic_to_json(cert.eps_guard);
  j["guard_bits"] = cert.guard_bits;
  j["bound"] = dyadic_to_json(cert.bound);
  j["audit"] = json{{"width", cert.audit.width},
                    {"depth", cert.audit.depth},
                    {"nonzero_params", cert.audit.nonzero_params}};
  j["width_budget"] = cert.width_budget;
  j["depth_budget"] = cert.depth_budget;
  j["created_unix"] = cert.created_unix;
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  json j = parse_document(text, "certificate");
  const std::string root = "$";
  Certificate c;
  c.target = as_target(field(j, root, "target"), root + ".target");
  c.theorem = static_cast<int>(as_int(field(j, root, "theorem"), root + ".theorem"));
  if (c.theorem != 1 && c.theorem != 2) fail(root + ".theorem", "expected 1 or 2");
  c.d = static_cast<int>(as_int(field(j, root, "d"), root + ".d"));
  c.N = as_int(field(j, root, "N"), root + ".N");
  c.L = as_int(field(j, root, "L"), root + ".L");
  c.N_eff = as_int(field(j, root, "N_eff"), root + ".N_eff");
  c.L_eff = as_int(field(j, root, "L_eff"), root + ".L_eff");
  c.K = as_int(field(j, root, "K"), root + ".K");
  c.omega = as_dyadic(field(j, root, "omega"), root + ".omega");
  c.eps_guard = as_dyadic(field(j, root, "eps_guard"), root + ".eps_guard");
  c.guard_bits = static_cast<int>(as_int(field(j, root, "guard_bits"), root + ".guard_bits"));
  c.bound = as_dyadic(field(j, root, "bound"), root + ".bound");
  const json& a = field(j, root, "audit");
  c.audit.width = static_cast<int>(as_int(field(a, root + ".audit", "width"), root + ".audit.width"));
  c.audit.depth = static_cast<int>(as_int(field(a, root + ".audit", "depth"), root + ".audit.depth"));
  c.audit.nonzero_params = static_cast<std::uint64_t>(
      as_int(field(a, root + ".audit", "nonzero_params"), root + ".audit.nonzero_params"));
  c.width_budget = as_int(field(j, root, "width_budget"), root + ".width_budget");
  c.depth_budget = as_int(field(j, root, "depth_budget"), root + ".depth_budget");
  c.created_unix = as_int(field(j, root, "created_unix"), root + ".created_unix");
  return c;
}

std::string report_to_json(const ErrorReport& rep) {
  json j;
  j["format"] = "flr-report-v1";
  j["samples"] = rep.sample_count;
  j["max_abs_error"] = dyadic_to_json(rep.max_abs_error);
  json argmax = json::array();
  for (const auto& v : rep.argmax) argmax.push_back(dyadic_to_json(v));
  j["argmax"] = std::move(argmax);
  if (rep.has_bound) {
    j["bound"] = dyadic_to_json(rep.bound);
    j["pass"] = rep.pass;
  }
  if (rep.has_modulus_term) j["modulus_term"] = dyadic_to_json(rep.modulus_term);
  if (rep.seeded) j["seed"] = rep.seed;
  if (!rep.records.empty()) {
    json pts = json::array();
    for (const auto& r : rep.records) {
      json p;
      json x = json::array();
      for (const auto& v : r.x) x.push_back(dyadic_to_json(v));
      p["x"] = std::move(x);
      p["phi"] = dyadic_to_json(r.phi);
      p["f_lo"] = rational_to_json(r.f.lo);
      p["f_hi"] = rational_to_json(r.f.hi);
      p["abs_err"] = rational_to_json(r.err_hi);
      pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ErrorReport& rep) {
  if (rep.records.empty())
    throw std::invalid_argument("report_to_csv: the report carries no per-point records");
  std::ostringstream os;
  os << std::setprecision(17);
  std::size_t d = rep.records[0].x.size();
  for (std::size_t j = 0; j < d; ++j) os << "x" << j + 1 << ",";
  os << "f,phi,abs_err\n";
  for (const auto& r : rep.records) {
    for (const auto& v : r.x) os << v.to_double() << ",";
    os << to_double(r.f.mid()) << "," << r.phi.to_double() << "," << to_double(r.err_hi)
       << "\n";
  }
  return os.str();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace flr
