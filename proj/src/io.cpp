#include "bellforge/io.hpp"

#include <cmath>
#include <string>

#include "bellforge/error.hpp"

namespace bellforge {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError("expected an object", path.empty() ? "/" : path);
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError("missing key '" + key + "'", path.empty() ? "/" : path);
  return *it;
}

const Json& array_of(const Json& j, std::size_t size, const std::string& path) {
  if (!j.is_array()) throw SchemaError("expected an array", path);
  if (j.size() != size) {
    throw SchemaError("expected " + std::to_string(size) + " entries, found " +
                          std::to_string(j.size()),
                      path);
  }
  return j;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError("expected a number", path);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError("expected a finite number", path);
  return v;
}

long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer", path);
  return j.get<long long>();
}

std::uint64_t unsigned_integer(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) {
    return static_cast<std::uint64_t>(j.get<long long>());
  }
  if (j.is_string()) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(j.get<std::string>(), &pos, 0);
      if (pos == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw SchemaError("expected a nonnegative integer", path);
}

Scenario read_scenario(const Json& j) {
  const long long n = integer(member(j, "n_inputs", ""), "/n_inputs");
  const long long k = integer(member(j, "n_outputs", ""), "/n_outputs");
  if (n < 1) throw SchemaError("n_inputs must be >= 1", "/n_inputs");
  if (k < 1) throw SchemaError("n_outputs must be >= 1", "/n_outputs");
  if (n * n * k * k > (1LL << 26)) throw SchemaError("scenario too large", "/n_inputs");
  return Scenario{static_cast<int>(n), static_cast<int>(k)};
}

Json tensor_json(const BellTensor& t) {
  const auto& s = t.scenario();
  Json out = Json::array();
  for (int x = 0; x < s.n_inputs; ++x) {
    Json jx = Json::array();
    for (int y = 0; y < s.n_inputs; ++y) {
      Json jy = Json::array();
      for (int a = 0; a < s.n_outputs; ++a) {
        Json ja = Json::array();
        for (int b = 0; b < s.n_outputs; ++b) ja.push_back(t(x, y, a, b));
        jy.push_back(std::move(ja));
      }
      jx.push_back(std::move(jy));
    }
    out.push_back(std::move(jx));
  }
  return out;
}

std::vector<double> read_tensor(const Json& j, const Scenario& s, const std::string& key) {
  const std::string root = "/" + key;
  const Json& t = array_of(member(j, key, ""), static_cast<std::size_t>(s.n_inputs), root);
  std::vector<double> values(s.size());
  for (int x = 0; x < s.n_inputs; ++x) {
    const auto px = child(root, static_cast<std::size_t>(x));
    const Json& jx = array_of(t[x], static_cast<std::size_t>(s.n_inputs), px);
    for (int y = 0; y < s.n_inputs; ++y) {
      const auto py = child(px, static_cast<std::size_t>(y));
      const Json& jy = array_of(jx[y], static_cast<std::size_t>(s.n_outputs), py);
      for (int a = 0; a < s.n_outputs; ++a) {
        const auto pa = child(py, static_cast<std::size_t>(a));
        const Json& ja = array_of(jy[a], static_cast<std::size_t>(s.n_outputs), pa);
        for (int b = 0; b < s.n_outputs; ++b) {
          values[s.index(x, y, a, b)] = number(ja[b], child(pa, static_cast<std::size_t>(b)));
        }
      }
    }
  }
  return values;
}

Json triplets(const SparseSym& a) {
  Json out = Json::array();
  for (const auto& e : a.entries()) out.push_back(Json::array({e.i, e.j, e.v}));
  return out;
}

SparseSym read_triplets(const Json& j, Index m, const std::string& path) {
  if (!j.is_array()) throw SchemaError("expected an array of [i, j, v] triplets", path);
  SparseSym a;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto pk = child(path, k);
    const Json& t = array_of(j[k], 3, pk);
    const long long i = integer(t[0], child(pk, std::size_t{0}));
    const long long jj = integer(t[1], child(pk, std::size_t{1}));
    if (i < 0 || i >= m) throw SchemaError("row index out of range", child(pk, std::size_t{0}));
    if (jj < 0 || jj >= m) throw SchemaError("column index out of range", child(pk, std::size_t{1}));
    a.add(i, jj, number(t[2], child(pk, std::size_t{2})));
  }
  return a;
}

}  // namespace

Json to_json(const BellFunctional& m) {
  Json j;
  j["n_inputs"] = m.scenario().n_inputs;
  j["n_outputs"] = m.scenario().n_outputs;
  j["coeffs"] = tensor_json(m);
  return j;
}

BellFunctional bell_from_json(const Json& j) {
  const Scenario s = read_scenario(j);
  return BellFunctional(s, read_tensor(j, s, "coeffs"));
}

Json to_json(const ProbabilityTable& p) {
  Json j;
  j["n_inputs"] = p.scenario().n_inputs;
  j["n_outputs"] = p.scenario().n_outputs;
  j["p"] = tensor_json(p);
  return j;
}

ProbabilityTable table_from_json(const Json& j) {
  const Scenario s = read_scenario(j);
  return ProbabilityTable(s, read_tensor(j, s, "p"));
}

Json to_json(const GramProblem& p) {
  Json j;
  j["m"] = p.m;
  j["sense"] = p.sense == Sense::maximize ? "max" : "min";
  j["obj"] = triplets(p.objective);
  Json cons = Json::array();
  for (const auto& c : p.constraints) cons.push_back({{"A", triplets(c.a)}, {"b", c.b}});
  j["constraints"] = std::move(cons);
  return j;
}

GramProblem gram_from_json(const Json& j) {
  GramProblem p;
  const long long m = integer(member(j, "m", ""), "/m");
  if (m < 1) throw SchemaError("m must be >= 1", "/m");
  p.m = m;
  if (j.contains("sense")) {
    const Json& s = j["sense"];
    if (s == "max") {
      p.sense = Sense::maximize;
    } else if (s == "min") {
      p.sense = Sense::minimize;
    } else {
      throw SchemaError("sense must be \"max\" or \"min\"", "/sense");
    }
  }
  p.objective = read_triplets(member(j, "obj", ""), p.m, "/obj");
  const Json& cons = member(j, "constraints", "");
  if (!cons.is_array()) throw SchemaError("expected an array", "/constraints");
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const auto pk = child("/constraints", k);
    EqConstraint c;
    c.a = read_triplets(member(cons[k], "A", pk), p.m, child(pk, "A"));
    c.b = number(member(cons[k], "b", pk), child(pk, "b"));
    p.constraints.push_back(std::move(c));
  }
  return p;
}

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

std::vector<std::uint8_t> hex_decode(const std::string& s) {
  if (s.size() % 2 != 0) throw InvalidArgument("hex string has odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw InvalidArgument(std::string("bad hex digit '") + c + "'");
  };
  std::vector<std::uint8_t> out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(s[2 * i]) * 16 + nibble(s[2 * i + 1]));
  }
  return out;
}

Json to_json(const SignTensor& s) {
  Json j;
  j["n"] = s.n();
  j["seed"] = s.seed();
  j["distribution"] = to_string(s.distribution());
  j["fingerprint"] = s.fingerprint();
  const auto values = s.values();
  if (s.distribution() == SignDistribution::bernoulli) {
    std::vector<std::uint8_t> bits((values.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0.0) bits[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    }
    j["bits"] = hex_encode(bits);
  } else {
    j["values"] = std::vector<double>(values.begin(), values.end());
  }
  return j;
}

SignTensor sign_tensor_from_json(const Json& j) {
  const long long n = integer(member(j, "n", ""), "/n");
  if (n < 1 || n > 1024) throw SchemaError("n must be in [1, 1024]", "/n");
  const std::uint64_t seed = unsigned_integer(member(j, "seed", ""), "/seed");
  const Json& dist = member(j, "distribution", "");
  if (!dist.is_string()) throw SchemaError("expected a string", "/distribution");
  SignDistribution d;
  try {
    d = parse_distribution(dist.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw SchemaError(e.what(), "/distribution");
  }
  const auto count = static_cast<std::size_t>(n * n * n);
  std::vector<double> eps(count);
  if (d == SignDistribution::bernoulli) {
    const Json& bits = member(j, "bits", "");
    if (!bits.is_string()) throw SchemaError("expected a hex string", "/bits");
    std::vector<std::uint8_t> bytes;
    try {
      bytes = hex_decode(bits.get<std::string>());
    } catch (const InvalidArgument& e) {
      throw SchemaError(e.what(), "/bits");
    }
    if (bytes.size() != (count + 7) / 8) throw SchemaError("bit string has wrong length", "/bits");
    for (std::size_t i = 0; i < count; ++i) eps[i] = (bytes[i / 8] >> (i % 8)) & 1u ? -1.0 : 1.0;
  } else {
    const Json& vals = array_of(member(j, "values", ""), count, "/values");
    for (std::size_t i = 0; i < count; ++i) eps[i] = number(vals[i], child("/values", i));
  }
  SignTensor s(static_cast<int>(n), seed, d, std::move(eps));
  if (j.contains("fingerprint") &&
      unsigned_integer(j["fingerprint"], "/fingerprint") != s.fingerprint()) {
    throw SchemaError("fingerprint does not match the stored entries", "/fingerprint");
  }
  return s;
}

Json to_json(const ClassicalResult& r) {
  return Json{{"value", r.value},
              {"max_value", r.max_value},
              {"min_value", r.min_value},
              {"exact", r.exact},
              {"argmax", {{"alice", r.argmax.alice.choice}, {"bob", r.argmax.bob.choice}}},
              {"argmin", {{"alice", r.argmin.alice.choice}, {"bob", r.argmin.bob.choice}}}};
}

Json to_json(const ConstructionReport& r) {
  Json j;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["seed_used"] = r.seed_used;
  j["retries"] = r.retries;
  j["distribution"] = to_string(r.distribution);
  j["alpha_top"] = r.alpha_top;
  j["alphas"] = r.alphas;
  j["K2"] = r.k2;
  j["K"] = r.k_constant;
  j["classical"] = to_json(r.classical);
  j["classical_method"] = r.classical_method;
  j["epsilon_norm"] = r.epsilon_norm ? Json(*r.epsilon_norm) : Json(nullptr);
  j["quantum_lb"] = r.quantum_lb;
  j["terms"] = {{"I", r.terms.term_i},
                {"II", r.terms.term_ii},
                {"III", r.terms.term_iii},
                {"total", r.terms.total},
                {"term_ii_bound", r.terms.term_ii_bound}};
  j["ratio"] = r.ratio;
  j["povm_min_eigenvalue"] = r.povm_min_eigenvalue;
  j["povm_completeness"] = r.povm_completeness;
  j["accepted"] = r.accepted;
  return j;
}

Json to_json(const DyadicDecomposition& d) {
  Json terms = Json::array();
  for (const auto& t : d.terms) terms.push_back({{"beta", t.beta}, {"indices", t.indices}});
  return Json{{"source_dim", d.source_dim}, {"terms", std::move(terms)}};
}

DyadicDecomposition dyadic_from_json(const Json& j) {
  DyadicDecomposition d;
  d.source_dim = integer(member(j, "source_dim", ""), "/source_dim");
  if (d.source_dim < 1) throw SchemaError("source_dim must be >= 1", "/source_dim");
  const Json& terms = member(j, "terms", "");
  if (!terms.is_array()) throw SchemaError("expected an array", "/terms");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto pk = child("/terms", k);
    DyadicTerm t;
    t.beta = number(member(terms[k], "beta", pk), child(pk, "beta"));
    const Json& idx = member(terms[k], "indices", pk);
    if (!idx.is_array() || idx.empty()) throw SchemaError("expected a nonempty array", child(pk, "indices"));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const long long v = integer(idx[i], child(child(pk, "indices"), i));
      if (v < 0 || v >= d.source_dim) {
        throw SchemaError("index out of range", child(child(pk, "indices"), i));
      }
      t.indices.push_back(v);
    }
    d.terms.push_back(std::move(t));
  }
  return d;
}

}  // namespace bellforge
