#include "khess/serialize.hpp"

#include <charconv>
#include <utility>

namespace khess {

using nlohmann::json;

namespace field {

void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path, path + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

uint64_t unsigned64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer() && j.get<int64_t>() >= 0)
    return static_cast<uint64_t>(j.get<int64_t>());
  fail(path, "expected a nonnegative integer");
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<int>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

}  // namespace field

namespace {

using field::fail;

const json& member(const json& j, const char* key, const std::string& path) {
  return field::require(j, key, path);
}

double as_double(const json& j, const std::string& path) {
  return field::number(j, path);
}

int as_int(const json& j, const std::string& path) {
  return field::integer(j, path);
}

bool as_bool(const json& j, const std::string& path) {
  return field::boolean(j, path);
}

std::string as_string(const json& j, const std::string& path) {
  return field::text(j, path);
}

Eigen::VectorXd as_vector(const json& j, const std::string& path) {
  return field::vector(j, path);
}

Complex as_entry(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return Complex(as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]"));
  fail(path, "expected a number or an [re,im] pair");
}

json entry_to_json(const Complex& c, bool complex_space) {
  if (!complex_space) return json(c.real());
  return json::array({c.real(), c.imag()});
}

json polynomial_to_json(Polynomial p) {
  p.compress();  // canonical term order, so printing is byte-stable
  json terms = json::array();
  for (const Monomial& m : p.terms()) {
    json t;
    t["coef"] = m.coef;
    t["expo"] = m.expo;
    terms.push_back(std::move(t));
  }
  json j;
  j["dim"] = p.dim();
  j["terms"] = std::move(terms);
  return j;
}

Polynomial polynomial_from_json(const json& j, const std::string& path) {
  const int dim = as_int(member(j, "dim", path), path + ".dim");
  if (dim <= 0) fail(path + ".dim", "must be positive");
  Polynomial p(dim);
  const json& terms = member(j, "terms", path);
  if (!terms.is_array()) fail(path + ".terms", "expected an array");
  for (size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = path + ".terms[" + std::to_string(i) + "]";
    const json& expo = member(terms[i], "expo", tp);
    if (!expo.is_array() || static_cast<int>(expo.size()) != dim)
      fail(tp + ".expo", "expected an array of dim exponents");
    std::vector<int> e(expo.size());
    for (size_t v = 0; v < expo.size(); ++v) {
      e[v] = as_int(expo[v], tp + ".expo[" + std::to_string(v) + "]");
      if (e[v] < 0) fail(tp + ".expo[" + std::to_string(v) + "]", "must be >= 0");
    }
    p.add_term(as_double(member(terms[i], "coef", tp), tp + ".coef"), std::move(e));
  }
  p.compress();
  return p;
}

json variant_to_json(const FunctionSpec& u) {
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        json j;
        if constexpr (std::is_same_v<T, RadialPoly>) {
          j["type"] = "radial_poly";
          j["coeffs"] = json::array();
          for (int i = 0; i < v.coeffs.size(); ++i) j["coeffs"].push_back(v.coeffs[i]);
          j["vanishing"] = v.vanishing;
        } else if constexpr (std::is_same_v<T, QuadraticForm>) {
          j["type"] = "quadratic";
          const bool cx = u.space.kind == SpaceKind::Complex;
          json rows = json::array();
          for (int r = 0; r < v.q.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < v.q.cols(); ++c) row.push_back(entry_to_json(v.q(r, c), cx));
            rows.push_back(std::move(row));
          }
          j["matrix"] = std::move(rows);
          j["shift"] = v.shift;
        } else if constexpr (std::is_same_v<T, Perturbed>) {
          j["type"] = "perturbed";
          j["base"] = spec_to_json(*v.base);
          j["bump"] = polynomial_to_json(v.bump);
          j["amplitude"] = v.amplitude;
        } else {
          j["type"] = "linear_combination";
          j["weights"] = v.weights;
          j["parts"] = json::array();
          for (const auto& part : v.parts) j["parts"].push_back(spec_to_json(*part));
        }
        return j;
      },
      u.variant);
}

}  // namespace

json spec_to_json(const FunctionSpec& u) {
  json j;
  j["space"] = u.space.kind == SpaceKind::Complex ? "complex" : "real";
  j["n"] = u.space.n;
  j["variant"] = variant_to_json(u);
  return j;
}

FunctionSpec spec_from_json(const json& j, const std::string& path) {
  const std::string kind = as_string(member(j, "space", path), path + ".space");
  Space space;
  if (kind == "complex")
    space.kind = SpaceKind::Complex;
  else if (kind == "real")
    space.kind = SpaceKind::Real;
  else
    fail(path + ".space", "expected \"complex\" or \"real\"");
  space.n = as_int(member(j, "n", path), path + ".n");
  if (space.n < 1) fail(path + ".n", "must be >= 1");

  const json& var = member(j, "variant", path);
  const std::string vpath = path + ".variant";
  const std::string type = as_string(member(var, "type", vpath), vpath + ".type");

  try {
    if (type == "radial_poly") {
      const Eigen::VectorXd coeffs =
          as_vector(member(var, "coeffs", vpath), vpath + ".coeffs");
      bool vanishing = true;
      if (var.contains("vanishing"))
        vanishing = as_bool(var["vanishing"], vpath + ".vanishing");
      return make_radial(space, coeffs, vanishing);
    }
    if (type == "quadratic") {
      const json& rows = member(var, "matrix", vpath);
      if (!rows.is_array() || rows.empty()) fail(vpath + ".matrix", "expected rows");
      Eigen::MatrixXcd q(rows.size(), rows[0].size());
      for (size_t r = 0; r < rows.size(); ++r) {
        const std::string rp = vpath + ".matrix[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || rows[r].size() != rows[0].size())
          fail(rp, "expected a rectangular matrix");
        for (size_t c = 0; c < rows[r].size(); ++c)
          q(static_cast<int>(r), static_cast<int>(c)) =
              as_entry(rows[r][c], rp + "[" + std::to_string(c) + "]");
      }
      double shift = 0.0;
      if (var.contains("shift")) shift = as_double(var["shift"], vpath + ".shift");
      return make_quadratic(space, q, shift);
    }
    if (type == "perturbed") {
      FunctionSpec base = spec_from_json(member(var, "base", vpath), vpath + ".base");
      if (!(base.space == space))
        fail(vpath + ".base", "space does not match the enclosing spec");
      const Polynomial bump =
          polynomial_from_json(member(var, "bump", vpath), vpath + ".bump");
      const double amplitude =
          as_double(member(var, "amplitude", vpath), vpath + ".amplitude");
      return make_perturbed(base, bump, amplitude);
    }
    if (type == "linear_combination") {
      const json& jw = member(var, "weights", vpath);
      if (!jw.is_array()) fail(vpath + ".weights", "expected an array");
      std::vector<double> weights;
      for (size_t i = 0; i < jw.size(); ++i)
        weights.push_back(as_double(jw[i], vpath + ".weights[" + std::to_string(i) + "]"));
      const json& jp = member(var, "parts", vpath);
      if (!jp.is_array()) fail(vpath + ".parts", "expected an array");
      std::vector<FunctionSpec> parts;
      for (size_t i = 0; i < jp.size(); ++i) {
        const std::string pp = vpath + ".parts[" + std::to_string(i) + "]";
        parts.push_back(spec_from_json(jp[i], pp));
        if (!(parts.back().space == space))
          fail(pp, "space does not match the enclosing spec");
      }
      return make_combination(weights, parts);
    }
  } catch (const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    fail(vpath, e.what());
  }
  fail(vpath + ".type", "unknown variant type \"" + type + "\"");
}

json quadrature_to_json(const QuadratureSpec& q) {
  json j;
  j["kind"] = q.kind;
  j[q.kind == "grid" ? "resolution" : "nodes"] = q.param;
  return j;
}

QuadratureSpec quadrature_from_json(const json& j, const std::string& path) {
  QuadratureSpec q;
  q.kind = as_string(member(j, "kind", path), path + ".kind");
  const char* key = nullptr;
  if (q.kind == "radial_gauss")
    key = "nodes";
  else if (q.kind == "grid")
    key = "resolution";
  else
    fail(path + ".kind", "expected \"radial_gauss\" or \"grid\"");
  if (j.contains(key)) {
    q.param = as_int(j[key], path + "." + key);
    if (q.param < 0) fail(path + "." + key, "must be >= 0");
  }
  return q;
}

json energy_to_json(const EnergyValue& e) {
  json j;
  j["value"] = e.value;
  j["tau"] = e.tau;
  j["scheme"] = quadrature_to_json({e.scheme_kind, e.scheme_param});
  return j;
}

std::string canonical_dump(const json& j) { return j.dump(); }

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t value) {
  char buf[16];
  for (int i = 0; i < 16; ++i)
    buf[i] = "0123456789abcdef"[(value >> (60 - 4 * i)) & 0xf];
  return std::string(buf, 16);
}

std::string spec_digest(const FunctionSpec& u) {
  return hex64(fnv1a64(canonical_dump(spec_to_json(u))));
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace khess
