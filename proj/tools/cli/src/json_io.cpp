// Copyright 2026 The qinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qinv_cli/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qinv/errors.hpp"

namespace qinv::cli {

namespace {

std::vector<std::vector<double>> real_rows(const Json& j, const std::string& pointer, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) {
    throw ConfigError(pointer, "expected " + std::to_string(dim) + " rows");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < dim; ++i) {
    const Json& row = j[i];
    const std::string rp = pointer + "/" + std::to_string(i);
    if (!row.is_array() || row.size() != dim) {
      throw ConfigError(rp, "expected " + std::to_string(dim) + " entries");
    }
    std::vector<double> r;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!row[k].is_number()) throw ConfigError(rp + "/" + std::to_string(k), "expected a number");
      r.push_back(row[k].get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<double> real_list(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(pointer + "/" + std::to_string(k), "expected a number");
    out.push_back(j[k].get<double>());
  }
  return out;
}

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k > 0) out += ',';
        dump_into(j[k], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Operator matrix_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected a matrix literal {dim, re, im}");
  require_known_keys(j, pointer, {"dim", "re", "im"});
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
    throw ConfigError(pointer + "/dim", "expected a positive integer");
  }
  const auto dim = static_cast<std::size_t>(j["dim"].get<long long>());
  if (!j.contains("re")) throw ConfigError(pointer + "/re", "missing");
  const auto re = real_rows(j["re"], pointer + "/re", dim);
  std::vector<std::vector<double>> im(dim, std::vector<double>(dim, 0.0));
  if (j.contains("im")) im = real_rows(j["im"], pointer + "/im", dim);
  const auto n = static_cast<Eigen::Index>(dim);
  Operator m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = Complex(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                        im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

Json matrix_to_json(const Operator& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Vector vector_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected a vector literal {re, im}");
  require_known_keys(j, pointer, {"re", "im"});
  if (!j.contains("re")) throw ConfigError(pointer + "/re", "missing");
  const auto re = real_list(j["re"], pointer + "/re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) {
    im = real_list(j["im"], pointer + "/im");
    if (im.size() != re.size()) throw ConfigError(pointer + "/im", "length differs from re");
  }
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
  return v;
}

Json vector_to_json(const Vector& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    re.push_back(v(k).real());
    im.push_back(v(k).imag());
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

CoefficientSchedule schedule_from_json(const Json& j, const std::string& pointer) {
  if (j.is_number()) return CoefficientSchedule::constant(j.get<double>());
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(pointer, "expected a schedule {kind, ...} or a number");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "constant") {
      require_known_keys(j, pointer, {"kind", "value"});
      return CoefficientSchedule::constant(number_at(j, "value", pointer));
    }
    if (kind == "polynomial") {
      require_known_keys(j, pointer, {"kind", "coefficients"});
      if (!j.contains("coefficients")) throw ConfigError(pointer + "/coefficients", "missing");
      return CoefficientSchedule::polynomial(real_list(j["coefficients"], pointer + "/coefficients"));
    }
    if (kind == "sinusoid") {
      require_known_keys(j, pointer, {"kind", "amplitude", "omega", "phase", "offset"});
      const auto opt = [&](const char* key) { return j.contains(key) ? number_at(j, key, pointer) : 0.0; };
      return CoefficientSchedule::sinusoid(number_at(j, "amplitude", pointer), number_at(j, "omega", pointer),
                                           opt("phase"), opt("offset"));
    }
    if (kind == "table") {
      require_known_keys(j, pointer, {"kind", "times", "values"});
      if (!j.contains("times")) throw ConfigError(pointer + "/times", "missing");
      if (!j.contains("values")) throw ConfigError(pointer + "/values", "missing");
      return CoefficientSchedule::table(real_list(j["times"], pointer + "/times"),
                                        real_list(j["values"], pointer + "/values"));
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(pointer, e.what());
  }
  throw ConfigError(pointer + "/kind", "unknown schedule kind '" + kind + "'");
}

Json schedule_to_json(const CoefficientSchedule& s) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CoefficientSchedule::Constant>) {
          return {{"kind", "constant"}, {"value", k.value}};
        } else if constexpr (std::is_same_v<K, CoefficientSchedule::Polynomial>) {
          return {{"kind", "polynomial"}, {"coefficients", k.coefficients}};
        } else if constexpr (std::is_same_v<K, CoefficientSchedule::Sinusoid>) {
          return {{"kind", "sinusoid"}, {"amplitude", k.amplitude}, {"omega", k.omega},
                  {"phase", k.phase},   {"offset", k.offset}};
        } else {
          return {{"kind", "table"}, {"times", k.times}, {"values", k.values}};
        }
      },
      s.kind());
}

Json decomposition_to_json(const DfsDecomposition& d) {
  Json out;
  out["dfs_dim"] = d.dfs_dim();
  out["comp_dim"] = d.comp_dim();
  Json dfs = Json::array(), comp = Json::array();
  for (std::size_t k = 0; k < d.dfs_dim(); ++k) dfs.push_back(vector_to_json(d.dfs_basis().vector(k)));
  for (std::size_t k = 0; k < d.comp_dim(); ++k) comp.push_back(vector_to_json(d.comp_basis().vector(k)));
  out["dfs_basis"] = std::move(dfs);
  out["comp_basis"] = std::move(comp);
  Json c = Json::array();
  for (const Complex& v : d.common_eigenvalues()) c.push_back({{"re", v.real()}, {"im", v.imag()}});
  out["common_eigenvalues"] = std::move(c);
  out["heff_invariant"] = d.heff_invariant;
  out["heff_residual"] = d.heff_residual;
  out["is_dfs"] = d.is_dfs();
  if (d.blocks()) {
    const BlockData& b = *d.blocks();
    Json blocks;
    blocks["time"] = b.time;
    blocks["H_D"] = matrix_to_json(b.h.d);
    blocks["H_N"] = matrix_to_json(b.h.n);
    blocks["H_C"] = matrix_to_json(b.h.c);
    blocks["G_D"] = matrix_to_json(b.g.d);
    blocks["G_N"] = matrix_to_json(b.g.n);
    blocks["G_C"] = matrix_to_json(b.g.c);
    Json lind = Json::array();
    for (std::size_t a = 0; a < b.lindblad.size(); ++a) {
      const auto& lb = b.lindblad[a];
      // Off-square blocks are exported as flat row-major arrays.
      Json a_re = Json::array(), a_im = Json::array();
      for (Eigen::Index r = 0; r < lb.a.rows(); ++r) {
        Json rr = Json::array(), ri = Json::array();
        for (Eigen::Index col = 0; col < lb.a.cols(); ++col) {
          rr.push_back(lb.a(r, col).real());
          ri.push_back(lb.a(r, col).imag());
        }
        a_re.push_back(std::move(rr));
        a_im.push_back(std::move(ri));
      }
      lind.push_back({{"c", {{"re", lb.c.real()}, {"im", lb.c.imag()}}},
                      {"A", {{"rows", lb.a.rows()}, {"cols", lb.a.cols()}, {"re", a_re}, {"im", a_im}}},
                      {"B", matrix_to_json(lb.b)},
                      {"lower_left_norm", lb.lower_left_norm},
                      {"rate", b.rates[a]}});
    }
    blocks["lindblad"] = std::move(lind);
    blocks["decoupling_x_norm"] = max_abs(decoupling_operator(b));
    out["blocks"] = std::move(blocks);
  }
  return out;
}

void require_known_keys(const Json& j, const std::string& pointer,
                        std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (std::string_view a : allowed) known = known || a == it.key();
    if (!known) throw ConfigError(pointer + "/" + it.key(), "unknown key");
  }
}

double number_at(const Json& j, const std::string& key, const std::string& pointer) {
  if (!j.contains(key)) throw ConfigError(pointer + "/" + key, "missing");
  if (!j[key].is_number()) throw ConfigError(pointer + "/" + key, "expected a number");
  return j[key].get<double>();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(j, out);
  out += '\n';
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into " + path + ": " + ec.message());
  }
}

}  // namespace qinv::cli
