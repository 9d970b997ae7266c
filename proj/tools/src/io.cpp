#include "sbpick_cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "sbpick/error.hpp"

namespace sbpick::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j) {
  if (!j.is_number()) bad("expected a number, got " + j.dump());
  return j.get<double>();
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const GPoint& s) { return Json::array({s.s1.real(), s.s1.imag(), s.s2.real(), s.s2.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("expected a complex number [re, im], got " + j.dump());
  return {number(j[0]), number(j[1])};
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of complex numbers");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Index>(k)) = complex_from_json(j[k]);
  return v;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) bad("expected a matrix as nested arrays");
  const std::size_t rows = j.size();
  const std::size_t cols = rows > 0 && j[0].is_array() ? j[0].size() : 0;
  CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad("matrix rows have different lengths");
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Index>(i), static_cast<Index>(k)) = complex_from_json(j[i][k]);
  }
  return m;
}

GPoint gpoint_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) bad("expected a node [s1_re, s1_im, s2_re, s2_im], got " + j.dump());
  return {{number(j[0]), number(j[1])}, {number(j[2]), number(j[3])}};
}

Json problem_to_json(const PickProblem& p) {
  Json nodes = Json::array();
  Json targets = Json::array();
  for (const GPoint& s : p.nodes) nodes.push_back(to_json(s));
  for (Complex w : p.targets) targets.push_back(to_json(w));
  return {{"nodes", nodes}, {"targets", targets}};
}

PickProblem problem_from_json(const Json& j) {
  PickProblem p;
  const Json& nodes = field(j, "nodes");
  const Json& targets = field(j, "targets");
  if (!nodes.is_array() || !targets.is_array()) bad("\"nodes\" and \"targets\" must be arrays");
  for (const Json& s : nodes) p.nodes.push_back(gpoint_from_json(s));
  for (const Json& w : targets) p.targets.push_back(complex_from_json(w));
  return p;
}

Json colligation_to_json(const Colligation& c) {
  return {{"A", to_json(c.A)}, {"beta", to_json(c.beta)}, {"gamma", to_json(c.gamma)},
          {"D", to_json(c.D)}, {"T", to_json(c.T)}};
}

Colligation colligation_from_json(const Json& j) {
  Colligation c;
  c.A = complex_from_json(field(j, "A"));
  c.beta = vector_from_json(field(j, "beta"));
  c.gamma = vector_from_json(field(j, "gamma"));
  c.D = matrix_from_json(field(j, "D"));
  c.T = matrix_from_json(field(j, "T"));
  // An empty state space serializes D and T as [], which reads back 0 x 0.
  return c;
}

Json certificate_to_json(const PickCertificate& c) {
  return {{"a1", to_json(c.a1.matrix())}, {"a2", to_json(c.a2.matrix())},
          {"residual", c.residual}, {"min_eig", c.min_eig}};
}

PickCertificate certificate_from_json(const Json& j) {
  PickCertificate c;
  try {
    c.a1 = HermitianMatrix(matrix_from_json(field(j, "a1")));
    c.a2 = HermitianMatrix(matrix_from_json(field(j, "a2")));
  } catch (const Error& e) {
    bad(std::string("certificate: ") + e.what());
  }
  c.residual = number(field(j, "residual"));
  c.min_eig = number(field(j, "min_eig"));
  return c;
}

Json gmodel_to_json(const GModel& g) {
  Json nodes = Json::array();
  Json v = Json::array();
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    nodes.push_back(to_json(g.nodes[k]));
    v.push_back(to_json(CVector(g.v.col(static_cast<Index>(k)))));
  }
  return {{"T", to_json(g.T)}, {"nodes", nodes}, {"v", v}, {"residual", g.residual}};
}

GModel gmodel_from_json(const Json& j) {
  GModel g;
  g.T = matrix_from_json(field(j, "T"));
  const Json& nodes = field(j, "nodes");
  const Json& v = field(j, "v");
  if (!nodes.is_array() || !v.is_array() || nodes.size() != v.size()) bad("gmodel: \"nodes\" and \"v\" differ in length");
  g.v = CMatrix(g.T.rows(), static_cast<Index>(v.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    g.nodes.push_back(gpoint_from_json(nodes[k]));
    const CVector col = vector_from_json(v[k]);
    if (col.size() != g.T.rows()) bad("gmodel: vector length does not match T");
    g.v.col(static_cast<Index>(k)) = col;
  }
  g.residual = number(field(j, "residual"));
  return g;
}

CommutingPair pair_from_json(const Json& j) {
  const CMatrix s1 = matrix_from_json(field(j, "s1"));
  const CMatrix s2 = matrix_from_json(field(j, "s2"));
  try {
    return CommutingPair(s1, s2);
  } catch (const Error& e) {
    bad(std::string("pair: ") + e.what());
  }
}

std::vector<GPoint> points_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("points") ? j["points"] : field(j, "nodes");
  if (!list.is_array()) bad("points must be an array");
  std::vector<GPoint> out;
  for (const Json& s : list) out.push_back(gpoint_from_json(s));
  return out;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw OutputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot rename into " + path.string());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace sbpick::cli
