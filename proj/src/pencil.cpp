#include "indicial/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"

namespace indicial {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double PencilSpec::max_coeff_norm() const {
  double r = 0.0;
  for (const auto& a : coeffs) r = std::max(r, a.norm());
  return r;
}

Mat evaluate(const PencilSpec& p, cplx sigma) {
  Mat r = Mat::Zero(p.n(), p.n());
  for (int j = p.mu(); j >= 0; --j) r = r * sigma + p.coeffs[j];
  return r;
}

MatrixSeries taylor_at(const PencilSpec& p, cplx sigma0, int order) {
  MatrixSeries s = MatrixSeries::zero(p.n(), order);
  for (int k = 0; k <= std::min(order, p.mu()); ++k) {
    Mat acc = Mat::Zero(p.n(), p.n());
    cplx pw = 1.0;
    for (int j = k; j <= p.mu(); ++j) {
      acc += binom(j, k) * pw * p.coeffs[j];
      pw *= sigma0;
    }
    s.coeffs[k] = acc;
  }
  return s;
}

PencilSpec star_adjoint(const PencilSpec& p) {
  PencilSpec q;
  q.m = p.m;
  const cplx im = I * static_cast<double>(p.m);
  for (int k = 0; k <= p.mu(); ++k) {
    Mat acc = Mat::Zero(p.n(), p.n());
    cplx pw = 1.0;
    for (int j = k; j <= p.mu(); ++j) {
      acc += binom(j, k) * pw * p.coeffs[j].adjoint();
      pw *= im;
    }
    q.coeffs.push_back(acc);
  }
  return q;
}

double symmetry_defect(const PencilSpec& p) {
  PencilSpec q = star_adjoint(p);
  double d = 0.0;
  for (int k = 0; k <= p.mu(); ++k) d = std::max(d, (q.coeffs[k] - p.coeffs[k]).norm());
  return d;
}

bool check_symmetry(const PencilSpec& p, const Tolerances& tol) {
  if (p.coeffs.empty()) return false;
  return symmetry_defect(p) <= tol.rank_rel * std::max(p.max_coeff_norm(), 1.0);
}

PencilSpec poly_mul(const PencilSpec& a, const PencilSpec& b) {
  PencilSpec c;
  c.m = a.m;
  c.coeffs.assign(a.mu() + b.mu() + 1, Mat::Zero(a.coeffs[0].rows(), b.coeffs[0].cols()));
  for (int i = 0; i <= a.mu(); ++i)
    for (int j = 0; j <= b.mu(); ++j) c.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return c;
}

PencilSpec poly_from_roots(int m, const std::vector<cplx>& roots, double lead) {
  PencilSpec c;
  c.m = m;
  c.coeffs = {Mat::Constant(1, 1, lead)};
  for (cplx r : roots) {
    PencilSpec lin;
    lin.m = m;
    lin.coeffs = {Mat::Constant(1, 1, -r), Mat::Constant(1, 1, 1.0)};
    c = poly_mul(c, lin);
  }
  return c;
}

PencilSpec congruence(const PencilSpec& p, const PencilSpec& u) {
  PencilSpec uu = u;
  uu.m = p.m;
  return trimmed(poly_mul(poly_mul(star_adjoint(uu), p), uu));
}

PencilSpec random_unimodular(int n, int m, unsigned seed, double strength) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.8, 1.25);
  Mat R(n, n), N = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      R(i, j) = cplx(g(rng), g(rng));
      if (j < i) N(i, j) = strength * cplx(g(rng), g(rng)) / std::sqrt(2.0 * n);
    }
  Mat Qm = Eigen::HouseholderQR<Mat>(R).householderQ();
  Mat D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) D(i, i) = u(rng);
  Mat C = Qm * D;
  PencilSpec p;
  p.m = m;
  p.coeffs = {C, C * N};
  if (n == 1) p.coeffs.pop_back();
  return p;
}

PencilSpec trimmed(const PencilSpec& p) {
  PencilSpec q = p;
  while (q.coeffs.size() > 1 && q.coeffs.back().norm() == 0.0) q.coeffs.pop_back();
  return q;
}

PencilSpec pencil_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  auto fail = [](const std::string& w) { throw Error(ErrorCode::ParseError, w); };
  if (!j.is_object()) fail("pencil must be a JSON object");
  for (const char* key : {"m", "mu", "n", "coeffs"})
    if (!j.contains(key)) fail(std::string("missing field ") + key);
  if (!j["m"].is_number_integer() || !j["mu"].is_number_integer() || !j["n"].is_number_integer())
    fail("m, mu, n must be integers");
  PencilSpec p;
  p.m = j["m"].get<int>();
  const int mu = j["mu"].get<int>();
  const int n = j["n"].get<int>();
  if (p.m < 1) fail("m must be a positive integer");
  if (mu < 0 || n < 1) fail("need mu >= 0 and n >= 1");
  const json& cs = j["coeffs"];
  if (!cs.is_array() || static_cast<int>(cs.size()) != mu + 1) fail("coeffs must hold mu+1 matrices");
  for (const auto& a : cs) {
    if (!a.is_array() || static_cast<int>(a.size()) != n) fail("coefficient must have n rows");
    Mat M(n, n);
    for (int r = 0; r < n; ++r) {
      const auto& row = a[r];
      if (!row.is_array() || static_cast<int>(row.size()) != n) fail("row must have n entries");
      for (int c = 0; c < n; ++c) {
        const auto& z = row[c];
        if (z.is_number()) {
          M(r, c) = z.get<double>();
        } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
          M(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
        } else {
          fail("entries must be [re, im]");
        }
      }
    }
    p.coeffs.push_back(M);
  }
  if (p.coeffs.back().norm() == 0.0) fail("leading coefficient a_mu is zero");
  return p;
}

std::string pencil_to_json(const PencilSpec& p) {
  using nlohmann::json;
  json cs = json::array();
  for (const auto& a : p.coeffs) {
    json M = json::array();
    for (int r = 0; r < a.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < a.cols(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
      M.push_back(row);
    }
    cs.push_back(M);
  }
  json j = {{"m", p.m}, {"mu", p.mu()}, {"n", p.n()}, {"coeffs", cs}};
  return j.dump();
}

}  // namespace indicial
