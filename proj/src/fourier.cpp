#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "semilin/galerkin.hpp"

namespace semilin {

FourierApproximation::FourierApproximation(int max_mode) {
  if (max_mode < 1) throw UsageError("FourierApproximation: max_mode must be >= 1");
  a_ = Eigen::MatrixXd::Zero(max_mode, max_mode);
}

FourierApproximation::FourierApproximation(Eigen::MatrixXd coeffs) : a_(std::move(coeffs)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) throw UsageError("FourierApproximation: coefficients must be square");
  if (!a_.allFinite()) throw UsageError("FourierApproximation: non-finite coefficient");
}

FourierApproximation FourierApproximation::single(int i, int j, double a) {
  FourierApproximation u(std::max(i, j));
  u.set(i, j, a);
  return u;
}

double FourierApproximation::operator()(int i, int j) const {
  if (i < 1 || j < 1 || i > max_mode() || j > max_mode()) return 0.0;
  return a_(i - 1, j - 1);
}

void FourierApproximation::set(int i, int j, double a) {
  if (i < 1 || j < 1 || i > max_mode() || j > max_mode()) throw UsageError("FourierApproximation: mode out of range");
  if (!std::isfinite(a)) throw UsageError("FourierApproximation: non-finite coefficient");
  a_(i - 1, j - 1) = a;
}

bool FourierApproximation::odd_only() const {
  for (int i = 1; i <= max_mode(); ++i)
    for (int j = 1; j <= max_mode(); ++j)
      if ((i % 2 == 0 || j % 2 == 0) && a_(i - 1, j - 1) != 0) return false;
  return true;
}

std::vector<int> FourierApproximation::active_x() const {
  std::vector<int> r;
  for (int i = 1; i <= max_mode(); ++i)
    if ((a_.row(i - 1).array() != 0).any()) r.push_back(i);
  return r;
}

std::vector<int> FourierApproximation::active_y() const {
  std::vector<int> r;
  for (int j = 1; j <= max_mode(); ++j)
    if ((a_.col(j - 1).array() != 0).any()) r.push_back(j);
  return r;
}

FourierApproximation FourierApproximation::resized(int max_mode) const {
  FourierApproximation r(max_mode);
  int m = std::min(max_mode, this->max_mode());
  r.a_.topLeftCorner(m, m) = a_.topLeftCorner(m, m);
  return r;
}

FourierApproximation laplacian(const FourierApproximation& u) {
  Eigen::MatrixXd c = u.coeffs();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int i = 1; i <= u.max_mode(); ++i)
    for (int j = 1; j <= u.max_mode(); ++j) c(i - 1, j - 1) *= -(i * i + j * j) * pi2;
  return FourierApproximation(c);
}

double l2_norm(const FourierApproximation& u) { return 0.5 * u.coeffs().norm(); }

Interval l2_norm_enclosure(const FourierApproximation& u) {
  Interval s(0.0);
  for (Eigen::Index k = 0; k < u.coeffs().size(); ++k) s += sqr(Interval(u.coeffs().data()[k]));
  return sqrt(s) * 0.5;
}

double eval(const FourierApproximation& u, double x, double y) {
  const int n = u.max_mode();
  Eigen::VectorXd sx(n), sy(n);
  for (int i = 1; i <= n; ++i) {
    sx[i - 1] = std::sin(i * std::numbers::pi * x);
    sy[i - 1] = std::sin(i * std::numbers::pi * y);
  }
  return sx.dot(u.coeffs() * sy);
}

Interval eval(const FourierApproximation& u, const Interval& x, const Interval& y) {
  const int n = u.max_mode();
  std::vector<Interval> sx(n), sy(n);
  for (int i = 1; i <= n; ++i) {
    sx[i - 1] = sinpi(Interval(i) * x);
    sy[i - 1] = sinpi(Interval(i) * y);
  }
  Interval s(0.0);
  for (int i = 0; i < n; ++i) {
    Interval r(0.0);
    for (int j = 0; j < n; ++j)
      if (u.coeffs()(i, j) != 0) r += Interval(u.coeffs()(i, j)) * sy[j];
    s += sx[i] * r;
  }
  return s;
}

RationalExp stiffness_factor(int i, int j) { return {static_cast<std::int64_t>(i) * i + static_cast<std::int64_t>(j) * j, 4}; }

std::vector<Interval> stiffness_diag(const std::vector<std::pair<int, int>>& indices) {
  const Interval pi2 = sqr(pi());
  std::vector<Interval> d;
  d.reserve(indices.size());
  for (auto [i, j] : indices) d.push_back(Interval::from_rational(stiffness_factor(i, j)) * pi2);
  return d;
}

std::vector<std::pair<int, int>> odd_modes(int n) {
  std::vector<std::pair<int, int>> r;
  for (int i = 1; i <= n; i += 2)
    for (int j = 1; j <= n; j += 2) r.emplace_back(i, j);
  return r;
}

std::string coefficients_to_json(const FourierApproximation& u) {
  nlohmann::json j;
  j["max_mode"] = u.max_mode();
  auto arr = nlohmann::json::array();
  for (int i = 1; i <= u.max_mode(); ++i)
    for (int k = 1; k <= u.max_mode(); ++k)
      if (u(i, k) != 0) arr.push_back({i, k, u(i, k)});
  j["coefficients"] = arr;
  return j.dump(1);
}

FourierApproximation coefficients_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("coefficient file: ") + e.what());
  }
  if (!j.contains("coefficients")) throw UsageError("coefficient file: missing 'coefficients'");
  int n = j.value("max_mode", 0);
  for (const auto& t : j["coefficients"]) n = std::max({n, t.at(0).get<int>(), t.at(1).get<int>()});
  FourierApproximation u(n);
  for (const auto& t : j["coefficients"]) u.set(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>());
  return u;
}

namespace {
bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

void save_coefficients(const FourierApproximation& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  if (ends_with(path, ".json")) {
    out << coefficients_to_json(u) << "\n";
    return;
  }
  out.precision(17);
  for (int i = 1; i <= u.max_mode(); ++i)
    for (int k = 1; k <= u.max_mode(); ++k)
      if (u(i, k) != 0) out << i << " " << k << " " << u(i, k) << "\n";
}

FourierApproximation load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (ends_with(path, ".json")) return coefficients_from_json(ss.str());
  std::vector<std::tuple<int, int, double>> rows;
  int n = 1, i, j;
  double a;
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!(ls >> i >> j >> a)) throw UsageError("coefficient file: bad line '" + line + "'");
    rows.emplace_back(i, j, a);
    n = std::max({n, i, j});
  }
  FourierApproximation u(n);
  for (auto [r, c, v] : rows) u.set(r, c, v);
  return u;
}

}  // namespace semilin
