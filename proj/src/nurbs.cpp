#include "igabem/nurbs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "igabem/errors.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

namespace {

constexpr int kArcLengthOrder = 64;

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 1 || degree_ > kMaxDegree) {
    throw domain_error("knot vector: degree out of range");
  }
  if (static_cast<int>(knots_.size()) < 2 * (degree_ + 1)) {
    throw domain_error("knot vector: too few knots for degree");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i] < knots_[i - 1]) throw domain_error("knot vector: knots must be non-decreasing");
  }
  for (int i = 1; i <= degree_; ++i) {
    if (knots_[i] != knots_[0] || knots_[knots_.size() - 1 - i] != knots_.back()) {
      throw domain_error("knot vector: must be clamped (open)");
    }
  }
  if (!(domain_begin() < domain_end())) {
    throw domain_error("knot vector: empty parametric domain");
  }
}

int KnotVector::find_span(double xi) const {
  if (xi < domain_begin() || xi > domain_end()) {
    throw domain_error("parameter outside the knot vector domain");
  }
  const int n = basis_count();
  if (xi >= domain_end()) {
    int span = n - 1;
    while (span > degree_ && knots_[span] == knots_[span + 1]) --span;
    return span;
  }
  int lo = degree_, hi = n;
  while (lo + 1 < hi) {
    const int mid = (lo + hi) / 2;
    if (xi < knots_[mid]) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

bool KnotVector::has_interior_multiplicity() const {
  for (std::size_t i = degree_ + 1; i + degree_ + 1 < knots_.size(); ++i) {
    if (knots_[i] == knots_[i + 1]) return true;
  }
  return false;
}

int KnotVector::span_count() const {
  int count = 0;
  for (std::size_t i = degree_; i + degree_ + 1 < knots_.size(); ++i) {
    if (knots_[i] < knots_[i + 1]) ++count;
  }
  return count;
}

BasisSpan bspline_basis(const KnotVector& kv, double xi) {
  const int p = kv.degree();
  const int span = kv.find_span(xi);
  const auto& u = kv.knots();

  BasisSpan out;
  out.span = span;
  out.first = span - p;
  out.count = p + 1;

  // Cox-de Boor triangle over the nonzero functions only.
  std::array<double, kMaxDegree + 1> left{}, right{};
  out.value[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - u[span + 1 - j];
    right[j] = u[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out.value[r] / (right[r + 1] + left[j - r]);
      out.value[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out.value[j] = saved;
  }
  return out;
}

BasisDerivs bspline_basis_derivs(const KnotVector& kv, double xi, int order) {
  if (order < 0 || order > kMaxDerivOrder) {
    throw domain_error("bspline_basis_derivs: derivative order out of range");
  }
  const int p = kv.degree();
  const int span = kv.find_span(xi);
  const auto& u = kv.knots();

  BasisDerivs out;
  out.span = span;
  out.first = span - p;
  out.count = p + 1;
  out.order = order;
  out.truncated = order > p;  // columns above p stay zero
  const int nd = std::min(order, p);

  double ndu[kMaxDegree + 1][kMaxDegree + 1];
  std::array<double, kMaxDegree + 1> left{}, right{};
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - u[span + 1 - j];
    right[j] = u[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= p; ++j) out.d[0][j] = ndu[j][p];

  double a[2][kMaxDegree + 1];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      out.d[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) out.d[k][j] *= factor;
    factor *= (p - k);
  }
  return out;
}

NurbsCurve::NurbsCurve(KnotVector kv, std::vector<Vec2> control_points,
                       std::vector<double> weights)
    : kv_(std::move(kv)), points_(std::move(control_points)), weights_(std::move(weights)) {
  if (static_cast<int>(points_.size()) != kv_.basis_count() || points_.size() != weights_.size()) {
    throw domain_error("nurbs curve: control point / weight / knot counts inconsistent");
  }
  for (double w : weights_) {
    if (!(w > 0.0)) throw domain_error("nurbs curve: weights must be strictly positive");
  }
  length_scale_ = 1.0;
  for (const Vec2& p : points_) {
    length_scale_ = std::max({length_scale_, std::abs(p.x), std::abs(p.y)});
  }

  // Element table + cumulative arc length, fixed at construction so the curve
  // is immutable and shareable afterwards.
  const auto& u = kv_.knots();
  for (std::size_t i = kv_.degree(); i + kv_.degree() + 1 < u.size(); ++i) {
    if (u[i] < u[i + 1]) element_begin_.push_back(u[i]);
  }
  element_begin_.push_back(kv_.domain_end());

  const QuadratureRule rule = gauss_legendre(kArcLengthOrder);
  cumulative_length_.resize(element_begin_.size());
  cumulative_length_[0] = 0.0;
  for (std::size_t e = 0; e + 1 < element_begin_.size(); ++e) {
    const double len = integrate_interval(
        [this](double t) { return eval(t).d1.norm(); }, element_begin_[e], element_begin_[e + 1],
        rule);
    cumulative_length_[e + 1] = cumulative_length_[e] + len;
  }
}

BasisDerivs NurbsCurve::basis_derivs(double xi, int order) const {
  if (order < 0 || order > kMaxDerivOrder) {
    throw domain_error("nurbs basis_derivs: derivative order out of range");
  }
  BasisDerivs bs = bspline_basis_derivs(kv_, xi, std::min(order, kv_.degree()));
  bs.order = order;

  // Weighted sums W^(j); B-spline columns above the degree are zero but the
  // rational derivatives are not, so run the recursion to the full order.
  std::array<double, kMaxDerivOrder + 1> w_der{};
  for (int j = 0; j <= order; ++j) {
    double s = 0.0;
    for (int l = 0; l < bs.count; ++l) s += bs.d[j][l] * weights_[bs.first + l];
    w_der[j] = s;
  }

  BasisDerivs out = bs;
  out.truncated = false;
  for (int j = 0; j <= order; ++j) {
    for (int l = 0; l < bs.count; ++l) {
      double v = weights_[bs.first + l] * bs.d[j][l];
      for (int b = 1; b <= j; ++b) {
        v -= binomial(j, b) * w_der[b] * out.d[j - b][l];
      }
      out.d[j][l] = v / w_der[0];
    }
  }
  return out;
}

NurbsCurve::Jet NurbsCurve::eval(double xi) const {
  const BasisDerivs rb = basis_derivs(xi, 2);
  Jet jet;
  for (int l = 0; l < rb.count; ++l) {
    const Vec2& cp = points_[rb.first + l];
    jet.p += cp * rb.d[0][l];
    jet.d1 += cp * rb.d[1][l];
    jet.d2 += cp * rb.d[2][l];
  }
  return jet;
}

Vec2 NurbsCurve::point(double xi) const {
  const BasisDerivs rb = basis_derivs(xi, 0);
  Vec2 p;
  for (int l = 0; l < rb.count; ++l) p += points_[rb.first + l] * rb.d[0][l];
  return p;
}

LocalFrame make_local_frame(Vec2 point, Vec2 d1, Vec2 d2, double length_scale) {
  LocalFrame f;
  f.point = point;
  f.d1 = d1;
  f.d2 = d2;
  f.jacobian = d1.norm();
  if (f.jacobian < 1e-12 * length_scale) {
    throw geometry_error("degenerate parameterization (vanishing Jacobian)");
  }
  f.tangent_angle = std::atan2(d1.y, d1.x);
  f.normal_angle = f.tangent_angle - M_PI / 2.0;
  f.curvature = d1.cross(d2) / (f.jacobian * f.jacobian * f.jacobian);
  return f;
}

LocalFrame NurbsCurve::frame(double xi) const {
  const Jet jet = eval(xi);
  return make_local_frame(jet.p, jet.d1, jet.d2, length_scale_);
}

double NurbsCurve::arc_length(double xi) const {
  if (xi < kv_.domain_begin() || xi > kv_.domain_end()) {
    throw domain_error("arc_length: parameter outside domain");
  }
  const auto it = std::upper_bound(element_begin_.begin(), element_begin_.end(), xi);
  std::size_t e = (it == element_begin_.begin()) ? 0 : (it - element_begin_.begin() - 1);
  if (e + 1 >= element_begin_.size()) e = element_begin_.size() - 2;
  static const QuadratureRule rule = gauss_legendre(kArcLengthOrder);
  const double partial = integrate_interval(
      [this](double t) { return eval(t).d1.norm(); }, element_begin_[e], xi, rule);
  return cumulative_length_[e] + partial;
}

NurbsCurve NurbsCurve::inserted(double xi) const {
  const int p = kv_.degree();
  if (xi <= kv_.domain_begin() || xi >= kv_.domain_end()) {
    throw domain_error("knot insertion: parameter must be strictly interior");
  }
  const int k = kv_.find_span(xi);
  const auto& u = kv_.knots();
  const int n = control_count();

  std::vector<double> new_knots(u.begin(), u.begin() + k + 1);
  new_knots.push_back(xi);
  new_knots.insert(new_knots.end(), u.begin() + k + 1, u.end());

  // Boehm's rule applied to homogeneous control points.
  std::vector<Vec2> q(n + 1);
  std::vector<double> qw(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (i <= k - p) {
      q[i] = points_[i] * weights_[i];
      qw[i] = weights_[i];
    } else if (i <= k) {
      const double alpha = (xi - u[i]) / (u[i + p] - u[i]);
      q[i] = points_[i] * weights_[i] * alpha + points_[i - 1] * weights_[i - 1] * (1.0 - alpha);
      qw[i] = weights_[i] * alpha + weights_[i - 1] * (1.0 - alpha);
    } else {
      q[i] = points_[i - 1] * weights_[i - 1];
      qw[i] = weights_[i - 1];
    }
  }
  for (int i = 0; i <= n; ++i) q[i] = q[i] / qw[i];
  return NurbsCurve(KnotVector(p, std::move(new_knots)), std::move(q), std::move(qw));
}

NurbsCurve NurbsCurve::refined(const std::vector<double>& new_knots) const {
  NurbsCurve result = *this;
  for (double xi : new_knots) {
    const auto& u = result.knot_vector().knots();
    if (std::any_of(u.begin(), u.end(), [xi](double v) { return v == xi; })) continue;
    result = result.inserted(xi);
  }
  return result;
}

NurbsCurve NurbsCurve::reversed() const {
  const auto& u = kv_.knots();
  const double lo = kv_.domain_begin(), hi = kv_.domain_end();
  std::vector<double> rk(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) rk[i] = lo + hi - u[u.size() - 1 - i];
  std::vector<Vec2> rp(points_.rbegin(), points_.rend());
  std::vector<double> rw(weights_.rbegin(), weights_.rend());
  return NurbsCurve(KnotVector(kv_.degree(), std::move(rk)), std::move(rp), std::move(rw));
}

std::vector<double> greville_abscissae(const KnotVector& kv) {
  const int p = kv.degree();
  const int n = kv.basis_count();
  const auto& u = kv.knots();
  std::vector<double> xi(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 1; j <= p; ++j) s += u[i + j];
    xi[i] = s / p;
  }
  return xi;
}

int ElementMesh::element_of(double xi) const {
  for (int e = 0; e < element_count(); ++e) {
    if (xi < elements[e].end || e + 1 == element_count()) return e;
  }
  return element_count() - 1;
}

ElementMesh make_mesh(const NurbsCurve& curve) {
  const KnotVector& kv = curve.knot_vector();
  const auto& u = kv.knots();
  ElementMesh mesh;
  mesh.degree = kv.degree();
  for (std::size_t i = kv.degree(); i + kv.degree() + 1 < u.size(); ++i) {
    if (u[i] < u[i + 1]) {
      mesh.elements.push_back({u[i], u[i + 1], static_cast<int>(i)});
    }
  }
  mesh.collocation = greville_abscissae(kv);
  return mesh;
}

NurbsCurve read_curve(std::istream& in) {
  int degree = -1;
  std::vector<double> knots;
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "degree") {
      if (!(ls >> degree)) throw domain_error("curve file: bad degree line");
    } else if (tag == "knots") {
      double v;
      while (ls >> v) knots.push_back(v);
    } else if (tag == "cp") {
      Vec2 p;
      double w;
      if (!(ls >> p.x >> p.y >> w)) throw domain_error("curve file: bad cp line");
      points.push_back(p);
      weights.push_back(w);
    } else {
      throw domain_error("curve file: unknown tag '" + tag + "'");
    }
  }
  if (degree < 1) throw domain_error("curve file: missing degree");
  if (knots.empty()) throw domain_error("curve file: missing knots");
  return NurbsCurve(KnotVector(degree, std::move(knots)), std::move(points), std::move(weights));
}

NurbsCurve load_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open curve file: " + path);
  return read_curve(in);
}

void write_curve(std::ostream& out, const NurbsCurve& curve) {
  out << "degree " << curve.degree() << "\n";
  out << "knots";
  out.precision(17);
  for (double k : curve.knot_vector().knots()) out << ' ' << k;
  out << "\n";
  for (int i = 0; i < curve.control_count(); ++i) {
    out << "cp " << curve.control_points()[i].x << ' ' << curve.control_points()[i].y << ' '
        << curve.weights()[i] << "\n";
  }
}

}  // namespace igabem
