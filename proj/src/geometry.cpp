#include "riemacon/geometry.hpp"

#include <cmath>
#include <sstream>

namespace riemacon {

namespace {

constexpr double kHyperboloidTol = 1e-10;
constexpr double kSpdSymTol = 1e-12;
constexpr double kEigClamp = 1e-14;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

[[noreturn]] void fail(const std::string& msg) { throw contract_error(msg); }

// ---------------------------------------------------------------------------
// Euclidean space

class EuclideanManifold final : public Manifold {
public:
  explicit EuclideanManifold(int n) : n_(n) {
    if (n < 1) fail("euclidean: dimension must be >= 1");
  }

  ManifoldKind kind() const override { return ManifoldKind::Euclidean; }
  std::string id() const override { return "euclidean:" + std::to_string(n_); }
  int dim() const override { return n_; }
  CurvatureBounds curvature() const override { return {0.0, 0.0}; }

  Point exp(const Point& x, const Tangent& v) const override {
    require_base(x, v, "exp");
    if (!all_finite(v.vec)) fail("exp: non-finite tangent");
    return Point{kind(), x.data + v.vec};
  }

  Tangent log(const Point& x, const Point& y) const override {
    require_kind(x, "log");
    require_kind(y, "log");
    return Tangent{x, y.data - x.data};
  }

  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override {
    require_base(x, v, "transport");
    require_kind(y, "transport");
    return Tangent{y, v.vec};
  }

  double distance(const Point& x, const Point& y) const override {
    return (y.data - x.data).norm();
  }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const override {
    require_base(x, u, "inner");
    require_base(x, v, "inner");
    return u.vec.dot(v.vec);
  }

  Point base_point() const override { return Point{kind(), Eigen::VectorXd::Zero(n_)}; }

  void check_point(const Point& p) const override {
    require_kind(p, "check_point");
    if (p.data.size() != n_) fail("euclidean: wrong coordinate count");
    if (!all_finite(p.data)) fail("euclidean: non-finite point");
  }

  Tangent random_tangent(const Point& x, Rng& rng, double scale) const override {
    Eigen::VectorXd g(n_);
    for (int i = 0; i < n_; ++i) g[i] = scale * rng.normal();
    return Tangent{x, g};
  }

private:
  int n_;
};

// ---------------------------------------------------------------------------
// Hyperboloid model of curvature -c, ambient Minkowski coordinates.
// Sheet: <x,x>_M = -1/c with x0 > 0; tangent space: <x,v>_M = 0.

class HyperboloidManifold final : public Manifold {
public:
  HyperboloidManifold(int n, double c) : n_(n), c_(c) {
    if (n < 1) fail("hyperbolic: dimension must be >= 1");
    if (!(c > 0.0)) fail("hyperbolic: curvature parameter c must be > 0");
  }

  ManifoldKind kind() const override { return ManifoldKind::Hyperboloid; }
  std::string id() const override {
    std::ostringstream s;
    s << "hyperbolic:" << n_ << ":" << c_;
    return s.str();
  }
  int dim() const override { return n_; }
  CurvatureBounds curvature() const override { return {-c_, -c_}; }

  double mdot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return -a[0] * b[0] + a.tail(n_).dot(b.tail(n_));
  }

  Point exp(const Point& x, const Tangent& v) const override {
    require_base(x, v, "exp");
    if (!all_finite(v.vec)) fail("exp: non-finite tangent");
    const double sq = std::max(0.0, mdot(v.vec, v.vec));
    const double t = std::sqrt(sq);  // geodesic length
    if (t == 0.0) return x;
    const double th = std::sqrt(c_) * t;
    // cosh(th) x + sinh(th)/(sqrt(c) t) v
    Eigen::VectorXd out = std::cosh(th) * x.data + (std::sinh(th) / (std::sqrt(c_) * t)) * v.vec;
    Point p{kind(), std::move(out)};
    renormalize(p);
    return p;
  }

  Tangent log(const Point& x, const Point& y) const override {
    require_kind(x, "log");
    require_kind(y, "log");
    const double d = distance(x, y);
    if (d == 0.0) return zero_tangent(x);
    // u = y + c <x,y>_M x is the tangential component of y at x
    Eigen::VectorXd u = y.data + c_ * mdot(x.data, y.data) * x.data;
    const double th = std::sqrt(c_) * d;
    // ||u||_M = sinh(th)/sqrt(c); log = d * u/||u||
    const double un = std::sinh(th) / std::sqrt(c_);
    if (un == 0.0) return zero_tangent(x);
    return Tangent{x, (d / un) * u};
  }

  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override {
    require_base(x, v, "transport");
    require_kind(y, "transport");
    const double xy = mdot(x.data, y.data);
    const double denom = 1.0 - c_ * xy;  // = 1 + cosh(theta) >= 2
    Eigen::VectorXd w = v.vec + (c_ * mdot(y.data, v.vec) / denom) * (x.data + y.data);
    return Tangent{y, std::move(w)};
  }

  double distance(const Point& x, const Point& y) const override {
    // Cancellation-free form: <y-x, y-x>_M = (4/c) sinh^2(theta/2)
    const Eigen::VectorXd diff = y.data - x.data;
    const double q = std::max(0.0, mdot(diff, diff));
    return (2.0 / std::sqrt(c_)) * std::asinh(0.5 * std::sqrt(c_ * q));
  }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const override {
    require_base(x, u, "inner");
    require_base(x, v, "inner");
    return mdot(u.vec, v.vec);
  }

  Point base_point() const override {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_ + 1);
    b[0] = 1.0 / std::sqrt(c_);
    return Point{kind(), std::move(b)};
  }

  void check_point(const Point& p) const override {
    require_kind(p, "check_point");
    if (p.data.size() != n_ + 1) fail("hyperbolic: wrong coordinate count");
    if (!all_finite(p.data)) fail("hyperbolic: non-finite point");
    const double s = mdot(p.data, p.data);
    // the Minkowski form loses ~eps * ||p||^2 to cancellation, so the check
    // cannot be tighter than that measurement floor
    const double tol = kHyperboloidTol * (1.0 + c_ * p.data.squaredNorm());
    if (std::abs(s + 1.0 / c_) > tol) fail("hyperbolic: point off the sheet");
    if (!(p.data[0] > 0.0)) fail("hyperbolic: x0 must be positive");
  }

  Tangent random_tangent(const Point& x, Rng& rng, double scale) const override {
    Eigen::VectorXd g(n_ + 1);
    for (int i = 0; i <= n_; ++i) g[i] = scale * rng.normal();
    // project onto the tangent space at x
    g += c_ * mdot(x.data, g) * x.data;
    return Tangent{x, g};
  }

private:
  void renormalize(Point& p) const {
    const double s = -c_ * mdot(p.data, p.data);  // should be 1
    if (!(s > 0.0)) fail("hyperbolic: degenerate point after exp");
    p.data /= std::sqrt(s);
    if (!(p.data[0] > 0.0)) fail("hyperbolic: left the upper sheet");
  }

  int n_;
  double c_;
};

// ---------------------------------------------------------------------------
// SPD(n) with the affine-invariant metric <U,V>_A = tr(A^-1 U A^-1 V).
// Sectional curvature lies in [-1/2, 0].

class SpdManifold final : public Manifold {
public:
  explicit SpdManifold(int n) : n_(n) {
    if (n < 1) fail("spd: dimension must be >= 1");
  }

  ManifoldKind kind() const override { return ManifoldKind::Spd; }
  std::string id() const override { return "spd:" + std::to_string(n_); }
  int dim() const override { return n_ * (n_ + 1) / 2; }
  CurvatureBounds curvature() const override { return {n_ >= 2 ? -0.5 : 0.0, 0.0}; }

  using Mat = Eigen::MatrixXd;

  Mat unpack(const Eigen::VectorXd& v) const {
    return Eigen::Map<const Mat>(v.data(), n_, n_);
  }
  static Eigen::VectorXd pack(const Mat& m) {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
  }
  static Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

  struct Eig {
    Mat q;
    Eigen::VectorXd lam;
  };

  static Eig eigh(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(m));
    if (es.info() != Eigen::Success) fail("spd: eigendecomposition failed");
    return {es.eigenvectors(), es.eigenvalues()};
  }

  static Mat apply_fn(const Eig& e, double (*fn)(double)) {
    Eigen::VectorXd d(e.lam.size());
    for (int i = 0; i < d.size(); ++i) d[i] = fn(std::max(e.lam[i], kEigClamp));
    return e.q * d.asDiagonal() * e.q.transpose();
  }

  static Mat expm_sym(const Mat& s) {
    Eig e = eigh(s);
    Eigen::VectorXd d = e.lam.array().exp();
    return e.q * d.asDiagonal() * e.q.transpose();
  }

  static Mat logm_spd(const Mat& s) {
    return apply_fn(eigh(s), [](double x) { return std::log(x); });
  }

  static void sqrt_pair(const Mat& s, Mat& rt, Mat& irt) {
    Eig e = eigh(s);
    Eigen::VectorXd d(e.lam.size());
    for (int i = 0; i < d.size(); ++i) d[i] = std::sqrt(std::max(e.lam[i], kEigClamp));
    rt = e.q * d.asDiagonal() * e.q.transpose();
    irt = e.q * d.cwiseInverse().asDiagonal() * e.q.transpose();
  }

  Point exp(const Point& x, const Tangent& v) const override {
    require_base(x, v, "exp");
    if (!all_finite(v.vec)) fail("exp: non-finite tangent");
    Mat rt, irt;
    sqrt_pair(unpack(x.data), rt, irt);
    const Mat s = sym(irt * unpack(v.vec) * irt);
    return Point{kind(), pack(sym(rt * expm_sym(s) * rt))};
  }

  Tangent log(const Point& x, const Point& y) const override {
    require_kind(x, "log");
    require_kind(y, "log");
    Mat rt, irt;
    sqrt_pair(unpack(x.data), rt, irt);
    const Mat s = sym(irt * unpack(y.data) * irt);
    return Tangent{x, pack(sym(rt * logm_spd(s) * rt))};
  }

  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override {
    require_base(x, v, "transport");
    require_kind(y, "transport");
    // E = (Y X^-1)^{1/2} = X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{-1/2}
    Mat rt, irt;
    sqrt_pair(unpack(x.data), rt, irt);
    Mat srt, sirt;
    sqrt_pair(sym(irt * unpack(y.data) * irt), srt, sirt);
    const Mat e = rt * srt * irt;
    return Tangent{y, pack(sym(e * unpack(v.vec) * e.transpose()))};
  }

  double distance(const Point& x, const Point& y) const override {
    Mat rt, irt;
    sqrt_pair(unpack(x.data), rt, irt);
    Eig e = eigh(sym(irt * unpack(y.data) * irt));
    double d2 = 0.0;
    for (int i = 0; i < e.lam.size(); ++i) {
      const double l = std::log(std::max(e.lam[i], kEigClamp));
      d2 += l * l;
    }
    return std::sqrt(d2);
  }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const override {
    require_base(x, u, "inner");
    require_base(x, v, "inner");
    const Mat xi = unpack(x.data).inverse();
    return (xi * unpack(u.vec) * xi * unpack(v.vec)).trace();
  }

  Point base_point() const override { return Point{kind(), pack(Mat::Identity(n_, n_))}; }

  void check_point(const Point& p) const override {
    require_kind(p, "check_point");
    if (p.data.size() != n_ * n_) fail("spd: wrong coordinate count");
    if (!all_finite(p.data)) fail("spd: non-finite point");
    const Mat m = unpack(p.data);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSpdSymTol * (1.0 + m.cwiseAbs().maxCoeff()))
      fail("spd: matrix not symmetric");
    Eig e = eigh(m);
    if (e.lam.minCoeff() <= 0.0) fail("spd: matrix not positive definite");
  }

  Tangent random_tangent(const Point& x, Rng& rng, double scale) const override {
    Mat g(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) g(i, j) = rng.normal();
    return Tangent{x, pack(scale * sym(g))};
  }

private:
  int n_;
};

}  // namespace

// ---------------------------------------------------------------------------

void Manifold::require_kind(const Point& p, const char* who) const {
  if (p.kind != kind()) fail(std::string(who) + ": point from a different manifold");
}

void Manifold::require_base(const Point& x, const Tangent& v, const char* who) const {
  require_kind(x, who);
  if (!v.base.same_as(x)) fail(std::string(who) + ": tangent base point mismatch");
}

Point Manifold::random_point(Rng& rng, double spread) const {
  const Point b = base_point();
  if (spread == 0.0) return b;
  return exp(b, random_tangent(b, rng, spread));
}

Point Manifold::random_point(std::uint64_t seed, double spread) const {
  Rng rng(seed);
  return random_point(rng, spread);
}

Tangent Manifold::random_tangent(const Point& x, std::uint64_t seed, double scale) const {
  Rng rng(seed);
  return random_tangent(x, rng, scale);
}

ManifoldPtr make_euclidean(int n) { return std::make_shared<EuclideanManifold>(n); }
ManifoldPtr make_hyperboloid(int n, double c) { return std::make_shared<HyperboloidManifold>(n, c); }
ManifoldPtr make_spd(int n) { return std::make_shared<SpdManifold>(n); }

ManifoldPtr make_manifold(const std::string& id) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : id) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  auto to_int = [&](const std::string& s) {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad manifold id: " + id);
    return v;
  };
  auto to_double = [&](const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad manifold id: " + id);
    return v;
  };
  if (parts.size() == 2 && parts[0] == "euclidean") return make_euclidean(to_int(parts[1]));
  if (parts.size() == 3 && parts[0] == "hyperbolic")
    return make_hyperboloid(to_int(parts[1]), to_double(parts[2]));
  if (parts.size() == 2 && parts[0] == "spd") return make_spd(to_int(parts[1]));
  throw std::invalid_argument("unknown manifold id: " + id +
                              " (expected euclidean:n, hyperbolic:n:c, spd:n)");
}

// ---------------------------------------------------------------------------

Tangent t_add(const Tangent& a, const Tangent& b) {
  if (!a.base.same_as(b.base)) fail("t_add: tangent base point mismatch");
  return Tangent{a.base, a.vec + b.vec};
}

Tangent t_sub(const Tangent& a, const Tangent& b) {
  if (!a.base.same_as(b.base)) fail("t_sub: tangent base point mismatch");
  return Tangent{a.base, a.vec - b.vec};
}

Tangent t_scale(const Tangent& a, double s) { return Tangent{a.base, s * a.vec}; }

namespace {
double xcoth(double x) {
  if (x < 1e-4) return 1.0 + x * x / 3.0;
  return x / std::tanh(x);
}
double xcot(double x) {
  if (x < 1e-4) return 1.0 - x * x / 3.0;
  return x / std::tan(x);
}
}  // namespace

double zeta(double D, double kmin) {
  if (D < 0.0) throw std::invalid_argument("zeta: D must be >= 0");
  if (kmin > 0.0) return 1.0;
  return xcoth(D * std::sqrt(std::abs(kmin)));
}

double delta(double D, double kmax) {
  if (D < 0.0) throw std::invalid_argument("delta: D must be >= 0");
  if (kmax <= 0.0) return 1.0;
  const double x = D * std::sqrt(kmax);
  if (x >= 3.14159265358979323846) throw std::invalid_argument("delta: D sqrt(kmax) must be < pi");
  return xcot(x);
}

Point metric_project_ball(const Manifold& M, const GeodesicBall& ball, const Point& y) {
  const double d = M.distance(ball.center, y);
  if (d <= ball.radius) return y;
  Tangent dir = M.log(ball.center, y);
  return M.exp(ball.center, t_scale(dir, ball.radius / d));
}

Tangent tangent_ball_project(const Manifold& M, const Tangent& v, double r) {
  if (r < 0.0) throw std::invalid_argument("tangent_ball_project: radius must be >= 0");
  const double n = M.norm(v.base, v);
  if (n <= r) return v;
  return t_scale(v, r / n);
}

}  // namespace riemacon
