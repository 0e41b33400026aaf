#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace riemacon {

// Thrown when a caller breaks an API contract (base-point mismatch,
// wrong manifold, point off the manifold by more than the stated tolerance).
class contract_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Thrown when a solver encounters non-finite values mid-run.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ManifoldKind { Euclidean, Hyperboloid, Spd };

/// A point on a manifold. Coordinates are stored flat:
/// Euclidean n-vector, hyperboloid ambient (n+1)-vector in Minkowski
/// coordinates, SPD matrix row-major n*n.
struct Point {
  ManifoldKind kind = ManifoldKind::Euclidean;
  Eigen::VectorXd data;

  bool same_as(const Point& o) const {
    return kind == o.kind && data.size() == o.data.size() && data == o.data;
  }
};

/// A tangent vector attached to its base point. All tangent arithmetic
/// checks base agreement; mixing tangent spaces is the main bookkeeping
/// hazard in this code base.
struct Tangent {
  Point base;
  Eigen::VectorXd vec;
};

struct CurvatureBounds {
  double kmin = 0.0;  // <= kmax <= 0 in this code base
  double kmax = 0.0;
};

// Deterministic RNG with an explicit normal sampler so that seeded results
// are reproducible independent of the C++ standard library implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // in [0,1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {  // Box-Muller, one value per draw pair
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

class Manifold;
using ManifoldPtr = std::shared_ptr<const Manifold>;

/// Hadamard manifold interface: exact exponential maps only.
class Manifold : public std::enable_shared_from_this<Manifold> {
public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const = 0;
  virtual std::string id() const = 0;
  virtual int dim() const = 0;  // intrinsic dimension
  virtual CurvatureBounds curvature() const = 0;

  virtual Point exp(const Point& x, const Tangent& v) const = 0;
  virtual Tangent log(const Point& x, const Point& y) const = 0;
  /// Parallel transport of v from T_x to T_y along the unique geodesic.
  virtual Tangent transport(const Point& x, const Point& y, const Tangent& v) const = 0;
  virtual double distance(const Point& x, const Point& y) const = 0;
  virtual double inner(const Point& x, const Tangent& u, const Tangent& v) const = 0;

  double norm(const Point& x, const Tangent& u) const {
    return std::sqrt(std::max(0.0, inner(x, u, u)));
  }

  /// Canonical base point (origin / apex / identity).
  virtual Point base_point() const = 0;

  /// Validates manifold invariants; throws contract_error on failure.
  virtual void check_point(const Point& p) const = 0;

  virtual Tangent random_tangent(const Point& x, Rng& rng, double scale = 1.0) const = 0;

  Point random_point(Rng& rng, double spread) const;
  Point random_point(std::uint64_t seed, double spread) const;
  Tangent random_tangent(const Point& x, std::uint64_t seed, double scale = 1.0) const;

  Tangent zero_tangent(const Point& x) const {
    return Tangent{x, Eigen::VectorXd::Zero(x.data.size())};
  }

protected:
  void require_kind(const Point& p, const char* who) const;
  void require_base(const Point& x, const Tangent& v, const char* who) const;
};

/// Parses "euclidean:n", "hyperbolic:n:c" (curvature -c), "spd:n".
ManifoldPtr make_manifold(const std::string& id);

ManifoldPtr make_euclidean(int n);
ManifoldPtr make_hyperboloid(int n, double c);
ManifoldPtr make_spd(int n);

// Tangent arithmetic. All operands must share a base point.
Tangent t_add(const Tangent& a, const Tangent& b);
Tangent t_sub(const Tangent& a, const Tangent& b);
Tangent t_scale(const Tangent& a, double s);

/// zeta_D = D sqrt(|kmin|) coth(D sqrt(|kmin|)), the smoothness constant of
/// the half-squared-distance on sets of diameter D. Continuous at 0 via the
/// series x coth x = 1 + x^2/3 - ...
double zeta(double D, double kmin);

/// delta_D: 1 for kmax <= 0, else D sqrt(kmax) cot(D sqrt(kmax)).
double delta(double D, double kmax);

struct GeodesicBall {
  Point center;
  double radius = 0.0;

  double diameter() const { return 2.0 * radius; }
  bool contains(const Manifold& M, const Point& y, double tol = 1e-12) const {
    return M.distance(center, y) <= radius + tol;
  }
};

/// Metric projection onto a geodesic ball: identity inside, radial
/// boundary point outside. Single valued and nonexpansive on Hadamard
/// manifolds.
Point metric_project_ball(const Manifold& M, const GeodesicBall& ball, const Point& y);

/// Euclidean projection of a tangent vector onto the centered ball of
/// radius r in its tangent space.
Tangent tangent_ball_project(const Manifold& M, const Tangent& v, double r);

}  // namespace riemacon
