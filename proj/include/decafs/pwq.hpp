#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace decafs::pwq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// q(x) = a x^2 + b x + c.
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double x) const { return (a * x + b) * x + c; }
  double derivative(double x) const { return 2.0 * a * x + b; }

  Quadratic operator+(const Quadratic& o) const { return {a + o.a, b + o.b, c + o.c}; }
  Quadratic operator-(const Quadratic& o) const { return {a - o.a, b - o.b, c - o.c}; }

  /// scale * (x - center)^2
  static Quadratic centered(double scale, double center) {
    return {scale, -2.0 * scale * center, scale * center * center};
  }

  friend bool operator==(const Quadratic&, const Quadratic&) = default;
};

/// A quadratic active on [left, next piece's left).
struct Piece {
  Quadratic q;
  double left = -kInf;
};

/// Continuous function of one variable stored as an ordered list of
/// quadratics over a partition of the real line into half-open intervals.
///
/// Every function produced by this module is the lower envelope of the
/// (globally extended) quadratics it stores, so at each knot the left
/// derivative is at least the right derivative.
class PiecewiseQuadratic {
 public:
  /// The zero function.
  PiecewiseQuadratic();
  explicit PiecewiseQuadratic(const Quadratic& q);

  /// Throws InvalidParameter unless the first left bound is -inf and the
  /// bounds are strictly increasing and not NaN.
  static PiecewiseQuadratic from_pieces(std::vector<Piece> pieces);

  std::span<const Piece> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  const Piece& operator[](std::size_t i) const { return pieces_[i]; }

  double left_bound(std::size_t i) const { return pieces_[i].left; }
  double right_bound(std::size_t i) const {
    return i + 1 < pieces_.size() ? pieces_[i + 1].left : kInf;
  }

  /// Index of the piece whose interval contains x.
  std::size_t locate(double x) const;
  double operator()(double x) const { return pieces_[locate(x)].q(x); }

 private:
  std::vector<Piece> pieces_;
};

/// Pointwise sum f + q. Bounds are unchanged.
PiecewiseQuadratic add_quadratic(const PiecewiseQuadratic& f, const Quadratic& q);

/// Pointwise minimum. Where f and g tie, the piece of f is kept.
PiecewiseQuadratic min_of_two(const PiecewiseQuadratic& f, const PiecewiseQuadratic& g);

struct Convolution {
  PiecewiseQuadratic function;
  /// Indices of the input pieces whose transforms make up `function`, in order.
  std::vector<std::size_t> survivors;
};

/// theta -> min_u f(u) + omega (u - theta)^2.
///
/// omega = +inf returns f and omega = 0 returns the constant min f. Runs in
/// time linear in the number of pieces. Throws InvalidParameter for
/// negative or NaN omega.
Convolution infimal_convolution_traced(const PiecewiseQuadratic& f, double omega);

inline PiecewiseQuadratic infimal_convolution(const PiecewiseQuadratic& f, double omega) {
  return infimal_convolution_traced(f, omega).function;
}

/// Closed-form convolution of a single quadratic with omega * x^2.
Quadratic convolve(const Quadratic& q, double omega);

struct SearchBox {
  double lo = -kInf;
  double hi = kInf;
};

struct Minimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// Smallest minimiser and the minimum value. When the minimum is attained on
/// a flat stretch the stretch's left end, clamped into `box`, is returned.
/// Throws StructuralError if f is unbounded below or the minimiser cannot be
/// placed at a finite point.
Minimum global_argmin(const PiecewiseQuadratic& f, SearchBox box = {});

/// Largest |left piece - right piece| at an internal knot, relative to
/// 1 + |value|.
double max_knot_gap(const PiecewiseQuadratic& f);

/// True when no internal knot has left derivative < right derivative - tol
/// (tolerance relative to the derivative magnitudes).
bool knot_slopes_ok(const PiecewiseQuadratic& f, double tol = 1e-7);

}  // namespace decafs::pwq
