#include "decafs/pwq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "decafs/error.hpp"

namespace decafs::pwq {
namespace {

// Coefficient differences below this (relative to the operands) count as zero.
constexpr double kCoefTol = 1e-12;

double rel_scale(double x, double y) { return std::max({1.0, std::abs(x), std::abs(y)}); }

// p - q with coefficients that vanish up to rounding set to exactly zero.
Quadratic reduced_difference(const Quadratic& p, const Quadratic& q) {
  Quadratic d = p - q;
  if (std::abs(d.a) <= kCoefTol * rel_scale(p.a, q.a)) d.a = 0.0;
  if (d.a == 0.0 && std::abs(d.b) <= kCoefTol * rel_scale(p.b, q.b)) d.b = 0.0;
  if (d.a == 0.0 && d.b == 0.0 && std::abs(d.c) <= kCoefTol * rel_scale(p.c, q.c)) d.c = 0.0;
  return d;
}

bool nearly_equal(const Quadratic& p, const Quadratic& q) {
  const Quadratic d = reduced_difference(p, q);
  return d.a == 0.0 && d.b == 0.0 && d.c == 0.0;
}

// Sorted real roots of d (degree taken from the nonzero coefficients).
int real_roots(const Quadratic& d, std::array<double, 2>& out) {
  if (d.a != 0.0) {
    const double disc = d.b * d.b - 4.0 * d.a * d.c;
    if (disc < 0.0) return 0;
    const double sq = std::sqrt(disc);
    const double half = -0.5 * (d.b + std::copysign(sq, d.b));
    double r1 = half / d.a;
    double r2 = half != 0.0 ? d.c / half : r1;
    if (r1 > r2) std::swap(r1, r2);
    out = {r1, r2};
    return 2;
  }
  if (d.b != 0.0) {
    out[0] = -d.c / d.b;
    return 1;
  }
  return 0;
}

// A point strictly inside (lo, hi); either end may be infinite.
double sample_point(double lo, double hi) {
  if (std::isinf(lo) && std::isinf(hi)) return 0.0;
  if (std::isinf(lo)) return hi - std::max(1.0, std::abs(hi));
  if (std::isinf(hi)) return lo + std::max(1.0, std::abs(lo));
  return lo + 0.5 * (hi - lo);
}

// Where `next` starts to undercut `top` when moving right: the point x with
// next(x) = top(x) and next < top just to the right of x. -inf when next is
// below top everywhere, +inf when it never gets below.
double undercut_point(const Quadratic& next, const Quadratic& top) {
  const Quadratic d = reduced_difference(next, top);
  if (d.a == 0.0) {
    if (d.b == 0.0) return d.c < 0.0 ? -kInf : kInf;
    return d.b < 0.0 ? -d.c / d.b : kInf;
  }
  std::array<double, 2> r{};
  if (real_roots(d, r) == 0 || r[0] == r[1]) return d.a > 0.0 ? kInf : -kInf;
  return d.a > 0.0 ? r[0] : r[1];
}

struct Candidate {
  double x;
  double value;
  bool flat;
};

// Minimum of q over the closure of [lo, hi).
Candidate piece_minimum(const Quadratic& q, double lo, double hi) {
  if (q.a > 0.0) {
    const double x = std::clamp(-q.b / (2.0 * q.a), lo, hi);
    return {x, q(x), false};
  }
  if (q.a == 0.0 && q.b == 0.0) return {lo, q.c, true};
  if (q.a == 0.0) {
    const double x = q.b > 0.0 ? lo : hi;
    if (std::isinf(x)) throw StructuralError("piecewise quadratic is unbounded below");
    return {x, q(x), false};
  }
  if (std::isinf(lo) || std::isinf(hi)) {
    throw StructuralError("concave piece on an unbounded interval");
  }
  return q(lo) <= q(hi) ? Candidate{lo, q(lo), false} : Candidate{hi, q(hi), false};
}

struct BestPiece {
  std::size_t index;
  Candidate at;
};

BestPiece best_piece(const PiecewiseQuadratic& f) {
  BestPiece best{0, piece_minimum(f[0].q, f.left_bound(0), f.right_bound(0))};
  for (std::size_t i = 1; i < f.size(); ++i) {
    const Candidate c = piece_minimum(f[i].q, f.left_bound(i), f.right_bound(i));
    if (c.value < best.at.value) best = {i, c};
  }
  return best;
}

// Drops empty intervals and fuses neighbours carrying the same quadratic.
PiecewiseQuadratic assemble(std::vector<Piece> raw) {
  std::vector<Piece> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double next = i + 1 < raw.size() ? raw[i + 1].left : kInf;
    if (!(raw[i].left < next)) continue;
    if (!out.empty() && nearly_equal(out.back().q, raw[i].q)) continue;
    out.push_back(raw[i]);
  }
  if (out.empty()) throw StructuralError("piecewise quadratic lost all pieces");
  out.front().left = -kInf;
  return PiecewiseQuadratic::from_pieces(std::move(out));
}

}  // namespace

PiecewiseQuadratic::PiecewiseQuadratic() : pieces_{Piece{}} {}

PiecewiseQuadratic::PiecewiseQuadratic(const Quadratic& q) : pieces_{Piece{q, -kInf}} {}

PiecewiseQuadratic PiecewiseQuadratic::from_pieces(std::vector<Piece> pieces) {
  if (pieces.empty()) throw InvalidParameter("a piecewise quadratic needs at least one piece");
  if (pieces.front().left != -kInf) {
    throw InvalidParameter("the first piece must start at -inf");
  }
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (!(pieces[i].left > pieces[i - 1].left) || std::isinf(pieces[i].left)) {
      throw InvalidParameter("piece bounds must be finite and strictly increasing (piece " +
                             std::to_string(i) + ")");
    }
  }
  PiecewiseQuadratic f;
  f.pieces_ = std::move(pieces);
  return f;
}

std::size_t PiecewiseQuadratic::locate(double x) const {
  const auto it = std::upper_bound(pieces_.begin() + 1, pieces_.end(), x,
                                   [](double v, const Piece& p) { return v < p.left; });
  return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

PiecewiseQuadratic add_quadratic(const PiecewiseQuadratic& f, const Quadratic& q) {
  std::vector<Piece> out(f.pieces().begin(), f.pieces().end());
  for (auto& p : out) p.q = p.q + q;
  return PiecewiseQuadratic::from_pieces(std::move(out));
}

PiecewiseQuadratic min_of_two(const PiecewiseQuadratic& f, const PiecewiseQuadratic& g) {
  struct Tagged {
    Piece piece;
    bool from_f;
    std::size_t index;
  };
  std::vector<Tagged> out;
  out.reserve(f.size() + g.size() + 4);
  auto emit = [&](bool from_f, std::size_t index, double left) {
    if (!out.empty() && out.back().from_f == from_f && out.back().index == index) return;
    const Quadratic& q = from_f ? f[index].q : g[index].q;
    out.push_back({Piece{q, left}, from_f, index});
  };

  std::size_t i = 0;
  std::size_t j = 0;
  double lo = -kInf;
  while (true) {
    const double rf = f.right_bound(i);
    const double rg = g.right_bound(j);
    const double hi = std::min(rf, rg);
    const Quadratic d = reduced_difference(f[i].q, g[j].q);

    std::array<double, 4> cuts{};
    std::size_t ncuts = 0;
    cuts[ncuts++] = lo;
    std::array<double, 2> roots{};
    const int nroots = real_roots(d, roots);
    for (int k = 0; k < nroots; ++k) {
      if (roots[k] > lo && roots[k] < hi) cuts[ncuts++] = roots[k];
    }
    cuts[ncuts++] = hi;
    for (std::size_t k = 0; k + 1 < ncuts; ++k) {
      if (!(cuts[k] < cuts[k + 1])) continue;
      const bool take_f = d(sample_point(cuts[k], cuts[k + 1])) <= 0.0;
      emit(take_f, take_f ? i : j, cuts[k]);
    }

    if (std::isinf(hi)) break;
    if (rf == hi) ++i;
    if (rg == hi) ++j;
    lo = hi;
  }

  std::vector<Piece> pieces;
  pieces.reserve(out.size());
  for (const auto& t : out) pieces.push_back(t.piece);
  return assemble(std::move(pieces));
}

Quadratic convolve(const Quadratic& q, double omega) {
  if (std::isinf(omega)) return q;
  const double denom = q.a + omega;
  if (denom <= 0.0) return {0.0, 0.0, q.c};
  return {q.a * omega / denom, q.b * omega / denom, q.c - q.b * q.b / (4.0 * denom)};
}

Convolution infimal_convolution_traced(const PiecewiseQuadratic& f, double omega) {
  if (std::isnan(omega) || omega < 0.0) {
    throw InvalidParameter("infimal convolution weight must be >= 0");
  }
  const std::size_t s = f.size();
  if (std::isinf(omega)) {
    std::vector<std::size_t> all(s);
    for (std::size_t i = 0; i < s; ++i) all[i] = i;
    return {f, std::move(all)};
  }
  if (omega == 0.0) {
    const BestPiece best = best_piece(f);
    return {PiecewiseQuadratic(Quadratic{0.0, 0.0, best.at.value}), {best.index}};
  }

  std::vector<Quadratic> transformed(s);
  for (std::size_t i = 0; i < s; ++i) transformed[i] = convolve(f[i].q, omega);

  // Lower envelope of the transformed pieces; survivors keep input order.
  std::vector<std::size_t> stack{0};
  std::vector<double> lefts{-kInf};
  for (std::size_t i = 1; i < s; ++i) {
    while (true) {
      const double x = undercut_point(transformed[i], transformed[stack.back()]);
      if (x == kInf) break;
      if (x <= lefts.back()) {
        stack.pop_back();
        lefts.pop_back();
        if (stack.empty()) {
          stack.push_back(i);
          lefts.push_back(-kInf);
          break;
        }
        continue;
      }
      stack.push_back(i);
      lefts.push_back(x);
      break;
    }
  }

  std::vector<Piece> pieces(stack.size());
  for (std::size_t k = 0; k < stack.size(); ++k) pieces[k] = {transformed[stack[k]], lefts[k]};
  return {PiecewiseQuadratic::from_pieces(std::move(pieces)), std::move(stack)};
}

Minimum global_argmin(const PiecewiseQuadratic& f, SearchBox box) {
  const BestPiece best = best_piece(f);
  double x = best.at.x;
  if (best.at.flat) {
    x = std::max(best.at.x, box.lo);
    if (!(x < f.right_bound(best.index))) x = best.at.x;
  }
  if (!std::isfinite(x)) {
    throw StructuralError("minimum is only approached at infinity; supply a finite search box");
  }
  return {x + 0.0, best.at.value};  // no negative zero
}

double max_knot_gap(const PiecewiseQuadratic& f) {
  double gap = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double d = f.left_bound(i);
    const double right = f[i].q(d);
    gap = std::max(gap, std::abs(f[i - 1].q(d) - right) / (1.0 + std::abs(right)));
  }
  return gap;
}

bool knot_slopes_ok(const PiecewiseQuadratic& f, double tol) {
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double d = f.left_bound(i);
    const double left = f[i - 1].q.derivative(d);
    const double right = f[i].q.derivative(d);
    if (left < right - tol * (1.0 + std::abs(left) + std::abs(right))) return false;
  }
  return true;
}

}  // namespace decafs::pwq
