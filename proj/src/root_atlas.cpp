#include "fneumann/root_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "fneumann/special_functions.hpp"

namespace fneumann {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryRelative = 1e-12;
constexpr double kJitter = 1e-4;
constexpr int kJitterAttempts = 6;
constexpr double kCertifyHalfWidth = 5e-7;
constexpr double kMinBox = 1e-9;

class PhaseTracker {
 public:
  PhaseTracker(const std::function<Complex(Complex)>& fn, const std::function<double(Complex)>& scale)
      : fn_(fn), scale_(scale) {}

  std::size_t samples() const { return samples_; }

  // Total phase change along the rectangle, counter-clockwise, n initial samples per edge.
  double loop(const StripWindow& box, int n) {
    const Complex corners[4] = {{box.re_min, box.im_min},
                                {box.re_max, box.im_min},
                                {box.re_max, box.im_max},
                                {box.re_min, box.im_max}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) total += edge(corners[e], corners[(e + 1) % 4], n);
    return total;
  }

 private:
  const std::function<Complex(Complex)>& fn_;
  const std::function<double(Complex)>& scale_;
  std::size_t samples_ = 0;

  Complex eval(Complex z) {
    ++samples_;
    const Complex v = fn_(z);
    const double m = std::abs(v);
    if (!std::isfinite(m)) throw NumericalError("non-finite value on the contour");
    if (m < kBoundaryRelative * scale_(z)) throw ZeroOnBoundary(z, m);
    return v;
  }

  double edge(Complex a, Complex b, int n) {
    Complex za = a;
    Complex fa = eval(a);
    double total = 0.0;
    for (int k = 1; k <= n; ++k) {
      const Complex zb = a + (b - a) * (static_cast<double>(k) / n);
      const Complex fb = eval(zb);
      total += segment(za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
    return total;
  }

  double segment(Complex za, Complex fa, Complex zb, Complex fb, int depth) {
    const double d = std::arg(fb / fa);
    if (std::abs(d) < 0.5 * kPi) return d;
    // a phase jump that survives 60 halvings can only come from a zero on the path
    if (depth >= 60) throw ZeroOnBoundary(0.5 * (za + zb), std::min(std::abs(fa), std::abs(fb)));
    const Complex zm = 0.5 * (za + zb);
    const Complex fm = eval(zm);
    return segment(za, fa, zm, fm, depth + 1) + segment(zm, fm, zb, fb, depth + 1);
  }
};

int to_winding(double phase) {
  const double w = phase / (2.0 * kPi);
  const double r = std::round(w);
  if (std::abs(w - r) > 0.25) throw NumericalError("phase tracking did not close on a multiple of 2 pi");
  return static_cast<int>(r);
}

// Winding count on exactly this rectangle, with the half-step guard.
WindingReport count_once(const std::function<Complex(Complex)>& fn, const std::function<double(Complex)>& scale,
                         const StripWindow& box) {
  PhaseTracker tracker(fn, scale);
  int n = 8;
  int previous = to_winding(tracker.loop(box, n));
  for (int attempt = 0; attempt < 4; ++attempt) {
    n *= 2;
    const int current = to_winding(tracker.loop(box, n));
    if (current == previous) {
      WindingReport r;
      r.winding = current;
      r.boundary_samples = tracker.samples();
      r.box_used = box;
      return r;
    }
    previous = current;
  }
  throw NumericalError("winding number unstable under boundary refinement");
}

StripWindow shifted(const StripWindow& box, double delta) {
  StripWindow out = box;
  out.re_min += delta;
  out.re_max += delta;
  out.im_min -= delta;
  out.im_max -= delta;
  return out;
}

bool inside_disc(const StripWindow& box, const Disc& d) {
  const Complex corners[4] = {{box.re_min, box.im_min},
                              {box.re_max, box.im_min},
                              {box.re_max, box.im_max},
                              {box.re_min, box.im_max}};
  return std::all_of(std::begin(corners), std::end(corners),
                     [&](Complex c) { return std::abs(c - d.center) < d.radius; });
}

bool meets_disc(const StripWindow& box, const Disc& d) {
  const double x = std::clamp(d.center.real(), box.re_min, box.re_max);
  const double y = std::clamp(d.center.imag(), box.im_min, box.im_max);
  return std::abs(Complex(x, y) - d.center) < d.radius;
}

bool in_exclusion(const StripWindow& window, Complex z) {
  return std::any_of(window.exclusions.begin(), window.exclusions.end(),
                     [&](const Disc& d) { return std::abs(z - d.center) < d.radius; });
}

std::optional<Complex> newton(const Order& order, Complex z) {
  try {
    for (int it = 0; it < 60; ++it) {
      const Complex step = F_entire(order, z) / dF_dbeta(order, z);
      if (!std::isfinite(std::abs(step))) return std::nullopt;
      z -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) break;
    }
    if (std::abs(F_entire(order, z)) <= 1e-10 * F_scale(order, z)) return z;
  } catch (const NumericalError&) {
  }
  return std::nullopt;
}

StripWindow centred_box(Complex z, double half) {
  StripWindow b;
  b.re_min = z.real() - half;
  b.re_max = z.real() + half;
  b.im_min = z.imag() - half;
  b.im_max = z.imag() + half;
  return b;
}

double gamma_real(double x) { return std::tgamma(x); }

}  // namespace

bool StripWindow::contains(Complex z, double slack) const {
  return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
         z.imag() <= im_max + slack;
}

void StripWindow::validate() const {
  if (!(re_min < re_max)) throw std::invalid_argument("window needs re_min < re_max");
  if (!(im_min < im_max)) throw std::invalid_argument("window needs im_min < im_max");
}

void StripWindow::validate(const Order& order) const {
  validate();
  if (!(re_max <= 2.0 * order.s() + 1.0 - 1e-6))
    throw std::invalid_argument("window reaches the poles of F at 2s + 1 + j");
  if (!(re_min > -1.0)) throw std::invalid_argument("window reaches the poles of F at -1 - j");
}

double F_scale(const Order& order, Complex beta) {
  const double s = order.s();
  const Complex first = (2.0 * s - beta) * sin_pi(s - beta);
  const Complex second = std::sin(kPi * s) *
                         std::exp(complex_log_gamma(2.0 * s + 1.0 - beta) + complex_log_gamma(beta + 1.0) -
                                  std::lgamma(2.0 * s));
  return std::abs(first) + std::abs(second);
}

std::vector<Disc> trivial_exclusions(const Order& order) {
  std::vector<Disc> out{{Complex(0.0, 0.0), 0.02}};
  const double other = 2.0 * order.s() - 1.0;
  if (std::abs(other) > 1e-12) out.push_back({Complex(other, 0.0), 0.02});
  return out;
}

bool is_trivial_zero(const Order& order, Complex beta, double radius) {
  return std::abs(beta) < radius || std::abs(beta - (2.0 * order.s() - 1.0)) < radius;
}

WindingReport winding_report(const std::function<Complex(Complex)>& fn, const std::function<double(Complex)>& scale,
                             const StripWindow& box) {
  box.validate();
  const double delta = kJitter * std::max(box.width(), box.height());
  for (int k = 0;; ++k) {
    try {
      WindingReport r = count_once(fn, scale, shifted(box, k * delta));
      r.jitter_steps = k;
      return r;
    } catch (const ZeroOnBoundary&) {
      if (k + 1 >= kJitterAttempts) throw;
    }
  }
}

WindingReport winding_report(const Order& order, const StripWindow& box) {
  box.validate(order);
  const std::function<Complex(Complex)> fn = [&](Complex z) { return F_entire(order, z); };
  const std::function<double(Complex)> scale = [&](Complex z) { return F_scale(order, z); };
  return winding_report(fn, scale, box);
}

int winding_number(const Order& order, const StripWindow& box) { return winding_report(order, box).winding; }

std::vector<ZeroRecord> isolate_zeros(const Order& order, const StripWindow& window, std::size_t max_boxes) {
  window.validate(order);
  const std::function<Complex(Complex)> fn = [&](Complex z) { return F_entire(order, z); };
  const std::function<double(Complex)> scale = [&](Complex z) { return F_scale(order, z); };

  struct Item {
    StripWindow box;
    int winding;
  };
  const WindingReport top = winding_report(fn, scale, window);
  std::vector<Item> stack{{top.box_used, top.winding}};
  std::vector<ZeroRecord> found;
  std::size_t boxes = 0;

  auto excluded = [&](const StripWindow& b) {
    return std::any_of(window.exclusions.begin(), window.exclusions.end(),
                       [&](const Disc& d) { return inside_disc(b, d); });
  };
  auto touches_exclusion = [&](const StripWindow& b) {
    return std::any_of(window.exclusions.begin(), window.exclusions.end(),
                       [&](const Disc& d) { return meets_disc(b, d); });
  };

  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    if (item.winding == 0 || excluded(item.box)) continue;
    if (++boxes > max_boxes) throw SubdivisionBudgetExceeded("zero isolation exceeded its box budget");
    const StripWindow& box = item.box;
    const Complex centre(0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max));

    if (item.winding == 1 && !touches_exclusion(box)) {
      if (const auto root = newton(order, centre); root && box.contains(*root)) {
        const double half = std::min(kCertifyHalfWidth, 0.25 * std::min(box.width(), box.height()));
        try {
          const WindingReport cert = count_once(fn, scale, centred_box(*root, half));
          if (cert.winding == 1) {
            ZeroRecord z;
            z.beta = *root;
            z.multiplicity = 1;
            z.newton_residual = std::abs(F_entire(order, *root));
            z.enclosing_box = cert.box_used;
            z.certified = true;
            found.push_back(z);
            continue;
          }
        } catch (const ZeroOnBoundary&) {
        }
      }
    }

    if (std::max(box.width(), box.height()) < kMinBox) {
      ZeroRecord z;
      z.beta = newton(order, centre).value_or(centre);
      z.multiplicity = item.winding;
      z.newton_residual = std::abs(F_entire(order, z.beta));
      z.enclosing_box = box;
      z.certified = false;
      found.push_back(z);
      continue;
    }

    // Split through the centre, nudging the cut lines off any zero they hit.
    const double delta = kJitter * std::max(box.width(), box.height());
    bool split = false;
    for (int k = 0; k < kJitterAttempts && !split; ++k) {
      const double xm = centre.real() + k * delta;
      const double ym = centre.imag() - k * delta;
      StripWindow quads[4];
      for (auto& q : quads) q = box;
      quads[0].re_max = xm;
      quads[0].im_max = ym;
      quads[1].re_min = xm;
      quads[1].im_max = ym;
      quads[2].re_min = xm;
      quads[2].im_min = ym;
      quads[3].re_max = xm;
      quads[3].im_min = ym;
      try {
        int windings[4];
        int sum = 0;
        for (int i = 0; i < 4; ++i) {
          windings[i] = count_once(fn, scale, quads[i]).winding;
          sum += windings[i];
        }
        if (sum != item.winding) throw NumericalError("winding numbers of a subdivision do not add up");
        for (int i = 3; i >= 0; --i)
          if (windings[i] != 0) stack.push_back({quads[i], windings[i]});
        split = true;
      } catch (const ZeroOnBoundary&) {
      }
    }
    if (!split) throw ZeroOnBoundary(centre, 0.0);
  }

  std::vector<ZeroRecord> out;
  for (auto& z : found) {
    if (in_exclusion(window, z.beta)) continue;
    if (std::abs(z.beta.imag()) <= 1e-12) z.beta.imag(0.0);
    // below the real axis only through the jitter; the conjugate is in the window
    if (z.beta.imag() < 0.0) continue;
    out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    if (a.beta.real() != b.beta.real()) return a.beta.real() < b.beta.real();
    return a.beta.imag() < b.beta.imag();
  });
  return out;
}

std::vector<double> real_zero_scan(const Order& order, double lo, double hi, std::size_t samples) {
  if (!(lo < hi)) throw std::invalid_argument("real_zero_scan needs lo < hi");
  if (!(hi <= 2.0 * order.s() + 1.0 - 1e-6) || !(lo > -1.0))
    throw std::invalid_argument("real_zero_scan interval reaches the poles of F");
  if (samples < 2) samples = 2;
  auto F = [&](double x) { return F_entire(order, Complex(x, 0.0)).real(); };
  std::vector<double> roots;
  double xa = lo;
  double fa = F(xa);
  if (fa == 0.0) roots.push_back(xa);
  for (std::size_t k = 1; k < samples; ++k) {
    const double xb = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double fb = F(xb);
    if (fb == 0.0) {
      roots.push_back(xb);
    } else if (fa != 0.0 && std::signbit(fa) != std::signbit(fb)) {
      double a = xa;
      double b = xb;
      double fl = fa;
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = F(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (std::signbit(fm) == std::signbit(fl)) {
          a = m;
          fl = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    xa = xb;
    fa = fb;
  }
  return roots;
}

double tail_bound_M(const Order& order) { return tail_bound_M(order, 2.0 * order.s() + 0.5); }

double tail_bound_M(const Order& order, double re_max) {
  const double s = order.s();
  if (!(re_max > 0.0 && re_max < 2.0 * s + 1.0)) throw std::invalid_argument("tail_bound_M needs 0 < re_max < 2s + 1");
  // Gamma is log-convex on (0, inf), so the maxima over the interval sit at its ends
  const double a1 = std::max(gamma_real(1.0), gamma_real(1.0 + re_max));
  const double a2 = std::max(gamma_real(2.0 * s + 1.0 - re_max), gamma_real(2.0 * s + 1.0));
  const double g = std::min(1.0, gamma_real(2.0 * s));
  const double sn = std::sin(kPi * s);
  auto holds = [&](double b) { return a1 * a2 / (g * b) < std::expm1(kPi * b) / (2.0 * sn); };
  double lo = 1e-12;
  double hi = 1.0;
  while (!holds(hi)) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double m = 0.5 * (lo + hi);
    (holds(m) ? hi : lo) = m;
  }
  return hi;
}

B0Result compute_B0(const Order& order) {
  const double s = order.s();
  StripWindow w;
  w.re_min = std::max(0.0, 2.0 * s - 1.0) + 1e-4;
  w.re_max = std::min(s + 1.0, 2.0 * s + 0.5) + 0.05;
  w.im_min = 0.0;
  const double M = tail_bound_M(order, w.re_max);
  w.im_max = M;
  w.exclusions = trivial_exclusions(order);

  std::vector<ZeroRecord> zeros = isolate_zeros(order, w);
  for (double x : real_zero_scan(order, w.re_min, w.re_max)) {
    if (is_trivial_zero(order, x)) continue;
    const bool known = std::any_of(zeros.begin(), zeros.end(),
                                   [&](const ZeroRecord& z) { return std::abs(z.beta - x) < 1e-7; });
    if (known) continue;
    ZeroRecord z;
    z.beta = x;
    z.newton_residual = std::abs(F_entire(order, x));
    z.enclosing_box = centred_box(x, kCertifyHalfWidth);
    z.certified = false;
    zeros.push_back(z);
  }
  if (zeros.empty()) throw NoZeroFound("no nontrivial zero in the B0 search window");
  const auto best = std::min_element(zeros.begin(), zeros.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    if (a.beta.real() != b.beta.real()) return a.beta.real() < b.beta.real();
    return a.beta.imag() < b.beta.imag();
  });

  B0Result r;
  r.s = s;
  r.witness = *best;
  r.B0 = best->beta.real();
  r.real_zero = best->beta.imag() == 0.0;
  r.lower_theory = std::min(2.0 * s, s + 0.5);
  r.upper_theory = std::min(2.0 * s + 0.5, s + 1.0);
  r.within_theory = r.B0 > r.lower_theory && r.B0 < r.upper_theory;
  r.tail_M = M;
  return r;
}

Complex asymptotic_estimate(const Order& order, Endpoint endpoint) {
  const double s = order.s();
  if (endpoint == Endpoint::zero) {
    if (s > 0.1) throw std::invalid_argument("the s -> 0 expansion is used only for s <= 0.1");
    return 3.0 * s;
  }
  if (s < 0.9) throw std::invalid_argument("the s -> 1 expansion is used only for s >= 0.9");
  return Complex(2.0 - 3.0 * (1.0 - s), std::sqrt(2.0 * (1.0 - s)));
}

Complex solve_s_half_special() {
  auto h = [](Complex b) { return sin_pi(2.0 * b) - 2.0 * kPi * b; };
  auto dh = [](Complex b) { return 2.0 * kPi * (cos_pi(2.0 * b) - 1.0); };
  // coarse scan; the seed nearest to a root has the smallest |h|
  Complex seed{};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 12; ++j) {
      const Complex b(1.0 + 0.025 * i, 0.2 + 0.05 * j);
      if (const double m = std::abs(h(b)); m < best) {
        best = m;
        seed = b;
      }
    }
  Complex b = seed;
  for (int it = 0; it < 50; ++it) {
    const Complex step = h(b) / dh(b);
    b -= step;
    if (std::abs(step) <= 1e-15 * std::abs(b)) break;
  }
  if (!(std::abs(h(b)) <= 1e-10) || !(b.imag() > 0.0) || b.real() < 1.0 || b.real() > 1.5)
    throw NewtonDiverged("sin(2 pi beta) = 2 pi beta: Newton left the search rectangle");
  return b;
}

}  // namespace fneumann
