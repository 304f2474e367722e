#include "monodim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <stdexcept>

#include "monodim/errors.hpp"

namespace monodim {

namespace {

// 15-point Kronrod nodes on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule on the odd-indexed nodes. QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double error;
  double abs_mass;  // Kronrod estimate of the L1 mass on the panel
};

struct PanelWorse {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

// G7/K15 on one panel: Kronrod value, an error estimate with the QUADPACK
// rescaling, and the L1 mass estimate (resabs).
Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double resabs = std::abs(result_kronrod);

  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double fsum = fv1[j] + fv2[j];
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
    result_kronrod += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
  }

  const double mean = result_kronrod * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }

  resabs *= std::abs(half);
  resasc *= std::abs(half);
  result_kronrod *= half;
  result_gauss *= half;

  double err = std::abs(result_kronrod - result_gauss);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50) {
    err = std::max(err, eps50 * resabs);
  }

  return Panel{a, b, result_kronrod, err, resabs};
}

QuadratureResult integrate_impl(const std::function<double(double)>& f,
                                double a, double b,
                                const QuadratureOptions& opts) {
  if (!(b > a)) {
    if (a == b) return {0.0, 0.0, 0};
    throw std::invalid_argument("integrate_adaptive: requires a <= b");
  }

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;

  Panel first = evaluate_panel(f, a, b);
  double total = first.integral;
  double total_error = first.error;
  double total_abs = first.abs_mass;
  int panels = 1;
  heap.push(first);

  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  auto converged = [&] {
    // Relative to the integral magnitude, floored against cancellation; the
    // per-panel error floor eps50 * resabs makes eps50 * total_abs the best
    // certifiable error, so reaching it counts as converged.
    const double scale = std::max(std::abs(total), 1e-3 * total_abs);
    const double target =
        std::max(opts.rel_tol * scale, 2.0 * eps50 * total_abs);
    return total_error <= target;
  };

  while (!converged()) {
    if (panels >= opts.max_panels) {
      throw QuadratureError(
          "integrate_adaptive: panel budget exhausted above tolerance",
          total_error);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Interval at floating-point resolution; accept what we have.
      heap.push(worst);
      break;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_mass + right.abs_mass - worst.abs_mass;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  return {total, total_error, panels};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureOptions& opts) {
  return integrate_impl(f, a, b, opts);
}

QuadratureResult integrate_adaptive_to_infinity(
    const std::function<double(double)>& f, double a,
    const QuadratureOptions& opts) {
  // x = a + u/(1-u) maps u in [0,1) onto [a, inf); dx = du/(1-u)^2.
  auto mapped = [&f, a](double u) {
    const double one_minus = 1.0 - u;
    const double x = a + u / one_minus;
    return f(x) / (one_minus * one_minus);
  };
  return integrate_impl(mapped, 0.0, 1.0, opts);
}

namespace {

double pythag(double a, double b) {
  const double absa = std::abs(a);
  const double absb = std::abs(b);
  if (absa > absb) {
    const double r = absb / absa;
    return absa * std::sqrt(1.0 + r * r);
  }
  if (absb == 0.0) return 0.0;
  const double r = absa / absb;
  return absb * std::sqrt(1.0 + r * r);
}

// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating the
// rotations only on the first row of the eigenvector matrix (all a
// Gauss rule needs). d = diagonal in / eigenvalues out, e = subdiagonal
// (destroyed), z = first-row components in/out.
void tridiagonal_ql_first_row(std::vector<double>& d, std::vector<double>& e,
                              std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iterations = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) {
          break;
        }
      }
      if (m != l) {
        if (++iterations > 50) {
          throw std::runtime_error(
              "gauss_hermite_rule: eigenvalue iteration failed");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool rotation_underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            rotation_underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (rotation_underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

GaussHermiteRule gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: requires n >= 1");
  if (n > kMaxGaussHermiteOrder) {
    // Past this point the extreme-node weights (~exp(-2n)) fall below the
    // double-precision floor, so the rule would silently drop mass.
    throw std::invalid_argument(
        "gauss_hermite_rule: order " + std::to_string(n) +
        " exceeds the double-precision budget of " +
        std::to_string(kMaxGaussHermiteOrder));
  }

  // Golub-Welsch: eigen-decomposition of the Jacobi matrix. For weight
  // exp(-x^2) the diagonal vanishes and the subdiagonal is sqrt(k/2).
  std::vector<double> diag(n, 0.0);
  std::vector<double> sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  std::vector<double> first_row(n, 0.0);
  first_row[0] = 1.0;

  tridiagonal_ql_first_row(diag, sub, first_row);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&diag](int a, int b) { return diag[a] < diag[b]; });

  const double sqrt_pi = std::sqrt(3.14159265358979323846);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = diag[order[i]];
    rule.weights[i] = sqrt_pi * first_row[order[i]] * first_row[order[i]];
  }
  return rule;
}

}  // namespace monodim
