#include "dowker/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace dowker {

namespace {

struct FinitePoint {
  double birth, death;
};

std::vector<FinitePoint> finite_points(const PersistenceDiagram& d,
                                       const WassersteinOptions& opts) {
  std::vector<FinitePoint> out;
  for (const PdPoint& p : d.points) {
    double death = p.death ? *p.death : opts.inf_cap;
    if (opts.drop_zero && death == p.birth) continue;
    out.push_back({p.birth, death});
  }
  return out;
}

// Exact min-cost perfect assignment on a square matrix (Jonker-Volgenant
// style potentials, O(n^3)). Returns the column matched to each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

WassersteinResult wasserstein2(const PersistenceDiagram& a, const PersistenceDiagram& b,
                               const WassersteinOptions& opts) {
  std::vector<FinitePoint> pa = finite_points(a, opts);
  std::vector<FinitePoint> pb = finite_points(b, opts);

  // Canonical argument order: both call directions run the identical
  // computation, making the distance exactly symmetric even when several
  // optimal matchings exist.
  auto key = [](const std::vector<FinitePoint>& pts) {
    std::vector<std::pair<double, double>> k;
    k.reserve(pts.size());
    for (const FinitePoint& p : pts) k.emplace_back(p.birth, p.death);
    std::sort(k.begin(), k.end());
    return k;
  };
  const bool swapped = key(pb) < key(pa);
  if (swapped) std::swap(pa, pb);

  const int na = static_cast<int>(pa.size());
  const int nb = static_cast<int>(pb.size());

  WassersteinResult res;
  res.match_a.assign(pa.size(), -1);
  res.match_b.assign(pb.size(), -1);
  if (na == 0 && nb == 0) return res;

  auto diag_cost = [](const FinitePoint& p) {
    double h = (p.death - p.birth) / 2.0;
    return 2.0 * h * h;  // squared distance to the orthogonal projection
  };
  const int n = na + nb;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < na && j < nb) {
        double db = pa[i].birth - pb[j].birth;
        double dd = pa[i].death - pb[j].death;
        cost[i][j] = db * db + dd * dd;
      } else if (i < na) {
        cost[i][j] = diag_cost(pa[i]);
      } else if (j < nb) {
        cost[i][j] = diag_cost(pb[j]);
      }
    }
  std::vector<int> assign = solve_assignment(cost);

  std::vector<double> matched;
  matched.reserve(pa.size() + pb.size());
  for (int i = 0; i < n; ++i) {
    int j = assign[i];
    if (i < na && j < nb) {
      res.match_a[i] = j;
      res.match_b[j] = i;
    }
    if (cost[i][j] != 0.0) matched.push_back(cost[i][j]);
  }
  std::sort(matched.begin(), matched.end());
  double total = 0.0;
  for (double c : matched) total += c;
  res.squared = total;
  res.distance = std::sqrt(total);
  if (swapped) std::swap(res.match_a, res.match_b);
  return res;
}

PersistenceImage persistence_image(const PersistenceDiagram& d, const PiConfig& cfg) {
  if (cfg.rows <= 0 || cfg.cols <= 0)
    throw std::invalid_argument("persistence_image: grid must be positive");
  if (cfg.sigma <= 0.0) throw std::invalid_argument("persistence_image: sigma must be positive");
  PersistenceImage img;
  img.rows = cfg.rows;
  img.cols = cfg.cols;
  img.values.assign(static_cast<std::size_t>(cfg.rows) * cfg.cols, 0.0);

  const double bw = (cfg.birth_max - cfg.birth_min) / cfg.cols;
  const double pw = (cfg.pers_max - cfg.pers_min) / cfg.rows;
  const double inv = 1.0 / (cfg.sigma * std::sqrt(2.0));
  auto cdf_between = [&](double lo, double hi, double mean) {
    return 0.5 * (std::erf((hi - mean) * inv) - std::erf((lo - mean) * inv));
  };

  for (const PdPoint& p : d.points) {
    double death = p.death ? *p.death : cfg.inf_cap;
    double pers = death - p.birth;
    if (pers <= 0.0) continue;  // linear weight vanishes at the diagonal
    std::vector<double> col_mass(cfg.cols), row_mass(cfg.rows);
    for (int c = 0; c < cfg.cols; ++c)
      col_mass[c] = cdf_between(cfg.birth_min + c * bw, cfg.birth_min + (c + 1) * bw, p.birth);
    for (int r = 0; r < cfg.rows; ++r)
      row_mass[r] = cdf_between(cfg.pers_min + r * pw, cfg.pers_min + (r + 1) * pw, pers);
    for (int r = 0; r < cfg.rows; ++r)
      for (int c = 0; c < cfg.cols; ++c)
        img.values[static_cast<std::size_t>(r) * cfg.cols + c] +=
            pers * row_mass[r] * col_mass[c];
  }
  return img;
}

double pie_distance(const PersistenceImage& a, const PersistenceImage& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("pie_distance: image shapes differ");
  double total = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double diff = a.values[i] - b.values[i];
    total += diff * diff;
  }
  return total;
}

std::string image_csv(const PersistenceImage& img) {
  std::string out;
  char buf[64];
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", img.at(r, c));
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dowker
