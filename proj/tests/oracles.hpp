/* Copyright 2026 The dynloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// loss, geometry or readout code; the formulas are re-derived with plain
// loops over std::vector so they can serve as independent oracles.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid random_grid(std::mt19937_64& rng, int rows, int cols, double lo = -1.0,
                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Grid g(rows, std::vector<double>(cols));
  for (auto& r : g) {
    for (auto& v : r) v = u(rng);
  }
  return g;
}

inline std::vector<double> random_labels(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> y(n);
  for (auto& v : y) v = u(rng);
  return y;
}

inline double gaussian(double delta, double sigma) {
  return std::exp(-(delta * delta) / (2.0 * sigma * sigma));
}

inline Grid weights(const std::vector<double>& y, double sigma) {
  const int n = static_cast<int>(y.size());
  Grid w(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) w[i][k] = gaussian(y[i] - y[k], sigma);
  }
  return w;
}

// Temperature-scaled cosine similarity of raw rows.
inline Grid cosine_similarity(const Grid& raw, double tau) {
  const int n = static_cast<int>(raw.size());
  std::vector<double> norms(n);
  for (int i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double v : raw[i]) sq += v * v;
    norms[i] = std::max(std::sqrt(sq), 1e-12);
  }
  Grid s(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < raw[i].size(); ++j) dot += raw[i][j] * raw[k][j];
      s[i][k] = dot / (norms[i] * norms[k]) / tau;
    }
  }
  return s;
}

inline std::vector<std::vector<int>> full_neighbors(int n) {
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k != i) out[i].push_back(k);
    }
  }
  return out;
}

// count nearest by Manhattan distance between rows of `points`, index tie-break.
inline std::vector<std::vector<int>> manhattan_neighbors(const Grid& points, int count) {
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double d = 0.0;
      for (std::size_t j = 0; j < points[i].size(); ++j) d += std::abs(points[i][j] - points[k][j]);
      cand.push_back({d, k});
    }
    std::sort(cand.begin(), cand.end());
    for (int c = 0; c < count; ++c) out[i].push_back(cand[c].second);
  }
  return out;
}

inline Grid unit_rows(const Grid& raw) {
  Grid out = raw;
  for (auto& r : out) {
    double sq = 0.0;
    for (double v : r) sq += v * v;
    const double norm = std::max(std::sqrt(sq), 1e-12);
    for (auto& v : r) v /= norm;
  }
  return out;
}

// Localized loss written straight from its definition (no log-sum-exp).
inline double dynlocrep(const Grid& s, const Grid& w, const std::vector<std::vector<int>>& nbrs) {
  const int n = static_cast<int>(s.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double wsum = 0.0;
    for (int t = 0; t < n; ++t) {
      if (t != i) wsum += w[i][t];
    }
    if (wsum < 1e-12) continue;
    double denom = 0.0;
    for (int t : nbrs[i]) denom += std::exp(s[i][t] * (1.0 - w[i][t]));
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      total -= (w[i][k] / wsum) * std::log(std::exp(s[i][k]) / denom);
    }
  }
  return total;
}

// Exponential-style loss whose denominator runs over every t != i.
inline double full_denominator_exponential(const Grid& s, const Grid& w) {
  return dynlocrep(s, w, full_neighbors(static_cast<int>(s.size())));
}

inline double y_aware(const Grid& s, const Grid& w) {
  const int n = static_cast<int>(s.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double wsum = 0.0;
    for (int t = 0; t < n; ++t) {
      if (t != i) wsum += w[i][t];
    }
    if (wsum < 1e-12) continue;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double denom = 0.0;
      int members = 0;
      for (int t = 0; t < n; ++t) {
        if (t == i || t == k) continue;
        denom += std::exp(s[i][t]);
        ++members;
      }
      if (members == 0) continue;
      total -= (w[i][k] / wsum) * std::log(std::exp(s[i][k]) / denom);
    }
  }
  return total;
}

inline double exponential(const Grid& s, const Grid& w) {
  const int n = static_cast<int>(s.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double wsum = 0.0;
    for (int t = 0; t < n; ++t) {
      if (t != i) wsum += w[i][t];
    }
    if (wsum < 1e-12) continue;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double denom = 0.0;
      int members = 0;
      for (int t = 0; t < n; ++t) {
        if (t == i || t == k) continue;
        denom += std::exp(s[i][t] * (1.0 - w[i][t]));
        ++members;
      }
      if (members == 0) continue;
      total -= (w[i][k] / wsum) * std::log(std::exp(s[i][k]) / denom);
    }
  }
  return total;
}

inline double threshold(const Grid& s, const Grid& w) {
  const int n = static_cast<int>(s.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double wsum = 0.0;
      double denom = 0.0;
      int members = 0;
      for (int t = 0; t < n; ++t) {
        if (t == i || !(w[i][t] < w[i][k])) continue;
        wsum += w[i][t];
        denom += std::exp(s[i][t]);
        ++members;
      }
      if (members == 0 || wsum < 1e-12) continue;
      total -= (w[i][k] / wsum) * std::log(std::exp(s[i][k]) / denom);
    }
  }
  return total;
}

inline double rank_n_contrast(const Grid& s, const std::vector<double>& y) {
  const int n = static_cast<int>(s.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double denom = 0.0;
      for (int t = 0; t < n; ++t) {
        if (t != i && std::abs(y[i] - y[t]) >= std::abs(y[i] - y[k])) denom += std::exp(s[i][t]);
      }
      total -= std::log(std::exp(s[i][k]) / denom);
    }
  }
  return total;
}

// Central differences of f over every entry of x.
template <typename F>
Grid central_differences(F&& f, Grid x, double step) {
  Grid g(x.size(), std::vector<double>(x.front().size()));
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t c = 0; c < x[r].size(); ++c) {
      const double keep = x[r][c];
      x[r][c] = keep + step;
      const double up = f(x);
      x[r][c] = keep - step;
      const double down = f(x);
      x[r][c] = keep;
      g[r][c] = (up - down) / (2.0 * step);
    }
  }
  return g;
}

// Gauss-Jordan inverse with partial pivoting.
inline Grid inverse(Grid a) {
  const int n = static_cast<int>(a.size());
  Grid inv(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double p = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

// Ridge via explicit normal equations: beta = (Xc'Xc + lambda I)^-1 Xc'yc.
inline std::pair<std::vector<double>, double> ridge(const Grid& x, const std::vector<double>& y,
                                                    double lambda) {
  const int n = static_cast<int>(x.size());
  const int d = static_cast<int>(x.front().size());
  std::vector<double> mean(d, 0.0);
  double ymean = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) mean[j] += x[i][j] / n;
    ymean += y[i] / n;
  }
  Grid gram(d, std::vector<double>(d, 0.0));
  std::vector<double> rhs(d, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) {
      const double xa = x[i][a] - mean[a];
      rhs[a] += xa * (y[i] - ymean);
      for (int b = 0; b < d; ++b) gram[a][b] += xa * (x[i][b] - mean[b]);
    }
  }
  for (int a = 0; a < d; ++a) gram[a][a] += lambda;
  const Grid inv = inverse(gram);
  std::vector<double> beta(d, 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) beta[a] += inv[a][b] * rhs[b];
  }
  double intercept = ymean;
  for (int a = 0; a < d; ++a) intercept -= mean[a] * beta[a];
  return {beta, intercept};
}

}  // namespace oracle
