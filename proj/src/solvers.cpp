#include "qauto/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qauto {

namespace {

/// O(n^3) shortest-augmenting-path assignment on a square cost matrix.
/// Returns row -> column.
std::vector<int> square_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1,
                             std::numeric_limits<double>::infinity());
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0)
      row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] =
          j - 1;
  return row_to_col;
}

}  // namespace

Assignment hungarian_solve(const CostMatrix& cost) {
  const int n = cost.n_tracks();
  const int m = cost.n_meas();
  const int dim = n + m;
  Assignment out;
  if (dim == 0) return out;

  double max_abs = cost.max_abs_gated_cost();
  max_abs = std::max({max_abs, std::abs(cost.c_miss), std::abs(cost.c_fa), 1.0});
  const double big = 1e6 * max_abs;

  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(dim, dim, big);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (cost.gate(i, j)) a(i, j) = cost.cost(i, j);
  for (int i = 0; i < n; ++i) a(i, m + i) = cost.c_miss;
  for (int j = 0; j < m; ++j) a(n + j, j) = cost.c_fa;
  a.block(n, m, m, n).setZero();  // unused slacks pair freely

  const std::vector<int> row_to_col = square_assignment(a);
  for (int i = 0; i < n; ++i) {
    const int j = row_to_col[static_cast<std::size_t>(i)];
    if (j < m) {
      if (!cost.gate(i, j))
        throw std::logic_error("hungarian_solve assigned a gated-out pair");
      out.pairs.emplace_back(i, j);
      out.objective += cost.cost(i, j);
    } else {
      out.missed.push_back(i);
      out.objective += cost.c_miss;
    }
  }
  std::vector<char> assigned(static_cast<std::size_t>(m), 0);
  for (const auto& [i, j] : out.pairs) assigned[static_cast<std::size_t>(j)] = 1;
  for (int j = 0; j < m; ++j)
    if (!assigned[static_cast<std::size_t>(j)]) {
      out.false_alarms.push_back(j);
      out.objective += cost.c_fa;
    }
  return out;
}

Assignment gnn_solve(const CostMatrix& cost) {
  const int n = cost.n_tracks();
  const int m = cost.n_meas();
  struct Entry {
    double c;
    int i, j;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (cost.gate(i, j)) entries.push_back({cost.cost(i, j), i, j});
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a,
                                                      const Entry& b) {
    if (a.c != b.c) return a.c < b.c;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<char> row_used(static_cast<std::size_t>(n), 0);
  std::vector<char> col_used(static_cast<std::size_t>(m), 0);
  Assignment out;
  for (const Entry& e : entries) {
    if (row_used[static_cast<std::size_t>(e.i)] ||
        col_used[static_cast<std::size_t>(e.j)])
      continue;
    if (e.c >= cost.c_miss + cost.c_fa) continue;
    row_used[static_cast<std::size_t>(e.i)] = 1;
    col_used[static_cast<std::size_t>(e.j)] = 1;
    out.pairs.emplace_back(e.i, e.j);
    out.objective += e.c;
  }
  for (int i = 0; i < n; ++i)
    if (!row_used[static_cast<std::size_t>(i)]) {
      out.missed.push_back(i);
      out.objective += cost.c_miss;
    }
  for (int j = 0; j < m; ++j)
    if (!col_used[static_cast<std::size_t>(j)]) {
      out.false_alarms.push_back(j);
      out.objective += cost.c_fa;
    }
  return out;
}

BruteForceResult brute_force_qubo(const QuboInstance& q) {
  if (q.n_var > 24)
    throw std::invalid_argument("brute force capped at 24 variables");
  const int n = q.n_var;
  if (n == 0) return {{}, q.offset};

  // symmetric neighbour weights for O(n) Gray-code flip deltas
  Eigen::MatrixXd w = q.Q;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) w(b, a) = w(a, b);

  std::vector<int> y(static_cast<std::size_t>(n), 0);
  double energy = q.offset;
  double best_energy = energy;
  std::uint64_t best_code = 0;
  std::uint64_t gray = 0;
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const std::uint64_t next_gray = step ^ (step >> 1);
    const int bit = __builtin_ctzll(gray ^ next_gray);
    gray = next_gray;
    const int new_val = 1 - y[static_cast<std::size_t>(bit)];
    double delta = q.Q(bit, bit);
    for (int b = 0; b < n; ++b)
      if (b != bit && y[static_cast<std::size_t>(b)]) delta += w(bit, b);
    energy += new_val ? delta : -delta;
    y[static_cast<std::size_t>(bit)] = new_val;
    if (energy < best_energy ||
        (energy == best_energy && gray < best_code)) {
      best_energy = energy;
      best_code = gray;
    }
  }
  BruteForceResult out;
  out.argmin.resize(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b)
    out.argmin[static_cast<std::size_t>(b)] =
        static_cast<int>((best_code >> b) & 1ull);
  out.energy = qubo_energy(q, out.argmin);  // re-evaluate to shed drift
  return out;
}

DecodedSolution decode_topk(const Histogram& counts, const QuboInstance& q,
                            int k, std::optional<double> reference_optimum) {
  if (counts.empty()) throw std::invalid_argument("decode_topk: empty histogram");
  struct Item {
    std::uint64_t bits;
    std::int64_t freq;
  };
  std::vector<Item> items;
  items.reserve(counts.size());
  for (const auto& [bits, freq] : counts) items.push_back({bits, freq});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.freq != b.freq) return a.freq > b.freq;
    return a.bits < b.bits;
  });
  if (static_cast<int>(items.size()) > k) items.resize(static_cast<std::size_t>(k));

  DecodedSolution best;
  bool first = true;
  for (const Item& item : items) {
    std::vector<int> y(static_cast<std::size_t>(q.n_var));
    for (int b = 0; b < q.n_var; ++b)
      y[static_cast<std::size_t>(b)] = static_cast<int>((item.bits >> b) & 1ull);
    const double e = qubo_energy(q, y);
    if (first || e < best.energy) {
      best.bits = item.bits;
      best.y = std::move(y);
      best.energy = e;
      first = false;
    }
  }
  if (reference_optimum) {
    best.gap = best.energy - *reference_optimum;
    if (best.energy < 0 && *reference_optimum < 0)
      best.quality_pct = 100.0 * best.energy / *reference_optimum;
  }
  return best;
}

}  // namespace qauto
