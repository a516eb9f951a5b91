#include "rswave/wick.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rswave::wick {
namespace {

void enumerate_rec(std::vector<int>& unpaired, Pairing& current,
                   const std::function<void(const Pairing&)>& fn) {
  if (unpaired.empty()) {
    fn(current);
    return;
  }
  // Pair the smallest unpaired vertex with each later one in turn.
  const int first = unpaired.front();
  for (std::size_t j = 1; j < unpaired.size(); ++j) {
    const int partner = unpaired[j];
    std::vector<int> rest;
    rest.reserve(unpaired.size() - 2);
    for (std::size_t i = 1; i < unpaired.size(); ++i)
      if (i != j) rest.push_back(unpaired[i]);
    current.pairs.emplace_back(first, partner);
    enumerate_rec(rest, current, fn);
    current.pairs.pop_back();
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

std::size_t double_factorial_pairings(int total) {
  if (total % 2 != 0) throw std::invalid_argument("odd vertex count");
  std::size_t acc = 1;
  for (int m = total - 1; m > 1; m -= 2) acc *= static_cast<std::size_t>(m);
  return acc;
}

void for_each_pairing(int total,
                      const std::function<void(const Pairing&)>& fn) {
  if (total % 2 != 0)
    throw std::invalid_argument("for_each_pairing: odd vertex count");
  if (total > kMaxVertices)
    throw std::invalid_argument("for_each_pairing: beyond the 12-vertex cap");
  if (total == 0) {
    fn(Pairing{});
    return;
  }
  std::vector<int> vertices(static_cast<std::size_t>(total));
  std::iota(vertices.begin(), vertices.end(), 0);
  Pairing current;
  current.pairs.reserve(static_cast<std::size_t>(total / 2));
  enumerate_rec(vertices, current, fn);
}

std::vector<Pairing> enumerate_pairings(const VertexLayout& layout) {
  std::vector<Pairing> out;
  for_each_pairing(layout.total(),
                   [&](const Pairing& p) { out.push_back(p); });
  return out;
}

PairingClassification classify(const Pairing& pairing,
                               const VertexLayout& layout,
                               std::span<const int> ordering) {
  const int total = layout.total();
  const int m = static_cast<int>(layout.set_sizes.size());

  // Sanity: every vertex in exactly one pair.
  std::vector<int> seen(static_cast<std::size_t>(total), 0);
  for (const auto& [a, b] : pairing.pairs) {
    if (a < 0 || b < 0 || a >= total || b >= total || a == b)
      throw std::invalid_argument("classify: malformed pairing");
    ++seen[static_cast<std::size_t>(a)];
    ++seen[static_cast<std::size_t>(b)];
  }
  if (static_cast<int>(pairing.pairs.size()) * 2 != total ||
      std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw std::invalid_argument("classify: malformed pairing");

  PairingClassification out;
  UnionFind uf(m);
  out.crossing_count = 0;
  for (const auto& [a, b] : pairing.pairs) {
    const int sa = layout.set_of(a);
    const int sb = layout.set_of(b);
    if (sa != sb) {
      ++out.crossing_count;
      uf.unite(sa, sb);
    }
  }

  out.component_of_set.resize(static_cast<std::size_t>(m));
  std::vector<int> root_to_id(static_cast<std::size_t>(m), -1);
  std::vector<int> comp_size;
  for (int s = 0; s < m; ++s) {
    const int r = uf.find(s);
    if (root_to_id[static_cast<std::size_t>(r)] < 0) {
      root_to_id[static_cast<std::size_t>(r)] = static_cast<int>(comp_size.size());
      comp_size.push_back(0);
    }
    const int id = root_to_id[static_cast<std::size_t>(r)];
    out.component_of_set[static_cast<std::size_t>(s)] = id;
    ++comp_size[static_cast<std::size_t>(id)];
  }
  out.n_components = static_cast<int>(comp_size.size());
  out.n_s = *std::min_element(comp_size.begin(), comp_size.end());
  out.n_c = *std::max_element(comp_size.begin(), comp_size.end());

  // Simplicity relative to the supplied vertex ordering.
  std::vector<int> order(static_cast<std::size_t>(total));
  if (ordering.empty()) {
    std::iota(order.begin(), order.end(), 0);
  } else {
    if (static_cast<int>(ordering.size()) != total)
      throw std::invalid_argument("classify: ordering size mismatch");
    std::copy(ordering.begin(), ordering.end(), order.begin());
  }
  out.is_simple = true;
  for (int i = 0; i + 1 < total; i += 2) {
    const int a = order[static_cast<std::size_t>(i)];
    const int b = order[static_cast<std::size_t>(i + 1)];
    const bool paired =
        std::any_of(pairing.pairs.begin(), pairing.pairs.end(),
                    [&](const auto& pr) {
                      return (pr.first == a && pr.second == b) ||
                             (pr.first == b && pr.second == a);
                    });
    if (!paired) {
      out.is_simple = false;
      break;
    }
  }
  return out;
}

double gaussian_product_moment(std::span<const double> cov,
                               const VertexLayout& layout) {
  const int total = layout.total();
  if (total % 2 != 0) return 0.0;
  if (cov.size() != static_cast<std::size_t>(total) * static_cast<std::size_t>(total))
    throw std::invalid_argument("gaussian_product_moment: cov size mismatch");
  double acc = 0.0;
  for_each_pairing(total, [&](const Pairing& p) {
    double term = 1.0;
    for (const auto& [a, b] : p.pairs)
      term *= cov[static_cast<std::size_t>(a) * static_cast<std::size_t>(total) +
                  static_cast<std::size_t>(b)];
    acc += term;
  });
  return acc;
}

double centered_product_moment(std::span<const double> cov,
                               const VertexLayout& layout) {
  const int total = layout.total();
  if (total % 2 != 0) return 0.0;
  if (cov.size() != static_cast<std::size_t>(total) * static_cast<std::size_t>(total))
    throw std::invalid_argument("centered_product_moment: cov size mismatch");
  if (layout.set_sizes.size() < 2) return 0.0;
  double acc = 0.0;
  for_each_pairing(total, [&](const Pairing& p) {
    const auto cls = classify(p, layout);
    if (cls.n_s < 2) return;
    double term = 1.0;
    for (const auto& [a, b] : p.pairs)
      term *= cov[static_cast<std::size_t>(a) * static_cast<std::size_t>(total) +
                  static_cast<std::size_t>(b)];
    acc += term;
  });
  return acc;
}

}  // namespace rswave::wick
