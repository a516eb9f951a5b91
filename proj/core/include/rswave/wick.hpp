#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rswave::wick {

/// Vertices grouped into sets A_i of sizes set_sizes[i]; vertex numbering is
/// consecutive within sets, set 0 first.
struct VertexLayout {
  std::vector<int> set_sizes;

  int total() const {
    int t = 0;
    for (int s : set_sizes) t += s;
    return t;
  }
  int set_of(int vertex) const {
    int acc = 0;
    for (std::size_t i = 0; i < set_sizes.size(); ++i) {
      acc += set_sizes[i];
      if (vertex < acc) return static_cast<int>(i);
    }
    return -1;
  }
};

/// Perfect matching of the vertices into unordered pairs.
struct Pairing {
  std::vector<std::pair<int, int>> pairs;
};

struct PairingClassification {
  std::vector<int> component_of_set;  // component id per set
  int n_components = 0;
  int n_s = 0;             // size of the smallest connected component
  int n_c = 0;             // size of the largest connected component
  int crossing_count = 0;  // edges whose endpoints lie in different sets
  bool is_simple = false;  // consecutive vertices pair up in the ordering
};

/// Enumeration cap: this module is an oracle for the statistical tests, not
/// a production path.
inline constexpr int kMaxVertices = 12;

/// Calls fn for each of the (2k-1)!! perfect matchings of `total` vertices,
/// in smallest-unpaired-vertex-first order. Throws on odd or oversized
/// totals.
void for_each_pairing(int total, const std::function<void(const Pairing&)>& fn);

/// Materialized enumeration, same order.
std::vector<Pairing> enumerate_pairings(const VertexLayout& layout);

/// Connected components of the sets under "some edge joins the two sets",
/// sizes of the extreme components, crossing-edge count, and simplicity
/// relative to `ordering` (vertex at position i is ordering[i]; identity
/// when omitted).
PairingClassification classify(const Pairing& pairing,
                               const VertexLayout& layout,
                               std::span<const int> ordering = {});

/// Joint moment of zero-mean Gaussians with covariance cov (row-major,
/// total x total): sum over all pairings of products of pair covariances.
double gaussian_product_moment(std::span<const double> cov,
                               const VertexLayout& layout);

/// Centered-product moment E prod_i (X_i - E X_i) with X_i the product of
/// the Gaussians in set A_i: the pairing sum restricted to n_s >= 2.
double centered_product_moment(std::span<const double> cov,
                               const VertexLayout& layout);

/// (2k-1)!! pairing count for 2k vertices.
std::size_t double_factorial_pairings(int total);

}  // namespace rswave::wick
