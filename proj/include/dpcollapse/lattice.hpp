#pragma once

#include <array>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dpc {

using Vec3 = Eigen::Vector3d;
using Extents = std::array<std::int64_t, 3>;

struct BasisAtom {
  Vec3 offset = Vec3::Zero();  // m
  double mass = 0.0;           // kg
  double radius = 0.0;         // m, intrinsic nuclear radius
};

/// A class of intra-cell displacements c = b_alpha - b_beta. Pairs with the
/// same offset, mass product and radius term are merged and counted by
/// `multiplicity`.
struct BasisPairClass {
  Vec3 offset = Vec3::Zero();
  std::uint64_t multiplicity = 0;
  double mass_product = 0.0;     // kg^2
  double mean_radius_sq = 0.0;   // (R_alpha^2 + R_beta^2) / 2, m^2
};

/// Finite crystal: D primitive vectors, a basis, and N_i cells along each
/// primitive direction. Vectors are stored as 3-vectors; in 2D the z
/// components are zero. Immutable once built.
class Lattice {
 public:
  Lattice(int dimension, std::vector<Vec3> primitive, std::vector<BasisAtom> basis,
          Extents extents, std::string name = "custom");

  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const Vec3& primitive(int i) const { return primitive_[static_cast<std::size_t>(i)]; }
  const std::vector<Vec3>& primitives() const { return primitive_; }
  const std::vector<BasisAtom>& basis() const { return basis_; }
  std::size_t basis_size() const { return basis_.size(); }
  std::int64_t extent(int i) const { return extents_[static_cast<std::size_t>(i)]; }
  const Extents& extents() const { return extents_; }

  std::uint64_t cell_count() const;
  std::uint64_t atom_count() const;
  double total_mass() const;

  /// N_i |a_i|, the edge length along primitive direction i.
  double side_length(int i) const;
  /// Longest edge, the L used for "4L"-style separations.
  double longest_side() const;
  /// Determinant of the Gram matrix of the primitive vectors.
  double gram_determinant() const;

  bool is_monoatomic() const { return basis_.size() == 1; }

  /// Merged classes of intra-cell offsets, in (alpha, beta) first-seen order.
  const std::vector<BasisPairClass>& pair_classes() const { return pair_classes_; }

  /// Number of entries in the distance domain: prod(2 N_i - 1) * classes.
  std::uint64_t domain_size() const;

  /// Explicit atom positions, cells in lexicographic (n_1..n_D) order with
  /// the basis index fastest.
  std::vector<Vec3> positions() const;
  /// Basis index of each atom in positions() order.
  std::vector<std::size_t> species() const;

 private:
  int dimension_;
  std::vector<Vec3> primitive_;
  std::vector<BasisAtom> basis_;
  Extents extents_;
  std::string name_;
  std::vector<BasisPairClass> pair_classes_;
};

Lattice build_graphene_sheet(std::int64_t n1, std::int64_t n2);
Lattice build_square_lattice(std::int64_t n1, std::int64_t n2, double spacing, double mass);
Lattice build_cubic_lattice(std::int64_t n1, std::int64_t n2, std::int64_t n3, double spacing,
                            double mass);
Lattice build_stacked_graphene(std::int64_t n1, std::int64_t n2, std::int64_t n3,
                               double interlayer);

/// One element of the distance domain: a difference vector r, the number of
/// ordered atom pairs separated by it, and the pair's mass and radius data.
struct DistanceEntry {
  Vec3 r = Vec3::Zero();
  std::uint64_t weight = 0;
  double mass_product = 0.0;
  double mean_radius_sq = 0.0;
  std::array<std::int64_t, 3> cell_offset{0, 0, 0};
  std::size_t class_index = 0;
};

/// A contiguous run of the domain along the last primitive direction for a
/// fixed outer offset and pair class. Entry k (0-based) has
///   r = origin + k * step,  n_D = k - (N_D - 1),
///   weight = base_weight * (N_D - |n_D|).
struct DomainRow {
  Vec3 origin = Vec3::Zero();
  Vec3 step = Vec3::Zero();
  std::int64_t count = 0;
  std::int64_t last_extent = 0;
  std::uint64_t base_weight = 0;
  std::size_t class_index = 0;
};

/// Streams the weighted distance domain of a lattice without storing it.
///
/// Iteration is lexicographic in (n_1, ..., n_D, class). The stream can be
/// restricted to a contiguous range of the outer offset n_1 so that several
/// consumers enumerate disjoint parts independently.
class DistanceDomain {
 public:
  explicit DistanceDomain(const Lattice& lattice);
  DistanceDomain(const Lattice& lattice, std::int64_t n1_begin, std::int64_t n1_end);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = DistanceEntry;
    using difference_type = std::ptrdiff_t;
    using pointer = const DistanceEntry*;
    using reference = const DistanceEntry&;

    iterator() = default;
    reference operator*() const { return entry_; }
    pointer operator->() const { return &entry_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) {
      return a.done_ == b.done_ && (a.done_ || (a.n_ == b.n_ && a.gamma_ == b.gamma_));
    }

   private:
    friend class DistanceDomain;
    iterator(const Lattice* lattice, std::int64_t n1_begin, std::int64_t n1_end);
    void load();

    const Lattice* lattice_ = nullptr;
    std::int64_t n1_end_ = 0;
    std::array<std::int64_t, 3> n_{0, 0, 0};
    std::size_t gamma_ = 0;
    bool done_ = true;
    DistanceEntry entry_;
  };

  iterator begin() const { return iterator(lattice_, n1_begin_, n1_end_); }
  iterator end() const { return iterator(); }

  /// Number of entries in this (sub-)stream.
  std::uint64_t size() const;

  std::int64_t n1_begin() const { return n1_begin_; }
  std::int64_t n1_end() const { return n1_end_; }

  /// Visits the stream as DomainRow blocks, ordered by (n_1..n_{D-1}, class).
  template <typename Visitor>
  void for_each_row(Visitor&& visit) const;

 private:
  const Lattice* lattice_;
  std::int64_t n1_begin_;
  std::int64_t n1_end_;  // exclusive
};

/// Splits [-(N_1-1), N_1-1] into `parts` contiguous, nearly equal n_1 ranges.
std::vector<DistanceDomain> partition_domain(const Lattice& lattice, std::size_t parts);

template <typename Visitor>
void DistanceDomain::for_each_row(Visitor&& visit) const {
  const Lattice& lat = *lattice_;
  const int dim = lat.dimension();
  const auto& classes = lat.pair_classes();
  const std::int64_t last = lat.extent(dim - 1);
  const Vec3& step = lat.primitive(dim - 1);

  auto emit = [&](const Vec3& outer, std::uint64_t outer_weight) {
    for (std::size_t g = 0; g < classes.size(); ++g) {
      DomainRow row;
      row.origin = outer + classes[g].offset - static_cast<double>(last - 1) * step;
      row.step = step;
      row.count = 2 * last - 1;
      row.last_extent = last;
      row.base_weight = outer_weight * classes[g].multiplicity;
      row.class_index = g;
      visit(row);
    }
  };

  const std::int64_t n1_extent = lat.extent(0);
  for (std::int64_t n1 = n1_begin_; n1 < n1_end_; ++n1) {
    const auto w1 = static_cast<std::uint64_t>(n1_extent - (n1 < 0 ? -n1 : n1));
    const Vec3 base1 = static_cast<double>(n1) * lat.primitive(0);
    if (dim == 2) {
      emit(base1, w1);
    } else {
      const std::int64_t n2_extent = lat.extent(1);
      for (std::int64_t n2 = -(n2_extent - 1); n2 <= n2_extent - 1; ++n2) {
        const auto w2 = static_cast<std::uint64_t>(n2_extent - (n2 < 0 ? -n2 : n2));
        emit(base1 + static_cast<double>(n2) * lat.primitive(1), w1 * w2);
      }
    }
  }
}

}  // namespace dpc
