#include "dpcollapse/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "dpcollapse/constants.hpp"

namespace dpc {

namespace {

std::vector<BasisPairClass> merge_pair_classes(const std::vector<BasisAtom>& basis) {
  std::vector<BasisPairClass> classes;
  for (const auto& alpha : basis) {
    for (const auto& beta : basis) {
      const Vec3 offset = alpha.offset - beta.offset;
      const double mass_product = alpha.mass * beta.mass;
      const double radius_term = 0.5 * (alpha.radius * alpha.radius + beta.radius * beta.radius);
      bool merged = false;
      for (auto& c : classes) {
        if (c.offset == offset && c.mass_product == mass_product &&
            c.mean_radius_sq == radius_term) {
          ++c.multiplicity;
          merged = true;
          break;
        }
      }
      if (!merged) classes.push_back({offset, 1, mass_product, radius_term});
    }
  }
  return classes;
}

}  // namespace

Lattice::Lattice(int dimension, std::vector<Vec3> primitive, std::vector<BasisAtom> basis,
                 Extents extents, std::string name)
    : dimension_(dimension),
      primitive_(std::move(primitive)),
      basis_(std::move(basis)),
      extents_(extents),
      name_(std::move(name)) {
  if (dimension_ != 2 && dimension_ != 3) {
    throw std::invalid_argument("lattice dimension must be 2 or 3");
  }
  if (primitive_.size() != static_cast<std::size_t>(dimension_)) {
    throw std::invalid_argument("lattice needs exactly one primitive vector per dimension");
  }
  if (basis_.empty()) throw std::invalid_argument("lattice basis is empty");
  for (int i = 0; i < 3; ++i) {
    if (i < dimension_) {
      if (extents_[static_cast<std::size_t>(i)] < 1) {
        throw std::invalid_argument("lattice extents must be >= 1");
      }
    } else {
      extents_[static_cast<std::size_t>(i)] = 1;
    }
  }
  if (dimension_ == 2) {
    for (const auto& a : primitive_) {
      if (a.z() != 0.0) throw std::invalid_argument("2D primitive vectors must lie in the xy plane");
    }
    for (const auto& b : basis_) {
      if (b.offset.z() != 0.0) throw std::invalid_argument("2D basis offsets must lie in the xy plane");
    }
  }
  for (const auto& b : basis_) {
    if (!(b.mass > 0.0)) throw std::invalid_argument("basis masses must be positive");
    if (!(b.radius >= 0.0)) throw std::invalid_argument("basis radii must be non-negative");
  }
  // Relative to the product of squared lengths, so the check is scale free.
  double scale = 1.0;
  for (const auto& a : primitive_) scale *= a.squaredNorm();
  if (!(scale > 0.0) || std::abs(gram_determinant()) <= 1e-12 * scale) {
    throw std::invalid_argument("primitive vectors are linearly dependent");
  }
  pair_classes_ = merge_pair_classes(basis_);
}

std::uint64_t Lattice::cell_count() const {
  std::uint64_t cells = 1;
  for (int i = 0; i < dimension_; ++i) cells *= static_cast<std::uint64_t>(extent(i));
  return cells;
}

std::uint64_t Lattice::atom_count() const { return cell_count() * basis_.size(); }

double Lattice::total_mass() const {
  double per_cell = 0.0;
  for (const auto& b : basis_) per_cell += b.mass;
  return per_cell * static_cast<double>(cell_count());
}

double Lattice::side_length(int i) const {
  return static_cast<double>(extent(i)) * primitive(i).norm();
}

double Lattice::longest_side() const {
  double side = 0.0;
  for (int i = 0; i < dimension_; ++i) side = std::max(side, side_length(i));
  return side;
}

double Lattice::gram_determinant() const {
  Eigen::MatrixXd a(3, dimension_);
  for (int i = 0; i < dimension_; ++i) a.col(i) = primitive(i);
  return (a.transpose() * a).determinant();
}

std::uint64_t Lattice::domain_size() const {
  std::uint64_t size = pair_classes_.size();
  for (int i = 0; i < dimension_; ++i) size *= static_cast<std::uint64_t>(2 * extent(i) - 1);
  return size;
}

std::vector<Vec3> Lattice::positions() const {
  std::vector<Vec3> out;
  out.reserve(atom_count());
  for (std::int64_t i = 0; i < extent(0); ++i) {
    for (std::int64_t j = 0; j < extent(1); ++j) {
      for (std::int64_t k = 0; k < extent(2); ++k) {
        Vec3 cell = static_cast<double>(i) * primitive(0);
        if (dimension_ >= 2) cell += static_cast<double>(j) * primitive(1);
        if (dimension_ == 3) cell += static_cast<double>(k) * primitive(2);
        for (const auto& b : basis_) out.push_back(cell + b.offset);
      }
    }
  }
  return out;
}

std::vector<std::size_t> Lattice::species() const {
  std::vector<std::size_t> out;
  out.reserve(atom_count());
  for (std::uint64_t c = 0; c < cell_count(); ++c) {
    for (std::size_t b = 0; b < basis_.size(); ++b) out.push_back(b);
  }
  return out;
}

Lattice build_graphene_sheet(std::int64_t n1, std::int64_t n2) {
  const double a = kGrapheneStep;
  const double s3 = std::sqrt(3.0);
  std::vector<Vec3> primitive{Vec3(a, 0, 0), Vec3(0.5 * a, 0.5 * s3 * a, 0)};
  std::vector<BasisAtom> basis{{Vec3::Zero(), kCarbonMass, 0.0},
                               {Vec3(0.5 * a, s3 / 6.0 * a, 0), kCarbonMass, 0.0}};
  return Lattice(2, std::move(primitive), std::move(basis), {n1, n2, 1}, "graphene");
}

Lattice build_square_lattice(std::int64_t n1, std::int64_t n2, double spacing, double mass) {
  if (!(spacing > 0.0)) throw std::invalid_argument("square lattice spacing must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("square lattice mass must be positive");
  std::vector<Vec3> primitive{Vec3(spacing, 0, 0), Vec3(0, spacing, 0)};
  return Lattice(2, std::move(primitive), {{Vec3::Zero(), mass, 0.0}}, {n1, n2, 1}, "square");
}

Lattice build_cubic_lattice(std::int64_t n1, std::int64_t n2, std::int64_t n3, double spacing,
                            double mass) {
  if (!(spacing > 0.0)) throw std::invalid_argument("cubic lattice spacing must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("cubic lattice mass must be positive");
  std::vector<Vec3> primitive{Vec3(spacing, 0, 0), Vec3(0, spacing, 0), Vec3(0, 0, spacing)};
  return Lattice(3, std::move(primitive), {{Vec3::Zero(), mass, 0.0}}, {n1, n2, n3}, "cubic");
}

Lattice build_stacked_graphene(std::int64_t n1, std::int64_t n2, std::int64_t n3,
                               double interlayer) {
  if (!(interlayer > 0.0)) throw std::invalid_argument("interlayer spacing must be positive");
  const double a = kGrapheneStep;
  const double s3 = std::sqrt(3.0);
  // AA stacking: every layer is a translated copy of the sheet.
  std::vector<Vec3> primitive{Vec3(a, 0, 0), Vec3(0.5 * a, 0.5 * s3 * a, 0),
                              Vec3(0, 0, interlayer)};
  std::vector<BasisAtom> basis{{Vec3::Zero(), kCarbonMass, 0.0},
                               {Vec3(0.5 * a, s3 / 6.0 * a, 0), kCarbonMass, 0.0}};
  return Lattice(3, std::move(primitive), std::move(basis), {n1, n2, n3}, "stacked-graphene");
}

// --- DistanceDomain ---------------------------------------------------------

DistanceDomain::DistanceDomain(const Lattice& lattice)
    : DistanceDomain(lattice, -(lattice.extent(0) - 1), lattice.extent(0)) {}

DistanceDomain::DistanceDomain(const Lattice& lattice, std::int64_t n1_begin, std::int64_t n1_end)
    : lattice_(&lattice), n1_begin_(n1_begin), n1_end_(n1_end) {
  const std::int64_t lo = -(lattice.extent(0) - 1);
  const std::int64_t hi = lattice.extent(0);
  if (n1_begin_ < lo || n1_end_ > hi || n1_begin_ > n1_end_) {
    throw std::out_of_range("n1 sub-range outside the lattice domain");
  }
}

std::uint64_t DistanceDomain::size() const {
  std::uint64_t per_n1 = lattice_->domain_size() / static_cast<std::uint64_t>(2 * lattice_->extent(0) - 1);
  return per_n1 * static_cast<std::uint64_t>(n1_end_ - n1_begin_);
}

DistanceDomain::iterator::iterator(const Lattice* lattice, std::int64_t n1_begin,
                                   std::int64_t n1_end)
    : lattice_(lattice), n1_end_(n1_end) {
  if (n1_begin >= n1_end) return;
  done_ = false;
  n_ = {n1_begin, 0, 0};
  for (int i = 1; i < lattice_->dimension(); ++i) {
    n_[static_cast<std::size_t>(i)] = -(lattice_->extent(i) - 1);
  }
  gamma_ = 0;
  load();
}

void DistanceDomain::iterator::load() {
  const auto& cls = lattice_->pair_classes()[gamma_];
  Vec3 r = cls.offset;
  std::uint64_t weight = cls.multiplicity;
  for (int i = 0; i < lattice_->dimension(); ++i) {
    const std::int64_t n = n_[static_cast<std::size_t>(i)];
    r += static_cast<double>(n) * lattice_->primitive(i);
    weight *= static_cast<std::uint64_t>(lattice_->extent(i) - (n < 0 ? -n : n));
  }
  entry_.r = r;
  entry_.weight = weight;
  entry_.mass_product = cls.mass_product;
  entry_.mean_radius_sq = cls.mean_radius_sq;
  entry_.cell_offset = n_;
  entry_.class_index = gamma_;
}

DistanceDomain::iterator& DistanceDomain::iterator::operator++() {
  if (done_) return *this;
  if (++gamma_ < lattice_->pair_classes().size()) {
    load();
    return *this;
  }
  gamma_ = 0;
  for (int i = lattice_->dimension() - 1; i >= 0; --i) {
    auto& n = n_[static_cast<std::size_t>(i)];
    const std::int64_t hi = (i == 0) ? n1_end_ - 1 : lattice_->extent(i) - 1;
    if (n < hi) {
      ++n;
      load();
      return *this;
    }
    n = -(lattice_->extent(i) - 1);
  }
  done_ = true;
  return *this;
}

std::vector<DistanceDomain> partition_domain(const Lattice& lattice, std::size_t parts) {
  if (parts == 0) parts = 1;
  const std::int64_t lo = -(lattice.extent(0) - 1);
  const std::int64_t total = 2 * lattice.extent(0) - 1;
  const auto count = static_cast<std::int64_t>(std::min<std::size_t>(parts, static_cast<std::size_t>(total)));
  std::vector<DistanceDomain> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t p = 0; p < count; ++p) {
    const std::int64_t begin = lo + total * p / count;
    const std::int64_t end = lo + total * (p + 1) / count;
    out.emplace_back(lattice, begin, end);
  }
  return out;
}

}  // namespace dpc
