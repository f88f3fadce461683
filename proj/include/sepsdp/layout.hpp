#pragma once

#include "sepsdp/qlinalg.hpp"
#include "sepsdp/sdp.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sepsdp {

// Hermitian, PSD to -1e-10, unit trace to 1e-10, on [d_A, d_B].
class DensityMatrix {
 public:
  DensityMatrix(CMatrix m, int d_a, int d_b);

  const CMatrix& matrix() const { return m_; }
  TensorSpace space() const { return TensorSpace({d_a_, d_b_}); }
  int dim_a() const { return d_a_; }
  int dim_b() const { return d_b_; }

 private:
  CMatrix m_;
  int d_a_, d_b_;
};

struct ExtensionSpec {
  int k = 2;
  bool ppt = true;
  bool reduced = true;

  void validate() const;
  std::string describe() const;
};

enum class BlockKind { Extension, TransposeACopies, TransposeB };

struct BlockInfo {
  BlockKind kind = BlockKind::Extension;
  int copies = 0;  // TransposeACopies: the first `copies` copies of A are transposed
  Index size = 0;
  std::string label;
};

struct ResourceEstimate {
  Index m = 0;
  std::vector<Index> block_sizes;
  Index ambient = 0;  // largest block the assembly materializes
  double flops = 0;   // ~ m^2 * sum(block size^2) per Newton step
};

ResourceEstimate required_resources(int d_a, int d_b, const ExtensionSpec& spec);

// Geometry of a level-k extension: coordinates, block maps, and the fixed-part
// embedding E with its adjoint. Extension coordinates are (tuple of A copies, b)
// unreduced, or (symmetric occupation column, b) reduced; both flatten as a*d_B + b.
class ExtensionLayout {
 public:
  ExtensionLayout(int d_a, int d_b, ExtensionSpec spec);

  int dim_a() const { return d_a_; }
  int dim_b() const { return d_b_; }
  int copies() const { return spec_.k; }
  const ExtensionSpec& spec() const { return spec_; }
  const std::vector<BlockInfo>& blocks() const { return blocks_; }
  Index extension_dim() const { return blocks_.front().size; }
  // Dimension of (C^{d_A})^{otimes k} (x) C^{d_B}.
  Index full_dim() const { return full_dim_; }
  TensorSpace full_space() const;
  const SymmetricSubspace& symmetric() const { return *sym_k_; }

  // Extension-coordinate operator -> full-space operator (identity map unreduced).
  CMatrix to_full(const CMatrix& ext) const;
  SparseCMatrix to_full(const SparseCMatrix& ext) const;
  // Full-space vector -> extension coordinates (requires support in the symmetric subspace).
  CVector from_full_vector(const CVector& v) const;

  // C_b(G): transpose then compress onto block b. Returns the squared Frobenius
  // norm lost by compression through `lost` (zero when the support prediction holds).
  SparseCMatrix block_image(const SparseCMatrix& ext, int block, double* lost = nullptr) const;
  CMatrix block_image(const CMatrix& ext, int block) const;
  // C_b^*(Z_b) in extension coordinates.
  CMatrix block_adjoint(const CMatrix& zb, int block) const;
  // w_b = U_b^dagger (transposed slots conjugated)(x^{otimes k} (x) y).
  CVector block_vector(const CVector& x, const CVector& y, int block) const;

  // Fixed-part embedding E (Tr over copies 2..k of E(Y) = Y) and its adjoint.
  CMatrix embed(const CMatrix& y) const;
  CMatrix embed_adjoint(const CMatrix& v) const;
  // max |Tr[E(X) Y] - Tr[X E^*(Y)]| over random pairs, checked at construction.
  double adjointness_residual() const { return adjoint_residual_; }

  // Directions spanning the symmetric extensions of zero: Tr over copies 2..k vanishes.
  // Unreduced: symmetrized Gell-Mann products with >= 2 traceless A factors, times a
  // B matrix unit. Reduced: sparse kernel of the partial trace on Sym^k, times a B unit.
  std::vector<SparseCMatrix> free_directions() const;
  Index free_count() const;
  std::string basis_name() const;

 private:
  struct Compression {
    std::vector<Index> col;  // full index -> block index
    std::vector<double> w;   // isometry entry at (full, col)
    std::vector<std::vector<Index>> members;  // block index -> full indices
    Index dim = 0;
    bool identity = false;
  };

  // Applies the block's partial transpose to a full-space entry position.
  void transpose_position(Index& r, Index& c, int block) const;
  Compression make_compression(const BlockInfo& info) const;
  void build_unit_images();

  int d_a_, d_b_;
  ExtensionSpec spec_;
  Index full_dim_ = 0;
  Index a_dim_ = 0;  // d_A^k
  std::vector<BlockInfo> blocks_;
  std::shared_ptr<const SymmetricSubspace> sym_k_;
  std::vector<Compression> compressions_;
  // unit_images_[a * d_A + a'] = E_A(|a><a'|), extension-A coordinates.
  std::vector<SparseCMatrix> unit_images_;
  double adjoint_residual_ = 0;
};

}  // namespace sepsdp
