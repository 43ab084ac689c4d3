#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace seisflow::nas {

/// Candidate operations; the enumerator order is the column order of AlphaMatrix.
enum class Op : std::uint8_t {
  conv3x3 = 0,
  dil_conv3x3 = 1,  // dilation 2
  max_pool3x3 = 2,
  avg_pool3x3 = 3,
  identity = 4,
  zero = 5,
};

inline constexpr std::size_t kNumOps = 6;

/// Canonical names: conv_3x3, dil_conv_3x3, max_pool_3x3, avg_pool_3x3, identity, zero.
std::string_view op_name(Op op) noexcept;
/// Throws FormatError naming the token when unknown.
Op parse_op(std::string_view name);

/// Learnable parameters of one op at channel width c (bias included, no norm layers):
/// 9c^2 + c for both convolutions, 0 otherwise.
std::uint64_t op_params(Op op, std::uint64_t channels) noexcept;

enum class CellKind { encoder, decoder };

std::string_view cell_kind_name(CellKind kind) noexcept;

struct CellSpec {
  std::size_t n_nodes = 4;
  std::size_t n_inputs = 2;
  CellKind kind = CellKind::encoder;

  /// Sum over nodes i = 1..n_nodes of (n_inputs + i - 1).
  std::size_t edge_count() const noexcept;
  /// First edge (row of AlphaMatrix) of intermediate node `node` (0-based).
  /// That node's edges come from predecessors 0 .. n_inputs + node - 1 in order:
  /// the cell inputs first, then earlier nodes.
  std::size_t first_edge(std::size_t node) const noexcept;
  void validate() const;
};

/// E x kNumOps architecture logits, row-major.
class AlphaMatrix {
 public:
  AlphaMatrix(std::size_t edges, std::vector<double> logits);
  static AlphaMatrix zeros(std::size_t edges);

  std::size_t edges() const noexcept { return edges_; }
  double operator()(std::size_t e, std::size_t op) const noexcept { return logits_[e * kNumOps + op]; }
  double& operator()(std::size_t e, std::size_t op) noexcept { return logits_[e * kNumOps + op]; }
  const std::vector<double>& logits() const noexcept { return logits_; }

 private:
  std::size_t edges_;
  std::vector<double> logits_;
};

/// Row-wise softmax (max-subtracted). Throws ConfigError on non-finite logits.
std::vector<double> relax(const AlphaMatrix& alpha);

struct Edge {
  std::size_t pred = 0;
  Op op = Op::conv3x3;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct NodeGenotype {
  std::array<Edge, 2> inputs;  // ascending pred

  friend bool operator==(const NodeGenotype&, const NodeGenotype&) = default;
};

struct Genotype {
  CellKind kind = CellKind::encoder;
  std::size_t n_inputs = 2;
  std::vector<NodeGenotype> nodes;

  /// Two distinct valid predecessors per node, no `zero` ops.
  void validate() const;

  friend bool operator==(const Genotype&, const Genotype&) = default;
};

/// Per edge, the best op is the argmax of the softmax weight over non-zero
/// candidates; per node, the two edges with the largest best-op weight are kept.
/// Ties resolve to the lowest op index and the lowest edge index.
Genotype discretize(const AlphaMatrix& alpha, const CellSpec& cell);

/// Canonical text:
///   cell encoder
///   node 0: (0, conv_3x3) (1, max_pool_3x3)
///   node 1: ...
/// Predecessors 0 .. n_inputs-1 are the cell inputs; n_inputs + k is node k.
std::string serialize(const Genotype& g);
/// Inverse of serialize(); n_inputs is fixed at 2. Throws FormatError.
Genotype parse_genotype(std::string_view text);

struct BackboneConfig {
  std::size_t depth = 4;
  std::uint64_t base_channels = 16;
  std::size_t nodes_per_cell = 4;
  std::uint64_t in_channels = 1;
  std::uint64_t out_channels = 1;
  /// Counts the stem, head and resampling convolutions; off leaves cells only.
  bool include_fixed_layers = true;

  std::uint64_t channels(std::size_t level) const noexcept { return base_channels << level; }
  void validate() const;
};

/// Per-component parameter tally of a Unet backbone built from shared cells.
///
/// Level l has width C_l = base_channels * 2^l. The backbone has one encoder
/// cell per level (0 .. depth-1) and one decoder cell per level 0 .. depth-2,
/// all at their level width. Fixed layers:
///   stem    3x3 conv in -> C_0                 9 in C_0 + C_0
///   down    3x3 stride-2 conv C_l -> C_{l+1}   9 C_l C_{l+1} + C_{l+1}
///   up      2x2 transposed conv C_{l+1} -> C_l 4 C_{l+1} C_l + C_l
///   fuse    1x1 conv on the skip concat 2C_l -> C_l   2 C_l^2 + C_l
///   head    1x1 conv C_0 -> out                C_0 out + out
struct ParamBreakdown {
  std::uint64_t encoder_cells = 0;
  std::uint64_t decoder_cells = 0;
  std::uint64_t stem = 0;
  std::uint64_t head = 0;
  std::uint64_t resampling = 0;

  std::uint64_t total() const noexcept {
    return encoder_cells + decoder_cells + stem + head + resampling;
  }
};

/// Parameters of one cell at width `channels`: sum of op_params over kept edges.
std::uint64_t cell_params(const Genotype& g, std::uint64_t channels);

/// All encoder positions share `encoder`, all decoder positions share `decoder`.
ParamBreakdown param_breakdown(const Genotype& encoder, const Genotype& decoder,
                               const BackboneConfig& backbone);
std::uint64_t param_count(const Genotype& encoder, const Genotype& decoder,
                          const BackboneConfig& backbone);
/// Same genotype in every cell position.
std::uint64_t param_count(const Genotype& g, const BackboneConfig& backbone);

/// prod over nodes i = 1..n_nodes of C(n_inputs + i - 1, 2) * (n_ops - 1)^2.
/// Throws ConfigError on overflow of 64 bits.
std::uint64_t search_space_size(const CellSpec& cell, std::size_t n_ops = kNumOps);

}  // namespace seisflow::nas
