#include "seisflow/nas.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "seisflow/errors.hpp"

namespace seisflow::nas {

namespace {

constexpr std::array<std::string_view, kNumOps> kOpNames = {
    "conv_3x3", "dil_conv_3x3", "max_pool_3x3", "avg_pool_3x3", "identity", "zero"};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw ConfigError("search space size overflows 64 bits");
  return r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t parse_index(std::string_view tok, std::size_t line_no) {
  tok = trim(tok);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw FormatError("line " + std::to_string(line_no) + ": expected an index, got '" + std::string(tok) + "'");
  }
  return static_cast<std::size_t>(std::stoull(std::string(tok)));
}

}  // namespace

std::string_view op_name(Op op) noexcept { return kOpNames[static_cast<std::size_t>(op)]; }

Op parse_op(std::string_view name) {
  for (std::size_t k = 0; k < kNumOps; ++k) {
    if (kOpNames[k] == name) return static_cast<Op>(k);
  }
  throw FormatError("unknown operation '" + std::string(name) + "'");
}

std::uint64_t op_params(Op op, std::uint64_t channels) noexcept {
  switch (op) {
    case Op::conv3x3:
    case Op::dil_conv3x3:
      return 9 * channels * channels + channels;
    default:
      return 0;
  }
}

std::string_view cell_kind_name(CellKind kind) noexcept {
  return kind == CellKind::encoder ? "encoder" : "decoder";
}

std::size_t CellSpec::edge_count() const noexcept {
  std::size_t e = 0;
  for (std::size_t i = 1; i <= n_nodes; ++i) e += n_inputs + i - 1;
  return e;
}

std::size_t CellSpec::first_edge(std::size_t node) const noexcept {
  std::size_t e = 0;
  for (std::size_t i = 0; i < node; ++i) e += n_inputs + i;
  return e;
}

void CellSpec::validate() const {
  if (n_nodes < 1) throw ConfigError("a cell needs at least one intermediate node");
  if (n_inputs < 2) throw ConfigError("a cell needs at least two inputs");
}

AlphaMatrix::AlphaMatrix(std::size_t edges, std::vector<double> logits)
    : edges_(edges), logits_(std::move(logits)) {
  if (logits_.size() != edges_ * kNumOps) {
    throw DimensionMismatch("alpha matrix needs " + std::to_string(edges_ * kNumOps) + " logits, got " +
                            std::to_string(logits_.size()));
  }
}

AlphaMatrix AlphaMatrix::zeros(std::size_t edges) {
  return AlphaMatrix(edges, std::vector<double>(edges * kNumOps, 0.0));
}

std::vector<double> relax(const AlphaMatrix& alpha) {
  std::vector<double> out(alpha.logits().size());
  for (std::size_t e = 0; e < alpha.edges(); ++e) {
    double top = alpha(e, 0);
    for (std::size_t k = 0; k < kNumOps; ++k) {
      if (!std::isfinite(alpha(e, k))) {
        throw ConfigError("alpha logit at edge " + std::to_string(e) + " is not finite");
      }
      top = std::max(top, alpha(e, k));
    }
    double total = 0.0;
    for (std::size_t k = 0; k < kNumOps; ++k) {
      out[e * kNumOps + k] = std::exp(alpha(e, k) - top);
      total += out[e * kNumOps + k];
    }
    for (std::size_t k = 0; k < kNumOps; ++k) out[e * kNumOps + k] /= total;
  }
  return out;
}

void Genotype::validate() const {
  if (nodes.empty()) throw ConfigError("genotype has no nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& in = nodes[k].inputs;
    for (const auto& e : in) {
      if (e.pred >= n_inputs + k) {
        throw ConfigError("node " + std::to_string(k) + " references invalid predecessor " +
                          std::to_string(e.pred));
      }
      if (e.op == Op::zero) throw ConfigError("node " + std::to_string(k) + " keeps a zero op");
    }
    if (in[0].pred >= in[1].pred) {
      throw ConfigError("node " + std::to_string(k) + " must keep two distinct predecessors in ascending order");
    }
  }
}

Genotype discretize(const AlphaMatrix& alpha, const CellSpec& cell) {
  cell.validate();
  if (alpha.edges() != cell.edge_count()) {
    throw DimensionMismatch("alpha has " + std::to_string(alpha.edges()) + " edges, cell expects " +
                            std::to_string(cell.edge_count()));
  }
  const auto weights = relax(alpha);
  const auto zero_idx = static_cast<std::size_t>(Op::zero);

  Genotype g{cell.kind, cell.n_inputs, {}};
  g.nodes.reserve(cell.n_nodes);
  for (std::size_t node = 0; node < cell.n_nodes; ++node) {
    const std::size_t first = cell.first_edge(node);
    const std::size_t n_pred = cell.n_inputs + node;

    struct Candidate {
      std::size_t pred;
      std::size_t op;
      double weight;
    };
    std::vector<Candidate> cands;
    cands.reserve(n_pred);
    for (std::size_t p = 0; p < n_pred; ++p) {
      const double* row = &weights[(first + p) * kNumOps];
      std::size_t best = zero_idx == 0 ? 1 : 0;
      for (std::size_t k = 0; k < kNumOps; ++k) {
        if (k != zero_idx && row[k] > row[best]) best = k;
      }
      cands.push_back({p, best, row[best]});
    }
    // Stable: equal strengths keep ascending edge order.
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });
    Candidate a = cands[0], b = cands[1];
    if (b.pred < a.pred) std::swap(a, b);
    g.nodes.push_back({{Edge{a.pred, static_cast<Op>(a.op)}, Edge{b.pred, static_cast<Op>(b.op)}}});
  }
  return g;
}

std::string serialize(const Genotype& g) {
  g.validate();
  std::ostringstream os;
  os << "cell " << cell_kind_name(g.kind) << '\n';
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const auto& in = g.nodes[k].inputs;
    os << "node " << k << ": (" << in[0].pred << ", " << op_name(in[0].op) << ") (" << in[1].pred
       << ", " << op_name(in[1].op) << ")\n";
  }
  return os.str();
}

Genotype parse_genotype(std::string_view text) {
  Genotype g;
  bool have_kind = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    if (!have_kind) {
      if (line.substr(0, 5) != "cell ") throw FormatError("line " + std::to_string(line_no) + ": expected 'cell <kind>'");
      const auto kind = trim(line.substr(5));
      if (kind == "encoder") {
        g.kind = CellKind::encoder;
      } else if (kind == "decoder") {
        g.kind = CellKind::decoder;
      } else {
        throw FormatError("line " + std::to_string(line_no) + ": unknown cell kind '" + std::string(kind) + "'");
      }
      have_kind = true;
      continue;
    }

    if (line.substr(0, 5) != "node ") throw FormatError("line " + std::to_string(line_no) + ": expected 'node k: ...'");
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw FormatError("line " + std::to_string(line_no) + ": missing ':'");
    const std::size_t k = parse_index(line.substr(5, colon - 5), line_no);
    if (k != g.nodes.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected node " + std::to_string(g.nodes.size()));
    }
    std::string_view rest = line.substr(colon + 1);
    NodeGenotype node;
    for (auto& edge : node.inputs) {
      rest = trim(rest);
      if (rest.empty() || rest.front() != '(') throw FormatError("line " + std::to_string(line_no) + ": expected '('");
      const auto close = rest.find(')');
      const auto comma = rest.find(',');
      if (close == std::string_view::npos || comma == std::string_view::npos || comma > close) {
        throw FormatError("line " + std::to_string(line_no) + ": malformed edge '" + std::string(rest) + "'");
      }
      edge.pred = parse_index(rest.substr(1, comma - 1), line_no);
      edge.op = parse_op(trim(rest.substr(comma + 1, close - comma - 1)));
      rest = rest.substr(close + 1);
    }
    if (!trim(rest).empty()) throw FormatError("line " + std::to_string(line_no) + ": trailing text '" + std::string(trim(rest)) + "'");
    g.nodes.push_back(node);
  }
  if (!have_kind) throw FormatError("genotype text is empty");
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
  return g;
}

void BackboneConfig::validate() const {
  if (depth < 1) throw ConfigError("backbone depth must be >= 1");
  if (base_channels < 1) throw ConfigError("base channels must be >= 1");
  if (nodes_per_cell < 1) throw ConfigError("nodes per cell must be >= 1");
  if (depth > 32) throw ConfigError("backbone depth is unreasonably large");
}

std::uint64_t cell_params(const Genotype& g, std::uint64_t channels) {
  std::uint64_t total = 0;
  for (const auto& node : g.nodes) {
    for (const auto& e : node.inputs) total += op_params(e.op, channels);
  }
  return total;
}

ParamBreakdown param_breakdown(const Genotype& encoder, const Genotype& decoder,
                               const BackboneConfig& backbone) {
  backbone.validate();
  encoder.validate();
  decoder.validate();
  if (encoder.nodes.size() != backbone.nodes_per_cell || decoder.nodes.size() != backbone.nodes_per_cell) {
    throw ConfigError("genotype node count does not match backbone nodes_per_cell");
  }
  ParamBreakdown p;
  for (std::size_t l = 0; l < backbone.depth; ++l) p.encoder_cells += cell_params(encoder, backbone.channels(l));
  for (std::size_t l = 0; l + 1 < backbone.depth; ++l) p.decoder_cells += cell_params(decoder, backbone.channels(l));
  if (!backbone.include_fixed_layers) return p;

  const std::uint64_t c0 = backbone.channels(0);
  p.stem = 9 * backbone.in_channels * c0 + c0;
  p.head = c0 * backbone.out_channels + backbone.out_channels;
  for (std::size_t l = 0; l + 1 < backbone.depth; ++l) {
    const std::uint64_t c = backbone.channels(l);
    const std::uint64_t c_next = backbone.channels(l + 1);
    p.resampling += 9 * c * c_next + c_next;  // down
    p.resampling += 4 * c_next * c + c;       // up
    p.resampling += 2 * c * c + c;            // fuse
  }
  return p;
}

std::uint64_t param_count(const Genotype& encoder, const Genotype& decoder,
                          const BackboneConfig& backbone) {
  return param_breakdown(encoder, decoder, backbone).total();
}

std::uint64_t param_count(const Genotype& g, const BackboneConfig& backbone) {
  return param_count(g, g, backbone);
}

std::uint64_t search_space_size(const CellSpec& cell, std::size_t n_ops) {
  cell.validate();
  if (n_ops < 2) throw ConfigError("need at least one non-zero candidate op");
  const std::uint64_t ops = n_ops - 1;
  std::uint64_t total = 1;
  for (std::size_t i = 1; i <= cell.n_nodes; ++i) {
    const std::uint64_t preds = cell.n_inputs + i - 1;
    const std::uint64_t pairs = preds * (preds - 1) / 2;
    total = checked_mul(total, checked_mul(pairs, checked_mul(ops, ops)));
  }
  return total;
}

}  // namespace seisflow::nas
