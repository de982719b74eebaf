#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "onestreet/dataset.hpp"
#include "onestreet/errors.hpp"
#include "onestreet/representation.hpp"

namespace onestreet {

// Internal nodes route on x[feature] <= threshold (true branch = left).
// Every node keeps the stats it had as a candidate leaf, so a fitted tree
// can be truncated to any shallower depth without refitting.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  std::vector<double> prediction;
  long sample_count = 0;
  double training_error = 0.0;  // mean evaluation distance at this node
};

struct DecisionTree {
  RepresentationId rep = RepresentationId::kR1;
  int deck_size = 10;
  int bet_steps = 31;
  int max_depth = 0;
  int min_leaf = 1;
  std::vector<TreeNode> nodes;  // preorder, root first

  bool is_leaf(int i) const { return nodes[static_cast<std::size_t>(i)].feature < 0; }
  long node_count() const { return static_cast<long>(nodes.size()); }

  int depth_below(int i) const {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_below(n.left), depth_below(n.right));
  }
  int depth() const { return nodes.empty() ? 0 : depth_below(0); }
};

inline const std::vector<double>& tree_predict(const DecisionTree& t,
                                               const std::vector<double>& x) {
  if (t.nodes.empty()) throw EmptyModel("tree has no nodes");
  if (x.size() != static_cast<std::size_t>(feature_count(t.rep, t.deck_size)))
    throw RepresentationError("query does not conform to " + to_string(t.rep));
  int i = 0;
  while (t.nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& n = t.nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return t.nodes[static_cast<std::size_t>(i)].prediction;
}

namespace detail {

// Fenwick tree over sorted-value positions holding counts and sums; the
// split scan inserts examples in feature order and queries prefix mass at
// a moving reference point.
struct Fenwick {
  int n = 0;
  std::vector<double> cnt, sum;
  void reset(int size) {
    n = size;
    cnt.assign(static_cast<std::size_t>(size) + 1, 0.0);
    sum.assign(static_cast<std::size_t>(size) + 1, 0.0);
  }
  void add(int pos, double value) {
    for (int i = pos + 1; i <= n; i += i & -i) {
      cnt[static_cast<std::size_t>(i)] += 1.0;
      sum[static_cast<std::size_t>(i)] += value;
    }
  }
  // (count, sum) of inserted elements at sorted positions < idx.
  std::pair<double, double> prefix(int idx) const {
    double c = 0.0, s = 0.0;
    for (int i = idx; i > 0; i -= i & -i) {
      c += cnt[static_cast<std::size_t>(i)];
      s += sum[static_cast<std::size_t>(i)];
    }
    return {c, s};
  }
};

struct OutputLayout {
  bool scalar = false;
  int dims = 1;       // flat output length
  int block_len = 1;  // bet grid size for vector outputs
  int n_blocks = 1;
  double norm = 1.0;  // per-example distance = sum|cum diff| / norm
};

inline OutputLayout output_layout(RepresentationId rep, const GameConfig& cfg) {
  OutputLayout l;
  switch (output_kind(rep)) {
    case OutputKind::kScalarBet:
      l.scalar = true;
      l.dims = 1;
      l.norm = cfg.stack;  // evaluation error |dy| / stack
      break;
    case OutputKind::kHandStrategy:
      l.dims = cfg.bet_steps;
      l.block_len = cfg.bet_steps;
      l.n_blocks = 1;
      l.norm = static_cast<double>(cfg.bet_steps - 1);
      break;
    case OutputKind::kFullStrategy:
      l.dims = cfg.deck_size * cfg.bet_steps;
      l.block_len = cfg.bet_steps;
      l.n_blocks = cfg.deck_size;
      l.norm = static_cast<double>((cfg.bet_steps - 1) * cfg.deck_size);
      break;
  }
  return l;
}

struct NodeStats {
  std::vector<double> prediction;
  double error = 0.0;
};

class TreeFitter {
 public:
  TreeFitter(const std::vector<LabeledExample>& train, RepresentationId rep, int max_depth,
             int min_leaf, const GameConfig& cfg)
      : ex_(train),
        rep_(rep),
        layout_(output_layout(rep, cfg)),
        n_features_(feature_count(rep, cfg.deck_size)),
        max_depth_(max_depth),
        min_leaf_(min_leaf) {
    const std::size_t n = ex_.size();
    if (n == 0) throw Error("cannot fit a tree on an empty training set");
    if (min_leaf_ < 1) throw Error("min_leaf must be >= 1");
    for (const auto& e : ex_) {
      if (e.x.size() != static_cast<std::size_t>(n_features_) ||
          e.y.size() != static_cast<std::size_t>(layout_.dims))
        throw RepresentationError("training example does not conform to " + to_string(rep));
    }
    // Within-block cumulative sums; the impurity works on these.
    cum_.resize(n * static_cast<std::size_t>(layout_.dims));
    for (std::size_t s = 0; s < n; ++s) {
      for (int blk = 0; blk < layout_.n_blocks; ++blk) {
        double run = 0.0;
        for (int k = 0; k < layout_.block_len; ++k) {
          const std::size_t idx = static_cast<std::size_t>(blk * layout_.block_len + k);
          run += ex_[s].y[idx];
          cum_[s * layout_.dims + idx] = run;
        }
      }
    }
  }

  DecisionTree fit(const GameConfig& cfg) {
    DecisionTree t;
    t.rep = rep_;
    t.deck_size = cfg.deck_size;
    t.bet_steps = cfg.bet_steps;
    t.max_depth = max_depth_;
    t.min_leaf = min_leaf_;
    std::vector<int> all(ex_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    build(t, all, 0, compute_stats(all));
    return t;
  }

 private:
  double cum_at(int s, int k) const {
    return cum_[static_cast<std::size_t>(s) * layout_.dims + static_cast<std::size_t>(k)];
  }

  NodeStats compute_stats(const std::vector<int>& idx) const {
    NodeStats st;
    const double n = static_cast<double>(idx.size());
    if (layout_.scalar) {
      double mean = 0.0;
      for (const int s : idx) mean += ex_[static_cast<std::size_t>(s)].y[0];
      mean /= n;
      double abs_dev = 0.0;
      for (const int s : idx) abs_dev += std::abs(ex_[static_cast<std::size_t>(s)].y[0] - mean);
      st.prediction.assign(1, mean);
      st.error = abs_dev / (n * layout_.norm);
      return st;
    }
    std::vector<double> mean(static_cast<std::size_t>(layout_.dims), 0.0);
    for (const int s : idx)
      for (int k = 0; k < layout_.dims; ++k)
        mean[static_cast<std::size_t>(k)] += ex_[static_cast<std::size_t>(s)].y[static_cast<std::size_t>(k)];
    for (double& v : mean) v /= n;
    // Representative: the mean renormalized per block.
    for (int blk = 0; blk < layout_.n_blocks; ++blk) {
      double bs = 0.0;
      for (int k = 0; k < layout_.block_len; ++k)
        bs += mean[static_cast<std::size_t>(blk * layout_.block_len + k)];
      if (bs > 1e-12)
        for (int k = 0; k < layout_.block_len; ++k)
          mean[static_cast<std::size_t>(blk * layout_.block_len + k)] /= bs;
    }
    std::vector<double> rep_cum(static_cast<std::size_t>(layout_.dims));
    for (int blk = 0; blk < layout_.n_blocks; ++blk) {
      double run = 0.0;
      for (int k = 0; k < layout_.block_len; ++k) {
        run += mean[static_cast<std::size_t>(blk * layout_.block_len + k)];
        rep_cum[static_cast<std::size_t>(blk * layout_.block_len + k)] = run;
      }
    }
    double abs_dev = 0.0;
    for (const int s : idx)
      for (int k = 0; k < layout_.dims; ++k)
        abs_dev += std::abs(cum_at(s, k) - rep_cum[static_cast<std::size_t>(k)]);
    st.prediction = std::move(mean);
    st.error = abs_dev / (n * layout_.norm);
    return st;
  }

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();
  };

  // Candidate thresholds are midpoints of consecutive distinct sorted
  // feature values; both children must keep at least min_leaf samples.
  void scan_feature_scalar(const std::vector<int>& idx, int f, Split& best) const {
    const std::size_t n = idx.size();
    std::vector<int> order(idx);
    sort_by_feature(order, f);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = ex_[static_cast<std::size_t>(order[i])].y[0];
    double left_sum = 0.0, left_sq = 0.0, total_sum = 0.0, total_sq = 0.0;
    for (const double v : y) {
      total_sum += v;
      total_sq += v * v;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += y[i];
      left_sq += y[i] * y[i];
      const double lo = feat(order[i], f);
      const double hi = feat(order[i + 1], f);
      if (lo == hi) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < static_cast<std::size_t>(min_leaf_) || nr < static_cast<std::size_t>(min_leaf_))
        continue;
      const double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold >= lo && threshold < hi)) continue;
      const double sse_l = left_sq - left_sum * left_sum / static_cast<double>(nl);
      const double rs = total_sum - left_sum;
      const double sse_r = (total_sq - left_sq) - rs * rs / static_cast<double>(nr);
      const double score = sse_l + sse_r;
      if (score < best.score) best = {f, threshold, score};
    }
  }

  // Vector outputs: the split objective is the summed absolute deviation of
  // the block-cumulative sums around each side's renormalized mean, i.e.
  // exactly n times the weighted child EMD impurity. Per coordinate the
  // deviations come from prefix queries against a moving reference point.
  void scan_feature_vector(const std::vector<int>& idx, int f,
                           const std::vector<std::vector<double>>& sorted_vals,
                           const std::vector<std::vector<double>>& sorted_prefix,
                           const std::vector<std::vector<int>>& rank_of,
                           const std::vector<double>& node_cum, std::vector<Fenwick>& fens,
                           Split& best) const {
    const std::size_t n = idx.size();
    const int dims = layout_.dims;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);  // local positions
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double fa = feat(idx[static_cast<std::size_t>(a)], f);
      const double fb = feat(idx[static_cast<std::size_t>(b)], f);
      if (fa != fb) return fa < fb;
      return idx[static_cast<std::size_t>(a)] < idx[static_cast<std::size_t>(b)];
    });
    for (int k = 0; k < dims; ++k) fens[static_cast<std::size_t>(k)].reset(static_cast<int>(n));
    std::vector<double> left_cum(static_cast<std::size_t>(dims), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const int local = order[i];
      const int s = idx[static_cast<std::size_t>(local)];
      for (int k = 0; k < dims; ++k)
        fens[static_cast<std::size_t>(k)].add(rank_of[static_cast<std::size_t>(k)][static_cast<std::size_t>(local)],
                                              cum_at(s, k));
      for (int k = 0; k < dims; ++k) left_cum[static_cast<std::size_t>(k)] += cum_at(s, k);
      const double lo = feat(s, f);
      const double hi = feat(idx[static_cast<std::size_t>(order[i + 1])], f);
      if (lo == hi) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < static_cast<std::size_t>(min_leaf_) || nr < static_cast<std::size_t>(min_leaf_))
        continue;
      const double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold >= lo && threshold < hi)) continue;
      double score = 0.0;
      for (int blk = 0; blk < layout_.n_blocks && score < best.score; ++blk) {
        const std::size_t end_k = static_cast<std::size_t>((blk + 1) * layout_.block_len - 1);
        const double lbs = left_cum[end_k];                  // left total block mass
        const double rbs = node_cum[end_k] - left_cum[end_k];
        for (int kk = 0; kk < layout_.block_len; ++kk) {
          const std::size_t k = static_cast<std::size_t>(blk * layout_.block_len + kk);
          const auto& vals = sorted_vals[k];
          const auto& pref = sorted_prefix[k];
          const double sl = left_cum[k];
          const double sr = node_cum[k] - sl;
          // Reference points: cumulative of each side's renormalized mean.
          const double zl = lbs > 0.0 ? sl / lbs : sl / static_cast<double>(nl);
          const double zr = rbs > 0.0 ? sr / rbs : sr / static_cast<double>(nr);
          const auto& fen = fens[k];
          {
            const int pos = static_cast<int>(std::upper_bound(vals.begin(), vals.end(), zl) -
                                             vals.begin());
            const auto [c, s2] = fen.prefix(pos);
            score += sl - 2.0 * s2 + zl * (2.0 * c - static_cast<double>(nl));
          }
          {
            const int pos = static_cast<int>(std::upper_bound(vals.begin(), vals.end(), zr) -
                                             vals.begin());
            const auto [cl, sl2] = fen.prefix(pos);
            const double c_all = static_cast<double>(pos);
            const double s_all = pref[static_cast<std::size_t>(pos)];
            const double c = c_all - cl;
            const double s2 = s_all - sl2;
            score += sr - 2.0 * s2 + zr * (2.0 * c - static_cast<double>(nr));
          }
        }
      }
      if (score < best.score) best = {f, threshold, score};
    }
  }

  double feat(int s, int f) const {
    return ex_[static_cast<std::size_t>(s)].x[static_cast<std::size_t>(f)];
  }

  void sort_by_feature(std::vector<int>& order, int f) const {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double fa = feat(a, f);
      const double fb = feat(b, f);
      if (fa != fb) return fa < fb;
      return a < b;
    });
  }

  void build(DecisionTree& t, const std::vector<int>& idx, int depth, NodeStats stats) {
    const int me = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    t.nodes[static_cast<std::size_t>(me)].prediction = stats.prediction;
    t.nodes[static_cast<std::size_t>(me)].sample_count = static_cast<long>(idx.size());
    t.nodes[static_cast<std::size_t>(me)].training_error = stats.error;
    if (depth >= max_depth_ || idx.size() < 2 * static_cast<std::size_t>(min_leaf_) ||
        stats.error <= 1e-12)
      return;

    Split best;
    if (layout_.scalar) {
      for (int f = 0; f < n_features_; ++f) scan_feature_scalar(idx, f, best);
    } else {
      const std::size_t n = idx.size();
      const int dims = layout_.dims;
      // Node-level sorted views of each output coordinate, shared by all
      // feature scans.
      std::vector<std::vector<double>> sorted_vals(static_cast<std::size_t>(dims));
      std::vector<std::vector<double>> sorted_prefix(static_cast<std::size_t>(dims));
      std::vector<std::vector<int>> rank_of(static_cast<std::size_t>(dims));
      std::vector<double> node_cum(static_cast<std::size_t>(dims), 0.0);
      std::vector<int> perm(n);
      for (int k = 0; k < dims; ++k) {
        auto& vals = sorted_vals[static_cast<std::size_t>(k)];
        vals.resize(n);
        for (std::size_t i = 0; i < n; ++i) vals[i] = cum_at(idx[i], k);
        for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
        std::sort(perm.begin(), perm.end(),
                  [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
        auto& rk = rank_of[static_cast<std::size_t>(k)];
        rk.resize(n);
        std::vector<double> sv(n);
        auto& pref = sorted_prefix[static_cast<std::size_t>(k)];
        pref.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          sv[i] = vals[static_cast<std::size_t>(perm[i])];
          rk[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
          pref[i + 1] = pref[i] + sv[i];
          node_cum[static_cast<std::size_t>(k)] += sv[i];
        }
        vals = std::move(sv);
      }
      std::vector<Fenwick> fens(static_cast<std::size_t>(dims));
      for (int f = 0; f < n_features_; ++f)
        scan_feature_vector(idx, f, sorted_vals, sorted_prefix, rank_of, node_cum, fens, best);
    }
    if (best.feature < 0) return;

    std::vector<int> left, right;
    left.reserve(idx.size());
    right.reserve(idx.size());
    for (const int s : idx)
      (feat(s, best.feature) <= best.threshold ? left : right).push_back(s);
    NodeStats ls = compute_stats(left);
    NodeStats rs = compute_stats(right);
    // Refuse splits that would raise the training error; with that rule the
    // error is non-increasing in depth by construction.
    const double child_error = (static_cast<double>(left.size()) * ls.error +
                                static_cast<double>(right.size()) * rs.error) /
                               static_cast<double>(idx.size());
    if (child_error > stats.error + 1e-12) return;

    t.nodes[static_cast<std::size_t>(me)].feature = best.feature;
    t.nodes[static_cast<std::size_t>(me)].threshold = best.threshold;
    t.nodes[static_cast<std::size_t>(me)].left = static_cast<int>(t.nodes.size());
    build(t, left, depth + 1, std::move(ls));
    t.nodes[static_cast<std::size_t>(me)].right = static_cast<int>(t.nodes.size());
    build(t, right, depth + 1, std::move(rs));
  }

  const std::vector<LabeledExample>& ex_;
  RepresentationId rep_;
  OutputLayout layout_;
  int n_features_;
  int max_depth_;
  int min_leaf_;
  std::vector<double> cum_;
};

}  // namespace detail

// Greedy top-down regression tree. Scalar outputs split on within-node
// variance, vector outputs on the mean block-EMD to the node representative
// (the renormalized componentwise mean); ties break toward the lowest
// feature index, then the lowest threshold.
inline DecisionTree tree_fit(const std::vector<LabeledExample>& train, RepresentationId rep,
                             int max_depth, int min_leaf, const GameConfig& cfg) {
  detail::TreeFitter fitter(train, rep, max_depth, min_leaf, cfg);
  return fitter.fit(cfg);
}

// Depth-limited copy; nodes at the cap fall back to their stored stats.
inline DecisionTree truncate_tree(const DecisionTree& t, int depth) {
  DecisionTree out;
  out.rep = t.rep;
  out.deck_size = t.deck_size;
  out.bet_steps = t.bet_steps;
  out.max_depth = depth;
  out.min_leaf = t.min_leaf;
  struct Rec {
    const DecisionTree& src;
    DecisionTree& dst;
    int cap;
    int copy(int i, int d) {
      // src node fields are copied by value; child indices are re-assigned
      // through fresh lookups because the recursion reallocates dst.nodes.
      const TreeNode n = src.nodes[static_cast<std::size_t>(i)];
      const int me = static_cast<int>(dst.nodes.size());
      dst.nodes.push_back(n);
      if (n.feature < 0 || d >= cap) {
        auto& mine = dst.nodes[static_cast<std::size_t>(me)];
        mine.feature = -1;
        mine.threshold = 0.0;
        mine.left = mine.right = -1;
        return me;
      }
      const int l = copy(n.left, d + 1);
      dst.nodes[static_cast<std::size_t>(me)].left = l;
      const int r = copy(n.right, d + 1);
      dst.nodes[static_cast<std::size_t>(me)].right = r;
      return me;
    }
  } rec{t, out, depth};
  if (!t.nodes.empty()) rec.copy(0, 0);
  return out;
}

// --- text serialization ----------------------------------------------------
//
// Nested, indentation-structured text: a header line, then one line per
// node in preorder (true branch first), two spaces per level. Leaf lines
// carry the prediction; internal lines the split.

inline std::string tree_to_text(const DecisionTree& t) {
  std::ostringstream out;
  out << "onestreet.tree version=1 rep=" << to_string(t.rep) << " deck_size=" << t.deck_size
      << " bet_steps=" << t.bet_steps << " max_depth=" << t.max_depth
      << " min_leaf=" << t.min_leaf << "\n";
  char buf[64];
  struct Rec {
    const DecisionTree& t;
    std::ostringstream& out;
    char* buf;
    void walk(int i, int depth) {
      const auto& n = t.nodes[static_cast<std::size_t>(i)];
      for (int k = 0; k < depth; ++k) out << "  ";
      if (n.feature >= 0) {
        std::snprintf(buf, 64, "%.17g", n.threshold);
        out << "node feature=" << n.feature << " threshold=" << buf << " n=" << n.sample_count
            << " error=" << n.training_error << "\n";
        walk(n.left, depth + 1);
        walk(n.right, depth + 1);
      } else {
        out << "leaf n=" << n.sample_count << " error=" << n.training_error << " predict=";
        for (std::size_t k = 0; k < n.prediction.size(); ++k) {
          std::snprintf(buf, 64, "%.17g", n.prediction[k]);
          out << (k ? "," : "") << buf;
        }
        out << "\n";
      }
    }
  } rec{t, out, buf};
  if (!t.nodes.empty()) rec.walk(0, 0);
  return out.str();
}

inline void save_tree(const DecisionTree& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write tree file: " + path);
  out << tree_to_text(t);
}

namespace detail {

inline bool take_field(const std::string& line, const std::string& key, std::string& value) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos) return false;
  const auto start = pos + key.size() + 1;
  const auto end = line.find(' ', start);
  value = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
  return true;
}

}  // namespace detail

inline DecisionTree tree_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("onestreet.tree", 0) != 0)
    throw Error("not a tree file");
  DecisionTree t;
  std::string v;
  if (!detail::take_field(line, "rep", v)) throw Error("tree header missing rep");
  t.rep = parse_representation(v);
  if (detail::take_field(line, "deck_size", v)) t.deck_size = std::stoi(v);
  if (detail::take_field(line, "bet_steps", v)) t.bet_steps = std::stoi(v);
  if (detail::take_field(line, "max_depth", v)) t.max_depth = std::stoi(v);
  if (detail::take_field(line, "min_leaf", v)) t.min_leaf = std::stoi(v);

  struct Parsed {
    int depth = 0;
    std::string body;
  };
  std::vector<Parsed> lines;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t spaces = 0;
    while (spaces < line.size() && line[spaces] == ' ') ++spaces;
    lines.push_back({static_cast<int>(spaces / 2), line.substr(spaces)});
  }
  if (lines.empty()) throw Error("tree file has no nodes");

  std::size_t cursor = 0;
  struct Rec {
    DecisionTree& t;
    std::vector<Parsed>& lines;
    std::size_t& cursor;
    int parse(int depth) {
      if (cursor >= lines.size() || lines[cursor].depth != depth)
        throw Error("malformed tree file near line " + std::to_string(cursor + 2));
      const std::string body = lines[cursor].body;
      ++cursor;
      const int me = static_cast<int>(t.nodes.size());
      t.nodes.emplace_back();
      std::string v;
      if (body.rfind("node ", 0) == 0) {
        auto& n = t.nodes[static_cast<std::size_t>(me)];
        if (!detail::take_field(body, "feature", v)) throw Error("node line missing feature");
        n.feature = std::stoi(v);
        if (!detail::take_field(body, "threshold", v)) throw Error("node line missing threshold");
        n.threshold = std::stod(v);
        if (detail::take_field(body, "n", v)) n.sample_count = std::stol(v);
        if (detail::take_field(body, "error", v)) n.training_error = std::stod(v);
        const int l = parse(depth + 1);
        const int r = parse(depth + 1);
        t.nodes[static_cast<std::size_t>(me)].left = l;
        t.nodes[static_cast<std::size_t>(me)].right = r;
      } else if (body.rfind("leaf ", 0) == 0) {
        auto& n = t.nodes[static_cast<std::size_t>(me)];
        if (detail::take_field(body, "n", v)) n.sample_count = std::stol(v);
        if (detail::take_field(body, "error", v)) n.training_error = std::stod(v);
        if (!detail::take_field(body, "predict", v)) throw Error("leaf line missing predict");
        std::stringstream vs(v);
        std::string item;
        while (std::getline(vs, item, ',')) n.prediction.push_back(std::stod(item));
      } else {
        throw Error("unexpected tree line: " + body);
      }
      return me;
    }
  } rec{t, lines, cursor};
  rec.parse(0);
  if (cursor != lines.size()) throw Error("trailing content in tree file");
  return t;
}

inline DecisionTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tree file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tree_from_text(ss.str());
}

}  // namespace onestreet
