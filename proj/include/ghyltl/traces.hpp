#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ghyltl {

/// A finite set of proposition names, kept sorted and duplicate-free.
class PropSet {
public:
  PropSet() = default;
  PropSet(std::initializer_list<std::string> props);
  explicit PropSet(std::vector<std::string> props);

  bool contains(std::string_view p) const;
  bool empty() const noexcept { return props_.empty(); }
  std::size_t size() const noexcept { return props_.size(); }
  const std::vector<std::string>& items() const noexcept { return props_; }
  auto begin() const noexcept { return props_.begin(); }
  auto end() const noexcept { return props_.end(); }

  void insert(std::string p);
  bool subset_of(const PropSet& other) const;
  bool disjoint_from(const PropSet& other) const;
  PropSet united(const PropSet& other) const;

  std::string to_string() const;

  friend bool operator==(const PropSet&, const PropSet&) = default;
  friend auto operator<=>(const PropSet&, const PropSet&) = default;

private:
  std::vector<std::string> props_;
};

/// An ultimately periodic trace prefix · loop^ω over the alphabet 2^ap.
class LassoTrace {
public:
  /// Throws DomainError if the loop is empty or a letter leaves `ap`.
  LassoTrace(PropSet ap, std::vector<PropSet> prefix, std::vector<PropSet> loop);

  const PropSet& ap() const noexcept { return ap_; }
  const std::vector<PropSet>& prefix() const noexcept { return prefix_; }
  const std::vector<PropSet>& loop() const noexcept { return loop_; }
  std::size_t prefix_length() const noexcept { return prefix_.size(); }
  std::size_t loop_length() const noexcept { return loop_.size(); }

  /// σ(i), read through the lasso.
  const PropSet& letter(std::size_t i) const;
  bool holds(std::string_view prop, std::size_t i) const { return letter(i).contains(prop); }

  /// Human-readable form such as `{p}{}({q})^w`.
  std::string to_string() const;

  friend bool operator==(const LassoTrace&, const LassoTrace&) = default;
  friend auto operator<=>(const LassoTrace& a, const LassoTrace& b) {
    if (auto c = a.prefix_ <=> b.prefix_; c != 0) return c;
    if (auto c = a.loop_ <=> b.loop_; c != 0) return c;
    return a.ap_ <=> b.ap_;
  }

private:
  PropSet ap_;
  std::vector<PropSet> prefix_;
  std::vector<PropSet> loop_;
};

using TracePtr = std::shared_ptr<const LassoTrace>;

/// A trace together with a position (0-based).
struct PointedTrace {
  TracePtr trace;
  std::size_t pos = 0;

  bool initial() const noexcept { return pos == 0; }
  friend bool operator==(const PointedTrace& a, const PointedTrace& b) {
    return a.pos == b.pos && (a.trace == b.trace || (a.trace && b.trace && *a.trace == *b.trace));
  }
};

/// T = (V, E, I, ℓ). Vertices are addressed by index; ids are kept for I/O.
class TransitionSystem {
public:
  /// Throws DomainError when V is empty, a vertex lacks an outgoing edge, an
  /// edge or initial vertex is out of range, or a label leaves `ap`.
  TransitionSystem(PropSet ap, std::vector<std::string> ids, std::vector<PropSet> labels,
                   std::vector<std::pair<std::size_t, std::size_t>> edges,
                   std::vector<std::size_t> initial);

  const PropSet& ap() const noexcept { return ap_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const PropSet& label(std::size_t v) const { return labels_.at(v); }
  const std::vector<PropSet>& labels() const noexcept { return labels_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& initial() const noexcept { return initial_; }
  const std::vector<std::size_t>& successors(std::size_t v) const { return succ_.at(v); }

  /// Does some run of the system have this trace as its label sequence?
  bool accepts(const LassoTrace& trace) const;

  /// Tr(T) is finite and listed exactly (as canonical lassos); nullopt when
  /// Tr(T) is infinite.
  std::optional<std::vector<LassoTrace>> finite_traces() const;

private:
  PropSet ap_;
  std::vector<std::string> ids_;
  std::vector<PropSet> labels_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::size_t> initial_;
  std::vector<std::vector<std::size_t>> succ_;
};

const PropSet& letter(const LassoTrace& t, std::size_t i);

/// Unique representation of the ω-word: primitive loop, prefix rolled into
/// the loop as far as possible.
LassoTrace canonicalize(const LassoTrace& t);

/// Canonicalizes every trace and drops duplicates; keeps first-seen order.
std::vector<LassoTrace> dedup_canonical(const std::vector<LassoTrace>& traces);

/// Every (prefix, loop) representation with |prefix| <= max_prefix and
/// 1 <= |loop| <= max_loop, ordered by prefix length, loop length, then
/// letters (letters ordered as bitmasks over the sorted alphabet).
std::vector<LassoTrace> enumerate_lassos(const PropSet& ap, std::size_t max_prefix,
                                         std::size_t max_loop);

/// ℓ-images of lasso runs v0..v(a-1)(va..v(a+b-1))^ω with a <= max_prefix and
/// 1 <= b <= max_loop, deduplicated by representation. An empty initial set
/// yields no traces and appends a warning.
std::vector<LassoTrace> enumerate_ts_traces(const TransitionSystem& ts, std::size_t max_prefix,
                                            std::size_t max_loop,
                                            std::vector<std::string>* warnings = nullptr);

/// Letterwise union of two traces over disjoint alphabets.
LassoTrace pointwise_union(const LassoTrace& a, const LassoTrace& b);

// Builders for the trace shapes used throughout the encodings.

/// ∅^n {marker} ∅^ω over the alphabet {marker}.
LassoTrace marker_trace(const std::string& marker, std::size_t n);

/// The set S ⊆ ℕ (finite) as a trace over {marker}: marker at exactly S.
LassoTrace set_trace(const std::string& marker, const std::vector<std::size_t>& members);

/// {prop}^m ∅^m repeated forever (a periodic block trace with period m).
LassoTrace periodic_trace(const std::string& prop, std::size_t period);

/// Block trace {prop}^b0 ∅^b1 {prop}^b2 ... with the given block lengths
/// repeated forever; the number of blocks must be even.
LassoTrace block_trace(const std::string& prop, const std::vector<std::size_t>& blocks);

std::size_t lcm_size(std::size_t a, std::size_t b);

} // namespace ghyltl
