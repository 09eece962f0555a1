// Transfinite construction: for every CNF ordinal alpha an operator whose
// ordinal order is exactly alpha, built on freshly allocated variable blocks,
// plus a probe-based consistency check of the declared order.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ordo/ordinal.hpp"
#include "ordo/stream.hpp"

namespace ordo {

// Position of a construction node in the build tree: limit branches append
// their branch index (>= 1), the successor step appends the marker 0 for its
// child. Every variable allocated inside a subtree carries the subtree's
// address as a path prefix, which makes the branch blocks disjoint by
// construction.
struct BuildAddress {
  std::vector<std::uint64_t> path;
  auto operator<=>(const BuildAddress&) const = default;
  std::string to_string() const;
};

// Injective address -> variable-index map with a computable inverse.
// Indices are handed out from the reserved allocator block.
class BlockAllocator {
 public:
  Var var_for(const BuildAddress& a);
  std::optional<BuildAddress> address_of(Var v) const;
  std::vector<Var> allocated() const;

 private:
  mutable std::mutex mu_;
  std::map<BuildAddress, Var> fwd_;
  std::map<Var, BuildAddress> rev_;
};

struct BuiltOperator {
  OpPtr op;
  std::shared_ptr<BlockAllocator> allocator;
  Ordinal alpha;
};

// D_0 = id; D_{beta+1} = D_beta ∘ d/dy with y fresh; D_alpha for limit alpha
// the limit family of D_{alpha[n]} on disjoint blocks, n >= 1 along the
// canonical fundamental sequence.
BuiltOperator build_D(const Ordinal& alpha);
OpPtr build_D(const Ordinal& alpha,
              const std::shared_ptr<BlockAllocator>& alloc,
              const BuildAddress& at);

struct ProbeReport {
  bool consistent = true;
  std::string detail;
};

// Checks, on sampled variables of D's support: every commutator order is
// below alpha; the probed orders reach alpha-1 (successor alpha) or are
// cofinal in alpha up to the budget (limit alpha); and D annihilates
// constants when alpha > 0.
ProbeReport verify_order_probes(const OpPtr& D, const Ordinal& alpha,
                                std::uint64_t budget);

struct BuildSummary {
  std::uint64_t depth = 0;  // over branches materialized within the budget
  std::uint64_t allocated = 0;
  Var lo = 0, hi = 0;  // allocated index range
};

BuildSummary summarize(const BuiltOperator& b, std::uint64_t budget);

}  // namespace ordo
