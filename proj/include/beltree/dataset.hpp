#pragma once

#include <vector>

#include "beltree/valuation.hpp"

namespace beltree {

// Set-valued records: each record is one sampled focal set of a joint
// distribution, as a configuration set on the sampled scope.
struct SampleDataset {
  Scope scope;
  std::vector<Bitmask> records;

  int size() const { return static_cast<int>(records.size()); }
};

// Projects every record onto h and takes relative frequencies. A positive
// smoothing weight adds that much mass on the full frame (then rescales), so
// estimated commonalities stay bounded away from zero.
BeliefValuation estimate_marginal(const SampleDataset& data, const Scope& h,
                                  double smoothing = 0.0);

}  // namespace beltree
